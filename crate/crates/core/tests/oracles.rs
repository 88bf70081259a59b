//! Library results against independently written reference computations.

mod common;

use std::f64::consts::PI;

use common::{c, conjugate, random_density, random_hermitian, random_state, random_unitary2, rng};
use nonmark_core::amplitude::{closed_form_trajectory, lorentzian_closed_form};
use nonmark_core::dynamics::{evolve_single, evolve_two_qubit, kraus_operators};
use nonmark_core::linalg::{hermitian_eigenvalues, kron, trace_distance, wootters_concurrence};
use nonmark_core::measure::{lower_bound_two, nonmarkovianity_single, truncation_horizon, MeasureOptions};
use nonmark_core::reservoir::correlation;
use nonmark_core::{CMatrix, Complex64 as C64, DensityMatrix, SolverConfig, SolverMethod, SpectralModel};
use rand::Rng;

// ---------------------------------------------------------------------------
// Eigenvalues: characteristic polynomial by Faddeev-LeVerrier, roots by
// bisection between sign changes.

fn char_poly(m: &CMatrix) -> Vec<f64> {
    let n = m.dim();
    // coeffs[k] multiplies lambda^(n - k)
    let mut coeffs = vec![1.0];
    let mut mk = CMatrix::zeros(n);
    let mut prev = CMatrix::identity(n);
    for k in 1..=n {
        mk = m * &prev;
        let ck = -mk.trace().re / k as f64;
        coeffs.push(ck);
        prev = &mk + &CMatrix::identity(n).scale(c(ck, 0.0));
    }
    let _ = mk;
    coeffs
}

fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().fold(0.0, |acc, &a| acc * x + a)
}

fn roots_by_bisection(coeffs: &[f64], bound: f64) -> Vec<f64> {
    let steps = 200_000;
    let h = 2.0 * bound / steps as f64;
    let mut roots = Vec::new();
    let mut x0 = -bound;
    let mut p0 = poly_eval(coeffs, x0);
    for i in 1..=steps {
        let x1 = -bound + i as f64 * h;
        let p1 = poly_eval(coeffs, x1);
        if p0 == 0.0 {
            roots.push(x0);
        } else if p0 * p1 < 0.0 {
            let (mut lo, mut hi) = (x0, x1);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if poly_eval(coeffs, lo) * poly_eval(coeffs, mid) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        x0 = x1;
        p0 = p1;
    }
    roots
}

#[test]
fn eigenvalues_match_characteristic_polynomial_roots() {
    let mut r = rng(11);
    let mut checked = 0;
    for _ in 0..200 {
        let h = random_hermitian(&mut r, 4);
        let bound = (0..4)
            .map(|i| (0..4).map(|j| h[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
            + 1.0;
        let roots = roots_by_bisection(&char_poly(&h), bound);
        if roots.len() != 4 {
            // Nearly degenerate pair inside one scan cell; skip.
            continue;
        }
        let eig = hermitian_eigenvalues(&h).unwrap();
        for (a, b) in eig.iter().zip(&roots) {
            assert!((a - b).abs() < 1e-9, "{eig:?} vs {roots:?}");
        }
        checked += 1;
    }
    assert!(checked > 180);
}

#[test]
fn two_by_two_eigenvalues_match_quadratic_formula() {
    let mut r = rng(12);
    for _ in 0..1000 {
        let h = random_hermitian(&mut r, 2);
        let (a, d, off) = (h[(0, 0)].re, h[(1, 1)].re, h[(0, 1)].norm());
        let mid = 0.5 * (a + d);
        let rad = (0.25 * (a - d) * (a - d) + off * off).sqrt();
        let eig = hermitian_eigenvalues(&h).unwrap();
        assert!((eig[0] - (mid - rad)).abs() < 1e-13);
        assert!((eig[1] - (mid + rad)).abs() < 1e-13);
    }
}

#[test]
fn kron_mixed_product_rule() {
    let mut r = rng(13);
    for _ in 0..100 {
        let m: Vec<CMatrix> = (0..4).map(|_| random_hermitian(&mut r, 2)).collect();
        let lhs = &kron(&m[0], &m[1]) * &kron(&m[2], &m[3]);
        let rhs = kron(&(&m[0] * &m[2]), &(&m[1] * &m[3]));
        for (x, y) in lhs.as_slice().iter().zip(rhs.as_slice()) {
            assert!((x - y).norm() < 1e-13);
        }
    }
}

// ---------------------------------------------------------------------------
// Concurrence: X states have the closed form
// C = 2 max(0, |rho_14| - sqrt(rho_22 rho_33), |rho_23| - sqrt(rho_11 rho_44)),
// and local unitaries leave C unchanged while filling in every entry.

#[test]
fn wootters_matches_x_state_formula_under_local_unitaries() {
    let mut r = rng(14);
    let mut entangled = 0;
    for _ in 0..2000 {
        let w: Vec<f64> = (0..4).map(|_| r.gen::<f64>() + 0.01).collect();
        let s: f64 = w.iter().sum();
        let p: Vec<f64> = w.iter().map(|x| x / s).collect();
        let z = C64::from_polar((p[0] * p[3]).sqrt() * r.gen::<f64>() * 0.999, 6.3 * r.gen::<f64>());
        let y = C64::from_polar((p[1] * p[2]).sqrt() * r.gen::<f64>() * 0.999, 6.3 * r.gen::<f64>());
        let mut m = CMatrix::diag(&p);
        m[(0, 3)] = z;
        m[(3, 0)] = z.conj();
        m[(1, 2)] = y;
        m[(2, 1)] = y.conj();
        let expected = 2.0 * f64::max(0.0, f64::max(z.norm() - (p[1] * p[2]).sqrt(), y.norm() - (p[0] * p[3]).sqrt()));
        if expected > 0.0 {
            entangled += 1;
        }
        let u = kron(&random_unitary2(&mut r), &random_unitary2(&mut r));
        let rho = DensityMatrix::new(conjugate(&u, &m)).unwrap();
        let got = wootters_concurrence(&rho).unwrap();
        assert!((got - expected).abs() < 1e-8, "{got} vs {expected}");
    }
    assert!(entangled > 100);
}

#[test]
fn random_full_rank_states_have_concurrence_in_range() {
    let mut r = rng(15);
    for _ in 0..1000 {
        let rho = random_density(&mut r, 4);
        let cval = wootters_concurrence(&rho).unwrap();
        assert!((0.0..=1.0).contains(&cval));
    }
}

// ---------------------------------------------------------------------------
// Channel: explicit Kraus sums.

#[test]
fn single_qubit_channel_equals_kraus_sum() {
    let mut r = rng(16);
    for _ in 0..2000 {
        let s = random_state(&mut r);
        let b = common::random_amplitude(&mut r);
        let rho0 = s.density_matrix();
        let ops = kraus_operators(b).unwrap();
        let mut sum = CMatrix::zeros(2);
        for k in &ops {
            sum = &sum + &(&(k * rho0.matrix()) * &k.dagger());
        }
        let got = evolve_single(&s, b).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((got[(i, j)] - sum[(i, j)]).norm() < 1e-14);
            }
        }
    }
}

#[test]
fn plus_plus_input_matches_kraus_pair_tensor() {
    let plus = nonmark_core::QubitInitialState::plus();
    for k in 0..=50 {
        let b = c(k as f64 / 50.0, 0.0);
        let ops = kraus_operators(b).unwrap();
        let rho0 = kron(plus.density_matrix().matrix(), plus.density_matrix().matrix());
        let mut sum = CMatrix::zeros(4);
        for a in &ops {
            for d in &ops {
                let k2 = kron(a, d);
                sum = &sum + &(&(&k2 * &rho0) * &k2.dagger());
            }
        }
        let got = evolve_two_qubit(&plus, &plus, b).unwrap();
        for (x, y) in got.matrix().as_slice().iter().zip(sum.as_slice()) {
            assert!((x - y).norm() < 1e-14);
        }
    }
}

#[test]
fn trace_distance_is_half_the_trace_norm() {
    let mut r = rng(17);
    for _ in 0..200 {
        let a = random_density(&mut r, 4);
        let b = random_density(&mut r, 4);
        let diff = a.matrix() - b.matrix();
        let roots = roots_by_bisection(&char_poly(&diff), 3.0);
        if roots.len() != 4 {
            continue;
        }
        let expected = 0.5 * roots.iter().map(|x| x.abs()).sum::<f64>();
        assert!((trace_distance(&a, &b).unwrap() - expected).abs() < 1e-9);
    }
}

// ---------------------------------------------------------------------------
// Correlation functions.

fn gauss_legendre_8() -> ([f64; 8], [f64; 8]) {
    (
        [
            -0.960_289_856_497_536_3,
            -0.796_666_477_413_626_7,
            -0.525_532_409_916_329,
            -0.183_434_642_495_649_8,
            0.183_434_642_495_649_8,
            0.525_532_409_916_329,
            0.796_666_477_413_626_7,
            0.960_289_856_497_536_3,
        ],
        [
            0.101_228_536_290_376_26,
            0.222_381_034_453_374_47,
            0.313_706_645_877_887_3,
            0.362_683_783_378_362,
            0.362_683_783_378_362,
            0.313_706_645_877_887_3,
            0.222_381_034_453_374_47,
            0.101_228_536_290_376_26,
        ],
    )
}

/// `f(t) = 2 integral_0^inf h(d) cos(d t) dd` for the resonant Lorentzian
/// with `h(d) = gamma0 width^2 / (2 pi (d^2 + width^2))`: composite
/// Gauss-Legendre up to `L = 1000 max(width, 1 / t)`, integration by parts
/// beyond.
fn lorentzian_by_quadrature(gamma0: f64, width: f64, t: f64) -> f64 {
    let h = |d: f64| gamma0 * width * width / (2.0 * PI * (d * d + width * width));
    let dh = |d: f64| -2.0 * d * h(d) / (d * d + width * width);
    let ddh = |d: f64| {
        let s = d * d + width * width;
        h(d) * (6.0 * d * d - 2.0 * width * width) / (s * s)
    };
    let l = if t > 0.0 { 1000.0 * width.max(1.0 / t) } else { 1000.0 * width };
    let mut panel = 0.25 * width;
    if t > 0.0 {
        panel = panel.min(0.5 * PI / t);
    }
    let panels = (l / panel).ceil() as usize;
    let w = l / panels as f64;
    let (x, wt) = gauss_legendre_8();
    let mut sum = 0.0;
    for p in 0..panels {
        let a = p as f64 * w;
        let mid = a + 0.5 * w;
        for k in 0..8 {
            let d = mid + 0.5 * w * x[k];
            sum += 0.5 * w * wt[k] * h(d) * (d * t).cos();
        }
    }
    let tail = if t == 0.0 {
        gamma0 * width / (2.0 * PI) * (0.5 * PI - (l / width).atan())
    } else {
        let (s, co) = (l * t).sin_cos();
        -h(l) * s / t - dh(l) * co / (t * t) + ddh(l) * s / (t * t * t)
    };
    2.0 * (sum + tail)
}

#[test]
fn lorentzian_correlation_matches_spectral_quadrature() {
    for (gamma0, width) in [(1.0, 0.5), (1.0, 0.1), (1.0, 10.0), (0.3, 2.0)] {
        let dt = 0.01 / width;
        let f = correlation(&SpectralModel::lorentzian(gamma0, width), dt, 1001).unwrap();
        for k in [0usize, 1, 10, 50, 100, 200, 500, 1000] {
            let t = k as f64 * dt;
            let reference = lorentzian_by_quadrature(gamma0, width, t);
            let got = f.values()[k];
            let rel = (got - c(reference, 0.0)).norm() / reference.abs();
            assert!(rel < 1e-6, "gamma0={gamma0} width={width} t={t}: {got} vs {reference} ({rel})");
        }
    }
    assert!((lorentzian_by_quadrature(1.0, 0.5, 0.0) - 0.25).abs() < 1e-9);
}

fn gamma_fn(x: f64) -> f64 {
    // Only integers and half-integers are needed here.
    if (x - 0.5).abs() < 1e-15 {
        return PI.sqrt();
    }
    if (x - 1.0).abs() < 1e-15 {
        return 1.0;
    }
    (x - 1.0) * gamma_fn(x - 1.0)
}

#[test]
fn ohmic_correlation_matches_analytic_transform() {
    for (coupling, exponent, cutoff, w0) in
        [(0.1, 1.0, 1.0, 2.0), (0.05, 0.5, 2.0, 1.0), (0.2, 3.0, 0.5, 1.5)]
    {
        let model = SpectralModel::OhmicFamily { coupling, exponent, cutoff, qubit_frequency: w0 };
        let dt = 0.05;
        let f = correlation(&model, dt, 101).unwrap();
        for (k, got) in f.values().iter().enumerate() {
            let t = k as f64 * dt;
            let amp = coupling * cutoff.powf(1.0 - exponent) * gamma_fn(exponent + 1.0);
            let expected = C64::from_polar(1.0, w0 * t) * amp / c(1.0 / cutoff, t).powf(exponent + 1.0);
            assert!((got - expected).norm() < 1e-8 * expected.norm().max(1e-3), "s={exponent} t={t}: {got} vs {expected}");
        }
    }
}

#[test]
fn tabulated_lorentzian_matches_closed_form_correlation() {
    let (gamma0, width, w0) = (1.0, 1.0, 250.0);
    let model = SpectralModel::lorentzian(gamma0, width);
    let points: Vec<(f64, f64)> =
        (-40_000..=40_000).map(|i| w0 + i as f64 * 0.005).map(|w| (w, model.density(w0 - w))).collect();
    let table = SpectralModel::Tabulated { points, qubit_frequency: w0 };
    let dt = 0.1;
    let tab = correlation(&table, dt, 31).unwrap();
    let exact = correlation(&model, dt, 31).unwrap();
    for (a, b) in tab.values().iter().zip(exact.values()) {
        // The table stops at |w| = 200, which drops about width / (pi 200) of the weight.
        assert!((a - b).norm() < 2e-3, "{a} vs {b}");
    }
}

// ---------------------------------------------------------------------------
// Measures against term-by-term sums over the analytic maxima |b| = q^n.

fn analytic_maxima(gamma0: f64, width: f64, count: usize) -> Vec<f64> {
    let kappa = (2.0 * gamma0 * width - width * width).sqrt();
    let q = (-PI * width / kappa).exp();
    (1..=count).map(|n| q.powi(n as i32)).collect()
}

#[test]
fn first_maximum_by_dense_sampling() {
    let kappa = 0.19f64.sqrt();
    let t_star = 2.0 * PI / kappa;
    let dt = 1e-5;
    let (mut best_t, mut best) = (0.0, 0.0);
    let mut k = 0;
    loop {
        let t = 13.0 + k as f64 * dt;
        if t > 16.0 {
            break;
        }
        let v = lorentzian_closed_form(1.0, 0.1, t).unwrap().norm();
        if v > best {
            best = v;
            best_t = t;
        }
        k += 1;
    }
    assert!((best_t - t_star).abs() < 2e-5);
    assert!((best - 0.486_396_675).abs() < 1e-9);
}

#[test]
fn two_qubit_bound_matches_term_by_term_sum() {
    let g = |x: f64| x * (2.0 - 2.0 * x * x + x.powi(4)).sqrt();
    let terms = analytic_maxima(1.0, 0.1, 200);
    let oracle: f64 = terms.iter().map(|&x| g(x)).sum();
    assert!((oracle - 1.252_922_592_417).abs() < 1e-9, "{oracle}");
    assert!((g(0.48640) - 0.61194).abs() < 1e-5);

    let horizon = truncation_horizon(1.0, 0.1);
    let traj = closed_form_trajectory(1.0, 0.1, &SolverConfig::new(1e-3, horizon, SolverMethod::ClosedForm)).unwrap();
    let report = lower_bound_two(&traj, &MeasureOptions::default()).unwrap();
    assert!((report.total - oracle).abs() < 1e-6, "{} vs {oracle}", report.total);
    for (got, want) in report.contributions.iter().zip(&terms) {
        assert!((got - g(*want)).abs() < 1e-7);
    }
}

#[test]
fn single_measure_matches_term_by_term_sum() {
    for width in [0.1, 0.5, 1.0] {
        let oracle: f64 = analytic_maxima(1.0, width, 400).iter().sum();
        let horizon = truncation_horizon(1.0, width);
        let traj =
            closed_form_trajectory(1.0, width, &SolverConfig::new(1e-3, horizon, SolverMethod::ClosedForm)).unwrap();
        let report = nonmarkovianity_single(&traj, &MeasureOptions::default()).unwrap();
        assert!((report.total - oracle).abs() < 1e-7, "width {width}: {} vs {oracle}", report.total);
    }
}
