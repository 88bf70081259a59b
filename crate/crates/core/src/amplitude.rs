//! Excited-state amplitude `b(t)` of a qubit that starts in `|e>` with the
//! reservoir in vacuum.
//!
//! Two routes are provided: the closed forms for a resonant Lorentzian, and a
//! general solver for the time-domain equation
//!
//! ```text
//! b'(t) = - integral_0^t f(t - s) b(s) ds,   b(0) = 1,
//! ```
//!
//! whose Laplace transform is `1 / (s + F(s))`.

use std::f64::consts::PI;
use std::io::{self, Write};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::export::sig12;
use crate::reservoir::{self, kappa_of, regime_of, CorrelationSamples, Regime, SpectralModel};
use crate::tolerances::{
    AMPLITUDE_BOUND_TOL, CRITICAL_BRANCH_REL_TOL, QUADRATURE_TOL, SOLVER_INSTABILITY_TOL,
};

/// `b(n dt)` on a uniform grid starting at `t = 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AmplitudeTrajectory {
    dt: f64,
    values: Vec<C64>,
}

impl AmplitudeTrajectory {
    pub fn new(dt: f64, values: Vec<C64>) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::contract(format!("dt must be positive, got {dt}")));
        }
        match values.first() {
            Some(b0) if *b0 == C64::new(1.0, 0.0) => {}
            Some(b0) => return Err(Error::contract(format!("trajectory must start at b = 1, got {b0}"))),
            None => return Err(Error::contract("empty trajectory")),
        }
        for (k, b) in values.iter().enumerate() {
            if !b.re.is_finite() || !b.im.is_finite() {
                return Err(Error::Numerical(format!("non-finite amplitude at sample {k}")));
            }
            if b.norm() > 1.0 + AMPLITUDE_BOUND_TOL {
                return Err(Error::Numerical(format!(
                    "|b| = {} exceeds one at t = {}",
                    b.norm(),
                    k as f64 * dt
                )));
            }
        }
        Ok(Self { dt, values })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t_max(&self) -> f64 {
        (self.values.len() - 1) as f64 * self.dt
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }

    pub fn abs(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().map(|b| b.norm())
    }

    /// Writes `t, re_b, im_b, abs_b` rows with a header.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "t,re_b,im_b,abs_b")?;
        for (k, b) in self.values.iter().enumerate() {
            writeln!(
                out,
                "{},{},{},{}",
                sig12(self.time(k)),
                sig12(b.re),
                sig12(b.im),
                sig12(b.norm())
            )?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverMethod {
    ClosedForm,
    Volterra,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub dt: f64,
    pub t_max: f64,
    pub method: SolverMethod,
    /// Absolute tolerance of the correlation-function quadrature, for
    /// spectral models without a closed-form correlation.
    pub tolerance: f64,
}

impl SolverConfig {
    pub fn new(dt: f64, t_max: f64, method: SolverMethod) -> Self {
        Self { dt, t_max, method, tolerance: QUADRATURE_TOL }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::contract(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_max.is_finite() && self.t_max >= 10.0 * self.dt) {
            return Err(Error::contract(format!(
                "t_max = {} must be at least 10 dt = {}",
                self.t_max,
                10.0 * self.dt
            )));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::contract("solver tolerance must be positive"));
        }
        Ok(())
    }

    /// Number of grid points `0, dt, ..., t_max` (rounded to the grid).
    pub fn samples(&self) -> usize {
        (self.t_max / self.dt).round() as usize + 1
    }
}

/// Default horizon for a Lorentzian: 20 oscillation periods `40 pi / kappa`
/// when non-Markovian, otherwise `10 / (width - kappa)`.
pub fn default_t_max(gamma0: f64, width: f64) -> f64 {
    let kappa = kappa_of(gamma0, width);
    match regime_of(gamma0, width) {
        Regime::NonMarkovian => 40.0 * PI / kappa,
        Regime::Markovian | Regime::Critical => 10.0 / (width - kappa),
    }
}

/// Closed-form `b(t)` for a resonant Lorentzian. Real-valued.
///
/// Within a relative band of `1e-9` around `width = 2 gamma0` the critical
/// limit `exp(-width t / 2) (1 + width t / 2)` is used.
pub fn lorentzian_closed_form(gamma0: f64, width: f64, t: f64) -> Result<C64> {
    if !(gamma0 > 0.0 && width > 0.0 && gamma0.is_finite() && width.is_finite()) {
        return Err(Error::contract(format!("rates must be positive (gamma0 = {gamma0}, width = {width})")));
    }
    if !(t >= 0.0) {
        return Err(Error::contract(format!("time must be non-negative, got {t}")));
    }
    Ok(C64::new(closed_form_real(gamma0, width, t), 0.0))
}

fn closed_form_real(gamma0: f64, width: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 1.0;
    }
    let half = 0.5 * width * t;
    if (width - 2.0 * gamma0).abs() <= CRITICAL_BRANCH_REL_TOL * width {
        return (-half).exp() * (1.0 + half);
    }
    let kappa = kappa_of(gamma0, width);
    let ratio = width / kappa;
    if gamma0 > 0.5 * width {
        let (s, c) = (0.5 * kappa * t).sin_cos();
        (-half).exp() * (c + ratio * s)
    } else {
        // cosh + ratio sinh, rewritten with decaying exponentials only.
        let slow = (-0.5 * (width - kappa) * t).exp();
        let fast = (-0.5 * (width + kappa) * t).exp();
        0.5 * ((1.0 + ratio) * slow + (1.0 - ratio) * fast)
    }
}

/// Zeros `tau_n = 2 (n pi - atan(kappa / width)) / kappa`, `n = 1..=n_max`,
/// of the non-Markovian closed-form amplitude.
pub fn lorentzian_min_times(gamma0: f64, width: f64, n_max: usize) -> Result<Vec<f64>> {
    let regime = regime_of(gamma0, width);
    if regime != Regime::NonMarkovian {
        return Err(Error::NoZeros(regime));
    }
    let kappa = kappa_of(gamma0, width);
    let offset = (kappa / width).atan();
    Ok((1..=n_max).map(|n| 2.0 * (n as f64 * PI - offset) / kappa).collect())
}

/// Samples the closed form on the grid of `cfg`.
pub fn closed_form_trajectory(gamma0: f64, width: f64, cfg: &SolverConfig) -> Result<AmplitudeTrajectory> {
    cfg.validate()?;
    lorentzian_closed_form(gamma0, width, 0.0)?;
    let n = cfg.samples();
    let values = (0..n)
        .map(|k| C64::new(closed_form_real(gamma0, width, k as f64 * cfg.dt), 0.0))
        .collect();
    AmplitudeTrajectory::new(cfg.dt, values)
}

/// Computes `b(t)` for any spectral model with the method in `cfg`.
///
/// `ClosedForm` is only available for the resonant Lorentzian.
pub fn solve(model: &SpectralModel, cfg: &SolverConfig) -> Result<AmplitudeTrajectory> {
    model.validate()?;
    cfg.validate()?;
    match cfg.method {
        SolverMethod::ClosedForm => match model {
            SpectralModel::Lorentzian { gamma0, width, detuning } if *detuning == 0.0 => {
                closed_form_trajectory(*gamma0, *width, cfg)
            }
            other => Err(Error::UnsupportedModel(format!(
                "closed-form amplitude needs a resonant Lorentzian, got {other:?}"
            ))),
        },
        SolverMethod::Volterra => {
            let f = reservoir::correlation_with_tolerance(model, cfg.dt, cfg.samples(), cfg.tolerance)?;
            solve_volterra(&f, cfg)
        }
    }
}

/// Solves `b' = -(f * b)` on the grid of `cfg`.
///
/// Integrating once turns the equation into one of the second kind,
///
/// ```text
/// b(t) = 1 - integral_0^t K(t - s) b(s) ds,   K(u) = integral_0^u f(v) dv,
/// ```
///
/// which is discretized with the trapezoidal rule. `K(0) = 0`, so the
/// implicit end of the trapezoid drops out and every step is explicit:
///
/// ```text
/// b_m = 1 - dt [ K_m b_0 / 2 + sum_{k=1}^{m-1} K_{m-k} b_k ]
/// ```
///
/// `K` is accumulated with a fourth-order rule so that the trapezoid is the
/// only second-order error source. The history sum is evaluated directly, so
/// a solve costs `O(N^2)`.
pub fn solve_volterra(f: &CorrelationSamples, cfg: &SolverConfig) -> Result<AmplitudeTrajectory> {
    cfg.validate()?;
    let n = cfg.samples();
    if (f.dt() - cfg.dt).abs() > 1e-12 * cfg.dt {
        return Err(Error::contract(format!(
            "correlation sampled at dt = {} but solver uses dt = {}",
            f.dt(),
            cfg.dt
        )));
    }
    if f.len() < n {
        return Err(Error::contract(format!(
            "correlation has {} samples, {} needed to reach t_max = {}",
            f.len(),
            n,
            cfg.t_max
        )));
    }
    let dt = cfg.dt;
    let kernel = integrated_kernel(&f.values()[..n], dt);

    // Kernel reversed so the history sum walks both arrays forwards:
    // K_{m-k} = rev[n - 1 - m + k].
    let rev_re: Vec<f64> = kernel.iter().rev().map(|z| z.re).collect();
    let rev_im: Vec<f64> = kernel.iter().rev().map(|z| z.im).collect();
    let mut b_re = vec![0.0; n];
    let mut b_im = vec![0.0; n];
    b_re[0] = 1.0;

    let limit = 1.0 + SOLVER_INSTABILITY_TOL;
    for m in 1..n {
        let lo = n - m;
        let hist_k_re = &rev_re[lo..n - 1];
        let hist_k_im = &rev_im[lo..n - 1];
        let hist_b_re = &b_re[1..m];
        let hist_b_im = &b_im[1..m];
        let (mut acc_re, mut acc_im) = (0.0, 0.0);
        for i in 0..m - 1 {
            let (kr, ki) = (hist_k_re[i], hist_k_im[i]);
            let (br, bi) = (hist_b_re[i], hist_b_im[i]);
            acc_re += kr * br - ki * bi;
            acc_im += kr * bi + ki * br;
        }
        let b = C64::new(1.0, 0.0) - dt * (C64::new(acc_re, acc_im) + 0.5 * kernel[m]);
        if !(b.norm() <= limit) {
            return Err(Error::Numerical(format!(
                "Volterra solver unstable at t = {} (|b| = {}); try a smaller dt",
                m as f64 * dt,
                b.norm()
            )));
        }
        b_re[m] = b.re;
        b_im[m] = b.im;
    }

    let values = b_re.into_iter().zip(b_im).map(|(re, im)| C64::new(re, im)).collect();
    AmplitudeTrajectory::new(dt, values)
}

/// Running integral `K_m = integral_0^{m dt} f` by piecewise cubic
/// interpolation: the centred four-point rule inside the grid and one-sided
/// rules on the first and last intervals. A correlation function is usually
/// not smooth through `t = 0`, so no samples from negative times are used.
fn integrated_kernel(f: &[C64], dt: f64) -> Vec<C64> {
    let n = f.len();
    let mut k = vec![C64::new(0.0, 0.0); n];
    if n < 4 {
        for j in 1..n {
            k[j] = k[j - 1] + 0.5 * dt * (f[j - 1] + f[j]);
        }
        return k;
    }
    for j in 0..n - 1 {
        let step = if j == 0 {
            9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]
        } else if j + 2 < n {
            -f[j - 1] + 13.0 * f[j] + 13.0 * f[j + 1] - f[j + 2]
        } else {
            f[j - 2] - 5.0 * f[j - 1] + 19.0 * f[j] + 9.0 * f[j + 1]
        };
        k[j + 1] = k[j] + step * (dt / 24.0);
    }
    k
}
