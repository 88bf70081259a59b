#![allow(dead_code)]

use nonmark_core::{CMatrix, Complex64 as C64, DensityMatrix, QubitInitialState};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn random_state(rng: &mut impl Rng) -> QubitInitialState {
    let alpha: f64 = rng.gen();
    let r = (alpha * (1.0 - alpha)).sqrt() * rng.gen::<f64>().sqrt();
    let phi = std::f64::consts::TAU * rng.gen::<f64>();
    QubitInitialState::new(alpha, C64::from_polar(r, phi)).unwrap()
}

pub fn random_amplitude(rng: &mut impl Rng) -> C64 {
    let r: f64 = rng.gen();
    C64::from_polar(r, std::f64::consts::TAU * rng.gen::<f64>())
}

/// Haar-ish SU(2) element `[[a, -conj(b)], [b, conj(a)]]`.
pub fn random_unitary2(rng: &mut impl Rng) -> CMatrix {
    let v: Vec<f64> = (0..4).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let a = c(v[0] / norm, v[1] / norm);
    let b = c(v[2] / norm, v[3] / norm);
    CMatrix::from_rows(&[[a, -b.conj()], [b, a.conj()]]).unwrap()
}

/// Random density matrix `A A^H / tr(A A^H)`.
pub fn random_density(rng: &mut impl Rng, dim: usize) -> DensityMatrix {
    let a = CMatrix::from_fn(dim, |_, _| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
    let m = &a * &a.dagger();
    let tr = m.trace().re;
    let mut scaled = m.scale(c(1.0 / tr, 0.0));
    for i in 0..dim {
        scaled[(i, i)] = c(scaled[(i, i)].re, 0.0);
    }
    DensityMatrix::new(scaled).unwrap()
}

pub fn random_hermitian(rng: &mut impl Rng, dim: usize) -> CMatrix {
    let a = CMatrix::from_fn(dim, |_, _| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
    let h = &a + &a.dagger();
    CMatrix::from_fn(dim, |i, j| if i == j { c(h[(i, i)].re, 0.0) } else { h[(i, j)] })
}

pub fn conjugate(u: &CMatrix, m: &CMatrix) -> CMatrix {
    &(u * m) * &u.dagger()
}
