//! The amplitude-damping channel fixed by `b(t)`, applied to single qubits
//! and to pairs of qubits with independent reservoirs.
//!
//! Matrices use the basis `{|e>, |g>}`, and `{|ee>, |eg>, |ge>, |gg>}` for
//! two qubits.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::amplitude::AmplitudeTrajectory;
use crate::error::{Error, Result};
use crate::linalg::{kron, CMatrix, DensityMatrix};
use crate::tolerances::{AMPLITUDE_BOUND_TOL, COHERENCE_TOL};

/// Initial qubit state `[[alpha, beta], [conj(beta), 1 - alpha]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QubitInitialState {
    alpha: f64,
    beta: C64,
}

impl QubitInitialState {
    pub fn new(alpha: f64, beta: C64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::Unphysical(format!("excited population {alpha} outside [0, 1]")));
        }
        if !beta.re.is_finite() || !beta.im.is_finite() {
            return Err(Error::Unphysical("non-finite coherence".into()));
        }
        let limit = alpha * (1.0 - alpha);
        if beta.norm_sqr() > limit + COHERENCE_TOL {
            return Err(Error::Unphysical(format!(
                "|beta|^2 = {} exceeds alpha (1 - alpha) = {limit}",
                beta.norm_sqr()
            )));
        }
        Ok(Self { alpha, beta })
    }

    pub fn excited() -> Self {
        Self { alpha: 1.0, beta: C64::new(0.0, 0.0) }
    }

    pub fn ground() -> Self {
        Self { alpha: 0.0, beta: C64::new(0.0, 0.0) }
    }

    /// `(|g> + |e>) / sqrt 2`
    pub fn plus() -> Self {
        Self { alpha: 0.5, beta: C64::new(0.5, 0.0) }
    }

    /// `(|g> - |e>) / sqrt 2`
    pub fn minus() -> Self {
        Self { alpha: 0.5, beta: C64::new(-0.5, 0.0) }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> C64 {
        self.beta
    }

    pub fn density_matrix(&self) -> DensityMatrix {
        evolve_single(self, C64::new(1.0, 0.0)).expect("validated initial state is physical")
    }
}

/// Two initial states whose distinguishability is tracked over time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatePair {
    pub first: QubitInitialState,
    pub second: QubitInitialState,
}

impl StatePair {
    pub fn new(first: QubitInitialState, second: QubitInitialState) -> Self {
        Self { first, second }
    }

    /// The `|+>, |->` pair, which attains `D = |b|` at all times.
    pub fn optimal() -> Self {
        Self::new(QubitInitialState::plus(), QubitInitialState::minus())
    }

    pub fn excited_ground() -> Self {
        Self::new(QubitInitialState::excited(), QubitInitialState::ground())
    }
}

/// A real signal on a uniform time grid: a distance, population or
/// concurrence, so values lie in `[0, 1]` up to `1e-8`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalarTrajectory {
    dt: f64,
    values: Vec<f64>,
}

impl ScalarTrajectory {
    pub fn new(dt: f64, values: Vec<f64>) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::contract(format!("dt must be positive, got {dt}")));
        }
        if let Some((k, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(-AMPLITUDE_BOUND_TOL..=1.0 + AMPLITUDE_BOUND_TOL).contains(*v))
        {
            return Err(Error::contract(format!("signal value {v} at sample {k} outside [0, 1]")));
        }
        Ok(Self { dt, values })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn check_amplitude(b: C64) -> Result<f64> {
    let mag = b.norm();
    if !(mag <= 1.0 + AMPLITUDE_BOUND_TOL) {
        return Err(Error::contract(format!("|b| = {mag} exceeds one")));
    }
    Ok(mag.min(1.0))
}

/// Applies the channel to a single-qubit initial state:
/// `rho_ee = alpha |b|^2`, `rho_eg = beta b`, `rho_gg = 1 - alpha |b|^2`.
pub fn evolve_single(s: &QubitInitialState, b: C64) -> Result<DensityMatrix> {
    let mag = check_amplitude(b)?;
    let ee = s.alpha * mag * mag;
    let eg = s.beta * b;
    let m = CMatrix::from_rows(&[[C64::new(ee, 0.0), eg], [eg.conj(), C64::new(1.0 - ee, 0.0)]])?;
    DensityMatrix::new(m)
}

/// Kraus pair of the channel: `K0 = [[b, 0], [0, 1]]`,
/// `K1 = [[0, 0], [sqrt(1 - |b|^2), 0]]`.
pub fn kraus_operators(b: C64) -> Result<[CMatrix; 2]> {
    let mag = check_amplitude(b)?;
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let decay = C64::new((1.0 - mag * mag).max(0.0).sqrt(), 0.0);
    Ok([
        CMatrix::from_rows(&[[b, zero], [zero, one]])?,
        CMatrix::from_rows(&[[zero, zero], [decay, zero]])?,
    ])
}

/// `sum_k K_k rho K_k^H`.
fn kraus_sum(ops: &[CMatrix], rho: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(rho.dim());
    for k in ops {
        out = &out + &(&(k * rho) * &k.dagger());
    }
    out
}

/// Local channels on both qubits of an arbitrary (possibly entangled)
/// two-qubit state.
pub fn evolve_two_qubit_state(rho: &DensityMatrix, b: C64) -> Result<DensityMatrix> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, actual: rho.dim() });
    }
    let single = kraus_operators(b)?;
    let ops: Vec<CMatrix> =
        single.iter().flat_map(|a| single.iter().map(move |c| kron(a, c))).collect();
    DensityMatrix::new(kraus_sum(&ops, rho.matrix()))
}

/// Product input `rho_A (x) rho_B`, each qubit with its own reservoir.
pub fn evolve_two_qubit(a: &QubitInitialState, b_state: &QubitInitialState, b: C64) -> Result<DensityMatrix> {
    let ra = evolve_single(a, b)?;
    let rb = evolve_single(b_state, b)?;
    DensityMatrix::new(kron(ra.matrix(), rb.matrix()))
}

fn bell(v: [f64; 4]) -> DensityMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let amps: Vec<C64> = v.iter().map(|x| C64::new(x * s, 0.0)).collect();
    DensityMatrix::new(CMatrix::outer(&amps)).expect("Bell states are physical")
}

/// `(|ge> + |eg>) / sqrt 2`
pub fn bell_psi() -> DensityMatrix {
    bell([0.0, 1.0, 1.0, 0.0])
}

/// `(|gg> + |ee>) / sqrt 2`
pub fn bell_phi() -> DensityMatrix {
    bell([1.0, 0.0, 0.0, 1.0])
}

/// `D = |b| sqrt(|b|^2 (alpha - mu)^2 + |beta - nu|^2)`.
pub fn trace_distance_single(p: &StatePair, b: C64) -> Result<f64> {
    let mag = check_amplitude(b)?;
    let dp = p.first.alpha - p.second.alpha;
    let dc = (p.first.beta - p.second.beta).norm();
    Ok(mag * (mag * mag * dp * dp + dc * dc).sqrt())
}

/// `D(|++>, |-->) = |b| sqrt(2 - 2 |b|^2 + |b|^4)`.
pub fn trace_distance_two(b: C64) -> Result<f64> {
    let mag = check_amplitude(b)?;
    Ok(two_qubit_distance_of(mag))
}

pub(crate) fn two_qubit_distance_of(mag: f64) -> f64 {
    let p = mag * mag;
    mag * (2.0 - 2.0 * p + p * p).sqrt()
}

/// Concurrences `(|b|^2, |b|^4)` reached from `|Psi>` and `|Phi>`.
pub fn concurrence_bell(b: C64) -> Result<(f64, f64)> {
    let mag = check_amplitude(b)?;
    let p = mag * mag;
    Ok((p.max(0.0), (p * p).max(0.0)))
}

/// Applies `f` to every sample of `b(t)`.
pub fn map_trajectory(
    traj: &AmplitudeTrajectory,
    f: impl Fn(C64) -> Result<f64>,
) -> Result<ScalarTrajectory> {
    let values = traj.values().iter().map(|&b| f(b)).collect::<Result<Vec<_>>>()?;
    ScalarTrajectory::new(traj.dt(), values)
}

/// Excited population `|b(t)|^2` of a qubit prepared in `|e>`.
pub fn population_excited(traj: &AmplitudeTrajectory) -> ScalarTrajectory {
    map_trajectory(traj, |b| Ok(b.norm_sqr().min(1.0))).expect("trajectory amplitudes are bounded")
}

/// `D(t)` for a fixed pair of initial states.
pub fn distance_trajectory(pair: &StatePair, traj: &AmplitudeTrajectory) -> ScalarTrajectory {
    map_trajectory(traj, |b| trace_distance_single(pair, b)).expect("trajectory amplitudes are bounded")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{trace_distance, wootters_concurrence};

    fn real(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn excited_state_decays_to_diagonal() {
        let rho = evolve_single(&QubitInitialState::excited(), real(0.6)).unwrap();
        assert!((rho[(0, 0)].re - 0.36).abs() < 1e-15);
        assert!((rho[(1, 1)].re - 0.64).abs() < 1e-15);
        assert_eq!(rho[(0, 1)], real(0.0));
    }

    #[test]
    fn unit_amplitude_is_identity() {
        let s = QubitInitialState::new(0.3, C64::new(0.2, -0.3)).unwrap();
        let rho = evolve_single(&s, real(1.0)).unwrap();
        assert_eq!(rho[(0, 0)], real(0.3));
        assert_eq!(rho[(0, 1)], C64::new(0.2, -0.3));
        let bell = bell_phi();
        assert_eq!(evolve_two_qubit_state(&bell, real(1.0)).unwrap(), bell);
    }

    #[test]
    fn amplitude_above_one_is_rejected() {
        let s = QubitInitialState::excited();
        assert!(evolve_single(&s, real(1.0 + 1e-6)).is_err());
        assert!(trace_distance_single(&StatePair::optimal(), real(1.1)).is_err());
    }

    #[test]
    fn invalid_initial_states() {
        assert!(QubitInitialState::new(1.2, real(0.0)).is_err());
        assert!(QubitInitialState::new(0.5, real(0.6)).is_err());
        assert!(QubitInitialState::new(0.5, real(0.5)).is_ok());
    }

    #[test]
    fn trace_distance_single_examples() {
        let d = trace_distance_single(&StatePair::excited_ground(), real(0.6)).unwrap();
        assert!((d - 0.36).abs() < 1e-15);
        for b in [0.0, 0.3, 0.9, 1.0] {
            let d = trace_distance_single(&StatePair::optimal(), C64::from_polar(b, 0.7)).unwrap();
            assert!((d - b).abs() < 1e-15);
        }
        let same = StatePair::new(QubitInitialState::plus(), QubitInitialState::plus());
        assert_eq!(trace_distance_single(&same, real(0.5)).unwrap(), 0.0);
    }

    #[test]
    fn kraus_pair_reproduces_the_channel() {
        let s = QubitInitialState::new(0.7, C64::new(0.1, 0.3)).unwrap();
        let b = C64::from_polar(0.8, 1.1);
        let direct = evolve_single(&s, b).unwrap();
        let via_kraus = kraus_sum(&kraus_operators(b).unwrap(), s.density_matrix().matrix());
        for (x, y) in direct.matrix().as_slice().iter().zip(via_kraus.as_slice()) {
            assert!((x - y).norm() < 1e-15);
        }
    }

    #[test]
    fn two_qubit_distance_examples() {
        assert_eq!(trace_distance_two(real(1.0)).unwrap(), 1.0);
        assert_eq!(trace_distance_two(real(0.0)).unwrap(), 0.0);
        let d = trace_distance_two(real(0.48640)).unwrap();
        assert!((d - 0.61194).abs() < 1e-5, "{d}");
        let pp = evolve_two_qubit(&QubitInitialState::plus(), &QubitInitialState::plus(), real(0.48640)).unwrap();
        let mm = evolve_two_qubit(&QubitInitialState::minus(), &QubitInitialState::minus(), real(0.48640)).unwrap();
        assert!((trace_distance(&pp, &mm).unwrap() - d).abs() < 1e-12);
    }

    #[test]
    fn product_input_matches_kraus_tensor_path() {
        let plus = QubitInitialState::plus();
        let b = real(0.55);
        let product = evolve_two_qubit(&plus, &plus, b).unwrap();
        let start = DensityMatrix::new(kron(plus.density_matrix().matrix(), plus.density_matrix().matrix())).unwrap();
        let tensor = evolve_two_qubit_state(&start, b).unwrap();
        for (x, y) in product.matrix().as_slice().iter().zip(tensor.matrix().as_slice()) {
            assert!((x - y).norm() < 1e-15);
        }
    }

    #[test]
    fn bell_psi_never_populates_ee() {
        for k in 0..=20 {
            let b = C64::from_polar(k as f64 / 20.0, 0.3 * k as f64);
            let rho = evolve_two_qubit_state(&bell_psi(), b).unwrap();
            assert!(rho[(0, 0)].norm() < 1e-16);
        }
    }

    #[test]
    fn bell_concurrence_examples() {
        assert_eq!(concurrence_bell(real(1.0)).unwrap(), (1.0, 1.0));
        let (psi, phi) = concurrence_bell(real(0.5f64.sqrt())).unwrap();
        assert!((psi - 0.5).abs() < 1e-15 && (phi - 0.25).abs() < 1e-15);
        let b = C64::from_polar(0.7, -0.4);
        let (psi, phi) = concurrence_bell(b).unwrap();
        let c_psi = wootters_concurrence(&evolve_two_qubit_state(&bell_psi(), b).unwrap()).unwrap();
        let c_phi = wootters_concurrence(&evolve_two_qubit_state(&bell_phi(), b).unwrap()).unwrap();
        assert!((psi - c_psi).abs() < 1e-12 && (phi - c_phi).abs() < 1e-12);
    }

    #[test]
    fn scalar_trajectory_bounds() {
        assert!(ScalarTrajectory::new(0.1, vec![0.0, 0.5, 1.0]).is_ok());
        assert!(ScalarTrajectory::new(0.1, vec![0.0, 1.5]).is_err());
        assert!(ScalarTrajectory::new(0.1, vec![f64::NAN]).is_err());
    }
}
