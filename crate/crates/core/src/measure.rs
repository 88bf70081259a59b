//! Extremum detection on sampled signals and the trace-distance
//! non-Markovianity sums built on it.
//!
//! The general measure adds up every rise `D(t_max) - D(t_min)` of a
//! distance trajectory. For a single qubit the optimal pair of initial states
//! is known in advance (`|+>, |->`, with `D = |b|`), so the production path
//! never optimizes over pairs: [`nonmarkovianity_single`] sums the local
//! maxima of `|b|`. [`brute_force_max`] and [`verify_theorem`] exist to check
//! that shortcut.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::amplitude::{default_t_max, AmplitudeTrajectory};
use crate::dynamics::{
    distance_trajectory, population_excited, trace_distance_single, two_qubit_distance_of,
    QubitInitialState, ScalarTrajectory, StatePair,
};
use crate::error::{Error, Result};
use crate::reservoir::{kappa_of, regime_of, Regime};
use crate::tolerances::{
    DEFAULT_MIN_TOL, DEFAULT_TAIL_TOL, ENVELOPE_CUTOFF, OPTIMAL_PAIR_TOL, PLATEAU_TOL, THEOREM_TOL,
};

/// One rise of a signal, from a local minimum to the following local maximum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Extremum {
    pub t_min: f64,
    pub t_max: f64,
    pub value_at_min: f64,
    pub value_at_max: f64,
}

impl Extremum {
    pub fn rise(&self) -> f64 {
        self.value_at_max - self.value_at_min
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ExtremaList {
    pub intervals: Vec<Extremum>,
    /// A last local minimum with no maximum after it inside the horizon.
    pub trailing_minimum: Option<(f64, f64)>,
}

impl ExtremaList {
    /// `(t, value)` of every local minimum in order, trailing one included.
    pub fn minima(&self) -> Vec<(f64, f64)> {
        self.intervals
            .iter()
            .map(|e| (e.t_min, e.value_at_min))
            .chain(self.trailing_minimum)
            .collect()
    }

    pub fn maxima(&self) -> Vec<(f64, f64)> {
        self.intervals.iter().map(|e| (e.t_max, e.value_at_max)).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty() && self.trailing_minimum.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NonMarkovianityReport {
    pub regime: Option<Regime>,
    pub kappa: Option<f64>,
    pub extrema: ExtremaList,
    pub contributions: Vec<f64>,
    pub total: f64,
    /// Time span of the analysed trajectory.
    pub horizon: f64,
    /// Estimated bound on the part of the infinite sum beyond `horizon`.
    pub tail_bound: f64,
}

impl NonMarkovianityReport {
    /// Fills in the regime and `kappa` of a Lorentzian reservoir.
    pub fn with_lorentzian(mut self, gamma0: f64, width: f64) -> Self {
        self.regime = Some(regime_of(gamma0, width));
        self.kappa = Some(kappa_of(gamma0, width));
        self
    }
}

/// Tolerances for the measures.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeasureOptions {
    /// Local minima of the analysed signal at or below this value are treated
    /// as exact zeros.
    pub min_tol: f64,
    /// Largest acceptable tail bound before a trajectory is rejected as too
    /// short.
    pub tail_tol: f64,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        Self { min_tol: DEFAULT_MIN_TOL, tail_tol: DEFAULT_TAIL_TOL }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Kind {
    Min,
    Max,
}

#[derive(Clone, Copy, Debug)]
struct Turn {
    kind: Kind,
    t: f64,
    value: f64,
}

/// Vertex `(offset, value)` of the parabola through `(-1, fm), (0, f0), (1, fp)`.
fn parabola_vertex(fm: f64, f0: f64, fp: f64) -> Option<(f64, f64)> {
    let curvature = fm - 2.0 * f0 + fp;
    if curvature.abs() < PLATEAU_TOL || !curvature.is_finite() {
        return None;
    }
    let offset = (0.5 * (fm - fp) / curvature).clamp(-1.0, 1.0);
    let value = f0 + 0.5 * (fp - fm) * offset + 0.5 * curvature * offset * offset;
    Some((offset, value))
}

/// Locates the zero of a sign-changing amplitude whose magnitude was sampled.
///
/// A minimum of `|x|` where `x` crosses zero is a kink, which a parabola
/// fits badly. Flipping the sign of the samples on one side of the crossing
/// recovers a smooth signed curve; if that curve is nearly straight, its
/// root inside the bracket is returned as the grid offset of the minimum.
fn crossing_offset(fm: f64, f0: f64, fp: f64) -> Option<f64> {
    const MAX_BEND: f64 = 0.1;
    // Centre sample left of the crossing, then right of it.
    let candidates = [((-fm, -f0, fp), 0.0..=1.0), ((-fm, f0, fp), -1.0..=0.0)];
    let mut best: Option<(f64, f64)> = None;
    for ((um, u0, up), range) in candidates {
        let slope = 0.5 * (up - um);
        let curve = 0.5 * (up - 2.0 * u0 + um);
        if slope <= 0.0 {
            continue;
        }
        let bend = curve.abs() / slope;
        if bend > MAX_BEND {
            continue;
        }
        // Root of u0 + slope x + curve x^2 nearest the centre.
        let root = if curve.abs() < 1e-300 {
            -u0 / slope
        } else {
            let disc = slope * slope - 4.0 * curve * u0;
            if disc < 0.0 {
                continue;
            }
            let q = -0.5 * (slope + slope.signum() * disc.sqrt());
            let (r1, r2) = (q / curve, u0 / q);
            if r1.abs() < r2.abs() { r1 } else { r2 }
        };
        if range.contains(&root) && best.map_or(true, |(b, _)| bend < b) {
            best = Some((bend, root));
        }
    }
    best.map(|(_, root)| root)
}

fn refine(kind: Kind, v: &[f64], i: usize, dt: f64, min_tol: f64) -> Turn {
    let (fm, f0, fp) = (v[i - 1], v[i], v[i + 1]);
    let t0 = i as f64 * dt;
    if (fp - f0).abs() < PLATEAU_TOL || (fm - f0).abs() < PLATEAU_TOL {
        let value = if kind == Kind::Min && f0 <= min_tol { 0.0 } else { f0 };
        return Turn { kind, t: t0, value };
    }
    let plain = parabola_vertex(fm, f0, fp);
    let (offset, value) = match kind {
        Kind::Max => match plain {
            Some((off, val)) if val >= f0 => (off, val),
            _ => (0.0, f0),
        },
        Kind::Min => {
            let (off, val) = match plain {
                Some((off, val)) if val <= f0 => (off, val),
                _ => (0.0, f0),
            };
            if val > min_tol {
                match crossing_offset(fm, f0, fp) {
                    Some(root) => (root, 0.0),
                    None => (off, val),
                }
            } else {
                (off, val)
            }
        }
    };
    let value = match kind {
        Kind::Min if value <= min_tol => 0.0,
        _ => value,
    };
    Turn { kind, t: t0 + offset * dt, value }
}

fn turning_points(sig: &ScalarTrajectory, min_tol: f64) -> (Vec<Turn>, i8) {
    let v = sig.values();
    let mut turns = Vec::new();
    let mut last_sign = 0i8;
    let mut turn_idx = 0usize;
    for k in 0..v.len() - 1 {
        let d = v[k + 1] - v[k];
        let s = if d.abs() < PLATEAU_TOL { 0 } else if d > 0.0 { 1 } else { -1 };
        if s == 0 {
            continue;
        }
        if last_sign != 0 && s != last_sign {
            // turn_idx is the leftmost sample of any plateau at the turn.
            let kind = if last_sign > 0 { Kind::Max } else { Kind::Min };
            turns.push(refine(kind, v, turn_idx, sig.dt(), min_tol));
        }
        last_sign = s;
        turn_idx = k + 1;
    }
    (turns, last_sign)
}

/// Finds alternating local minima and maxima by sign changes of the forward
/// difference and refines each with a parabola through the bracketing
/// triple. Minima at zero crossings of an underlying amplitude are located by
/// the crossing root instead. Minima at or below `min_tol` are reported as
/// exactly zero.
///
/// A signal that rises from `t = 0` gets its first interval started at the
/// initial sample.
pub fn find_extrema(sig: &ScalarTrajectory, min_tol: f64) -> Result<ExtremaList> {
    if sig.len() < 3 {
        return Err(Error::contract(format!("need at least 3 samples, got {}", sig.len())));
    }
    let (turns, _) = turning_points(sig, min_tol);
    Ok(assemble(sig, &turns))
}

fn assemble(sig: &ScalarTrajectory, turns: &[Turn]) -> ExtremaList {
    let mut list = ExtremaList::default();
    let mut pending: Option<(f64, f64)> = match turns.first() {
        Some(t) if t.kind == Kind::Max => Some((0.0, sig.values()[0])),
        _ => None,
    };
    for turn in turns {
        match turn.kind {
            Kind::Min => pending = Some((turn.t, turn.value)),
            Kind::Max => {
                if let Some((t_min, value_at_min)) = pending.take() {
                    list.intervals.push(Extremum {
                        t_min,
                        t_max: turn.t,
                        value_at_min,
                        value_at_max: turn.value.max(value_at_min),
                    });
                }
            }
        }
    }
    list.trailing_minimum = pending;
    list
}

/// Geometric-tail estimate of what the contributions beyond the horizon add
/// up to: the envelope `c_1 r^(n-1)` through the first contribution, with
/// `r` the slowest decay seen between consecutive contributions (or of the
/// only one relative to the initial value of the signal), summed past the
/// last term. For an exact geometric sequence this is the true remainder.
fn tail_bound(contributions: &[f64], initial: f64, rising_at_end: bool) -> f64 {
    let (first, last) = match contributions {
        [] => return if rising_at_end { f64::INFINITY } else { 0.0 },
        [first, .., last] => (*first, *last),
        [only] => (*only, *only),
    };
    if last == 0.0 {
        return 0.0;
    }
    let step = |prev: f64, next: f64| {
        if prev > 0.0 {
            next / prev
        } else if next == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    };
    let ratio = if contributions.len() == 1 {
        step(initial, first)
    } else {
        contributions.windows(2).map(|w| step(w[0], w[1])).fold(0.0, f64::max)
    };
    if ratio < 1.0 {
        first * ratio.powi(contributions.len() as i32) / (1.0 - ratio)
    } else {
        f64::INFINITY
    }
}

fn report_from(
    sig: &ScalarTrajectory,
    min_tol: f64,
    contribution: impl Fn(&Extremum) -> f64,
) -> Result<NonMarkovianityReport> {
    if sig.len() < 3 {
        return Err(Error::contract(format!("need at least 3 samples, got {}", sig.len())));
    }
    let (turns, last_sign) = turning_points(sig, min_tol);
    let extrema = assemble(sig, &turns);
    let contributions: Vec<f64> = extrema.intervals.iter().map(|e| contribution(e).max(0.0)).collect();
    let total = contributions.iter().fold(0.0, |acc, c| acc + c);
    let initial = contribution(&Extremum {
        t_min: 0.0,
        t_max: 0.0,
        value_at_min: 0.0,
        value_at_max: sig.values()[0],
    });
    let tail_bound = tail_bound(&contributions, initial, last_sign > 0);
    Ok(NonMarkovianityReport {
        regime: None,
        kappa: None,
        extrema,
        contributions,
        total,
        horizon: (sig.len() - 1) as f64 * sig.dt(),
        tail_bound,
    })
}

fn check_horizon(report: NonMarkovianityReport, opts: &MeasureOptions) -> Result<NonMarkovianityReport> {
    if report.tail_bound > opts.tail_tol {
        return Err(Error::HorizonTooShort { tail_bound: report.tail_bound, tolerance: opts.tail_tol });
    }
    Ok(report)
}

/// Sum of every rise `D(t_max) - D(t_min)` of one distance trajectory.
///
/// The tail bound is reported but never enforced here.
pub fn blp_from_trajectory(d: &ScalarTrajectory, opts: &MeasureOptions) -> Result<NonMarkovianityReport> {
    report_from(d, opts.min_tol, Extremum::rise)
}

fn abs_signal(b_traj: &AmplitudeTrajectory) -> ScalarTrajectory {
    ScalarTrajectory::new(b_traj.dt(), b_traj.abs().map(|x| x.min(1.0)).collect())
        .expect("trajectory amplitudes are bounded")
}

/// Single-qubit measure: sum of the local maxima of `|b|`, i.e. the rises of
/// the optimal pair's distance `D = |b|`.
///
/// When a minimum of `|b|` is not a zero (beyond `min_tol`), its value is
/// subtracted from the following maximum, which is the general rise of the
/// same trajectory.
pub fn nonmarkovianity_single(b_traj: &AmplitudeTrajectory, opts: &MeasureOptions) -> Result<NonMarkovianityReport> {
    check_horizon(blp_from_trajectory(&abs_signal(b_traj), opts)?, opts)
}

/// `sqrt(P)`, the amplitude magnitude recovered from a population signal.
/// `P` and `sqrt(P)` share their extremum times; working on `sqrt(P)` keeps
/// the minimum tolerance on the amplitude scale and avoids the very flat
/// steps of a small population.
fn root_signal(p_traj: &ScalarTrajectory) -> ScalarTrajectory {
    ScalarTrajectory::new(p_traj.dt(), p_traj.values().iter().map(|p| p.max(0.0).sqrt()).collect())
        .expect("roots of populations stay in [0, 1]")
}

/// Single-qubit measure from the excited population of a qubit prepared in
/// `|e>`: sum of `sqrt(P)` at the maxima of `P`. `opts.min_tol` applies to
/// `sqrt(P)`, as it does to `|b|` in [`nonmarkovianity_single`].
pub fn nonmarkovianity_from_population(p_traj: &ScalarTrajectory, opts: &MeasureOptions) -> Result<NonMarkovianityReport> {
    check_horizon(blp_from_trajectory(&root_signal(p_traj), opts)?, opts)
}

/// Two-qubit lower bound from the `|++>, |-->` pair: sum of
/// `x sqrt(2 - 2 x^2 + x^4)` over the maxima `x` of `|b|`.
pub fn lower_bound_two(b_traj: &AmplitudeTrajectory, opts: &MeasureOptions) -> Result<NonMarkovianityReport> {
    two_qubit_report(&abs_signal(b_traj), opts)
}

/// [`lower_bound_two`] from the excited population: sum of
/// `sqrt(2P - 2P^2 + P^3)` over the maxima of `P`.
pub fn lower_bound_two_from_population(
    p_traj: &ScalarTrajectory,
    opts: &MeasureOptions,
) -> Result<NonMarkovianityReport> {
    two_qubit_report(&root_signal(p_traj), opts)
}

fn two_qubit_report(mag: &ScalarTrajectory, opts: &MeasureOptions) -> Result<NonMarkovianityReport> {
    let report = report_from(mag, opts.min_tol, |e| {
        two_qubit_distance_of(e.value_at_max) - two_qubit_distance_of(e.value_at_min)
    })?;
    check_horizon(report, opts)
}

/// Sum over `(|e>, |g>)`, whose distance is `|b|^2`.
pub fn nonmarkovianity_excited_ground(b_traj: &AmplitudeTrajectory, opts: &MeasureOptions) -> Result<NonMarkovianityReport> {
    check_horizon(blp_from_trajectory(&population_excited(b_traj), opts)?, opts)
}

/// Horizon after which the resonant-Lorentzian envelope
/// `exp(-width t / 2) (1 + width / kappa)` drops below `1e-8`. Outside the
/// non-Markovian regime there is nothing to sum and the amplitude default
/// horizon is returned.
pub fn truncation_horizon(gamma0: f64, width: f64) -> f64 {
    match regime_of(gamma0, width) {
        Regime::NonMarkovian => {
            let kappa = kappa_of(gamma0, width);
            2.0 * ((1.0 + width / kappa) / ENVELOPE_CUTOFF).ln() / width
        }
        _ => default_t_max(gamma0, width),
    }
}

/// `1 / (exp(pi width / kappa) - 1)`: the single-qubit measure of a
/// resonant Lorentzian summed in closed form. Zero outside the
/// non-Markovian regime.
pub fn lorentzian_single_closed_form(gamma0: f64, width: f64) -> f64 {
    match regime_of(gamma0, width) {
        Regime::NonMarkovian => 1.0 / (PI * width / kappa_of(gamma0, width)).exp_m1(),
        _ => 0.0,
    }
}

/// Horizon used when measuring a resonant Lorentzian: long enough for the
/// amplitude default and for the envelope cutoff.
pub fn measurement_horizon(gamma0: f64, width: f64) -> f64 {
    default_t_max(gamma0, width).max(truncation_horizon(gamma0, width))
}

/// The three measures of one amplitude trajectory.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureBundle {
    pub regime: Option<Regime>,
    pub kappa: Option<f64>,
    pub n_single: NonMarkovianityReport,
    pub n_eg: NonMarkovianityReport,
    pub n_two_lower: NonMarkovianityReport,
}

impl MeasureBundle {
    pub fn new(b_traj: &AmplitudeTrajectory, opts: &MeasureOptions) -> Result<Self> {
        Ok(Self {
            regime: None,
            kappa: None,
            n_single: nonmarkovianity_single(b_traj, opts)?,
            n_eg: nonmarkovianity_excited_ground(b_traj, opts)?,
            n_two_lower: lower_bound_two(b_traj, opts)?,
        })
    }

    pub fn with_lorentzian(self, gamma0: f64, width: f64) -> Self {
        Self {
            regime: Some(regime_of(gamma0, width)),
            kappa: Some(kappa_of(gamma0, width)),
            n_single: self.n_single.with_lorentzian(gamma0, width),
            n_eg: self.n_eg.with_lorentzian(gamma0, width),
            n_two_lower: self.n_two_lower.with_lorentzian(gamma0, width),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VerifyOptions {
    pub samples: usize,
    pub seed: u64,
    /// Multiplies the bound `|b|`. Anything below one is a deliberately
    /// wrong bound, used to check that violations are caught.
    pub bound_scale: f64,
}

impl VerifyOptions {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self { samples, seed, bound_scale: 1.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub pair_index: usize,
    pub pair: StatePair,
    pub t: f64,
    pub distance: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremReport {
    pub samples: usize,
    pub seed: u64,
    pub bound_scale: f64,
    pub violations: usize,
    /// Largest `D / |b|` seen over random pairs and grid times with `b != 0`.
    pub max_ratio: f64,
    pub worst: Option<Violation>,
    /// Largest `|D - bound|` for the `|+>, |->` pair.
    pub optimal_pair_deviation: f64,
    pub passed: bool,
}

/// `count` pairs drawn from a ChaCha8 stream seeded with `seed`:
/// populations uniform on `[0, 1]`, coherences uniform on the allowed disk
/// via `r = R sqrt(u)`, `phi = 2 pi v`.
pub fn random_pairs(count: usize, seed: u64) -> Vec<StatePair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = move || {
        let alpha: f64 = rng.gen();
        let radius = (alpha * (1.0 - alpha)).sqrt();
        let r = radius * rng.gen::<f64>().sqrt();
        let phi = TAU * rng.gen::<f64>();
        QubitInitialState::new(alpha, C64::from_polar(r, phi)).expect("sampled inside the disk")
    };
    (0..count)
        .map(|_| {
            let first = draw();
            let second = draw();
            StatePair::new(first, second)
        })
        .collect()
}

/// Checks `D(t) <= |b(t)|` on random pairs and equality for `|+>, |->`.
pub fn verify_theorem(b_traj: &AmplitudeTrajectory, opts: &VerifyOptions) -> Result<TheoremReport> {
    if opts.samples == 0 {
        return Err(Error::contract("need at least one sample"));
    }
    let scale = opts.bound_scale;
    let pairs = random_pairs(opts.samples, opts.seed);
    // (t, |b|, |b|^2, bound) per sample; the pair loop then evaluates
    // D = |b| sqrt(|b|^2 dp^2 + dc^2) with per-pair constants.
    let times: Vec<(f64, f64, f64, f64)> = b_traj
        .values()
        .iter()
        .enumerate()
        .map(|(k, &b)| {
            let mag = b.norm().min(1.0);
            (b_traj.time(k), mag, mag * mag, scale * b.norm())
        })
        .collect();

    struct PairOutcome {
        violations: usize,
        max_ratio: f64,
        worst: Option<Violation>,
    }

    let outcomes: Vec<PairOutcome> = pairs
        .par_iter()
        .enumerate()
        .map(|(idx, pair)| {
            let dp = pair.first.alpha() - pair.second.alpha();
            let dp2 = dp * dp;
            let dc2 = (pair.first.beta() - pair.second.beta()).norm_sqr();
            let mut out = PairOutcome { violations: 0, max_ratio: 0.0, worst: None };
            let mut worst_excess = 0.0;
            for &(t, mag, mag2, bound) in &times {
                let d = mag * (mag2 * dp2 + dc2).sqrt();
                if bound > 0.0 {
                    out.max_ratio = out.max_ratio.max(d / bound);
                }
                let excess = d - bound;
                if excess > THEOREM_TOL {
                    out.violations += 1;
                    if excess > worst_excess {
                        worst_excess = excess;
                        out.worst = Some(Violation { pair_index: idx, pair: *pair, t, distance: d, bound });
                    }
                }
            }
            out
        })
        .collect();

    let mut violations = 0;
    let mut max_ratio = 0.0f64;
    let mut worst: Option<Violation> = None;
    for o in outcomes {
        violations += o.violations;
        max_ratio = max_ratio.max(o.max_ratio);
        if let Some(w) = o.worst {
            // Strict comparison keeps the lowest pair index on ties.
            if worst.map_or(true, |cur| w.distance - w.bound > cur.distance - cur.bound) {
                worst = Some(w);
            }
        }
    }

    let optimal = StatePair::optimal();
    let mut optimal_pair_deviation = 0.0f64;
    for (k, &(t, _, _, bound)) in times.iter().enumerate() {
        let d = trace_distance_single(&optimal, b_traj.values()[k]).expect("bounded amplitude");
        optimal_pair_deviation = optimal_pair_deviation.max((d - bound).abs());
        if d - bound > THEOREM_TOL {
            violations += 1;
            if worst.is_none() {
                worst = Some(Violation { pair_index: usize::MAX, pair: optimal, t, distance: d, bound });
            }
        }
    }

    let passed = violations == 0 && optimal_pair_deviation <= OPTIMAL_PAIR_TOL;
    Ok(TheoremReport {
        samples: opts.samples,
        seed: opts.seed,
        bound_scale: scale,
        violations,
        max_ratio,
        worst,
        optimal_pair_deviation,
        passed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BruteForceResult {
    pub best_pair: StatePair,
    pub best_total: f64,
    /// Number of grid pairs visited.
    pub candidates: usize,
}

/// `density` evenly spaced points on `[0, 1]`.
fn unit_grid(density: usize) -> Vec<f64> {
    (0..density).map(|i| i as f64 / (density - 1) as f64).collect()
}

/// Grid of initial pairs: `alpha` and `mu` on `density` points of `[0, 1]`,
/// real coherences on `density` points of `[-R, R]` with `R` the largest
/// coherence the population allows. Only the relative phase of the two
/// coherences enters the distance, so real coherences lose nothing.
pub fn pair_grid(density: usize) -> Vec<StatePair> {
    let populations = unit_grid(density);
    let mut states = Vec::with_capacity(density * density);
    for &alpha in &populations {
        let radius = (alpha * (1.0 - alpha)).sqrt();
        for &u in &populations {
            let beta = C64::new((2.0 * u - 1.0) * radius, 0.0);
            states.push(QubitInitialState::new(alpha, beta).expect("grid point inside the disk"));
        }
    }
    let mut pairs = Vec::with_capacity(states.len() * states.len());
    for first in &states {
        for second in &states {
            pairs.push(StatePair::new(*first, *second));
        }
    }
    pairs
}

/// Maximizes the rise sum of `D(t)` over [`pair_grid`]`(grid_density)`.
///
/// Validation only: the optimum is known to be the `|+>, |->` pair.
pub fn brute_force_max(
    b_traj: &AmplitudeTrajectory,
    grid_density: usize,
    opts: &MeasureOptions,
) -> Result<BruteForceResult> {
    if grid_density < 3 {
        return Err(Error::contract(format!("grid density must be at least 3, got {grid_density}")));
    }
    let pairs = pair_grid(grid_density);

    // D(t) depends on the pair only through |alpha - mu| and |beta - nu|;
    // evaluate each distinct combination once.
    let key = |p: &StatePair| {
        let dp = (p.first.alpha() - p.second.alpha()).abs();
        let dc = (p.first.beta() - p.second.beta()).norm();
        (dp.to_bits(), dc.to_bits())
    };
    let mut unique: BTreeMap<(u64, u64), usize> = BTreeMap::new();
    for (i, p) in pairs.iter().enumerate() {
        unique.entry(key(p)).or_insert(i);
    }
    let reps: Vec<usize> = unique.values().copied().collect();
    let totals: Vec<Result<f64>> = reps
        .par_iter()
        .map(|&i| Ok(blp_from_trajectory(&distance_trajectory(&pairs[i], b_traj), opts)?.total))
        .collect();
    let mut by_key = BTreeMap::new();
    for (&i, total) in reps.iter().zip(totals) {
        by_key.insert(key(&pairs[i]), total?);
    }

    let mut best = (0usize, f64::NEG_INFINITY);
    for (i, p) in pairs.iter().enumerate() {
        let total = by_key[&key(p)];
        if total > best.1 {
            best = (i, total);
        }
    }
    Ok(BruteForceResult { best_pair: pairs[best.0], best_total: best.1, candidates: pairs.len() })
}
