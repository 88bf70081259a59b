//! Spectral densities `J(omega)` of the reservoir, the coupling-regime
//! classification of the Lorentzian, and the correlation function
//!
//! ```text
//! f(t) = integral dw J(w) exp(i (w0 - w) t)
//! ```
//!
//! that drives the amplitude equation.
//!
//! Rates are in units of a caller-chosen reference rate and times in the
//! inverse unit; nothing here assumes physical units.

use std::f64::consts::{PI, TAU};
use std::path::Path;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerances::{CRITICAL_REL_TOL, QUADRATURE_MAX_DEPTH, QUADRATURE_TOL};

/// Reservoir spectral density.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpectralModel {
    /// `J = gamma0 width^2 / (2 pi ((w0 - w)^2 + width^2))`, centred
    /// `detuning` below the qubit frequency.
    Lorentzian { gamma0: f64, width: f64, detuning: f64 },
    /// `J = coupling * cutoff^(1 - exponent) * w^exponent * exp(-w / cutoff)`
    /// on `w > 0`. `exponent < 1` is sub-Ohmic, `> 1` super-Ohmic.
    OhmicFamily { coupling: f64, exponent: f64, cutoff: f64, qubit_frequency: f64 },
    /// Piecewise-linear interpolation of `(w, J)` points, zero outside the table.
    Tabulated { points: Vec<(f64, f64)>, qubit_frequency: f64 },
}

/// Coupling regime of a Lorentzian reservoir.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    Markovian,
    NonMarkovian,
    Critical,
}

impl SpectralModel {
    /// Resonant Lorentzian (`detuning = 0`).
    pub fn lorentzian(gamma0: f64, width: f64) -> Self {
        SpectralModel::Lorentzian { gamma0, width, detuning: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::contract(format!("{name} must be a positive finite rate, got {v}")))
            }
        };
        match self {
            SpectralModel::Lorentzian { gamma0, width, detuning } => {
                positive("gamma0", *gamma0)?;
                positive("width", *width)?;
                if !detuning.is_finite() {
                    return Err(Error::contract("detuning must be finite"));
                }
            }
            SpectralModel::OhmicFamily { coupling, exponent, cutoff, qubit_frequency } => {
                positive("coupling", *coupling)?;
                positive("exponent", *exponent)?;
                positive("cutoff", *cutoff)?;
                positive("qubit_frequency", *qubit_frequency)?;
            }
            SpectralModel::Tabulated { points, qubit_frequency } => {
                positive("qubit_frequency", *qubit_frequency)?;
                if points.len() < 2 {
                    return Err(Error::contract("a tabulated spectrum needs at least two points"));
                }
                for w in points.windows(2) {
                    if !(w[1].0 > w[0].0) {
                        return Err(Error::contract(format!(
                            "tabulated frequencies must be strictly increasing ({} then {})",
                            w[0].0, w[1].0
                        )));
                    }
                }
                if let Some(&(w, j)) =
                    points.iter().find(|(w, j)| !w.is_finite() || !j.is_finite() || *j < 0.0)
                {
                    return Err(Error::contract(format!("invalid tabulated point ({w}, {j})")));
                }
            }
        }
        Ok(())
    }

    /// `true` for a Lorentzian exactly on resonance, the only case with a
    /// closed-form amplitude.
    pub fn is_resonant_lorentzian(&self) -> bool {
        matches!(self, SpectralModel::Lorentzian { detuning, .. } if *detuning == 0.0)
    }

    /// Spectral density at `omega`.
    ///
    /// The Lorentzian does not store the qubit frequency, so for that
    /// variant the argument is the detuning `w0 - w` instead of `w`.
    pub fn density(&self, omega: f64) -> f64 {
        match self {
            SpectralModel::Lorentzian { gamma0, width, detuning } => {
                let d = omega - detuning;
                gamma0 * width * width / (2.0 * PI * (d * d + width * width))
            }
            SpectralModel::OhmicFamily { coupling, exponent, cutoff, .. } => {
                if omega <= 0.0 {
                    0.0
                } else {
                    coupling * cutoff.powf(1.0 - exponent) * omega.powf(*exponent)
                        * (-omega / cutoff).exp()
                }
            }
            SpectralModel::Tabulated { points, .. } => interpolate(points, omega),
        }
    }
}

fn interpolate(points: &[(f64, f64)], omega: f64) -> f64 {
    let (first, last) = (points[0], points[points.len() - 1]);
    if omega < first.0 || omega > last.0 {
        return 0.0;
    }
    let idx = points.partition_point(|p| p.0 <= omega);
    if idx == 0 {
        return first.1;
    }
    if idx == points.len() {
        return last.1;
    }
    let (w0, j0) = points[idx - 1];
    let (w1, j1) = points[idx];
    j0 + (j1 - j0) * (omega - w0) / (w1 - w0)
}

fn lorentzian_params(model: &SpectralModel) -> Result<(f64, f64)> {
    match model {
        SpectralModel::Lorentzian { gamma0, width, .. } => {
            model.validate()?;
            Ok((*gamma0, *width))
        }
        other => Err(Error::UnsupportedModel(format!(
            "regime classification needs a Lorentzian, got {other:?}"
        ))),
    }
}

/// Markovian iff `gamma0 < width / 2`, non-Markovian iff `gamma0 > width / 2`.
pub fn classify_regime(model: &SpectralModel) -> Result<Regime> {
    let (gamma0, width) = lorentzian_params(model)?;
    Ok(regime_of(gamma0, width))
}

pub(crate) fn regime_of(gamma0: f64, width: f64) -> Regime {
    let gap = gamma0 - 0.5 * width;
    if gap.abs() <= CRITICAL_REL_TOL * width {
        Regime::Critical
    } else if gap > 0.0 {
        Regime::NonMarkovian
    } else {
        Regime::Markovian
    }
}

/// `kappa = sqrt(|width^2 - 2 gamma0 width|)`.
pub fn kappa(model: &SpectralModel) -> Result<f64> {
    let (gamma0, width) = lorentzian_params(model)?;
    Ok(kappa_of(gamma0, width))
}

pub(crate) fn kappa_of(gamma0: f64, width: f64) -> f64 {
    (width * width - 2.0 * gamma0 * width).abs().sqrt()
}

/// Uniformly sampled correlation function `f(n dt)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationSamples {
    dt: f64,
    values: Vec<C64>,
}

impl CorrelationSamples {
    pub fn new(dt: f64, values: Vec<C64>) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::contract(format!("dt must be positive, got {dt}")));
        }
        if values.is_empty() {
            return Err(Error::contract("correlation needs at least one sample"));
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numerical("non-finite correlation sample".into()));
        }
        Ok(Self { dt, values })
    }

    /// No coupling at all.
    pub fn zero(dt: f64, n: usize) -> Result<Self> {
        Self::new(dt, vec![C64::new(0.0, 0.0); n])
    }

    pub fn dt(&self) -> f64 {
        self.dt
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
}

/// Samples `f(t)` at `t = 0, dt, ..., (n - 1) dt`.
///
/// The Lorentzian uses `f(t) = (gamma0 width / 2) exp((i detuning - width) t)`;
/// the other models are integrated numerically.
pub fn correlation(model: &SpectralModel, dt: f64, n: usize) -> Result<CorrelationSamples> {
    correlation_with_tolerance(model, dt, n, QUADRATURE_TOL)
}

/// [`correlation`] with an explicit absolute quadrature tolerance per sample.
pub fn correlation_with_tolerance(
    model: &SpectralModel,
    dt: f64,
    n: usize,
    tol: f64,
) -> Result<CorrelationSamples> {
    model.validate()?;
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::contract(format!("dt must be positive, got {dt}")));
    }
    if n == 0 {
        return Err(Error::contract("need at least one correlation sample"));
    }
    let values = match model {
        SpectralModel::Lorentzian { gamma0, width, detuning } => {
            let amp = 0.5 * gamma0 * width;
            let rate = C64::new(-width, *detuning);
            (0..n).map(|k| amp * (rate * (k as f64 * dt)).exp()).collect()
        }
        SpectralModel::OhmicFamily { cutoff, qubit_frequency, .. } => {
            let upper = qubit_frequency.max(40.0 * cutoff);
            let breaks = [0.0, upper];
            sample_numerically(model, &breaks, *qubit_frequency, dt, n, tol)?
        }
        SpectralModel::Tabulated { points, qubit_frequency } => {
            let breaks: Vec<f64> = points.iter().map(|p| p.0).collect();
            sample_numerically(model, &breaks, *qubit_frequency, dt, n, tol)?
        }
    };
    CorrelationSamples::new(dt, values)
}

fn sample_numerically(
    model: &SpectralModel,
    breaks: &[f64],
    qubit_frequency: f64,
    dt: f64,
    n: usize,
    tol: f64,
) -> Result<Vec<C64>> {
    (0..n)
        .into_par_iter()
        .map(|k| {
            let t = k as f64 * dt;
            let j = |w: f64| model.density(w);
            let integral = oscillatory_integral(&j, breaks, t, tol)?;
            // Imaginary part of f(0) vanishes identically; keep it exact.
            let phase = if k == 0 { C64::new(1.0, 0.0) } else { C64::from_polar(1.0, qubit_frequency * t) };
            Ok(phase * integral)
        })
        .collect()
}

/// `integral J(w) exp(-i w t) dw` over `[breaks[0], breaks[last]]`.
///
/// Each interval between consecutive breakpoints is split into panels no
/// wider than one period `2 pi / t`, and each panel is integrated with
/// adaptive Simpson. The tolerance is shared between panels in proportion to
/// their width. A panel starting at `w = 0` is integrated in `u` with
/// `w = w1 u^4`, which smooths power-law onsets `J ~ w^s` with `s < 1`.
pub(crate) fn oscillatory_integral(
    j: &dyn Fn(f64) -> f64,
    breaks: &[f64],
    t: f64,
    tol: f64,
) -> Result<C64> {
    let lo = breaks[0];
    let hi = breaks[breaks.len() - 1];
    let span = hi - lo;
    let f = |w: f64| j(w) * C64::from_polar(1.0, -w * t);
    let mut total = C64::new(0.0, 0.0);
    for seg in breaks.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let panels = if t > 0.0 { ((b - a) * t / TAU).ceil().max(1.0) as usize } else { 1 };
        let width = (b - a) / panels as f64;
        for p in 0..panels {
            let x0 = a + p as f64 * width;
            let x1 = if p + 1 == panels { b } else { x0 + width };
            let share = tol * (x1 - x0) / span;
            total += if x0 == 0.0 {
                let g = |u: f64| {
                    let u2 = u * u;
                    4.0 * x1 * u2 * u * f(x1 * u2 * u2)
                };
                adaptive_simpson(&g, 0.0, 1.0, share)?
            } else {
                adaptive_simpson(&f, x0, x1, share)?
            };
        }
    }
    Ok(total)
}

fn adaptive_simpson(f: &dyn Fn(f64) -> C64, a: f64, b: f64, tol: f64) -> Result<C64> {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, QUADRATURE_MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &dyn Fn(f64) -> C64,
    a: f64,
    b: f64,
    fa: C64,
    fm: C64,
    fb: C64,
    whole: C64,
    tol: f64,
    depth: u32,
) -> Result<C64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.norm() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::Numerical(format!(
            "correlation quadrature did not converge on [{a}, {b}] (error estimate {:e})",
            delta.norm() / 15.0
        )));
    }
    Ok(simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
}

/// Parses a two-column `(omega, J)` table. Blank lines and anything after
/// `#` are ignored.
pub fn parse_tabulated(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut points = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse(format!(
                "line {}: expected two columns, found {}",
                lineno + 1,
                fields.len()
            )));
        }
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| Error::Parse(format!("line {}: {s:?}: {e}", lineno + 1)))
        };
        points.push((num(fields[0])?, num(fields[1])?));
    }
    Ok(points)
}

pub fn load_tabulated(path: impl AsRef<Path>) -> Result<Vec<(f64, f64)>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_tabulated(&text)
}
