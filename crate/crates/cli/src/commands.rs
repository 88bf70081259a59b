use std::fmt::Write as _;

use log::info;
use nonmark_core::amplitude::solve;
use nonmark_core::dynamics::{concurrence_bell, trace_distance_two};
use nonmark_core::export::sig12;
use nonmark_core::measure::{lorentzian_single_closed_form, verify_theorem};
use nonmark_core::reservoir::{kappa, classify_regime};
use nonmark_core::{AmplitudeTrajectory, MeasureBundle, Regime, SpectralModel, TheoremReport, VerifyOptions};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Format, Horizon, RunConfig};
use crate::error::CliError;

/// Rendered output of a command plus whether a verification failed.
pub struct Output {
    pub text: String,
    pub failure: Option<String>,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, failure: None }
    }
}

fn regime_name(r: Option<Regime>) -> &'static str {
    match r {
        Some(Regime::Markovian) => "markovian",
        Some(Regime::NonMarkovian) => "non_markovian",
        Some(Regime::Critical) => "critical",
        None => "",
    }
}

fn opt12(x: Option<f64>) -> String {
    x.map(sig12).unwrap_or_default()
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

fn trajectory(cfg: &RunConfig, horizon: Horizon) -> Result<(SpectralModel, AmplitudeTrajectory), CliError> {
    let model = cfg.spectral_model()?;
    let solver = cfg.solver_config(&model, horizon)?;
    info!("solving {:?} with {:?}, {} samples", model_name(&model), solver.method, solver.samples());
    let traj = solve(&model, &solver)?;
    Ok((model, traj))
}

fn model_name(model: &SpectralModel) -> &'static str {
    match model {
        SpectralModel::Lorentzian { .. } => "lorentzian",
        SpectralModel::OhmicFamily { .. } => "ohmic",
        SpectralModel::Tabulated { .. } => "tabulated",
    }
}

const SIMULATE_COLUMNS: [&str; 10] =
    ["t", "re_b", "im_b", "abs_b", "pop_e", "d_opt", "d_eg", "d_two", "conc_psi", "conc_phi"];

fn simulate_row(t: f64, b: nonmark_core::Complex64) -> Result<[f64; 10], CliError> {
    let mag = b.norm().min(1.0);
    let pop = mag * mag;
    let (psi, phi) = concurrence_bell(b)?;
    Ok([t, b.re, b.im, mag, pop, mag, pop, trace_distance_two(b)?, psi, phi])
}

pub fn simulate(cfg: &RunConfig, format: Format) -> Result<Output, CliError> {
    let (_, traj) = trajectory(cfg, Horizon::Dynamics)?;
    let rows = traj
        .values()
        .par_iter()
        .enumerate()
        .map(|(k, &b)| simulate_row(traj.time(k), b))
        .collect::<Result<Vec<_>, _>>()?;
    let text = match format {
        Format::Csv => {
            let mut s = SIMULATE_COLUMNS.join(",");
            s.push('\n');
            for row in &rows {
                let fields: Vec<String> = row.iter().map(|&x| sig12(x)).collect();
                s.push_str(&fields.join(","));
                s.push('\n');
            }
            s
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Table<'a> {
                dt: f64,
                columns: [&'a str; 10],
                rows: &'a [[f64; 10]],
            }
            to_json(&Table { dt: traj.dt(), columns: SIMULATE_COLUMNS, rows: &rows })
        }
    };
    Ok(Output::ok(text))
}

#[derive(Serialize)]
struct MeasureOutput {
    model: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    width_ratio: Option<f64>,
    dt: f64,
    horizon: f64,
    #[serde(flatten)]
    bundle: MeasureBundle,
}

fn measure_bundle(cfg: &RunConfig) -> Result<MeasureOutput, CliError> {
    let (model, traj) = trajectory(cfg, Horizon::Measure)?;
    let mut bundle = MeasureBundle::new(&traj, &cfg.measure_options()?)?;
    let mut width_ratio = None;
    if let SpectralModel::Lorentzian { gamma0, width, .. } = model {
        bundle = bundle.with_lorentzian(gamma0, width);
        width_ratio = Some(cfg.model.width_ratio);
    }
    Ok(MeasureOutput { model: model_name(&model), width_ratio, dt: traj.dt(), horizon: traj.t_max(), bundle })
}

const MEASURE_COLUMNS: &str = "width_ratio,regime,kappa,n_single,n_eg,n_two_lower,tail_single,tail_eg,tail_two";

fn measure_csv_row(m: &MeasureOutput) -> String {
    let b = &m.bundle;
    format!(
        "{},{},{},{},{},{},{},{},{}",
        opt12(m.width_ratio),
        regime_name(b.regime),
        opt12(b.kappa),
        sig12(b.n_single.total),
        sig12(b.n_eg.total),
        sig12(b.n_two_lower.total),
        sig12(b.n_single.tail_bound),
        sig12(b.n_eg.tail_bound),
        sig12(b.n_two_lower.tail_bound),
    )
}

pub fn measure(cfg: &RunConfig, format: Format) -> Result<Output, CliError> {
    let m = measure_bundle(cfg)?;
    info!("n_single = {}, n_eg = {}, n_two_lower = {}", m.bundle.n_single.total, m.bundle.n_eg.total, m.bundle.n_two_lower.total);
    let text = match format {
        Format::Json => to_json(&m),
        Format::Csv => format!("{MEASURE_COLUMNS}\n{}\n", measure_csv_row(&m)),
    };
    Ok(Output::ok(text))
}

#[derive(Serialize)]
struct SweepRow {
    width_ratio: f64,
    regime: &'static str,
    kappa: f64,
    n_single: f64,
    n_eg: f64,
    n_two_lower: f64,
    /// `1 / (exp(pi width / kappa) - 1)` for comparison.
    n_single_closed_form: f64,
    tail_single: f64,
}

pub fn sweep_points(cfg: &RunConfig) -> Result<Vec<f64>, CliError> {
    let s = &cfg.sweep;
    if s.steps < 2 {
        return Err(CliError::Config(format!("sweep needs at least 2 steps, got {}", s.steps)));
    }
    if !(s.width_from > 0.0 && s.width_to > 0.0) {
        return Err(CliError::Config("sweep widths must be positive".into()));
    }
    let span = s.width_to - s.width_from;
    Ok((0..s.steps).map(|i| s.width_from + span * i as f64 / (s.steps - 1) as f64).collect())
}

pub fn sweep(cfg: &RunConfig, format: Format) -> Result<Output, CliError> {
    if !matches!(cfg.spectral_model()?, SpectralModel::Lorentzian { .. }) {
        return Err(CliError::Config("sweep varies the Lorentzian width; model.kind must be lorentzian".into()));
    }
    let points = sweep_points(cfg)?;
    let rows = points
        .par_iter()
        .map(|&ratio| {
            let mut point = cfg.clone();
            point.model.width_ratio = ratio;
            let m = measure_bundle(&point)?;
            let width = point.width();
            let model = point.spectral_model()?;
            info!("width ratio {ratio}: n_single = {}", m.bundle.n_single.total);
            Ok(SweepRow {
                width_ratio: ratio,
                regime: regime_name(Some(classify_regime(&model)?)),
                kappa: kappa(&model)?,
                n_single: m.bundle.n_single.total,
                n_eg: m.bundle.n_eg.total,
                n_two_lower: m.bundle.n_two_lower.total,
                n_single_closed_form: lorentzian_single_closed_form(point.model.gamma0, width),
                tail_single: m.bundle.n_single.tail_bound,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let text = match format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut s = String::from("width_ratio,regime,kappa,n_single,n_eg,n_two_lower,n_single_closed_form,tail_single\n");
            for r in &rows {
                writeln!(
                    s,
                    "{},{},{},{},{},{},{},{}",
                    sig12(r.width_ratio),
                    r.regime,
                    sig12(r.kappa),
                    sig12(r.n_single),
                    sig12(r.n_eg),
                    sig12(r.n_two_lower),
                    sig12(r.n_single_closed_form),
                    sig12(r.tail_single)
                )
                .expect("writing to a string");
            }
            s
        }
    };
    Ok(Output::ok(text))
}

pub fn verify(cfg: &RunConfig, format: Format, bound_scale: f64) -> Result<Output, CliError> {
    let (_, traj) = trajectory(cfg, Horizon::Dynamics)?;
    let opts = VerifyOptions { samples: cfg.verify.samples, seed: cfg.verify.seed, bound_scale };
    let report: TheoremReport = verify_theorem(&traj, &opts)?;
    info!("{} violations over {} pairs, max ratio {}", report.violations, report.samples, report.max_ratio);
    let text = match format {
        Format::Json => to_json(&report),
        Format::Csv => format!(
            "samples,seed,violations,max_ratio,optimal_pair_deviation,passed\n{},{},{},{},{},{}\n",
            report.samples,
            report.seed,
            report.violations,
            sig12(report.max_ratio),
            sig12(report.optimal_pair_deviation),
            report.passed
        ),
    };
    let failure = (!report.passed).then(|| match &report.worst {
        Some(w) => format!(
            "{} violations; worst at t = {} with D = {} > bound {}",
            report.violations, w.t, w.distance, w.bound
        ),
        None => format!("optimal pair deviates from the bound by {}", report.optimal_pair_deviation),
    });
    Ok(Output { text, failure })
}
