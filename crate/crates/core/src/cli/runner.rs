//! Mode dispatch.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use super::config::{parse_config_in, ExperimentConfig, InitialState, Mode};
use super::io::{self, OutputPaths, SeriesRow};
use super::{verify, CliError};
use crate::evolve::{self, FamilyRhs, Trajectory, SNAPSHOT_ZERO_FLOOR};
use crate::family::{self, EmergentConstants, FamilyParams, LinearizationResult, Obstruction, DEFAULT_CLASSIFY_TOL};
use crate::fields::{Potential, Wavefunction};
use crate::gauge::{self, GaugeElement};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub seed: u64,
    /// Directory in front of the output prefix.
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub mode: Mode,
    pub files: Vec<PathBuf>,
    /// The JSON result document as written.
    pub result: Value,
}

/// Reads and validates a config file; relative paths inside it resolve
/// against its directory.
pub fn load_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::ConfigFile { path: path.to_path_buf(), source })?;
    let base = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    Ok(parse_config_in(&text, base)?)
}

struct Outputs {
    paths: OutputPaths,
    seed: u64,
    files: Vec<PathBuf>,
}

impl Outputs {
    fn series(&mut self, rows: &[SeriesRow]) -> Result<(), CliError> {
        let path = self.paths.series();
        io::write_text(&path, &io::format_series(self.seed, rows))?;
        self.files.push(path);
        Ok(())
    }

    fn state(&mut self, k: usize, psi: &Wavefunction) -> Result<(), CliError> {
        let path = self.paths.state(k);
        io::write_state(&path, psi)?;
        self.files.push(path);
        Ok(())
    }

    fn result(&mut self, value: &Value) -> Result<(), CliError> {
        let path = self.paths.result();
        let mut text = serde_json::to_string_pretty(value).expect("json values serialize");
        text.push('\n');
        io::write_text(&path, &text)?;
        self.files.push(path);
        Ok(())
    }
}

/// Runs one experiment and writes its outputs.
///
/// In `verify` mode the result document is written before a failing suite
/// is reported as [`CliError::VerifyFailed`].
pub fn run(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<RunSummary, CliError> {
    let mut out =
        Outputs { paths: OutputPaths::new(opts.output_dir.as_deref(), &cfg.output), seed: opts.seed, files: Vec::new() };
    let mut result = match cfg.mode {
        Mode::Evolve => run_evolve(cfg, &mut out)?,
        Mode::Transform => run_transform(cfg, &mut out)?,
        Mode::Invariants => run_invariants(cfg)?,
        Mode::Classify => run_classify(cfg)?,
        Mode::Commute => run_commute(cfg, &mut out)?,
        Mode::Verify => run_verify(opts.seed),
    };
    let mut doc = json!({ "mode": cfg.mode.name(), "seed": opts.seed });
    doc.as_object_mut().expect("object").append(result.as_object_mut().expect("mode results are objects"));
    out.result(&doc)?;
    if cfg.mode == Mode::Verify {
        let failed = doc["failed"].as_u64().unwrap_or(0) as usize;
        if failed > 0 {
            return Err(CliError::VerifyFailed { failed, total: verify::check_names().len() });
        }
    }
    Ok(RunSummary { mode: cfg.mode, files: out.files, result: doc })
}

fn family_of(cfg: &ExperimentConfig) -> FamilyParams {
    cfg.family().expect("validated config carries parameters outside verify mode")
}

fn initial_state(cfg: &ExperimentConfig) -> Result<Wavefunction, CliError> {
    let grid = cfg.grid;
    Ok(match &cfg.initial_state {
        InitialState::Gaussian { sigma0, x0, k0 } => Wavefunction::gaussian(grid, *sigma0, *x0, *k0)?,
        InitialState::PlaneWave { k } => {
            Wavefunction::plane_wave(grid, (k * grid.length() / (2.0 * std::f64::consts::PI)).round() as i64)?
        }
        InitialState::File { path } => {
            let path = cfg.resolve_path(path);
            let psi = io::read_state(&path)?;
            if psi.grid() != &grid {
                return Err(CliError::StateFile {
                    path,
                    line: 1,
                    reason: format!(
                        "state grid ({} points, length {}) differs from the configured grid ({} points, length {})",
                        psi.grid().n(),
                        psi.grid().length(),
                        grid.n(),
                        grid.length()
                    ),
                });
            }
            psi
        }
    })
}

/// Drops the sign of negative zero.
fn num(x: f64) -> f64 {
    x + 0.0
}

fn params_json(p: &FamilyParams) -> Value {
    json!({
        "nu1": num(p.nu1), "nu2": num(p.nu2), "mu0": num(p.mu0), "mu1": num(p.mu1),
        "mu2": num(p.mu2), "mu3": num(p.mu3), "mu4": num(p.mu4), "mu5": num(p.mu5),
    })
}

fn gauge_json(g: &GaugeElement) -> Value {
    json!({ "lambda": num(g.lambda()), "gamma": num(g.gamma()) })
}

fn series_rows(traj: &Trajectory, potential: &Potential, errors: Option<&[f64]>) -> Result<Vec<SeriesRow>, CliError> {
    let f = FamilyRhs::new(traj.params, potential, *traj.grid(), traj.scheme, traj.rho_floor)?;
    Ok(traj
        .times
        .iter()
        .zip(&traj.states)
        .enumerate()
        .map(|(i, (&t, s))| SeriesRow { t, norm: s.norm(), energy: f.energy_like(s), l2_error: errors.map(|e| e[i]) })
        .collect())
}

fn optional(r: crate::Result<f64>) -> Value {
    r.map(Value::from).unwrap_or(Value::Null)
}

fn run_evolve(cfg: &ExperimentConfig, out: &mut Outputs) -> Result<Value, CliError> {
    let p = family_of(cfg);
    let psi0 = initial_state(cfg)?;
    let traj = evolve::evolve(&p, &cfg.potential, &psi0, &cfg.evolution)?;
    out.series(&series_rows(&traj, &cfg.potential, None)?)?;
    for (k, s) in traj.states.iter().enumerate() {
        out.state(k, s)?;
    }
    let (steps, dt) = cfg.evolution.steps();
    Ok(json!({
        "params": params_json(&p),
        "steps": steps,
        "dt": dt,
        "rho_floor": traj.rho_floor,
        "snapshots": traj.states.len(),
        "t_end": traj.times.last().copied().unwrap_or(0.0),
        "mass_drift": traj.mass_drift(),
        "residual": optional(evolve::residual(&p, &cfg.potential, &traj)),
        "continuity_defect": optional(evolve::continuity_defect(&traj)),
    }))
}

fn run_transform(cfg: &ExperimentConfig, out: &mut Outputs) -> Result<Value, CliError> {
    let g = cfg.gauge.expect("validated transform config has a gauge");
    let psi = initial_state(cfg)?;
    let transformed = gauge::apply_with_floor(&g, &psi, SNAPSHOT_ZERO_FLOOR)?;
    out.state(0, &transformed)?;
    let density_change = psi
        .values()
        .iter()
        .zip(transformed.values())
        .map(|(a, b)| (a.norm_sqr() - b.norm_sqr()).abs())
        .fold(0.0, f64::max);
    let p = family_of(cfg);
    Ok(json!({
        "gauge": gauge_json(&g),
        "params": params_json(&p),
        "primed_params": params_json(&gauge::act_on_params(&g, &p)?),
        "max_density_change": density_change,
    }))
}

fn invariants_json(cfg: &ExperimentConfig) -> Result<Value, CliError> {
    let iota = family::invariants_with(&family_of(cfg), cfg.coupling)?;
    Ok(json!({
        "iota0": iota.iota0.map(num), "iota1": num(iota.iota1), "iota2": num(iota.iota2),
        "iota3": num(iota.iota3), "iota4": num(iota.iota4), "iota5": num(iota.iota5),
    }))
}

fn run_invariants(cfg: &ExperimentConfig) -> Result<Value, CliError> {
    Ok(json!({ "params": params_json(&family_of(cfg)), "invariants": invariants_json(cfg)? }))
}

fn constants_json(c: &EmergentConstants) -> Value {
    json!({ "hbar_over_mass": c.hbar_over_mass, "mass": c.mass, "hbar": c.hbar_prime() })
}

fn run_classify(cfg: &ExperimentConfig) -> Result<Value, CliError> {
    let p = family_of(cfg);
    let class = family::linearizability_with(&p, DEFAULT_CLASSIFY_TOL, cfg.coupling)?;
    let mut doc = json!({ "params": params_json(&p), "invariants": invariants_json(cfg)? });
    let m = doc.as_object_mut().expect("object");
    match class {
        LinearizationResult::AlreadyLinear { constants } => {
            m.insert("classification".into(), "already_linear".into());
            m.insert("gauge".into(), gauge_json(&GaugeElement::IDENTITY));
            m.insert("linear_constants".into(), constants_json(&constants));
        }
        LinearizationResult::Linearizable { gauge, constants } => {
            m.insert("classification".into(), "linearizable".into());
            m.insert("gauge".into(), gauge_json(&gauge));
            m.insert("lambda_sign".into(), "positive".into());
            m.insert("linear_constants".into(), constants_json(&constants));
        }
        LinearizationResult::NotLinearizable { obstruction } => {
            m.insert("classification".into(), "not_linearizable".into());
            let value = match obstruction {
                Obstruction::NonzeroInvariant { value, .. } | Obstruction::NonpositiveIota1 { value } => value,
            };
            m.insert("obstruction".into(), json!({ "reason": obstruction.to_string(), "value": value }));
        }
    }
    if let Some(e) = cfg.ehrenfest() {
        m.insert(
            "ehrenfest_closed_form".into(),
            match e.linearizing_gauge() {
                Ok(g) => gauge_json(&g),
                Err(_) => Value::Null,
            },
        );
    }
    Ok(doc)
}

fn run_commute(cfg: &ExperimentConfig, out: &mut Outputs) -> Result<Value, CliError> {
    let e = cfg.ehrenfest().expect("validated commute config is Ehrenfest");
    let psi0 = initial_state(cfg)?;
    let report = evolve::commute_check(&e, &cfg.potential, &psi0, &cfg.evolution)?;
    out.series(&series_rows(&report.primed, &cfg.potential, Some(&report.l2_error))?)?;
    out.state(0, report.transformed.last())?;
    out.state(1, report.primed.last())?;
    Ok(json!({
        "gauge": gauge_json(&report.gauge),
        "params": params_json(&e.family()),
        "primed_params": params_json(&report.primed_params),
        "max_l2_error": report.max_error(),
        "final_l2_error": report.l2_error.last().copied().unwrap_or(0.0),
        "mass_drift": report.transformed.mass_drift().max(report.primed.mass_drift()),
    }))
}

fn run_verify(seed: u64) -> Value {
    let outcomes = verify::run_suite(seed);
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    let checks: Vec<Value> = outcomes
        .iter()
        .map(|o| {
            let bound = match o.bound {
                verify::Bound::AtMost(t) => json!({ "at_most": t }),
                verify::Bound::Within(lo, hi) => json!({ "within": [lo, hi] }),
            };
            json!({
                "name": o.name,
                "passed": o.passed(),
                "cases": o.cases,
                "value": if o.value.is_finite() { Value::from(o.value) } else { Value::Null },
                "bound": bound,
                "error": o.error,
            })
        })
        .collect();
    json!({ "passed": outcomes.len() - failed, "failed": failed, "checks": checks })
}
