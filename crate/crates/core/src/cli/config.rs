//! Experiment configuration: one JSON document.
//!
//! ```json
//! {
//!   "mode": "commute",
//!   "dg_params": {"hbar": 1, "mass": 1, "D": 0.05, "Dprime": 0,
//!                 "c1": 0, "c2": 0, "c3": 0, "c4": 0, "c5": 0},
//!   "grid": {"n": 512, "length": 40},
//!   "initial_state": {"kind": "gaussian", "sigma0": 1},
//!   "potential": {"kind": "harmonic", "k": 1},
//!   "evolution": {"dt": 0.001, "t_end": 0.5, "record_every": 50},
//!   "output": "run"
//! }
//! ```
//!
//! Unknown keys are rejected everywhere. `evolution.rho_floor` is a multiple
//! of the mean initial density.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::evolve::{EvolutionConfig, RhoFloor, Scheme};
use crate::family::{from_dg, DgParams, EhrenfestParams, FamilyParams, PotentialCoupling};
use crate::fields::{Grid, Potential, ScalarField};
use crate::gauge::GaugeElement;

/// Tolerance for recognizing Ehrenfest members among `dg_params`.
pub const EHRENFEST_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    /// Malformed JSON, unknown keys or wrongly typed values.
    Parse { line: usize, column: usize, message: String },
    /// Well-formed document that breaks a rule; `field` names the offender.
    Validation { field: String, message: String },
}

impl ConfigError {
    fn validation(field: &str, message: impl Into<String>) -> Self {
        ConfigError::Validation { field: field.to_string(), message: message.into() }
    }

    /// The offending field of a validation error.
    pub fn field(&self) -> Option<&str> {
        match self {
            ConfigError::Validation { field, .. } => Some(field),
            ConfigError::Parse { .. } => None,
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Parse { line, column, message } => write!(f, "parse error at {line}:{column}: {message}"),
            ConfigError::Validation { field, message } => write!(f, "invalid {field}: {message}"),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Evolve,
    Transform,
    Invariants,
    Classify,
    Commute,
    Verify,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Evolve => "evolve",
            Mode::Transform => "transform",
            Mode::Invariants => "invariants",
            Mode::Classify => "classify",
            Mode::Commute => "commute",
            Mode::Verify => "verify",
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    mode: Mode,
    family_params: Option<RawFamily>,
    dg_params: Option<RawDg>,
    gauge: Option<RawGauge>,
    grid: Option<RawGrid>,
    initial_state: Option<InitialState>,
    potential: Option<RawPotential>,
    evolution: Option<RawEvolution>,
    output: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFamily {
    nu1: f64,
    nu2: f64,
    mu0: f64,
    mu1: f64,
    mu2: f64,
    mu3: f64,
    mu4: f64,
    mu5: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDg {
    hbar: f64,
    mass: f64,
    #[serde(rename = "D")]
    d: f64,
    #[serde(rename = "Dprime")]
    d_prime: f64,
    #[serde(default)]
    c1: f64,
    #[serde(default)]
    c2: f64,
    #[serde(default)]
    c3: f64,
    #[serde(default)]
    c4: f64,
    #[serde(default)]
    c5: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGauge {
    lambda: f64,
    gamma: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    n: usize,
    length: f64,
}

/// How the initial state is produced.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialState {
    Gaussian {
        sigma0: f64,
        #[serde(default)]
        x0: f64,
        #[serde(default)]
        k0: f64,
    },
    /// `exp(i k x)`; `k L / 2 pi` must be an integer.
    PlaneWave { k: f64 },
    /// A state file, relative to the config file's directory.
    File { path: PathBuf },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawPotential {
    Free {},
    Harmonic { k: f64 },
    Sampled { values: Vec<f64> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEvolution {
    dt: Option<f64>,
    t_end: Option<f64>,
    scheme: Option<RawScheme>,
    rho_floor: Option<f64>,
    record_every: Option<usize>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
enum RawScheme {
    #[serde(alias = "RK4-spectral")]
    Rk4Spectral,
    #[serde(alias = "RK4-FD2")]
    Rk4Fd2,
}

/// The equation, in whichever parameterization the document used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Parameters {
    Family(FamilyParams),
    Dg(DgParams),
}

impl Parameters {
    pub fn family(&self) -> FamilyParams {
        match self {
            Parameters::Family(p) => *p,
            Parameters::Dg(dg) => from_dg(dg),
        }
    }
}

/// A validated configuration with defaults filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub mode: Mode,
    /// Absent only in `verify` mode.
    pub parameters: Option<Parameters>,
    pub gauge: Option<GaugeElement>,
    pub grid: Grid,
    pub initial_state: InitialState,
    pub potential: Potential,
    /// `PotentialFree` only when the document says `"kind": "free"`.
    pub coupling: PotentialCoupling,
    pub evolution: EvolutionConfig,
    pub output: String,
    /// Directory that relative state-file paths are resolved against.
    pub base_dir: PathBuf,
}

pub const DEFAULT_GRID_N: usize = 256;
pub const DEFAULT_GRID_LENGTH: f64 = 40.0;
pub const DEFAULT_DT: f64 = 1e-3;
pub const DEFAULT_T_END: f64 = 0.5;
pub const DEFAULT_RECORD_EVERY: usize = 10;
pub const DEFAULT_OUTPUT: &str = "dg_gauge";

impl ExperimentConfig {
    pub fn family(&self) -> Option<FamilyParams> {
        self.parameters.map(|p| p.family())
    }

    /// The Ehrenfest coordinates of `dg_params`, if they have that form.
    pub fn ehrenfest(&self) -> Option<EhrenfestParams> {
        match self.parameters {
            Some(Parameters::Dg(dg)) => dg.as_ehrenfest(EHRENFEST_TOL),
            _ => None,
        }
    }

    pub fn resolve_path(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.base_dir.join(path)
        }
    }
}

/// Parses and validates a document. Relative paths resolve against the
/// current directory.
pub fn parse_config(document: &str) -> Result<ExperimentConfig, ConfigError> {
    parse_config_in(document, Path::new("."))
}

pub fn parse_config_in(document: &str, base_dir: &Path) -> Result<ExperimentConfig, ConfigError> {
    let raw: RawConfig = serde_json::from_str(document).map_err(|e| ConfigError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    validate(raw, base_dir)
}

fn nonzero(field: &str, v: f64) -> Result<f64, ConfigError> {
    if v == 0.0 {
        Err(ConfigError::validation(field, format!("{field} must be nonzero")))
    } else {
        Ok(v)
    }
}

fn positive(field: &str, v: f64) -> Result<f64, ConfigError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(ConfigError::validation(field, format!("{field} must be positive")))
    }
}

fn validate(raw: RawConfig, base_dir: &Path) -> Result<ExperimentConfig, ConfigError> {
    let mode = raw.mode;
    let parameters = match (raw.family_params, raw.dg_params) {
        (Some(_), Some(_)) => {
            return Err(ConfigError::validation("parameters", "give exactly one of family_params and dg_params"))
        }
        (Some(f), None) => Some(Parameters::Family(FamilyParams {
            nu1: f.nu1,
            nu2: f.nu2,
            mu0: f.mu0,
            mu1: f.mu1,
            mu2: f.mu2,
            mu3: f.mu3,
            mu4: f.mu4,
            mu5: f.mu5,
        })),
        (None, Some(d)) => {
            positive("hbar", d.hbar)?;
            positive("mass", d.mass)?;
            let dg = DgParams::new(d.hbar, d.mass, d.d, d.d_prime, [d.c1, d.c2, d.c3, d.c4, d.c5])
                .map_err(|e| ConfigError::validation("dg_params", e.to_string()))?;
            Some(Parameters::Dg(dg))
        }
        (None, None) if mode == Mode::Verify => None,
        (None, None) => {
            return Err(ConfigError::validation("parameters", "give exactly one of family_params and dg_params"))
        }
    };
    if let Some(p) = parameters.map(|p| p.family()) {
        if mode != Mode::Evolve {
            nonzero("nu1", p.nu1)?;
        }
    }

    let gauge = match raw.gauge {
        Some(g) => {
            nonzero("lambda", g.lambda)?;
            Some(GaugeElement::new(g.lambda, g.gamma).map_err(|e| ConfigError::validation("gauge", e.to_string()))?)
        }
        None if mode == Mode::Transform => {
            return Err(ConfigError::validation("gauge", "transform mode needs a gauge block"))
        }
        None => None,
    };

    let grid = match raw.grid {
        Some(g) => {
            if g.n < 2 {
                return Err(ConfigError::validation("grid.n", "grid.n must be at least 2"));
            }
            Grid::new(g.n, positive("grid.length", g.length)?)
                .map_err(|e| ConfigError::validation("grid", e.to_string()))?
        }
        None => Grid::new(DEFAULT_GRID_N, DEFAULT_GRID_LENGTH).expect("default grid"),
    };

    let initial_state = raw.initial_state.unwrap_or(InitialState::Gaussian { sigma0: 1.0, x0: 0.0, k0: 0.0 });
    match &initial_state {
        InitialState::Gaussian { sigma0, .. } => {
            positive("initial_state.sigma0", *sigma0)?;
        }
        InitialState::PlaneWave { k } => {
            let mode = k * grid.length() / (2.0 * std::f64::consts::PI);
            if !((mode - mode.round()).abs() <= 1e-9 * mode.abs().max(1.0)) {
                return Err(ConfigError::validation(
                    "initial_state.k",
                    "k * length / (2 pi) must be an integer for a periodic plane wave",
                ));
            }
        }
        InitialState::File { .. } => {}
    }

    let (potential, coupling) = match raw.potential {
        None => (Potential::Free, PotentialCoupling::WithPotential),
        Some(RawPotential::Free {}) => (Potential::Free, PotentialCoupling::PotentialFree),
        Some(RawPotential::Harmonic { k }) => {
            if !k.is_finite() {
                return Err(ConfigError::validation("potential.k", "potential.k must be finite"));
            }
            (Potential::Harmonic { strength: k }, PotentialCoupling::WithPotential)
        }
        Some(RawPotential::Sampled { values }) => {
            let field = ScalarField::new(grid, values).map_err(|e| ConfigError::validation("potential.values", e.to_string()))?;
            (Potential::Sampled(field), PotentialCoupling::WithPotential)
        }
    };

    let ev = raw.evolution.unwrap_or(RawEvolution { dt: None, t_end: None, scheme: None, rho_floor: None, record_every: None });
    let mut evolution = EvolutionConfig::new(
        positive("evolution.dt", ev.dt.unwrap_or(DEFAULT_DT))?,
        positive("evolution.t_end", ev.t_end.unwrap_or(DEFAULT_T_END))?,
    )
    .with_record_every(ev.record_every.unwrap_or(DEFAULT_RECORD_EVERY));
    if evolution.record_every == 0 {
        return Err(ConfigError::validation("evolution.record_every", "evolution.record_every must be positive"));
    }
    if let Some(s) = ev.scheme {
        evolution = evolution.with_scheme(match s {
            RawScheme::Rk4Spectral => Scheme::Rk4Spectral,
            RawScheme::Rk4Fd2 => Scheme::Rk4Fd2,
        });
    }
    if let Some(f) = ev.rho_floor {
        if !(f >= 0.0 && f.is_finite()) {
            return Err(ConfigError::validation("evolution.rho_floor", "evolution.rho_floor must be nonnegative"));
        }
        evolution = evolution.with_rho_floor(RhoFloor::RelativeToMean(f));
    }

    if mode == Mode::Commute {
        let ehrenfest = match parameters {
            Some(Parameters::Dg(dg)) => dg.as_ehrenfest(EHRENFEST_TOL),
            _ => None,
        };
        if ehrenfest.is_none() {
            return Err(ConfigError::validation(
                "dg_params",
                "commute mode needs dg_params of Ehrenfest form (D'c1 = D = -D'c4, c2 + 2 c5 = 0, c3 = 0)",
            ));
        }
    }

    let output = raw.output.unwrap_or_else(|| DEFAULT_OUTPUT.to_string());
    if output.is_empty() {
        return Err(ConfigError::validation("output", "output prefix must not be empty"));
    }

    Ok(ExperimentConfig {
        mode,
        parameters,
        gauge,
        grid,
        initial_state,
        potential,
        coupling,
        evolution,
        output,
        base_dir: base_dir.to_path_buf(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const LINEAR: &str = r#"{"nu1": -0.5, "nu2": 0, "mu0": 1, "mu1": 0, "mu2": -0.25, "mu3": 0.5, "mu4": 0, "mu5": 0.125}"#;

    #[test]
    fn minimal_document_gets_defaults() {
        let cfg = parse_config(&format!(r#"{{"mode": "invariants", "family_params": {LINEAR}}}"#)).unwrap();
        assert_eq!(cfg.mode, Mode::Invariants);
        assert_eq!(cfg.grid.n(), DEFAULT_GRID_N);
        assert_eq!(cfg.evolution.dt, DEFAULT_DT);
        assert_eq!(cfg.coupling, PotentialCoupling::WithPotential);
        assert_eq!(cfg.output, DEFAULT_OUTPUT);
        assert_eq!(cfg.family().unwrap().mu3, 0.5);
    }

    #[test]
    fn both_parameter_blocks_rejected() {
        let doc = format!(
            r#"{{"mode": "invariants", "family_params": {LINEAR},
                "dg_params": {{"hbar": 1, "mass": 1, "D": 0, "Dprime": 0}}}}"#
        );
        assert_eq!(parse_config(&doc).unwrap_err().field(), Some("parameters"));
    }

    #[test]
    fn zero_nu1_rejected() {
        let doc = LINEAR.replace("-0.5", "0");
        let err = parse_config(&format!(r#"{{"mode": "invariants", "family_params": {doc}}}"#)).unwrap_err();
        match err {
            ConfigError::Validation { field, message } => {
                assert_eq!(field, "nu1");
                assert_eq!(message, "nu1 must be nonzero");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_keys_and_bad_json_report_position() {
        let err = parse_config(r#"{"mode": "verify", "colour": 1}"#).unwrap_err();
        assert!(matches!(err, ConfigError::Parse { line: 1, .. }), "{err:?}");
        let err = parse_config("{\n  \"mode\": \"verify\",\n  oops\n}").unwrap_err();
        assert!(matches!(err, ConfigError::Parse { line: 3, .. }), "{err:?}");
        let err = parse_config(r#"{"mode": "verify", "potential": {"kind": "free", "k": 2}}"#).unwrap_err();
        assert!(matches!(err, ConfigError::Parse { .. }), "{err:?}");
    }

    #[test]
    fn commute_requires_ehrenfest_dg_params() {
        let err = parse_config(&format!(r#"{{"mode": "commute", "family_params": {LINEAR}}}"#)).unwrap_err();
        assert_eq!(err.field(), Some("dg_params"));
        let doc = r#"{"mode": "commute",
            "dg_params": {"hbar": 1, "mass": 1, "D": 0.05, "Dprime": 1, "c1": 0.05, "c4": -0.05}}"#;
        let cfg = parse_config(doc).unwrap();
        assert_eq!(cfg.ehrenfest().unwrap().d, 0.05);
        let bad = doc.replace("\"c4\": -0.05", "\"c4\": 0.05");
        assert_eq!(parse_config(&bad).unwrap_err().field(), Some("dg_params"));
    }

    #[test]
    fn explicit_free_potential_drops_coupling() {
        let doc = format!(r#"{{"mode": "invariants", "family_params": {LINEAR}, "potential": {{"kind": "free"}}}}"#);
        assert_eq!(parse_config(&doc).unwrap().coupling, PotentialCoupling::PotentialFree);
    }

    #[test]
    fn field_level_checks() {
        let cases = [
            (r#""mode": "transform""#, "gauge"),
            (r#""mode": "transform", "gauge": {"lambda": 0, "gamma": 1}"#, "lambda"),
            (r#""mode": "evolve", "grid": {"n": 1, "length": 2}"#, "grid.n"),
            (r#""mode": "evolve", "evolution": {"dt": -1}"#, "evolution.dt"),
            (r#""mode": "evolve", "initial_state": {"kind": "plane_wave", "k": 0.3}"#, "initial_state.k"),
            (r#""mode": "evolve", "grid": {"n": 4, "length": 1}, "potential": {"kind": "sampled", "values": [1, 2]}"#, "potential.values"),
        ];
        for (body, field) in cases {
            let doc = format!(r#"{{{body}, "family_params": {LINEAR}}}"#);
            assert_eq!(parse_config(&doc).unwrap_err().field(), Some(field), "{body}");
        }
    }

    #[test]
    fn verify_needs_no_parameters() {
        let cfg = parse_config(r#"{"mode": "verify"}"#).unwrap();
        assert!(cfg.parameters.is_none());
    }
}
