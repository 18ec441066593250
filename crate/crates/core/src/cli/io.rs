//! Plain-text output files.
//!
//! A state file is a header line `n length dim` followed by one `re im` line
//! per sample in flat order. Floats use shortest round-trip formatting, so
//! writing and reading back reproduces every bit.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use super::CliError;
use crate::fields::{Grid, Wavefunction};

pub fn format_state(psi: &Wavefunction) -> String {
    let g = psi.grid();
    let mut out = String::with_capacity(48 * psi.len());
    let _ = writeln!(out, "{} {:e} {}", g.n(), g.length(), g.dim());
    for v in psi.values() {
        let _ = writeln!(out, "{:e} {:e}", v.re, v.im);
    }
    out
}

pub fn parse_state(text: &str, path: &Path) -> Result<Wavefunction, CliError> {
    let bad = |line: usize, reason: String| CliError::StateFile { path: path.to_path_buf(), line, reason };
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| bad(1, "empty file".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(bad(1, "header must be `n length dim`".into()));
    }
    let n: usize = fields[0].parse().map_err(|_| bad(1, format!("bad n `{}`", fields[0])))?;
    let length: f64 = fields[1].parse().map_err(|_| bad(1, format!("bad length `{}`", fields[1])))?;
    let dim: usize = fields[2].parse().map_err(|_| bad(1, format!("bad dim `{}`", fields[2])))?;
    let grid = Grid::with_dim(n, length, dim).map_err(|e| bad(1, e.to_string()))?;
    let mut values = Vec::with_capacity(grid.len());
    for (i, line) in lines {
        let mut parts = line.split_whitespace();
        let mut next = || -> Result<f64, CliError> {
            let s = parts.next().ok_or_else(|| bad(i + 1, "expected `re im`".into()))?;
            s.parse().map_err(|_| bad(i + 1, format!("bad number `{s}`")))
        };
        let (re, im) = (next()?, next()?);
        if parts.next().is_some() {
            return Err(bad(i + 1, "expected `re im`".into()));
        }
        values.push(Complex64::new(re, im));
    }
    Wavefunction::new(grid, values).map_err(|e| bad(0, e.to_string()))
}

pub fn write_state(path: &Path, psi: &Wavefunction) -> Result<(), CliError> {
    write_text(path, &format_state(psi))
}

pub fn read_state(path: &Path) -> Result<Wavefunction, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_state(&text, path)
}

/// One row of `<prefix>_series.csv`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesRow {
    pub t: f64,
    pub norm: f64,
    pub energy: f64,
    pub l2_error: Option<f64>,
}

/// CSV with a `# seed=N` comment line and columns `t,norm,energy,l2_error`.
/// `l2_error` is left empty when it does not apply.
pub fn format_series(seed: u64, rows: &[SeriesRow]) -> String {
    let mut out = format!("# seed={seed}\nt,norm,energy,l2_error\n");
    for r in rows {
        let err = r.l2_error.map(|e| format!("{e:e}")).unwrap_or_default();
        let _ = writeln!(out, "{:e},{:e},{:e},{}", r.t, r.norm, r.energy, err);
    }
    out
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Output file names derived from a prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputPaths {
    prefix: PathBuf,
}

impl OutputPaths {
    pub fn new(dir: Option<&Path>, prefix: &str) -> Self {
        let prefix = match dir {
            Some(d) => d.join(prefix),
            None => PathBuf::from(prefix),
        };
        OutputPaths { prefix }
    }

    fn with_suffix(&self, suffix: &str) -> PathBuf {
        let mut s = self.prefix.clone().into_os_string();
        s.push(suffix);
        PathBuf::from(s)
    }

    pub fn series(&self) -> PathBuf {
        self.with_suffix("_series.csv")
    }

    pub fn result(&self) -> PathBuf {
        self.with_suffix("_result.json")
    }

    pub fn state(&self, k: usize) -> PathBuf {
        self.with_suffix(&format!("_state_{k}.txt"))
    }
}
