//! Evolve-then-transform against transform-then-evolve for an Ehrenfest
//! member and its linearizing gauge element.
//!
//! cargo run --release --example commuting_diagram

use dg_gauge::evolve::{commute_check, EvolutionConfig};
use dg_gauge::fields::{Grid, Potential, Wavefunction};
use dg_gauge::{EhrenfestParams, Result};

fn main() -> Result<()> {
    let grid = Grid::new(512, 40.0)?;
    let psi0 = Wavefunction::gaussian(grid, 1.0, 0.0, 0.0)?;
    let cfg = EvolutionConfig::new(1e-3, 0.5).with_record_every(50);
    let member = EhrenfestParams::new(1.0, 1.0, 0.05, 0.0);

    for pot in [Potential::Free, Potential::Harmonic { strength: 1.0 }] {
        let report = commute_check(&member, &pot, &psi0, &cfg)?;
        println!("{pot:?}: N({:.6}, {:.6})", report.gauge.lambda(), report.gauge.gamma());
        for (t, e) in report.times.iter().zip(&report.l2_error) {
            println!("  t = {t:.2}  error = {e:.3e}");
        }
    }
    Ok(())
}
