//! Free spreading Gaussian against the closed-form solution, then the same
//! packet under a nonlinear member.
//!
//! cargo run --release --example evolve_gaussian

use std::f64::consts::PI;

use dg_gauge::evolve::{continuity_defect, evolve, residual, EvolutionConfig};
use dg_gauge::family::{ehrenfest, linear_se};
use dg_gauge::fields::{Grid, Potential, Wavefunction};
use dg_gauge::Result;
use num_complex::Complex64;

fn spreading_gaussian(grid: Grid, sigma0: f64, t: f64) -> Result<Wavefunction> {
    let s = Complex64::new(1.0, t / (2.0 * sigma0 * sigma0));
    let amp = (2.0 * PI * sigma0 * sigma0).powf(-0.25);
    Wavefunction::from_fn(grid, |x| amp / s.sqrt() * (-(x * x) / (4.0 * sigma0 * sigma0 * s)).exp())
}

fn main() -> Result<()> {
    let grid = Grid::new(512, 40.0)?;
    let psi0 = Wavefunction::gaussian(grid, 1.0, 0.0, 0.0)?;
    let cfg = EvolutionConfig::new(1e-3, 1.0).with_record_every(10);

    let traj = evolve(&linear_se(1.0, 1.0), &Potential::Free, &psi0, &cfg)?;
    let exact = spreading_gaussian(grid, 1.0, 1.0)?;
    println!("linear: |psi(1) - exact| = {:.3e}", traj.last().l2_distance(&exact)?);
    println!("        mass drift       = {:.3e}", traj.mass_drift());

    let p = ehrenfest(1.0, 1.0, 0.08, 0.04);
    let pot = Potential::Harmonic { strength: 0.5 };
    let traj = evolve(&p, &pot, &psi0, &cfg)?;
    println!("nonlinear: residual          = {:.3e}", residual(&p, &pot, &traj)?);
    println!("           continuity defect = {:.3e}", continuity_defect(&traj)?);
    println!("           mass drift        = {:.3e}", traj.mass_drift());
    Ok(())
}
