//! Apply a gauge element to a moving Gaussian and check what it preserves.
//!
//! cargo run --example gauge_action

use dg_gauge::fields::{current, density, Grid, Wavefunction, ZeroFloor};
use dg_gauge::gauge::{apply_with_floor, symplectic_factor, transform_current};
use dg_gauge::{GaugeElement, Result};
use num_complex::Complex64;

fn main() -> Result<()> {
    let grid = Grid::new(256, 20.0)?;
    let psi = Wavefunction::gaussian(grid, 1.5, 0.0, 1.0)?;
    let g = GaugeElement::new(2.0, 0.5)?;

    // the Gaussian tails sit far below the default relative floor
    let out = apply_with_floor(&g, &psi, ZeroFloor::STRICT_NONZERO)?;

    let rho = density(&psi);
    let rho_out = density(&out);
    let drho = rho.values().iter().zip(rho_out.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("max |rho' - rho|            = {drho:.3e}");

    let j_out = current(&out);
    let j_formula = transform_current(&g, &rho, &current(&psi));
    match j_formula {
        Ok(j) => println!("|J' - (lambda J + gamma/2 grad rho)| = {:.3e}", j_out.l2_distance(&j)?),
        Err(e) => println!("current formula skipped: {e}"),
    }

    let h = g.inverse();
    let back = apply_with_floor(&h, &out, ZeroFloor::STRICT_NONZERO)?;
    println!("|N^-1 N psi - psi|          = {:.3e}", back.l2_distance(&psi)?);

    let probe = symplectic_factor(&g, Complex64::new(0.3, -0.8))?;
    println!("Jacobian determinant        = {:.9} (lambda = {})", probe.jacobian_det, g.lambda());
    Ok(())
}
