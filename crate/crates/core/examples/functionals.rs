//! The quotient functionals R1..R5 and the Laplacian expansion they give.
//!
//! cargo run --example functionals

use std::f64::consts::PI;

use dg_gauge::fields::{Grid, Wavefunction};
use dg_gauge::functionals::{compute_all, laplacian_expansion_residual, FunctionalIndex};
use dg_gauge::Result;
use num_complex::Complex64;

fn main() -> Result<()> {
    let grid = Grid::new(128, 2.0 * PI)?;
    let psi = Wavefunction::from_fn(grid, |x| {
        Complex64::new(1.3 + 0.4 * x.cos(), 0.2 * (3.0 * x).sin()) * Complex64::from_polar(1.0, 2.0 * x)
    })?;
    let r = compute_all(&psi)?;
    for j in FunctionalIndex::ALL {
        let v = r.field(j);
        println!("R{}: min {:+.5} max {:+.5} integral {:+.5}", j.get(), v.min(), v.max(), v.integral());
    }
    println!("laplacian expansion residual = {:.3e}", laplacian_expansion_residual(&psi)?);

    // unchanged when psi is multiplied by a constant
    let scaled = compute_all(&psi.scaled(Complex64::from_polar(3.0, 1.1)))?;
    let j = FunctionalIndex::new(4)?;
    let d = r.get(j).iter().zip(scaled.get(j)).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("R4 change under psi -> 3 e^(1.1 i) psi = {d:.3e}");
    Ok(())
}
