//! Which members can be mapped onto the linear equation, and by what.
//!
//! cargo run --example classify

use dg_gauge::family::{ehrenfest, galilei, linear_se, linearizability, DEFAULT_CLASSIFY_TOL};
use dg_gauge::{EhrenfestParams, LinearizationResult, Result};

fn main() -> Result<()> {
    let cases = [
        ("linear", linear_se(1.0, 1.0)),
        ("ehrenfest(1, 1, 0, 3/16)", ehrenfest(1.0, 1.0, 0.0, 3.0 / 16.0)),
        ("ehrenfest(1, 1, 0.1, 0.05)", ehrenfest(1.0, 1.0, 0.1, 0.05)),
        ("ehrenfest(1, 1, 0, 0.3)", ehrenfest(1.0, 1.0, 0.0, 0.3)),
        ("galilei", galilei(1.0, 1.0, 0.1, 0.5, 0.3, -0.2, 0.4)),
    ];
    for (name, p) in cases {
        match linearizability(&p, DEFAULT_CLASSIFY_TOL)? {
            LinearizationResult::AlreadyLinear { constants } => {
                println!("{name:28} already linear, hbar/m = {}", constants.hbar_over_mass)
            }
            LinearizationResult::Linearizable { gauge, constants } => println!(
                "{name:28} linearizable by N({:.6}, {:.6}), hbar'/m = {:.6}",
                gauge.lambda(),
                gauge.gamma(),
                constants.hbar_over_mass
            ),
            LinearizationResult::NotLinearizable { obstruction } => println!("{name:28} not linearizable: {obstruction}"),
        }
    }

    let e = EhrenfestParams::new(1.0, 1.0, 0.1, 0.05);
    let g = e.linearizing_gauge()?;
    println!("\nclosed form for ehrenfest(1, 1, 0.1, 0.05): N({:.6}, {:.6})", g.lambda(), g.gamma());
    Ok(())
}
