//! Gauge invariants, orbits (leaves) and reconstruction from invariants.
//!
//! cargo run --example invariants_and_leaves

use dg_gauge::family::{ehrenfest, galilei, invariants, linear_se, reconstruct, same_leaf};
use dg_gauge::gauge::act_on_params;
use dg_gauge::{GaugeElement, Result};

fn main() -> Result<()> {
    let members = [
        ("linear (hbar = m = 1)", linear_se(1.0, 1.0)),
        ("ehrenfest(1, 1, 0.1, 0.05)", ehrenfest(1.0, 1.0, 0.1, 0.05)),
        ("galilei", galilei(1.0, 1.0, 0.1, 0.5, 0.3, -0.2, 0.4)),
    ];
    for (name, p) in &members {
        let iota = invariants(p)?;
        println!("{name}");
        println!("  iota0 = {:?}", iota.iota0);
        for (k, v) in iota.core().iter().enumerate() {
            println!("  iota{} = {v:+.6e}", k + 1);
        }
    }

    let p = members[1].1;
    let g = GaugeElement::new(0.7, -1.3)?;
    let q = act_on_params(&g, &p)?;
    println!("\nN(0.7, -1.3) moves the member to {:?}", q.to_array());
    println!("same leaf as before: {}", same_leaf(&p, &q, 1e-10)?);
    println!("same leaf as the linear equation: {}", same_leaf(&p, &linear_se(1.0, 1.0), 1e-10)?);

    let back = reconstruct(&invariants(&q)?, q.nu1, q.mu1)?;
    let err = back.to_array().iter().zip(q.to_array()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("reconstruct from (iota, nu1, mu1): max error {err:.3e}");
    Ok(())
}
