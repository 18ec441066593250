//! The seeded property suite, printed as a table.
//!
//! cargo run --release --example verify_suite -- 42

use dg_gauge::cli::verify::{run_suite, Bound};

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let outcomes = run_suite(seed);
    for o in &outcomes {
        let bound = match o.bound {
            Bound::AtMost(t) => format!("<= {t:e}"),
            Bound::Within(lo, hi) => format!("in [{lo}, {hi}]"),
        };
        let status = if o.passed() { "ok  " } else { "FAIL" };
        println!("{status} {:26} {:>5} cases  {:>12.3e} {bound}", o.name, o.cases, o.value);
        if let Some(e) = &o.error {
            println!("     {e}");
        }
    }
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    println!("seed {seed}: {} passed, {failed} failed", outcomes.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
