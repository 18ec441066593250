//! Drive the experiment runner from an in-memory config.
//!
//! cargo run --example run_config

use dg_gauge::cli::{parse_config, run, RunOptions};

const DOC: &str = r#"{
  "mode": "classify",
  "dg_params": {"hbar": 1, "mass": 1, "D": 0, "Dprime": 0.1875,
                "c1": 0, "c2": 1, "c3": 0, "c4": 0, "c5": -0.5},
  "output": "classify"
}"#;

fn main() {
    let cfg = match parse_config(DOC) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    let dir = std::env::temp_dir().join("dg_gauge_run_config");
    match run(&cfg, &RunOptions { seed: 0, output_dir: Some(dir) }) {
        Ok(summary) => {
            println!("{}", serde_json::to_string_pretty(&summary.result).unwrap());
            for f in summary.files {
                println!("wrote {}", f.display());
            }
        }
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    }
}
