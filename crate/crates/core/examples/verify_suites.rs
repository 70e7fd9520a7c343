//! Runs every property suite with a small trial budget and prints the slack.
//!
//!     cargo run --example verify_suites -- [seed] [trials]

use cstar_clone::verify::{run, VerifyConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let report = run(&VerifyConfig {
        seed: args.first().copied().unwrap_or(1),
        trials: Some(args.get(1).copied().unwrap_or(100) as usize),
        only: vec![],
    })?;
    for s in &report.suites {
        println!(
            "{:<4} {:<22} {:>5} trials  max defect {:.2e}  (tolerance {:.0e})",
            if s.passed { "ok" } else { "FAIL" },
            s.suite,
            s.trials,
            s.max_defect,
            s.tolerance
        );
    }
    Ok(())
}
