//! Searches for a non-entangling qubit cloner and reports the best feasible
//! worst-case clone fidelity, then repeats without the constraints.
//!
//!     cargo run --release --example optimize_cloner -- [restarts] [iters] [seed]

use cstar_clone::algebra::AlgebraSpec;
use cstar_clone::cloning::{optimize_cloner, OptimizerConfig, BUZEK_HILLERY_FIDELITY};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let config = OptimizerConfig {
        restarts: args.first().copied().unwrap_or(8) as usize,
        iters: args.get(1).copied().unwrap_or(20000) as usize,
        seed: args.get(2).copied().unwrap_or(1),
        ..OptimizerConfig::default()
    };
    let factor = AlgebraSpec::full(2);

    let constrained = optimize_cloner(&factor, &config)?;
    println!("constrained search, {} restarts", constrained.stats.restarts);
    for r in &constrained.restarts {
        println!(
            "  restart {:>2}: F = {:.6}  product {:.1e}  marginal {:.1e}  purity {:.1e}  feasible {}",
            r.index, r.worst_fidelity, r.product_residual, r.marginal_residual, r.purity_defect, r.feasible
        );
    }
    match &constrained.best {
        Some(b) => println!("best feasible worst-case fidelity {:.6} (restart {})", b.worst_fidelity, b.restart),
        None => println!("no restart reached the feasibility tolerances"),
    }

    let free = optimize_cloner(&factor, &OptimizerConfig { penalties: false, ..config })?;
    if let Some(b) = &free.best {
        println!(
            "unconstrained worst fidelity of either copy {:.6} (universal cloner: {:.6})",
            b.worst_fidelity, BUZEK_HILLERY_FIDELITY
        );
    }
    Ok(())
}
