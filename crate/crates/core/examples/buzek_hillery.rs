//! The universal qubit cloner: both copies reach sqrt(5/6) on every input,
//! but the output is far from a product state.

use cstar_clone::cloning::{buzek_hillery_demo, BUZEK_HILLERY_FIDELITY};

fn main() -> cstar_clone::Result<()> {
    let r = buzek_hillery_demo(12, 5)?;
    for rec in &r.records {
        println!(
            "{:<8} clone {:.12}  original {:.12}  product residual {:.4}",
            rec.id, rec.clone_fidelity, rec.original_fidelity, rec.product_residual
        );
    }
    println!("expected {BUZEK_HILLERY_FIDELITY:.12}, spread {:.1e}", r.fidelity_spread);
    Ok(())
}
