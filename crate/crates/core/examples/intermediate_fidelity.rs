//! A matrix block realizes every fidelity in [0, 1] between pure states;
//! on a diagonal algebra pure states are either equal or orthogonal.

use cstar_clone::algebra::{construct_pure_pair, AlgebraSpec};
use cstar_clone::states::fidelity;

fn main() -> cstar_clone::Result<()> {
    let block = AlgebraSpec::full(2);
    for i in 0..=10 {
        let alpha = i as f64 / 10.0;
        let (a, b) = construct_pure_pair(&block, alpha, 42)?;
        println!("alpha {alpha:.1}: F = {:.12}", fidelity(&a, &b)?);
    }
    let abelian = AlgebraSpec::diagonal(3);
    for alpha in [0.0, 1.0, 0.5] {
        match construct_pure_pair(&abelian, alpha, 0) {
            Ok((a, b)) => println!("abelian alpha {alpha}: F = {}", fidelity(&a, &b)?),
            Err(e) => println!("abelian alpha {alpha}: {e}"),
        }
    }
    Ok(())
}
