//! Fidelity never decreases under random channels.

use cstar_clone::algebra::AlgebraSpec;
use cstar_clone::channels::{monotonicity_check, random_channel};
use cstar_clone::matcore::seeded;
use cstar_clone::states::AlgebraState;

fn main() -> cstar_clone::Result<()> {
    let mut rng = seeded(3);
    let spec = AlgebraSpec::full(3);
    let mut worst = f64::INFINITY;
    for k in 0..10u64 {
        let c = random_channel(3, 2, 2 + k as usize % 3, k)?;
        let a = AlgebraState::random_mixed(&spec, &mut rng);
        let b = AlgebraState::random_pure(&spec, &mut rng);
        let m = monotonicity_check(&c, &a, &b)?;
        worst = worst.min(m.after - m.before);
        println!("channel {k}: F {:.6} -> {:.6}  holds {}", m.before, m.after, m.holds);
    }
    println!("smallest gain {worst:.3e}");
    Ok(())
}
