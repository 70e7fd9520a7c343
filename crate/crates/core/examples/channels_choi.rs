//! Builds channels from Kraus operators, round-trips them through their Choi
//! matrix and JSON, and checks complete positivity and trace preservation.

use cstar_clone::channels::{compose, depolarizing, random_channel, swap, tensor, QuantumChannel};
use cstar_clone::matcore::{pauli_x, ComplexMatrix};

fn describe(name: &str, c: &QuantumChannel) {
    println!(
        "{name:<18} {} -> {}  kraus {}  cp {}  tp {}  tp defect {:.1e}",
        c.in_dim(),
        c.out_dim(),
        c.kraus().len(),
        c.is_cp(),
        c.is_trace_preserving(),
        c.trace_preservation_defect()
    );
}

fn main() -> cstar_clone::Result<()> {
    let flip = QuantumChannel::from_kraus(2, 2, vec![pauli_x().scale(0.6), ComplexMatrix::identity(2).scale(0.8)])?;
    describe("bit flip p=0.36", &flip);
    describe("depolarizing 0.3", &depolarizing(2, 0.3)?);
    describe("swap on C^2 x C^2", &swap(2));
    let random = random_channel(2, 3, 2, 7)?;
    describe("random 2 -> 3", &random);
    describe("random . flip", &compose(&random, &flip)?);
    describe("flip x flip", &tensor(&flip, &flip));

    let back = QuantumChannel::from_choi(2, 3, &random.to_choi())?;
    println!("choi round trip discrepancy {:.2e}", random.max_action_discrepancy(&back)?);

    let json = serde_json::to_string(&random).expect("channel serializes");
    let parsed: QuantumChannel = serde_json::from_str(&json).expect("channel parses");
    println!("json round trip discrepancy {:.2e} ({} bytes)", random.max_action_discrepancy(&parsed)?, json.len());

    // A transpose map is positive but not completely positive.
    let mut choi = ComplexMatrix::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            choi[(i * 2 + j, j * 2 + i)] = 1.0.into();
        }
    }
    match QuantumChannel::from_choi(2, 2, &choi) {
        Ok(_) => println!("transpose accepted?"),
        Err(e) => println!("transpose rejected: {e}"),
    }
    Ok(())
}
