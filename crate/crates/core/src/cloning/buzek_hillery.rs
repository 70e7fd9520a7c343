use serde::{Deserialize, Serialize};

use super::{analyze_output, clone_output};
use crate::algebra::{AlgebraSpec, CommutingPair};
use crate::channels::{compose, discard_second, from_isometry, QuantumChannel};
use crate::error::Result;
use crate::matcore::vectors::basis_vector;
use crate::matcore::{random, Complex64, ComplexMatrix};
use crate::states::AlgebraState;

/// √(5/6), the clone fidelity of the universal symmetric qubit cloner.
pub const BUZEK_HILLERY_FIDELITY: f64 = 0.912_870_929_175_276_9;

/// The universal qubit cloner ℂ² → ℂ² ⊗ ℂ² with its ancilla traced out.
///
/// |0⟩ ↦ √(2/3)|00⟩|0⟩ + √(1/3)|Ψ⁺⟩|1⟩ and |1⟩ ↦ √(2/3)|11⟩|1⟩ + √(1/3)|Ψ⁺⟩|0⟩,
/// with |Ψ⁺⟩ = (|01⟩ + |10⟩)/√2.
pub fn buzek_hillery_channel() -> QuantumChannel {
    let big = (2.0f64 / 3.0).sqrt();
    let small = (1.0f64 / 6.0).sqrt();
    // Rows are (output o, ancilla a) with a fastest.
    let mut v = ComplexMatrix::zeros(8, 2);
    let c = |x: f64| Complex64::new(x, 0.0);
    v[(0, 0)] = c(big);
    v[(2 + 1, 0)] = c(small);
    v[(2 * 2 + 1, 0)] = c(small);
    v[(2 * 3 + 1, 1)] = c(big);
    v[(2, 1)] = c(small);
    v[(2 * 2, 1)] = c(small);
    from_isometry(&v, 4, 2)
}

/// The cloner acting on the pair: the blank is discarded and regenerated.
pub fn buzek_hillery_pair_channel() -> QuantumChannel {
    compose(&buzek_hillery_channel(), &discard_second(2, 2)).expect("dimensions match")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuzekHilleryRecord {
    pub id: String,
    pub clone_fidelity: f64,
    pub original_fidelity: f64,
    pub product_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuzekHilleryReport {
    pub expected_fidelity: f64,
    pub samples: usize,
    pub seed: u64,
    pub min_clone_fidelity: f64,
    pub max_clone_fidelity: f64,
    pub fidelity_spread: f64,
    pub max_deviation_from_expected: f64,
    pub min_product_residual: f64,
    pub records: Vec<BuzekHilleryRecord>,
}

/// Runs the cloner on |0⟩ and on `samples` Haar-random inputs.
pub fn buzek_hillery_demo(samples: usize, seed: u64) -> Result<BuzekHilleryReport> {
    let spec = AlgebraSpec::full(2);
    let pair = CommutingPair::new(spec.clone());
    let channel = buzek_hillery_pair_channel();
    let blank = AlgebraState::pure(spec.clone(), 0, &basis_vector(2, 0))?;
    let mut inputs = vec![("zero".to_string(), blank.clone())];
    for k in 0..samples {
        inputs.push((format!("haar-{k}"), AlgebraState::random_pure(&spec, &mut random::stream(seed, k as u64))));
    }
    let mut records = Vec::with_capacity(inputs.len());
    for (id, psi) in inputs {
        let out = clone_output(&channel, &pair, &psi, &blank)?;
        let a = analyze_output(&pair, &psi, &out)?;
        records.push(BuzekHilleryRecord {
            id,
            clone_fidelity: a.clone_fidelity,
            original_fidelity: a.original_fidelity,
            product_residual: a.product_residual,
        });
    }
    let fids = || records.iter().flat_map(|r| [r.clone_fidelity, r.original_fidelity]);
    let min = fids().fold(f64::INFINITY, f64::min);
    let max = fids().fold(f64::NEG_INFINITY, f64::max);
    let dev = fids().map(|f| (f - BUZEK_HILLERY_FIDELITY).abs()).fold(0.0, f64::max);
    Ok(BuzekHilleryReport {
        expected_fidelity: BUZEK_HILLERY_FIDELITY,
        samples,
        seed,
        min_clone_fidelity: min,
        max_clone_fidelity: max,
        fidelity_spread: max - min,
        max_deviation_from_expected: dev,
        min_product_residual: records.iter().map(|r| r.product_residual).fold(f64::INFINITY, f64::min),
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{partial_trace, Factor};

    #[test]
    fn constant_is_root_five_sixths() {
        assert!((BUZEK_HILLERY_FIDELITY - (5.0f64 / 6.0).sqrt()).abs() < 1e-16);
    }

    #[test]
    fn zero_input_marginal() {
        let c = buzek_hillery_channel();
        assert!(c.is_trace_preserving());
        let out = c.apply(&ComplexMatrix::outer(&basis_vector(2, 0))).unwrap();
        let clone = partial_trace(&out, (2, 2), Factor::First).unwrap();
        assert!(clone.approx_eq(&ComplexMatrix::from_real_diag(&[5.0 / 6.0, 1.0 / 6.0]), 1e-15));
    }

    #[test]
    fn demo_is_universal_and_entangled() {
        let r = buzek_hillery_demo(20, 4).unwrap();
        assert!(r.fidelity_spread <= 1e-9);
        assert!(r.max_deviation_from_expected <= 1e-9);
        assert!(r.min_product_residual > 0.1);
    }
}
