//! Cloning: audits against the perfect and ε-imperfect definitions, the
//! classical copier, the Bužek–Hillery contrast, a non-entangling cloner
//! search and a step-by-step checker for the no-cloning argument.

mod buzek_hillery;
mod optimizer;
mod tracer;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use buzek_hillery::{
    buzek_hillery_channel, buzek_hillery_demo, buzek_hillery_pair_channel, BuzekHilleryRecord, BuzekHilleryReport,
    BUZEK_HILLERY_FIDELITY,
};
pub use optimizer::{optimize_cloner, BestCandidate, BlankStrategy, OptimizerConfig, OptimizerResult, RestartRecord, RestartStats};
pub use tracer::{
    synthetic_candidates, trace_theorem, ChainStep, ChainVerdict, CloneCandidate, StepStatus, SyntheticCandidate,
    TheoremTrace, TAU_CHAIN,
};

use crate::algebra::{is_abelian, isomorphism_alpha, AlgebraSpec, CommutingPair, LocalState};
use crate::channels::QuantumChannel;
use crate::error::{Error, Result};
use crate::matcore::vectors::basis_vector;
use crate::matcore::{random, Complex64, ComplexMatrix, Factor};
use crate::states::{fidelity, trace_distance, AlgebraState};
use crate::tolerance::TAU_EQUAL;

/// Thresholds for product form, purity of the clone, and preservation of the original.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CloneTolerances {
    pub product: f64,
    pub purity: f64,
    pub marginal: f64,
}

impl Default for CloneTolerances {
    fn default() -> Self {
        Self {
            product: 1e-6,
            purity: 1e-6,
            marginal: 1e-6,
        }
    }
}

/// Everything an audit needs besides the channel.
#[derive(Debug, Clone)]
pub struct CloneSpec {
    pub pair: CommutingPair,
    pub blank: AlgebraState,
    pub epsilon: f64,
    pub sample_count: usize,
    pub seed: u64,
    pub tolerances: CloneTolerances,
}

impl CloneSpec {
    pub fn new(factor: AlgebraSpec, blank: AlgebraState, epsilon: f64, sample_count: usize, seed: u64) -> Result<Self> {
        let spec = Self {
            pair: CommutingPair::new(factor),
            blank,
            epsilon,
            sample_count,
            seed,
            tolerances: CloneTolerances::default(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_tolerances(mut self, tolerances: CloneTolerances) -> Self {
        self.tolerances = tolerances;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(Error::Range {
                value: self.epsilon,
                range: "[0, 1]",
            });
        }
        if self.blank.spec() != self.pair.factor() {
            return Err(Error::InvalidState("blank state must live on the factor algebra".into()));
        }
        Ok(())
    }

    pub fn config(&self) -> CloneConfig {
        CloneConfig {
            factor: self.pair.factor().clone(),
            blank: self.blank.clone(),
            epsilon: self.epsilon,
            sample_count: self.sample_count,
            seed: self.seed,
            tolerances: self.tolerances,
            equal: TAU_EQUAL,
        }
    }

    pub fn samples(&self) -> Vec<PureSample> {
        clone_samples(self.pair.factor(), self.sample_count, self.seed, self.epsilon)
    }
}

/// Serializable echo of a [`CloneSpec`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CloneConfig {
    pub factor: AlgebraSpec,
    pub blank: AlgebraState,
    pub epsilon: f64,
    pub sample_count: usize,
    pub seed: u64,
    pub tolerances: CloneTolerances,
    pub equal: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PureSample {
    pub id: String,
    pub state: AlgebraState,
}

/// Pure test inputs: seeded Haar samples plus a fixed adversarial set.
///
/// On an abelian algebra the pure states are exactly the point masses, so all
/// of them are returned and nothing is sampled. Otherwise every block with
/// d ≥ 2 contributes its basis, its Fourier basis, the states (e₀ ± i e₁)/√2,
/// (e₀ ± e₁)/√2 when d ≥ 3, and α e₀ + √(1−α²) e₁ with α = 1 − 4ε − 0.01
/// when that is positive.
pub fn clone_samples(factor: &AlgebraSpec, count: usize, seed: u64, epsilon: f64) -> Vec<PureSample> {
    let mut out = Vec::new();
    let push = |out: &mut Vec<PureSample>, id: String, block: usize, v: Vec<Complex64>| {
        let state = AlgebraState::pure(factor.clone(), block, &v).expect("sample vectors are nonzero");
        out.push(PureSample { id, state });
    };
    if is_abelian(factor) {
        for b in 0..factor.num_blocks() {
            push(&mut out, format!("point-{b}"), b, vec![Complex64::new(1.0, 0.0)]);
        }
        return out;
    }
    for k in 0..count {
        let state = AlgebraState::random_pure(factor, &mut random::stream(seed, k as u64));
        out.push(PureSample {
            id: format!("haar-{k}"),
            state,
        });
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let i = Complex64::new(0.0, 1.0);
    for (b, &d) in factor.blocks().iter().enumerate() {
        if d == 1 {
            push(&mut out, format!("point-{b}"), b, vec![Complex64::new(1.0, 0.0)]);
            continue;
        }
        for j in 0..d {
            push(&mut out, format!("basis-{b}-{j}"), b, basis_vector(d, j));
        }
        for j in 0..d {
            let v = (0..d)
                .map(|k| Complex64::from_polar(1.0 / (d as f64).sqrt(), 2.0 * std::f64::consts::PI * (j * k) as f64 / d as f64))
                .collect();
            push(&mut out, format!("fourier-{b}-{j}"), b, v);
        }
        let e0 = basis_vector(d, 0);
        let e1 = basis_vector(d, 1);
        let combo = |c: Complex64| -> Vec<Complex64> { e0.iter().zip(&e1).map(|(a, b)| (a + b * c) * s).collect() };
        push(&mut out, format!("circular-{b}-plus"), b, combo(i));
        push(&mut out, format!("circular-{b}-minus"), b, combo(-i));
        if d >= 3 {
            push(&mut out, format!("diagonal-{b}-plus"), b, combo(Complex64::new(1.0, 0.0)));
            push(&mut out, format!("diagonal-{b}-minus"), b, combo(Complex64::new(-1.0, 0.0)));
        }
        let alpha = 1.0 - 4.0 * epsilon - 0.01;
        if alpha > 0.0 {
            let sin = (1.0 - alpha * alpha).sqrt();
            let v = e0.iter().zip(&e1).map(|(a, b)| a * alpha + b * sin).collect();
            push(&mut out, format!("overlap-{b}"), b, v);
        }
    }
    out
}

/// Quantities extracted from one channel output on the pair algebra.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutputAnalysis {
    /// ‖ρ_out − ρ₁ ⊗ ρ̄₂‖
    pub product_residual: f64,
    /// ‖ρ₁ − ψ₁‖
    pub marginal_residual: f64,
    /// 1 − λ_max(ρ̄₂)
    pub purity_defect: f64,
    /// F(ψ₂, ρ̄₂)
    pub clone_fidelity: f64,
    /// F(ψ₁, ρ₁)
    pub original_fidelity: f64,
}

pub fn analyze_output(pair: &CommutingPair, input: &AlgebraState, output: &AlgebraState) -> Result<OutputAnalysis> {
    let first = pair.marginal(output, Factor::Second)?;
    let second = pair.marginal(output, Factor::First)?;
    let product = pair.product_state(&first, &second)?;
    let target = isomorphism_alpha(&LocalState::first(input.clone()))?.state;
    Ok(OutputAnalysis {
        product_residual: trace_distance(output, &product)?,
        marginal_residual: trace_distance(&first, input)?,
        purity_defect: second.purity_defect(),
        clone_fidelity: fidelity(&target, &second)?,
        original_fidelity: fidelity(input, &first)?,
    })
}

/// T*(ψ₁ ⊗ σ₂) restricted to the pair algebra.
pub fn clone_output(
    channel: &QuantumChannel,
    pair: &CommutingPair,
    input: &AlgebraState,
    blank: &AlgebraState,
) -> Result<AlgebraState> {
    let joint = pair.product_state(input, blank)?;
    let rho = channel.apply(&pair.embed_joint(&joint)?)?;
    pair.joint_from_density(&rho)
}

/// Per-sample audit line; flat so it can be written as CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub id: String,
    pub product_residual: f64,
    pub marginal_residual: f64,
    pub purity_defect: f64,
    pub clone_fidelity: f64,
    pub original_fidelity: f64,
    pub product_ok: bool,
    pub marginal_ok: bool,
    pub purity_ok: bool,
    pub fidelity_ok: bool,
    pub perfect: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuditAggregates {
    pub samples: usize,
    pub min_clone_fidelity: f64,
    pub min_original_fidelity: f64,
    pub max_product_residual: f64,
    pub max_marginal_residual: f64,
    pub max_purity_defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CloneAuditReport {
    pub config: CloneConfig,
    pub records: Vec<SampleRecord>,
    pub aggregates: AuditAggregates,
    /// Exact cloning of every sample, up to the tolerances.
    pub verdict_perfect: bool,
    /// Product output, preserved original, pure clone with F ≥ 1 − ε on every sample.
    pub verdict_epsilon: bool,
}

pub fn audit_cloner(channel: &QuantumChannel, spec: &CloneSpec) -> Result<CloneAuditReport> {
    spec.validate()?;
    let dim = spec.pair.hilbert_dim();
    if channel.in_dim() != dim || channel.out_dim() != dim {
        return Err(Error::domain(format!(
            "cloner must act on the {dim}-dimensional pair space, got {} -> {}",
            channel.in_dim(),
            channel.out_dim()
        )));
    }
    if !channel.is_trace_preserving() {
        return Err(Error::domain(format!(
            "cloner is not trace preserving (defect {:.3e})",
            channel.trace_preservation_defect()
        )));
    }
    let samples = spec.samples();
    let t = spec.tolerances;
    let records = samples
        .par_iter()
        .map(|s| {
            let out = clone_output(channel, &spec.pair, &s.state, &spec.blank)?;
            let a = analyze_output(&spec.pair, &s.state, &out)?;
            let product_ok = a.product_residual <= t.product;
            let marginal_ok = a.marginal_residual <= t.marginal;
            let purity_ok = a.purity_defect <= t.purity;
            let structural = product_ok && marginal_ok && purity_ok;
            Ok(SampleRecord {
                id: s.id.clone(),
                product_residual: a.product_residual,
                marginal_residual: a.marginal_residual,
                purity_defect: a.purity_defect,
                clone_fidelity: a.clone_fidelity,
                original_fidelity: a.original_fidelity,
                product_ok,
                marginal_ok,
                purity_ok,
                fidelity_ok: a.clone_fidelity >= 1.0 - spec.epsilon - TAU_EQUAL,
                perfect: structural && a.clone_fidelity >= 1.0 - TAU_EQUAL,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let aggregates = aggregate(&records);
    let verdict_epsilon = records
        .iter()
        .all(|r| r.product_ok && r.marginal_ok && r.purity_ok && r.fidelity_ok);
    let verdict_perfect = records.iter().all(|r| r.perfect);
    Ok(CloneAuditReport {
        config: spec.config(),
        records,
        aggregates,
        verdict_perfect,
        verdict_epsilon,
    })
}

fn aggregate(records: &[SampleRecord]) -> AuditAggregates {
    let fold_min = |f: fn(&SampleRecord) -> f64| records.iter().map(f).fold(f64::INFINITY, f64::min);
    let fold_max = |f: fn(&SampleRecord) -> f64| records.iter().map(f).fold(0.0, f64::max);
    AuditAggregates {
        samples: records.len(),
        min_clone_fidelity: fold_min(|r| r.clone_fidelity),
        min_original_fidelity: fold_min(|r| r.original_fidelity),
        max_product_residual: fold_max(|r| r.product_residual),
        max_marginal_residual: fold_max(|r| r.marginal_residual),
        max_purity_defect: fold_max(|r| r.purity_defect),
    }
}

/// Measure-and-prepare copier |ij⟩ ↦ |ii⟩ on a diagonal algebra.
pub fn classical_copy_channel(spec: &AlgebraSpec) -> Result<QuantumChannel> {
    if !is_abelian(spec) {
        return Err(Error::domain(format!(
            "classical copying needs an abelian algebra, got blocks {:?}",
            spec.blocks()
        )));
    }
    let d = spec.num_blocks();
    let n = d * d;
    let kraus = (0..d)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .map(|(i, j)| {
            let mut k = ComplexMatrix::zeros(n, n);
            k[(i * d + i, i * d + j)] = Complex64::new(1.0, 0.0);
            k
        })
        .collect();
    QuantumChannel::from_kraus(n, n, kraus)
}
