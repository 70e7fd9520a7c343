//! Step-by-step evaluation of the argument that rules out ε-imperfect cloning
//! of two pure states with 0 < F(ψ₁, φ₁) < 1 − 4ε.
//!
//! Every inequality of the chain is recomputed on the concrete outputs, with
//! its slack and the tolerance it is allowed. A candidate that meets the
//! cloning requirements on both inputs must break at least one step; the
//! first broken step names the culprit.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{analyze_output, clone_output, CloneTolerances, OutputAnalysis};
use crate::algebra::{construct_pure_pair, isomorphism_alpha, CommutingPair, LocalState};
use crate::channels::QuantumChannel;
use crate::error::{Error, Result};
use crate::matcore::vectors::inner;
use crate::matcore::{random, Complex64, Factor};
use crate::states::{bures_distance, fidelity, AlgebraState};
use crate::tolerance::TAU_EQUAL;

/// Slack allowed to the exact identities of the chain.
pub const TAU_CHAIN: f64 = 1e-9;

/// What the tracer is run on: a real channel, or outputs prescribed by hand.
#[derive(Debug, Clone, PartialEq)]
pub enum CloneCandidate {
    Channel(QuantumChannel),
    Prescribed {
        psi_output: AlgebraState,
        phi_output: AlgebraState,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepStatus {
    Holds,
    Violated,
    Vacuous,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainStep {
    pub name: String,
    /// One of "=", "<=", ">=" between `lhs` and `rhs`.
    pub relation: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub tolerance: f64,
    pub status: StepStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Precondition {
    pub input: String,
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainVerdict {
    /// The candidate does not meet the cloning requirements; the chain says nothing.
    NotApplicable,
    Consistent,
    Contradiction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremTrace {
    pub epsilon: f64,
    pub overlap_threshold: f64,
    pub input_fidelity: f64,
    pub image_fidelity: f64,
    pub hypothesis_holds: bool,
    pub preconditions: Vec<Precondition>,
    pub applicable: bool,
    pub product_input_fidelity: f64,
    pub output_fidelity: f64,
    pub product_output_fidelity: f64,
    pub clone_pair_fidelity: f64,
    pub clone_distance_psi: f64,
    pub clone_distance_phi: f64,
    pub clone_pair_distance: f64,
    pub target_distance: f64,
    pub steps: Vec<ChainStep>,
    pub first_violation: Option<String>,
    pub verdict: ChainVerdict,
}

fn step(name: &str, relation: &str, lhs: f64, rhs: f64, tolerance: f64) -> ChainStep {
    let slack = match relation {
        "=" => -(lhs - rhs).abs(),
        "<=" => rhs - lhs,
        _ => lhs - rhs,
    };
    ChainStep {
        name: name.into(),
        relation: relation.into(),
        lhs,
        rhs,
        slack,
        tolerance,
        status: if slack >= -tolerance {
            StepStatus::Holds
        } else {
            StepStatus::Violated
        },
    }
}

fn vacuous(name: &str, relation: &str, lhs: f64, rhs: f64) -> ChainStep {
    ChainStep {
        name: name.into(),
        relation: relation.into(),
        lhs,
        rhs,
        slack: 0.0,
        tolerance: 0.0,
        status: StepStatus::Vacuous,
    }
}

fn preconditions(label: &str, a: &OutputAnalysis, eps: f64, t: &CloneTolerances) -> Vec<Precondition> {
    let mk = |name: &str, value: f64, limit: f64, holds: bool| Precondition {
        input: label.into(),
        name: name.into(),
        value,
        limit,
        holds,
    };
    vec![
        mk("product", a.product_residual, t.product, a.product_residual <= t.product),
        mk("marginal", a.marginal_residual, t.marginal, a.marginal_residual <= t.marginal),
        mk("purity", a.purity_defect, t.purity, a.purity_defect <= t.purity),
        mk(
            "clone_fidelity",
            a.clone_fidelity,
            1.0 - eps,
            a.clone_fidelity >= 1.0 - eps - TAU_EQUAL,
        ),
    ]
}

pub fn trace_theorem(
    pair: &CommutingPair,
    psi1: &AlgebraState,
    phi1: &AlgebraState,
    candidate: &CloneCandidate,
    epsilon: f64,
    blank: &AlgebraState,
    tolerances: &CloneTolerances,
) -> Result<TheoremTrace> {
    for (name, s) in [("psi", psi1), ("phi", phi1)] {
        if !s.is_pure() {
            return Err(Error::NotPure(format!("{name} input of the theorem tracer")));
        }
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::Range {
            value: epsilon,
            range: "[0, 1]",
        });
    }
    let (out_psi, out_phi) = match candidate {
        CloneCandidate::Channel(c) => (
            clone_output(c, pair, psi1, blank)?,
            clone_output(c, pair, phi1, blank)?,
        ),
        CloneCandidate::Prescribed {
            psi_output,
            phi_output,
        } => {
            if psi_output.spec() != pair.joint_spec() || phi_output.spec() != pair.joint_spec() {
                return Err(Error::domain("prescribed outputs must live on the pair algebra"));
            }
            (psi_output.clone(), phi_output.clone())
        }
    };
    let a_psi = analyze_output(pair, psi1, &out_psi)?;
    let a_phi = analyze_output(pair, phi1, &out_phi)?;
    let mut pre = preconditions("psi", &a_psi, epsilon, tolerances);
    pre.extend(preconditions("phi", &a_phi, epsilon, tolerances));
    let applicable = pre.iter().all(|p| p.holds);

    let psi2 = isomorphism_alpha(&LocalState::first(psi1.clone()))?.state;
    let phi2 = isomorphism_alpha(&LocalState::first(phi1.clone()))?.state;
    let f1 = fidelity(psi1, phi1)?;
    let f_img = fidelity(&psi2, &phi2)?;
    let threshold = 1.0 - 4.0 * epsilon;
    let f_in = fidelity(&pair.product_state(psi1, blank)?, &pair.product_state(phi1, blank)?)?;
    let f_out = fidelity(&out_psi, &out_phi)?;
    let clone_psi = pair.marginal(&out_psi, Factor::First)?;
    let clone_phi = pair.marginal(&out_phi, Factor::First)?;
    let f_prod = fidelity(
        &pair.product_state(psi1, &clone_psi)?,
        &pair.product_state(phi1, &clone_phi)?,
    )?;
    let f_clone = fidelity(&clone_psi, &clone_phi)?;
    let d_psi = bures_distance(&psi2, &clone_psi)?;
    let d_phi = bures_distance(&clone_phi, &phi2)?;
    let d_clone = bures_distance(&clone_psi, &clone_phi)?;
    let d_target = bures_distance(&psi2, &phi2)?;

    // Fidelity moves by at most √2·√‖ρ − ρ'‖ when one argument is replaced.
    let allowance = 2f64.sqrt()
        * ((a_psi.product_residual + a_psi.marginal_residual).sqrt()
            + (a_phi.product_residual + a_phi.marginal_residual).sqrt());
    let mut steps = vec![
        step("product-input", "=", f_in, f1, TAU_CHAIN),
        step("monotonicity", "<=", f_in, f_out, TAU_CHAIN),
        step("product-output", "=", f_out, f_prod, TAU_CHAIN + allowance),
        step("multiplicativity", "=", f_prod, f1 * f_clone, TAU_CHAIN),
    ];
    let collapse_tol = (3.0 * TAU_CHAIN + allowance) / f1.max(f64::MIN_POSITIVE);
    let collapsed = f1 > TAU_CHAIN;
    steps.push(if collapsed {
        step("clone-collapse", ">=", f_clone, 1.0, collapse_tol)
    } else {
        vacuous("clone-collapse", ">=", f_clone, 1.0)
    });
    let d_bound = (2.0 * epsilon).sqrt();
    let d_tol = (2.0 * (epsilon + TAU_EQUAL)).sqrt() - d_bound + TAU_CHAIN;
    steps.push(step("clone-distance-psi", "<=", d_psi, d_bound, d_tol));
    steps.push(step("clone-distance-phi", "<=", d_phi, d_bound, d_tol));
    steps.push(step("triangle", "<=", d_target, d_psi + d_clone + d_phi, TAU_CHAIN));
    if collapsed {
        let b = 2.0 * (2.0 * (epsilon + TAU_EQUAL)).sqrt() + (2.0 * collapse_tol.min(1.0)).sqrt();
        steps.push(step("overlap-bound", ">=", f_img, 1.0 - 0.5 * b * b, TAU_CHAIN));
    } else {
        steps.push(vacuous("overlap-bound", ">=", f_img, threshold));
    }
    let first_violation = if applicable {
        steps
            .iter()
            .find(|s| s.status == StepStatus::Violated)
            .map(|s| s.name.clone())
    } else {
        None
    };
    let verdict = match (applicable, &first_violation) {
        (false, _) => ChainVerdict::NotApplicable,
        (true, Some(_)) => ChainVerdict::Contradiction,
        (true, None) => ChainVerdict::Consistent,
    };
    Ok(TheoremTrace {
        epsilon,
        overlap_threshold: threshold,
        input_fidelity: f1,
        image_fidelity: f_img,
        hypothesis_holds: f_img > 0.0 && f_img < threshold,
        preconditions: pre,
        applicable,
        product_input_fidelity: f_in,
        output_fidelity: f_out,
        product_output_fidelity: f_prod,
        clone_pair_fidelity: f_clone,
        clone_distance_psi: d_psi,
        clone_distance_phi: d_phi,
        clone_pair_distance: d_clone,
        target_distance: d_target,
        steps,
        first_violation,
        verdict,
    })
}

/// A prescribed-output candidate that meets every cloning requirement on its two inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticCandidate {
    pub psi: AlgebraState,
    pub phi: AlgebraState,
    pub candidate: CloneCandidate,
    pub input_fidelity: f64,
}

/// Inputs with F(ψ₁, φ₁) drawn from [0.05, 1 − 4ε − 0.05] and outputs
/// ψ₁ ⊗ ψ̄₂, φ₁ ⊗ φ̄₂ whose clones are pure with fidelity in [1 − ε, 1].
pub fn synthetic_candidates(pair: &CommutingPair, epsilon: f64, count: usize, seed: u64) -> Result<Vec<SyntheticCandidate>> {
    let hi = 1.0 - 4.0 * epsilon - 0.05;
    if hi <= 0.05 {
        return Err(Error::domain(format!("no room for an overlap below 1 - 4ε at ε = {epsilon}")));
    }
    let factor = pair.factor();
    (0..count)
        .map(|k| {
            let mut rng = random::stream(seed, k as u64);
            let f1 = rng.random_range(0.05..hi);
            let (psi, phi) = construct_pure_pair(factor, f1, rng.random_range(1..u64::MAX))?;
            let clone_psi = nearby_pure(&psi, 1.0 - epsilon * rng.random::<f64>(), &mut rng)?;
            let clone_phi = nearby_pure(&phi, 1.0 - epsilon * rng.random::<f64>(), &mut rng)?;
            Ok(SyntheticCandidate {
                candidate: CloneCandidate::Prescribed {
                    psi_output: pair.product_state(&psi, &clone_psi)?,
                    phi_output: pair.product_state(&phi, &clone_phi)?,
                },
                input_fidelity: fidelity(&psi, &phi)?,
                psi,
                phi,
            })
        })
        .collect()
}

/// A pure state in the same block with fidelity `f` to `state`.
fn nearby_pure<R: Rng + ?Sized>(state: &AlgebraState, f: f64, rng: &mut R) -> Result<AlgebraState> {
    let (block, x) = state.pure_vector().ok_or_else(|| Error::NotPure("reference state".into()))?;
    let mut y = random::random_pure_vector(x.len(), rng);
    let overlap = inner(&x, &y);
    for (yi, xi) in y.iter_mut().zip(&x) {
        *yi -= overlap * xi;
    }
    let norm = crate::matcore::vectors::vec_norm(&y);
    let sin = (1.0 - f * f).max(0.0).sqrt();
    let v: Vec<Complex64> = x.iter().zip(&y).map(|(a, b)| a * f + b * (sin / norm)).collect();
    AlgebraState::pure(state.spec().clone(), block, &v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraSpec;
    use crate::cloning::{buzek_hillery_pair_channel, classical_copy_channel};
    use crate::matcore::vectors::basis_vector;

    #[test]
    fn synthetic_candidates_break_monotonicity_first() {
        let pair = CommutingPair::new(AlgebraSpec::full(2));
        let blank = AlgebraState::maximally_mixed(pair.factor());
        for c in synthetic_candidates(&pair, 0.05, 10, 2).unwrap() {
            let t = trace_theorem(&pair, &c.psi, &c.phi, &c.candidate, 0.05, &blank, &CloneTolerances::default()).unwrap();
            assert!(t.applicable && t.hypothesis_holds);
            assert_eq!(t.first_violation.as_deref(), Some("monotonicity"));
            assert_eq!(t.verdict, ChainVerdict::Contradiction);
        }
    }

    #[test]
    fn classical_copier_is_consistent() {
        let spec = AlgebraSpec::diagonal(3);
        let pair = CommutingPair::new(spec.clone());
        let c = CloneCandidate::Channel(classical_copy_channel(&spec).unwrap());
        let one = [Complex64::new(1.0, 0.0)];
        let d0 = AlgebraState::pure(spec.clone(), 0, &one).unwrap();
        let d2 = AlgebraState::pure(spec.clone(), 2, &one).unwrap();
        let blank = AlgebraState::maximally_mixed(&spec);
        for (a, b) in [(&d0, &d2), (&d0, &d0)] {
            let t = trace_theorem(&pair, a, b, &c, 0.0, &blank, &CloneTolerances::default()).unwrap();
            assert!(t.applicable && !t.hypothesis_holds);
            assert_eq!(t.first_violation, None);
            assert!(t.steps.iter().all(|s| s.status != StepStatus::Violated));
        }
    }

    #[test]
    fn buzek_hillery_is_not_applicable() {
        let spec = AlgebraSpec::full(2);
        let pair = CommutingPair::new(spec.clone());
        let (psi, phi) = construct_pure_pair(&spec, 0.5, 0).unwrap();
        let blank = AlgebraState::pure(spec, 0, &basis_vector(2, 0)).unwrap();
        let c = CloneCandidate::Channel(buzek_hillery_pair_channel());
        let t = trace_theorem(&pair, &psi, &phi, &c, 0.05, &blank, &CloneTolerances::default()).unwrap();
        assert_eq!(t.verdict, ChainVerdict::NotApplicable);
        assert!(t.preconditions.iter().any(|p| p.name == "product" && !p.holds));
        assert!(t.first_violation.is_none());
    }

    #[test]
    fn mixed_inputs_are_rejected() {
        let spec = AlgebraSpec::full(2);
        let pair = CommutingPair::new(spec.clone());
        let mixed = AlgebraState::maximally_mixed(&spec);
        let c = CloneCandidate::Channel(crate::channels::identity(4));
        let err = trace_theorem(&pair, &mixed, &mixed, &c, 0.1, &mixed, &CloneTolerances::default()).unwrap_err();
        assert!(matches!(err, Error::NotPure(_)));
    }
}
