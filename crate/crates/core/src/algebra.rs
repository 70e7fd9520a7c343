//! Finite-dimensional C*-algebras in block (structure-theorem) form and the
//! commuting pair 𝔄₁ = A ⊗ I, 𝔄₂ = I ⊗ A built from one of them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::vectors::{basis_vector, vec_norm};
use crate::matcore::{kron, matrix_unit, random, swap_operator, ComplexMatrix, Complex64, Factor};
use crate::states::AlgebraState;

/// ⊕ᵢ M_{dᵢ}(ℂ), acting block-diagonally on ⊕ᵢ ℂ^{dᵢ}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct AlgebraSpec {
    blocks: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    blocks: Vec<usize>,
}

impl TryFrom<RawSpec> for AlgebraSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        AlgebraSpec::new(raw.blocks)
    }
}

impl From<AlgebraSpec> for RawSpec {
    fn from(spec: AlgebraSpec) -> Self {
        RawSpec { blocks: spec.blocks }
    }
}

impl AlgebraSpec {
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::domain("an algebra needs at least one block"));
        }
        if blocks.contains(&0) {
            return Err(Error::domain("block dimensions must be at least 1"));
        }
        Ok(Self { blocks })
    }

    /// The full matrix algebra M_d.
    pub fn full(d: usize) -> Self {
        Self::new(vec![d]).expect("d >= 1")
    }

    /// The diagonal (classical) algebra with `outcomes` point masses.
    pub fn diagonal(outcomes: usize) -> Self {
        Self::new(vec![1; outcomes]).expect("outcomes >= 1")
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Σdᵢ, the dimension of the Hilbert space the algebra acts on.
    pub fn hilbert_dim(&self) -> usize {
        self.blocks.iter().sum()
    }

    /// Σdᵢ², the linear dimension of the algebra.
    pub fn algebra_dim(&self) -> usize {
        self.blocks.iter().map(|d| d * d).sum()
    }

    /// Offset of each block inside ℂ^{Σdᵢ}.
    pub fn offsets(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .scan(0, |acc, &d| {
                let o = *acc;
                *acc += d;
                Some(o)
            })
            .collect()
    }

    /// Block index of every Hilbert-space coordinate.
    pub fn block_labels(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .enumerate()
            .flat_map(|(b, &d)| std::iter::repeat_n(b, d))
            .collect()
    }

    /// Conditional expectation onto the algebra: zero every entry that links two blocks.
    pub fn pinch(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let labels = self.block_labels();
        ComplexMatrix::from_fn(m.rows(), m.cols(), |i, j| {
            if labels[i] == labels[j] {
                m[(i, j)]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Matrix units of every block, embedded in M_{Σdᵢ}. They span the algebra.
    pub fn generators(&self) -> Vec<ComplexMatrix> {
        let n = self.hilbert_dim();
        let mut out = Vec::with_capacity(self.algebra_dim());
        for (&d, o) in self.blocks.iter().zip(self.offsets()) {
            for i in 0..d {
                for j in 0..d {
                    out.push(matrix_unit(n, o + i, o + j));
                }
            }
        }
        out
    }
}

/// True iff every block is one-dimensional.
pub fn is_abelian(spec: &AlgebraSpec) -> bool {
    spec.blocks.iter().all(|&d| d == 1)
}

/// Which half of the commuting pair a local state lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subsystem {
    First,
    Second,
}

/// A state of 𝔄₁ or of 𝔄₂.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalState {
    pub subsystem: Subsystem,
    pub state: AlgebraState,
}

impl LocalState {
    pub fn first(state: AlgebraState) -> Self {
        Self {
            subsystem: Subsystem::First,
            state,
        }
    }

    pub fn second(state: AlgebraState) -> Self {
        Self {
            subsystem: Subsystem::Second,
            state,
        }
    }
}

/// The pair 𝔄₁ = A ⊗ I and 𝔄₂ = I ⊗ A inside B(ℂⁿ ⊗ ℂⁿ), n = Σdᵢ.
///
/// The algebra they generate is A ⊗ A = ⊕ᵢⱼ M_{dᵢdⱼ}; its blocks are ordered
/// with the first factor's block index major.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutingPair {
    factor: AlgebraSpec,
    joint: AlgebraSpec,
    // For every coordinate of ℂⁿ ⊗ ℂⁿ: (joint block, index inside it).
    layout: Vec<(usize, usize)>,
}

impl CommutingPair {
    pub fn new(factor: AlgebraSpec) -> Self {
        let nb = factor.num_blocks();
        let joint = AlgebraSpec::new(
            (0..nb)
                .flat_map(|i| (0..nb).map(move |j| (i, j)))
                .map(|(i, j)| factor.blocks[i] * factor.blocks[j])
                .collect(),
        )
        .expect("non-empty blocks");
        let labels = factor.block_labels();
        let offsets = factor.offsets();
        let n = factor.hilbert_dim();
        let layout = (0..n * n)
            .map(|idx| {
                let (a, b) = (idx / n, idx % n);
                let (ba, bb) = (labels[a], labels[b]);
                let la = a - offsets[ba];
                let lb = b - offsets[bb];
                (ba * nb + bb, la * factor.blocks[bb] + lb)
            })
            .collect();
        Self { factor, joint, layout }
    }

    pub fn factor(&self) -> &AlgebraSpec {
        &self.factor
    }

    /// Block form of 𝔄₁ ∨ 𝔄₂.
    pub fn joint_spec(&self) -> &AlgebraSpec {
        &self.joint
    }

    /// n = Σdᵢ.
    pub fn local_dim(&self) -> usize {
        self.factor.hilbert_dim()
    }

    /// n², the dimension channels on the pair act on.
    pub fn hilbert_dim(&self) -> usize {
        let n = self.local_dim();
        n * n
    }

    pub fn embed_first(&self, a: &ComplexMatrix) -> ComplexMatrix {
        kron(a, &ComplexMatrix::identity(self.local_dim()))
    }

    pub fn embed_second(&self, a: &ComplexMatrix) -> ComplexMatrix {
        kron(&ComplexMatrix::identity(self.local_dim()), a)
    }

    /// α(A ⊗ I) = I ⊗ A, realised as conjugation by the swap.
    pub fn alpha_operator(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let s = swap_operator(self.local_dim());
        &(&s * m) * &s
    }

    /// Largest Frobenius norm of [X ⊗ I, I ⊗ Y] over all generator pairs.
    pub fn max_generator_commutator(&self) -> f64 {
        let gens = self.factor.generators();
        let firsts: Vec<_> = gens.iter().map(|g| self.embed_first(g)).collect();
        let seconds: Vec<_> = gens.iter().map(|g| self.embed_second(g)).collect();
        let mut worst: f64 = 0.0;
        for a in &firsts {
            for b in &seconds {
                let c = &(a * b) - &(b * a);
                worst = worst.max(c.frobenius_norm());
            }
        }
        worst
    }

    /// Number of generator pairs checked by [`Self::max_generator_commutator`].
    pub fn generator_pair_count(&self) -> usize {
        let g = self.factor.algebra_dim();
        g * g
    }

    /// Conditional expectation of B(ℂⁿ ⊗ ℂⁿ) onto A ⊗ A.
    pub fn pinch(&self, m: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::from_fn(m.rows(), m.cols(), |i, j| {
            if self.layout[i].0 == self.layout[j].0 {
                m[(i, j)]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// ψ₁ ⊗ ψ₂, the unique product state with the given marginals.
    pub fn product_state(&self, first: &AlgebraState, second: &AlgebraState) -> Result<AlgebraState> {
        if first.spec() != &self.factor || second.spec() != &self.factor {
            return Err(Error::domain("product_state: marginal spec differs from the pair's factor"));
        }
        let nb = self.factor.num_blocks();
        let mut weights = Vec::with_capacity(nb * nb);
        let mut densities = Vec::with_capacity(nb * nb);
        for i in 0..nb {
            for j in 0..nb {
                weights.push(first.weights()[i] * second.weights()[j]);
                densities.push(kron(&first.densities()[i], &second.densities()[j]));
            }
        }
        AlgebraState::from_parts(self.joint.clone(), weights, densities)
    }

    /// Density on ℂⁿ ⊗ ℂⁿ (Kronecker ordering) of a state on A ⊗ A.
    pub fn embed_joint(&self, joint: &AlgebraState) -> Result<ComplexMatrix> {
        if joint.spec() != &self.joint {
            return Err(Error::domain("embed_joint: state is not on the pair algebra"));
        }
        let blocks: Vec<ComplexMatrix> = joint
            .densities()
            .iter()
            .zip(joint.weights())
            .map(|(d, &w)| d.scale(w))
            .collect();
        let dim = self.hilbert_dim();
        Ok(ComplexMatrix::from_fn(dim, dim, |i, j| {
            let (bi, li) = self.layout[i];
            let (bj, lj) = self.layout[j];
            if bi == bj {
                blocks[bi][(li, lj)]
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    /// State on A ⊗ A obtained by pinching a density on ℂⁿ ⊗ ℂⁿ.
    pub fn joint_from_density(&self, rho: &ComplexMatrix) -> Result<AlgebraState> {
        let dim = self.hilbert_dim();
        if rho.shape() != (dim, dim) {
            return Err(Error::dim(format!(
                "pair density must be {dim}x{dim}, got {}x{}",
                rho.rows(),
                rho.cols()
            )));
        }
        let mut blocks: Vec<ComplexMatrix> = self.joint.blocks().iter().map(|&d| ComplexMatrix::zeros(d, d)).collect();
        for i in 0..dim {
            let (bi, li) = self.layout[i];
            for j in 0..dim {
                let (bj, lj) = self.layout[j];
                if bi == bj {
                    blocks[bi][(li, lj)] = rho[(i, j)];
                }
            }
        }
        AlgebraState::from_weighted_blocks(self.joint.clone(), blocks)
    }

    /// Restriction of a state of A ⊗ A to 𝔄₁ (`Factor::Second` traced out) or to 𝔄₂.
    pub fn marginal(&self, joint: &AlgebraState, traced: Factor) -> Result<AlgebraState> {
        let rho = self.embed_joint(joint)?;
        let n = self.local_dim();
        let m = crate::matcore::partial_trace_unchecked(&rho, n, n, traced);
        AlgebraState::from_density(self.factor.clone(), &m)
    }
}

/// The commuting pair built from a factor algebra.
pub fn embed_pair(factor: &AlgebraSpec) -> CommutingPair {
    CommutingPair::new(factor.clone())
}

/// Transports a state of 𝔄₁ to its isomorphic copy on 𝔄₂.
pub fn isomorphism_alpha(state: &LocalState) -> Result<LocalState> {
    match state.subsystem {
        Subsystem::First => Ok(LocalState::second(state.state.clone())),
        Subsystem::Second => Err(Error::domain("α maps states of the first subsystem")),
    }
}

/// Inverse transport from 𝔄₂ back to 𝔄₁.
pub fn isomorphism_alpha_inverse(state: &LocalState) -> Result<LocalState> {
    match state.subsystem {
        Subsystem::Second => Ok(LocalState::first(state.state.clone())),
        Subsystem::First => Err(Error::domain("α⁻¹ maps states of the second subsystem")),
    }
}

/// Value of a local state on an element of its half of the pair.
///
/// `m` must lie in A ⊗ I (first) or I ⊗ A (second); the factor operator is
/// recovered by the normalized partial trace.
pub fn evaluate_local(pair: &CommutingPair, state: &LocalState, m: &ComplexMatrix) -> Result<Complex64> {
    let n = pair.local_dim();
    let traced = match state.subsystem {
        Subsystem::First => Factor::Second,
        Subsystem::Second => Factor::First,
    };
    let x = crate::matcore::partial_trace(m, (n, n), traced)?.scale(1.0 / n as f64);
    Ok(state.state.to_density().trace_product(&x))
}

/// Two pure states on a non-abelian block with fidelity exactly `alpha`.
///
/// x and y are the block's first two basis vectors (rotated by a seeded
/// random unitary when `seed != 0`) and the second state is cos θ·x + sin θ·y
/// with cos θ = α. On an abelian algebra only α ∈ {0, 1} is reachable.
pub fn construct_pure_pair(spec: &AlgebraSpec, alpha: f64, seed: u64) -> Result<(AlgebraState, AlgebraState)> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::Range {
            value: alpha,
            range: "[0, 1]",
        });
    }
    let Some(block) = spec.blocks().iter().position(|&d| d >= 2) else {
        return abelian_pair(spec, alpha);
    };
    let d = spec.blocks()[block];
    let (x, y) = if seed == 0 {
        (basis_vector(d, 0), basis_vector(d, 1))
    } else {
        let u = random::random_unitary(d, &mut random::seeded(seed));
        (u.col(0), u.col(1))
    };
    let sin = (1.0 - alpha * alpha).max(0.0).sqrt();
    let mut z: Vec<Complex64> = x.iter().zip(&y).map(|(a, b)| a * alpha + b * sin).collect();
    let nz = vec_norm(&z);
    for c in &mut z {
        *c /= nz;
    }
    Ok((
        AlgebraState::pure(spec.clone(), block, &x)?,
        AlgebraState::pure(spec.clone(), block, &z)?,
    ))
}

fn abelian_pair(spec: &AlgebraSpec, alpha: f64) -> Result<(AlgebraState, AlgebraState)> {
    let one = [Complex64::new(1.0, 0.0)];
    if alpha == 1.0 {
        let s = AlgebraState::pure(spec.clone(), 0, &one)?;
        return Ok((s.clone(), s));
    }
    if alpha == 0.0 && spec.num_blocks() >= 2 {
        return Ok((
            AlgebraState::pure(spec.clone(), 0, &one)?,
            AlgebraState::pure(spec.clone(), 1, &one)?,
        ));
    }
    Err(Error::Impossible(format!(
        "pure states of an abelian algebra have fidelity 0 or 1, not {alpha}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{pauli_x, pauli_z};
    use crate::states::fidelity;

    #[test]
    fn abelian_predicate() {
        assert!(is_abelian(&AlgebraSpec::new(vec![1, 1, 1]).unwrap()));
        assert!(!is_abelian(&AlgebraSpec::new(vec![2]).unwrap()));
        assert!(!is_abelian(&AlgebraSpec::new(vec![1, 2]).unwrap()));
        assert!(AlgebraSpec::new(vec![]).is_err());
        assert!(AlgebraSpec::new(vec![2, 0]).is_err());
    }

    #[test]
    fn spec_json_shape() {
        let s: AlgebraSpec = serde_json::from_str(r#"{"blocks":[1,2]}"#).unwrap();
        assert_eq!(s.blocks(), &[1, 2]);
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"blocks":[1,2]}"#);
        assert!(serde_json::from_str::<AlgebraSpec>(r#"{"blocks":[0]}"#).is_err());
    }

    #[test]
    fn qubit_pair_commutes_and_alpha_swaps() {
        let pair = embed_pair(&AlgebraSpec::full(2));
        let xi = pair.embed_first(&pauli_x());
        let iz = pair.embed_second(&pauli_z());
        let c = &(&xi * &iz) - &(&iz * &xi);
        assert_eq!(c.frobenius_norm(), 0.0);
        assert_eq!(pair.alpha_operator(&xi), pair.embed_second(&pauli_x()));
    }

    #[test]
    fn qutrit_generators_all_commute() {
        let pair = embed_pair(&AlgebraSpec::full(3));
        assert_eq!(pair.generator_pair_count(), 81);
        assert!(pair.max_generator_commutator() <= 1e-12);
    }

    #[test]
    fn multi_block_joint_layout() {
        let pair = CommutingPair::new(AlgebraSpec::new(vec![1, 2]).unwrap());
        assert_eq!(pair.joint_spec().blocks(), &[1, 2, 2, 4]);
        assert_eq!(pair.hilbert_dim(), 9);
        assert!(pair.max_generator_commutator() <= 1e-12);
    }

    #[test]
    fn alpha_is_identity_on_data_and_invertible() {
        let spec = AlgebraSpec::full(2);
        let psi = AlgebraState::pure(spec, 0, &basis_vector(2, 0)).unwrap();
        let l1 = LocalState::first(psi.clone());
        let l2 = isomorphism_alpha(&l1).unwrap();
        assert_eq!(l2.subsystem, Subsystem::Second);
        assert_eq!(l2.state, psi);
        assert_eq!(isomorphism_alpha_inverse(&l2).unwrap(), l1);
        assert!(isomorphism_alpha(&l2).is_err());
    }

    #[test]
    fn alpha_preserves_expectations() {
        let spec = AlgebraSpec::full(2);
        let pair = embed_pair(&spec);
        let rho = AlgebraState::random_mixed(&spec, &mut random::seeded(2));
        let l1 = LocalState::first(rho);
        let l2 = isomorphism_alpha(&l1).unwrap();
        for g in spec.generators() {
            let a = pair.embed_first(&g);
            let lhs = evaluate_local(&pair, &l1, &a).unwrap();
            let rhs = evaluate_local(&pair, &l2, &pair.alpha_operator(&a)).unwrap();
            assert!((lhs - rhs).norm() < 1e-14);
        }
    }

    #[test]
    fn pure_pair_examples() {
        let spec = AlgebraSpec::full(2);
        let (a, b) = construct_pure_pair(&spec, 1.0, 0).unwrap();
        assert_eq!(a, b);
        let (a, b) = construct_pure_pair(&spec, 0.0, 0).unwrap();
        assert!(fidelity(&a, &b).unwrap() < 1e-15);
        let (a, b) = construct_pure_pair(&spec, 0.5, 0).unwrap();
        assert!((fidelity(&a, &b).unwrap() - 0.5).abs() < 1e-9);
        let (a, b) = construct_pure_pair(&AlgebraSpec::full(3), 0.3, 17).unwrap();
        assert!((fidelity(&a, &b).unwrap() - 0.3).abs() < 1e-9);
    }

    #[test]
    fn abelian_pure_pair_is_impossible_in_between() {
        let spec = AlgebraSpec::diagonal(3);
        assert!(matches!(construct_pure_pair(&spec, 0.5, 0), Err(Error::Impossible(_))));
        let (a, b) = construct_pure_pair(&spec, 0.0, 0).unwrap();
        assert_eq!(fidelity(&a, &b).unwrap(), 0.0);
        assert!(construct_pure_pair(&spec, 1.5, 0).is_err());
    }
}
