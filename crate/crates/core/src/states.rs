//! States on block algebras and the distances between them: Uhlmann
//! fidelity, Bures distance, trace-norm distance and transition probability.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraSpec;
use crate::error::{Error, Result};
use crate::matcore::vectors::vec_norm;
use crate::matcore::{eig_hermitian, kron, nuclear_norm, random, sqrt_psd, trace_norm, ComplexMatrix, Complex64};
use crate::tolerance::{TAU_PSD, TAU_PURE};

/// Weight sums and traces are accepted this far from 1 and then renormalized.
const NORMALIZATION_SLACK: f64 = 1e-9;

/// A state on ⊕ᵢ M_{dᵢ}: block weights pᵢ and one density ρᵢ per block.
///
/// Blocks with zero weight carry the placeholder I/dᵢ so that every block
/// always has a well-formed density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawState", into = "RawState")]
pub struct AlgebraState {
    spec: AlgebraSpec,
    weights: Vec<f64>,
    densities: Vec<ComplexMatrix>,
}

impl AlgebraState {
    /// Validates and normalizes weights and block densities.
    pub fn from_parts(spec: AlgebraSpec, weights: Vec<f64>, densities: Vec<ComplexMatrix>) -> Result<Self> {
        let nb = spec.num_blocks();
        if weights.len() != nb || densities.len() != nb {
            return Err(Error::InvalidState(format!(
                "{nb} blocks but {} weights and {} densities",
                weights.len(),
                densities.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < -NORMALIZATION_SLACK) {
            return Err(Error::InvalidState(format!("negative or non-finite weight {w}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_SLACK {
            return Err(Error::InvalidState(format!("weights sum to {total}, not 1")));
        }
        let weights: Vec<f64> = weights.iter().map(|w| w.max(0.0) / total).collect();
        let mut out = Vec::with_capacity(nb);
        for (b, (rho, &w)) in densities.into_iter().zip(&weights).enumerate() {
            let d = spec.blocks()[b];
            if rho.shape() != (d, d) {
                return Err(Error::InvalidState(format!(
                    "block {b} density is {}x{}, expected {d}x{d}",
                    rho.rows(),
                    rho.cols()
                )));
            }
            if w == 0.0 {
                out.push(ComplexMatrix::identity(d).scale(1.0 / d as f64));
                continue;
            }
            out.push(validate_density(&rho).map_err(|e| Error::InvalidState(format!("block {b}: {e}")))?);
        }
        Ok(Self {
            spec,
            weights,
            densities: out,
        })
    }

    /// From unnormalized blocks pᵢρᵢ whose traces sum to 1.
    pub fn from_weighted_blocks(spec: AlgebraSpec, blocks: Vec<ComplexMatrix>) -> Result<Self> {
        let weights: Vec<f64> = blocks.iter().map(|b| b.trace().re).collect();
        let densities = blocks
            .iter()
            .zip(&weights)
            .zip(spec.blocks())
            .map(|((b, &w), &d)| {
                if w > 0.0 {
                    b.scale(1.0 / w)
                } else {
                    ComplexMatrix::identity(d).scale(1.0 / d as f64)
                }
            })
            .collect();
        // Blocks that are numerically empty count as weight zero.
        let weights = weights.iter().map(|&w| if w.abs() <= 1e-300 { 0.0 } else { w }).collect();
        Self::from_parts(spec, weights, densities)
    }

    /// From a density on ℂ^{Σdᵢ}; off-block entries are discarded (pinching).
    pub fn from_density(spec: AlgebraSpec, rho: &ComplexMatrix) -> Result<Self> {
        let n = spec.hilbert_dim();
        if rho.shape() != (n, n) {
            return Err(Error::dim(format!(
                "density for blocks {:?} must be {n}x{n}, got {}x{}",
                spec.blocks(),
                rho.rows(),
                rho.cols()
            )));
        }
        let blocks = spec
            .blocks()
            .iter()
            .zip(spec.offsets())
            .map(|(&d, o)| ComplexMatrix::from_fn(d, d, |i, j| rho[(o + i, o + j)]))
            .collect();
        Self::from_weighted_blocks(spec, blocks)
    }

    /// The vector state of `v` (normalized) placed in block `block`.
    pub fn pure(spec: AlgebraSpec, block: usize, v: &[Complex64]) -> Result<Self> {
        let Some(&d) = spec.blocks().get(block) else {
            return Err(Error::InvalidState(format!("no block {block}")));
        };
        if v.len() != d {
            return Err(Error::InvalidState(format!("vector of length {} for a block of dim {d}", v.len())));
        }
        let n = vec_norm(v);
        if !n.is_finite() || n <= 0.0 {
            return Err(Error::InvalidState("pure state vector has zero norm".into()));
        }
        let unit: Vec<Complex64> = v.iter().map(|z| z / n).collect();
        let nb = spec.num_blocks();
        let mut weights = vec![0.0; nb];
        weights[block] = 1.0;
        let densities = spec
            .blocks()
            .iter()
            .enumerate()
            .map(|(b, &db)| {
                if b == block {
                    ComplexMatrix::outer(&unit)
                } else {
                    ComplexMatrix::identity(db).scale(1.0 / db as f64)
                }
            })
            .collect();
        Ok(Self {
            spec,
            weights,
            densities,
        })
    }

    /// The tracial state: weights dᵢ/Σd and densities I/dᵢ.
    pub fn maximally_mixed(spec: &AlgebraSpec) -> Self {
        let n = spec.hilbert_dim() as f64;
        Self {
            weights: spec.blocks().iter().map(|&d| d as f64 / n).collect(),
            densities: spec
                .blocks()
                .iter()
                .map(|&d| ComplexMatrix::identity(d).scale(1.0 / d as f64))
                .collect(),
            spec: spec.clone(),
        }
    }

    /// Random full-rank state: Dirichlet-like block weights, random block densities.
    pub fn random_mixed<R: Rng + ?Sized>(spec: &AlgebraSpec, rng: &mut R) -> Self {
        let ranks: Vec<usize> = spec.blocks().to_vec();
        Self::random_with_ranks(spec, &ranks, rng)
    }

    /// Random state whose block densities have the given ranks.
    pub fn random_with_ranks<R: Rng + ?Sized>(spec: &AlgebraSpec, ranks: &[usize], rng: &mut R) -> Self {
        let mut weights: Vec<f64> = spec
            .blocks()
            .iter()
            .map(|_| {
                let g = random::complex_gaussian(rng);
                g.norm_sqr() + 1e-12
            })
            .collect();
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= total;
        }
        let densities = spec
            .blocks()
            .iter()
            .zip(ranks)
            .map(|(&d, &r)| random::random_density(d, r.clamp(1, d), rng))
            .collect();
        Self {
            spec: spec.clone(),
            weights,
            densities,
        }
    }

    /// Random pure state: a uniformly chosen block and a Haar vector in it.
    pub fn random_pure<R: Rng + ?Sized>(spec: &AlgebraSpec, rng: &mut R) -> Self {
        let block = rng.random_range(0..spec.num_blocks());
        let v = random::random_pure_vector(spec.blocks()[block], rng);
        Self::pure(spec.clone(), block, &v).expect("unit vector in range")
    }

    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn densities(&self) -> &[ComplexMatrix] {
        &self.densities
    }

    /// pᵢρᵢ for every block.
    pub fn weighted_blocks(&self) -> Vec<ComplexMatrix> {
        self.densities.iter().zip(&self.weights).map(|(d, &w)| d.scale(w)).collect()
    }

    /// Block-diagonal density on ℂ^{Σdᵢ}.
    pub fn to_density(&self) -> ComplexMatrix {
        let n = self.spec.hilbert_dim();
        let mut m = ComplexMatrix::zeros(n, n);
        for ((rho, &w), (o, &d)) in self
            .densities
            .iter()
            .zip(&self.weights)
            .zip(self.spec.offsets().into_iter().zip(self.spec.blocks()))
        {
            if w == 0.0 {
                continue;
            }
            for i in 0..d {
                for j in 0..d {
                    m[(o + i, o + j)] = rho[(i, j)] * w;
                }
            }
        }
        m
    }

    /// Spectrum of the state as a block-diagonal operator, descending.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut all: Vec<f64> = Vec::with_capacity(self.spec.hilbert_dim());
        for (rho, &w) in self.densities.iter().zip(&self.weights) {
            let ev = eig_hermitian(rho, f64::EPSILON).expect("validated density").eigenvalues;
            all.extend(ev.into_iter().map(|l| l * w));
        }
        all.sort_by(|a, b| b.total_cmp(a));
        all
    }

    /// 1 − λ_max: zero exactly for pure states.
    pub fn purity_defect(&self) -> f64 {
        (1.0 - self.spectrum()[0]).max(0.0)
    }

    /// Pure means the second-largest eigenvalue is at most [`TAU_PURE`].
    pub fn is_pure(&self) -> bool {
        self.is_pure_within(TAU_PURE)
    }

    pub fn is_pure_within(&self, tol: f64) -> bool {
        self.spectrum().get(1).is_none_or(|&l| l <= tol)
    }

    /// Block index and unit vector of a pure state (dominant eigenvector).
    pub fn pure_vector(&self) -> Option<(usize, Vec<Complex64>)> {
        if !self.is_pure() {
            return None;
        }
        let block = self
            .weights
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)?;
        let eig = eig_hermitian(&self.densities[block], f64::EPSILON).ok()?;
        let top = eig.eigenvalues.len() - 1;
        Some((block, eig.eigenvector(top)))
    }

    /// tr ρ².
    pub fn purity(&self) -> f64 {
        self.densities
            .iter()
            .zip(&self.weights)
            .map(|(d, &w)| w * w * d.trace_product(d).re)
            .sum()
    }

    /// Applies U ρ U† blockwise; `unitaries` holds one unitary per block.
    pub fn conjugate_blocks(&self, unitaries: &[ComplexMatrix]) -> Result<Self> {
        let densities = self
            .densities
            .iter()
            .zip(unitaries)
            .map(|(d, u)| u.conjugate(d))
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(self.spec.clone(), self.weights.clone(), densities)
    }
}

fn validate_density(rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = eig_hermitian(rho, f64::EPSILON)?;
    if let Some(&low) = eig.eigenvalues.first() {
        if low < -TAU_PSD {
            return Err(Error::NotPsd { eigenvalue: low });
        }
    }
    let h = rho.hermitian_part();
    let tr = h.trace().re;
    if (tr - 1.0).abs() > NORMALIZATION_SLACK {
        return Err(Error::InvalidState(format!("trace {tr} is not 1")));
    }
    Ok(h.scale(1.0 / tr))
}

fn same_spec(psi: &AlgebraState, phi: &AlgebraState, op: &str) -> Result<()> {
    if psi.spec != phi.spec {
        return Err(Error::domain(format!(
            "{op}: states live on different algebras {:?} and {:?}",
            psi.spec.blocks(),
            phi.spec.blocks()
        )));
    }
    Ok(())
}

/// Uhlmann fidelity of two (not necessarily normalized) PSD matrices:
/// tr[(√ρ σ √ρ)^{1/2}], evaluated as the nuclear norm ‖√ρ √σ‖₁.
pub fn fidelity_psd(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> Result<f64> {
    if rho.shape() != sigma.shape() {
        return Err(Error::dim("fidelity of matrices with different shapes"));
    }
    let a = sqrt_psd(rho)?;
    let b = sqrt_psd(sigma)?;
    nuclear_norm(&(&a * &b))
}

/// F(ψ, φ) = Σᵢ √(pᵢqᵢ) F(ρᵢ, σᵢ).
pub fn fidelity(psi: &AlgebraState, phi: &AlgebraState) -> Result<f64> {
    same_spec(psi, phi, "fidelity")?;
    let mut f = 0.0;
    for b in 0..psi.spec.num_blocks() {
        let (p, q) = (psi.weights[b], phi.weights[b]);
        if p == 0.0 || q == 0.0 {
            continue;
        }
        f += (p * q).sqrt() * fidelity_psd(&psi.densities[b], &phi.densities[b])?;
    }
    Ok(f.clamp(0.0, 1.0))
}

/// D(ψ, φ) = √(2 − 2F).
pub fn bures_distance(psi: &AlgebraState, phi: &AlgebraState) -> Result<f64> {
    Ok(bures_from_fidelity(fidelity(psi, phi)?))
}

pub fn bures_from_fidelity(f: f64) -> f64 {
    (2.0 - 2.0 * f).max(0.0).sqrt()
}

/// ‖ψ − φ‖ = Σᵢ ‖pᵢρᵢ − qᵢσᵢ‖₁.
pub fn trace_distance(psi: &AlgebraState, phi: &AlgebraState) -> Result<f64> {
    same_spec(psi, phi, "trace_distance")?;
    let mut t = 0.0;
    for (a, b) in psi.weighted_blocks().iter().zip(phi.weighted_blocks()) {
        t += trace_norm(&(a - &b))?;
    }
    Ok(t.clamp(0.0, 2.0))
}

/// ψ·φ = 1 − ¼‖ψ − φ‖² for pure states.
pub fn transition_probability(psi: &AlgebraState, phi: &AlgebraState) -> Result<f64> {
    for (name, s) in [("first", psi), ("second", phi)] {
        if !s.is_pure() {
            return Err(Error::NotPure(format!("{name} argument of transition_probability")));
        }
    }
    let t = trace_distance(psi, phi)?;
    Ok((1.0 - 0.25 * t * t).clamp(0.0, 1.0))
}

/// (1 − a)φ + aψ for 0 < a < 1.
pub fn mix(phi: &AlgebraState, psi: &AlgebraState, a: f64) -> Result<AlgebraState> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::Range {
            value: a,
            range: "(0, 1)",
        });
    }
    same_spec(phi, psi, "mix")?;
    let blocks = phi
        .weighted_blocks()
        .iter()
        .zip(psi.weighted_blocks())
        .map(|(f, p)| &f.scale(1.0 - a) + &p.scale(a))
        .collect();
    AlgebraState::from_weighted_blocks(phi.spec.clone(), blocks)
}

/// Reference route tr[(√ρ σ √ρ)^{1/2}] through two eigendecompositions.
///
/// Eigenvalues of √ρ σ √ρ below 8·n·ε·λ_max are treated as zero.
pub fn fidelity_trace_formula(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> Result<f64> {
    if rho.shape() != sigma.shape() {
        return Err(Error::dim("fidelity of matrices with different shapes"));
    }
    let r = sqrt_psd(rho)?;
    let m = &(&r * sigma) * &r;
    let ev = eig_hermitian(&m, f64::EPSILON)?.eigenvalues;
    let top = ev.iter().fold(0.0f64, |a, &l| a.max(l.abs()));
    let floor = 8.0 * ev.len() as f64 * f64::EPSILON * top;
    Ok(ev.iter().filter(|&&l| l > floor).map(|l| l.sqrt()).sum())
}

/// Block form of A ⊗ B: blocks dᵢeⱼ, first index major.
pub fn tensor_spec(a: &AlgebraSpec, b: &AlgebraSpec) -> AlgebraSpec {
    AlgebraSpec::new(
        a.blocks()
            .iter()
            .flat_map(|&x| b.blocks().iter().map(move |&y| x * y))
            .collect(),
    )
    .expect("products of positive dimensions")
}

/// ψ ⊗ φ on A ⊗ B.
pub fn tensor_states(psi: &AlgebraState, phi: &AlgebraState) -> AlgebraState {
    let mut weights = Vec::new();
    let mut densities = Vec::new();
    for (p, rp) in psi.weights.iter().zip(&psi.densities) {
        for (q, rq) in phi.weights.iter().zip(&phi.densities) {
            weights.push(p * q);
            densities.push(kron(rp, rq));
        }
    }
    AlgebraState {
        spec: tensor_spec(&psi.spec, &phi.spec),
        weights,
        densities,
    }
}

/// The metric bundle for a pair of states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateMetrics {
    pub fidelity: f64,
    pub bures_distance: f64,
    pub trace_distance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transition_probability: Option<f64>,
}

pub fn metrics(psi: &AlgebraState, phi: &AlgebraState) -> Result<StateMetrics> {
    let f = fidelity(psi, phi)?;
    let transition_probability = if psi.is_pure() && phi.is_pure() {
        Some(transition_probability(psi, phi)?)
    } else {
        None
    };
    Ok(StateMetrics {
        fidelity: f,
        bures_distance: bures_from_fidelity(f),
        trace_distance: trace_distance(psi, phi)?,
        transition_probability,
    })
}

#[derive(Serialize, Deserialize)]
struct RawState {
    spec: AlgebraSpec,
    weights: Vec<f64>,
    densities: Vec<Option<Vec<Complex64>>>,
}

impl TryFrom<RawState> for AlgebraState {
    type Error = Error;

    fn try_from(raw: RawState) -> Result<Self> {
        if raw.densities.len() != raw.spec.num_blocks() {
            return Err(Error::InvalidState(format!(
                "{} density entries for {} blocks",
                raw.densities.len(),
                raw.spec.num_blocks()
            )));
        }
        let densities = raw
            .densities
            .into_iter()
            .zip(raw.spec.blocks())
            .zip(&raw.weights)
            .map(|((entries, &d), &w)| match entries {
                Some(e) => ComplexMatrix::new(d, d, e),
                None if w == 0.0 => Ok(ComplexMatrix::identity(d).scale(1.0 / d as f64)),
                None => Err(Error::InvalidState("missing density for a block with nonzero weight".into())),
            })
            .collect::<Result<Vec<_>>>()?;
        AlgebraState::from_parts(raw.spec, raw.weights, densities)
    }
}

impl From<AlgebraState> for RawState {
    fn from(s: AlgebraState) -> Self {
        let densities = s
            .densities
            .into_iter()
            .zip(&s.weights)
            .map(|(d, &w)| if w == 0.0 { None } else { Some(d.into_vec()) })
            .collect();
        RawState {
            spec: s.spec,
            weights: s.weights,
            densities,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::vectors::basis_vector;

    fn qubit(v: [Complex64; 2]) -> AlgebraState {
        AlgebraState::pure(AlgebraSpec::full(2), 0, &v).unwrap()
    }

    fn ket0() -> AlgebraState {
        qubit([Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)])
    }

    fn ket1() -> AlgebraState {
        qubit([Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)])
    }

    fn plus() -> AlgebraState {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        qubit([Complex64::new(s, 0.0), Complex64::new(s, 0.0)])
    }

    #[test]
    fn fidelity_examples() {
        let psi = AlgebraState::random_mixed(&AlgebraSpec::full(3), &mut random::seeded(1));
        assert!((fidelity(&psi, &psi).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(fidelity(&ket0(), &ket1()).unwrap(), 0.0);
        // |⟨0|+⟩| = 1/√2
        assert!((fidelity(&ket0(), &plus()).unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn bures_examples() {
        assert!(bures_distance(&plus(), &plus()).unwrap() < 1e-7);
        assert!((bures_distance(&ket0(), &ket1()).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        let expected = (2.0 - 2f64.sqrt()).sqrt();
        assert!((bures_distance(&ket0(), &plus()).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 0.76536686).abs() < 1e-8);
    }

    #[test]
    fn trace_distance_examples() {
        assert_eq!(trace_distance(&plus(), &plus()).unwrap(), 0.0);
        assert!((trace_distance(&ket0(), &ket1()).unwrap() - 2.0).abs() < 1e-15);
        assert!((trace_distance(&ket0(), &plus()).unwrap() - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn transition_probability_examples() {
        assert!((transition_probability(&plus(), &plus()).unwrap() - 1.0).abs() < 1e-15);
        assert!(transition_probability(&ket0(), &ket1()).unwrap().abs() < 1e-15);
        assert!((transition_probability(&ket0(), &plus()).unwrap() - 0.5).abs() < 1e-14);
        let mixed = AlgebraState::maximally_mixed(&AlgebraSpec::full(2));
        assert!(matches!(transition_probability(&mixed, &ket0()), Err(Error::NotPure(_))));
    }

    #[test]
    fn mix_examples() {
        let spec = AlgebraSpec::new(vec![1, 2]).unwrap();
        let mut rng = random::seeded(4);
        let phi = AlgebraState::random_mixed(&spec, &mut rng);
        let psi = AlgebraState::random_mixed(&spec, &mut rng);
        let same = mix(&phi, &phi, 0.3).unwrap();
        assert!(trace_distance(&same, &phi).unwrap() < 1e-14);
        let a = 1e-3;
        let m = mix(&phi, &psi, a).unwrap();
        assert!(trace_distance(&m, &phi).unwrap() <= 2.0 * a);
        for ((w, q), p) in m.weights().iter().zip(phi.weights()).zip(psi.weights()) {
            assert!((w - ((1.0 - a) * q + a * p)).abs() < 1e-15);
        }
        assert!(matches!(mix(&phi, &psi, 1.0), Err(Error::Range { .. })));
        assert!(matches!(mix(&phi, &psi, 0.0), Err(Error::Range { .. })));
    }

    #[test]
    fn spec_mismatch_is_a_domain_error() {
        let other = AlgebraState::maximally_mixed(&AlgebraSpec::full(3));
        assert!(matches!(fidelity(&ket0(), &other), Err(Error::Domain(_))));
        assert!(matches!(trace_distance(&ket0(), &other), Err(Error::Domain(_))));
        assert!(matches!(bures_distance(&ket0(), &other), Err(Error::Domain(_))));
    }

    #[test]
    fn different_blocks_are_orthogonal() {
        let spec = AlgebraSpec::new(vec![2, 2]).unwrap();
        let a = AlgebraState::pure(spec.clone(), 0, &basis_vector(2, 0)).unwrap();
        let b = AlgebraState::pure(spec, 1, &basis_vector(2, 0)).unwrap();
        assert_eq!(fidelity(&a, &b).unwrap(), 0.0);
        assert!((trace_distance(&a, &b).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn purity_detection() {
        assert!(ket0().is_pure());
        assert!(!AlgebraState::maximally_mixed(&AlgebraSpec::full(2)).is_pure());
        let (b, v) = plus().pure_vector().unwrap();
        assert_eq!(b, 0);
        assert!((v[0].norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(plus().purity_defect() < 1e-15);
    }

    #[test]
    fn rejects_invalid_states() {
        let spec = AlgebraSpec::full(2);
        let bad = ComplexMatrix::from_real_diag(&[1.5, -0.5]);
        assert!(AlgebraState::from_parts(spec.clone(), vec![1.0], vec![bad]).is_err());
        let ok = ComplexMatrix::from_real_diag(&[0.5, 0.5]);
        assert!(AlgebraState::from_parts(spec.clone(), vec![0.7], vec![ok.clone()]).is_err());
        assert!(AlgebraState::from_parts(spec, vec![1.0, 0.0], vec![ok]).is_err());
    }

    #[test]
    fn json_round_trip_with_empty_block() {
        let spec = AlgebraSpec::new(vec![1, 2]).unwrap();
        let s = AlgebraState::pure(spec, 1, &basis_vector(2, 1)).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.starts_with(r#"{"spec":{"blocks":[1,2]},"weights":[0.0,1.0],"densities":[null,"#));
        let back: AlgebraState = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn uhlmann_trace_formula_agrees_on_mixed_states() {
        // Direct route: tr[(√ρ σ √ρ)^{1/2}] through two eigendecompositions.
        let spec = AlgebraSpec::full(4);
        let mut rng = random::seeded(77);
        for _ in 0..20 {
            let a = AlgebraState::random_mixed(&spec, &mut rng);
            let b = AlgebraState::random_mixed(&spec, &mut rng);
            let ra = sqrt_psd(&a.densities()[0]).unwrap();
            let inner = &(&ra * &b.densities()[0]) * &ra;
            let direct = crate::matcore::eigvals_hermitian(&inner)
                .unwrap()
                .iter()
                .map(|l| l.max(0.0).sqrt())
                .sum::<f64>();
            assert!((direct - fidelity(&a, &b).unwrap()).abs() < 1e-9);
        }
    }
}
