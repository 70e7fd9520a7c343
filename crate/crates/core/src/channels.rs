//! Completely positive maps in the Schrödinger picture.
//!
//! A channel from ℂ^{in} to ℂ^{out} is stored by Kraus operators Kₖ (out×in)
//! acting as ρ ↦ Σ Kₖ ρ Kₖ†, together with its Choi matrix
//! J = Σᵢⱼ |i⟩⟨j| ⊗ T(|i⟩⟨j|), input factor first. Trace preservation of the
//! state-picture map is the same condition as unitality of its Heisenberg dual.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{eig_hermitian, kron, matrix_unit, random, swap_operator, ComplexMatrix, Complex64};
use crate::states::{fidelity, fidelity_psd, AlgebraState};
use crate::tolerance::{TAU_PSD, TAU_RECON};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawChannel", into = "RawChannel")]
pub struct QuantumChannel {
    in_dim: usize,
    out_dim: usize,
    kraus: Vec<ComplexMatrix>,
    choi: ComplexMatrix,
    is_cp: bool,
    is_trace_preserving: bool,
    truncated_weight: f64,
}

impl QuantumChannel {
    pub fn from_kraus(in_dim: usize, out_dim: usize, kraus: Vec<ComplexMatrix>) -> Result<Self> {
        if in_dim == 0 || out_dim == 0 {
            return Err(Error::dim("channel dimensions must be at least 1"));
        }
        if kraus.is_empty() {
            return Err(Error::dim("a channel needs at least one Kraus operator"));
        }
        if let Some(k) = kraus.iter().find(|k| k.shape() != (out_dim, in_dim)) {
            return Err(Error::dim(format!(
                "Kraus operator is {}x{}, expected {out_dim}x{in_dim}",
                k.rows(),
                k.cols()
            )));
        }
        let choi = choi_from_kraus(in_dim, out_dim, &kraus);
        let is_trace_preserving = trace_preservation_defect(in_dim, &kraus) <= TAU_RECON;
        Ok(Self {
            in_dim,
            out_dim,
            kraus,
            choi,
            is_cp: true,
            is_trace_preserving,
            truncated_weight: 0.0,
        })
    }

    /// Kraus extraction from a Hermitian Choi matrix; eigenvalues ≤ τ_psd are dropped.
    pub fn from_choi(in_dim: usize, out_dim: usize, choi: &ComplexMatrix) -> Result<Self> {
        Self::from_choi_with(in_dim, out_dim, choi, TAU_PSD)
    }

    pub fn from_choi_with(in_dim: usize, out_dim: usize, choi: &ComplexMatrix, tau_psd: f64) -> Result<Self> {
        let n = in_dim * out_dim;
        if in_dim == 0 || out_dim == 0 || choi.shape() != (n, n) {
            return Err(Error::dim(format!(
                "Choi matrix for {in_dim} -> {out_dim} must be {n}x{n}, got {}x{}",
                choi.rows(),
                choi.cols()
            )));
        }
        let eig = eig_hermitian(choi, f64::EPSILON)?;
        if let Some(&low) = eig.eigenvalues.first() {
            if low < -tau_psd {
                return Err(Error::NotCp { eigenvalue: low });
            }
        }
        let mut kraus = Vec::new();
        let mut truncated_weight = 0.0;
        for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
            if lambda <= tau_psd {
                truncated_weight += lambda.abs();
                continue;
            }
            let v = eig.eigenvector(k);
            let s = lambda.sqrt();
            kraus.push(ComplexMatrix::from_fn(out_dim, in_dim, |o, i| v[i * out_dim + o] * s));
        }
        if kraus.is_empty() {
            kraus.push(ComplexMatrix::zeros(out_dim, in_dim));
        }
        let is_trace_preserving = trace_preservation_defect(in_dim, &kraus) <= TAU_RECON;
        Ok(Self {
            in_dim,
            out_dim,
            kraus,
            choi: choi.hermitian_part(),
            is_cp: true,
            is_trace_preserving,
            truncated_weight,
        })
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn to_choi(&self) -> ComplexMatrix {
        self.choi.clone()
    }

    pub fn choi(&self) -> &ComplexMatrix {
        &self.choi
    }

    pub fn is_cp(&self) -> bool {
        self.is_cp
    }

    pub fn is_trace_preserving(&self) -> bool {
        self.is_trace_preserving
    }

    /// Unitality of the Heisenberg-picture dual.
    pub fn is_unital_heisenberg(&self) -> bool {
        self.is_trace_preserving
    }

    /// Spectral weight discarded when Kraus operators were extracted from a Choi matrix.
    pub fn truncated_weight(&self) -> f64 {
        self.truncated_weight
    }

    /// ‖Σ Kₖ†Kₖ − I‖_F.
    pub fn trace_preservation_defect(&self) -> f64 {
        trace_preservation_defect(self.in_dim, &self.kraus)
    }

    /// T*(ρ) = Σ Kₖ ρ Kₖ†.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.shape() != (self.in_dim, self.in_dim) {
            return Err(Error::domain(format!(
                "channel input is {0}x{0}, got {1}x{2}",
                self.in_dim,
                rho.rows(),
                rho.cols()
            )));
        }
        let mut out = ComplexMatrix::zeros(self.out_dim, self.out_dim);
        for k in &self.kraus {
            let kr = k.matmul_unchecked(rho);
            let term = kr.matmul_unchecked(&k.adjoint());
            out.axpy(Complex64::new(1.0, 0.0), &term);
        }
        Ok(out.hermitian_part())
    }

    /// Applies the channel to the block-diagonal density of a state.
    pub fn apply_state(&self, state: &AlgebraState) -> Result<ComplexMatrix> {
        self.apply(&state.to_density())
    }

    /// Largest entrywise difference of the two actions over all matrix units.
    pub fn max_action_discrepancy(&self, other: &QuantumChannel) -> Result<f64> {
        if (self.in_dim, self.out_dim) != (other.in_dim, other.out_dim) {
            return Err(Error::domain("channels have different dimensions"));
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.in_dim {
            for j in 0..self.in_dim {
                let e = matrix_unit(self.in_dim, i, j);
                worst = worst.max(self.apply_raw(&e).max_abs_diff(&other.apply_raw(&e)));
            }
        }
        Ok(worst)
    }

    /// Σ Kₖ X Kₖ† without Hermitian symmetrization, for non-Hermitian X.
    pub fn apply_raw(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.out_dim, self.out_dim);
        for k in &self.kraus {
            out.axpy(Complex64::new(1.0, 0.0), &k.matmul_unchecked(x).matmul_unchecked(&k.adjoint()));
        }
        out
    }
}

fn choi_from_kraus(in_dim: usize, out_dim: usize, kraus: &[ComplexMatrix]) -> ComplexMatrix {
    let n = in_dim * out_dim;
    let mut j = ComplexMatrix::zeros(n, n);
    for k in kraus {
        let v: Vec<Complex64> = (0..n).map(|idx| k[(idx % out_dim, idx / out_dim)]).collect();
        j.axpy(Complex64::new(1.0, 0.0), &ComplexMatrix::outer(&v));
    }
    j
}

fn trace_preservation_defect(in_dim: usize, kraus: &[ComplexMatrix]) -> f64 {
    let mut s = ComplexMatrix::zeros(in_dim, in_dim);
    for k in kraus {
        s.axpy(Complex64::new(1.0, 0.0), &k.adjoint().matmul_unchecked(k));
    }
    s.frobenius_distance(&ComplexMatrix::identity(in_dim))
}

pub fn to_choi(channel: &QuantumChannel) -> ComplexMatrix {
    channel.to_choi()
}

pub fn identity(d: usize) -> QuantumChannel {
    QuantumChannel::from_kraus(d, d, vec![ComplexMatrix::identity(d)]).expect("identity is well formed")
}

pub fn unitary(u: &ComplexMatrix) -> Result<QuantumChannel> {
    if !u.is_square() {
        return Err(Error::dim("unitary channel needs a square matrix"));
    }
    QuantumChannel::from_kraus(u.cols(), u.rows(), vec![u.clone()])
}

/// Exchange of the two factors of ℂᵈ ⊗ ℂᵈ.
pub fn swap(d: usize) -> QuantumChannel {
    unitary(&swap_operator(d)).expect("swap is square")
}

/// ρ ↦ (1 − λ)ρ + λ tr(ρ) I/d for λ ∈ [0, 1].
pub fn depolarizing(d: usize, lambda: f64) -> Result<QuantumChannel> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::Range {
            value: lambda,
            range: "[0, 1]",
        });
    }
    let mut kraus = Vec::with_capacity(d * d + 1);
    if lambda < 1.0 {
        kraus.push(ComplexMatrix::identity(d).scale((1.0 - lambda).sqrt()));
    }
    if lambda > 0.0 {
        let s = (lambda / d as f64).sqrt();
        for a in 0..d {
            for b in 0..d {
                kraus.push(matrix_unit(d, a, b).scale(s));
            }
        }
    }
    QuantumChannel::from_kraus(d, d, kraus)
}

/// tr₂ on ℂ^{d₁} ⊗ ℂ^{d₂}, as a channel to ℂ^{d₁}.
pub fn discard_second(d1: usize, d2: usize) -> QuantumChannel {
    let kraus = (0..d2)
        .map(|b| ComplexMatrix::from_fn(d1, d1 * d2, |r, c| {
            if c == r * d2 + b {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
        .collect();
    QuantumChannel::from_kraus(d1 * d2, d1, kraus).expect("partial trace is well formed")
}

/// c₂ ∘ c₁.
pub fn compose(c2: &QuantumChannel, c1: &QuantumChannel) -> Result<QuantumChannel> {
    if c1.out_dim != c2.in_dim {
        return Err(Error::domain(format!(
            "cannot compose: first channel outputs dimension {}, second expects {}",
            c1.out_dim, c2.in_dim
        )));
    }
    let mut kraus = Vec::with_capacity(c1.kraus.len() * c2.kraus.len());
    for a in &c2.kraus {
        for b in &c1.kraus {
            kraus.push(a.matmul_unchecked(b));
        }
    }
    QuantumChannel::from_kraus(c1.in_dim, c2.out_dim, kraus)
}

/// c₁ ⊗ c₂.
pub fn tensor(c1: &QuantumChannel, c2: &QuantumChannel) -> QuantumChannel {
    let mut kraus = Vec::with_capacity(c1.kraus.len() * c2.kraus.len());
    for a in &c1.kraus {
        for b in &c2.kraus {
            kraus.push(kron(a, b));
        }
    }
    QuantumChannel::from_kraus(c1.in_dim * c2.in_dim, c1.out_dim * c2.out_dim, kraus).expect("dimensions multiply")
}

/// Stinespring channel ρ ↦ tr_env(VρV†) for a Haar isometry V: ℂ^{in} → ℂ^{out} ⊗ ℂ^{env}.
pub fn random_channel(in_dim: usize, out_dim: usize, env_dim: usize, seed: u64) -> Result<QuantumChannel> {
    random_channel_with(in_dim, out_dim, env_dim, &mut random::seeded(seed))
}

pub fn random_channel_with<R: Rng + ?Sized>(
    in_dim: usize,
    out_dim: usize,
    env_dim: usize,
    rng: &mut R,
) -> Result<QuantumChannel> {
    if in_dim == 0 || out_dim == 0 || env_dim == 0 {
        return Err(Error::dim("channel dimensions must be at least 1"));
    }
    if out_dim * env_dim < in_dim {
        return Err(Error::domain(format!(
            "no isometry from dimension {in_dim} into {out_dim}x{env_dim}"
        )));
    }
    let v = random::random_isometry(out_dim * env_dim, in_dim, rng);
    Ok(from_isometry(&v, out_dim, env_dim))
}

/// Channel of an isometry V whose rows are indexed (o, e) with e fastest.
pub fn from_isometry(v: &ComplexMatrix, out_dim: usize, env_dim: usize) -> QuantumChannel {
    let in_dim = v.cols();
    let kraus = (0..env_dim)
        .map(|e| ComplexMatrix::from_fn(out_dim, in_dim, |o, i| v[(o * env_dim + e, i)]))
        .collect();
    QuantumChannel::from_kraus(in_dim, out_dim, kraus).expect("isometry rows are out x env")
}

/// Fidelities before and after a channel, for the data-processing inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityCheck {
    pub before: f64,
    pub after: f64,
    pub holds: bool,
}

/// The monotonicity test passes when F_after ≥ F_before − 1e-9.
pub const MONOTONICITY_SLACK: f64 = 1e-9;

pub fn monotonicity_check(channel: &QuantumChannel, psi: &AlgebraState, phi: &AlgebraState) -> Result<MonotonicityCheck> {
    if psi.spec().hilbert_dim() != channel.in_dim {
        return Err(Error::domain("state does not live on the channel's input space"));
    }
    let before = fidelity(psi, phi)?;
    let a = channel.apply_state(psi)?;
    let b = channel.apply_state(phi)?;
    let after = fidelity_psd(&a, &b)?.clamp(0.0, 1.0);
    Ok(MonotonicityCheck {
        before,
        after,
        holds: after >= before - MONOTONICITY_SLACK,
    })
}

#[derive(Serialize, Deserialize)]
struct RawChannel {
    in_dim: usize,
    out_dim: usize,
    choi: Vec<Complex64>,
}

impl TryFrom<RawChannel> for QuantumChannel {
    type Error = Error;

    fn try_from(raw: RawChannel) -> Result<Self> {
        let n = raw.in_dim * raw.out_dim;
        let choi = ComplexMatrix::new(n, n, raw.choi)?;
        QuantumChannel::from_choi(raw.in_dim, raw.out_dim, &choi)
    }
}

impl From<QuantumChannel> for RawChannel {
    fn from(c: QuantumChannel) -> Self {
        RawChannel {
            in_dim: c.in_dim,
            out_dim: c.out_dim,
            choi: c.choi.into_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraSpec;
    use crate::matcore::{eigvals_hermitian, random_density};
    use crate::matcore::vectors::basis_vector;

    #[test]
    fn identity_choi_is_maximally_entangled() {
        let d = 3;
        let j = identity(d).to_choi();
        let omega: Vec<Complex64> = (0..d * d)
            .map(|k| if k / d == k % d { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
            .collect();
        assert!(j.approx_eq(&ComplexMatrix::outer(&omega), 1e-15));
    }

    #[test]
    fn complete_depolarizer_maps_basis_to_identity() {
        let d = 3;
        let c = depolarizing(d, 1.0).unwrap();
        for i in 0..d {
            for k in 0..d {
                let out = c.apply_raw(&matrix_unit(d, i, k));
                let expected = if i == k {
                    ComplexMatrix::identity(d).scale(1.0 / d as f64)
                } else {
                    ComplexMatrix::zeros(d, d)
                };
                assert!(out.approx_eq(&expected, 1e-15));
            }
        }
        // J = I_in ⊗ I_out / d
        assert!(c.to_choi().approx_eq(&ComplexMatrix::identity(d * d).scale(1.0 / d as f64), 1e-15));
    }

    #[test]
    fn choi_round_trip() {
        let c = random_channel(4, 4, 3, 8).unwrap();
        assert!(c.is_cp() && c.is_trace_preserving());
        let back = QuantumChannel::from_choi(4, 4, &c.to_choi()).unwrap();
        assert!(back.kraus().len() <= 3);
        assert!(c.max_action_discrepancy(&back).unwrap() <= 1e-9);
        assert!(back.is_trace_preserving());
    }

    #[test]
    fn non_cp_choi_is_rejected() {
        // Transpose map: its Choi matrix is the swap, with eigenvalue −1.
        let err = QuantumChannel::from_choi(2, 2, &swap_operator(2)).unwrap_err();
        assert!(matches!(err, Error::NotCp { eigenvalue } if (eigenvalue + 1.0).abs() < 1e-12));
    }

    #[test]
    fn apply_preserves_trace_and_spectrum() {
        let mut rng = random::seeded(2);
        let rho = random_density(3, 3, &mut rng);
        assert_eq!(identity(3).apply(&rho).unwrap(), rho.hermitian_part());
        let u = random::random_unitary(3, &mut rng);
        let out = unitary(&u).unwrap().apply(&rho).unwrap();
        let (a, b) = (eigvals_hermitian(&rho).unwrap(), eigvals_hermitian(&out).unwrap());
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
        let c = random_channel(3, 2, 4, 5).unwrap();
        assert!((c.apply(&rho).unwrap().trace().re - 1.0).abs() < 1e-10);
        assert!(matches!(c.apply(&ComplexMatrix::identity(2)), Err(Error::Domain(_))));
    }

    #[test]
    fn depolarizing_increases_fidelity() {
        let spec = AlgebraSpec::full(2);
        let a = AlgebraState::pure(spec.clone(), 0, &basis_vector(2, 0)).unwrap();
        let b = AlgebraState::pure(spec, 0, &basis_vector(2, 1)).unwrap();
        let same = monotonicity_check(&identity(2), &a, &a).unwrap();
        assert_eq!(same.before, same.after);
        let check = monotonicity_check(&depolarizing(2, 0.5).unwrap(), &a, &b).unwrap();
        // diag(3/4, 1/4) against diag(1/4, 3/4): F = 2·√(3/16) = √3/2.
        assert_eq!(check.before, 0.0);
        assert!((check.after - 3f64.sqrt() / 2.0).abs() < 1e-12);
        assert!(check.holds);
    }

    #[test]
    fn composition_and_tensor() {
        let c = random_channel(2, 3, 2, 1).unwrap();
        let composed = compose(&identity(3), &c).unwrap();
        assert!(composed.max_action_discrepancy(&c).unwrap() < 1e-14);
        assert!(compose(&identity(2), &c).is_err());
        let id4 = tensor(&identity(2), &identity(2));
        assert!(id4.max_action_discrepancy(&identity(4)).unwrap() == 0.0);

        let c2 = random_channel(2, 2, 3, 9).unwrap();
        let mut rng = random::seeded(6);
        let (r1, r2) = (random_density(2, 2, &mut rng), random_density(2, 1, &mut rng));
        let lhs = tensor(&c, &c2).apply(&kron(&r1, &r2)).unwrap();
        let rhs = kron(&c.apply(&r1).unwrap(), &c2.apply(&r2).unwrap());
        assert!(lhs.approx_eq(&rhs, 1e-12));
    }

    #[test]
    fn random_channel_shapes() {
        let u = random_channel(3, 3, 1, 4).unwrap();
        assert_eq!(u.kraus().len(), 1);
        let k = &u.kraus()[0];
        assert!((&k.adjoint() * k).approx_eq(&ComplexMatrix::identity(3), 1e-12));
        assert!(random_channel(4, 1, 2, 0).is_err());
        let a = random_channel(2, 2, 2, 1).unwrap();
        let b = random_channel(2, 2, 2, 2).unwrap();
        assert!(a.choi().frobenius_distance(b.choi()) > 0.0);
    }

    #[test]
    fn discard_second_is_partial_trace() {
        let mut rng = random::seeded(3);
        let rho = random_density(6, 6, &mut rng);
        let out = discard_second(2, 3).apply(&rho).unwrap();
        let pt = crate::matcore::partial_trace(&rho, (2, 3), crate::matcore::Factor::Second).unwrap();
        assert!(out.approx_eq(&pt, 1e-14));
    }

    #[test]
    fn json_round_trip() {
        let c = depolarizing(2, 0.3).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        assert!(text.starts_with(r#"{"in_dim":2,"out_dim":2,"choi":[["#));
        let back: QuantumChannel = serde_json::from_str(&text).unwrap();
        assert!(back.max_action_discrepancy(&c).unwrap() < 1e-12);
    }
}
