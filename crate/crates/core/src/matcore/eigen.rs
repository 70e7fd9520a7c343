//! Cyclic Jacobi eigensolver for Hermitian matrices, plus the spectral
//! functions built on it (PSD square root, trace norm) and a one-sided
//! Jacobi routine for singular values.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ZERO};
use crate::error::{Error, Result};
use crate::tolerance::{TAU_HERM, TAU_PSD};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// V f(Λ) V†
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            let mut acc = ZERO;
            for k in 0..n {
                if fl[k] != 0.0 {
                    acc += v[(i, k)] * v[(j, k)].conj() * fl[k];
                }
            }
            acc
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|l| l)
    }

    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.col(k)
    }
}

/// Hermitian eigendecomposition by cyclic Jacobi rotations.
///
/// The input is symmetrised as (A + A†)/2 first; a relative Hermiticity
/// defect above [`TAU_HERM`] is rejected. `tol` is the relative off-diagonal
/// Frobenius mass at which the sweeps stop.
pub fn eig_hermitian(a: &ComplexMatrix, tol: f64) -> Result<EigenDecomposition> {
    if !a.is_square() {
        return Err(Error::dim(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let scale = a.frobenius_norm();
    let defect = a.hermiticity_defect();
    if defect > TAU_HERM * scale.max(1.0) {
        return Err(Error::NotHermitian {
            defect: defect / scale.max(1.0),
        });
    }
    let mut m = a.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    if n == 0 || scale == 0.0 {
        return Ok(EigenDecomposition {
            eigenvalues: vec![0.0; n],
            eigenvectors: v,
        });
    }
    let target = tol.max(f64::EPSILON) * scale;

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&m);
        if off <= target {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::Convergence {
                sweeps,
                residual: off / scale,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, &mut v, p, q, scale);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]).then(i.cmp(&j)));
    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only, ascending.
pub fn eigvals_hermitian(a: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(eig_hermitian(a, f64::EPSILON)?.eigenvalues)
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += m[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

// Zeroes m[p][q] with J = diag-phase · real rotation; m ← J† m J, v ← v J.
fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, scale: f64) {
    let apq = m[(p, q)];
    let mag = apq.norm();
    if mag <= f64::EPSILON * 1e-3 * scale {
        return;
    }
    let phase = apq / mag;
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let e = phase.conj();
    // J restricted to (p, q): [[c, s], [-s e, c e]]
    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = -e * s;
    let jqq = e * c;
    let n = m.rows();
    for r in 0..n {
        let xp = m[(r, p)];
        let xq = m[(r, q)];
        m[(r, p)] = xp * jpp + xq * jqp;
        m[(r, q)] = xp * jpq + xq * jqq;
    }
    for col in 0..n {
        let xp = m[(p, col)];
        let xq = m[(q, col)];
        m[(p, col)] = jpp.conj() * xp + jqp.conj() * xq;
        m[(q, col)] = jpq.conj() * xp + jqq.conj() * xq;
    }
    m[(p, q)] = ZERO;
    m[(q, p)] = ZERO;
    m[(p, p)].im = 0.0;
    m[(q, q)].im = 0.0;
    for r in 0..n {
        let xp = v[(r, p)];
        let xq = v[(r, q)];
        v[(r, p)] = xp * jpp + xq * jqp;
        v[(r, q)] = xp * jpq + xq * jqq;
    }
}

/// Eigenvalues this close to zero relative to the spectral radius are
/// rounding noise from the rotations and are treated as exact zeros.
fn noise_floor(eigenvalues: &[f64]) -> f64 {
    let radius = eigenvalues.iter().fold(0.0_f64, |m, l| m.max(l.abs()));
    8.0 * eigenvalues.len() as f64 * f64::EPSILON * radius
}

/// Square root of a Hermitian PSD matrix, clamping eigenvalues in [−`TAU_PSD`, 0).
pub fn sqrt_psd(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    sqrt_psd_with(a, TAU_PSD)
}

pub fn sqrt_psd_with(a: &ComplexMatrix, tau_psd: f64) -> Result<ComplexMatrix> {
    let eig = eig_hermitian(a, f64::EPSILON)?;
    if let Some(&lowest) = eig.eigenvalues.first() {
        if lowest < -tau_psd {
            return Err(Error::NotPsd { eigenvalue: lowest });
        }
    }
    let floor = noise_floor(&eig.eigenvalues);
    Ok(eig.reconstruct_with(|l| if l <= floor { 0.0 } else { l.sqrt() }))
}

/// Σ|λᵢ| for Hermitian input.
pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    if !a.is_square() {
        return Err(Error::dim(format!(
            "trace norm needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    Ok(eigvals_hermitian(a)?.iter().map(|l| l.abs()).sum())
}

/// Singular values (descending) by one-sided Jacobi on the columns.
///
/// Zero singular values come out at rounding level rather than at the
/// square root of rounding level, which is what the fidelity kernel needs.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    // Work on whichever orientation has fewer columns.
    let mut w = if a.cols() > a.rows() { a.adjoint() } else { a.clone() };
    let (m, n) = w.shape();
    let scale = w.frobenius_norm();
    if scale == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let tol = m as f64 * f64::EPSILON;
    let floor = (f64::EPSILON * scale).powi(2);
    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = ZERO;
                for r in 0..m {
                    let xp = w[(r, p)];
                    let xq = w[(r, q)];
                    alpha += xp.norm_sqr();
                    beta += xq.norm_sqr();
                    gamma += xp.conj() * xq;
                }
                let g = gamma.norm();
                // Columns at rounding level relative to A cannot be orthogonalized further.
                if g == 0.0 || g <= tol * (alpha * beta).sqrt() || alpha.min(beta) <= floor {
                    continue;
                }
                rotated = true;
                let phase = gamma.conj() / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for r in 0..m {
                    let xp = w[(r, p)];
                    let xq = w[(r, q)] * phase;
                    w[(r, p)] = xp * c - xq * s;
                    w[(r, q)] = xp * s + xq * c;
                }
            }
        }
        if !rotated {
            break;
        }
        sweeps += 1;
        if sweeps == MAX_SWEEPS {
            return Err(Error::Convergence {
                sweeps,
                residual: f64::NAN,
            });
        }
    }
    let mut sv: Vec<f64> = (0..n)
        .map(|c| (0..m).map(|r| w[(r, c)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// Σ σᵢ(A), the nuclear norm.
pub fn nuclear_norm(a: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(a)?.iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{pauli_x, pauli_y, pauli_z};

    #[test]
    fn identity_has_unit_spectrum() {
        let e = eig_hermitian(&ComplexMatrix::identity(2), 1e-14).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 1.0]);
        let v = &e.eigenvectors;
        assert!((&v.adjoint() * v).approx_eq(&ComplexMatrix::identity(2), 1e-14));
    }

    #[test]
    fn diagonal_sorted_ascending() {
        let e = eig_hermitian(&ComplexMatrix::from_real_diag(&[3.0, 1.0]), 1e-14).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 3.0]);
    }

    #[test]
    fn pauli_spectra() {
        // λ² − 1 = 0 for every Pauli matrix.
        for p in [pauli_x(), pauli_y(), pauli_z()] {
            let e = eig_hermitian(&p, 1e-14).unwrap();
            assert!((e.eigenvalues[0] + 1.0).abs() < 1e-14);
            assert!((e.eigenvalues[1] - 1.0).abs() < 1e-14);
            assert!(e.reconstruct().approx_eq(&p, 1e-14));
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(
            eig_hermitian(&ComplexMatrix::zeros(2, 3), 1e-12),
            Err(Error::Dimension(_))
        ));
        let nh = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(eig_hermitian(&nh, 1e-12), Err(Error::NotHermitian { .. })));
        let neg = ComplexMatrix::from_real_diag(&[1.0, -0.1]);
        assert_eq!(sqrt_psd(&neg).unwrap_err(), Error::NotPsd { eigenvalue: -0.1 });
        let tiny = ComplexMatrix::from_real_diag(&[1.0, -1e-12]);
        assert_eq!(sqrt_psd(&tiny).unwrap(), ComplexMatrix::from_real_diag(&[1.0, 0.0]));
    }

    #[test]
    fn sqrt_examples() {
        assert!(sqrt_psd(&ComplexMatrix::identity(3))
            .unwrap()
            .approx_eq(&ComplexMatrix::identity(3), 1e-15));
        assert!(sqrt_psd(&ComplexMatrix::from_real_diag(&[4.0, 9.0]))
            .unwrap()
            .approx_eq(&ComplexMatrix::from_real_diag(&[2.0, 3.0]), 1e-15));
        // ½(I+X) is a projector, hence its own square root.
        let p = (&ComplexMatrix::identity(2) + &pauli_x()).scale(0.5);
        let r = sqrt_psd(&p).unwrap();
        assert!((&r * &r).approx_eq(&p, 1e-14));
        assert!(r.approx_eq(&p, 1e-12));
    }

    #[test]
    fn trace_norm_examples() {
        assert_eq!(trace_norm(&ComplexMatrix::zeros(2, 2)).unwrap(), 0.0);
        assert!((trace_norm(&ComplexMatrix::from_real_diag(&[1.0, -1.0])).unwrap() - 2.0).abs() < 1e-15);
        // |0⟩⟨0| − |+⟩⟨+|: overlap 1/√2, so 2(1 − ½)^{1/2} = √2.
        let p0 = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
        let pp = ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]);
        assert!((trace_norm(&(&p0 - &pp)).unwrap() - 2f64.sqrt()).abs() < 1e-14);
        assert!(trace_norm(&ComplexMatrix::zeros(1, 2)).is_err());
    }

    #[test]
    fn singular_values_of_rank_one() {
        let u = vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
        let v = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];
        let a = ComplexMatrix::outer2(&u, &v).scale(3.0);
        let s = singular_values(&a).unwrap();
        assert!((s[0] - 3.0).abs() < 1e-14);
        assert!(s[1].abs() < 1e-15);
    }

    #[test]
    fn singular_values_match_eigenvalues_of_gram() {
        let a = ComplexMatrix::from_fn(3, 3, |i, j| Complex64::new((i + 2 * j) as f64 - 2.0, (i * j) as f64 * 0.3));
        let sv = singular_values(&a).unwrap();
        let gram = &a.adjoint() * &a;
        let mut ev = eigvals_hermitian(&gram).unwrap();
        ev.reverse();
        for (s, l) in sv.iter().zip(ev) {
            assert!((s * s - l).abs() < 1e-10 * l.abs().max(1.0));
        }
    }
}
