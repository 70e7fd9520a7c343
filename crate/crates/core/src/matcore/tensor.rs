use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ZERO};
use crate::error::{Error, Result};

/// Kronecker product A ⊗ B.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    ComplexMatrix::from_fn(ar * br, ac * bc, |r, c| a[(r / br, c / bc)] * b[(r % br, c % bc)])
}

/// Which tensor factor of a bipartite operator to trace out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    First,
    Second,
}

/// Partial trace of an operator on ℂ^{d₁} ⊗ ℂ^{d₂} over one factor.
///
/// Tracing out [`Factor::Second`] returns the d₁×d₁ marginal, and vice versa.
pub fn partial_trace(a: &ComplexMatrix, dims: (usize, usize), over: Factor) -> Result<ComplexMatrix> {
    let (d1, d2) = dims;
    if a.shape() != (d1 * d2, d1 * d2) {
        return Err(Error::dim(format!(
            "partial trace with dims ({d1}, {d2}) needs a {0}x{0} matrix, got {1}x{2}",
            d1 * d2,
            a.rows(),
            a.cols()
        )));
    }
    Ok(partial_trace_unchecked(a, d1, d2, over))
}

pub(crate) fn partial_trace_unchecked(a: &ComplexMatrix, d1: usize, d2: usize, over: Factor) -> ComplexMatrix {
    match over {
        Factor::Second => ComplexMatrix::from_fn(d1, d1, |i, j| {
            let mut acc = ZERO;
            for k in 0..d2 {
                acc += a[(i * d2 + k, j * d2 + k)];
            }
            acc
        }),
        Factor::First => ComplexMatrix::from_fn(d2, d2, |i, j| {
            let mut acc = ZERO;
            for k in 0..d1 {
                acc += a[(k * d2 + i, k * d2 + j)];
            }
            acc
        }),
    }
}

/// The swap operator on ℂᵈ ⊗ ℂᵈ.
pub fn swap_operator(d: usize) -> ComplexMatrix {
    let n = d * d;
    let mut s = ComplexMatrix::zeros(n, n);
    for i in 0..d {
        for j in 0..d {
            s[(j * d + i, i * d + j)] = Complex64::new(1.0, 0.0);
        }
    }
    s
}

/// Matrix unit Eᵢⱼ = |i⟩⟨j| in dimension d.
pub fn matrix_unit(d: usize, i: usize, j: usize) -> ComplexMatrix {
    let mut e = ComplexMatrix::zeros(d, d);
    e[(i, j)] = Complex64::new(1.0, 0.0);
    e
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
}

pub fn pauli_y() -> ComplexMatrix {
    let i = Complex64::new(0.0, 1.0);
    ComplexMatrix::new(2, 2, vec![ZERO, -i, i, ZERO]).expect("2x2 literal")
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_diag(&[1.0, -1.0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::vectors::kron_vec;

    #[test]
    fn kron_examples() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
        let d = ComplexMatrix::from_real_diag(&[1.0, 2.0]);
        assert_eq!(kron(&d, &i2), ComplexMatrix::from_real_diag(&[1.0, 1.0, 2.0, 2.0]));
    }

    #[test]
    fn partial_trace_examples() {
        let i4 = ComplexMatrix::identity(4);
        let r = partial_trace(&i4, (2, 2), Factor::First).unwrap();
        assert_eq!(r, ComplexMatrix::identity(2).scale(2.0));

        // Bell projector: contracting either index pair leaves ½ I.
        let s = 0.5f64.sqrt();
        let bell = vec![Complex64::new(s, 0.0), ZERO, ZERO, Complex64::new(s, 0.0)];
        let p = ComplexMatrix::outer(&bell);
        for f in [Factor::First, Factor::Second] {
            let m = partial_trace(&p, (2, 2), f).unwrap();
            assert!(m.approx_eq(&ComplexMatrix::identity(2).scale(0.5), 1e-15));
        }
        assert!(partial_trace(&i4, (2, 3), Factor::First).is_err());
    }

    #[test]
    fn partial_trace_of_product_vector() {
        let u = vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
        let v = vec![Complex64::new(0.0, 1.0), ZERO, ZERO];
        let m = ComplexMatrix::outer(&kron_vec(&u, &v));
        let first = partial_trace(&m, (2, 3), Factor::Second).unwrap();
        assert!(first.approx_eq(&ComplexMatrix::outer(&u), 1e-15));
        let second = partial_trace(&m, (2, 3), Factor::First).unwrap();
        assert!(second.approx_eq(&ComplexMatrix::outer(&v), 1e-15));
    }

    #[test]
    fn swap_conjugation_exchanges_factors() {
        let s = swap_operator(2);
        let a = kron(&pauli_x(), &ComplexMatrix::identity(2));
        let b = &(&s * &a) * &s;
        assert_eq!(b, kron(&ComplexMatrix::identity(2), &pauli_x()));
    }
}
