//! Seeded sampling of unitaries, pure vectors and density matrices.
//!
//! The generator is ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded from a 64-bit
//! integer via `seed_from_u64`, with an independent 64-bit stream index
//! selected by `set_stream`. Given the same (seed, stream) every draw is
//! bit-identical across runs and platforms.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::matrix::{inner, vec_norm, ComplexMatrix};

pub type SeededRng = ChaCha8Rng;

/// Generator for `seed` on stream 0.
pub fn seeded(seed: u64) -> SeededRng {
    stream(seed, 0)
}

/// Generator for `seed` on an independent stream.
pub fn stream(seed: u64, index: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Complex standard Gaussian (real and imaginary parts each N(0, ½)).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Modified Gram–Schmidt on the columns, in place. Returns false if a column
/// collapsed (numerically dependent input).
pub fn orthonormalize_columns(m: &mut ComplexMatrix) -> bool {
    let (rows, cols) = m.shape();
    let mut ok = true;
    for c in 0..cols {
        let mut v = m.col(c);
        // Two passes keep the basis orthonormal to rounding level.
        for _ in 0..2 {
            for prev in 0..c {
                let u = m.col(prev);
                let proj = inner(&u, &v);
                for r in 0..rows {
                    v[r] -= proj * u[r];
                }
            }
        }
        let n = vec_norm(&v);
        if n < 1e-300 {
            ok = false;
            continue;
        }
        for z in &mut v {
            *z /= n;
        }
        m.set_col(c, &v);
    }
    ok
}

/// Haar-distributed d×d unitary (Gaussian matrix + Gram–Schmidt).
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    random_isometry(d, d, rng)
}

/// Haar-distributed isometry with `cols` orthonormal columns in ℂ^`rows`.
pub fn random_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    assert!(cols <= rows, "isometry needs cols <= rows");
    loop {
        let mut g = gaussian_matrix(rows, cols, rng);
        if orthonormalize_columns(&mut g) {
            return g;
        }
    }
}

/// Uniformly random unit vector in ℂᵈ.
pub fn random_pure_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<Complex64> {
    loop {
        let mut v: Vec<Complex64> = (0..d).map(|_| complex_gaussian(rng)).collect();
        let n = vec_norm(&v);
        if n > 1e-300 {
            for z in &mut v {
                *z /= n;
            }
            return v;
        }
    }
}

/// Density matrix U diag(w) U† of the given rank; w are normalized squared Gaussians.
pub fn random_density<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> ComplexMatrix {
    assert!(rank >= 1 && rank <= d, "rank must be in 1..=d");
    let u = random_unitary(d, rng);
    let mut w: Vec<f64> = (0..rank)
        .map(|_| {
            let g: f64 = rng.sample(StandardNormal);
            g * g + 1e-300
        })
        .collect();
    let total: f64 = w.iter().sum();
    for x in &mut w {
        *x /= total;
    }
    ComplexMatrix::from_fn(d, d, |i, j| {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, &wk) in w.iter().enumerate() {
            acc += u[(i, k)] * u[(j, k)].conj() * wk;
        }
        acc
    })
}

/// Random Hermitian matrix (G + G†)/2.
pub fn random_hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    gaussian_matrix(d, d, rng).hermitian_part()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::eigvals_hermitian;

    #[test]
    fn pure_vector_is_normalized() {
        let v = random_pure_vector(2, &mut seeded(5));
        assert!((vec_norm(&v) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn density_is_psd_unit_trace() {
        let rho = random_density(3, 3, &mut seeded(11));
        let ev = eigvals_hermitian(&rho).unwrap();
        assert!(ev.iter().all(|&l| l >= -1e-12));
        assert!((ev.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let rank1 = random_density(3, 1, &mut seeded(12));
        let ev = eigvals_hermitian(&rank1).unwrap();
        assert!(ev[1].abs() < 1e-12 && (ev[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unitary_is_unitary() {
        let u = random_unitary(4, &mut seeded(3));
        assert!((&u.adjoint() * &u).approx_eq(&ComplexMatrix::identity(4), 1e-10));
    }

    #[test]
    fn same_seed_same_bits() {
        let a = random_unitary(3, &mut stream(9, 4));
        let b = random_unitary(3, &mut stream(9, 4));
        let c = random_unitary(3, &mut stream(9, 5));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
