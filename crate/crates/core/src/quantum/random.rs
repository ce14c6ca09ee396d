//! Seeded sampling of random states and channels.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // f64 math without std
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{DensityMatrix, KrausChannel, PureState};
use crate::linalg::ComplexMatrix;

/// Deterministic generator for `(seed, stream)`; independent streams let
/// parallel workers draw reproducibly regardless of scheduling.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Complex Ginibre matrix with i.i.d. standard normal entries.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-random isometry (`rows >= cols`) from the QR factorization of a
/// Ginibre matrix with the diagonal of `R` made real positive.
///
/// Gram-Schmidt produces exactly that sign convention; the second
/// orthogonalization pass restores orthonormality lost to rounding.
pub fn haar_isometry<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    assert!(rows >= cols, "an isometry needs rows >= cols");
    let g = ginibre(rng, rows, cols);
    let mut q: Vec<Vec<Complex64>> = Vec::with_capacity(cols);
    for j in 0..cols {
        let mut v: Vec<Complex64> = (0..rows).map(|i| g[(i, j)]).collect();
        for _ in 0..2 {
            for u in &q {
                let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, a) in v.iter_mut().zip(u) {
                    *x -= proj * a;
                }
            }
        }
        let n = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        for x in v.iter_mut() {
            *x /= n;
        }
        q.push(v);
    }
    ComplexMatrix::from_fn(rows, cols, |i, j| q[j][i])
}

/// Haar-random unitary.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    haar_isometry(rng, dim, dim)
}

/// Random channel from a Haar-random Stinespring isometry
/// `V: C^{d_in} -> C^{n_kraus} (x) C^{d_out}`, sliced into Kraus blocks.
pub fn random_channel<R: Rng + ?Sized>(rng: &mut R, input_dim: usize, output_dim: usize, n_kraus: usize) -> KrausChannel {
    assert!(n_kraus * output_dim >= input_dim, "environment too small for an isometry");
    let v = haar_isometry(rng, n_kraus * output_dim, input_dim);
    let kraus = (0..n_kraus)
        .map(|n| ComplexMatrix::from_fn(output_dim, input_dim, |b, i| v[(n * output_dim + b, i)]))
        .collect();
    KrausChannel::from_kraus_unchecked(input_dim, output_dim, kraus)
}

/// Random mixed state `G G^dagger / Tr(G G^dagger)` with `G` of shape `dim x rank`.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> DensityMatrix {
    let g = ginibre(rng, dim, rank.max(1));
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::from_matrix_unchecked(m.scale(1.0 / tr).hermitian_part())
}

/// Haar-random pure state.
pub fn random_pure<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> PureState {
    let v: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
    PureState::normalized(v).expect("a Gaussian vector is nonzero almost surely")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::CPTP_TOL;

    #[test]
    fn random_channels_are_cptp() {
        let mut rng = seeded_rng(7, 0);
        for (din, dout, k) in [(2, 2, 1), (2, 2, 4), (3, 2, 2), (2, 5, 1), (4, 4, 3)] {
            let ch = random_channel(&mut rng, din, dout, k);
            assert!(ch.cptp_residual() < CPTP_TOL, "{din}->{dout} with {k} Kraus operators");
        }
    }

    #[test]
    fn isometry_columns_orthonormal() {
        let mut rng = seeded_rng(1, 3);
        let v = haar_isometry(&mut rng, 6, 3);
        let g = &v.adjoint() * &v;
        assert!(g.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-14);
    }

    #[test]
    fn streams_are_reproducible() {
        let a = random_density(&mut seeded_rng(42, 5), 3, 3);
        let b = random_density(&mut seeded_rng(42, 5), 3, 3);
        let c = random_density(&mut seeded_rng(42, 6), 3, 3);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(DensityMatrix::new(a.into_matrix()).is_ok());
    }
}
