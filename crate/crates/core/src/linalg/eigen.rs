use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // f64 math without std
use num_traits::Float;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Entrywise tolerance on `|M - M^dagger|` accepted by [`eig_hermitian`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues at or below this magnitude are treated as exact zeros.
pub const DEFAULT_CUTOFF: f64 = 1e-12;

const MAX_SWEEPS: usize = 64;

/// Eigendecomposition `M = V diag(lambda) V^dagger` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V diag(lambda) V^dagger`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        spectral_apply(self, |x| x)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// Eigenvector `k` as a column vector.
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        (0..self.dim()).map(|i| self.eigenvectors[(i, k)]).collect()
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Each rotation first removes the phase of the pivot `a_pq` with a diagonal
/// unitary and then applies the real symmetric Jacobi rotation, so the
/// iteration stays inside the Hermitian matrices and the accumulated
/// transform stays unitary.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<Spectrum> {
    let n = m.require_square()?;
    let deviation = m.hermitian_deviation();
    if !(deviation <= HERMITIAN_TOL) {
        return Err(Error::NotHermitian {
            max_deviation: deviation,
        });
    }

    let mut a = m.hermitian_part();
    for i in 0..n {
        a[(i, i)].im = 0.0;
    }
    let mut v = ComplexMatrix::identity(n);

    // a pivot is negligible once it is below rounding of its own diagonal
    // pair or of the whole matrix; a sweep without a rotation ends the loop
    let floor = 1e-17 * a.frobenius_norm();
    let mut converged = n <= 1 || floor == 0.0;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let r = a[(p, q)].norm();
                let pair = (a[(p, p)].re * a[(q, q)].re).abs().sqrt();
                if r > floor && r > f64::EPSILON * pair {
                    rotate(&mut a, &mut v, p, q);
                    rotated = true;
                } else {
                    a[(p, q)] = Complex64::new(0.0, 0.0);
                    a[(q, p)] = Complex64::new(0.0, 0.0);
                }
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&k| a[(k, k)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Annihilates `a[p][q]` and accumulates the rotation into `v`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r <= f64::MIN_POSITIVE {
        return;
    }
    let phase = apq / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.is_infinite() {
        0.0
    } else {
        let t = 1.0 / (theta.abs() + (theta * theta + 1.0).sqrt());
        if theta < 0.0 {
            -t
        } else {
            t
        }
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // J = diag(1, conj(phase)) * [[c, s], [-s, c]]
    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = phase.conj() * -s;
    let jqq = phase.conj() * c;

    let n = a.rows();
    for k in 0..n {
        let x = a[(k, p)];
        let y = a[(k, q)];
        a[(k, p)] = x * jpp + y * jqp;
        a[(k, q)] = x * jpq + y * jqq;
    }
    for k in 0..n {
        let x = a[(p, k)];
        let y = a[(q, k)];
        a[(p, k)] = jpp.conj() * x + jqp.conj() * y;
        a[(q, k)] = jpq.conj() * x + jqq.conj() * y;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;

    for k in 0..n {
        let x = v[(k, p)];
        let y = v[(k, q)];
        v[(k, p)] = x * jpp + y * jqp;
        v[(k, q)] = x * jpq + y * jqq;
    }
}

/// `V diag(g(lambda)) V^dagger`.
pub fn spectral_apply(spectrum: &Spectrum, g: impl Fn(f64) -> f64) -> ComplexMatrix {
    let n = spectrum.dim();
    let v = &spectrum.eigenvectors;
    let weights: Vec<f64> = spectrum.eigenvalues.iter().map(|&x| g(x)).collect();
    let mut out = ComplexMatrix::zeros(n, n);
    for (k, &w) in weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        for i in 0..n {
            let vik = v[(i, k)] * w;
            if vik.re == 0.0 && vik.im == 0.0 {
                continue;
            }
            for j in 0..n {
                out[(i, j)] += vik * v[(j, k)].conj();
            }
        }
    }
    out
}

/// Pseudo-power of a positive semidefinite matrix.
///
/// Eigenvalues in `[-cutoff, cutoff]` are clamped to zero and `0^r = 0`
/// for every `r`, including negative and zero exponents. So `r = 0`
/// yields the support projector and negative `r` the power of the
/// Moore-Penrose pseudo-inverse.
pub fn psd_power(m: &ComplexMatrix, r: f64, cutoff: f64) -> Result<ComplexMatrix> {
    let spectrum = eig_hermitian(m)?;
    if spectrum.min_eigenvalue() < -cutoff {
        return Err(Error::NotPsd {
            min_eigenvalue: spectrum.min_eigenvalue(),
        });
    }
    Ok(spectral_apply(&spectrum, |x| if x > cutoff { x.powf(r) } else { 0.0 }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;
    use approx::assert_abs_diff_eq;

    #[test]
    fn identity_spectrum() {
        let s = eig_hermitian(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(s.eigenvalues, [1.0, 1.0]);
    }

    #[test]
    fn diagonal_spectrum_is_sorted() {
        let s = eig_hermitian(&ComplexMatrix::from_real_diagonal(&[0.7, 0.3])).unwrap();
        assert_eq!(s.eigenvalues, [0.3, 0.7]);
    }

    #[test]
    fn pauli_x_eigenvectors() {
        let x = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let s = eig_hermitian(&x).unwrap();
        assert_abs_diff_eq!(s.eigenvalues[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.eigenvalues[1], 1.0, epsilon = 1e-14);
        let h = core::f64::consts::FRAC_1_SQRT_2;
        // overlap with (|0> - |1>)/sqrt2 and (|0> + |1>)/sqrt2 up to phase
        let minus = s.eigenvector(0);
        let plus = s.eigenvector(1);
        assert_abs_diff_eq!((minus[0] * h - minus[1] * h).norm(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!((plus[0] * h + plus[1] * h).norm(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn complex_entries() {
        // Pauli Y has eigenvalues -1, 1
        let y = ComplexMatrix::from_vec(2, 2, alloc::vec![c64(0.0, 0.0), c64(0.0, -1.0), c64(0.0, 1.0), c64(0.0, 0.0)])
            .unwrap();
        let s = eig_hermitian(&y).unwrap();
        assert_abs_diff_eq!(s.eigenvalues[0], -1.0, epsilon = 1e-14);
        assert!(s.reconstruct().max_abs_diff(&y) < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian { .. })));
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(eig_hermitian(&rect).is_err());
    }

    #[test]
    fn power_of_scaled_identity() {
        let m = ComplexMatrix::identity(2).scale(0.5);
        let r = psd_power(&m, 0.5, DEFAULT_CUTOFF).unwrap();
        let expected = ComplexMatrix::identity(2).scale(core::f64::consts::FRAC_1_SQRT_2);
        assert!(r.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn projector_is_power_idempotent() {
        let p = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        assert!(psd_power(&p, 0.5, DEFAULT_CUTOFF).unwrap().max_abs_diff(&p) < 1e-15);
        // negative powers act on the support only
        assert!(psd_power(&p, -0.5, DEFAULT_CUTOFF).unwrap().max_abs_diff(&p) < 1e-15);
    }

    #[test]
    fn rejects_negative_spectrum() {
        let m = ComplexMatrix::from_real_diagonal(&[1.0, -1e-3]);
        assert!(matches!(psd_power(&m, 0.5, DEFAULT_CUTOFF), Err(Error::NotPsd { .. })));
        // within the cutoff it is clamped
        let m = ComplexMatrix::from_real_diagonal(&[1.0, -1e-13]);
        let r = psd_power(&m, -1.0, DEFAULT_CUTOFF).unwrap();
        assert_eq!(r[(1, 1)], c64(0.0, 0.0));
    }

    #[test]
    fn phase_flip_choi_power() {
        // p = 1/4, alpha = 1/2: corners (p^a -+ (1-p)^a)/2
        let p: f64 = 0.25;
        let m = ComplexMatrix::from_real(
            4,
            4,
            &[
                0.5, 0.0, 0.0, p - 0.5, //
                0.0, 0.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 0.0, //
                p - 0.5, 0.0, 0.0, 0.5,
            ],
        )
        .unwrap();
        let r = psd_power(&m, 0.5, DEFAULT_CUTOFF).unwrap();
        let (pa, qa) = (0.5, 3.0f64.sqrt() / 2.0);
        assert_abs_diff_eq!(r[(0, 0)].re, (pa + qa) / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r[(3, 3)].re, (pa + qa) / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r[(0, 3)].re, (pa - qa) / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r[(1, 1)].norm(), 0.0, epsilon = 1e-15);
    }
}
