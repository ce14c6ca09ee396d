//! States, Kraus channels and the Choi-Jamiolkowski map.
//!
//! Bipartite objects use the tensor basis `|i beta>` with the input index
//! `i` major: basis vector `|i>|beta>` sits at position `i * |B| + beta`.
//! Every Choi matrix in this crate is normalized to unit trace.

pub mod random;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Zero;
#[allow(unused_imports)] // f64 math without std
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, ComplexMatrix};

/// Tolerance used to validate density matrices (Hermiticity, positivity, trace).
pub const STATE_TOL: f64 = 1e-10;
/// Tolerance on `||sum K^dagger K - I||_F`.
pub const CPTP_TOL: f64 = 1e-9;
/// Tolerance on the norm of a pure state.
pub const PURE_NORM_TOL: f64 = 1e-12;

/// A positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates `mat` as a density matrix.
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::InvalidState(format!("{}x{} matrix is not square", mat.rows(), mat.cols())));
        }
        let dev = mat.hermitian_deviation();
        if !(dev <= STATE_TOL) {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {dev:e})")));
        }
        let tr = mat.trace().re;
        if !((tr - 1.0).abs() <= STATE_TOL) {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        let min = eig_hermitian(&mat)?.min_eigenvalue();
        if min < -STATE_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { mat })
    }

    /// Wraps a matrix that is a density matrix by construction.
    pub(crate) fn from_matrix_unchecked(mat: ComplexMatrix) -> Self {
        debug_assert!(mat.is_square());
        Self { mat }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::from_matrix_unchecked(ComplexMatrix::identity(dim).scale(1.0 / dim as f64))
    }

    /// Diagonal state with the given probabilities.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        if probs.iter().any(|&p| !(p >= -STATE_TOL)) {
            return Err(Error::InvalidState("negative probability".into()));
        }
        let total: f64 = probs.iter().sum();
        if !((total - 1.0).abs() <= STATE_TOL) {
            return Err(Error::InvalidState(format!("probabilities sum to {total}")));
        }
        Ok(Self::from_matrix_unchecked(ComplexMatrix::from_real_diagonal(probs)))
    }

    /// The computational basis state `|k><k|`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut probs = vec![0.0; dim];
        probs[k] = 1.0;
        Self::from_matrix_unchecked(ComplexMatrix::from_real_diagonal(&probs))
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    /// `lambda * self + (1 - lambda) * other`.
    pub fn mix(&self, lambda: f64, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidParameters(format!("mixing weight {lambda} outside [0, 1]")));
        }
        Ok(Self::from_matrix_unchecked(&self.mat.scale(lambda) + &other.mat.scale(1.0 - lambda)))
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.mat.off_diagonal_max() <= tol
    }
}

impl From<&PureState> for DensityMatrix {
    fn from(psi: &PureState) -> Self {
        psi.density()
    }
}

/// A normalized state vector with its global phase fixed: the first
/// amplitude of non-negligible modulus is real and non-negative.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Validates the norm and fixes the global phase.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = norm(&amplitudes);
        if amplitudes.is_empty() || !((norm - 1.0).abs() <= PURE_NORM_TOL) {
            return Err(Error::InvalidState(format!("state vector has norm {norm}")));
        }
        Ok(Self::phase_fixed(amplitudes))
    }

    /// Normalizes `amplitudes` and fixes the global phase.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = norm(&amplitudes);
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidState("zero or non-finite state vector".into()));
        }
        Ok(Self::phase_fixed(amplitudes.into_iter().map(|a| a / norm).collect()))
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut amps = vec![Complex64::zero(); dim];
        amps[k] = Complex64::new(1.0, 0.0);
        Self { amplitudes: amps }
    }

    fn phase_fixed(mut amplitudes: Vec<Complex64>) -> Self {
        if let Some(lead) = amplitudes.iter().copied().find(|a| a.norm() > 1e-14) {
            let rot = lead.conj() / lead.norm();
            for a in amplitudes.iter_mut() {
                *a *= rot;
            }
            // exact zero imaginary part on the leading amplitude
            if let Some(a) = amplitudes.iter_mut().find(|a| a.norm() > 1e-14) {
                a.im = 0.0;
            }
        }
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `|psi><psi|`.
    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_matrix_unchecked(ComplexMatrix::outer(&self.amplitudes, &self.amplitudes))
    }
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Pure state from angles.
///
/// For a qubit the angles are `(theta, phi)` with
/// `|psi> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`. In dimension
/// `d` there are `2(d-1)` angles: `d-1` hyperspherical polar angles
/// followed by `d-1` relative phases for amplitudes `1..d`, reducing to
/// the Bloch form at `d = 2`.
pub fn pure_from_params(angles: &[f64]) -> Result<PureState> {
    if !angles.len().is_multiple_of(2) {
        return Err(Error::InvalidParameters(format!(
            "expected an even number of angles, got {}",
            angles.len()
        )));
    }
    let d = angles.len() / 2 + 1;
    let (polar, phases) = angles.split_at(d - 1);
    let mut amps = Vec::with_capacity(d);
    let mut sin_prod = 1.0;
    for k in 0..d {
        let mag = if k < d - 1 {
            sin_prod * (polar[k] / 2.0).cos()
        } else {
            sin_prod
        };
        if k < d - 1 {
            sin_prod *= (polar[k] / 2.0).sin();
        }
        let phase = if k == 0 { 0.0 } else { phases[k - 1] };
        amps.push(Complex64::from_polar(mag, phase));
    }
    Ok(PureState::phase_fixed(amps))
}

/// Number of angles [`pure_from_params`] expects for dimension `d`.
pub fn param_count(d: usize) -> usize {
    2 * d.saturating_sub(1)
}

/// Completely dephasing map in the computational basis.
pub fn dephase(rho: &DensityMatrix) -> DensityMatrix {
    DensityMatrix::from_matrix_unchecked(rho.matrix().diagonal_part())
}

/// A completely positive trace-preserving map given by Kraus operators,
/// `phi(rho) = sum_n K_n rho K_n^dagger`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    input_dim: usize,
    output_dim: usize,
    kraus: Vec<ComplexMatrix>,
}

impl KrausChannel {
    /// Validates shapes and the trace-preservation condition.
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidChannel("empty Kraus list".into()))?;
        let (output_dim, input_dim) = (first.rows(), first.cols());
        if input_dim == 0 || output_dim == 0 {
            return Err(Error::InvalidChannel("zero-dimensional Kraus operator".into()));
        }
        for k in &kraus {
            if k.rows() != output_dim || k.cols() != input_dim {
                return Err(Error::InvalidChannel(format!(
                    "Kraus operators have inconsistent shapes {}x{} and {}x{}",
                    output_dim,
                    input_dim,
                    k.rows(),
                    k.cols()
                )));
            }
        }
        let channel = Self {
            input_dim,
            output_dim,
            kraus,
        };
        let residual = channel.cptp_residual();
        if !(residual <= CPTP_TOL) {
            return Err(Error::NotCptp { residual });
        }
        Ok(channel)
    }

    pub(crate) fn from_kraus_unchecked(input_dim: usize, output_dim: usize, kraus: Vec<ComplexMatrix>) -> Self {
        Self {
            input_dim,
            output_dim,
            kraus,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_kraus_unchecked(dim, dim, vec![ComplexMatrix::identity(dim)])
    }

    /// `rho -> U rho U^dagger`; `u` must be unitary.
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        Self::new(vec![u])
    }

    /// `||sum_n K_n^dagger K_n - I||_F`.
    pub fn cptp_residual(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(self.input_dim, self.input_dim);
        for k in &self.kraus {
            sum = &sum + &(&k.adjoint() * k);
        }
        (&sum - &ComplexMatrix::identity(self.input_dim)).frobenius_norm()
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn is_square(&self) -> bool {
        self.input_dim == self.output_dim
    }

    /// Applies the channel to an arbitrary operator on the input space.
    pub fn apply_matrix(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        if m.rows() != self.input_dim || m.cols() != self.input_dim {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim,
                found: m.rows(),
            });
        }
        let mut out = ComplexMatrix::zeros(self.output_dim, self.output_dim);
        for k in &self.kraus {
            out = &out + &(&(k * m) * &k.adjoint());
        }
        Ok(out)
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.apply_matrix(rho.matrix())
            .map(|m| DensityMatrix::from_matrix_unchecked(m.hermitian_part()))
    }

    /// Parallel composition `self (x) other` on the joint input space.
    pub fn tensor(&self, other: &Self) -> Self {
        let kraus = self
            .kraus
            .iter()
            .flat_map(|a| other.kraus.iter().map(move |b| a.tensor(b)))
            .collect();
        Self::from_kraus_unchecked(self.input_dim * other.input_dim, self.output_dim * other.output_dim, kraus)
    }

    /// Kraus representation recovered from a unit-trace Choi matrix.
    ///
    /// Each eigenpair `(lambda, v)` of the Choi matrix yields the Kraus
    /// operator `K[beta][i] = sqrt(|A| lambda) v[i |B| + beta]`.
    pub fn from_choi(choi: &ComplexMatrix, input_dim: usize, output_dim: usize) -> Result<Self> {
        let n = input_dim * output_dim;
        if choi.rows() != n || choi.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: choi.rows(),
            });
        }
        let spectrum = eig_hermitian(choi)?;
        if spectrum.min_eigenvalue() < -STATE_TOL {
            return Err(Error::NotPsd {
                min_eigenvalue: spectrum.min_eigenvalue(),
            });
        }
        let mut kraus = Vec::new();
        for (k, &lambda) in spectrum.eigenvalues.iter().enumerate().rev() {
            if lambda <= crate::linalg::DEFAULT_CUTOFF {
                continue;
            }
            let w = (input_dim as f64 * lambda).sqrt();
            let v = spectrum.eigenvector(k);
            kraus.push(ComplexMatrix::from_fn(output_dim, input_dim, |beta, i| v[i * output_dim + beta] * w));
        }
        Self::new(kraus)
    }
}

/// `outer o inner`: first `inner`, then `outer`.
pub fn compose(outer: &KrausChannel, inner: &KrausChannel) -> Result<KrausChannel> {
    if inner.output_dim != outer.input_dim {
        return Err(Error::DimensionMismatch {
            expected: outer.input_dim,
            found: inner.output_dim,
        });
    }
    let kraus = outer
        .kraus
        .iter()
        .flat_map(|a| inner.kraus.iter().map(move |b| a * b))
        .collect();
    Ok(KrausChannel::from_kraus_unchecked(inner.input_dim, outer.output_dim, kraus))
}

/// Convex combination `sum_m lambda_m phi_m`, realized by concatenating the
/// Kraus lists scaled by `sqrt(lambda_m)`.
pub fn mixture(parts: &[(f64, &KrausChannel)]) -> Result<KrausChannel> {
    let (_, first) = parts
        .first()
        .ok_or_else(|| Error::InvalidParameters("empty mixture".into()))?;
    let total: f64 = parts.iter().map(|(w, _)| w).sum();
    if parts.iter().any(|(w, _)| !(*w >= 0.0)) || !((total - 1.0).abs() <= 1e-12) {
        return Err(Error::InvalidParameters(format!("mixture weights must be a probability vector (sum {total})")));
    }
    let mut kraus = Vec::new();
    for (w, ch) in parts {
        if ch.input_dim != first.input_dim || ch.output_dim != first.output_dim {
            return Err(Error::DimensionMismatch {
                expected: first.input_dim,
                found: ch.input_dim,
            });
        }
        if *w > 0.0 {
            kraus.extend(ch.kraus.iter().map(|k| k.scale(w.sqrt())));
        }
    }
    Ok(KrausChannel::from_kraus_unchecked(first.input_dim, first.output_dim, kraus))
}

/// The completely dephasing channel on `d` levels, Kraus operators `|i><i|`.
pub fn dephasing_channel(d: usize) -> KrausChannel {
    let kraus = (0..d)
        .map(|i| {
            let mut p = ComplexMatrix::zeros(d, d);
            p[(i, i)] = Complex64::new(1.0, 0.0);
            p
        })
        .collect();
    KrausChannel::from_kraus_unchecked(d, d, kraus)
}

/// Unit-trace Choi state `M = (Id (x) phi)(|Phi><Phi|)` of a channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiState {
    state: DensityMatrix,
    input_dim: usize,
    output_dim: usize,
}

impl ChoiState {
    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.state.matrix()
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    /// Trace over the output factor; equals `I / |A|` for any channel.
    pub fn partial_trace_output(&self) -> ComplexMatrix {
        let (da, db) = (self.input_dim, self.output_dim);
        let m = self.matrix();
        ComplexMatrix::from_fn(da, da, |i, j| (0..db).map(|b| m[(i * db + b, j * db + b)]).sum())
    }

    /// Incoherent in the tensor basis.
    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.state.is_diagonal(tol)
    }
}

/// Choi state of `phi` with the input index major.
pub fn choi_state(phi: &KrausChannel) -> ChoiState {
    let (da, db) = (phi.input_dim, phi.output_dim);
    let n = da * db;
    let mut m = ComplexMatrix::zeros(n, n);
    let mut v = vec![Complex64::zero(); n];
    for k in &phi.kraus {
        for i in 0..da {
            for b in 0..db {
                v[i * db + b] = k[(b, i)];
            }
        }
        for r in 0..n {
            if v[r].is_zero() {
                continue;
            }
            for c in 0..n {
                m[(r, c)] += v[r] * v[c].conj();
            }
        }
    }
    let m = m.scale(1.0 / da as f64).hermitian_part();
    ChoiState {
        state: DensityMatrix::from_matrix_unchecked(m),
        input_dim: da,
        output_dim: db,
    }
}
