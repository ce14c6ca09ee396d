//! The alpha-z relative Renyi entropy
//!
//! ```text
//! f(rho, sigma)    = Tr( sigma^{(1-a)/2z} rho^{a/z} sigma^{(1-a)/2z} )^z
//! D(rho, sigma)    = (f^{1/a} - 1) / (a - 1)
//! ```
//!
//! in nats, with the relative entropy `Tr rho (ln rho - ln sigma)` as the
//! `a -> 1, z = 1` limit. All fractional powers act on the support only.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)] // f64 math without std
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, psd_power, spectral_apply, ComplexMatrix, DEFAULT_CUTOFF};
use crate::quantum::{choi_state, DensityMatrix, KrausChannel};

/// Slack when matching `z` against the discrete regime boundaries.
pub const REGIME_TOL: f64 = 1e-12;

/// Weight of `rho` outside the support of `sigma` tolerated before the
/// support is declared not dominated.
pub const SUPPORT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Alpha {
    Finite(f64),
    /// The removable singularity at `alpha = 1`, evaluated as a limit.
    ToOne,
}

impl From<f64> for Alpha {
    /// `1.0` selects the limit.
    fn from(a: f64) -> Self {
        if a == 1.0 {
            Alpha::ToOne
        } else {
            Alpha::Finite(a)
        }
    }
}

/// Where an `(alpha, z)` pair sits relative to the parameter sets on which
/// the induced coherence measure is known to be well defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `alpha in (0, 1)`, `z >= max(alpha, 1 - alpha)`.
    Regime1,
    /// `alpha in (1, 2]`, `z in {1, alpha / 2}`.
    Regime2,
    /// `alpha > 1`, `z = alpha`.
    Regime3,
    /// `alpha -> 1` with `z = 1`: the relative entropy.
    RelativeEntropyLimit,
    OutsideKnownRegimes,
}

impl Regime {
    pub fn is_known(self) -> bool {
        !matches!(self, Regime::OutsideKnownRegimes)
    }
}

/// A validated `(alpha, z)` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaZ {
    alpha: Alpha,
    z: f64,
}

impl AlphaZ {
    /// `alpha > 0`, `alpha != 1`, `z != 0`, both finite.
    pub fn new(alpha: f64, z: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) || alpha == 1.0 {
            return Err(Error::InvalidAlpha(alpha));
        }
        if !z.is_finite() || z == 0.0 {
            return Err(Error::InvalidParameters(format!("z = {z} must be finite and nonzero")));
        }
        Ok(Self {
            alpha: Alpha::Finite(alpha),
            z,
        })
    }

    /// The `alpha -> 1, z = 1` limit.
    pub fn alpha_to_one() -> Self {
        Self {
            alpha: Alpha::ToOne,
            z: 1.0,
        }
    }

    /// Like [`AlphaZ::new`], but `alpha == 1` selects the limit (which
    /// requires `z = 1`).
    pub fn from_values(alpha: f64, z: f64) -> Result<Self> {
        if alpha == 1.0 {
            if z == 1.0 {
                Ok(Self::alpha_to_one())
            } else {
                Err(Error::InvalidParameters(format!("the alpha -> 1 limit is defined for z = 1, got z = {z}")))
            }
        } else {
            Self::new(alpha, z)
        }
    }

    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    /// Numeric alpha; `1.0` for the limit.
    pub fn alpha_value(&self) -> f64 {
        match self.alpha {
            Alpha::Finite(a) => a,
            Alpha::ToOne => 1.0,
        }
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn is_limit(&self) -> bool {
        self.alpha == Alpha::ToOne
    }

    pub fn regime(&self) -> Regime {
        let a = match self.alpha {
            Alpha::ToOne => return Regime::RelativeEntropyLimit,
            Alpha::Finite(a) => a,
        };
        let z = self.z;
        if a < 1.0 {
            if z >= a.max(1.0 - a) - REGIME_TOL {
                return Regime::Regime1;
            }
        } else {
            if a <= 2.0 && ((z - 1.0).abs() <= REGIME_TOL || (z - a / 2.0).abs() <= REGIME_TOL) {
                return Regime::Regime2;
            }
            if (z - a).abs() <= REGIME_TOL {
                return Regime::Regime3;
            }
        }
        Regime::OutsideKnownRegimes
    }

    /// Errors unless the pair lies in a known regime (or `allow_outside`).
    pub fn ensure_known_regime(&self, allow_outside: bool) -> Result<()> {
        if allow_outside || self.regime().is_known() {
            Ok(())
        } else {
            Err(Error::InvalidRegime {
                alpha: self.alpha_value(),
                z: self.z,
            })
        }
    }
}

/// A divergence value, possibly `+inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceValue {
    pub value: f64,
    /// Whether `supp(rho)` lies inside `supp(sigma)`.
    pub support_dominated: bool,
}

impl DivergenceValue {
    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
    }
}

/// Evaluates `D(rho, .)` for a fixed first argument, caching `rho^{a/z}`.
#[derive(Debug, Clone)]
pub struct DivergenceKernel {
    params: AlphaZ,
    rho: ComplexMatrix,
    rho_pow: ComplexMatrix,
    /// Number of eigenvalues of `rho` above the cutoff.
    rho_rank: usize,
    /// `Tr rho ln rho`, used by the limit branch.
    neg_entropy: f64,
}

impl DivergenceKernel {
    pub fn new(rho: &DensityMatrix, params: AlphaZ) -> Result<Self> {
        Self::from_matrix(rho.matrix(), params)
    }

    /// Same as [`DivergenceKernel::new`] for a positive semidefinite matrix
    /// that need not be normalized.
    pub fn from_matrix(rho: &ComplexMatrix, params: AlphaZ) -> Result<Self> {
        let spectrum = eig_hermitian(rho)?;
        if spectrum.min_eigenvalue() < -DEFAULT_CUTOFF {
            return Err(Error::NotPsd {
                min_eigenvalue: spectrum.min_eigenvalue(),
            });
        }
        let r = params.alpha_value() / params.z();
        let rho_pow = spectral_apply(&spectrum, |x| if x > DEFAULT_CUTOFF { x.powf(r) } else { 0.0 });
        let neg_entropy = spectrum
            .eigenvalues
            .iter()
            .filter(|&&x| x > DEFAULT_CUTOFF)
            .map(|&x| x * x.ln())
            .sum();
        Ok(Self {
            params,
            rho: rho.clone(),
            rho_pow,
            rho_rank: spectrum.eigenvalues.iter().filter(|&&x| x > DEFAULT_CUTOFF).count(),
            neg_entropy,
        })
    }

    pub fn params(&self) -> AlphaZ {
        self.params
    }

    pub fn dim(&self) -> usize {
        self.rho.rows()
    }

    pub(crate) fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    /// `rho^{alpha/z}`.
    pub(crate) fn rho_pow(&self) -> &ComplexMatrix {
        &self.rho_pow
    }

    pub(crate) fn rho_rank(&self) -> usize {
        self.rho_rank
    }

    fn check_dim(&self, sigma: &ComplexMatrix) -> Result<()> {
        if sigma.rows() != self.dim() || sigma.cols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: sigma.rows(),
            });
        }
        Ok(())
    }

    /// `f_{alpha,z}(rho, sigma)`, using pseudo-powers of `sigma`.
    pub fn f(&self, sigma: &ComplexMatrix) -> Result<f64> {
        self.check_dim(sigma)?;
        let s = (1.0 - self.params.alpha_value()) / (2.0 * self.params.z());
        let spectrum = eig_hermitian(sigma)?;
        if spectrum.min_eigenvalue() < -DEFAULT_CUTOFF {
            return Err(Error::NotPsd {
                min_eigenvalue: spectrum.min_eigenvalue(),
            });
        }
        let sigma_rank = spectrum.eigenvalues.iter().filter(|&&x| x > DEFAULT_CUTOFF).count();
        let sigma_pow = spectral_apply(&spectrum, |x| if x > DEFAULT_CUTOFF { x.powf(s) } else { 0.0 });
        let x = &(&sigma_pow * &self.rho_pow) * &sigma_pow;
        trace_power(&x, self.params.z(), self.rho_rank.min(sigma_rank))
    }

    /// Whether `supp(rho)` is contained in `supp(sigma)`.
    pub fn support_dominated(&self, sigma: &ComplexMatrix) -> Result<bool> {
        self.check_dim(sigma)?;
        let projector = psd_power(sigma, 0.0, DEFAULT_CUTOFF)?;
        let inside = (&projector * &self.rho).trace().re;
        Ok(self.rho.trace().re - inside <= SUPPORT_TOL)
    }

    pub fn divergence(&self, sigma: &DensityMatrix) -> Result<DivergenceValue> {
        self.divergence_matrix(sigma.matrix())
    }

    /// `D(rho, diag(q))` without eigendecompositions of the diagonal
    /// argument; agrees with [`DivergenceKernel::divergence_matrix`].
    pub fn divergence_diagonal(&self, q: &[f64]) -> Result<DivergenceValue> {
        if q.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: q.len(),
            });
        }
        if let Some(&bad) = q.iter().find(|&&x| x < -DEFAULT_CUTOFF) {
            return Err(Error::NotPsd { min_eigenvalue: bad });
        }
        let inside = q.iter().map(|&x| x > DEFAULT_CUTOFF);
        let rho_diag = self.rho.real_diagonal();
        let covered: f64 = rho_diag.iter().zip(inside.clone()).filter(|(_, keep)| *keep).map(|(r, _)| r).sum();
        let dominated = self.rho.trace().re - covered <= SUPPORT_TOL;
        let value = match self.params.alpha() {
            Alpha::ToOne if !dominated => f64::INFINITY,
            Alpha::ToOne => {
                let cross: f64 = rho_diag
                    .iter()
                    .zip(q)
                    .filter(|(_, &x)| x > DEFAULT_CUTOFF)
                    .map(|(r, x)| r * x.ln())
                    .sum();
                self.neg_entropy - cross
            }
            Alpha::Finite(a) if a > 1.0 && !dominated => f64::INFINITY,
            Alpha::Finite(a) => {
                let s = (1.0 - a) / (2.0 * self.params.z());
                let scale: Vec<f64> = q.iter().map(|&x| if x > DEFAULT_CUTOFF { x.powf(s) } else { 0.0 }).collect();
                let x = ComplexMatrix::from_fn(self.dim(), self.dim(), |j, k| self.rho_pow[(j, k)] * (scale[j] * scale[k]));
                let rank = self.rho_rank.min(inside.filter(|&keep| keep).count());
                divergence_from_f(trace_power(&x, self.params.z(), rank)?, a)
            }
        };
        Ok(DivergenceValue {
            value,
            support_dominated: dominated,
        })
    }

    pub fn divergence_matrix(&self, sigma: &ComplexMatrix) -> Result<DivergenceValue> {
        let dominated = self.support_dominated(sigma)?;
        let value = match self.params.alpha() {
            Alpha::ToOne => {
                if dominated {
                    let log_sigma = spectral_apply(&eig_hermitian(sigma)?, |x| if x > DEFAULT_CUTOFF { x.ln() } else { 0.0 });
                    self.neg_entropy - (&self.rho * &log_sigma).trace().re
                } else {
                    f64::INFINITY
                }
            }
            Alpha::Finite(a) => {
                if a > 1.0 && !dominated {
                    f64::INFINITY
                } else {
                    divergence_from_f(self.f(sigma)?, a)
                }
            }
        };
        Ok(DivergenceValue {
            value,
            support_dominated: dominated,
        })
    }
}

/// `(f^{1/a} - 1) / (a - 1)` with `f` clamped at zero.
#[inline]
pub fn divergence_from_f(f: f64, alpha: f64) -> f64 {
    (f.max(0.0).powf(1.0 / alpha) - 1.0) / (alpha - 1.0)
}

/// Largest eigenvalue of `X` treated as rounding noise when `X` is known
/// to have rank at most `rank`: everything outside the top `rank`.
pub(crate) fn noise_floor(ascending: &[f64], rank: usize) -> f64 {
    let n = ascending.len();
    if rank >= n {
        0.0
    } else {
        ascending[n - rank - 1].max(0.0)
    }
}

/// `Tr X^z` for a positive semidefinite `X` of rank at most `rank`.
///
/// Eigenvalues beyond the top `rank` are rounding noise and dropped; the
/// rest are kept however small, since `z < 1` amplifies both mistakes.
pub(crate) fn trace_power(x: &ComplexMatrix, z: f64, rank: usize) -> Result<f64> {
    if z == 1.0 {
        return Ok(x.trace().re.max(0.0));
    }
    let spectrum = eig_hermitian(&x.hermitian_part())?;
    let floor = noise_floor(&spectrum.eigenvalues, rank);
    Ok(spectrum
        .eigenvalues
        .iter()
        .filter(|&&l| l > floor)
        .map(|&l| l.powf(z))
        .sum())
}

/// `f_{alpha,z}(rho, sigma)`.
pub fn f_alpha_z(rho: &DensityMatrix, sigma: &DensityMatrix, params: AlphaZ) -> Result<f64> {
    DivergenceKernel::new(rho, params)?.f(sigma.matrix())
}

/// `D_{alpha,z}(rho, sigma)`; `+inf` when `alpha > 1` (or the limit) and
/// `supp(rho)` escapes `supp(sigma)`.
pub fn d_alpha_z(rho: &DensityMatrix, sigma: &DensityMatrix, params: AlphaZ) -> Result<DivergenceValue> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    DivergenceKernel::new(rho, params)?.divergence(sigma)
}

/// Relative entropy `Tr rho (ln rho - ln sigma)` in nats.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<DivergenceValue> {
    d_alpha_z(rho, sigma, AlphaZ::alpha_to_one())
}

/// Divergence between two channels through their unit-trace Choi states.
pub fn d_alpha_z_channels(phi: &KrausChannel, other: &KrausChannel, params: AlphaZ) -> Result<DivergenceValue> {
    if phi.input_dim() != other.input_dim() || phi.output_dim() != other.output_dim() {
        return Err(Error::DimensionMismatch {
            expected: phi.input_dim() * phi.output_dim(),
            found: other.input_dim() * other.output_dim(),
        });
    }
    d_alpha_z(choi_state(phi).state(), choi_state(other).state(), params)
}
