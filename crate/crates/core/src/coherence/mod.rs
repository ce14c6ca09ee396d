//! Coherence of channels.
//!
//! `C_{a,z}(phi)` is the distance, measured by `D_{a,z}`, from the Choi
//! state `M_phi` to the nearest diagonal state in the `|i beta>` basis.
//! At `z = 1` the minimum has the closed form
//!
//! ```text
//! C_{a,1} = (sum_k <k|M^a|k>^{1/a} - 1) / (a - 1)
//! ```
//!
//! attained at `q_k ~ <k|M^a|k>^{1/a}`. `C~_{a,z}(phi)` is the largest
//! divergence between `phi o Delta` and `Delta o phi` over pure inputs;
//! it vanishes exactly on channels that commute with complete dephasing.

mod commutativity;
mod oracle;
mod simplex;

use alloc::vec::Vec;

#[allow(unused_imports)] // f64 math without std
use num_traits::Float;

use crate::entropy::{Alpha, AlphaZ};
use crate::error::{Error, Result};
use crate::linalg::{psd_power, ComplexMatrix, DEFAULT_CUTOFF};
use crate::quantum::{choi_state, DensityMatrix, KrausChannel, PureState};

pub use commutativity::{coherence_commutativity, commutator_divergence, is_detection_creation_incoherent};
pub use oracle::{oracle_min_diag, oracle_min_diag_coarse, oracle_min_diag_state, oracle_sup_pure, MAX_ORACLE_POINTS};
pub use simplex::coherence_state;

/// The optimum found: a diagonal state for `C`, a pure input for `C~`.
#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    Diagonal(Vec<f64>),
    Pure(PureState),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ClosedFormZ1,
    SimplexOptimized,
    GridOracle,
    PureStateOptimized,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::ClosedFormZ1 => "closed-form-z1",
            Method::SimplexOptimized => "simplex-optimized",
            Method::GridOracle => "grid-oracle",
            Method::PureStateOptimized => "pure-state-optimized",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceResult {
    pub value: f64,
    pub certificate: Certificate,
    pub method: Method,
    /// False when an iterative search hit its iteration cap; the value is
    /// still the best one found.
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerOptions {
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
    /// Accept `(alpha, z)` outside the known regimes.
    pub allow_outside_regime: bool,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            restarts: 20,
            max_iters: 5000,
            tol: 1e-10,
            seed: 42,
            allow_outside_regime: false,
        }
    }
}

/// Entries of `<k|M^a|k>` clamped at zero.
fn diagonal_of_power(m: &ComplexMatrix, a: f64) -> Result<Vec<f64>> {
    Ok(psd_power(m, a, DEFAULT_CUTOFF)?
        .real_diagonal()
        .into_iter()
        .map(|x| x.max(0.0))
        .collect())
}

fn entropy_of(values: impl Iterator<Item = f64>) -> f64 {
    values.filter(|&x| x > DEFAULT_CUTOFF).map(|x| -x * x.ln()).sum()
}

/// Closed-form minimizer at `z = 1` for any `alpha > 0`; no range check.
pub(crate) fn z1_solution(rho: &ComplexMatrix, alpha: Alpha) -> Result<(f64, Vec<f64>)> {
    match alpha {
        Alpha::ToOne => {
            let diag: Vec<f64> = rho.real_diagonal().into_iter().map(|x| x.max(0.0)).collect();
            let spectrum = crate::linalg::eig_hermitian(rho)?;
            let value = entropy_of(diag.iter().copied()) - entropy_of(spectrum.eigenvalues.iter().copied());
            let total: f64 = diag.iter().sum();
            Ok((value.max(0.0), diag.iter().map(|x| x / total).collect()))
        }
        Alpha::Finite(a) => {
            let roots: Vec<f64> = diagonal_of_power(rho, a)?.into_iter().map(|d| d.powf(1.0 / a)).collect();
            let total: f64 = roots.iter().sum();
            let value = ((total - 1.0) / (a - 1.0)).max(0.0);
            Ok((value, roots.iter().map(|r| r / total).collect()))
        }
    }
}

fn check_z1_alpha(alpha: Alpha) -> Result<()> {
    match alpha {
        Alpha::ToOne => Ok(()),
        Alpha::Finite(a) if a > 0.0 && a != 1.0 && a <= 2.0 => Ok(()),
        Alpha::Finite(a) => Err(Error::InvalidAlpha(a)),
    }
}

/// `C_{a,1}` of a state by the closed form; `alpha` in `(0,1) u (1,2]` or
/// the limit, where it becomes `S(Delta(rho)) - S(rho)`.
pub fn coherence_state_z1(rho: &DensityMatrix, alpha: impl Into<Alpha>) -> Result<CoherenceResult> {
    let alpha = alpha.into();
    check_z1_alpha(alpha)?;
    let (value, q) = z1_solution(rho.matrix(), alpha)?;
    Ok(CoherenceResult {
        value,
        certificate: Certificate::Diagonal(q),
        method: Method::ClosedFormZ1,
        converged: true,
    })
}

/// `C_{a,1}(phi)` by the closed form. `alpha = 1.0` selects the limit.
pub fn coherence_channel_z1(phi: &KrausChannel, alpha: impl Into<Alpha>) -> Result<CoherenceResult> {
    coherence_state_z1(choi_state(phi).state(), alpha)
}

/// `C_{a,z}(phi)` by multi-start exponentiated-gradient descent over the
/// diagonal states.
pub fn coherence_channel(phi: &KrausChannel, params: AlphaZ, opts: &OptimizerOptions) -> Result<CoherenceResult> {
    coherence_state(choi_state(phi).state(), params, opts)
}

/// Closed form when `z = 1` allows it, the optimizer otherwise.
pub fn coherence_state_auto(rho: &DensityMatrix, params: AlphaZ, opts: &OptimizerOptions) -> Result<CoherenceResult> {
    params.ensure_known_regime(opts.allow_outside_regime)?;
    if params.z() == 1.0 && check_z1_alpha(params.alpha()).is_ok() {
        coherence_state_z1(rho, params.alpha())
    } else {
        coherence_state(rho, params, opts)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdditivityReport {
    /// Coherence of `p1 M_1 (+) p2 M_2`.
    pub combined: f64,
    /// `p1 C(phi_1) + p2 C(phi_2)`.
    pub weighted_sum: f64,
    /// `|combined - weighted_sum|`.
    pub gap: f64,
}

/// Compares the coherence of the block-diagonal state `p1 M_1 (+) p2 M_2`
/// with `p1 C(phi_1) + p2 C(phi_2)`.
pub fn check_additivity(phi1: &KrausChannel, phi2: &KrausChannel, p1: f64, params: AlphaZ, opts: &OptimizerOptions) -> Result<AdditivityReport> {
    if !(p1 > 0.0 && p1 <= 1.0) {
        return Err(Error::InvalidParameters(alloc::format!("weight p1 = {p1} must lie in (0, 1]")));
    }
    let p2 = 1.0 - p1;
    let m1 = choi_state(phi1);
    let m2 = choi_state(phi2);
    let combined = DensityMatrix::from_matrix_unchecked(m1.matrix().scale(p1).direct_sum(&m2.matrix().scale(p2)));
    let combined = coherence_state_auto(&combined, params, opts)?.value;
    let c1 = coherence_state_auto(m1.state(), params, opts)?.value;
    let c2 = if p2 > 0.0 {
        coherence_state_auto(m2.state(), params, opts)?.value
    } else {
        0.0
    };
    let weighted_sum = p1 * c1 + p2 * c2;
    Ok(AdditivityReport {
        combined,
        weighted_sum,
        gap: (combined - weighted_sum).abs(),
    })
}
