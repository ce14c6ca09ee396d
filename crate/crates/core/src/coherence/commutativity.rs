//! `C~_{a,z}(phi) = sup_psi D(phi(Delta(psi)), Delta(phi(psi)))`, where the
//! supremum over all states is attained on pure ones.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // f64 math without std
use num_traits::Float;
use rand::Rng;

use super::{Certificate, CoherenceResult, Method, OptimizerOptions};
use crate::entropy::{AlphaZ, DivergenceKernel};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::optim::{map_indices, nelder_mead};
use crate::quantum::random::seeded_rng;
use crate::quantum::{param_count, pure_from_params, KrausChannel, PureState};

/// Cells per axis of the coarse qubit grid.
const QUBIT_GRID: usize = 64;
/// Local maxima of the grid refined by Nelder-Mead.
const REFINED_CELLS: usize = 5;

/// Precomputed `phi(|i><i|)` for fast evaluation of `phi o Delta`.
pub(crate) struct CommutatorObjective<'a> {
    phi: &'a KrausChannel,
    images: Vec<ComplexMatrix>,
    params: AlphaZ,
}

impl<'a> CommutatorObjective<'a> {
    pub(crate) fn new(phi: &'a KrausChannel, params: AlphaZ) -> Result<Self> {
        if !phi.is_square() {
            return Err(Error::InvalidChannel(alloc::format!(
                "the commutativity measure needs |A| = |B|, got {} -> {}",
                phi.input_dim(),
                phi.output_dim()
            )));
        }
        let d = phi.input_dim();
        let images = (0..d)
            .map(|i| {
                let mut e = ComplexMatrix::zeros(d, d);
                e[(i, i)] = Complex64::new(1.0, 0.0);
                phi.apply_matrix(&e)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { phi, images, params })
    }

    pub(crate) fn dim(&self) -> usize {
        self.images.len()
    }

    /// `D(phi(Delta(psi)), Delta(phi(psi)))` for a density matrix `psi`.
    pub(crate) fn eval_matrix(&self, psi: &ComplexMatrix) -> Result<f64> {
        let d = self.dim();
        let mut first = ComplexMatrix::zeros(d, d);
        for (i, img) in self.images.iter().enumerate() {
            first = &first + &img.scale(psi[(i, i)].re);
        }
        let second = self.phi.apply_matrix(psi)?.diagonal_part();
        let kernel = DivergenceKernel::from_matrix(&first.hermitian_part(), self.params)?;
        Ok(kernel.divergence_matrix(&second)?.value)
    }

    pub(crate) fn eval(&self, psi: &PureState) -> Result<f64> {
        self.eval_matrix(psi.density().matrix())
    }

    /// Angle-parametrized objective; numerical failures rank last.
    pub(crate) fn eval_angles(&self, angles: &[f64]) -> f64 {
        pure_from_params(angles)
            .and_then(|psi| self.eval(&psi))
            .unwrap_or(f64::NAN)
    }
}

/// Divergence between `phi o Delta` and `Delta o phi` at the input `psi`.
pub fn commutator_divergence(phi: &KrausChannel, psi: &PureState, params: AlphaZ) -> Result<f64> {
    CommutatorObjective::new(phi, params)?.eval(psi)
}

/// Whether `phi o Delta = Delta o phi`, tested on all matrix units.
pub fn is_detection_creation_incoherent(phi: &KrausChannel, tol: f64) -> Result<bool> {
    let obj = CommutatorObjective::new(phi, AlphaZ::alpha_to_one())?;
    let d = obj.dim();
    for i in 0..d {
        for j in 0..d {
            let mut e = ComplexMatrix::zeros(d, d);
            e[(i, j)] = Complex64::new(1.0, 0.0);
            let first = if i == j { obj.images[i].clone() } else { ComplexMatrix::zeros(d, d) };
            let second = phi.apply_matrix(&e)?.diagonal_part();
            if first.max_abs_diff(&second) > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

struct Candidate {
    angles: Vec<f64>,
    value: f64,
    converged: bool,
}

fn better(a: f64, b: f64) -> bool {
    !a.is_nan() && (b.is_nan() || a > b)
}

/// Nelder-Mead ascent from `x0`; returns the better of the start and the end.
fn ascend(obj: &CommutatorObjective<'_>, x0: &[f64], v0: f64, step: f64, opts: &OptimizerOptions) -> Candidate {
    if v0 == f64::INFINITY {
        return Candidate {
            angles: x0.to_vec(),
            value: v0,
            converged: true,
        };
    }
    let r = nelder_mead(|x| -obj.eval_angles(x), x0, step, opts.max_iters, opts.tol.min(1e-12));
    let value = -r.value;
    if better(value, v0) {
        Candidate {
            angles: r.x,
            value,
            converged: r.converged,
        }
    } else {
        Candidate {
            angles: x0.to_vec(),
            value: v0,
            converged: r.converged,
        }
    }
}

/// Starting points for a qubit: local maxima of a `64 x 64` grid over
/// `(theta, phi) in [0, pi] x [0, 2pi)`, best first.
fn qubit_starts(obj: &CommutatorObjective<'_>) -> Vec<(Vec<f64>, f64)> {
    let n = QUBIT_GRID;
    let theta = |i: usize| core::f64::consts::PI * i as f64 / (n - 1) as f64;
    let phase = |j: usize| 2.0 * core::f64::consts::PI * j as f64 / n as f64;
    let rows = map_indices(n, |i| (0..n).map(|j| obj.eval_angles(&[theta(i), phase(j)])).collect::<Vec<f64>>());
    let at = |i: usize, j: usize| {
        let v = rows[i][j % n];
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    };
    let mut peaks = Vec::new();
    for i in 0..n {
        // the poles are single states: one cell each, compared with the
        // adjacent ring only
        let pole = i == 0 || i == n - 1;
        let phases = if pole { 1 } else { n };
        for j in 0..phases {
            let v = at(i, j);
            let is_peak = if pole {
                let ring = if i == 0 { 1 } else { n - 2 };
                (0..n).all(|b| at(ring, b) <= v)
            } else {
                (i - 1..=i + 1).all(|a| (0..3).all(|b| (a == i && b == 1) || at(a, (j + n + b - 1) % n) <= v))
            };
            if is_peak {
                peaks.push((alloc::vec![theta(i), phase(j)], v));
            }
        }
    }
    peaks.sort_by(|a, b| b.1.total_cmp(&a.1));
    peaks.truncate(REFINED_CELLS);
    peaks
}

fn random_starts(obj: &CommutatorObjective<'_>, opts: &OptimizerOptions) -> Vec<(Vec<f64>, f64)> {
    let d = obj.dim();
    let m = param_count(d);
    let mut starts: Vec<(Vec<f64>, f64)> = (0..d)
        .map(|k| {
            // basis state k: polar angles pi up to slot k, then 0
            let mut x = alloc::vec![0.0; m];
            for (slot, angle) in x.iter_mut().take(d - 1).enumerate() {
                *angle = if slot < k { core::f64::consts::PI } else { 0.0 };
            }
            let v = obj.eval_angles(&x);
            (x, v)
        })
        .collect();
    starts.extend((0..opts.restarts).map(|r| {
        let mut rng = seeded_rng(opts.seed, r as u64);
        let x: Vec<f64> = (0..m)
            .map(|k| {
                let span = if k < d - 1 { core::f64::consts::PI } else { 2.0 * core::f64::consts::PI };
                rng.random::<f64>() * span
            })
            .collect();
        let v = obj.eval_angles(&x);
        (x, v)
    }));
    starts
}

/// `C~_{a,z}(phi)` for a channel with `|A| = |B|`.
///
/// Qubits: coarse grid, then Nelder-Mead from the best local maxima.
/// Larger inputs: Nelder-Mead from every basis state and `opts.restarts`
/// random angle vectors.
pub fn coherence_commutativity(phi: &KrausChannel, params: AlphaZ, opts: &OptimizerOptions) -> Result<CoherenceResult> {
    params.ensure_known_regime(opts.allow_outside_regime)?;
    let obj = CommutatorObjective::new(phi, params)?;
    if obj.dim() == 1 {
        return Ok(CoherenceResult {
            value: 0.0,
            certificate: Certificate::Pure(PureState::basis(1, 0)),
            method: Method::PureStateOptimized,
            converged: true,
        });
    }
    let (starts, step) = if obj.dim() == 2 {
        (qubit_starts(&obj), core::f64::consts::PI / (QUBIT_GRID - 1) as f64)
    } else {
        (random_starts(&obj, opts), 0.3)
    };
    let runs = map_indices(starts.len(), |k| ascend(&obj, &starts[k].0, starts[k].1, step, opts));
    let converged = runs.iter().all(|c| c.converged);
    let best = runs
        .into_iter()
        .reduce(|a, b| if better(b.value, a.value) { b } else { a })
        .ok_or_else(|| Error::InvalidParameters("no starting points".into()))?;
    let psi = pure_from_params(&best.angles)?;
    let value = obj.eval(&psi)?;
    Ok(CoherenceResult {
        value: value.max(0.0),
        certificate: Certificate::Pure(psi),
        method: Method::PureStateOptimized,
        converged,
    })
}

