//! Brute-force references: exhaustive grids with local polishing. They
//! share nothing with the optimizers except the divergence itself.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // f64 math without std
use num_traits::Float;

use super::commutativity::CommutatorObjective;
use super::{Certificate, CoherenceResult, Method};
use crate::entropy::{AlphaZ, DivergenceKernel};
use crate::error::{Error, Result};
use crate::optim::{compass_search, map_indices, min_key};
use crate::quantum::{choi_state, param_count, pure_from_params, DensityMatrix, KrausChannel};

/// Largest number of grid points either oracle will evaluate.
pub const MAX_ORACLE_POINTS: f64 = 5e7;

/// Smallest transfer tried by the simplex polish.
const MIN_TRANSFER: f64 = 1e-13;

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Visits every composition of `total` into `parts.len()` nonnegative parts
/// with `parts[0]` held fixed.
fn for_each_composition(parts: &mut [usize], slot: usize, remaining: usize, visit: &mut impl FnMut(&[usize])) {
    if slot == parts.len() - 1 {
        parts[slot] = remaining;
        visit(parts);
        return;
    }
    for k in 0..=remaining {
        parts[slot] = k;
        for_each_composition(parts, slot + 1, remaining - k, visit);
    }
}

fn diag_value(kernel: &DivergenceKernel, q: &[f64]) -> f64 {
    kernel
        .divergence_diagonal(q)
        .map(|d| min_key(d.value))
        .unwrap_or(f64::INFINITY)
}

/// Pairwise mass transfers `q_i += delta, q_j -= delta`, halving `delta`
/// when no transfer helps.
fn polish_simplex(kernel: &DivergenceKernel, mut q: Vec<f64>, mut value: f64, delta0: f64) -> (Vec<f64>, f64) {
    let n = q.len();
    let mut delta = delta0;
    while delta >= MIN_TRANSFER {
        let mut improved = false;
        for i in 0..n {
            for j in 0..n {
                let amount = delta.min(q[j]);
                if i == j || amount <= 0.0 {
                    continue;
                }
                let mut trial = q.clone();
                trial[i] += amount;
                trial[j] -= amount;
                let v = diag_value(kernel, &trial);
                // ignore rounding-level gains
                if v < value - 1e-14 * value.abs().max(1.0) {
                    q = trial;
                    value = v;
                    improved = true;
                }
            }
        }
        if !improved {
            delta *= 0.5;
        }
    }
    (q, value)
}

fn grid_min_diag(kernel: &DivergenceKernel, grid_n: usize) -> Result<(f64, Vec<f64>)> {
    let n = kernel.dim();
    if grid_n == 0 {
        return Err(Error::InvalidParameters("grid_n must be positive".into()));
    }
    let points = binomial(grid_n + n - 1, n - 1);
    if points > MAX_ORACLE_POINTS {
        return Err(Error::DimensionTooLarge(format!(
            "{points:.3e} simplex grid points for dimension {n} at grid_n = {grid_n}"
        )));
    }
    let scale = 1.0 / grid_n as f64;
    let slices = map_indices(grid_n + 1, |first| {
        let mut best = (f64::INFINITY, Vec::new());
        let mut parts = vec![0usize; n];
        parts[0] = first;
        let mut visit = |c: &[usize]| {
            let q: Vec<f64> = c.iter().map(|&k| k as f64 * scale).collect();
            let v = diag_value(kernel, &q);
            if v < best.0 || best.1.is_empty() {
                best = (v, q);
            }
        };
        if n == 1 {
            if first == grid_n {
                visit(&parts);
            }
        } else {
            for_each_composition(&mut parts, 1, grid_n - first, &mut visit);
        }
        best
    });
    slices
        .into_iter()
        .filter(|(_, q)| !q.is_empty())
        .reduce(|a, b| if b.0 < a.0 { b } else { a })
        .ok_or_else(|| Error::InvalidParameters("empty grid".into()))
}

fn diag_result(value: f64, q: Vec<f64>) -> CoherenceResult {
    CoherenceResult {
        value: value.max(0.0),
        certificate: Certificate::Diagonal(q),
        method: Method::GridOracle,
        converged: true,
    }
}

/// Grid search for `min D(rho, diag(q))` over `q_k = n_k / grid_n`, then
/// pairwise-transfer polishing.
pub fn oracle_min_diag_state(rho: &DensityMatrix, params: AlphaZ, grid_n: usize) -> Result<CoherenceResult> {
    let kernel = DivergenceKernel::new(rho, params)?;
    let (value, q) = grid_min_diag(&kernel, grid_n)?;
    let (q, value) = polish_simplex(&kernel, q, value, 1.0 / grid_n as f64);
    Ok(diag_result(value, q))
}

/// The best grid point of [`oracle_min_diag`] without the polishing.
pub fn oracle_min_diag_coarse(phi: &KrausChannel, params: AlphaZ, grid_n: usize) -> Result<CoherenceResult> {
    let kernel = DivergenceKernel::new(choi_state(phi).state(), params)?;
    let (value, q) = grid_min_diag(&kernel, grid_n)?;
    Ok(diag_result(value, q))
}

/// Grid oracle for `C_{a,z}(phi)`.
pub fn oracle_min_diag(phi: &KrausChannel, params: AlphaZ, grid_n: usize) -> Result<CoherenceResult> {
    oracle_min_diag_state(choi_state(phi).state(), params, grid_n)
}

/// Grid oracle for `C~_{a,z}(phi)`: `grid_n` points on every angle of
/// [`pure_from_params`] (polar angles on `[0, pi]` including both ends,
/// phases on `[0, 2pi)`), then compass-search polishing. Costs
/// `grid_n^{2(d-1)}` evaluations.
pub fn oracle_sup_pure(phi: &KrausChannel, params: AlphaZ, grid_n: usize) -> Result<CoherenceResult> {
    let obj = CommutatorObjective::new(phi, params)?;
    let d = obj.dim();
    let m = param_count(d);
    if grid_n < 2 {
        return Err(Error::InvalidParameters("grid_n must be at least 2".into()));
    }
    let points = (grid_n as f64).powi(m as i32);
    if points > MAX_ORACLE_POINTS {
        return Err(Error::DimensionTooLarge(format!(
            "{points:.3e} grid points for a {d}-level input at grid_n = {grid_n}"
        )));
    }
    let polar = d - 1;
    let coord = |slot: usize, k: usize| {
        if slot < polar {
            core::f64::consts::PI * k as f64 / (grid_n - 1) as f64
        } else {
            2.0 * core::f64::consts::PI * k as f64 / grid_n as f64
        }
    };
    let eval = |x: &[f64]| {
        let v = obj.eval_angles(x);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    };
    let per_slice = (points / grid_n as f64).round() as usize;
    let slices = map_indices(grid_n, |first| {
        let mut best = (f64::NEG_INFINITY, vec![0.0; m]);
        let mut x = vec![0.0; m];
        x[0] = coord(0, first);
        for flat in 0..per_slice {
            let mut rest = flat;
            for (slot, xi) in x.iter_mut().enumerate().skip(1) {
                *xi = coord(slot, rest % grid_n);
                rest /= grid_n;
            }
            let v = eval(&x);
            if v > best.0 {
                best = (v, x.clone());
            }
        }
        best
    });
    let (value, x) = slices
        .into_iter()
        .reduce(|a, b| if b.0 > a.0 { b } else { a })
        .ok_or_else(|| Error::InvalidParameters("empty grid".into()))?;
    let (x, value) = if value.is_finite() {
        let step = core::f64::consts::PI / (grid_n - 1) as f64;
        let r = compass_search(|x| -eval(x), &x, step, 1e-10, 200_000);
        if -r.value > value {
            (r.x, -r.value)
        } else {
            (x, value)
        }
    } else {
        (x, value)
    };
    let psi = pure_from_params(&x)?;
    Ok(CoherenceResult {
        value: value.max(0.0),
        certificate: super::Certificate::Pure(psi),
        method: Method::GridOracle,
        converged: true,
    })
}
