//! Minimization of `D(rho, diag(q))` over the probability simplex by
//! exponentiated gradient (mirror descent) with backtracking.
//!
//! With `S = diag(q^s)`, `s = (1-a)/2z`, `A = rho^{a/z}` and `X = S A S`,
//!
//! ```text
//! f(q)       = Tr X^z
//! df/dq_k    = 2 z s q_k^{s-1} Re (X^{z-1} S A)_kk
//! ```
//!
//! `D` is increasing in `f` for `a > 1` and decreasing for `a < 1`, so the
//! descent works on `+f` or `-f`. The limit branch minimizes
//! `-sum_k rho_kk ln q_k`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // f64 math without std
use num_traits::Float;
use rand_distr::{Distribution, Exp1};

use super::{z1_solution, Certificate, CoherenceResult, Method, OptimizerOptions};
use crate::entropy::{noise_floor, AlphaZ, DivergenceKernel};
use crate::error::Result;
use crate::linalg::{eig_hermitian, spectral_apply, ComplexMatrix, DEFAULT_CUTOFF};
use crate::optim::{map_indices, min_key};
use crate::quantum::random::seeded_rng;
use crate::quantum::DensityMatrix;

/// Improvement window, in iterations, of the stopping rule.
const WINDOW: usize = 50;
/// Results closer than this are ties, broken lexicographically.
const TIE_TOL: f64 = 1e-12;

pub(crate) struct DiagonalObjective<'a> {
    kernel: &'a DivergenceKernel,
    params: AlphaZ,
    /// `(1 - a) / 2z`.
    s: f64,
    /// Diagonal of `rho^{a/z}`, or of `rho` for the limit.
    weights: Vec<f64>,
    /// `+1` when minimizing `f`, `-1` when maximizing it.
    sign: f64,
}

impl<'a> DiagonalObjective<'a> {
    pub(crate) fn new(kernel: &'a DivergenceKernel) -> Self {
        let params = kernel.params();
        let a = params.alpha_value();
        let weights = if params.is_limit() {
            kernel.rho().real_diagonal()
        } else {
            kernel.rho_pow().real_diagonal()
        };
        Self {
            kernel,
            params,
            s: (1.0 - a) / (2.0 * params.z()),
            weights,
            sign: if a > 1.0 { 1.0 } else { -1.0 },
        }
    }

    fn dim(&self) -> usize {
        self.weights.len()
    }

    /// True when `diag(q)` misses part of the support of `rho` and the
    /// divergence is infinite.
    fn escapes_support(&self, q: &[f64]) -> bool {
        let infinite_possible = self.params.is_limit() || self.params.alpha_value() > 1.0;
        infinite_possible && q.iter().zip(&self.weights).any(|(&qk, &w)| qk <= 0.0 && w > DEFAULT_CUTOFF)
    }

    fn scaling(&self, q: &[f64]) -> Vec<f64> {
        q.iter().map(|&x| if x > 0.0 { x.powf(self.s) } else { 0.0 }).collect()
    }

    /// Bound on the rank of the sandwich.
    fn rank(&self, sq: &[f64]) -> usize {
        self.kernel.rho_rank().min(sq.iter().filter(|&&x| x > 0.0).count())
    }

    fn sandwich(&self, sq: &[f64]) -> ComplexMatrix {
        let a = self.kernel.rho_pow();
        ComplexMatrix::from_fn(self.dim(), self.dim(), |j, k| a[(j, k)] * (sq[j] * sq[k]))
    }

    /// Quantity being minimized; a monotone function of the divergence.
    fn value(&self, q: &[f64]) -> Result<f64> {
        if self.escapes_support(q) {
            return Ok(f64::INFINITY);
        }
        if self.params.is_limit() {
            return Ok(-q
                .iter()
                .zip(&self.weights)
                .filter(|(_, &w)| w > DEFAULT_CUTOFF)
                .map(|(&qk, &w)| w * qk.ln())
                .sum::<f64>());
        }
        let z = self.params.z();
        let sq = self.scaling(q);
        let f = if z == 1.0 {
            sq.iter().zip(&self.weights).map(|(x, w)| x * x * w).sum::<f64>()
        } else {
            crate::entropy::trace_power(&self.sandwich(&sq), z, self.rank(&sq))?
        };
        Ok(self.sign * f.max(0.0))
    }

    fn value_and_grad(&self, q: &[f64]) -> Result<(f64, Vec<f64>)> {
        let value = self.value(q)?;
        let n = self.dim();
        if !value.is_finite() {
            return Ok((value, vec![0.0; n]));
        }
        if self.params.is_limit() {
            let g = q
                .iter()
                .zip(&self.weights)
                .map(|(&qk, &w)| if qk > 0.0 && w > DEFAULT_CUTOFF { -w / qk } else { 0.0 })
                .collect();
            return Ok((value, g));
        }
        let (z, s) = (self.params.z(), self.s);
        let sq = self.scaling(q);
        let grad: Vec<f64> = if z == 1.0 {
            (0..n)
                .map(|k| if q[k] > 0.0 { 2.0 * s * sq[k] * sq[k] / q[k] * self.weights[k] } else { 0.0 })
                .collect()
        } else {
            let x = self.sandwich(&sq).hermitian_part();
            let spectrum = eig_hermitian(&x)?;
            let floor = noise_floor(&spectrum.eigenvalues, self.rank(&sq));
            let y = spectral_apply(&spectrum, |l| if l > floor { l.powf(z - 1.0) } else { 0.0 });
            let a = self.kernel.rho_pow();
            (0..n)
                .map(|k| {
                    if q[k] <= 0.0 {
                        return 0.0;
                    }
                    let ysa: Complex64 = (0..n).map(|j| y[(k, j)] * sq[j] * a[(j, k)]).sum();
                    2.0 * z * s * sq[k] / q[k] * ysa.re
                })
                .collect()
        };
        Ok((value, grad.into_iter().map(|g| self.sign * g).collect()))
    }
}

/// Multiplicative update `q_k exp(-eta g_k)`, renormalized. Zero entries
/// stay zero.
fn mirror_step(q: &[f64], g: &[f64], eta: f64) -> Vec<f64> {
    let logs: Vec<f64> = q
        .iter()
        .zip(g)
        .map(|(&qk, &gk)| if qk > 0.0 { qk.ln() - eta * gk } else { f64::NEG_INFINITY })
        .collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = logs.iter().map(|&l| (l - top).exp()).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

struct Descent {
    q: Vec<f64>,
    converged: bool,
}

fn descend(obj: &DiagonalObjective<'_>, start: Vec<f64>, max_iters: usize, tol: f64) -> Result<Descent> {
    let mut q = start;
    let (mut h, mut g) = obj.value_and_grad(&q)?;
    if !h.is_finite() {
        return Ok(Descent { q, converged: false });
    }
    let gmax = g.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut eta = if gmax > 0.0 { 1.0 / gmax } else { 1.0 };
    let mut history = Vec::with_capacity(max_iters.min(4096));
    history.push(h);
    let mut converged = false;
    for it in 0..max_iters {
        let mut accepted = None;
        while eta > 1e-300 {
            let trial = mirror_step(&q, &g, eta);
            let ht = min_key(obj.value(&trial)?);
            if ht < h {
                accepted = Some((trial, ht));
                break;
            }
            eta *= 0.5;
        }
        let Some((trial, _)) = accepted else {
            // no descent direction left: stationary on the simplex
            converged = true;
            break;
        };
        q = trial;
        (h, g) = obj.value_and_grad(&q)?;
        eta *= 2.0;
        history.push(h);
        if it + 1 >= WINDOW && history[history.len() - 1 - WINDOW] - h < tol {
            converged = true;
            break;
        }
    }
    Ok(Descent { q, converged })
}

fn dirichlet_start(seed: u64, stream: u64, n: usize) -> Vec<f64> {
    let mut rng = seeded_rng(seed, stream);
    let w: Vec<f64> = (0..n).map(|_| Exp1.sample(&mut rng)).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

fn lexicographic_less(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).find(|(x, y)| x != y).map(|(x, y)| x < y).unwrap_or(false)
}

/// `C_{a,z}` of a state: minimum of `D(rho, sigma)` over diagonal `sigma`.
///
/// Runs `opts.restarts` Dirichlet-random starts plus one warm start at the
/// `z = 1` optimum; restart `i` draws from stream `i` of `opts.seed`, so
/// results do not depend on scheduling.
pub fn coherence_state(rho: &DensityMatrix, params: AlphaZ, opts: &OptimizerOptions) -> Result<CoherenceResult> {
    params.ensure_known_regime(opts.allow_outside_regime)?;
    let kernel = DivergenceKernel::new(rho, params)?;
    let obj = DiagonalObjective::new(&kernel);
    let n = rho.dim();
    let (_, warm) = z1_solution(rho.matrix(), params.alpha())?;

    let runs = map_indices(opts.restarts + 1, |i| {
        let start = if i == opts.restarts {
            warm.clone()
        } else {
            dirichlet_start(opts.seed, i as u64, n)
        };
        let d = descend(&obj, start, opts.max_iters, opts.tol)?;
        let value = kernel.divergence_matrix(&ComplexMatrix::from_real_diagonal(&d.q))?.value;
        Ok((value, d))
    });

    let mut best: Option<(f64, Descent)> = None;
    let mut all_converged = true;
    for run in runs {
        let (value, d) = run?;
        all_converged &= d.converged;
        let value = min_key(value);
        best = match best {
            None => Some((value, d)),
            Some((bv, bd)) => {
                let better = value < bv - TIE_TOL || ((value - bv).abs() <= TIE_TOL && lexicographic_less(&d.q, &bd.q));
                if better {
                    Some((value, d))
                } else {
                    Some((bv, bd))
                }
            }
        };
    }
    let (value, d) = best.expect("at least one start");
    Ok(CoherenceResult {
        value: value.max(0.0),
        certificate: Certificate::Diagonal(d.q),
        method: Method::SimplexOptimized,
        converged: all_converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::random::{random_channel, random_density};
    use crate::quantum::choi_state;

    fn finite_difference(obj: &DiagonalObjective<'_>, q: &[f64], k: usize) -> f64 {
        let h = 1e-6;
        let mut up = q.to_vec();
        let mut down = q.to_vec();
        up[k] += h;
        down[k] -= h;
        (obj.value(&up).unwrap() - obj.value(&down).unwrap()) / (2.0 * h)
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = seeded_rng(3, 0);
        for (a, z) in [(0.5, 1.0), (0.3, 0.8), (0.7, 0.7), (1.5, 1.5), (1.5, 0.75), (2.0, 1.0)] {
            let rho = random_density(&mut rng, 4, 4);
            let kernel = DivergenceKernel::new(&rho, AlphaZ::new(a, z).unwrap()).unwrap();
            let obj = DiagonalObjective::new(&kernel);
            let q = [0.1, 0.2, 0.3, 0.4];
            let (_, g) = obj.value_and_grad(&q).unwrap();
            for (k, gk) in g.iter().enumerate() {
                let fd = finite_difference(&obj, &q, k);
                assert!((gk - fd).abs() < 1e-6 * (1.0 + fd.abs()), "a={a} z={z} k={k}: {gk} vs {fd}");
            }
        }
    }

    #[test]
    fn optimizer_matches_closed_form_at_z1() {
        let mut rng = seeded_rng(11, 0);
        let opts = OptimizerOptions {
            restarts: 4,
            ..Default::default()
        };
        for a in [0.3, 0.5, 1.5, 2.0] {
            let phi = random_channel(&mut rng, 2, 2, 2);
            let m = choi_state(&phi);
            let exact = super::super::coherence_state_z1(m.state(), a).unwrap().value;
            let r = coherence_state(m.state(), AlphaZ::new(a, 1.0).unwrap(), &opts).unwrap();
            assert!((r.value - exact).abs() < 1e-8, "a={a}: {} vs {exact}", r.value);
        }
    }

    #[test]
    fn mirror_step_keeps_zeros() {
        let q = mirror_step(&[0.0, 0.5, 0.5], &[1.0, 2.0, -1.0], 0.1);
        assert_eq!(q[0], 0.0);
        assert!((q.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(q[2] > q[1]);
    }
}
