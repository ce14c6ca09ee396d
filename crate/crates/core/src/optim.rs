//! Derivative-free local search and the parallel map used by multi-start
//! drivers.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // f64 math without std
use num_traits::Float;

/// Outcome of a local minimization.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalMin {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Orders NaN above everything so it never wins a minimization.
#[inline]
pub(crate) fn min_key(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

/// Nelder-Mead minimization with the standard coefficients. Infinite
/// values are allowed; `-inf` stops the search at once.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], step: f64, max_iters: usize, tol: f64) -> LocalMin {
    let n = x0.len();
    let mut eval = |x: &[f64]| min_key(f(x));
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    pts.push(x0.to_vec());
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += step;
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| eval(p)).collect();
    let mut iterations = 0;
    let mut converged = false;
    let mut order: Vec<usize> = (0..=n).collect();
    while iterations < max_iters {
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        let (best, worst, second) = (order[0], order[n], order[n.saturating_sub(1)]);
        if vals[best] == f64::NEG_INFINITY {
            converged = true;
            break;
        }
        let spread = vals[worst] - vals[best];
        let diameter = pts
            .iter()
            .map(|p| p.iter().zip(&pts[best]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if (spread.is_finite() && spread <= tol && diameter <= tol.sqrt()) || diameter <= 1e-14 {
            converged = true;
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for &k in order.iter().take(n) {
            for (c, x) in centroid.iter_mut().zip(&pts[k]) {
                *c += x / n as f64;
            }
        }
        let along = |coef: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&pts[worst])
                .map(|(c, w)| c + coef * (c - w))
                .collect()
        };
        let xr = along(1.0);
        let fr = eval(&xr);
        if fr < vals[best] {
            let xe = along(2.0);
            let fe = eval(&xe);
            if fe < fr {
                pts[worst] = xe;
                vals[worst] = fe;
            } else {
                pts[worst] = xr;
                vals[worst] = fr;
            }
            continue;
        }
        if fr < vals[second] {
            pts[worst] = xr;
            vals[worst] = fr;
            continue;
        }
        let (xc, fc) = if fr < vals[worst] {
            let xc = along(0.5);
            let fc = eval(&xc);
            (xc, fc)
        } else {
            let xc = along(-0.5);
            let fc = eval(&xc);
            (xc, fc)
        };
        if fc < vals[worst].min(fr) {
            pts[worst] = xc;
            vals[worst] = fc;
            continue;
        }
        let anchor = pts[best].clone();
        for k in 0..=n {
            if k == best {
                continue;
            }
            for (x, a) in pts[k].iter_mut().zip(&anchor) {
                *x = a + 0.5 * (*x - a);
            }
            vals[k] = eval(&pts[k]);
        }
    }
    let best = (0..=n).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap_or(0);
    LocalMin {
        x: pts[best].clone(),
        value: vals[best],
        iterations,
        converged,
    }
}

/// Coordinate (compass) search: probes `+-h` along each axis, halving `h`
/// whenever no probe improves, until `h < min_step`.
pub fn compass_search<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], step: f64, min_step: f64, max_evals: usize) -> LocalMin {
    let mut x = x0.to_vec();
    let mut fx = min_key(f(&x));
    let mut h = step;
    let mut evals = 1;
    while h >= min_step && evals < max_evals && fx != f64::NEG_INFINITY {
        let mut improved = false;
        for i in 0..x.len() {
            for sign in [1.0, -1.0] {
                let mut y = x.clone();
                y[i] += sign * h;
                let fy = min_key(f(&y));
                evals += 1;
                if fy < fx {
                    x = y;
                    fx = fy;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            h *= 0.5;
        }
    }
    LocalMin {
        x,
        value: fx,
        iterations: evals,
        converged: h < min_step,
    }
}

/// `(0..n).map(f)`, spread over the rayon pool when the `parallel` feature
/// is on. Output order is always index order.
pub fn map_indices<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}
