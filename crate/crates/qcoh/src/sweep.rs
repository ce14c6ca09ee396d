//! Parameter sweeps producing the data behind surface and curve plots.

use std::fmt::Write as _;

use qcoh_core::{AlphaZ, ChannelKind, Measure, OptimizerOptions};
use rayon::prelude::*;
use serde::Serialize;

use crate::compute::{evaluate, fmt_f64, MeasureSet, Strategy, Target};
use crate::{CliError, CliResult};

/// Half-width of the neighbourhood of `alpha = 1` replaced by the limit.
pub const LIMIT_GAP: f64 = 1e-3;

/// `steps` evenly spaced points from `start` to `stop`, both included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Range {
    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| if k + 1 == self.steps { self.stop } else { self.start + (self.stop - self.start) * k as f64 / last })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaGrid {
    Fixed(f64),
    Range(Range),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub kind: ChannelKind,
    /// Required exactly when the kind takes a parameter.
    pub param: Option<Range>,
    pub alpha: AlphaGrid,
    pub z: f64,
    pub measures: MeasureSet,
    pub strategy: Strategy,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub param: Option<f64>,
    pub alpha: f64,
    pub measure: &'static str,
    pub value: f64,
    pub method: &'static str,
}

impl SweepSpec {
    fn params(&self) -> CliResult<Vec<Option<f64>>> {
        match (self.kind.param_range(), self.param) {
            (Some((name, min, max)), Some(r)) => {
                if r.steps < 2 {
                    return Err(CliError::Input("the parameter range needs at least 2 steps".into()));
                }
                if !(r.start >= min && r.stop <= max && r.start <= r.stop) {
                    return Err(CliError::Input(format!(
                        "{name} range [{}, {}] must lie inside [{min}, {max}] in increasing order",
                        r.start, r.stop
                    )));
                }
                Ok(r.points().into_iter().map(Some).collect())
            }
            (Some((name, _, _)), None) => Err(CliError::Input(format!("channel '{}' needs a {name} range", self.kind))),
            (None, Some(_)) => Err(CliError::Input(format!("channel '{}' takes no parameter", self.kind))),
            (None, None) => Ok(vec![None]),
        }
    }

    /// Alpha values in increasing order. Points within [`LIMIT_GAP`] of 1
    /// are dropped, and 1 itself (the limit) is added when `z = 1` and the
    /// range reaches it.
    pub fn alphas(&self) -> CliResult<Vec<f64>> {
        let r = match self.alpha {
            AlphaGrid::Fixed(a) => return Ok(vec![a]),
            AlphaGrid::Range(r) => r,
        };
        if r.steps < 2 || !(r.start <= r.stop) {
            return Err(CliError::Input("the alpha range needs at least 2 steps in increasing order".into()));
        }
        let mut out: Vec<f64> = r.points().into_iter().filter(|a| (a - 1.0).abs() >= LIMIT_GAP).collect();
        if self.z == 1.0 && r.start <= 1.0 && r.stop >= 1.0 {
            out.push(1.0);
            out.sort_by(f64::total_cmp);
        }
        Ok(out)
    }

    /// Grid points in output order: parameter major, alpha minor, measure
    /// innermost. Validates every point before any work starts.
    pub fn grid(&self, opts: &OptimizerOptions) -> CliResult<Vec<(Option<f64>, AlphaZ, Measure)>> {
        let params = self.params()?;
        let alphas = self.alphas()?;
        let mut settings = Vec::with_capacity(alphas.len());
        for &a in &alphas {
            let p = AlphaZ::from_values(a, self.z)?;
            p.ensure_known_regime(opts.allow_outside_regime)?;
            settings.push(p);
        }
        let measures = self.measures.measures();
        let mut grid = Vec::with_capacity(params.len() * settings.len() * measures.len());
        for &x in &params {
            for &p in &settings {
                for &m in &measures {
                    grid.push((x, p, m));
                }
            }
        }
        Ok(grid)
    }
}

/// Evaluates every grid point on the worker pool; rows come back in grid
/// order whatever the completion order.
pub fn run(spec: &SweepSpec, opts: &OptimizerOptions) -> CliResult<Vec<Row>> {
    let grid = spec.grid(opts)?;
    grid.par_iter()
        .map(|&(x, p, m)| {
            let target = Target::named(spec.kind, x)?;
            let r = evaluate(&target.channel, m, p, spec.strategy, opts)?;
            Ok(Row {
                param: x,
                alpha: p.alpha_value(),
                measure: m.name(),
                value: r.value,
                method: r.method.name(),
            })
        })
        .collect()
}

pub fn to_csv(rows: &[Row]) -> String {
    let mut out = String::from("param,alpha,measure,value,method\n");
    for r in rows {
        let param = r.param.map(fmt_f64).unwrap_or_default();
        let _ = writeln!(out, "{param},{},{},{},{}", fmt_f64(r.alpha), r.measure, fmt_f64(r.value), r.method);
    }
    out
}

#[derive(Serialize)]
struct JsonSweep<'a> {
    channel: &'a str,
    z: f64,
    rows: &'a [Row],
}

/// Non-finite values become `null`.
pub fn to_json(spec: &SweepSpec, rows: &[Row]) -> String {
    let doc = JsonSweep {
        channel: spec.kind.name(),
        z: spec.z,
        rows,
    };
    serde_json::to_string_pretty(&doc).expect("plain values serialize")
}

pub fn render(spec: &SweepSpec, rows: &[Row], format: Format) -> String {
    match format {
        Format::Csv => to_csv(rows),
        Format::Json => to_json(spec, rows) + "\n",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(alpha: AlphaGrid, z: f64) -> SweepSpec {
        SweepSpec {
            kind: ChannelKind::PhaseFlip,
            param: Some(Range { start: 0.0, stop: 1.0, steps: 3 }),
            alpha,
            z,
            measures: MeasureSet::One(Measure::C),
            strategy: Strategy::Auto,
        }
    }

    #[test]
    fn range_points_hit_both_ends() {
        let r = Range { start: 0.05, stop: 2.0, steps: 40 };
        let pts = r.points();
        assert_eq!(pts.len(), 40);
        assert_eq!(pts[0], 0.05);
        assert_eq!(pts[39], 2.0);
    }

    #[test]
    fn alpha_grid_replaces_the_neighbourhood_of_one() {
        let s = spec(AlphaGrid::Range(Range { start: 0.05, stop: 2.0, steps: 40 }), 1.0);
        let a = s.alphas().unwrap();
        assert_eq!(a.len(), 40);
        assert_eq!(a.iter().filter(|&&x| (x - 1.0).abs() < LIMIT_GAP).count(), 1);
        assert!(a.contains(&1.0));
        assert!(a.windows(2).all(|w| w[0] < w[1]));

        let s = spec(AlphaGrid::Range(Range { start: 0.5, stop: 1.5, steps: 3 }), 0.75);
        assert_eq!(s.alphas().unwrap(), vec![0.5, 1.5]);
    }

    #[test]
    fn grid_order_is_param_major() {
        let mut s = spec(AlphaGrid::Range(Range { start: 0.5, stop: 1.5, steps: 3 }), 1.0);
        s.measures = MeasureSet::Both;
        let g = s.grid(&OptimizerOptions::default()).unwrap();
        assert_eq!(g.len(), 3 * 3 * 2);
        assert_eq!(g[0].0, Some(0.0));
        assert_eq!(g[5].0, Some(0.0));
        assert_eq!(g[6].0, Some(0.5));
        assert_eq!((g[0].2, g[1].2), (Measure::C, Measure::Ctilde));
        assert!(g[2].1.is_limit());
    }

    #[test]
    fn invalid_specs_are_input_errors() {
        let mut s = spec(AlphaGrid::Fixed(0.5), 1.0);
        s.param = Some(Range { start: 0.0, stop: 2.0, steps: 3 });
        assert!(matches!(s.grid(&OptimizerOptions::default()), Err(CliError::Input(_))));
        s.param = Some(Range { start: 0.0, stop: 1.0, steps: 1 });
        assert!(matches!(s.grid(&OptimizerOptions::default()), Err(CliError::Input(_))));
        let s = spec(AlphaGrid::Fixed(0.5), 0.2);
        assert!(matches!(s.grid(&OptimizerOptions::default()), Err(CliError::Regime(_))));
    }
}
