//! Verification suites: closed forms, property checks, the comparison table
//! for the Pauli-type channels, and the `C >= C~` conjecture report.
//!
//! The property helpers return the worst violation found so that callers
//! pick their own thresholds.

use std::fmt::Write as _;

use qcoh_core::coherence::coherence_state_auto;
use qcoh_core::quantum::mixture;
use qcoh_core::quantum::random::{random_channel, random_density, seeded_rng};
use qcoh_core::zoo::{isotropic_hadamard_half, isotropic_hadamard_half_variant, label};
use qcoh_core::{
    c64, check_additivity, choi_state, coherence_channel_z1, coherence_commutativity, compose, d_alpha_z, dephase, dephasing_channel, f_alpha_z, make,
    oracle_sup_pure, reference_value, AlphaZ, Certificate, ChannelKind, ComplexMatrix, DensityMatrix, KrausChannel, Measure, OptimizerOptions, Regime,
};
use rand::Rng;
use rayon::prelude::*;

use crate::channel_json::channel_to_json;
use crate::compute::fmt_f64;
use crate::sweep::Range;
use crate::{CliError, CliResult};

/// Agreement expected from the iterative optimizers.
pub const OPT_TOL: f64 = 1e-5;
/// Grid of the pure-state oracle on qubits (polar x phase points).
pub const QUBIT_ORACLE_GRID: usize = 33;
/// Grid of the pure-state oracle on two qubits (six angles).
pub const TWO_QUBIT_ORACLE_GRID: usize = 6;
/// Points per parameter in the closed-form grids.
pub const FORMULA_STEPS: usize = 101;
/// Finite alphas of the closed-form grids; the limit is added separately.
pub const FORMULA_ALPHAS: [f64; 6] = [0.3, 0.5, 0.9, 1.0001, 1.5, 2.0];

pub const REGIMES: [Regime; 3] = [Regime::Regime1, Regime::Regime2, Regime::Regime3];

/// Random `(alpha, z)` inside `regime`.
pub fn sample_params<R: Rng>(rng: &mut R, regime: Regime) -> AlphaZ {
    let pair = match regime {
        Regime::Regime1 => {
            let a = rng.random_range(0.05..0.95);
            let lo = f64::max(a, 1.0 - a);
            AlphaZ::new(a, lo + rng.random_range(0.0..2.0))
        }
        Regime::Regime2 => {
            let a = rng.random_range(1.05..=2.0);
            let z = if rng.random::<bool>() { 1.0 } else { a / 2.0 };
            AlphaZ::new(a, z)
        }
        Regime::Regime3 => {
            let a = rng.random_range(1.05..3.0);
            AlphaZ::new(a, a)
        }
        Regime::RelativeEntropyLimit => Ok(AlphaZ::alpha_to_one()),
        Regime::OutsideKnownRegimes => AlphaZ::new(0.5, 0.2),
    };
    pair.expect("sampled inside the valid range")
}

/// Random qubit channel with one to four Kraus operators.
pub fn random_qubit_channel<R: Rng>(rng: &mut R) -> KrausChannel {
    let n = rng.random_range(1..=4);
    random_channel(rng, 2, 2, n)
}

/// Channel with Kraus operators `sqrt(P(b|i)) |b><i|`; its Choi state is
/// diagonal.
pub fn classical_channel<R: Rng>(rng: &mut R, d: usize) -> KrausChannel {
    let mut kraus = Vec::new();
    for i in 0..d {
        let w: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
        let total: f64 = w.iter().sum();
        for (b, wb) in w.iter().enumerate() {
            let mut k = ComplexMatrix::zeros(d, d);
            k[(b, i)] = c64((wb / total).sqrt(), 0.0);
            kraus.push(k);
        }
    }
    KrausChannel::new(kraus).expect("columns of a stochastic matrix")
}

/// `lhs - rhs`, where equal values (infinities included) give 0.
pub fn excess(lhs: f64, rhs: f64) -> f64 {
    if lhs == rhs {
        0.0
    } else {
        lhs - rhs
    }
}

fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

fn zoo_channel(kind: ChannelKind) -> KrausChannel {
    let param = kind.param_range().map(|(_, lo, hi)| 0.35 * lo + 0.65 * hi);
    make(kind, param).expect("parameter inside the range").channel
}

fn divergence(rho: &DensityMatrix, sigma: &DensityMatrix, p: AlphaZ) -> CliResult<f64> {
    Ok(d_alpha_z(rho, sigma, p)?.value)
}

// ---------------------------------------------------------------------------
// divergence properties

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Faithfulness {
    pub min_value: f64,
    /// Draws where `D < 1e-8` disagrees with `||rho - sigma||_F < 1e-6`.
    pub mismatches: usize,
}

/// A third of the draws compare a state with itself, a third with a
/// `1e-9` perturbation of itself, a third with an independent state.
pub fn divergence_faithfulness(seed: u64, regime: Regime, draws: usize) -> CliResult<Faithfulness> {
    let mut rng = seeded_rng(seed, 100 + regime as u64);
    let mut out = Faithfulness {
        min_value: f64::INFINITY,
        mismatches: 0,
    };
    for draw in 0..draws {
        let p = sample_params(&mut rng, regime);
        let dim = rng.random_range(2..=4);
        let rho = random_density(&mut rng, dim, dim);
        let sigma = match draw % 3 {
            0 => rho.clone(),
            1 => {
                let other = random_density(&mut rng, dim, dim);
                rho.mix(1.0 - 1e-9, &other)?
            }
            _ => {
                let rank = rng.random_range(1..=dim);
                random_density(&mut rng, dim, rank)
            }
        };
        let v = divergence(&rho, &sigma, p)?;
        let close = (rho.matrix() - sigma.matrix()).frobenius_norm() < 1e-6;
        out.min_value = out.min_value.min(v);
        if (v < 1e-8) != close {
            out.mismatches += 1;
        }
    }
    Ok(out)
}

/// Worst `D(L rho, L sigma) - D(rho, sigma)` over random channels `L`.
pub fn data_processing(seed: u64, regime: Regime, draws: usize) -> CliResult<f64> {
    let mut rng = seeded_rng(seed, 200 + regime as u64);
    let mut out = f64::NEG_INFINITY;
    for _ in 0..draws {
        let p = sample_params(&mut rng, regime);
        let (din, dout): (usize, usize) = (rng.random_range(2..=3), rng.random_range(2..=3));
        let n_kraus = rng.random_range(1..=4usize).max(din.div_ceil(dout));
        let lambda = random_channel(&mut rng, din, dout, n_kraus);
        let rho = random_density(&mut rng, din, din);
        let sigma = random_density(&mut rng, din, din);
        let before = divergence(&rho, &sigma, p)?;
        let after = divergence(&lambda.apply(&rho)?, &lambda.apply(&sigma)?, p)?;
        out = out.max(excess(after, before));
    }
    Ok(out)
}

struct ConvexDraw {
    p: AlphaZ,
    lambda: f64,
    states: [DensityMatrix; 4],
}

fn convex_draws(seed: u64, stream: u64, regime: Regime, draws: usize) -> Vec<ConvexDraw> {
    let mut rng = seeded_rng(seed, stream + regime as u64);
    (0..draws)
        .map(|_| {
            let p = sample_params(&mut rng, regime);
            let dim = rng.random_range(2..=3);
            let lambda = rng.random();
            let states = [(); 4].map(|_| random_density(&mut rng, dim, dim));
            ConvexDraw { p, lambda, states }
        })
        .collect()
}

/// Worst `D(mix rho, mix sigma) - [lambda D(rho1, sigma1) + (1 - lambda) D(rho2, sigma2)]`.
pub fn joint_convexity(seed: u64, regime: Regime, draws: usize) -> CliResult<f64> {
    let mut out = f64::NEG_INFINITY;
    for d in convex_draws(seed, 300, regime, draws) {
        let [r1, r2, s1, s2] = &d.states;
        let l = d.lambda;
        let lhs = divergence(&r1.mix(l, r2)?, &s1.mix(l, s2)?, d.p)?;
        let rhs = l * divergence(r1, s1, d.p)? + (1.0 - l) * divergence(r2, s2, d.p)?;
        out = out.max(excess(lhs, rhs));
    }
    Ok(out)
}

/// Same draws as [`joint_convexity`], applied to the trace functional `f`,
/// which is jointly concave for `alpha < 1` and jointly convex for
/// `alpha > 1`.
pub fn trace_functional_convexity(seed: u64, regime: Regime, draws: usize) -> CliResult<f64> {
    let mut out = f64::NEG_INFINITY;
    for d in convex_draws(seed, 300, regime, draws) {
        let [r1, r2, s1, s2] = &d.states;
        let l = d.lambda;
        let f = |a: &DensityMatrix, b: &DensityMatrix| f_alpha_z(a, b, d.p);
        let sign = if d.p.alpha_value() > 1.0 { 1.0 } else { -1.0 };
        let gap = f(&r1.mix(l, r2)?, &s1.mix(l, s2)?)? - l * f(r1, s1)? - (1.0 - l) * f(r2, s2)?;
        out = out.max(sign * gap);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// coherence properties

/// Channels where `C < 1e-8` disagrees with a diagonal Choi state; half
/// the draws are classical channels. Each channel is evaluated at
/// `(1/2, 1)` and `(0.7, 0.7)`.
pub fn coherence_faithfulness(seed: u64, channels: usize, opts: &OptimizerOptions) -> CliResult<usize> {
    let mut rng = seeded_rng(seed, 400);
    let mut list: Vec<KrausChannel> = (0..channels)
        .map(|k| if k % 2 == 0 { classical_channel(&mut rng, 2) } else { random_qubit_channel(&mut rng) })
        .collect();
    list.extend(ChannelKind::ALL.iter().map(|&k| zoo_channel(k)));
    let params = [AlphaZ::new(0.5, 1.0)?, AlphaZ::new(0.7, 0.7)?];
    let counts: CliResult<Vec<usize>> = list
        .par_iter()
        .map(|phi| {
            let m = choi_state(phi);
            let diagonal = m.is_diagonal(1e-8);
            let mut bad = 0;
            for p in params {
                let c = coherence_state_auto(m.state(), p, opts)?.value;
                if (c < 1e-8) != diagonal {
                    bad += 1;
                }
            }
            Ok(bad)
        })
        .collect();
    Ok(counts?.into_iter().sum())
}

/// Worst additivity gap over random block-diagonal constructions.
pub fn additivity(seed: u64, params: AlphaZ, constructions: usize, opts: &OptimizerOptions) -> CliResult<f64> {
    let mut rng = seeded_rng(seed, 500);
    let cases: Vec<(KrausChannel, KrausChannel, f64)> = (0..constructions)
        .map(|_| {
            let a = random_qubit_channel(&mut rng);
            let b = random_channel(&mut rng, 2, 2, 3);
            (a, b, rng.random_range(0.05..0.95))
        })
        .collect();
    let gaps: CliResult<Vec<f64>> = cases
        .par_iter()
        .map(|(a, b, p1)| Ok(check_additivity(a, b, *p1, params, opts)?.gap))
        .collect();
    Ok(worst(gaps?))
}

fn commutator_value(phi: &KrausChannel, rho: &DensityMatrix, p: AlphaZ) -> CliResult<f64> {
    let first = phi.apply(&dephase(rho))?;
    let second = dephase(&phi.apply(rho)?);
    divergence(&first, &second, p)
}

/// Worst excess of a mixed input over the pure-state oracle, over random
/// qubit channels.
pub fn extremality(seed: u64, params: AlphaZ, channels: usize, states: usize) -> CliResult<f64> {
    let mut rng = seeded_rng(seed, 600);
    let cases: Vec<(KrausChannel, Vec<DensityMatrix>)> = (0..channels)
        .map(|_| {
            let phi = random_qubit_channel(&mut rng);
            let rhos = (0..states).map(|_| random_density(&mut rng, 2, 2)).collect();
            (phi, rhos)
        })
        .collect();
    let per: CliResult<Vec<f64>> = cases
        .par_iter()
        .map(|(phi, rhos)| {
            let sup = oracle_sup_pure(phi, params, QUBIT_ORACLE_GRID)?.value;
            let mut out = f64::NEG_INFINITY;
            for rho in rhos {
                out = out.max(excess(commutator_value(phi, rho, params)?, sup));
            }
            Ok(out)
        })
        .collect();
    Ok(worst(per?))
}

/// Channels with `C~ = 0` used as free operations.
pub fn free_channels() -> Vec<(String, KrausChannel)> {
    let mut out = vec![("dephasing".to_string(), dephasing_channel(2))];
    for (kind, p) in [
        (ChannelKind::PhaseFlip, Some(0.3)),
        (ChannelKind::Depolarizing, Some(0.4)),
        (ChannelKind::AmplitudeDamping, Some(0.6)),
        (ChannelKind::UnitaryS, None),
        (ChannelKind::UnitaryT, None),
    ] {
        out.push((label(kind, p), make(kind, p).expect("inside the range").channel));
    }
    out
}

/// Worst `C~(phi0 o phi) - C~(phi)` and `C~(phi o phi0) - C~(phi)` over
/// random `phi` and the [`free_channels`].
pub fn monotonicity(seed: u64, params: AlphaZ, channels: usize, opts: &OptimizerOptions) -> CliResult<f64> {
    let mut rng = seeded_rng(seed, 700);
    let list: Vec<KrausChannel> = (0..channels).map(|_| random_qubit_channel(&mut rng)).collect();
    let free = free_channels();
    let per: CliResult<Vec<f64>> = list
        .par_iter()
        .map(|phi| {
            let c = coherence_commutativity(phi, params, opts)?.value;
            let mut out = f64::NEG_INFINITY;
            for (_, phi0) in &free {
                for composed in [compose(phi0, phi)?, compose(phi, phi0)?] {
                    out = out.max(excess(coherence_commutativity(&composed, params, opts)?.value, c));
                }
            }
            Ok(out)
        })
        .collect();
    Ok(worst(per?))
}

/// Worst `C~(sum l_m phi_m) - sum l_m C~(phi_m)` over random mixtures of
/// three qubit channels.
pub fn commutativity_convexity(seed: u64, params: AlphaZ, mixtures: usize, opts: &OptimizerOptions) -> CliResult<f64> {
    let mut rng = seeded_rng(seed, 800);
    let cases: Vec<Vec<(f64, KrausChannel)>> = (0..mixtures)
        .map(|_| {
            let parts: Vec<(f64, KrausChannel)> = (0..3).map(|_| (rng.random::<f64>(), random_qubit_channel(&mut rng))).collect();
            let total: f64 = parts.iter().map(|(w, _)| w).sum();
            parts.into_iter().map(|(w, c)| (w / total, c)).collect()
        })
        .collect();
    let per: CliResult<Vec<f64>> = cases
        .par_iter()
        .map(|parts| {
            let weighted: Vec<(f64, &KrausChannel)> = parts.iter().map(|(w, c)| (*w, c)).collect();
            let lhs = coherence_commutativity(&mixture(&weighted)?, params, opts)?.value;
            let mut rhs = 0.0;
            for (w, c) in &weighted {
                rhs += w * coherence_commutativity(c, params, opts)?.value;
            }
            Ok(excess(lhs, rhs))
        })
        .collect();
    Ok(worst(per?))
}

// ---------------------------------------------------------------------------
// reports

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub checks: Vec<Check>,
    /// Free-form output (tables, reported quantities).
    pub lines: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &'static str) -> Self {
        Self {
            suite,
            ..Self::default()
        }
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    /// `worst <= limit`, printing both.
    fn bound(&mut self, name: impl Into<String>, worst: f64, limit: f64) {
        self.check(name, worst <= limit, format!("worst {worst:.3e}, limit {limit:.0e}"));
    }

    fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("== {} ==\n", self.suite);
        for l in &self.lines {
            let _ = writeln!(out, "{l}");
        }
        for c in &self.checks {
            let _ = writeln!(out, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
        let failed = self.failures().len();
        let _ = writeln!(out, "{}: {} passed, {failed} failed", self.suite, self.checks.len() - failed);
        out
    }
}

/// Fails with a [`CliError::Verification`] naming every failed check.
pub fn ensure_passed(reports: &[SuiteReport]) -> CliResult<()> {
    let failed: Vec<String> = reports
        .iter()
        .flat_map(|r| r.failures().into_iter().map(move |c| format!("{}/{}: {}", r.suite, c.name, c.detail)))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(format!("{} check(s) failed:\n  {}", failed.len(), failed.join("\n  "))))
    }
}

fn param_grid(kind: ChannelKind) -> Vec<Option<f64>> {
    match kind.param_range() {
        Some((_, start, stop)) => Range {
            start,
            stop,
            steps: FORMULA_STEPS,
        }
        .points()
        .into_iter()
        .map(Some)
        .collect(),
        None => vec![None],
    }
}

/// Sample of `(alpha, z)` pairs across the regimes.
pub fn regime_sample() -> Vec<AlphaZ> {
    [(0.5, 1.0), (0.7, 0.7), (0.3, 1.2), (1.5, 1.0), (1.5, 0.75), (2.0, 2.0)]
        .into_iter()
        .map(|(a, z)| AlphaZ::new(a, z).expect("valid pair"))
        .chain([AlphaZ::alpha_to_one()])
        .collect()
}

/// Closed forms against the crate's evaluation of every named channel.
pub fn formulas(opts: &OptimizerOptions, tol: f64) -> CliResult<SuiteReport> {
    let mut report = SuiteReport::new("formulas");

    // C at z = 1 against the channel-specific closed forms
    for kind in ChannelKind::ALL {
        let mut alphas: Vec<AlphaZ> = FORMULA_ALPHAS.iter().map(|&a| AlphaZ::new(a, 1.0).expect("valid")).collect();
        alphas.push(AlphaZ::alpha_to_one());
        let mut gap: f64 = 0.0;
        let mut points = 0;
        for x in param_grid(kind) {
            let phi = make(kind, x)?.channel;
            for &p in &alphas {
                let Some(expect) = reference_value(kind, x, p, Measure::C) else { continue };
                let got = coherence_channel_z1(&phi, p.alpha())?.value;
                gap = gap.max(excess(got, expect).abs());
                points += 1;
            }
        }
        if points > 0 {
            report.check(format!("C closed form, {kind}"), gap <= tol, format!("max gap {gap:.3e} over {points} points, tol {tol:.0e}"));
        }
    }

    // the alpha = 1/2 closed form of the isotropic Hadamard channel
    let half = AlphaZ::new(0.5, 1.0)?;
    let ts: Vec<f64> = param_grid(ChannelKind::IsotropicHadamard).into_iter().flatten().collect();
    let mut gap: f64 = 0.0;
    for &t in &ts {
        let general = reference_value(ChannelKind::IsotropicHadamard, Some(t), half, Measure::C).expect("defined at z = 1");
        gap = gap.max((isotropic_hadamard_half(t) - general).abs());
    }
    report.check("isotropic-hadamard alpha = 1/2 special form", gap <= tol, format!("max gap {gap:.3e} over {} points", ts.len()));
    let (mut variant_gap, mut variant_points): (f64, usize) = (0.0, 0);
    for &t in ts.iter().filter(|&&t| t <= 1.0 / 3.0) {
        if let Some(v) = isotropic_hadamard_half_variant(t) {
            variant_gap = variant_gap.max((v - isotropic_hadamard_half(t)).abs());
            variant_points += 1;
        }
    }
    report.line(format!(
        "note: the variant with radicand (1 - t)(1 - 3t) differs from the alpha = 1/2 closed form by up to {variant_gap:.3e} \
         over {variant_points} points with t <= 1/3; it agrees only at t = 0"
    ));

    // C~ vanishes on the channels that commute with dephasing
    let vanishing = [
        (ChannelKind::PhaseFlip, vec![Some(0.2), Some(0.5), Some(0.8)]),
        (ChannelKind::Depolarizing, vec![Some(0.2), Some(0.5), Some(0.8)]),
        (ChannelKind::AmplitudeDamping, vec![Some(0.2), Some(0.5), Some(0.8)]),
        (ChannelKind::UnitaryS, vec![None]),
        (ChannelKind::UnitaryT, vec![None]),
        (ChannelKind::SsTensorGate, vec![None]),
        (ChannelKind::TtTensorGate, vec![None]),
    ];
    let sample = regime_sample();
    for (kind, params) in vanishing {
        let cases: Vec<(Option<f64>, AlphaZ)> = params.iter().flat_map(|&x| sample.iter().map(move |&p| (x, p))).collect();
        let values: CliResult<Vec<f64>> = cases
            .par_iter()
            .map(|&(x, p)| {
                let phi = make(kind, x)?.channel;
                let grid = if phi.input_dim() == 2 { QUBIT_ORACLE_GRID } else { TWO_QUBIT_ORACLE_GRID };
                Ok(oracle_sup_pure(&phi, p, grid)?.value)
            })
            .collect();
        let w = worst(values?);
        report.check(format!("C~ = 0 (pure-state oracle), {kind}"), w <= tol, format!("max {w:.3e} over {} points", cases.len()));
    }

    // C~ of the isotropic Hadamard channel at (1/2, 1)
    let ts = Range {
        start: -1.0 / 3.0,
        stop: 1.0,
        steps: 11,
    }
    .points();
    let gaps: CliResult<Vec<f64>> = ts
        .par_iter()
        .map(|&t| {
            let phi = make(ChannelKind::IsotropicHadamard, Some(t))?.channel;
            let got = coherence_commutativity(&phi, half, opts)?.value;
            Ok((got - (1.0 - (1.0 - t * t).sqrt())).abs())
        })
        .collect();
    let w = worst(gaps?);
    report.check("C~ isotropic-hadamard at (1/2, 1)", w <= OPT_TOL, format!("max gap {w:.3e} over {} points, tol {OPT_TOL:.0e}", ts.len()));
    Ok(report)
}

/// Divergence and coherence properties at the given sample sizes.
#[derive(Debug, Clone, Copy)]
pub struct PropertySizes {
    pub divergence_draws: usize,
    pub processing_draws: usize,
    pub faithful_channels: usize,
    pub additivity: usize,
    pub extremal_channels: usize,
    pub extremal_states: usize,
    pub monotone_channels: usize,
    pub mixtures: usize,
}

impl Default for PropertySizes {
    fn default() -> Self {
        Self {
            divergence_draws: 500,
            processing_draws: 200,
            faithful_channels: 200,
            additivity: 50,
            extremal_channels: 50,
            extremal_states: 500,
            monotone_channels: 50,
            mixtures: 20,
        }
    }
}

/// Parameter pairs for the coherence properties, one per regime.
pub fn coherence_sample() -> Vec<AlphaZ> {
    [(0.5, 1.0), (0.7, 0.7), (1.5, 0.75), (2.0, 2.0)]
        .into_iter()
        .map(|(a, z)| AlphaZ::new(a, z).expect("valid pair"))
        .collect()
}

pub fn properties(opts: &OptimizerOptions, sizes: PropertySizes) -> CliResult<SuiteReport> {
    let seed = opts.seed;
    let mut report = SuiteReport::new("properties");
    let n = sizes.divergence_draws;
    for regime in REGIMES {
        let f = divergence_faithfulness(seed, regime, n)?;
        report.check(
            format!("D nonnegative and faithful, {regime:?}"),
            f.min_value >= -1e-9 && f.mismatches == 0,
            format!("min {:.3e}, {} mismatches over {n} draws", f.min_value, f.mismatches),
        );
        report.bound(format!("D data processing, {regime:?}"), data_processing(seed, regime, sizes.processing_draws)?, 1e-8);
        report.bound(format!("f joint concavity/convexity, {regime:?}"), trace_functional_convexity(seed, regime, n)?, 1e-10);
        let jc = joint_convexity(seed, regime, n)?;
        report.line(format!("note: D joint convexity, {regime:?}: worst excess {jc:.3e} over {n} draws (not asserted: it fails for some state pairs, e.g. classical ones at alpha = 2)"));
    }
    let mismatches = coherence_faithfulness(seed, sizes.faithful_channels, opts)?;
    report.check("C faithful", mismatches == 0, format!("{mismatches} mismatches"));
    for p in [AlphaZ::new(0.7, 0.7)?, AlphaZ::new(1.5, 0.75)?, AlphaZ::new(1.5, 1.5)?, AlphaZ::alpha_to_one()] {
        report.bound(format!("C additivity, {}", pair(p)), additivity(seed, p, sizes.additivity, opts)?, 1e-6);
    }
    for p in coherence_sample() {
        let name = pair(p);
        report.bound(
            format!("C~ pure inputs suffice, {name}"),
            extremality(seed, p, sizes.extremal_channels, sizes.extremal_states)?,
            1e-7,
        );
        report.bound(format!("C~ monotone under free channels, {name}"), monotonicity(seed, p, sizes.monotone_channels, opts)?, 1e-7);
        report.bound(format!("C~ convex, {name}"), commutativity_convexity(seed, p, sizes.mixtures, opts)?, 1e-7);
    }
    Ok(report)
}

fn pair(p: AlphaZ) -> String {
    if p.is_limit() {
        "alpha -> 1".to_string()
    } else {
        format!("(alpha, z) = ({}, {})", p.alpha_value(), p.z())
    }
}

/// One row of the comparison table.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub kind: ChannelKind,
    pub limit: bool,
    pub p_max: f64,
    pub max: f64,
    pub p_min: f64,
    pub min: f64,
    /// Largest `C~` over the parameter grid and [`regime_sample`].
    pub ctilde_max: f64,
    /// Every parameter where the maximum is attained (to 1e-12).
    pub max_ties: Vec<f64>,
}

/// Points in the `p` scan of [`table_row`].
pub const TABLE_STEPS: usize = 1001;

/// Scans `p` on a grid of [`TABLE_STEPS`] points. The smallest maximizer
/// and minimizer are reported.
pub fn table_row(kind: ChannelKind, limit: bool, opts: &OptimizerOptions) -> CliResult<TableRow> {
    let alpha = if limit { 1.0 } else { 0.5 };
    let ps: Vec<f64> = (0..TABLE_STEPS).map(|k| k as f64 / (TABLE_STEPS - 1) as f64).collect();
    let values: Vec<f64> = ps
        .iter()
        .map(|&p| Ok(coherence_channel_z1(&make(kind, Some(p))?.channel, alpha)?.value))
        .collect::<CliResult<_>>()?;
    let max = worst(values.iter().copied());
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let ties: Vec<f64> = ps.iter().zip(&values).filter(|(_, v)| **v >= max - 1e-12).map(|(p, _)| *p).collect();
    let p_min = ps.iter().zip(&values).find(|(_, v)| **v <= min + 1e-12).map(|(p, _)| *p).expect("nonempty grid");

    let coarse: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
    let cases: Vec<(f64, AlphaZ)> = coarse.iter().flat_map(|&p| regime_sample().into_iter().map(move |a| (p, a))).collect();
    let ctilde: CliResult<Vec<f64>> = cases
        .par_iter()
        .map(|&(p, a)| Ok(coherence_commutativity(&make(kind, Some(p))?.channel, a, opts)?.value))
        .collect();
    Ok(TableRow {
        kind,
        limit,
        p_max: ties[0],
        max,
        p_min,
        min,
        ctilde_max: worst(ctilde?),
        max_ties: ties,
    })
}

/// Expected values: `(p_max, max, p_min, min)` per channel, for the limit
/// (`max = ln 2`) and for `alpha = 1/2` (`max = 1`); `C~ = 0` throughout.
pub fn table_expected(kind: ChannelKind, limit: bool) -> (f64, f64, f64, f64) {
    let max = if limit { std::f64::consts::LN_2 } else { 1.0 };
    let p_min = if kind == ChannelKind::PhaseFlip { 0.5 } else { 1.0 };
    (0.0, max, p_min, 0.0)
}

pub const TABLE_KINDS: [ChannelKind; 3] = [ChannelKind::PhaseFlip, ChannelKind::Depolarizing, ChannelKind::AmplitudeDamping];

pub fn table1(opts: &OptimizerOptions) -> CliResult<SuiteReport> {
    const TOL: f64 = 1e-8;
    let mut report = SuiteReport::new("table1");
    for limit in [true, false] {
        report.line(format!(
            "{:<18} {:<6} {:<8} {:<24} {:<8} {:<24} {}",
            "channel",
            "alpha",
            "p_max",
            "max C",
            "p_min",
            "min C",
            "max C~"
        ));
        for kind in TABLE_KINDS {
            let row = table_row(kind, limit, opts)?;
            let alpha = if limit { "->1" } else { "1/2" };
            report.line(format!(
                "{:<18} {:<6} {:<8} {:<24} {:<8} {:<24} {}",
                kind.name(),
                alpha,
                row.p_max,
                fmt_f64(row.max),
                row.p_min,
                fmt_f64(row.min),
                fmt_f64(row.ctilde_max)
            ));
            if row.max_ties.len() > 1 {
                report.line(format!("  note: the maximum is attained at p = {:?}; the smallest is listed", row.max_ties));
            }
            let (p_max, max, p_min, min) = table_expected(kind, limit);
            let cells = [
                ("p_max", row.p_max, p_max),
                ("max", row.max, max),
                ("p_min", row.p_min, p_min),
                ("min", row.min, min),
                ("C~", row.ctilde_max, 0.0),
            ];
            for (cell, got, expect) in cells {
                let gap = (got - expect).abs();
                report.check(
                    format!("{} alpha {alpha} {cell}", kind.name()),
                    gap <= TOL,
                    format!("{} vs {}, gap {gap:.3e}", fmt_f64(got), fmt_f64(expect)),
                );
            }
        }
    }
    Ok(report)
}

/// Minimum of `C_{a,1} - C~_{a,1}` over a channel sample.
#[derive(Debug, Clone)]
pub struct ConjectureStat {
    pub alpha: f64,
    pub min_gap: f64,
    /// Index of the minimizing channel in the sample.
    pub argmin: usize,
    pub c: f64,
    pub ctilde: f64,
    /// Channels with `C - C~ < -tol`.
    pub negative: usize,
    pub channel: KrausChannel,
}

/// Channel `k` of the seeded sample, reproducible on its own.
pub fn conjecture_channel(seed: u64, k: usize) -> KrausChannel {
    random_qubit_channel(&mut seeded_rng(seed, 10_000 + k as u64))
}

pub fn conjecture_gap(channels: &[KrausChannel], alpha: f64, tol: f64, opts: &OptimizerOptions) -> CliResult<ConjectureStat> {
    let p = AlphaZ::from_values(alpha, 1.0)?;
    let pairs: CliResult<Vec<(f64, f64)>> = channels
        .par_iter()
        .map(|phi| Ok((coherence_channel_z1(phi, alpha)?.value, coherence_commutativity(phi, p, opts)?.value)))
        .collect();
    let pairs = pairs?;
    let gaps: Vec<f64> = pairs.iter().map(|(c, t)| excess(*c, *t)).collect();
    let argmin = (0..gaps.len()).min_by(|&a, &b| gaps[a].total_cmp(&gaps[b])).expect("nonempty sample");
    Ok(ConjectureStat {
        alpha,
        min_gap: gaps[argmin],
        argmin,
        c: pairs[argmin].0,
        ctilde: pairs[argmin].1,
        negative: gaps.iter().filter(|g| **g < -tol).count(),
        channel: channels[argmin].clone(),
    })
}

pub const CONJECTURE_ALPHAS: [f64; 2] = [0.5, 1.5];

/// Reported, never asserted. Gaps above `-tol` count as rounding.
pub fn conjecture(opts: &OptimizerOptions, count: usize, tol: f64) -> CliResult<SuiteReport> {
    let mut report = SuiteReport::new("conjecture");
    let sample: Vec<KrausChannel> = (0..count).map(|k| conjecture_channel(opts.seed, k)).collect();
    let zoo: Vec<(String, KrausChannel)> = ChannelKind::ALL
        .iter()
        .filter(|k| !matches!(k, ChannelKind::SsTensorGate | ChannelKind::TtTensorGate))
        .map(|&k| {
            let x = k.param_range().map(|(_, lo, hi)| 0.35 * lo + 0.65 * hi);
            (label(k, x), make(k, x).expect("inside the range").channel)
        })
        .collect();
    for alpha in CONJECTURE_ALPHAS {
        let s = conjecture_gap(&sample, alpha, tol, opts)?;
        report.line(format!(
            "alpha = {alpha}: min C - C~ = {} over {count} random qubit channels (seed {}, channel #{}: C = {}, C~ = {}); {} below -{tol:.0e}",
            fmt_f64(s.min_gap),
            opts.seed,
            s.argmin,
            fmt_f64(s.c),
            fmt_f64(s.ctilde),
            s.negative
        ));
        if s.min_gap < -tol {
            report.line(format!("!!! COUNTEREXAMPLE CANDIDATE to C >= C~ at alpha = {alpha}: channel #{}", s.argmin));
            report.line(channel_to_json(&s.channel));
        }
        let named: Vec<KrausChannel> = zoo.iter().map(|(_, c)| c.clone()).collect();
        let z = conjecture_gap(&named, alpha, tol, opts)?;
        report.line(format!(
            "alpha = {alpha}: min C - C~ = {} over the named qubit channels (at {}: C = {}, C~ = {})",
            fmt_f64(z.min_gap),
            zoo[z.argmin].0,
            fmt_f64(z.c),
            fmt_f64(z.ctilde)
        ));
        if z.min_gap < -tol {
            report.line(format!("!!! COUNTEREXAMPLE to C >= C~ at alpha = {alpha}: {}", zoo[z.argmin].0));
        }
    }
    Ok(report)
}

/// Certificate of a `C~` evaluation is a basis state (up to `tol`).
pub fn is_classical_certificate(c: &Certificate, tol: f64) -> bool {
    match c {
        Certificate::Pure(psi) => psi.amplitudes().iter().any(|a| (a.norm() - 1.0).abs() < tol),
        Certificate::Diagonal(_) => false,
    }
}
