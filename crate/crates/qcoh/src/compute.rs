//! Single evaluations of `C` or `C~`, shared by `compute` and `sweep`.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use qcoh_core::coherence::coherence_state_auto;
use qcoh_core::zoo::label;
use qcoh_core::{
    choi_state, coherence_channel, coherence_commutativity, make, oracle_min_diag, oracle_sup_pure, reference_value, AlphaZ, Certificate, ChannelKind,
    CoherenceResult, KrausChannel, Measure, OptimizerOptions, Regime,
};
use serde::Serialize;

use crate::channel_json::load_channel;
use crate::{CliError, CliResult};

/// A channel to evaluate: a named kind from the zoo or a channel file.
#[derive(Debug, Clone)]
pub struct Target {
    pub label: String,
    /// Set for named channels; enables the closed-form reference.
    pub kind: Option<ChannelKind>,
    pub param: Option<f64>,
    pub channel: KrausChannel,
}

impl Target {
    pub fn named(kind: ChannelKind, param: Option<f64>) -> CliResult<Self> {
        let named = make(kind, param)?;
        Ok(Self {
            label: label(kind, param),
            kind: Some(kind),
            param,
            channel: named.channel,
        })
    }

    /// `spec` is a kind name or else a path to a channel file.
    pub fn resolve(spec: &str, param: Option<f64>) -> CliResult<Self> {
        if let Ok(kind) = ChannelKind::from_str(spec) {
            return Self::named(kind, param);
        }
        let path = Path::new(spec);
        if !path.exists() {
            let names: Vec<&str> = ChannelKind::ALL.iter().map(|k| k.name()).collect();
            return Err(CliError::Input(format!(
                "'{spec}' is neither a channel kind ({}) nor an existing file",
                names.join(", ")
            )));
        }
        if param.is_some() {
            return Err(CliError::Input("--param applies to named channels only".into()));
        }
        Ok(Self {
            label: spec.to_string(),
            kind: None,
            param: None,
            channel: load_channel(path)?,
        })
    }
}

/// How a value is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Closed form for `C` at `z = 1`, the optimizers otherwise.
    Auto,
    /// The iterative optimizers, even when a closed form exists.
    Optimizer,
    /// Exhaustive grid search with `grid_n` points per direction.
    Oracle(usize),
}

/// Measures requested by a command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureSet {
    One(Measure),
    Both,
}

impl MeasureSet {
    pub fn measures(self) -> Vec<Measure> {
        match self {
            MeasureSet::One(m) => vec![m],
            MeasureSet::Both => vec![Measure::C, Measure::Ctilde],
        }
    }
}

impl FromStr for MeasureSet {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        if s == "both" {
            return Ok(MeasureSet::Both);
        }
        Measure::from_str(s).map(MeasureSet::One).map_err(|_| CliError::Input(format!("unknown measure '{s}' (expected C, Ctilde or both)")))
    }
}

/// `alpha = 1` selects the relative-entropy limit, which needs `z = 1`.
pub fn alpha_z(alpha: f64, z: f64) -> CliResult<AlphaZ> {
    Ok(AlphaZ::from_values(alpha, z)?)
}

pub fn regime_name(regime: Regime) -> &'static str {
    match regime {
        Regime::Regime1 => "regime-1",
        Regime::Regime2 => "regime-2",
        Regime::Regime3 => "regime-3",
        Regime::RelativeEntropyLimit => "relative-entropy-limit",
        Regime::OutsideKnownRegimes => "outside-known-regimes",
    }
}

pub fn evaluate(phi: &KrausChannel, measure: Measure, params: AlphaZ, strategy: Strategy, opts: &OptimizerOptions) -> CliResult<CoherenceResult> {
    params.ensure_known_regime(opts.allow_outside_regime)?;
    let r = match (measure, strategy) {
        (Measure::C, Strategy::Auto) => coherence_state_auto(choi_state(phi).state(), params, opts)?,
        (Measure::C, Strategy::Optimizer) => coherence_channel(phi, params, opts)?,
        (Measure::C, Strategy::Oracle(n)) => oracle_min_diag(phi, params, n)?,
        (Measure::Ctilde, Strategy::Auto | Strategy::Optimizer) => coherence_commutativity(phi, params, opts)?,
        (Measure::Ctilde, Strategy::Oracle(n)) => oracle_sup_pure(phi, params, n)?,
    };
    Ok(r)
}

/// `{:.16e}`: 17 significant digits, enough to round-trip any double.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Outcome of one evaluation together with its closed-form reference.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub channel: String,
    pub measure: &'static str,
    pub alpha: f64,
    pub alpha_limit: bool,
    pub z: f64,
    pub regime: &'static str,
    pub value: f64,
    pub method: &'static str,
    pub converged: bool,
    /// Diagonal weights for `C`; `[re, im]` amplitudes for `C~`.
    pub certificate: CertificateJson,
    pub reference: Option<f64>,
    pub gap: Option<f64>,
    pub within_tol: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum CertificateJson {
    Diagonal(Vec<f64>),
    Pure(Vec<[f64; 2]>),
}

impl From<&Certificate> for CertificateJson {
    fn from(c: &Certificate) -> Self {
        match c {
            Certificate::Diagonal(q) => CertificateJson::Diagonal(q.clone()),
            Certificate::Pure(psi) => CertificateJson::Pure(psi.amplitudes().iter().map(|a| [a.re, a.im]).collect()),
        }
    }
}

impl Report {
    pub fn new(target: &Target, measure: Measure, params: AlphaZ, result: &CoherenceResult, tol: f64) -> Self {
        let reference = target.kind.and_then(|k| reference_value(k, target.param, params, measure));
        let gap = reference.map(|r| if r == result.value { 0.0 } else { (result.value - r).abs() });
        Self {
            channel: target.label.clone(),
            measure: measure.name(),
            alpha: params.alpha_value(),
            alpha_limit: params.is_limit(),
            z: params.z(),
            regime: regime_name(params.regime()),
            value: result.value,
            method: result.method.name(),
            converged: result.converged,
            certificate: (&result.certificate).into(),
            reference,
            gap,
            within_tol: gap.map(|g| g <= tol),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let alpha = if self.alpha_limit { "1 (limit)".to_string() } else { self.alpha.to_string() };
        let certificate = match &self.certificate {
            CertificateJson::Diagonal(q) => format!("diagonal [{}]", q.iter().map(|x| format!("{x:.6e}")).collect::<Vec<_>>().join(", ")),
            CertificateJson::Pure(a) => format!(
                "pure [{}]",
                a.iter().map(|[re, im]| format!("{re:.6e}{im:+.6e}i")).collect::<Vec<_>>().join(", ")
            ),
        };
        let rows = [
            ("channel", self.channel.clone()),
            ("measure", self.measure.to_string()),
            ("alpha", alpha),
            ("z", self.z.to_string()),
            ("regime", self.regime.to_string()),
            ("value", fmt_f64(self.value)),
            ("method", self.method.to_string()),
            ("converged", self.converged.to_string()),
            ("certificate", certificate),
        ];
        for (k, v) in rows {
            let _ = writeln!(out, "{k:<12}{v}");
        }
        match (self.reference, self.gap, self.within_tol) {
            (Some(r), Some(g), Some(ok)) => {
                let _ = writeln!(out, "{:<12}{}", "reference", fmt_f64(r));
                let _ = writeln!(out, "{:<12}{} ({})", "gap", fmt_f64(g), if ok { "within tol" } else { "EXCEEDS tol" });
            }
            _ => {
                let _ = writeln!(out, "{:<12}none", "reference");
            }
        }
        out
    }
}
