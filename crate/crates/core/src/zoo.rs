//! Named channels and closed-form values of their coherence.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use core::fmt;
use core::str::FromStr;

#[allow(unused_imports)] // f64 math without std
use num_traits::Float;

use crate::entropy::{Alpha, AlphaZ};
use crate::error::{Error, Result};
use crate::linalg::{c64, ComplexMatrix};
use crate::quantum::{choi_state, dephasing_channel, KrausChannel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    PhaseFlip,
    Depolarizing,
    AmplitudeDamping,
    /// `t H rho H + (1 - t) I / 2`, `t in [-1/3, 1]`.
    IsotropicHadamard,
    UnitaryH,
    UnitaryS,
    UnitaryT,
    /// `S (x) S` on two qubits.
    SsTensorGate,
    /// `T (x) T` on two qubits.
    TtTensorGate,
    /// Complete dephasing of a qubit.
    Dephasing,
    /// Qubit identity.
    Identity,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 11] = [
        ChannelKind::PhaseFlip,
        ChannelKind::Depolarizing,
        ChannelKind::AmplitudeDamping,
        ChannelKind::IsotropicHadamard,
        ChannelKind::UnitaryH,
        ChannelKind::UnitaryS,
        ChannelKind::UnitaryT,
        ChannelKind::SsTensorGate,
        ChannelKind::TtTensorGate,
        ChannelKind::Dephasing,
        ChannelKind::Identity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChannelKind::PhaseFlip => "phase-flip",
            ChannelKind::Depolarizing => "depolarizing",
            ChannelKind::AmplitudeDamping => "amplitude-damping",
            ChannelKind::IsotropicHadamard => "isotropic-hadamard",
            ChannelKind::UnitaryH => "hadamard",
            ChannelKind::UnitaryS => "s-gate",
            ChannelKind::UnitaryT => "t-gate",
            ChannelKind::SsTensorGate => "ss",
            ChannelKind::TtTensorGate => "tt",
            ChannelKind::Dephasing => "dephasing",
            ChannelKind::Identity => "identity",
        }
    }

    /// Name and closed range of the parameter, if the kind takes one.
    pub fn param_range(self) -> Option<(&'static str, f64, f64)> {
        match self {
            ChannelKind::PhaseFlip | ChannelKind::Depolarizing | ChannelKind::AmplitudeDamping => Some(("p", 0.0, 1.0)),
            ChannelKind::IsotropicHadamard => Some(("t", -1.0 / 3.0, 1.0)),
            _ => None,
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ChannelKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidChannel(format!("unknown channel kind '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedChannel {
    pub kind: ChannelKind,
    pub param: Option<f64>,
    pub channel: KrausChannel,
}

fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).expect("2x2")
}

fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_vec(2, 2, vec![c64(0.0, 0.0), c64(0.0, -1.0), c64(0.0, 1.0), c64(0.0, 0.0)]).expect("2x2")
}

fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_diagonal(&[1.0, -1.0])
}

pub fn hadamard_gate() -> ComplexMatrix {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_real(2, 2, &[s, s, s, -s]).expect("2x2")
}

pub fn s_gate() -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&[c64(1.0, 0.0), c64(0.0, 1.0)])
}

pub fn t_gate() -> ComplexMatrix {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_diagonal(&[c64(1.0, 0.0), c64(h, h)])
}

fn isotropic_hadamard(t: f64) -> Result<KrausChannel> {
    if t >= 0.0 {
        let w = (1.0 - t).sqrt() / 2.0;
        KrausChannel::new(vec![
            hadamard_gate().scale(t.sqrt()),
            pauli_x().scale(w),
            pauli_y().scale(w),
            pauli_z().scale(w),
            ComplexMatrix::identity(2).scale(w),
        ])
    } else {
        // sqrt(t) has no real Kraus form below zero; go through the Choi
        // state t M_H + (1 - t) I / 4, which stays positive for t >= -1/3
        let m_h = choi_state(&KrausChannel::unitary(hadamard_gate())?).matrix().clone();
        let choi = &m_h.scale(t) + &ComplexMatrix::identity(4).scale((1.0 - t) / 4.0);
        KrausChannel::from_choi(&choi, 2, 2)
    }
}

/// Builds a named channel. Parametrized kinds require `param` inside their
/// range; the others reject one.
pub fn make(kind: ChannelKind, param: Option<f64>) -> Result<NamedChannel> {
    let value = match (kind.param_range(), param) {
        (Some((name, min, max)), Some(v)) => {
            if !(v >= min && v <= max) {
                return Err(Error::ParamOutOfRange { kind: name, value: v, min, max });
            }
            v
        }
        (Some((name, _, _)), None) => return Err(Error::MissingParam(name)),
        (None, Some(v)) => {
            return Err(Error::InvalidParameters(format!("channel '{kind}' takes no parameter, got {v}")));
        }
        (None, None) => 0.0,
    };
    let p = value;
    let channel = match kind {
        ChannelKind::PhaseFlip => KrausChannel::new(vec![ComplexMatrix::identity(2).scale(p.sqrt()), pauli_z().scale((1.0 - p).sqrt())])?,
        ChannelKind::Depolarizing => {
            let w = p.sqrt() / 2.0;
            KrausChannel::new(vec![
                ComplexMatrix::identity(2).scale((1.0 - 0.75 * p).sqrt()),
                pauli_x().scale(w),
                pauli_y().scale(w),
                pauli_z().scale(w),
            ])?
        }
        ChannelKind::AmplitudeDamping => {
            let k1 = ComplexMatrix::from_real_diagonal(&[1.0, (1.0 - p).sqrt()]);
            let k2 = ComplexMatrix::from_real(2, 2, &[0.0, p.sqrt(), 0.0, 0.0])?;
            KrausChannel::new(vec![k1, k2])?
        }
        ChannelKind::IsotropicHadamard => isotropic_hadamard(p)?,
        ChannelKind::UnitaryH => KrausChannel::unitary(hadamard_gate())?,
        ChannelKind::UnitaryS => KrausChannel::unitary(s_gate())?,
        ChannelKind::UnitaryT => KrausChannel::unitary(t_gate())?,
        ChannelKind::SsTensorGate => KrausChannel::unitary(s_gate().tensor(&s_gate()))?,
        ChannelKind::TtTensorGate => KrausChannel::unitary(t_gate().tensor(&t_gate()))?,
        ChannelKind::Dephasing => dephasing_channel(2),
        ChannelKind::Identity => KrausChannel::identity(2),
    };
    Ok(NamedChannel { kind, param, channel })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    /// Minimum distance of the Choi state to the diagonal states.
    C,
    /// Commutativity with complete dephasing.
    Ctilde,
}

impl Measure {
    pub fn name(self) -> &'static str {
        match self {
            Measure::C => "C",
            Measure::Ctilde => "Ctilde",
        }
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "C" | "c" => Ok(Measure::C),
            "Ctilde" | "ctilde" | "C~" => Ok(Measure::Ctilde),
            other => Err(Error::InvalidParameters(format!("unknown measure '{other}'"))),
        }
    }
}

/// `x ln x` with `0 ln 0 = 0`.
fn xlnx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// `x^a` with `0^a = 0`.
fn pow0(x: f64, a: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x.powf(a)
    }
}

fn c_closed_form(kind: ChannelKind, x: f64, a: f64) -> Option<f64> {
    let inv = 1.0 / a;
    let num = match kind {
        ChannelKind::PhaseFlip => 2f64.powf(1.0 - inv) * (pow0(x, a) + pow0(1.0 - x, a)).powf(inv) - 1.0,
        ChannelKind::Depolarizing => {
            2.0 * (pow0(x, a) / 2f64.powf(2.0 * a + 1.0) + pow0(1.0 - 0.75 * x, a) / 2.0).powf(inv) + x / 2.0 - 1.0
        }
        ChannelKind::AmplitudeDamping => (0.5 + 0.5 * pow0(1.0 - x, inv)) * (2.0 - x).powf(1.0 - inv) + x / 2.0 - 1.0,
        ChannelKind::IsotropicHadamard => 4f64.powf(-inv) * (3.0 * pow0(1.0 - x, a) + pow0(1.0 + 3.0 * x, a)).powf(inv) - 1.0,
        ChannelKind::UnitaryH | ChannelKind::SsTensorGate | ChannelKind::TtTensorGate => 4f64.powf(1.0 - inv) - 1.0,
        ChannelKind::UnitaryS | ChannelKind::UnitaryT => 2f64.powf(1.0 - inv) - 1.0,
        ChannelKind::Dephasing | ChannelKind::Identity => return None,
    };
    Some(num / (a - 1.0))
}

fn c_limit(kind: ChannelKind, x: f64) -> Option<f64> {
    let ln2 = core::f64::consts::LN_2;
    Some(match kind {
        ChannelKind::PhaseFlip => ln2 + xlnx(x) + xlnx(1.0 - x),
        ChannelKind::Depolarizing => 0.25 * (xlnx(4.0 - 3.0 * x) - 2.0 * xlnx(2.0 - x) + xlnx(x)),
        ChannelKind::AmplitudeDamping => 0.5 * (-xlnx(1.0 - x) + xlnx(2.0 - x)),
        ChannelKind::IsotropicHadamard => (3.0 * xlnx(1.0 - x) + xlnx(1.0 + 3.0 * x)) / 4.0,
        ChannelKind::UnitaryH | ChannelKind::SsTensorGate | ChannelKind::TtTensorGate => 2.0 * ln2,
        ChannelKind::UnitaryS | ChannelKind::UnitaryT => ln2,
        ChannelKind::Dephasing | ChannelKind::Identity => return None,
    })
}

/// Closed-form value of a measure, when one is known for this channel and
/// parameter pair; `None` otherwise.
///
/// `C` is known at `z = 1` for every kind except dephasing and identity.
/// `C~` vanishes for every kind that commutes with dephasing (all `(a, z)`);
/// for the isotropic Hadamard channel it is known at `(1/2, 1)` only.
pub fn reference_value(kind: ChannelKind, param: Option<f64>, params: AlphaZ, measure: Measure) -> Option<f64> {
    let x = match kind.param_range() {
        Some((_, min, max)) => {
            let v = param?;
            if !(v >= min && v <= max) {
                return None;
            }
            v
        }
        None => 0.0,
    };
    match measure {
        Measure::C => {
            if params.z() != 1.0 {
                return None;
            }
            match params.alpha() {
                Alpha::ToOne => c_limit(kind, x),
                Alpha::Finite(a) => c_closed_form(kind, x, a),
            }
        }
        Measure::Ctilde => match kind {
            ChannelKind::PhaseFlip
            | ChannelKind::Depolarizing
            | ChannelKind::AmplitudeDamping
            | ChannelKind::UnitaryS
            | ChannelKind::UnitaryT
            | ChannelKind::SsTensorGate
            | ChannelKind::TtTensorGate => Some(0.0),
            ChannelKind::IsotropicHadamard | ChannelKind::UnitaryH => {
                let t = if kind == ChannelKind::UnitaryH { 1.0 } else { x };
                (params.alpha() == Alpha::Finite(0.5) && params.z() == 1.0).then(|| 1.0 - (1.0 - t * t).sqrt())
            }
            ChannelKind::Dephasing | ChannelKind::Identity => None,
        },
    }
}

/// `C_{1/2,1}` of the isotropic Hadamard channel in the closed form
/// `(3t - 5)/4 - (3/4) sqrt((1 - t)(1 + 3t)) + 2`, obtained from the
/// general-alpha formula at `alpha = 1/2`.
pub fn isotropic_hadamard_half(t: f64) -> f64 {
    (3.0 * t - 5.0) / 4.0 - 0.75 * ((1.0 - t) * (1.0 + 3.0 * t)).max(0.0).sqrt() + 2.0
}

/// The variant `(3t - 5)/4 - (3/4) sqrt((1 - t)(1 - 3t)) + 2`,
/// kept for comparison; `None` where the radicand is negative
/// (`1/3 < t < 1`). It disagrees with [`isotropic_hadamard_half`] away
/// from `t = 0` and `t = 1`.
pub fn isotropic_hadamard_half_variant(t: f64) -> Option<f64> {
    let r = (1.0 - t) * (1.0 - 3.0 * t);
    (r >= 0.0).then(|| (3.0 * t - 5.0) / 4.0 - 0.75 * r.sqrt() + 2.0)
}

/// Reorders a two-qubit channel's 16x16 Choi matrix from the crate's
/// `(A1 A2)(B1 B2)` basis to the interleaved `A1 B1 A2 B2` basis.
pub fn interleave_two_qubit_choi(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if m.rows() != 16 || m.cols() != 16 {
        return Err(Error::DimensionMismatch {
            expected: 16,
            found: m.rows(),
        });
    }
    // interleaved index a1 b1 a2 b2 -> crate index a1 a2 b1 b2
    let to_crate = |k: usize| {
        let (a1, b1, a2, b2) = ((k >> 3) & 1, (k >> 2) & 1, (k >> 1) & 1, k & 1);
        (a1 << 3) | (a2 << 2) | (b1 << 1) | b2
    };
    Ok(ComplexMatrix::from_fn(16, 16, |r, c| m[(to_crate(r), to_crate(c))]))
}

/// Human-readable label like `phase-flip(p=0.3)`.
pub fn label(kind: ChannelKind, param: Option<f64>) -> String {
    match (kind.param_range(), param) {
        (Some((name, _, _)), Some(v)) => format!("{kind}({name}={v})"),
        _ => format!("{kind}"),
    }
}
