#![allow(dead_code)]

use qcoh_core::quantum::random::random_channel;
use qcoh_core::{AlphaZ, KrausChannel, Regime};
use rand::Rng;

/// Random `(alpha, z)` inside the given regime.
pub fn sample_params<R: Rng>(rng: &mut R, regime: Regime) -> AlphaZ {
    match regime {
        Regime::Regime1 => {
            let a = rng.random_range(0.05..0.95);
            let lo = f64::max(a, 1.0 - a);
            AlphaZ::new(a, lo + rng.random_range(0.0..2.0)).unwrap()
        }
        Regime::Regime2 => {
            let a = rng.random_range(1.05..=2.0);
            let z = if rng.random::<bool>() { 1.0 } else { a / 2.0 };
            AlphaZ::new(a, z).unwrap()
        }
        Regime::Regime3 => {
            let a = rng.random_range(1.05..3.0);
            AlphaZ::new(a, a).unwrap()
        }
        Regime::RelativeEntropyLimit => AlphaZ::alpha_to_one(),
        Regime::OutsideKnownRegimes => AlphaZ::new(0.5, 0.2).unwrap(),
    }
}

pub const REGIMES: [Regime; 4] = [Regime::Regime1, Regime::Regime2, Regime::Regime3, Regime::RelativeEntropyLimit];

/// Random qubit channel with one to four Kraus operators.
pub fn random_qubit_channel<R: Rng>(rng: &mut R) -> KrausChannel {
    let n = rng.random_range(1..=4);
    random_channel(rng, 2, 2, n)
}
