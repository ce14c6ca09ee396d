mod common;

use common::random_qubit_channel;
use qcoh_core::quantum::mixture;
use qcoh_core::quantum::random::{random_channel, random_density, seeded_rng};
use qcoh_core::zoo::{make, ChannelKind};
use qcoh_core::{
    c64, check_additivity, choi_state, coherence_channel, coherence_channel_z1, coherence_commutativity, compose, d_alpha_z, dephase, dephasing_channel,
    oracle_min_diag, oracle_sup_pure, AlphaZ, ComplexMatrix, DensityMatrix, KrausChannel, OptimizerOptions,
};
use rand::Rng;

const ALPHAS: [f64; 5] = [0.3, 0.5, 0.9, 1.5, 2.0];

fn zoo() -> Vec<(ChannelKind, KrausChannel)> {
    ChannelKind::ALL
        .iter()
        .map(|&k| {
            let param = k.param_range().map(|(_, lo, hi)| 0.35 * lo + 0.65 * hi);
            (k, make(k, param).unwrap().channel)
        })
        .collect()
}

fn az(a: f64, z: f64) -> AlphaZ {
    AlphaZ::new(a, z).unwrap()
}

/// Channel with Kraus operators `sqrt(P(b|i)) |b><i|`; its Choi state is diagonal.
fn classical_channel<R: Rng>(rng: &mut R, d: usize) -> KrausChannel {
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
    KrausChannel::new(kraus).unwrap()
}

/// `D(phi(Delta(rho)), Delta(phi(rho)))` for a mixed input.
fn commutator_value(phi: &KrausChannel, rho: &DensityMatrix, p: AlphaZ) -> f64 {
    let first = phi.apply(&dephase(rho)).unwrap();
    let second = dephase(&phi.apply(rho).unwrap());
    d_alpha_z(&first, &second, p).unwrap().value
}

#[test]
fn optimizer_matches_closed_form() {
    let opts = OptimizerOptions::default();
    let mut rng = seeded_rng(10, 0);
    let mut channels: Vec<KrausChannel> = zoo().into_iter().map(|(_, c)| c).collect();
    channels.extend((0..20).map(|_| random_qubit_channel(&mut rng)));
    for phi in &channels {
        for a in ALPHAS {
            let exact = coherence_channel_z1(phi, a).unwrap().value;
            let r = coherence_channel(phi, az(a, 1.0), &opts).unwrap();
            assert!((r.value - exact).abs() < 1e-6, "alpha {a}: {} vs {exact}", r.value);
        }
        let exact = coherence_channel_z1(phi, 1.0).unwrap().value;
        let r = coherence_channel(phi, AlphaZ::alpha_to_one(), &opts).unwrap();
        assert!((r.value - exact).abs() < 1e-6, "limit: {} vs {exact}", r.value);
    }
}

#[test]
fn oracle_matches_closed_form_on_qubit_zoo() {
    for (kind, phi) in zoo() {
        if phi.input_dim() != 2 {
            continue;
        }
        for a in [0.5, 1.5] {
            let exact = coherence_channel_z1(&phi, a).unwrap().value;
            let o = oracle_min_diag(&phi, az(a, 1.0), 100).unwrap();
            assert!((o.value - exact).abs() < 1e-6, "{kind} alpha {a}: {} vs {exact}", o.value);
        }
    }
}

#[test]
fn faithfulness() {
    let opts = OptimizerOptions::default();
    let mut rng = seeded_rng(11, 0);
    for k in 0..100 {
        let phi = if k % 2 == 0 { classical_channel(&mut rng, 2) } else { random_qubit_channel(&mut rng) };
        let diagonal = choi_state(&phi).is_diagonal(1e-8);
        assert_eq!(diagonal, k % 2 == 0);
        for p in [az(0.7, 0.7), az(1.5, 1.5)] {
            let c = coherence_channel(&phi, p, &opts).unwrap().value;
            assert_eq!(c < 1e-8, diagonal, "{p:?}: {c}");
        }
    }
    for (kind, phi) in zoo() {
        let c = coherence_channel(&phi, az(0.7, 0.7), &opts).unwrap().value;
        assert_eq!(c < 1e-8, choi_state(&phi).is_diagonal(1e-8), "{kind}: {c}");
    }
}

#[test]
fn additivity_over_direct_sums() {
    let opts = OptimizerOptions::default();
    let mut rng = seeded_rng(12, 0);
    for p in [az(0.7, 0.7), az(1.5, 0.75), az(1.5, 1.5), AlphaZ::alpha_to_one()] {
        for _ in 0..20 {
            let a = random_qubit_channel(&mut rng);
            let b = random_channel(&mut rng, 2, 2, 3);
            let p1 = rng.random_range(0.05..0.95);
            let r = check_additivity(&a, &b, p1, p, &opts).unwrap();
            assert!(r.gap < 1e-6, "{p:?}: {r:?}");
        }
    }
}

#[test]
fn optimizer_reaches_the_pure_state_oracle() {
    let opts = OptimizerOptions::default();
    let mut rng = seeded_rng(13, 0);
    for p in [az(0.5, 1.0), az(0.3, 0.8), az(1.5, 1.0), az(2.0, 2.0)] {
        for _ in 0..10 {
            let phi = random_qubit_channel(&mut rng);
            let c = coherence_commutativity(&phi, p, &opts).unwrap().value;
            let o = oracle_sup_pure(&phi, p, 33).unwrap().value;
            assert!(c >= o - 1e-7, "{p:?}: optimizer {c} < oracle {o}");
        }
    }
}

#[test]
fn mixed_inputs_never_beat_pure_ones() {
    let opts = OptimizerOptions::default();
    let mut rng = seeded_rng(14, 0);
    for p in [az(0.5, 1.0), az(0.7, 0.7), az(1.5, 0.75), az(2.0, 2.0)] {
        for _ in 0..10 {
            let phi = random_qubit_channel(&mut rng);
            let sup = coherence_commutativity(&phi, p, &opts).unwrap().value;
            for _ in 0..200 {
                let rho = random_density(&mut rng, 2, 2);
                let v = commutator_value(&phi, &rho, p);
                assert!(v <= sup + 1e-7, "{p:?}: mixed {v} > pure {sup}");
            }
        }
    }
}

#[test]
fn free_channels_do_not_increase_commutativity() {
    let opts = OptimizerOptions::default();
    let mut rng = seeded_rng(15, 0);
    let free = [
        dephasing_channel(2),
        make(ChannelKind::PhaseFlip, Some(0.3)).unwrap().channel,
        make(ChannelKind::Depolarizing, Some(0.4)).unwrap().channel,
        make(ChannelKind::AmplitudeDamping, Some(0.6)).unwrap().channel,
        make(ChannelKind::UnitaryS, None).unwrap().channel,
        make(ChannelKind::UnitaryT, None).unwrap().channel,
    ];
    for p in [az(0.5, 1.0), az(1.5, 1.5)] {
        for phi0 in &free {
            assert!(coherence_commutativity(phi0, p, &opts).unwrap().value < 1e-9);
        }
        for _ in 0..5 {
            let phi = random_qubit_channel(&mut rng);
            let c = coherence_commutativity(&phi, p, &opts).unwrap().value;
            for phi0 in &free {
                let after = coherence_commutativity(&compose(phi0, &phi).unwrap(), p, &opts).unwrap().value;
                let before = coherence_commutativity(&compose(&phi, phi0).unwrap(), p, &opts).unwrap().value;
                assert!(after <= c + 1e-7 && before <= c + 1e-7, "{p:?}: {after}, {before} vs {c}");
            }
        }
    }
}

#[test]
fn commutativity_is_convex() {
    let opts = OptimizerOptions::default();
    let mut rng = seeded_rng(16, 0);
    for p in [az(0.5, 1.0), az(0.7, 0.7), az(1.5, 1.0), az(2.0, 2.0)] {
        for _ in 0..5 {
            let parts: Vec<(f64, KrausChannel)> = (0..3).map(|_| (rng.random::<f64>(), random_qubit_channel(&mut rng))).collect();
            let total: f64 = parts.iter().map(|(w, _)| w).sum();
            let weighted: Vec<(f64, &KrausChannel)> = parts.iter().map(|(w, c)| (w / total, c)).collect();
            let mix = mixture(&weighted).unwrap();
            let lhs = coherence_commutativity(&mix, p, &opts).unwrap().value;
            let rhs: f64 = weighted
                .iter()
                .map(|(w, c)| w * coherence_commutativity(c, p, &opts).unwrap().value)
                .sum();
            assert!(lhs <= rhs + 1e-7, "{p:?}: {lhs} > {rhs}");
        }
    }
}

#[test]
fn optimizer_is_deterministic() {
    let opts = OptimizerOptions::default();
    let mut rng = seeded_rng(17, 0);
    let phi = random_channel(&mut rng, 2, 2, 2);
    let a = coherence_channel(&phi, az(0.7, 0.7), &opts).unwrap();
    let b = coherence_channel(&phi, az(0.7, 0.7), &opts).unwrap();
    assert_eq!(a, b);
    let a = coherence_commutativity(&phi, az(0.7, 0.7), &opts).unwrap();
    let b = coherence_commutativity(&phi, az(0.7, 0.7), &opts).unwrap();
    assert_eq!(a, b);
}
