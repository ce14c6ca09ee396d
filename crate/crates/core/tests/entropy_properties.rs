mod common;

use common::{sample_params, REGIMES};
use qcoh_core::quantum::random::{random_channel, random_density, random_pure, seeded_rng};
use qcoh_core::{d_alpha_z, d_alpha_z_channels, dephasing_channel, f_alpha_z, relative_entropy, zoo, AlphaZ, DensityMatrix, Regime};
use rand::Rng;

fn divergence(rho: &DensityMatrix, sigma: &DensityMatrix, p: AlphaZ) -> f64 {
    d_alpha_z(rho, sigma, p).unwrap().value
}

#[test]
fn nonnegativity_and_faithfulness() {
    for (r, regime) in REGIMES.into_iter().enumerate() {
        let mut rng = seeded_rng(100, r as u64);
        for draw in 0..500 {
            let p = sample_params(&mut rng, regime);
            let dim = rng.random_range(2..=4);
            let rho = random_density(&mut rng, dim, dim);
            // a third of the draws compare a state with (almost) itself
            let sigma = match draw % 3 {
                0 => rho.clone(),
                1 => {
                    let other = random_density(&mut rng, dim, dim);
                    rho.mix(1.0 - 1e-9, &other).unwrap()
                }
                _ => {
                    let rank = rng.random_range(1..=dim);
                    random_density(&mut rng, dim, rank)
                }
            };
            let v = divergence(&rho, &sigma, p);
            let close = (rho.matrix() - sigma.matrix()).frobenius_norm() < 1e-6;
            assert!(v >= -1e-9, "{regime:?} {p:?}: {v}");
            assert_eq!(v < 1e-8, close, "{regime:?} {p:?}: D = {v:e}");
        }
    }
}

#[test]
fn data_processing() {
    for (r, regime) in REGIMES.into_iter().enumerate() {
        let mut rng = seeded_rng(200, r as u64);
        for _ in 0..200 {
            let p = sample_params(&mut rng, regime);
            let (din, dout): (usize, usize) = (rng.random_range(2..=3), rng.random_range(2..=3));
            let n_kraus = rng.random_range(1..=4usize).max(din.div_ceil(dout));
            let lambda = random_channel(&mut rng, din, dout, n_kraus);
            let rho = random_density(&mut rng, din, din);
            let sigma = random_density(&mut rng, din, din);
            let before = divergence(&rho, &sigma, p);
            let after = divergence(&lambda.apply(&rho).unwrap(), &lambda.apply(&sigma).unwrap(), p);
            assert!(after <= before + 1e-8, "{regime:?} {p:?}: {after} > {before}");
        }
    }
}

#[test]
fn joint_convexity_of_the_trace_functional() {
    // f is jointly concave for alpha < 1 and jointly convex for alpha > 1
    for (r, regime) in REGIMES.into_iter().enumerate() {
        let mut rng = seeded_rng(300, r as u64);
        for _ in 0..500 {
            let p = sample_params(&mut rng, regime);
            let dim = rng.random_range(2..=3);
            let lambda: f64 = rng.random();
            let [r1, r2, s1, s2] = [(); 4].map(|_| random_density(&mut rng, dim, dim));
            let (rm, sm) = (r1.mix(lambda, &r2).unwrap(), s1.mix(lambda, &s2).unwrap());
            if p.is_limit() {
                let lhs = divergence(&rm, &sm, p);
                let rhs = lambda * divergence(&r1, &s1, p) + (1.0 - lambda) * divergence(&r2, &s2, p);
                assert!(lhs <= rhs + 1e-10, "{lhs} > {rhs}");
                continue;
            }
            let f = |a: &DensityMatrix, b: &DensityMatrix| f_alpha_z(a, b, p).unwrap();
            let sign = if p.alpha_value() > 1.0 { 1.0 } else { -1.0 };
            let gap = sign * (f(&rm, &sm) - lambda * f(&r1, &s1) - (1.0 - lambda) * f(&r2, &s2));
            assert!(gap <= 1e-10, "{regime:?} {p:?}: {gap:e}");
        }
    }
}

#[test]
fn root_of_the_trace_functional_breaks_joint_convexity() {
    // classical pairs at alpha = 2, where D = sqrt(sum p^2 / q) - 1
    let p = AlphaZ::new(2.0, 1.0).unwrap();
    let d2 = |a: [f64; 2], b: [f64; 2]| (a[0] * a[0] / b[0] + a[1] * a[1] / b[1]).sqrt() - 1.0;
    let (r1, s1, r2, s2) = ([0.01, 0.99], [0.95, 0.05], [0.9, 0.1], [0.99, 0.01]);
    let state = |x: [f64; 2]| DensityMatrix::diagonal(&x).unwrap();
    let mid = |a: [f64; 2], b: [f64; 2]| [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
    let lhs = divergence(&state(mid(r1, r2)), &state(mid(s1, s2)), p);
    let rhs = 0.5 * divergence(&state(r1), &state(s1), p) + 0.5 * divergence(&state(r2), &state(s2), p);
    assert!((lhs - d2(mid(r1, r2), mid(s1, s2))).abs() < 1e-12);
    assert!((rhs - 0.5 * (d2(r1, s1) + d2(r2, s2))).abs() < 1e-12);
    assert!(lhs > rhs + 0.25, "{lhs} vs {rhs}");
}

#[test]
fn z_independence_for_commuting_pairs() {
    let mut rng = seeded_rng(400, 0);
    for _ in 0..100 {
        let dim = rng.random_range(2..=5);
        let draw = |rng: &mut rand_chacha::ChaCha8Rng| {
            let w: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() + 1e-3).collect();
            let t: f64 = w.iter().sum();
            DensityMatrix::diagonal(&w.iter().map(|x| x / t).collect::<Vec<_>>()).unwrap()
        };
        let (rho, sigma) = (draw(&mut rng), draw(&mut rng));
        let a: f64 = rng.random_range(0.1..2.5);
        if (a - 1.0).abs() < 1e-3 {
            continue;
        }
        let expect: f64 = rho
            .matrix()
            .real_diagonal()
            .iter()
            .zip(sigma.matrix().real_diagonal())
            .map(|(p, q)| p.powf(a) * q.powf(1.0 - a))
            .sum();
        for z in [0.3, 0.5, 0.7, 1.0, 1.9, 3.0] {
            let f = f_alpha_z(&rho, &sigma, AlphaZ::new(a, z).unwrap()).unwrap();
            assert!((f - expect).abs() < 1e-10, "alpha {a}, z {z}: {f} vs {expect}");
        }
    }
}

#[test]
fn limit_at_alpha_one() {
    let mut rng = seeded_rng(500, 0);
    for _ in 0..50 {
        let dim = rng.random_range(2..=4);
        let rho = random_density(&mut rng, dim, dim);
        let sigma = random_density(&mut rng, dim, dim);
        let s = relative_entropy(&rho, &sigma).unwrap().value;
        let mut gaps = Vec::new();
        for h in [1e-2, 1e-3, 1e-4] {
            let g = [1.0 - h, 1.0 + h].map(|a| (divergence(&rho, &sigma, AlphaZ::new(a, 1.0).unwrap()) - s).abs());
            gaps.push(g[0].max(g[1]));
        }
        // first order in the offset: each tenfold step shrinks the gap about tenfold
        assert!(gaps[2] < 1e-3 * s.max(1.0), "{gaps:?}");
        assert!(gaps[2] < 0.2 * gaps[1] + 1e-9 && gaps[1] < 0.2 * gaps[0] + 1e-9, "{gaps:?}");
    }
}

#[test]
fn relative_entropy_matches_hand_computation() {
    let rho = DensityMatrix::diagonal(&[0.3, 0.7]).unwrap();
    let sigma = DensityMatrix::diagonal(&[0.5, 0.5]).unwrap();
    let expect = 0.3 * (0.3f64 / 0.5).ln() + 0.7 * (0.7f64 / 0.5).ln();
    assert!((relative_entropy(&rho, &sigma).unwrap().value - expect).abs() < 1e-14);
}

#[test]
fn channel_divergence_examples() {
    let pf0 = zoo::make(zoo::ChannelKind::PhaseFlip, Some(0.0)).unwrap().channel;
    let delta = dephasing_channel(2);
    let half = AlphaZ::new(0.5, 1.0).unwrap();
    assert!(d_alpha_z_channels(&pf0, &pf0, half).unwrap().value.abs() < 1e-12);
    assert!((d_alpha_z_channels(&pf0, &delta, half).unwrap().value - 1.0).abs() < 1e-12);

    let h = zoo::make(zoo::ChannelKind::UnitaryH, None).unwrap().channel;
    let v = d_alpha_z_channels(&h, &delta, half).unwrap();
    let m = qcoh_core::choi_state(&h);
    let diag = qcoh_core::choi_state(&delta).matrix().real_diagonal();
    // M pure: f = <m| sigma^{1/2} |m>
    let f: f64 = m.matrix().real_diagonal().iter().zip(&diag).map(|(w, s)| w * s.sqrt()).sum();
    assert!(v.value > 0.0 && v.value.is_finite());
    assert!((v.value - 2.0 * (1.0 - f * f)).abs() < 1e-12);
}

#[test]
fn support_violation_is_infinite() {
    let mut rng = seeded_rng(600, 0);
    for _ in 0..20 {
        let rho = random_pure(&mut rng, 3).density();
        let sigma = DensityMatrix::basis(3, 0);
        for regime in [Regime::Regime2, Regime::Regime3, Regime::RelativeEntropyLimit] {
            let p = sample_params(&mut rng, regime);
            let d = d_alpha_z(&rho, &sigma, p).unwrap();
            assert!(!d.support_dominated && d.value == f64::INFINITY);
        }
        let p = sample_params(&mut rng, Regime::Regime1);
        assert!(d_alpha_z(&rho, &sigma, p).unwrap().value.is_finite());
    }
}
