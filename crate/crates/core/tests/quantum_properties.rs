use proptest::prelude::*;
use qcoh_core::linalg::eig_hermitian;
use qcoh_core::quantum::random::{random_channel, random_density, random_pure, seeded_rng};
use qcoh_core::quantum::{mixture, pure_from_params};
use qcoh_core::zoo::{self, ChannelKind};
use qcoh_core::{c64, choi_state, compose, dephase, dephasing_channel, ComplexMatrix, DensityMatrix, KrausChannel, PureState};

fn zoo_channels() -> Vec<KrausChannel> {
    ChannelKind::ALL
        .iter()
        .map(|&k| {
            let param = k.param_range().map(|(_, lo, hi)| 0.3 * lo + 0.7 * hi);
            zoo::make(k, param).unwrap().channel
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn apply_preserves_states(seed in any::<u64>(), din in 1usize..=4, dout in 1usize..=4, nk in 1usize..=4) {
        let mut rng = seeded_rng(seed, 0);
        let nk = nk.max(din.div_ceil(dout));
        let phi = random_channel(&mut rng, din, dout, nk);
        prop_assert!(phi.cptp_residual() < 1e-9);
        let rho = random_density(&mut rng, din, din);
        let out = phi.apply(&rho).unwrap();
        prop_assert!((out.matrix().trace().re - 1.0).abs() < 1e-9);
        prop_assert!(eig_hermitian(out.matrix()).unwrap().min_eigenvalue() > -1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn choi_partial_trace(seed in any::<u64>(), din in 1usize..=3, dout in 1usize..=3, nk in 1usize..=4) {
        let nk = nk.max(din.div_ceil(dout));
        let phi = random_channel(&mut seeded_rng(seed, 1), din, dout, nk);
        let m = choi_state(&phi);
        let expect = ComplexMatrix::identity(din).scale(1.0 / din as f64);
        prop_assert!(m.partial_trace_output().max_abs_diff(&expect) < 1e-9);
        prop_assert!((m.matrix().trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dephase_is_idempotent(seed in any::<u64>(), dim in 1usize..=8) {
        let rho = random_density(&mut seeded_rng(seed, 2), dim, dim);
        let once = dephase(&rho);
        prop_assert_eq!(dephase(&once), once.clone());
        prop_assert_eq!(dephasing_channel(dim).apply(&rho).unwrap().into_matrix().real_diagonal(), once.matrix().real_diagonal());
    }

    #[test]
    fn choi_round_trip(seed in any::<u64>(), dim in 2usize..=3) {
        let mut rng = seeded_rng(seed, 3);
        let phi = random_channel(&mut rng, dim, dim, 3);
        let back = KrausChannel::from_choi(choi_state(&phi).matrix(), dim, dim).unwrap();
        let rho = random_density(&mut rng, dim, dim);
        prop_assert!(phi.apply(&rho).unwrap().matrix().max_abs_diff(back.apply(&rho).unwrap().matrix()) < 1e-10);
    }

    #[test]
    fn pure_params_are_normalized(angles in prop::collection::vec(-7.0f64..7.0, 2..=6)) {
        let angles = if angles.len() % 2 == 1 { &angles[1..] } else { &angles[..] };
        let psi = pure_from_params(angles).unwrap();
        let norm: f64 = psi.amplitudes().iter().map(|a| a.norm_sqr()).sum();
        prop_assert!((norm - 1.0).abs() < 1e-12);
        let lead = psi.amplitudes().iter().find(|a| a.norm() > 1e-14).unwrap();
        prop_assert!(lead.im == 0.0 && lead.re >= 0.0);
    }
}

#[test]
fn zoo_choi_partial_trace() {
    for phi in zoo_channels() {
        let m = choi_state(&phi);
        let d = phi.input_dim();
        assert!(m.partial_trace_output().max_abs_diff(&ComplexMatrix::identity(d).scale(1.0 / d as f64)) < 1e-9);
    }
}

#[test]
fn diagonal_kraus_channels_have_diagonal_choi() {
    let mut rng = seeded_rng(11, 0);
    for _ in 0..20 {
        // K_n = diag(c_n) with sum_n |c_n(i)|^2 = 1
        let v = qcoh_core::quantum::random::haar_isometry(&mut rng, 6, 2);
        let kraus: Vec<ComplexMatrix> = (0..3)
            .map(|n| ComplexMatrix::from_diagonal(&[v[(2 * n, 0)], v[(2 * n + 1, 1)]]))
            .collect();
        let norm: Vec<f64> = (0..2).map(|i| kraus.iter().map(|k| k[(i, i)].norm_sqr()).sum()).collect();
        let kraus = kraus
            .into_iter()
            .map(|k| ComplexMatrix::from_fn(2, 2, |i, j| k[(i, j)] / norm[i].sqrt()))
            .collect();
        let phi = KrausChannel::new(kraus).unwrap();
        let m = choi_state(&phi);
        // diagonal Kraus operators keep |ii> -> |ii>, so M lives on span{|00>, |11>}
        assert!((m.matrix()[(1, 1)].norm() + m.matrix()[(2, 2)].norm()) < 1e-14);
    }
    assert!(choi_state(&dephasing_channel(3)).is_diagonal(0.0));
}

#[test]
fn choi_examples() {
    let id = choi_state(&KrausChannel::identity(2));
    for (r, c) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
        assert!((id.matrix()[(r, c)] - c64(0.5, 0.0)).norm() < 1e-15);
    }
    let p: f64 = 0.3;
    let d = choi_state(&zoo::make(ChannelKind::Depolarizing, Some(p)).unwrap().channel);
    let diag = d.matrix().real_diagonal();
    let expect = [0.5 - p / 4.0, p / 4.0, p / 4.0, 0.5 - p / 4.0];
    for (a, b) in diag.iter().zip(expect) {
        assert!((a - b).abs() < 1e-12);
    }
    assert!((d.matrix()[(0, 3)].re - (0.5 - p / 2.0)).abs() < 1e-12);
    assert_eq!(choi_state(&dephasing_channel(2)).matrix(), &ComplexMatrix::from_real_diagonal(&[0.5, 0.0, 0.0, 0.5]));
}

#[test]
fn apply_examples() {
    let mut rng = seeded_rng(5, 0);
    let psi = random_pure(&mut rng, 2);
    let (a, b) = (psi.amplitudes()[0], psi.amplitudes()[1]);
    let p = 0.2;
    let out = zoo::make(ChannelKind::PhaseFlip, Some(p)).unwrap().channel.apply(&psi.density()).unwrap();
    let m = out.matrix();
    assert!((m[(0, 0)].re - a.norm_sqr()).abs() < 1e-14);
    assert!((m[(0, 1)] - a * b.conj() * (2.0 * p - 1.0)).norm() < 1e-14);
    assert!((m[(1, 1)].re - b.norm_sqr()).abs() < 1e-14);

    let ad = zoo::make(ChannelKind::AmplitudeDamping, Some(1.0)).unwrap().channel;
    assert_eq!(ad.apply(&DensityMatrix::basis(2, 1)).unwrap(), DensityMatrix::basis(2, 0));

    let rho = random_density(&mut rng, 3, 2);
    assert_eq!(KrausChannel::identity(3).apply(&rho).unwrap().matrix().max_abs_diff(rho.matrix()), 0.0);
}

#[test]
fn compose_examples() {
    let mut rng = seeded_rng(6, 0);
    let h = zoo::make(ChannelKind::UnitaryH, None).unwrap().channel;
    let hh = compose(&h, &h).unwrap();
    let delta = dephasing_channel(2);
    let pf = zoo::make(ChannelKind::PhaseFlip, Some(0.35)).unwrap().channel;
    let d_then_id = compose(&KrausChannel::identity(2), &delta).unwrap();
    for _ in 0..10 {
        let rho = random_density(&mut rng, 2, 2);
        assert!(hh.apply(&rho).unwrap().matrix().max_abs_diff(rho.matrix()) < 1e-14);
        assert!(d_then_id.apply(&rho).unwrap().matrix().max_abs_diff(delta.apply(&rho).unwrap().matrix()) < 1e-15);
        let a = compose(&delta, &pf).unwrap().apply(&rho).unwrap();
        let b = compose(&pf, &delta).unwrap().apply(&rho).unwrap();
        assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-15);
    }
    assert!(compose(&h, &random_channel(&mut rng, 2, 3, 1)).is_err());
}

#[test]
fn mixture_is_convex_combination() {
    let mut rng = seeded_rng(8, 0);
    let a = random_channel(&mut rng, 2, 2, 2);
    let b = random_channel(&mut rng, 2, 2, 3);
    let mix = mixture(&[(0.25, &a), (0.75, &b)]).unwrap();
    let rho = random_density(&mut rng, 2, 2);
    let expect = &a.apply(&rho).unwrap().matrix().scale(0.25) + &b.apply(&rho).unwrap().matrix().scale(0.75);
    assert!(mix.apply(&rho).unwrap().matrix().max_abs_diff(&expect) < 1e-14);
    assert!(mixture(&[(0.5, &a), (0.6, &b)]).is_err());
}

#[test]
fn pure_param_examples() {
    let zero = pure_from_params(&[0.0, 1.3]).unwrap();
    assert_eq!(zero, PureState::basis(2, 0));
    let one = pure_from_params(&[std::f64::consts::PI, 0.4]).unwrap();
    assert!((one.amplitudes()[1] - c64(1.0, 0.0)).norm() < 1e-15 && one.amplitudes()[0].norm() < 1e-15);
    let plus = pure_from_params(&[std::f64::consts::FRAC_PI_2, 0.0]).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    assert!((plus.amplitudes()[0].re - h).abs() < 1e-15 && (plus.amplitudes()[1].re - h).abs() < 1e-15);
}

#[test]
fn invalid_inputs() {
    assert!(matches!(
        KrausChannel::new(vec![ComplexMatrix::identity(2).scale(0.9)]),
        Err(qcoh_core::Error::NotCptp { .. })
    ));
    assert!(DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.6, 0.6])).is_err());
    assert!(DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[1.2, -0.2])).is_err());
    let phi = KrausChannel::identity(2);
    assert!(phi.apply(&DensityMatrix::maximally_mixed(3)).is_err());
}
