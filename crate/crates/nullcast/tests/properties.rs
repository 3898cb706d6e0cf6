//! Property-based invariants for the geometry and codec layers.

use nullcast::concurrence::{l1_ball_projection, FeedbackMessage};
use nullcast::scenario::{self, BasisKind, UncertaintySpec};
use nullcast::signaling::{design_waveform, select_column, TIE_TOL};
use nullcast::subspace::{
    chordal_distance, orthonormalize, projector_from_basis, random_unitary, rotate_basis,
    svd_null_space, ComplexMatrix, ComplexVector, RANK_TOL,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn gaussian_matrix(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(rand_distr::StandardNormal);
        let im: f64 = rng.sample(rand_distr::StandardNormal);
        Complex64::new(re * s, im * s)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projector_invariants_hold(n in 2usize..24, kf in 0.05f64..1.0, seed in 0u64..10_000) {
        let k = ((n as f64 * kf).ceil() as usize).clamp(1, n);
        let basis = orthonormalize(&gaussian_matrix(n, k, seed)).unwrap();
        let p = projector_from_basis(&basis);
        prop_assert!(p.validate().is_ok());
        prop_assert_eq!(p.rank(), k);
    }

    #[test]
    fn rotations_leave_projectors_fixed(n in 2usize..16, seed in 0u64..10_000) {
        let k = (n / 2).max(1);
        let basis = orthonormalize(&gaussian_matrix(n, k, seed)).unwrap();
        let u = random_unitary(k, seed ^ 0xF00D);
        let rotated = rotate_basis(&basis, &u).unwrap();
        let d = (projector_from_basis(&basis).matrix()
            - projector_from_basis(&rotated).matrix())
        .norm();
        prop_assert!(d < 1e-9, "projector moved by {}", d);
    }

    #[test]
    fn null_space_annihilates(rows in 1usize..6, cols in 2usize..12, seed in 0u64..10_000) {
        prop_assume!(rows < cols);
        let t = gaussian_matrix(rows, cols, seed);
        let ns = svd_null_space(&t, RANK_TOL).unwrap();
        prop_assert_eq!(ns.dim(), cols - rows);
        let sigma_max = t.clone().svd(false, false).singular_values.max();
        let residual = (&t * ns.columns()).norm();
        prop_assert!(residual < 10.0 * RANK_TOL * sigma_max);
    }

    #[test]
    fn chordal_triangle_inequality(n in 2usize..10, s1 in 0u64..500, s2 in 500u64..1000, s3 in 1000u64..1500) {
        let k = (n / 2).max(1);
        let mk = |s| projector_from_basis(&orthonormalize(&gaussian_matrix(n, k, s)).unwrap());
        let (p1, p2, p3) = (mk(s1), mk(s2), mk(s3));
        let d12 = chordal_distance(&p1, &p2).unwrap().sqrt();
        let d23 = chordal_distance(&p2, &p3).unwrap().sqrt();
        let d13 = chordal_distance(&p1, &p3).unwrap().sqrt();
        prop_assert!(d13 <= d12 + d23 + 1e-9);
    }

    #[test]
    fn feedback_codec_round_trips(k0 in 0u32..1000, values in prop::collection::vec((-1e12f64..1e12, -1e12f64..1e12), 0..32)) {
        let phi = ComplexVector::from_vec(
            values.iter().map(|&(re, im)| Complex64::new(re, im)).collect(),
        );
        let msg = FeedbackMessage { k0_hat: k0, phi_r: phi };
        let decoded = FeedbackMessage::decode(&msg.encode()).unwrap();
        prop_assert_eq!(decoded.k0_hat, msg.k0_hat);
        for (a, b) in msg.phi_r.iter().zip(decoded.phi_r.iter()) {
            prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
            prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }

    #[test]
    fn l1_projection_feasible(radius in 0.0f64..10.0, v in prop::collection::vec(-50.0f64..50.0, 1..40)) {
        let mut w = v.clone();
        l1_ball_projection(&mut w, radius);
        let l1: f64 = w.iter().map(|x| x.abs()).sum();
        prop_assert!(l1 <= radius + 1e-12);
        // Projection of a feasible vector is the identity.
        let mut w2 = w.clone();
        l1_ball_projection(&mut w2, radius);
        for (a, b) in w.iter().zip(w2.iter()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn environment_bookkeeping(n in 4usize..40, df in 0.1f64..0.9, seed in 0u64..5_000) {
        let d = ((n as f64 * df) as usize).clamp(1, n - 1);
        let k = n - d;
        let spec = UncertaintySpec { eps: d / 3, delta: d / 4, false_alarms: k / 3 };
        let env = scenario::build(n, d, BasisKind::RandomOrthonormal, spec, seed).unwrap();
        prop_assert_eq!(env.d_hat() + env.k_hat(), n);
        prop_assert_eq!(env.k_hat(), env.k_tilde() + spec.xi());
        let cross = (env.sensed_signal_basis().columns().adjoint()
            * env.sensed_noise_basis().columns())
        .norm();
        prop_assert!(cross < 1e-9);
    }

    #[test]
    fn designed_waveform_lives_in_the_subspace(n in 6usize..24, seed in 0u64..5_000) {
        let d = n / 3;
        let env = scenario::build(n, d, BasisKind::RandomOrthonormal, UncertaintySpec::NONE, seed)
            .unwrap();
        let p = projector_from_basis(env.sensed_noise_basis());
        let (n_star, _) = select_column(&p, TIE_TOL).unwrap();
        let w = design_waveform(&p, n_star).unwrap();
        prop_assert!((w.energy() - 1.0).abs() < 1e-10);
        let outside = (w.samples() - p.apply(&w.samples().clone_owned())).norm();
        prop_assert!(outside < 1e-9);
        let leak = (env.sensed_signal_basis().columns().adjoint() * w.samples()).norm();
        prop_assert!(leak < 1e-9);
    }
}
