mod common;

use approx::assert_abs_diff_eq;
use polar_gfd::{
    combine, encode, f_step, g_step, polar_transform, sc_decode, FKernel, PolarCode, ScDecoderF32,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{kronecker_encode, noisy_frame, structured_code};

#[test]
fn encode_small_rows() {
    let rate1 = |n| PolarCode::from_flags(vec![1; n], 0.5).unwrap();
    assert_eq!(encode(&[0, 1], &rate1(2)).unwrap(), vec![1, 1]);
    assert_eq!(encode(&[0, 0, 0, 1], &rate1(4)).unwrap(), vec![1, 1, 1, 1]);
    assert_eq!(encode(&[0; 8], &rate1(8)).unwrap(), vec![0; 8]);
}

#[test]
fn encode_rejects_frozen_ones() {
    let code = PolarCode::from_frozen(2, &[0], 0.5).unwrap();
    assert!(matches!(
        encode(&[1, 0, 0, 0], &code),
        Err(polar_gfd::Error::Contract(_))
    ));
    assert!(encode(&[0, 0, 0], &code).is_err());
}

#[test]
fn transform_is_an_involution_exhaustively() {
    for n in [1usize, 2, 4, 8, 16] {
        for w in 0..1u32 << n {
            let u: Vec<u8> = (0..n).map(|i| ((w >> i) & 1) as u8).collect();
            let mut x = u.clone();
            polar_transform(&mut x);
            polar_transform(&mut x);
            assert_eq!(x, u);
        }
    }
}

proptest! {
    #[test]
    fn encode_matches_kronecker(stages in 0usize..=6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u: Vec<u8> = (0..1usize << stages).map(|_| rng.gen_range(0..=1)).collect();
        let code = PolarCode::from_flags(vec![1; u.len()], 0.5).unwrap();
        prop_assert_eq!(encode(&u, &code).unwrap(), kronecker_encode(&u));
    }

    #[test]
    fn f_is_odd_and_bounded(a in -30.0f64..30.0, b in -30.0f64..30.0) {
        let fab = f_step(&[a, b], FKernel::Exact)[0];
        prop_assert!(fab.abs() <= a.abs().min(b.abs()) + 1e-12);
        let fneg = f_step(&[-a, b], FKernel::Exact)[0];
        prop_assert!((fab + fneg).abs() < 1e-12);
    }

    #[test]
    fn sc_min_sum_is_scale_invariant(seed in any::<u64>(), c in 0.01f64..100.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let code = structured_code(&mut rng, 5);
        let llrs: Vec<f64> = (0..32).map(|_| rng.gen_range(-4.0..4.0)).collect();
        let scaled: Vec<f64> = llrs.iter().map(|v| v * c).collect();
        prop_assert_eq!(
            sc_decode(&llrs, &code, FKernel::MinSum).u_hat,
            sc_decode(&scaled, &code, FKernel::MinSum).u_hat
        );
    }
}

#[test]
fn step_examples() {
    assert_eq!(f_step(&[0.0, 5.0], FKernel::Exact), vec![0.0]);
    assert_abs_diff_eq!(f_step(&[2.0, 3.0], FKernel::Exact)[0], 1.6936, epsilon = 1e-3);
    assert_abs_diff_eq!(f_step(&[-2.0, 3.0], FKernel::Exact)[0], -1.6936, epsilon = 1e-3);
    assert_eq!(f_step(&[-2.0, 3.0], FKernel::MinSum), vec![-2.0]);
    assert_eq!(g_step(&[1.0, 2.0], &[0]), vec![3.0]);
    assert_eq!(g_step(&[1.0, 2.0], &[1]), vec![1.0]);
    assert_eq!(g_step(&[-4.0, 2.5], &[1]), vec![6.5]);
    assert_eq!(combine(&[0], &[1]), vec![1, 1]);
    assert_eq!(combine(&[1, 0], &[1, 1]), vec![0, 1, 1, 1]);
}

#[test]
fn f_saturates_without_infinities() {
    let v = f_step(&[1e6f64, 1e6], FKernel::Exact)[0];
    assert!(v.is_finite() && v > 30.0);
    let v = f_step(&[-800.0f64, 800.0], FKernel::Exact)[0];
    assert!(v.is_finite() && v < -30.0);
}

#[test]
fn sc_hand_trace_n2() {
    let code = PolarCode::from_flags(vec![1, 1], 0.5).unwrap();
    let out = sc_decode(&[-1.0, 3.0], &code, FKernel::Exact);
    assert_eq!(out.u_hat, vec![1, 0]);
    assert_eq!(out.x_hat, vec![1, 0]);
}

#[test]
fn sc_all_frozen_gives_zero() {
    let code = PolarCode::from_flags(vec![0; 16], 0.5).unwrap();
    let llrs: Vec<f64> = (0..16).map(|i| -(i as f64) - 1.0).collect();
    assert_eq!(sc_decode(&llrs, &code, FKernel::Exact).u_hat, vec![0; 16]);
}

#[test]
fn sc_recovers_noiseless_frames() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (stages, k) in [(3, 4), (5, 16), (7, 64), (8, 200)] {
        let code = polar_gfd::construct_code(stages, k, 0.5).unwrap();
        for _ in 0..1000 {
            let mut u = vec![0u8; code.len()];
            for i in code.info_indices() {
                u[i] = rng.gen_range(0..=1);
            }
            let x = encode(&u, &code).unwrap();
            let llrs: Vec<f64> = x.iter().map(|&b| (1.0 - 2.0 * f64::from(b)) * 4.0).collect();
            assert_eq!(sc_decode(&llrs, &code, FKernel::Exact).u_hat, u);
        }
    }
}

#[test]
fn sc_reencoding_is_consistent() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..300 {
        let code = structured_code(&mut rng, 6);
        let (_, llrs) = noisy_frame(&mut rng, &code, 0.9);
        for kernel in [FKernel::Exact, FKernel::MinSum] {
            let out = sc_decode(&llrs, &code, kernel);
            assert_eq!(out.x_hat, encode(&out.u_hat, &code).unwrap());
        }
    }
}

#[test]
fn sc_f32_agrees_with_f64() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let code = polar_gfd::construct_code(7, 64, 0.5).unwrap();
    let mut dec = ScDecoderF32::new(&code, FKernel::Exact);
    for _ in 0..200 {
        let (_, llrs) = noisy_frame(&mut rng, &code, 0.4);
        let l32: Vec<f32> = llrs.iter().map(|&v| v as f32).collect();
        let want = sc_decode(&llrs, &code, FKernel::Exact).u_hat;
        assert_eq!(dec.decode_in_place(&l32), &want[..]);
    }
}
