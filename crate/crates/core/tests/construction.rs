use polar_gfd::construction::{ga_means, reliability_order};
use polar_gfd::{construct_code, CodeDescriptor, PolarCode};
use proptest::prelude::*;

/// Bhattacharyya parameters of the BEC-style recursion, used as an
/// independent ranking of the bit-channels.
fn bhattacharyya(stages: usize, sigma: f64) -> Vec<f64> {
    let mut z = vec![(-1.0 / (2.0 * sigma * sigma)).exp()];
    for _ in 0..stages {
        z = z.iter().flat_map(|&v| [2.0 * v - v * v, v * v]).collect();
    }
    z
}

#[test]
fn n8_k4_frozen_set_matches_bhattacharyya_oracle() {
    let z = bhattacharyya(3, 0.5);
    let mut worst: Vec<usize> = (0..8).collect();
    worst.sort_by(|&a, &b| z[b].total_cmp(&z[a]).then(a.cmp(&b)));
    let mut oracle = worst[..4].to_vec();
    oracle.sort();
    assert_eq!(oracle, vec![0, 1, 2, 4]);
    assert_eq!(construct_code(3, 4, 0.5).unwrap().frozen_indices(), oracle);
}

#[test]
fn trivial_rates() {
    assert_eq!(construct_code(3, 8, 0.5).unwrap().flags(), &[1; 8]);
    assert_eq!(construct_code(3, 0, 0.5).unwrap().flags(), &[0; 8]);
}

#[test]
fn parameter_errors() {
    for (n, k, s) in [(3, 9, 0.5), (3, 2, 0.0), (3, 2, -0.5), (30, 2, 0.5)] {
        assert!(matches!(
            construct_code(n, k, s),
            Err(polar_gfd::Error::Parameter(_))
        ));
    }
}

/// `j` dominates `i` when every set bit of `i` is set in `j`; such a channel
/// is never less reliable.
#[test]
fn universal_partial_order_holds() {
    for stages in 1..=6 {
        for sigma in [0.3, 0.5, 0.8, 1.2] {
            let order = reliability_order(stages, sigma);
            let mut rank = vec![0; order.len()];
            for (r, &i) in order.iter().enumerate() {
                rank[i] = r;
            }
            for i in 0..order.len() {
                for j in 0..order.len() {
                    if i != j && i & j == i {
                        assert!(
                            rank[j] > rank[i],
                            "n={stages} sigma={sigma}: {j} ranked below {i}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn means_are_finite_and_positive() {
    for sigma in [0.1, 0.5, 2.0] {
        let m = ga_means(10, sigma);
        assert!(m.iter().all(|v| v.is_finite() && *v > 0.0), "sigma={sigma}");
    }
}

proptest! {
    #[test]
    fn construction_is_deterministic_and_has_k_info_bits(
        stages in 1usize..=9, frac in 0.0f64..=1.0, sigma in 0.2f64..2.0
    ) {
        let k = ((1usize << stages) as f64 * frac) as usize;
        let a = construct_code(stages, k, sigma).unwrap();
        let b = construct_code(stages, k, sigma).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.flags().iter().filter(|&&s| s == 1).count(), k);
        prop_assert_eq!(a.k(), k);
    }

    #[test]
    fn nested_codes(stages in 1usize..=8, sigma in 0.3f64..1.5) {
        // a larger K only unfreezes channels
        let n = 1usize << stages;
        let mut prev = construct_code(stages, 0, sigma).unwrap();
        for k in 1..=n {
            let next = construct_code(stages, k, sigma).unwrap();
            prop_assert!(prev.flags().iter().zip(next.flags()).all(|(a, b)| a <= b));
            prev = next;
        }
    }
}

#[test]
fn descriptor_file_round_trip() {
    let dir = std::env::temp_dir().join(format!("polar-gfd-desc-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("code.json");
    let code = construct_code(6, 20, 0.5).unwrap();
    code.save(&path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let desc: CodeDescriptor = serde_json::from_str(&text).unwrap();
    assert_eq!(desc.k, 20);
    assert!(text.contains("\"K\": 20"));
    assert_eq!(PolarCode::load(&path).unwrap(), code);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn descriptor_validation() {
    let bad_order = CodeDescriptor {
        n: 2,
        k: 2,
        design_sigma: 0.5,
        frozen_indices: vec![1, 0],
    };
    assert!(PolarCode::from_descriptor(&bad_order).is_err());
    let bad_k = CodeDescriptor {
        n: 2,
        k: 3,
        design_sigma: 0.5,
        frozen_indices: vec![0, 1],
    };
    assert!(PolarCode::from_descriptor(&bad_k).is_err());
}
