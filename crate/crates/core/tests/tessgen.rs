use givp::pslg::{validate, PslgFile};
use givp::tessgen::{generate, generate_file, TessGenConfig, TessGenError};
use proptest::prelude::*;

#[test]
fn same_seed_gives_identical_files() {
    let cfg = TessGenConfig::new(42, 30, 40);
    let a = generate_file(&cfg).unwrap().to_json_string();
    let b = generate_file(&cfg).unwrap().to_json_string();
    assert_eq!(a, b);
    let other = generate_file(&TessGenConfig { seed: 43, ..cfg })
        .unwrap()
        .to_json_string();
    assert_ne!(a, other);
}

#[test]
fn header_round_trips() {
    let cfg = TessGenConfig::new(5, 12, 10);
    let file = generate_file(&cfg).unwrap();
    let back: PslgFile = serde_json::from_str(&file.to_json_string()).unwrap();
    let gen = back.gen.unwrap();
    assert_eq!(gen["rng_id"], "chacha8");
    assert_eq!(gen["n_edge_attempts"], 10);
    let mut stored: TessGenConfig = serde_json::from_value(gen).unwrap();
    assert_eq!(stored, cfg);
    stored.seed += 1;
    assert_ne!(stored, cfg);
}

#[test]
fn too_few_points_are_refused() {
    for n in [0, 1, 2] {
        assert!(matches!(
            generate(&TessGenConfig::new(0, n, 5)),
            Err(TessGenError::TooFewPoints(_))
        ));
    }
}

#[test]
fn points_without_attempts_are_still_joined() {
    let g = generate(&TessGenConfig::new(9, 8, 0)).unwrap();
    assert!(validate(&g).is_valid());
    assert_eq!(g.num_components(), 1);
    assert!((0..g.num_vertices()).all(|v| g.degree(v) >= 2));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn generated_graphs_are_valid(seed in any::<u64>(), n in 3usize..40, extra in 0usize..40) {
        let cfg = TessGenConfig::new(seed, n, extra);
        let g = generate(&cfg).unwrap();
        let report = validate(&g);
        prop_assert!(report.is_valid(), "{:?}", report.violations);
        prop_assert!(g.num_vertices() >= n);
        prop_assert_eq!(g.num_components(), 1);
        for v in 0..g.num_vertices() {
            prop_assert!(g.degree(v) >= 2, "vertex {} has degree {}", v, g.degree(v));
        }
        for p in &g.vertices()[..n] {
            prop_assert!(cfg.bbox.contains(*p));
        }
    }

    #[test]
    fn sampled_points_come_first(seed in any::<u64>()) {
        let small = generate(&TessGenConfig::new(seed, 10, 0)).unwrap();
        let large = generate(&TessGenConfig::new(seed, 10, 20)).unwrap();
        prop_assert_eq!(&small.vertices()[..10], &large.vertices()[..10]);
    }
}
