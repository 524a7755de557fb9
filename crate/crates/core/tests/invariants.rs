use attrition::eda::{categorical_distribution, pearson};
use attrition::evaluate::kfold_indices;
use attrition::fixtures;
use attrition::forest::{ForestParams, RandomForest};
use attrition::preprocess::{
    apply_encoding, apply_impute, apply_scale, fit_encodings, fit_impute, fit_scale, EncodingKind,
    FittedPreprocessor, OrderPolicy, PreprocessConfig,
};
use attrition::table::{ColumnRole, LoadOptions, Table};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn pearson_is_symmetric_bounded_and_affine_invariant(
        pairs in prop::collection::vec((-100.0..100.0f64, -100.0..100.0f64), 3..40),
        scale in 0.1..10.0f64,
        shift in -50.0..50.0f64,
    ) {
        let x: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let y: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        let r = pearson(&x, &y).unwrap();
        prop_assert!((-1.0..=1.0).contains(&r));
        prop_assert!((r - pearson(&y, &x).unwrap()).abs() < 1e-12);
        let xs: Vec<f64> = x.iter().map(|v| v * scale + shift).collect();
        prop_assert!((r - pearson(&xs, &y).unwrap()).abs() < 1e-9);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        prop_assert!((r + pearson(&neg, &y).unwrap()).abs() < 1e-12);
        prop_assert!((pearson(&x, &x).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kfold_partitions_rows(n in 2..200usize, k in 2..12usize, seed: u64) {
        prop_assume!(k <= n);
        let folds = kfold_indices(n, k, seed).unwrap();
        prop_assert_eq!(folds.len(), k);
        let sizes: Vec<usize> = folds.iter().map(Vec::len).collect();
        let (lo, hi) = (sizes.iter().min().unwrap(), sizes.iter().max().unwrap());
        prop_assert!(hi - lo <= 1);
        let mut all = folds.concat();
        all.sort_unstable();
        prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
        prop_assert_eq!(&folds, &kfold_indices(n, k, seed).unwrap());
    }
}

#[test]
fn one_hot_indicators_partition_rows() {
    let raw = fixtures::synthetic_hr(300, 4, 0.1);
    let filled = apply_impute(&raw, &fit_impute(&raw).unwrap()).unwrap();
    let maps = fit_encodings(&filled, OrderPolicy::Alphabetical, 5).unwrap();
    let encoded = apply_encoding(&filled, &maps).unwrap();
    let one_hot: Vec<_> = maps.iter().filter(|m| m.kind == EncodingKind::OneHot).collect();
    assert!(!one_hot.is_empty());
    for m in one_hot {
        let cols: Vec<Vec<f64>> = m
            .output_columns()
            .iter()
            .map(|c| encoded.numeric_values(c).unwrap())
            .collect();
        for r in 0..encoded.n_rows() {
            let row: Vec<f64> = cols.iter().map(|c| c[r]).collect();
            assert!(row.iter().all(|&v| v == 0.0 || v == 1.0));
            assert_eq!(row.iter().sum::<f64>(), 1.0, "{} row {r}", m.column);
        }
    }
    for m in maps.iter().filter(|m| m.kind == EncodingKind::Label) {
        let codes = encoded.numeric_values(&m.column).unwrap();
        assert!(codes.iter().all(|&c| c.fract() == 0.0 && (c as usize) < m.categories.len()));
    }
}

#[test]
fn scaled_training_data_lies_in_unit_interval() {
    let raw = fixtures::synthetic_hr(250, 6, 0.05);
    let filled = apply_impute(&raw, &fit_impute(&raw).unwrap()).unwrap();
    let encoded = apply_encoding(&filled, &fit_encodings(&filled, OrderPolicy::Alphabetical, 5).unwrap()).unwrap();
    let factors = fit_scale(&encoded).unwrap();
    let scaled = apply_scale(&encoded, &factors).unwrap();
    for (decl, _) in scaled.columns().filter(|(d, _)| d.role == ColumnRole::Feature) {
        let v = scaled.numeric_values(&decl.name).unwrap();
        let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        assert!(max <= 1.0, "{} reaches {max}", decl.name);
        if factors.get(&decl.name).is_some_and(|f| f != 1.0) {
            assert_eq!(max, 1.0, "{} does not reach 1", decl.name);
        }
    }
}

#[test]
fn preprocessor_replays_identically() {
    let raw = fixtures::synthetic_hr(120, 12, 0.1);
    let (pre, once) = FittedPreprocessor::fit_transform(&raw, PreprocessConfig::default()).unwrap();
    let restored = FittedPreprocessor::from_json(&pre.to_json().unwrap()).unwrap();
    assert_eq!(restored.transform(&raw).unwrap(), once);
}

#[test]
fn csv_round_trip_preserves_table() {
    let t = fixtures::synthetic_hr(80, 3, 0.15);
    let mut buf = Vec::new();
    t.write_csv(&mut buf).unwrap();
    let back = Table::read_csv(buf.as_slice(), t.schema(), LoadOptions::default()).unwrap();
    assert_eq!(back, t);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    t.save_csv(&path).unwrap();
    assert_eq!(Table::load_csv(&path, t.schema()).unwrap(), t);
}

#[test]
fn distribution_matches_hand_tally() {
    let t = fixtures::worked_example();
    let y = t.target_labels().unwrap();
    let d = categorical_distribution(&t, "relevent_experience", &y).unwrap();
    assert_eq!(d.get("Has relevent experience"), Some([2, 3]));
    assert_eq!(d.get("No relevent experience"), Some([2, 1]));
    assert_eq!(d.total(), 8);
}

#[test]
fn forest_is_independent_of_thread_count() {
    let raw = fixtures::synthetic_hr(150, 21, 0.0);
    let (_, t) = FittedPreprocessor::fit_transform(&raw, PreprocessConfig::default()).unwrap();
    let (x, y) = t.split_columns().unwrap();
    let params = ForestParams {
        n_estimators: 16,
        seed: 5,
        ..ForestParams::default()
    };
    let fit_with = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| RandomForest::fit(&x, &y, params).unwrap())
    };
    let one = fit_with(1);
    let many = fit_with(4);
    assert_eq!(one, many);
    assert_eq!(one.to_json().unwrap(), many.to_json().unwrap());
    let sum: f64 = one.feature_importances.values().sum();
    assert!((sum - 1.0).abs() < 1e-12);
}
