//! Per-class precision, recall and f1 before and after oversampling.

use attrition::dtree::{DecisionTree, TreeParams};
use attrition::evaluate::{metrics, oversample_minority};
use attrition::fixtures;
use attrition::preprocess::{FittedPreprocessor, PreprocessConfig};
use attrition::table::class_counts;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> attrition::Result<()> {
    let raw = fixtures::synthetic_hr(400, 5, 0.0);
    let (_, table) = FittedPreprocessor::fit_transform(&raw, PreprocessConfig::default())?;
    let (x, y) = table.split_columns()?;
    let params = TreeParams {
        max_depth: Some(3),
        ..TreeParams::default()
    };

    let tree = DecisionTree::fit(&x, &y, params)?;
    println!("original {:?}\n{}", class_counts(&y), metrics(&y, &tree.predict_table(&x)?)?);

    let (xb, yb) = oversample_minority(&x, &y, &mut ChaCha8Rng::seed_from_u64(0))?;
    let tree = DecisionTree::fit(&xb, &yb, params)?;
    let report = metrics(&yb, &tree.predict_table(&xb)?)?;
    println!("oversampled {:?}\n{report}", class_counts(&yb));
    println!("{}", report.to_json()?);
    Ok(())
}
