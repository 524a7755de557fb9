//! A random forest cross-validated with leave-one-out, with oversampling
//! applied inside each training fold.

use attrition::evaluate::{cross_validate, metrics, CvScheme};
use attrition::fixtures;
use attrition::forest::{ForestParams, RandomForest};
use attrition::model::ModelSpec;
use attrition::preprocess::{FittedPreprocessor, PreprocessConfig};

fn main() -> attrition::Result<()> {
    let raw = fixtures::synthetic_hr(200, 11, 0.05);
    let (_, table) = FittedPreprocessor::fit_transform(&raw, PreprocessConfig::default())?;
    let (x, y) = table.split_columns()?;

    let params = ForestParams {
        n_estimators: 25,
        seed: 42,
        ..ForestParams::default()
    };
    let cv = cross_validate(&ModelSpec::Forest(params), &x, &y, CvScheme::Loocv, 42, true)?;
    println!("folds: {}, mean accuracy: {:.4}", cv.fold_count, cv.mean_accuracy);
    println!("{}", metrics(&y, &cv.predictions)?);

    let forest = RandomForest::fit(&x, &y, params)?;
    let mut ranked: Vec<(&String, &f64)> = forest.feature_importances.iter().collect();
    ranked.sort_by(|a, b| b.1.total_cmp(a.1));
    for (name, imp) in ranked.into_iter().take(5) {
        println!("importance {name:<40} {imp:.4}");
    }
    Ok(())
}
