//! Forest, tree, logistic regression and the majority baseline on the same
//! folds.

use attrition::baselines::{compare_models, LogRegConfig};
use attrition::dtree::TreeParams;
use attrition::evaluate::CvScheme;
use attrition::fixtures;
use attrition::forest::ForestParams;
use attrition::model::ModelSpec;
use attrition::preprocess::{FittedPreprocessor, PreprocessConfig};

fn main() -> attrition::Result<()> {
    let raw = fixtures::synthetic_hr(500, 9, 0.05);
    let (_, table) = FittedPreprocessor::fit_transform(&raw, PreprocessConfig::default())?;
    let (x, y) = table.split_columns()?;
    let models = [
        ModelSpec::Forest(ForestParams {
            n_estimators: 30,
            ..ForestParams::default()
        }),
        ModelSpec::Tree(TreeParams::default()),
        ModelSpec::Logreg(LogRegConfig::default()),
        ModelSpec::Majority,
    ];
    let table = compare_models(&x, &y, &models, CvScheme::Kfold { k: 5 }, 1, false)?;
    print!("{}", table.to_csv_string());
    Ok(())
}
