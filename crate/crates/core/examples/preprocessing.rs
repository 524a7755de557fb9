//! Imputation, encoding and scaling fitted on one table and replayed on
//! another.

use attrition::fixtures;
use attrition::preprocess::{EncodingKind, FittedPreprocessor, OrderPolicy, PreprocessConfig};

fn main() -> attrition::Result<()> {
    let train = fixtures::synthetic_hr(300, 7, 0.1);
    let fresh = fixtures::synthetic_hr(5, 8, 0.2);
    println!("missing cells before: {}", train.total_missing());

    let config = PreprocessConfig {
        order_policy: OrderPolicy::SchemaOrder,
        ..PreprocessConfig::default()
    };
    let (pre, encoded) = FittedPreprocessor::fit_transform(&train, config)?;
    println!("missing cells after: {}", encoded.total_missing());

    for (column, value) in &pre.impute.0 {
        println!("impute {column:<24} {value:?}");
    }
    for map in &pre.encodings {
        match map.kind {
            EncodingKind::Label => println!("label   {:<24} {:?}", map.column, map.categories),
            EncodingKind::OneHot => println!("one-hot {:<24} {} columns", map.column, map.categories.len()),
        }
    }
    println!("encoded columns: {}", encoded.n_columns());

    let replayed = pre.transform(&fresh)?;
    println!("replayed {} rows into {} columns", replayed.n_rows(), replayed.n_columns());
    let round_trip = FittedPreprocessor::from_json(&pre.to_json()?)?;
    assert_eq!(round_trip, pre);
    Ok(())
}
