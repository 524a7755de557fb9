//! Class-split distributions, histograms and the correlation matrix.

use attrition::eda::{eda_report, DEFAULT_BINS};
use attrition::fixtures;

fn main() -> attrition::Result<()> {
    let table = fixtures::synthetic_hr(1000, 3, 0.05);
    let report = eda_report(&table, DEFAULT_BINS)?;

    println!("rows: {}", report.n_rows);
    for (column, n) in report.missing.iter().filter(|(_, &n)| n > 0) {
        println!("missing {column:<24} {n}");
    }
    let rel = report
        .categorical
        .iter()
        .find(|d| d.column == "relevent_experience")
        .expect("column present");
    print!("{}", rel.to_csv_string()?);
    for (column, r) in report.target_correlations() {
        println!("corr({column}, target) = {r:?}");
    }
    let names: Vec<String> = report.files()?.into_iter().map(|(n, _)| n).collect();
    println!("files: {names:?}");
    Ok(())
}
