//! Bundled datasets: the eight-row worked example and a synthetic
//! generator shaped like the HR job-change data.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::table::{ColumnData, LoadOptions, Table, TableSchema};

pub const WORKED_EXAMPLE_CSV: &str = include_str!("../data/worked_example.csv");
pub const WORKED_EXAMPLE_SCHEMA: &str = include_str!("../data/worked_example.toml");
pub const HR_SCHEMA: &str = include_str!("../data/hr_schema.toml");

pub fn worked_example_schema() -> TableSchema {
    TableSchema::from_toml_str(WORKED_EXAMPLE_SCHEMA).expect("bundled schema parses")
}

/// The eight-row sample with `City_deve`, `relevent_experience`,
/// `enrolled_university` and `target` (plus an `s_no` identifier).
pub fn worked_example() -> Table {
    Table::read_csv(WORKED_EXAMPLE_CSV.as_bytes(), &worked_example_schema(), LoadOptions::default())
        .expect("bundled table parses")
}

pub fn hr_schema() -> TableSchema {
    TableSchema::from_toml_str(HR_SCHEMA).expect("bundled schema parses")
}

/// Synthetic rows in the HR schema. The target is a deterministic function
/// of the features, so the data is conflict-consistent before any cells are
/// blanked. `missing_rate` blanks that fraction of cells in the columns
/// that are incomplete in the real data.
pub fn synthetic_hr(n_rows: usize, seed: u64, missing_rate: f64) -> Table {
    let schema = hr_schema();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let decl = |name: &str| {
        schema.columns()[schema.index_of(name).expect("column in schema")]
            .declared_values
            .clone()
    };
    let genders = decl("gender");
    let rel = decl("relevent_experience");
    let enrolled = decl("enrolled_university");
    let education = decl("education_level");
    let majors = decl("major_discipline");
    let experience = decl("experience");
    let sizes = decl("company_size");
    let types = decl("company_type");
    let last_job = decl("last_new_job");

    let mut id = Vec::with_capacity(n_rows);
    let mut city = Vec::with_capacity(n_rows);
    let mut cdi = Vec::with_capacity(n_rows);
    let mut cat_cols: Vec<Vec<Option<String>>> = (0..9).map(|_| Vec::with_capacity(n_rows)).collect();
    let mut hours = Vec::with_capacity(n_rows);
    let mut target = Vec::with_capacity(n_rows);

    for i in 0..n_rows {
        let dev: f64 = (rng.gen_range(450..=950) as f64) / 1000.0;
        let h: f64 = rng.gen_range(1..=336) as f64;
        let picks = [
            &genders, &rel, &enrolled, &education, &majors, &experience, &sizes, &types, &last_job,
        ]
        .map(|values| values.choose(&mut rng).expect("non-empty").clone());
        let label = (dev < 0.55)
            || (dev < 0.65 && picks[2] != "no_enrollment")
            || (picks[1] == "No relevent experience" && h < 40.0);

        id.push(Some((i + 1) as f64));
        city.push(Some(format!("city_{}", rng.gen_range(1..=40))));
        cdi.push(Some(dev));
        for (col, v) in cat_cols.iter_mut().zip(picks) {
            col.push(Some(v));
        }
        hours.push(Some(h));
        target.push(Some(if label { 1.0 } else { 0.0 }));
    }

    if missing_rate > 0.0 {
        // gender, enrolled_university, education_level, major_discipline,
        // experience, company_size, company_type, last_new_job
        for c in [0usize, 2, 3, 4, 5, 6, 7, 8] {
            for cell in cat_cols[c].iter_mut() {
                if rng.gen_bool(missing_rate) {
                    *cell = None;
                }
            }
        }
    }

    let mut columns = vec![
        ColumnData::Numeric(id),
        ColumnData::Categorical(city),
        ColumnData::Numeric(cdi),
    ];
    columns.extend(cat_cols.into_iter().map(ColumnData::Categorical));
    columns.push(ColumnData::Numeric(hours));
    columns.push(ColumnData::Numeric(target));
    Table::new(schema, columns).expect("generator matches schema")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_example_loads() {
        let t = worked_example();
        assert_eq!(t.n_rows(), 8);
        assert_eq!(t.target_labels().unwrap(), vec![1, 0, 0, 1, 0, 1, 0, 1]);
    }

    #[test]
    fn synthetic_is_deterministic_and_mixed() {
        let a = synthetic_hr(300, 3, 0.1);
        let b = synthetic_hr(300, 3, 0.1);
        assert_eq!(a, b);
        let y = a.target_labels().unwrap();
        let ones = y.iter().filter(|&&l| l == 1).count();
        assert!(ones > 30 && ones < 200, "{ones}");
        assert!(a.missing_counts()["gender"] > 0);
        assert_eq!(a.missing_counts()["city_development_index"], 0);
    }
}
