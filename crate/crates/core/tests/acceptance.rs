//! Acceptance criteria, one PASS/FAIL/SKIP line each. Dataset-conditioned
//! checks run when `ATTRITION_KAGGLE_CSV` names the labelled HR training
//! CSV.

mod common;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use attrition::dtree::{best_split, entropy, information_gain, numeric_threshold, TiePolicy};
use attrition::eda::correlation_matrix;
use attrition::evaluate::{cross_validate, metrics, oversample_indices, CvScheme};
use attrition::fixtures;
use attrition::forest::ForestParams;
use attrition::model::ModelSpec;
use attrition::pipeline::{run_pipeline, PipelineConfig};
use attrition::preprocess::{fit_encoding, EncodingKind, FittedPreprocessor, OrderPolicy, PreprocessConfig};
use attrition::table::{class_counts, Label, Table};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

enum Verdict {
    Pass(String),
    Fail(String),
    Skip(String),
}

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(name: &str, got: f64, want: f64, tol: f64) -> Result<(), String> {
    ensure((got - want).abs() <= tol, || format!("{name} = {got}, expected {want} ± {tol}"))
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn worked_example() -> Check {
    let t = fixtures::worked_example();
    let (x, y) = t.split_columns().map_err(e)?;
    let h = entropy(&class_counts(&y)).map_err(e)?;
    ensure(h == 1.0, || format!("entropy(target) = {h}"))?;

    let enrolled = information_gain(&x, "enrolled_university", &y).map_err(e)?;
    within("H(T|enrolled_university) vs 0.853", enrolled.conditional_entropy, 0.853, 0.01)?;
    within("H(T|enrolled_university) vs oracle", enrolled.conditional_entropy, 0.856844, 1e-6)?;
    within("gain(enrolled_university)", enrolled.information_gain, 0.147, 0.01)?;

    let rel = information_gain(&x, "relevent_experience", &y).map_err(e)?;
    let city = information_gain(&x, "City_deve", &y).map_err(e)?;
    within("H(T|relevent_experience)", rel.conditional_entropy, 0.945, 0.01)?;
    within("H(T|City_deve)", city.conditional_entropy, 0.945, 0.01)?;
    within("H(T|relevent_experience) - H(T|City_deve)", rel.conditional_entropy, city.conditional_entropy, 1e-12)?;

    let theta = numeric_threshold(&x.numeric_values("City_deve").map_err(e)?).map_err(e)?;
    ensure(theta == 0.81, || format!("threshold = {theta}"))?;

    let names = x.column_names();
    let choice = best_split(&x, &y, &names, TiePolicy::FirstInSchemaOrder, &mut ChaCha8Rng::seed_from_u64(0))
        .map_err(e)?
        .ok_or("no split chosen")?;
    ensure(choice.best.column == "enrolled_university", || format!("best split {}", choice.best.column))?;
    let groups = choice.tie_groups();
    let tie: Vec<&str> = groups
        .iter()
        .find(|g| g.len() == 2)
        .map(|g| g.iter().map(|c| c.column.as_str()).collect())
        .unwrap_or_default();
    ensure(
        tie.contains(&"relevent_experience") && tie.contains(&"City_deve"),
        || format!("tie groups {:?}", groups.iter().map(|g| g.iter().map(|c| &c.column).collect::<Vec<_>>()).collect::<Vec<_>>()),
    )?;
    Ok(format!(
        "H={h}, H(T|enrolled)={:.6}, H(T|rel)=H(T|City)={:.6}, gain={:.6}, theta={theta}",
        enrolled.conditional_entropy, rel.conditional_entropy, enrolled.information_gain
    ))
}

fn major_discipline_order() -> Check {
    let schema = fixtures::hr_schema();
    let decl = &schema.columns()[schema.index_of("major_discipline").ok_or("major_discipline not in schema")?];
    let values = ["STEM", "Business Degree", "Arts", "Humanities", "No Major", "Other"];
    let data = attrition::table::ColumnData::Categorical(values.iter().rev().map(|v| Some(v.to_string())).collect());
    let map = fit_encoding(decl, &data, OrderPolicy::SchemaOrder, values.len()).map_err(e)?;
    ensure(map.kind == EncodingKind::Label, || "not label-encoded".into())?;
    for (code, v) in values.iter().enumerate() {
        ensure(map.code(v) == Some(code), || format!("{v} -> {:?}, expected {code}", map.code(v)))?;
    }
    Ok("STEM=0 Business Degree=1 Arts=2 Humanities=3 No Major=4 Other=5".into())
}

fn balanced_perfect_report() -> Check {
    let mut original = vec![0u8; 14381];
    original.extend(vec![1u8; 4777]);
    let idx = oversample_indices(&original, &mut ChaCha8Rng::seed_from_u64(0)).map_err(e)?;
    let y: Vec<Label> = idx.iter().map(|&i| original[i]).collect();
    ensure(class_counts(&y) == [14381, 14381], || format!("oversampled counts {:?}", class_counts(&y)))?;
    let r = metrics(&y, &y).map_err(e)?;
    for (name, m) in [("0", &r.class_0), ("1", &r.class_1), ("macro avg", &r.macro_avg), ("weighted avg", &r.weighted_avg)] {
        ensure(m.precision == 1.0 && m.recall == 1.0 && m.f1 == 1.0, || format!("{name} row not all 1.00"))?;
    }
    ensure(r.class_0.support == 14381 && r.class_1.support == 14381, || "class supports".into())?;
    ensure(r.accuracy == 1.0 && r.total() == 28762, || format!("accuracy {} support {}", r.accuracy, r.total()))?;
    Ok("14381 + 4777 -> 28762 rows, every cell 1.00".into())
}

fn kaggle_table() -> Option<Result<Table, String>> {
    let path = PathBuf::from(std::env::var_os("ATTRITION_KAGGLE_CSV")?);
    Some(Table::load_csv(&path, &fixtures::hr_schema()).map_err(e))
}

fn kaggle_missing(t: &Table) -> Check {
    let want = [
        ("gender", 4508),
        ("company_type", 6140),
        ("company_size", 5938),
        ("experience", 65),
        ("last_new_job", 423),
        ("education_level", 460),
        ("enrolled_university", 386),
        ("major_discipline", 2813),
    ];
    let got = t.missing_counts();
    for (col, n) in want {
        ensure(got.get(col) == Some(&n), || format!("{col}: {:?} missing, expected {n}", got.get(col)))?;
    }
    Ok(format!("{} rows, 8 columns match", t.n_rows()))
}

fn kaggle_correlations(t: &Table) -> Check {
    let m = correlation_matrix(t);
    let want = [("enrollee_id", 0.05), ("city_development_index", -0.34), ("training_hours", -0.002)];
    let mut found = Vec::new();
    for (col, r) in want {
        let got = m.get("target", col).ok_or_else(|| format!("no correlation for {col}"))?;
        within(col, got, r, 0.02)?;
        found.push(format!("{col}={got:.3}"));
    }
    Ok(found.join(", "))
}

fn property(suite: fn(u32) -> common::Outcome, cases: u32) -> Check {
    suite(cases).map(|()| format!("{cases} cases"))
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().map_err(e)?;
    let data = dir.path().join("hr.csv");
    fixtures::synthetic_hr(150, 31, 0.05).save_csv(&data).map_err(e)?;
    let run = |name: &str| {
        run_pipeline(&PipelineConfig {
            data: Some(data.clone()),
            n_trees: 15,
            cv: CvScheme::Kfold { k: 5 },
            seed: 3,
            out: dir.path().join(name),
            ..PipelineConfig::default()
        })
    };
    let a = run("a").map_err(e)?;
    run("b").map_err(e)?;
    for path in &a.written {
        let name = path.file_name().expect("file name");
        let left = std::fs::read(path).map_err(e)?;
        let right = std::fs::read(dir.path().join("b").join(name)).map_err(e)?;
        ensure(left == right, || format!("{} differs", name.to_string_lossy()))?;
    }
    Ok(format!("{} files identical", a.written.len()))
}

fn desk_scale() -> Check {
    let raw = fixtures::synthetic_hr(200, 2024, 0.0);
    let (_, t) = FittedPreprocessor::fit_transform(&raw, PreprocessConfig::default()).map_err(e)?;
    let (x, y) = t.split_columns().map_err(e)?;
    let start = Instant::now();
    let forest = ModelSpec::Forest(ForestParams {
        n_estimators: 25,
        ..ForestParams::default()
    });
    let cv = cross_validate(&forest, &x, &y, CvScheme::Loocv, 0, false).map_err(e)?;
    let elapsed = start.elapsed();
    let base = cross_validate(&ModelSpec::Majority, &x, &y, CvScheme::Loocv, 0, false).map_err(e)?;
    ensure(elapsed.as_secs() < 300, || format!("took {elapsed:?}"))?;
    ensure(cv.mean_accuracy > base.mean_accuracy, || {
        format!("forest {} <= majority {}", cv.mean_accuracy, base.mean_accuracy)
    })?;
    Ok(format!(
        "forest {:.3} > majority {:.3}, {:.1}s",
        cv.mean_accuracy,
        base.mean_accuracy,
        elapsed.as_secs_f64()
    ))
}

fn main() -> ExitCode {
    let mut results: Vec<(&str, Verdict)> = Vec::new();
    let mut record = |name, check: Check| {
        results.push((
            name,
            match check {
                Ok(d) => Verdict::Pass(d),
                Err(d) => Verdict::Fail(d),
            },
        ))
    };
    record("worked-example oracle suite", worked_example());
    record("major_discipline schema_order label encoding", major_discipline_order());
    record("perfect report on oversampled supports and its arithmetic", balanced_perfect_report());

    let props_start = Instant::now();
    record("property: entropy bounds and permutation invariance", property(common::entropy_properties, 200));
    record("property: gain identity and non-negativity", property(common::gain_properties, 200));
    record("property: best_split vs exhaustive enumeration", property(common::best_split_properties, 100));
    record("property: degenerate forest equals single tree", property(common::degenerate_forest_properties, 50));
    record("property: LOOCV vs hand-enumerated folds", property(common::loocv_properties, 50));
    record("property: logistic gradient vs central differences", property(common::gradient_properties, 50));
    record("property: pipeline runs are byte-identical", determinism());
    let props = props_start.elapsed();
    record(
        "property suites finish within 60 s",
        if props.as_secs() < 60 {
            Ok(format!("{:.2}s", props.as_secs_f64()))
        } else {
            Err(format!("{props:?}"))
        },
    );
    record("desk-scale LOOCV: 25-tree forest beats majority on 200 rows", desk_scale());

    match kaggle_table() {
        None => {
            for name in ["dataset: missing counts", "dataset: target correlations"] {
                results.push((name, Verdict::Skip("ATTRITION_KAGGLE_CSV not set".into())));
            }
        }
        Some(Err(err)) => {
            for name in ["dataset: missing counts", "dataset: target correlations"] {
                results.push((name, Verdict::Fail(err.clone())));
            }
        }
        Some(Ok(t)) => {
            let missing = kaggle_missing(&t);
            let corr = kaggle_correlations(&t);
            let to_verdict = |c: Check| match c {
                Ok(d) => Verdict::Pass(d),
                Err(d) => Verdict::Fail(d),
            };
            results.push(("dataset: missing counts", to_verdict(missing)));
            results.push(("dataset: target correlations", to_verdict(corr)));
        }
    }

    let mut failed = 0;
    for (name, verdict) in &results {
        match verdict {
            Verdict::Pass(d) => println!("PASS  {name} ({d})"),
            Verdict::Skip(d) => println!("SKIP  {name} ({d})"),
            Verdict::Fail(d) => {
                failed += 1;
                println!("FAIL  {name}: {d}");
            }
        }
    }
    println!("acceptance: {} criteria, {failed} failed", results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
