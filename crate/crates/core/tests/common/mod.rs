//! Property suites shared by the `properties` tests and the acceptance
//! runner. Each returns `Err(description)` on the first failing case.

#![allow(dead_code)]

use attrition::baselines::{log_loss, log_loss_gradient};
use attrition::dtree::{best_split, entropy, information_gain, DecisionTree, TiePolicy, TreeParams};
use attrition::evaluate::loocv;
use attrition::forest::{ForestParams, RandomForest, SubsetSize};
use attrition::model::{Classifier, Constant, FittedModel, ModelSpec};
use attrition::table::{ColumnData, ColumnSchema, Label, Table, TableSchema};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Outcome = Result<(), String>;

pub fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

/// Entropy straight from the definition.
pub fn oracle_entropy(counts: &[usize]) -> f64 {
    let n: usize = counts.iter().sum();
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n as f64;
            -p * p.log2()
        })
        .sum()
}

/// One row of a small mixed table: two categorical cells, one numeric cell
/// and the label.
#[derive(Debug, Clone)]
pub struct Row {
    pub a: &'static str,
    pub b: &'static str,
    pub c: f64,
    pub y: Label,
}

pub fn row() -> impl Strategy<Value = Row> {
    (
        prop::sample::select(vec!["x", "y", "z"]),
        prop::sample::select(vec!["p", "q"]),
        (0..5u8).prop_map(|v| f64::from(v) / 4.0),
        0..2u8,
    )
        .prop_map(|(a, b, c, y)| Row { a, b, c, y })
}

pub fn rows(max: usize) -> impl Strategy<Value = Vec<Row>> {
    prop::collection::vec(row(), 1..=max)
}

pub const COLUMNS: [&str; 3] = ["a", "b", "c"];

pub fn table_of(rows: &[Row]) -> (Table, Vec<Label>) {
    let schema = TableSchema::without_target(vec![
        ColumnSchema::categorical("a", Vec::<String>::new()),
        ColumnSchema::categorical("b", Vec::<String>::new()),
        ColumnSchema::numeric("c"),
    ])
    .expect("valid schema");
    let t = Table::new(
        schema,
        vec![
            ColumnData::Categorical(rows.iter().map(|r| Some(r.a.to_string())).collect()),
            ColumnData::Categorical(rows.iter().map(|r| Some(r.b.to_string())).collect()),
            ColumnData::Numeric(rows.iter().map(|r| Some(r.c)).collect()),
        ],
    )
    .expect("valid table");
    (t, rows.iter().map(|r| r.y).collect())
}

/// Conditional entropy by explicit partitioning: categorical columns by
/// value, the numeric column at its mean. A partition with one occupied
/// block leaves the parent entropy.
pub fn oracle_conditional(rows: &[Row], column: &str) -> f64 {
    let n = rows.len();
    let mean = rows.iter().map(|r| r.c).sum::<f64>() / n as f64;
    let key = |r: &Row| -> String {
        match column {
            "a" => r.a.to_string(),
            "b" => r.b.to_string(),
            _ => (r.c >= mean).to_string(),
        }
    };
    let mut blocks: Vec<(String, [usize; 2])> = Vec::new();
    for r in rows {
        let k = key(r);
        match blocks.iter_mut().find(|(b, _)| *b == k) {
            Some((_, c)) => c[r.y as usize] += 1,
            None => {
                let mut c = [0, 0];
                c[r.y as usize] += 1;
                blocks.push((k, c));
            }
        }
    }
    let mut parent = [0usize; 2];
    for r in rows {
        parent[r.y as usize] += 1;
    }
    if blocks.len() < 2 {
        return oracle_entropy(&parent);
    }
    blocks
        .iter()
        .map(|(_, c)| (c[0] + c[1]) as f64 / n as f64 * oracle_entropy(c))
        .sum()
}

pub fn oracle_gain(rows: &[Row], column: &str) -> f64 {
    let mut parent = [0usize; 2];
    for r in rows {
        parent[r.y as usize] += 1;
    }
    oracle_entropy(&parent) - oracle_conditional(rows, column)
}

/// Bounds `0 <= H <= log2(k)` and invariance under permutation.
pub fn entropy_properties(cases: u32) -> Outcome {
    let strategy = prop::collection::vec(0..60usize, 1..=6)
        .prop_filter("non-empty total", |c| c.iter().sum::<usize>() > 0)
        .prop_flat_map(|c| {
            let len = c.len();
            (Just(c), Just((0..len).collect::<Vec<_>>()).prop_shuffle())
        });
    runner(cases)
        .run(&strategy, |(counts, perm)| {
            let h = entropy(&counts).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let k = counts.iter().filter(|&&c| c > 0).count() as f64;
            check(h >= 0.0 && h <= k.log2() + 1e-12, || format!("H{counts:?} = {h} out of bounds"))?;
            check((h - oracle_entropy(&counts)).abs() <= 1e-12, || format!("H{counts:?} = {h} differs from definition"))?;
            let permuted: Vec<usize> = perm.iter().map(|&i| counts[i]).collect();
            let hp = entropy(&permuted).map_err(|e| TestCaseError::fail(e.to_string()))?;
            check((h - hp).abs() <= 1e-12, || format!("H{counts:?} = {h} but H{permuted:?} = {hp}"))
        })
        .map_err(|e| e.to_string())
}

/// Gain equals parent entropy minus the explicitly computed conditional
/// entropy, and lies in `[0, H(parent)]`.
pub fn gain_properties(cases: u32) -> Outcome {
    runner(cases)
        .run(&rows(6), |rows| {
            let (t, y) = table_of(&rows);
            for col in COLUMNS {
                let c = information_gain(&t, col, &y).map_err(|e| TestCaseError::fail(e.to_string()))?;
                let oracle = oracle_conditional(&rows, col);
                check((c.conditional_entropy - oracle).abs() <= 1e-12, || {
                    format!("{col}: conditional {} vs oracle {oracle} on {rows:?}", c.conditional_entropy)
                })?;
                check(
                    (c.information_gain - (c.parent_entropy - c.conditional_entropy)).abs() <= 1e-15,
                    || format!("{col}: gain identity broken"),
                )?;
                check(
                    c.information_gain >= -1e-12 && c.information_gain <= c.parent_entropy + 1e-12,
                    || format!("{col}: gain {} outside [0, {}]", c.information_gain, c.parent_entropy),
                )?;
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// `best_split` picks the first column (schema order) whose brute-force
/// gain is within 1e-9 of the maximum, or nothing when no gain is positive.
pub fn best_split_properties(cases: u32) -> Outcome {
    runner(cases)
        .run(&rows(8), |rows| {
            let (t, y) = table_of(&rows);
            let gains: Vec<f64> = COLUMNS.iter().map(|c| oracle_gain(&rows, c)).collect();
            let max = gains.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            let got = best_split(&t, &y, &COLUMNS, TiePolicy::FirstInSchemaOrder, &mut rng)
                .map_err(|e| TestCaseError::fail(e.to_string()))?;
            match got {
                None => check(max <= 1e-12, || format!("no split returned but max gain {max}")),
                Some(choice) => {
                    let expected = COLUMNS[gains.iter().position(|&g| max - g <= 1e-9).expect("max exists")];
                    check(choice.best.column == expected, || {
                        format!("picked {} expected {expected}; gains {gains:?}", choice.best.column)
                    })?;
                    check((choice.best.information_gain - max).abs() <= 1e-12, || {
                        format!("gain {} vs oracle {max}", choice.best.information_gain)
                    })?;
                    let mut tied: Vec<&str> = choice.tied_with_best.iter().map(|c| c.column.as_str()).collect();
                    tied.sort_unstable();
                    let mut want: Vec<&str> = COLUMNS
                        .iter()
                        .zip(&gains)
                        .filter(|(c, &g)| **c != expected && max - g <= 1e-9)
                        .map(|(c, _)| *c)
                        .collect();
                    want.sort_unstable();
                    check(tied == want, || format!("tie set {tied:?} expected {want:?}"))
                }
            }
        })
        .map_err(|e| e.to_string())
}

/// Without bootstrap and with every feature available at each node, every
/// forest member is the single tree and the vote is its prediction.
pub fn degenerate_forest_properties(cases: u32) -> Outcome {
    let strategy = (rows(12), 1..=3usize, any::<u64>(), prop::option::of(1..4usize));
    runner(cases)
        .run(&strategy, |(rows, n_trees, seed, max_depth)| {
            let (t, y) = table_of(&rows);
            let tree = DecisionTree::fit(&t, &y, TreeParams { max_depth, ..TreeParams::default() })
                .map_err(|e| TestCaseError::fail(e.to_string()))?;
            let forest = RandomForest::fit(
                &t,
                &y,
                ForestParams {
                    n_estimators: n_trees,
                    bootstrap: false,
                    feature_subset_size: SubsetSize::All,
                    max_depth,
                    seed,
                    ..ForestParams::default()
                },
            )
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
            for (i, member) in forest.trees.iter().enumerate() {
                check(member.root == tree.root, || format!("tree {i} differs from the single tree"))?;
            }
            let fp = forest.predict_table(&t).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let tp = tree.predict_table(&t).map_err(|e| TestCaseError::fail(e.to_string()))?;
            check(fp == tp, || format!("forest {fp:?} vs tree {tp:?}"))
        })
        .map_err(|e| e.to_string())
}

/// Leave-one-out against an explicit loop over held-out rows.
pub fn loocv_properties(cases: u32) -> Outcome {
    let strategy = (prop::collection::vec(row(), 2..=6), any::<u32>());
    runner(cases)
        .run(&strategy, |(rows, seed)| {
            let seed = u64::from(seed);
            let (t, y) = table_of(&rows);
            let spec = ModelSpec::Tree(TreeParams::default());
            let factory = |x: &Table, y: &[Label], s: u64| spec.fit(x, y, s);
            let cv = loocv(&factory, &t, &y, seed).map_err(|e| TestCaseError::fail(e.to_string()))?;

            let n = rows.len();
            let mut preds = Vec::with_capacity(n);
            for i in 0..n {
                let train: Vec<usize> = (0..n).filter(|&r| r != i).collect();
                let ty: Vec<Label> = train.iter().map(|&r| y[r]).collect();
                let model = if ty.iter().all(|&l| l == ty[0]) {
                    FittedModel::Constant(Constant { label: ty[0] })
                } else {
                    spec.fit(&t.take_rows(&train), &ty, seed + i as u64)
                        .map_err(|e| TestCaseError::fail(e.to_string()))?
                };
                let p = model
                    .predict_table(&t.take_rows(&[i]))
                    .map_err(|e| TestCaseError::fail(e.to_string()))?;
                preds.push(p[0]);
            }
            let acc = preds.iter().zip(&y).filter(|(p, t)| p == t).count() as f64 / n as f64;
            check(cv.fold_count == n, || format!("{} folds for {n} rows", cv.fold_count))?;
            check(cv.predictions == preds, || format!("{:?} vs hand {preds:?}", cv.predictions))?;
            check((cv.mean_accuracy - acc).abs() <= 1e-12, || {
                format!("mean accuracy {} vs hand {acc}", cv.mean_accuracy)
            })
        })
        .map_err(|e| e.to_string())
}

/// Analytic log-loss gradient against central differences. The relative
/// error is taken against `max(|analytic|, |numeric|, 1e-3)`.
pub fn gradient_properties(cases: u32) -> Outcome {
    let strategy = (1..=4usize, 1..=8usize).prop_flat_map(|(d, m)| {
        (
            prop::collection::vec(prop::collection::vec(-2.0..2.0f64, d), m),
            prop::collection::vec(0..2u8, m),
            prop::collection::vec(-1.5..1.5f64, d),
            -1.0..1.0f64,
        )
    });
    runner(cases)
        .run(&strategy, |(x, y, w, b)| {
            let (gw, gb) = log_loss_gradient(&w, b, &x, &y);
            let h = 1e-5;
            let rel = |a: f64, n: f64| (a - n).abs() / a.abs().max(n.abs()).max(1e-3);
            for j in 0..w.len() {
                let mut up = w.clone();
                let mut down = w.clone();
                up[j] += h;
                down[j] -= h;
                let fd = (log_loss(&up, b, &x, &y) - log_loss(&down, b, &x, &y)) / (2.0 * h);
                check(rel(gw[j], fd) < 1e-5, || format!("dw[{j}] {} vs {fd}", gw[j]))?;
            }
            let fd = (log_loss(&w, b + h, &x, &y) - log_loss(&w, b - h, &x, &y)) / (2.0 * h);
            check(rel(gb, fd) < 1e-5, || format!("db {gb} vs {fd}"))
        })
        .map_err(|e| e.to_string())
}
