use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::oversample_minority;
use crate::error::{Error, Result};
use crate::model::{Classifier, Constant, ModelSpec};
use crate::table::{Label, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "snake_case")]
pub enum CvScheme {
    Loocv,
    Kfold { k: usize },
}

impl FromStr for CvScheme {
    type Err = Error;

    /// `loocv` or `kfold:K`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "loocv" {
            return Ok(CvScheme::Loocv);
        }
        if let Some(k) = s.strip_prefix("kfold:") {
            let k = k
                .parse()
                .map_err(|_| Error::Config(format!("bad fold count in {s:?}")))?;
            return Ok(CvScheme::Kfold { k });
        }
        Err(Error::Config(format!("unknown cv scheme {s:?} (expected loocv or kfold:K)")))
    }
}

impl fmt::Display for CvScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CvScheme::Loocv => write!(f, "loocv"),
            CvScheme::Kfold { k } => write!(f, "kfold:{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvResult {
    pub scheme: CvScheme,
    pub fold_count: usize,
    pub per_fold_accuracy: Vec<f64>,
    pub mean_accuracy: f64,
    /// Out-of-fold prediction for every row, in row order.
    pub predictions: Vec<Label>,
}

impl CvResult {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Shuffled row indices cut into `k` folds whose sizes differ by at most one.
pub fn kfold_indices(n_rows: usize, k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 || k > n_rows {
        return Err(Error::InvalidParameter(format!(
            "fold count {k} outside 2..={n_rows}"
        )));
    }
    let mut idx: Vec<usize> = (0..n_rows).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let (base, extra) = (n_rows / k, n_rows % k);
    let mut folds = Vec::with_capacity(k);
    let mut start = 0;
    for f in 0..k {
        let len = base + usize::from(f < extra);
        folds.push(idx[start..start + len].to_vec());
        start += len;
    }
    Ok(folds)
}

/// Runs each held-out fold: train on the complement with seed
/// `seed + fold`, score the fold. A single-class training fold predicts that
/// class without calling the factory.
pub fn run_folds<F, M>(
    factory: &F,
    features: &Table,
    target: &[Label],
    folds: &[Vec<usize>],
    scheme: CvScheme,
    seed: u64,
) -> Result<CvResult>
where
    F: Fn(&Table, &[Label], u64) -> Result<M> + Sync,
    M: Classifier,
{
    if target.len() != features.n_rows() {
        return Err(Error::LengthMismatch(features.n_rows(), target.len()));
    }
    let n = features.n_rows();
    let outcomes = folds
        .par_iter()
        .enumerate()
        .map(|(fold, test)| {
            let mut held_out = vec![false; n];
            for &r in test {
                held_out[r] = true;
            }
            let train: Vec<usize> = (0..n).filter(|&r| !held_out[r]).collect();
            let train_y: Vec<Label> = train.iter().map(|&r| target[r]).collect();
            let test_x = features.take_rows(test);
            let preds = if train_y.iter().all(|&l| l == train_y[0]) {
                Constant { label: train_y[0] }.predict_table(&test_x)?
            } else {
                let model = factory(&features.take_rows(&train), &train_y, seed.wrapping_add(fold as u64))?;
                model.predict_table(&test_x)?
            };
            let correct = test.iter().zip(&preds).filter(|(&r, &p)| target[r] == p).count();
            Ok((preds, correct as f64 / test.len() as f64))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut predictions = vec![0; n];
    let mut per_fold_accuracy = Vec::with_capacity(folds.len());
    for (test, (preds, acc)) in folds.iter().zip(outcomes) {
        for (&r, p) in test.iter().zip(preds) {
            predictions[r] = p;
        }
        per_fold_accuracy.push(acc);
    }
    let mean_accuracy = per_fold_accuracy.iter().sum::<f64>() / per_fold_accuracy.len() as f64;
    Ok(CvResult {
        scheme,
        fold_count: folds.len(),
        per_fold_accuracy,
        mean_accuracy,
        predictions,
    })
}

/// Leave-one-out: fold `i` holds out row `i` alone.
pub fn loocv<F, M>(factory: &F, features: &Table, target: &[Label], seed: u64) -> Result<CvResult>
where
    F: Fn(&Table, &[Label], u64) -> Result<M> + Sync,
    M: Classifier,
{
    if features.n_rows() < 2 {
        return Err(Error::InvalidParameter("leave-one-out needs at least two rows".into()));
    }
    let folds: Vec<Vec<usize>> = (0..features.n_rows()).map(|i| vec![i]).collect();
    run_folds(factory, features, target, &folds, CvScheme::Loocv, seed)
}

pub fn kfold<F, M>(
    factory: &F,
    features: &Table,
    target: &[Label],
    k: usize,
    seed: u64,
) -> Result<CvResult>
where
    F: Fn(&Table, &[Label], u64) -> Result<M> + Sync,
    M: Classifier,
{
    let folds = kfold_indices(features.n_rows(), k, seed)?;
    run_folds(factory, features, target, &folds, CvScheme::Kfold { k }, seed)
}

/// Cross-validates `spec`. With `oversample`, each training fold is
/// minority-oversampled (rng seeded with the fold seed) before fitting; the
/// held-out rows are never resampled.
pub fn cross_validate(
    spec: &ModelSpec,
    features: &Table,
    target: &[Label],
    scheme: CvScheme,
    seed: u64,
    oversample: bool,
) -> Result<CvResult> {
    let factory = |x: &Table, y: &[Label], s: u64| {
        if oversample {
            let (x, y) = oversample_minority(x, y, &mut ChaCha8Rng::seed_from_u64(s))?;
            spec.fit(&x, &y, s)
        } else {
            spec.fit(x, y, s)
        }
    };
    match scheme {
        CvScheme::Loocv => loocv(&factory, features, target, seed),
        CvScheme::Kfold { k } => kfold(&factory, features, target, k, seed),
    }
}
