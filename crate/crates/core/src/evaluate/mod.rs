//! Classification metrics, cross-validation and minority oversampling.

mod cv;
mod metrics;

use rand::Rng;

pub use cv::{cross_validate, kfold, kfold_indices, loocv, run_folds, CvResult, CvScheme};
pub use metrics::{metrics, ClassMetrics, Confusion, EvaluationReport};

use crate::error::{Error, Result};
use crate::table::{class_counts, Label, Table};

/// Original row order followed by minority rows redrawn with replacement
/// until both classes have the majority count.
pub fn oversample_indices<R: Rng + ?Sized>(target: &[Label], rng: &mut R) -> Result<Vec<usize>> {
    let counts = class_counts(target);
    if counts[0] == 0 || counts[1] == 0 {
        return Err(Error::InvalidParameter(
            "oversampling needs both classes present".into(),
        ));
    }
    let minority: Label = u8::from(counts[1] < counts[0]);
    let pool: Vec<usize> = (0..target.len()).filter(|&i| target[i] == minority).collect();
    let deficit = counts[1 - minority as usize] - counts[minority as usize];
    let mut idx: Vec<usize> = (0..target.len()).collect();
    idx.extend((0..deficit).map(|_| pool[rng.gen_range(0..pool.len())]));
    Ok(idx)
}

pub fn oversample_minority<R: Rng + ?Sized>(
    features: &Table,
    target: &[Label],
    rng: &mut R,
) -> Result<(Table, Vec<Label>)> {
    if target.len() != features.n_rows() {
        return Err(Error::LengthMismatch(features.n_rows(), target.len()));
    }
    let idx = oversample_indices(target, rng)?;
    let y = idx.iter().map(|&i| target[i]).collect();
    Ok((features.take_rows(&idx), y))
}
