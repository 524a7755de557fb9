//! Tabular binary classification for employee-attrition style data.
//!
//! The crate covers the whole path from a CSV file to an evaluated model:
//!
//! * [`table`]: explicit schemas, CSV loading, missing-value accounting
//! * [`preprocess`]: median/mode imputation, label and one-hot encoding,
//!   max-abs scaling, all fitted once and replayable
//! * [`eda`]: class-split distributions, histograms, Pearson correlations
//! * [`dtree`]: entropy, information gain and ID3-style trees with mean
//!   thresholds for numeric columns
//! * [`forest`]: bagged trees with per-node feature sampling and voting
//! * [`evaluate`]: precision/recall/f1 reports, leave-one-out and k-fold
//!   cross-validation, minority oversampling
//! * [`baselines`]: logistic regression and model comparison
//! * [`pipeline`]: the configured end-to-end run behind the CLI

pub mod baselines;
pub mod dtree;
pub mod eda;
pub mod error;
pub mod evaluate;
pub mod fixtures;
pub mod forest;
pub mod model;
pub mod pipeline;
pub mod preprocess;
pub mod table;

pub use error::{Error, Result};
