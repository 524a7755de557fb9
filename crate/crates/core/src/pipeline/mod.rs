//! The configured end-to-end run: load, explore, preprocess, train,
//! cross-validate and score, with every artifact written only after all
//! stages succeed.

mod config;

use std::fmt;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use config::{ConfigOverrides, ModelChoice, PipelineConfig, DEFAULT_LOOCV_CAP};

use crate::baselines::{compare_models, ComparisonTable};
use crate::eda::{eda_report, EdaReport};
use crate::error::{Error, Result};
use crate::evaluate::{cross_validate, metrics, oversample_minority, CvResult, CvScheme, EvaluationReport};
use crate::fixtures;
use crate::model::{Classifier, FittedModel};
use crate::preprocess::{
    apply_encoding, apply_impute, apply_scale, fit_encodings, fit_impute, fit_scale,
    FittedPreprocessor,
};
use crate::table::{Label, LoadOptions, Table, TableSchema};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Load,
    Eda,
    Impute,
    Encode,
    Scale,
    Split,
    Oversample,
    Fit,
    CrossValidate,
    Score,
    Compare,
    Write,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Load => "load",
            Stage::Eda => "eda",
            Stage::Impute => "impute",
            Stage::Encode => "encode",
            Stage::Scale => "scale",
            Stage::Split => "split",
            Stage::Oversample => "oversample",
            Stage::Fit => "fit",
            Stage::CrossValidate => "cross_validate",
            Stage::Score => "score",
            Stage::Compare => "compare",
            Stage::Write => "write",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Records stages in execution order and tags failures with the stage name.
#[derive(Debug, Default)]
struct Runner {
    log: Vec<Stage>,
}

impl Runner {
    fn stage<T>(&mut self, stage: Stage, f: impl FnOnce() -> Result<T>) -> Result<T> {
        self.log.push(stage);
        f().map_err(|e| Error::Stage {
            stage: stage.as_str(),
            source: Box::new(e),
        })
    }
}

/// Files queued for the output directory.
#[derive(Debug, Default)]
struct Outputs(Vec<(String, String)>);

impl Outputs {
    fn push(&mut self, name: impl Into<String>, contents: String) {
        self.0.push((name.into(), contents));
    }

    /// Writes every file; on failure removes the ones already written.
    fn write_all(self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let mut written = Vec::with_capacity(self.0.len());
        for (name, contents) in self.0 {
            let path = dir.join(name);
            if let Err(e) = std::fs::write(&path, contents) {
                for p in &written {
                    let _ = std::fs::remove_file(p);
                }
                return Err(Error::io(&path, e));
            }
            written.push(path);
        }
        Ok(written)
    }
}

pub fn load_schema(config: &PipelineConfig) -> Result<TableSchema> {
    match &config.schema {
        Some(p) => TableSchema::load(p),
        None => Ok(fixtures::hr_schema()),
    }
}

pub fn load_table(config: &PipelineConfig) -> Result<Table> {
    let data = config
        .data
        .as_ref()
        .ok_or_else(|| Error::Config("no data file given (--data)".into()))?;
    let schema = load_schema(config)?;
    Table::load_csv_with(data, &schema, LoadOptions { lenient: config.lenient })
}

#[derive(Debug, Clone)]
pub struct EdaOutcome {
    pub stages: Vec<Stage>,
    pub report: EdaReport,
    pub written: Vec<PathBuf>,
}

/// Distributions, histograms and correlations of the raw table.
pub fn run_eda(config: &PipelineConfig) -> Result<EdaOutcome> {
    config.validate()?;
    let mut run = Runner::default();
    let table = run.stage(Stage::Load, || load_table(config))?;
    let report = run.stage(Stage::Eda, || eda_report(&table, config.bins))?;
    let mut out = Outputs::default();
    for (name, contents) in report.files()? {
        out.push(name, contents);
    }
    let written = run.stage(Stage::Write, || out.write_all(&config.out))?;
    Ok(EdaOutcome {
        stages: run.log,
        report,
        written,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CvSummary {
    pub result: CvResult,
    /// Report over the out-of-fold predictions.
    pub report: EvaluationReport,
}

#[derive(Debug, Clone)]
pub struct PipelineOutcome {
    pub stages: Vec<Stage>,
    pub model: FittedModel,
    pub preprocessor: FittedPreprocessor,
    /// Rows the final model was fitted on, after oversampling.
    pub n_train: usize,
    /// In-sample report on the rows the final model was fitted on.
    pub training: EvaluationReport,
    pub cross_validation: Option<CvSummary>,
    pub holdout: Option<EvaluationReport>,
    pub written: Vec<PathBuf>,
}

impl PipelineOutcome {
    /// Labelled plain-text metrics: training, then cross-validation and
    /// holdout when present.
    pub fn metrics_text(&self) -> String {
        let mut s = format!("training (in-sample, {} rows)\n{}", self.n_train, self.training);
        if let Some(cv) = &self.cross_validation {
            s.push_str(&format!(
                "\ncross-validation ({}, mean accuracy {:.4})\n{}",
                cv.result.scheme, cv.result.mean_accuracy, cv.report
            ));
        }
        if let Some(h) = &self.holdout {
            s.push_str(&format!("\nholdout\n{h}"));
        }
        s
    }

    fn metrics_json(&self, model: &str) -> Result<String> {
        #[derive(Serialize)]
        struct Metrics<'a> {
            model: &'a str,
            training: &'a EvaluationReport,
            #[serde(skip_serializing_if = "Option::is_none")]
            cross_validation: Option<CvMetrics<'a>>,
            #[serde(skip_serializing_if = "Option::is_none")]
            holdout: Option<&'a EvaluationReport>,
        }
        #[derive(Serialize)]
        struct CvMetrics<'a> {
            scheme: String,
            mean_accuracy: f64,
            report: &'a EvaluationReport,
        }
        Ok(serde_json::to_string_pretty(&Metrics {
            model,
            training: &self.training,
            cross_validation: self.cross_validation.as_ref().map(|cv| CvMetrics {
                scheme: cv.result.scheme.to_string(),
                mean_accuracy: cv.result.mean_accuracy,
                report: &cv.report,
            }),
            holdout: self.holdout.as_ref(),
        })?)
    }
}

struct Prepared {
    preprocessor: FittedPreprocessor,
    train_x: Table,
    train_y: Vec<Label>,
    holdout: Option<(Table, Vec<Label>)>,
}

fn check_loocv_cap(config: &PipelineConfig, n_rows: usize) -> Result<()> {
    if config.cv == CvScheme::Loocv && n_rows > config.loocv_cap {
        return Err(Error::Config(format!(
            "leave-one-out over {n_rows} rows exceeds the cap of {}; use --cv kfold:10 or raise --loocv-cap",
            config.loocv_cap
        )));
    }
    Ok(())
}

/// Row indices `(train, holdout)`: a seeded shuffle with the holdout taken
/// from the front. Both sides keep ascending order.
fn holdout_split(n_rows: usize, fraction: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    let n_test = ((n_rows as f64) * fraction).round() as usize;
    if n_test == 0 || n_test >= n_rows {
        return Err(Error::Config(format!(
            "holdout fraction {fraction} leaves an empty side of {n_rows} rows"
        )));
    }
    let mut idx: Vec<usize> = (0..n_rows).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut test = idx[..n_test].to_vec();
    let mut train = idx[n_test..].to_vec();
    test.sort_unstable();
    train.sort_unstable();
    Ok((train, test))
}

fn prepare(
    run: &mut Runner,
    out: &mut Outputs,
    config: &PipelineConfig,
    with_eda: bool,
    uses_cv: bool,
) -> Result<Prepared> {
    let table = run.stage(Stage::Load, || {
        let t = load_table(config)?;
        let n = match config.holdout {
            Some(h) => t.n_rows() - ((t.n_rows() as f64) * h).round() as usize,
            None => t.n_rows(),
        };
        if uses_cv {
            check_loocv_cap(config, n)?;
        }
        Ok(t)
    })?;
    if with_eda {
        let report = run.stage(Stage::Eda, || eda_report(&table, config.bins))?;
        out.push("eda_summary.json", report.summary_json()?);
    }
    let (impute, filled) = run.stage(Stage::Impute, || {
        let stats = fit_impute(&table)?;
        let filled = apply_impute(&table, &stats)?;
        Ok((stats, filled))
    })?;
    let (encodings, encoded) = run.stage(Stage::Encode, || {
        let maps = fit_encodings(&filled, config.preprocess.order_policy, config.preprocess.one_hot_threshold)?;
        let encoded = apply_encoding(&filled, &maps)?;
        Ok((maps, encoded))
    })?;
    let (scale, scaled) = run.stage(Stage::Scale, || {
        let factors = fit_scale(&encoded)?;
        let scaled = apply_scale(&encoded, &factors)?;
        Ok((factors, scaled))
    })?;
    let preprocessor = FittedPreprocessor {
        config: config.preprocess,
        impute,
        encodings,
        scale,
    };
    let (train_x, train_y, holdout) = run.stage(Stage::Split, || {
        let (x, y) = scaled.split_columns()?;
        match config.holdout {
            None => Ok((x, y, None)),
            Some(h) => {
                let (train, test) = holdout_split(x.n_rows(), h, config.seed)?;
                let pick = |rows: &[usize]| -> Vec<Label> { rows.iter().map(|&r| y[r]).collect() };
                Ok((
                    x.take_rows(&train),
                    pick(&train),
                    Some((x.take_rows(&test), pick(&test))),
                ))
            }
        }
    })?;
    Ok(Prepared {
        preprocessor,
        train_x,
        train_y,
        holdout,
    })
}

fn fit_and_score(config: &PipelineConfig, with_cv: bool) -> Result<PipelineOutcome> {
    config.validate()?;
    let mut run = Runner::default();
    let mut out = Outputs::default();
    let p = prepare(&mut run, &mut out, config, with_cv, with_cv)?;
    let spec = config.model_spec();

    let (fit_x, fit_y) = if config.oversample {
        run.stage(Stage::Oversample, || {
            oversample_minority(&p.train_x, &p.train_y, &mut ChaCha8Rng::seed_from_u64(config.seed))
        })?
    } else {
        (p.train_x.clone(), p.train_y.clone())
    };
    let model = run.stage(Stage::Fit, || spec.fit(&fit_x, &fit_y, config.seed))?;

    let cv = if with_cv {
        Some(run.stage(Stage::CrossValidate, || {
            cross_validate(&spec, &p.train_x, &p.train_y, config.cv, config.seed, config.oversample)
        })?)
    } else {
        None
    };

    let (training, cross_validation, holdout) = run.stage(Stage::Score, || {
        let training = metrics(&fit_y, &model.predict_table(&fit_x)?)?;
        let cross_validation = match cv {
            Some(result) => Some(CvSummary {
                report: metrics(&p.train_y, &result.predictions)?,
                result,
            }),
            None => None,
        };
        let holdout = match &p.holdout {
            Some((x, y)) => Some(metrics(y, &model.predict_table(x)?)?),
            None => None,
        };
        Ok((training, cross_validation, holdout))
    })?;

    let mut outcome = PipelineOutcome {
        stages: Vec::new(),
        model,
        preprocessor: p.preprocessor,
        n_train: fit_y.len(),
        training,
        cross_validation,
        holdout,
        written: Vec::new(),
    };
    out.push("metrics.json", outcome.metrics_json(spec.name())?);
    out.push("metrics.txt", outcome.metrics_text());
    if let Some(cv) = &outcome.cross_validation {
        out.push("cv.json", cv.result.to_json()?);
    }
    out.push("model.json", outcome.model.to_json()?);
    out.push("preprocessor.json", outcome.preprocessor.to_json()?);
    outcome.written = run.stage(Stage::Write, || out.write_all(&config.out))?;
    outcome.stages = run.log;
    Ok(outcome)
}

/// The full run: EDA summary, preprocessing, final fit, cross-validation and
/// scoring. Writes `eda_summary.json`, `metrics.json`, `metrics.txt`,
/// `cv.json`, `model.json` and `preprocessor.json`.
pub fn run_pipeline(config: &PipelineConfig) -> Result<PipelineOutcome> {
    fit_and_score(config, true)
}

/// As [`run_pipeline`] without the EDA and cross-validation stages.
pub fn train(config: &PipelineConfig) -> Result<PipelineOutcome> {
    fit_and_score(config, false)
}

#[derive(Debug, Clone)]
pub struct CompareOutcome {
    pub stages: Vec<Stage>,
    pub table: ComparisonTable,
    pub written: Vec<PathBuf>,
}

/// Cross-validates forest, tree, logistic regression and the majority
/// baseline on the same folds. Writes `comparison.csv` and
/// `comparison.json`.
pub fn compare(config: &PipelineConfig) -> Result<CompareOutcome> {
    config.validate()?;
    let mut run = Runner::default();
    let mut out = Outputs::default();
    let p = prepare(&mut run, &mut out, config, false, true)?;
    let table = run.stage(Stage::Compare, || {
        compare_models(
            &p.train_x,
            &p.train_y,
            &config.comparison_specs(),
            config.cv,
            config.seed,
            config.oversample,
        )
    })?;
    out.push("comparison.csv", table.to_csv_string());
    out.push("comparison.json", serde_json::to_string_pretty(&table)?);
    let written = run.stage(Stage::Write, || out.write_all(&config.out))?;
    Ok(CompareOutcome {
        stages: run.log,
        table,
        written,
    })
}
