use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::baselines::LogRegConfig;
use crate::dtree::TreeParams;
use crate::error::{Error, Result};
use crate::evaluate::CvScheme;
use crate::forest::{ForestParams, SubsetSize};
use crate::model::ModelSpec;
use crate::preprocess::{OrderPolicy, PreprocessConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelChoice {
    Forest,
    Tree,
    Logreg,
    Majority,
}

impl std::str::FromStr for ModelChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "forest" => Ok(ModelChoice::Forest),
            "tree" => Ok(ModelChoice::Tree),
            "logreg" => Ok(ModelChoice::Logreg),
            "majority" => Ok(ModelChoice::Majority),
            other => Err(Error::Config(format!("unknown model {other:?}"))),
        }
    }
}

pub const DEFAULT_LOOCV_CAP: usize = 2000;

/// Every knob of a pipeline run. `Default` runs a 100-tree forest under
/// leave-one-out with minority oversampling.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub data: Option<PathBuf>,
    /// `None` uses the bundled HR schema.
    pub schema: Option<PathBuf>,
    pub lenient: bool,
    pub preprocess: PreprocessConfig,
    pub model: ModelChoice,
    pub n_trees: usize,
    pub max_depth: Option<usize>,
    pub feature_subset: SubsetSize,
    pub bootstrap: bool,
    pub learning_rate: f64,
    pub epochs: usize,
    pub cv: CvScheme,
    pub loocv_cap: usize,
    pub oversample: bool,
    pub holdout: Option<f64>,
    pub bins: usize,
    pub seed: u64,
    pub out: PathBuf,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            data: None,
            schema: None,
            lenient: false,
            preprocess: PreprocessConfig::default(),
            model: ModelChoice::Forest,
            n_trees: 100,
            max_depth: None,
            feature_subset: SubsetSize::Sqrt,
            bootstrap: true,
            learning_rate: LogRegConfig::default().learning_rate,
            epochs: LogRegConfig::default().epochs,
            cv: CvScheme::Loocv,
            loocv_cap: DEFAULT_LOOCV_CAP,
            oversample: true,
            holdout: None,
            bins: crate::eda::DEFAULT_BINS,
            seed: 0,
            out: PathBuf::from("out"),
        }
    }
}

/// Flat key/value overrides. Keys match the long CLI flags.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ConfigOverrides {
    pub data: Option<PathBuf>,
    pub schema: Option<PathBuf>,
    pub lenient: Option<bool>,
    pub model: Option<String>,
    pub n_trees: Option<usize>,
    pub max_depth: Option<usize>,
    /// `sqrt`, `all`, or a count.
    pub max_features: Option<String>,
    pub bootstrap: Option<bool>,
    pub learning_rate: Option<f64>,
    pub epochs: Option<usize>,
    pub cv: Option<String>,
    pub loocv_cap: Option<usize>,
    pub oversample: Option<bool>,
    pub holdout: Option<f64>,
    pub bins: Option<usize>,
    pub encoding_policy: Option<String>,
    pub onehot_threshold: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

impl ConfigOverrides {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }
}

impl PipelineConfig {
    pub fn apply(mut self, o: &ConfigOverrides) -> Result<Self> {
        macro_rules! set {
            ($field:ident) => {
                if let Some(v) = &o.$field {
                    self.$field = v.clone();
                }
            };
        }
        if let Some(v) = &o.data {
            self.data = Some(v.clone());
        }
        if let Some(v) = &o.schema {
            self.schema = Some(v.clone());
        }
        set!(lenient);
        set!(n_trees);
        set!(bootstrap);
        set!(learning_rate);
        set!(epochs);
        set!(loocv_cap);
        set!(oversample);
        set!(bins);
        set!(seed);
        set!(out);
        if let Some(v) = o.max_depth {
            self.max_depth = Some(v);
        }
        if let Some(v) = o.holdout {
            self.holdout = Some(v);
        }
        if let Some(m) = &o.model {
            self.model = m.parse()?;
        }
        if let Some(s) = &o.max_features {
            self.feature_subset = match s.as_str() {
                "sqrt" => SubsetSize::Sqrt,
                "all" => SubsetSize::All,
                n => SubsetSize::Fixed(
                    n.parse()
                        .map_err(|_| Error::Config(format!("bad max-features {n:?}")))?,
                ),
            };
        }
        if let Some(c) = &o.cv {
            self.cv = c.parse()?;
        }
        if let Some(p) = &o.encoding_policy {
            self.preprocess.order_policy = p.parse::<OrderPolicy>()?;
        }
        if let Some(t) = o.onehot_threshold {
            self.preprocess.one_hot_threshold = t;
        }
        Ok(self)
    }

    /// Checks that need no data.
    pub fn validate(&self) -> Result<()> {
        if let CvScheme::Kfold { k } = self.cv {
            if k < 2 {
                return Err(Error::Config(format!("kfold needs k >= 2, got {k}")));
            }
        }
        if self.n_trees == 0 {
            return Err(Error::Config("n-trees must be at least 1".into()));
        }
        if self.bins == 0 {
            return Err(Error::Config("bins must be at least 1".into()));
        }
        if let Some(h) = self.holdout {
            if !(h > 0.0 && h < 1.0) {
                return Err(Error::Config(format!("holdout fraction {h} outside (0, 1)")));
            }
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Config("learning-rate must be positive".into()));
        }
        if let SubsetSize::Fixed(0) = self.feature_subset {
            return Err(Error::Config("max-features must be at least 1".into()));
        }
        if self.preprocess.one_hot_threshold == 0 {
            return Err(Error::Config("onehot-threshold must be at least 1".into()));
        }
        Ok(())
    }

    pub fn model_spec(&self) -> ModelSpec {
        match self.model {
            ModelChoice::Forest => ModelSpec::Forest(ForestParams {
                n_estimators: self.n_trees,
                max_depth: self.max_depth,
                feature_subset_size: self.feature_subset,
                bootstrap: self.bootstrap,
                seed: self.seed,
                ..ForestParams::default()
            }),
            ModelChoice::Tree => ModelSpec::Tree(TreeParams {
                max_depth: self.max_depth,
                seed: self.seed,
                ..TreeParams::default()
            }),
            ModelChoice::Logreg => ModelSpec::Logreg(LogRegConfig {
                learning_rate: self.learning_rate,
                epochs: self.epochs,
                seed: self.seed,
            }),
            ModelChoice::Majority => ModelSpec::Majority,
        }
    }

    /// The four registered models, all under this config's parameters.
    pub fn comparison_specs(&self) -> Vec<ModelSpec> {
        [
            ModelChoice::Forest,
            ModelChoice::Tree,
            ModelChoice::Logreg,
            ModelChoice::Majority,
        ]
        .into_iter()
        .map(|m| PipelineConfig { model: m, ..self.clone() }.model_spec())
        .collect()
    }
}
