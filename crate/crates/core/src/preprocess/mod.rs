//! Replayable preprocessing: imputation, categorical encoding and max-abs
//! scaling, fitted once and applied to any table with the same schema.

mod encode;
mod impute;
mod scale;

use std::path::Path;

use serde::{Deserialize, Serialize};

pub use encode::{
    apply_encoding, fit_encoding, fit_encodings, EncodingKind, EncodingMap, OrderPolicy,
    DEFAULT_ONE_HOT_THRESHOLD,
};
pub use impute::{apply_impute, fit_impute, median, mode, ImputeStats, ImputeValue};
pub use scale::{apply_scale, fit_scale, ScaleFactors};

use crate::error::{Error, Result};
use crate::table::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreprocessConfig {
    pub order_policy: OrderPolicy,
    pub one_hot_threshold: usize,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        Self {
            order_policy: OrderPolicy::Alphabetical,
            one_hot_threshold: DEFAULT_ONE_HOT_THRESHOLD,
        }
    }
}

/// Everything learned from the training table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedPreprocessor {
    pub config: PreprocessConfig,
    pub impute: ImputeStats,
    pub encodings: Vec<EncodingMap>,
    pub scale: ScaleFactors,
}

impl FittedPreprocessor {
    /// Fits all three stages in order and returns the transformed table.
    pub fn fit_transform(table: &Table, config: PreprocessConfig) -> Result<(Self, Table)> {
        let impute = fit_impute(table)?;
        let filled = apply_impute(table, &impute)?;
        let encodings = fit_encodings(&filled, config.order_policy, config.one_hot_threshold)?;
        let encoded = apply_encoding(&filled, &encodings)?;
        let scale = fit_scale(&encoded)?;
        let scaled = apply_scale(&encoded, &scale)?;
        Ok((
            Self {
                config,
                impute,
                encodings,
                scale,
            },
            scaled,
        ))
    }

    pub fn fit(table: &Table, config: PreprocessConfig) -> Result<Self> {
        Self::fit_transform(table, config).map(|(p, _)| p)
    }

    pub fn transform(&self, table: &Table) -> Result<Table> {
        let filled = apply_impute(table, &self.impute)?;
        let encoded = apply_encoding(&filled, &self.encodings)?;
        apply_scale(&encoded, &self.scale)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}
