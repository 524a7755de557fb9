use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnKind {
    Numeric,
    Categorical,
}

impl ColumnKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ColumnKind::Numeric => "numeric",
            ColumnKind::Categorical => "categorical",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ColumnRole {
    #[default]
    Feature,
    Identifier,
    Target,
}

/// Declaration of one column: its name, kind, role and (for categorical
/// columns) the allowed categories in declaration order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnSchema {
    pub name: String,
    pub kind: ColumnKind,
    #[serde(default)]
    pub role: ColumnRole,
    #[serde(default, rename = "values", skip_serializing_if = "Vec::is_empty")]
    pub declared_values: Vec<String>,
    /// Alternative header spellings accepted when loading.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub aliases: Vec<String>,
}

impl ColumnSchema {
    pub fn numeric(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            kind: ColumnKind::Numeric,
            role: ColumnRole::Feature,
            declared_values: Vec::new(),
            aliases: Vec::new(),
        }
    }

    pub fn categorical<I, S>(name: impl Into<String>, values: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            name: name.into(),
            kind: ColumnKind::Categorical,
            role: ColumnRole::Feature,
            declared_values: values.into_iter().map(Into::into).collect(),
            aliases: Vec::new(),
        }
    }

    pub fn with_role(mut self, role: ColumnRole) -> Self {
        self.role = role;
        self
    }

    pub fn with_aliases<I, S>(mut self, aliases: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.aliases = aliases.into_iter().map(Into::into).collect();
        self
    }

    /// True when `header` names this column, directly or through an alias.
    pub fn answers_to(&self, header: &str) -> bool {
        self.name == header || self.aliases.iter().any(|a| a == header)
    }

    fn validate(&self) -> Result<()> {
        if self.name.is_empty() {
            return Err(Error::InvalidSchema("column with empty name".into()));
        }
        if self.kind == ColumnKind::Numeric && !self.declared_values.is_empty() {
            return Err(Error::InvalidSchema(format!(
                "numeric column {} declares category values",
                self.name
            )));
        }
        let mut seen = HashSet::new();
        for v in &self.declared_values {
            if !seen.insert(v.as_str()) {
                return Err(Error::InvalidSchema(format!(
                    "column {} declares {v:?} twice",
                    self.name
                )));
            }
        }
        Ok(())
    }
}

pub const DEFAULT_NULL_TOKENS: &[&str] = &["", "NaN"];

/// Ordered set of column declarations plus the tokens read as missing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableSchema {
    columns: Vec<ColumnSchema>,
    null_tokens: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SchemaDocument {
    #[serde(default)]
    null_tokens: Option<Vec<String>>,
    #[serde(rename = "column")]
    columns: Vec<ColumnSchema>,
}

impl TableSchema {
    /// Schema for a labelled dataset: exactly one column must carry the
    /// target role.
    pub fn new(columns: Vec<ColumnSchema>) -> Result<Self> {
        let schema = Self::unchecked(columns)?;
        let targets = schema
            .columns
            .iter()
            .filter(|c| c.role == ColumnRole::Target)
            .count();
        if targets != 1 {
            return Err(Error::InvalidSchema(format!(
                "expected exactly one target column, found {targets}"
            )));
        }
        Ok(schema)
    }

    /// Schema for a feature-only table (no target column allowed).
    pub fn without_target(columns: Vec<ColumnSchema>) -> Result<Self> {
        let schema = Self::unchecked(columns)?;
        if schema.columns.iter().any(|c| c.role == ColumnRole::Target) {
            return Err(Error::InvalidSchema(
                "feature table must not contain a target column".into(),
            ));
        }
        Ok(schema)
    }

    fn unchecked(columns: Vec<ColumnSchema>) -> Result<Self> {
        let mut names = HashSet::new();
        for c in &columns {
            c.validate()?;
            for n in std::iter::once(&c.name).chain(&c.aliases) {
                if !names.insert(n.clone()) {
                    return Err(Error::InvalidSchema(format!("duplicate column name {n}")));
                }
            }
        }
        Ok(Self {
            columns,
            null_tokens: DEFAULT_NULL_TOKENS.iter().map(|s| s.to_string()).collect(),
        })
    }

    pub fn with_null_tokens<I, S>(mut self, tokens: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.null_tokens = tokens.into_iter().map(Into::into).collect();
        self
    }

    /// Parses the declarative schema document (TOML with one `[[column]]`
    /// table per column and an optional top-level `null_tokens` list).
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let doc: SchemaDocument =
            toml::from_str(text).map_err(|e| Error::InvalidSchema(e.to_string()))?;
        let schema = Self::new(doc.columns)?;
        Ok(match doc.null_tokens {
            Some(tokens) => schema.with_null_tokens(tokens),
            None => schema,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            null_tokens: &'a [String],
            column: &'a [ColumnSchema],
        }
        toml::to_string(&Doc {
            null_tokens: &self.null_tokens,
            column: &self.columns,
        })
        .expect("schema serializes to TOML")
    }

    pub fn columns(&self) -> &[ColumnSchema] {
        &self.columns
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn null_tokens(&self) -> &[String] {
        &self.null_tokens
    }

    pub fn is_null(&self, raw: &str) -> bool {
        raw.is_empty() || self.null_tokens.iter().any(|t| t == raw)
    }

    /// Index of the column named `name` (aliases accepted).
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.columns
            .iter()
            .position(|c| c.name == name)
            .or_else(|| self.columns.iter().position(|c| c.answers_to(name)))
    }

    pub fn target_index(&self) -> Option<usize> {
        self.columns.iter().position(|c| c.role == ColumnRole::Target)
    }
}
