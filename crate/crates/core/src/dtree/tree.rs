use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::split::{choose, evaluate, FeatureColumn, SplitKind, TiePolicy};
use crate::error::{Error, Result};
use crate::table::{ColumnKind, Label, Table, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeParams {
    pub max_depth: Option<usize>,
    /// Nodes with fewer rows than this become leaves.
    pub min_samples_leaf: usize,
    /// Columns drawn per node; `None` considers every available column.
    pub feature_subset_size: Option<usize>,
    pub tie_policy: TiePolicy,
    pub seed: u64,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self {
            max_depth: None,
            min_samples_leaf: 1,
            feature_subset_size: None,
            tie_policy: TiePolicy::FirstInSchemaOrder,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryBranch {
    pub category: String,
    pub node: Node,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Node {
    Leaf {
        label: Label,
        counts: [usize; 2],
    },
    Categorical {
        column: String,
        feature: usize,
        counts: [usize; 2],
        gain: f64,
        branches: Vec<CategoryBranch>,
    },
    Threshold {
        column: String,
        feature: usize,
        threshold: f64,
        counts: [usize; 2],
        gain: f64,
        /// Rows with value `>= threshold`.
        upper: Box<Node>,
        /// Rows with value `< threshold`.
        lower: Box<Node>,
    },
}

impl Node {
    pub fn counts(&self) -> [usize; 2] {
        match self {
            Node::Leaf { counts, .. }
            | Node::Categorical { counts, .. }
            | Node::Threshold { counts, .. } => *counts,
        }
    }

    fn samples(&self) -> usize {
        let c = self.counts();
        c[0] + c[1]
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Node::Leaf { .. })
    }

    pub fn column(&self) -> Option<&str> {
        match self {
            Node::Leaf { .. } => None,
            Node::Categorical { column, .. } | Node::Threshold { column, .. } => Some(column),
        }
    }

    fn children(&self) -> Vec<&Node> {
        match self {
            Node::Leaf { .. } => Vec::new(),
            Node::Categorical { branches, .. } => branches.iter().map(|b| &b.node).collect(),
            Node::Threshold { upper, lower, .. } => vec![upper, lower],
        }
    }
}

/// Majority label; ties go to class 0.
pub fn majority(counts: [usize; 2]) -> Label {
    u8::from(counts[1] > counts[0])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Prediction {
    pub label: Label,
    pub counts: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub features: Vec<String>,
    pub kinds: Vec<ColumnKind>,
    pub n_train: usize,
    pub root: Node,
}

struct Builder<'a> {
    names: &'a [String],
    columns: &'a [FeatureColumn],
    target: &'a [Label],
    params: TreeParams,
    rng: ChaCha8Rng,
}

impl Builder<'_> {
    fn build(&mut self, rows: Vec<usize>, depth: usize, used: &mut Vec<bool>) -> Node {
        let counts = {
            let mut c = [0usize; 2];
            for &r in &rows {
                c[self.target[r] as usize] += 1;
            }
            c
        };
        let leaf = Node::Leaf {
            label: majority(counts),
            counts,
        };
        if counts[0] == 0
            || counts[1] == 0
            || self.params.max_depth.is_some_and(|d| depth >= d)
            || rows.len() < self.params.min_samples_leaf
        {
            return leaf;
        }

        let mut available: Vec<usize> = (0..self.columns.len())
            .filter(|&f| !(self.columns[f].is_categorical() && used[f]))
            .collect();
        if available.is_empty() {
            return leaf;
        }
        if let Some(k) = self.params.feature_subset_size {
            if k < available.len() {
                let mut drawn: Vec<usize> = available
                    .choose_multiple(&mut self.rng, k.max(1))
                    .copied()
                    .collect();
                drawn.sort_unstable();
                available = drawn;
            }
        }

        let evaluated = available
            .iter()
            .map(|&f| evaluate(&self.names[f], &self.columns[f], self.target, &rows))
            .collect();
        let Some(choice) = choose(evaluated, self.params.tie_policy, &mut self.rng) else {
            return leaf;
        };
        let feature = self
            .names
            .iter()
            .position(|n| *n == choice.best.column)
            .expect("candidate names come from features");
        let gain = choice.best.information_gain;

        match (&self.columns[feature], choice.best.kind) {
            (FeatureColumn::Categorical { codes, categories }, _) => {
                let mut parts: Vec<Vec<usize>> = vec![Vec::new(); categories.len()];
                for &r in &rows {
                    parts[codes[r]].push(r);
                }
                used[feature] = true;
                let branches = categories
                    .iter()
                    .zip(parts)
                    .filter(|(_, p)| !p.is_empty())
                    .map(|(cat, p)| CategoryBranch {
                        category: cat.clone(),
                        node: self.build(p, depth + 1, used),
                    })
                    .collect();
                used[feature] = false;
                Node::Categorical {
                    column: self.names[feature].clone(),
                    feature,
                    counts,
                    gain,
                    branches,
                }
            }
            (FeatureColumn::Numeric(values), SplitKind::NumericThreshold { threshold }) => {
                let (upper, lower): (Vec<usize>, Vec<usize>) =
                    rows.iter().partition(|&&r| values[r] >= threshold);
                Node::Threshold {
                    column: self.names[feature].clone(),
                    feature,
                    threshold,
                    counts,
                    gain,
                    upper: Box::new(self.build(upper, depth + 1, used)),
                    lower: Box::new(self.build(lower, depth + 1, used)),
                }
            }
            (FeatureColumn::Numeric(_), SplitKind::CategoricalMultiway) => {
                unreachable!("numeric columns produce threshold splits")
            }
        }
    }
}

impl DecisionTree {
    /// Grows an entropy tree. Categorical splits are multiway and used at
    /// most once per path; numeric splits cut at the node-local mean.
    pub fn fit(features: &Table, target: &[Label], params: TreeParams) -> Result<Self> {
        if target.len() != features.n_rows() {
            return Err(Error::LengthMismatch(features.n_rows(), target.len()));
        }
        if features.n_rows() == 0 {
            return Err(Error::Empty("decision tree training set"));
        }
        if let Some(&bad) = target.iter().find(|&&l| l > 1) {
            return Err(Error::NonBinaryTarget {
                row: target.iter().position(|&l| l == bad).unwrap_or(0),
                value: bad as f64,
            });
        }
        let names: Vec<String> = features.column_names().into_iter().map(String::from).collect();
        let columns = features
            .columns()
            .map(|(d, c)| FeatureColumn::from_data(&d.name, c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::fit_prepared(&names, &columns, target, params))
    }

    pub(crate) fn fit_prepared(
        names: &[String],
        columns: &[FeatureColumn],
        target: &[Label],
        params: TreeParams,
    ) -> Self {
        Self::fit_rows(names, columns, target, (0..target.len()).collect(), params)
    }

    /// Fits on a row multiset of prepared columns (bootstrap samples reuse
    /// the same prepared data).
    pub(crate) fn fit_rows(
        names: &[String],
        columns: &[FeatureColumn],
        target: &[Label],
        rows: Vec<usize>,
        params: TreeParams,
    ) -> Self {
        let n_train = rows.len();
        let mut builder = Builder {
            names,
            columns,
            target,
            params,
            rng: ChaCha8Rng::seed_from_u64(params.seed),
        };
        let mut used = vec![false; columns.len()];
        let root = builder.build(rows, 0, &mut used);
        Self {
            features: names.to_vec(),
            kinds: columns
                .iter()
                .map(|c| {
                    if c.is_categorical() {
                        ColumnKind::Categorical
                    } else {
                        ColumnKind::Numeric
                    }
                })
                .collect(),
            n_train,
            root,
        }
    }

    /// Maps this tree's feature list onto the columns of `table`.
    pub fn bind(&self, table: &Table) -> Result<Vec<usize>> {
        self.features
            .iter()
            .zip(&self.kinds)
            .map(|(name, kind)| {
                let idx = table.column_index(name)?;
                let actual = table.column_at(idx).kind();
                if actual != *kind {
                    return Err(Error::WrongKind {
                        column: name.clone(),
                        expected: kind.as_str(),
                        actual: actual.as_str(),
                    });
                }
                Ok(idx)
            })
            .collect()
    }

    pub fn predict_bound(&self, table: &Table, binding: &[usize], row: usize) -> Result<Prediction> {
        let mut node = &self.root;
        loop {
            match node {
                Node::Leaf { label, counts } => {
                    return Ok(Prediction {
                        label: *label,
                        counts: *counts,
                    })
                }
                Node::Categorical {
                    column,
                    feature,
                    branches,
                    ..
                } => {
                    let value = match table.get(row, binding[*feature]) {
                        Some(Value::Cat(v)) => v,
                        _ => {
                            return Err(Error::MissingValue {
                                column: column.clone(),
                                row,
                            })
                        }
                    };
                    node = match branches.iter().find(|b| b.category == value) {
                        Some(b) => &b.node,
                        None => heaviest(branches),
                    };
                }
                Node::Threshold {
                    column,
                    feature,
                    threshold,
                    upper,
                    lower,
                    ..
                } => {
                    let value = match table.get(row, binding[*feature]) {
                        Some(Value::Num(v)) => v,
                        _ => {
                            return Err(Error::MissingValue {
                                column: column.clone(),
                                row,
                            })
                        }
                    };
                    node = if value >= *threshold { upper } else { lower };
                }
            }
        }
    }

    pub fn predict(&self, table: &Table, row: usize) -> Result<Prediction> {
        let binding = self.bind(table)?;
        self.predict_bound(table, &binding, row)
    }

    pub fn predict_table(&self, table: &Table) -> Result<Vec<Label>> {
        let binding = self.bind(table)?;
        (0..table.n_rows())
            .map(|r| self.predict_bound(table, &binding, r).map(|p| p.label))
            .collect()
    }

    /// Unnormalized impurity decrease per feature: the sum over internal
    /// nodes of `(node rows / training rows) * gain`.
    pub fn impurity_decrease(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.features.len()];
        let total = self.n_train as f64;
        let mut stack = vec![&self.root];
        while let Some(node) = stack.pop() {
            match node {
                Node::Leaf { .. } => {}
                Node::Categorical { feature, gain, .. } | Node::Threshold { feature, gain, .. } => {
                    out[*feature] += node.samples() as f64 / total * gain;
                }
            }
            stack.extend(node.children());
        }
        out
    }

    pub fn depth(&self) -> usize {
        fn go(n: &Node) -> usize {
            n.children().into_iter().map(|c| 1 + go(c)).max().unwrap_or(0)
        }
        go(&self.root)
    }

    pub fn n_leaves(&self) -> usize {
        fn go(n: &Node) -> usize {
            if n.is_leaf() {
                1
            } else {
                n.children().into_iter().map(go).sum()
            }
        }
        go(&self.root)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn heaviest(branches: &[CategoryBranch]) -> &Node {
    let mut best = &branches[0];
    for b in &branches[1..] {
        if b.node.samples() > best.node.samples() {
            best = b;
        }
    }
    &best.node
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn worked_tree() -> (DecisionTree, Table, Vec<Label>) {
        let (x, y) = fixtures::worked_example().split_columns().unwrap();
        let tree = DecisionTree::fit(&x, &y, TreeParams::default()).unwrap();
        (tree, x, y)
    }

    #[test]
    fn root_is_enrolled_university() {
        let (tree, _, _) = worked_tree();
        assert_eq!(tree.root.column(), Some("enrolled_university"));
        assert_eq!(tree.root.counts(), [4, 4]);
    }

    #[test]
    fn part_time_row_predicts_one() {
        let (tree, x, _) = worked_tree();
        // row 6 is the only part-time enrollee
        assert_eq!(tree.predict(&x, 5).unwrap().label, 1);
    }

    #[test]
    fn row_three_predicts_its_label() {
        let (tree, x, y) = worked_tree();
        assert_eq!(tree.predict(&x, 2).unwrap().label, y[2]);
        assert_eq!(y[2], 0);
    }

    #[test]
    fn pure_labels_make_single_leaf() {
        let (x, _) = fixtures::worked_example().split_columns().unwrap();
        let tree = DecisionTree::fit(&x, &[1; 8], TreeParams::default()).unwrap();
        assert!(tree.root.is_leaf());
        assert_eq!(tree.predict_table(&x).unwrap(), vec![1; 8]);
    }

    #[test]
    fn depth_limit() {
        let (x, y) = fixtures::worked_example().split_columns().unwrap();
        let tree = DecisionTree::fit(
            &x,
            &y,
            TreeParams {
                max_depth: Some(1),
                ..TreeParams::default()
            },
        )
        .unwrap();
        assert_eq!(tree.depth(), 1);
        let stump = DecisionTree::fit(
            &x,
            &y,
            TreeParams {
                max_depth: Some(0),
                ..TreeParams::default()
            },
        )
        .unwrap();
        assert!(stump.root.is_leaf());
        // 4 vs 4 tie goes to class 0
        assert_eq!(stump.predict(&x, 0).unwrap().label, 0);
    }

    #[test]
    fn min_samples_leaf_stops_growth() {
        let (x, y) = fixtures::worked_example().split_columns().unwrap();
        let tree = DecisionTree::fit(
            &x,
            &y,
            TreeParams {
                min_samples_leaf: 9,
                ..TreeParams::default()
            },
        )
        .unwrap();
        assert!(tree.root.is_leaf());
    }

    #[test]
    fn unseen_category_follows_heaviest_child() {
        let (tree, x, _) = worked_tree();
        let mut cells: Vec<Option<String>> = x
            .column("enrolled_university")
            .unwrap()
            .as_categorical()
            .unwrap()
            .to_vec();
        cells[0] = Some("Distance course".into());
        let (schema, mut columns, n) = x.clone().into_parts();
        let idx = schema.index_of("enrolled_university").unwrap();
        columns[idx] = crate::table::ColumnData::Categorical(cells);
        let mut schema_cols = schema.columns().to_vec();
        schema_cols[idx].declared_values.clear();
        let t = Table::from_parts(crate::table::TableSchema::without_target(schema_cols).unwrap(), columns, n);
        // no_enrollment holds five of eight rows; row 1 is identical to a
        // no_enrollment row otherwise, so it follows that subtree.
        let expected = tree.predict(&x, 0).unwrap();
        assert_eq!(tree.predict(&t, 0).unwrap(), expected);
    }

    #[test]
    fn missing_feature_value_is_an_error() {
        let (tree, x, _) = worked_tree();
        let (schema, mut columns, n) = x.into_parts();
        let idx = schema.index_of("enrolled_university").unwrap();
        columns[idx] = crate::table::ColumnData::Categorical(vec![None; n]);
        let t = Table::from_parts(schema, columns, n);
        assert!(matches!(tree.predict(&t, 0), Err(Error::MissingValue { .. })));
    }

    #[test]
    fn categorical_used_once_per_path() {
        fn check(node: &Node, seen: &mut Vec<String>) {
            if let Node::Categorical { column, branches, .. } = node {
                assert!(!seen.contains(column), "{column} reused");
                seen.push(column.clone());
                for b in branches {
                    check(&b.node, seen);
                }
                seen.pop();
            } else if let Node::Threshold { upper, lower, .. } = node {
                check(upper, seen);
                check(lower, seen);
            }
        }
        let (tree, _, _) = worked_tree();
        check(&tree.root, &mut Vec::new());
    }

    #[test]
    fn json_round_trip() {
        let (tree, _, _) = worked_tree();
        let back = DecisionTree::from_json(&tree.to_json().unwrap()).unwrap();
        assert_eq!(back, tree);
    }

    #[test]
    fn empty_training_set_is_an_error() {
        let (x, _) = fixtures::worked_example().split_columns().unwrap();
        let empty = x.take_rows(&[]);
        assert!(matches!(
            DecisionTree::fit(&empty, &[], TreeParams::default()),
            Err(Error::Empty(_))
        ));
    }
}
