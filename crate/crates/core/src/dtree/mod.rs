//! Entropy-based decision trees.

mod split;
mod tree;

pub use split::{
    best_split, conditional_entropy, entropy, information_gain, numeric_threshold, Branch,
    SplitCandidate, SplitChoice, SplitKind, TiePolicy, MIN_GAIN, TIE_TOLERANCE,
};
pub use tree::{majority, CategoryBranch, DecisionTree, Node, Prediction, TreeParams};

pub(crate) use split::FeatureColumn;
