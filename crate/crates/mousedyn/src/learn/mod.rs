//! Classifiers and data preparation.
//!
//! Three from-scratch models share one scoring contract: a trained
//! model maps a feature vector to the probability that it belongs to
//! the genuine class. KNN works on standardized features; the tree and
//! forest split on raw values since thresholds are scale-free.

mod forest;
mod knn;
mod scaler;
mod split;
mod tree;

pub use forest::{forest_fit, FeatureSubsample, ForestConfig, ForestModel};
pub use knn::{knn_fit, KnnModel};
pub use scaler::Scaler;
pub use split::{plain_split_indices, train_test_split_indices};
pub use tree::{tree_fit, TreeConfig, TreeModel};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::derive_seed;

#[derive(Debug, Error)]
pub enum LearnError {
    #[error("cannot split an empty sample set")]
    EmptyInput,
    #[error("split ratio must be in (0, 1), got {0}")]
    BadRatio(f64),
    #[error("cannot stratify: label {0:?} has fewer than 2 samples")]
    LabelTooSmall(String),
    #[error("cannot stratify a single-class sample set")]
    SingleClass,
    #[error("k = {k} exceeds training size {n}")]
    KTooLarge { k: usize, n: usize },
}

/// Binary class label for the authentication task.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    Genuine,
    Impostor,
}

impl Label {
    pub fn is_genuine(&self) -> bool {
        matches!(self, Label::Genuine)
    }
}

/// Which classifier to train.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelKind {
    DecisionTree,
    Knn,
    RandomForest,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [
        ModelKind::DecisionTree,
        ModelKind::Knn,
        ModelKind::RandomForest,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::DecisionTree => "dt",
            ModelKind::Knn => "knn",
            ModelKind::RandomForest => "rf",
        }
    }

    pub fn parse(s: &str) -> Option<ModelKind> {
        match s.to_ascii_lowercase().as_str() {
            "dt" | "tree" | "decision-tree" => Some(ModelKind::DecisionTree),
            "knn" | "k-nn" => Some(ModelKind::Knn),
            "rf" | "forest" | "random-forest" => Some(ModelKind::RandomForest),
            _ => None,
        }
    }
}

/// Hyperparameters for all three classifiers.
#[derive(Debug, Clone)]
pub struct ModelConfig {
    pub k: usize,
    pub tree: TreeConfig,
    pub forest: ForestConfig,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            k: 5,
            tree: TreeConfig::default(),
            forest: ForestConfig::default(),
        }
    }
}

/// A fitted classifier with its preprocessing baked in.
#[derive(Debug, Clone)]
pub enum TrainedModel {
    Knn { model: KnnModel, scaler: Scaler },
    Tree(TreeModel),
    Forest(ForestModel),
}

impl TrainedModel {
    /// Fit `kind` on a training set. `seed` only matters for the forest
    /// (bootstrap and feature subsampling streams derive from it).
    pub fn fit(
        kind: ModelKind,
        train_x: &[Vec<f64>],
        train_y: &[Label],
        cfg: &ModelConfig,
        seed: u64,
    ) -> Result<TrainedModel, LearnError> {
        if train_x.is_empty() {
            return Err(LearnError::EmptyInput);
        }
        Ok(match kind {
            ModelKind::Knn => {
                let scaler = Scaler::fit(train_x);
                let scaled: Vec<Vec<f64>> = train_x.iter().map(|r| scaler.transform(r)).collect();
                TrainedModel::Knn {
                    model: knn_fit(scaled, train_y.to_vec(), cfg.k)?,
                    scaler,
                }
            }
            ModelKind::DecisionTree => TrainedModel::Tree(tree_fit(train_x, train_y, &cfg.tree)),
            ModelKind::RandomForest => TrainedModel::Forest(forest_fit(
                train_x,
                train_y,
                &cfg.forest,
                derive_seed(seed, 0xF0),
            )),
        })
    }

    /// Probability that `x` belongs to the genuine class.
    pub fn score(&self, x: &[f64]) -> f64 {
        match self {
            TrainedModel::Knn { model, scaler } => model.score(&scaler.transform(x)),
            TrainedModel::Tree(t) => t.score(x),
            TrainedModel::Forest(f) => f.score(x),
        }
    }
}
