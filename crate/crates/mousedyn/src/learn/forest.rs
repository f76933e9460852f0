//! Random forest: bagged CART trees with per-split feature subsampling.

use rayon::prelude::*;

use super::tree::{fit_on_indices, TreeConfig, TreeModel};
use super::Label;
use crate::rng::{derive_seed, Xoshiro256StarStar};

/// How many candidate features each split considers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureSubsample {
    /// floor(sqrt(d)), the usual forest default.
    Sqrt,
    /// Every feature (no randomness at splits).
    All,
    Fixed(usize),
}

#[derive(Debug, Clone, Copy)]
pub struct ForestConfig {
    pub n_trees: usize,
    pub bootstrap: bool,
    pub subsample: FeatureSubsample,
    pub tree: TreeConfig,
}

impl Default for ForestConfig {
    fn default() -> Self {
        Self {
            n_trees: 100,
            bootstrap: true,
            subsample: FeatureSubsample::Sqrt,
            tree: TreeConfig::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ForestModel {
    trees: Vec<TreeModel>,
}

/// Fit `n_trees` trees. Tree `i` draws everything from a generator
/// seeded with `derive_seed(seed, i)`, so parallel and serial fits are
/// identical.
pub fn forest_fit(x: &[Vec<f64>], y: &[Label], cfg: &ForestConfig, seed: u64) -> ForestModel {
    assert!(cfg.n_trees >= 1, "forest needs at least one tree");
    assert!(!x.is_empty(), "cannot fit a forest on no samples");
    let n = x.len();
    let d = x[0].len();
    let m = match cfg.subsample {
        FeatureSubsample::Sqrt => ((d as f64).sqrt().floor() as usize).max(1),
        FeatureSubsample::All => d,
        FeatureSubsample::Fixed(m) => m.clamp(1, d),
    };

    let trees: Vec<TreeModel> = (0..cfg.n_trees)
        .into_par_iter()
        .map(|i| {
            let mut rng = Xoshiro256StarStar::from_seed(derive_seed(seed, i as u64));
            let indices: Vec<usize> = if cfg.bootstrap {
                (0..n).map(|_| rng.gen_range(n)).collect()
            } else {
                (0..n).collect()
            };
            let mut sampler = if m < d { Some((m, &mut rng)) } else { None };
            fit_on_indices(x, y, indices, &cfg.tree, &mut sampler)
        })
        .collect();

    ForestModel { trees }
}

impl ForestModel {
    /// Mean of the per-tree genuine fractions.
    pub fn score(&self, query: &[f64]) -> f64 {
        let sum: f64 = self.trees.iter().map(|t| t.score(query)).sum();
        sum / self.trees.len() as f64
    }

    pub fn predict(&self, query: &[f64]) -> Label {
        if self.score(query) >= 0.5 {
            Label::Genuine
        } else {
            Label::Impostor
        }
    }

    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    pub fn tree_scores(&self, query: &[f64]) -> Vec<f64> {
        self.trees.iter().map(|t| t.score(query)).collect()
    }
}
