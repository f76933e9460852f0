//! CART decision tree with Gini impurity.
//!
//! Greedy binary splits; candidate thresholds are midpoints between
//! consecutive distinct sorted feature values; ties break toward the
//! lowest feature index, then the lowest threshold. An impure node is
//! split whenever any candidate exists, even with zero impurity gain,
//! so an unlimited-depth tree always separates consistent training
//! data. Nodes are built iteratively; recursion depth is unbounded on
//! adversarial data.

use super::Label;
use crate::rng::Xoshiro256StarStar;

#[derive(Debug, Clone)]
pub enum Node {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        genuine: usize,
        total: usize,
    },
}

#[derive(Debug, Clone, Copy)]
pub struct TreeConfig {
    /// Maximum depth; `None` grows until purity.
    pub max_depth: Option<usize>,
    /// Minimum samples each side of a split must keep.
    pub min_leaf: usize,
}

impl Default for TreeConfig {
    fn default() -> Self {
        Self {
            max_depth: None,
            min_leaf: 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TreeModel {
    nodes: Vec<Node>,
}

pub fn tree_fit(x: &[Vec<f64>], y: &[Label], cfg: &TreeConfig) -> TreeModel {
    let indices: Vec<usize> = (0..x.len()).collect();
    fit_on_indices(x, y, indices, cfg, &mut None)
}

/// Fit on a chosen multiset of sample indices (the forest passes its
/// bootstrap resample here). `sampler` draws the candidate feature
/// subset at every split; `None` scans all features.
pub(super) fn fit_on_indices(
    x: &[Vec<f64>],
    y: &[Label],
    root_indices: Vec<usize>,
    cfg: &TreeConfig,
    sampler: &mut Option<(usize, &mut Xoshiro256StarStar)>,
) -> TreeModel {
    assert!(!root_indices.is_empty(), "cannot fit a tree on no samples");
    let n_features = x[0].len();

    struct Task {
        indices: Vec<usize>,
        depth: usize,
        slot: usize,
    }

    let mut nodes = vec![Node::Leaf {
        genuine: 0,
        total: 0,
    }];
    let mut stack = vec![Task {
        indices: root_indices,
        depth: 0,
        slot: 0,
    }];

    while let Some(task) = stack.pop() {
        let genuine = task.indices.iter().filter(|&&i| y[i].is_genuine()).count();
        let total = task.indices.len();
        let pure = genuine == 0 || genuine == total;
        let depth_capped = cfg.max_depth.is_some_and(|d| task.depth >= d);

        let split = if pure || depth_capped {
            None
        } else {
            let candidates: Option<Vec<usize>> = sampler.as_mut().map(|(m, rng)| {
                let mut f = rng.sample_indices(n_features, (*m).min(n_features));
                f.sort_unstable();
                f
            });
            let found = match &candidates {
                Some(f) => best_split(x, y, &task.indices, f, cfg.min_leaf),
                None => None,
            };
            // a constant sampled subset must not stop growth early
            match found {
                Some(s) => Some(s),
                None => {
                    let all: Vec<usize> = (0..n_features).collect();
                    best_split(x, y, &task.indices, &all, cfg.min_leaf)
                }
            }
        };

        match split {
            Some((feature, threshold)) => {
                let (li, ri): (Vec<usize>, Vec<usize>) = task
                    .indices
                    .iter()
                    .partition(|&&i| x[i][feature] <= threshold);
                let left = nodes.len();
                nodes.push(Node::Leaf {
                    genuine: 0,
                    total: 0,
                });
                let right = nodes.len();
                nodes.push(Node::Leaf {
                    genuine: 0,
                    total: 0,
                });
                nodes[task.slot] = Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                };
                stack.push(Task {
                    indices: li,
                    depth: task.depth + 1,
                    slot: left,
                });
                stack.push(Task {
                    indices: ri,
                    depth: task.depth + 1,
                    slot: right,
                });
            }
            None => nodes[task.slot] = Node::Leaf { genuine, total },
        }
    }

    TreeModel { nodes }
}

/// Gini impurity of a (genuine, total) node.
fn gini(genuine: usize, total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let p = genuine as f64 / total as f64;
    let q = 1.0 - p;
    1.0 - p * p - q * q
}

/// Best (feature, threshold) over `features` by weighted Gini,
/// or None when every candidate feature is constant on this node.
fn best_split(
    x: &[Vec<f64>],
    y: &[Label],
    indices: &[usize],
    features: &[usize],
    min_leaf: usize,
) -> Option<(usize, f64)> {
    let total = indices.len();
    if total < min_leaf.max(1) * 2 {
        return None;
    }
    let total_f = total as f64;
    let mut best: Option<(f64, usize, f64)> = None;

    let mut column: Vec<(f64, bool)> = Vec::with_capacity(total);
    for &f in features {
        column.clear();
        column.extend(indices.iter().map(|&i| (x[i][f], y[i].is_genuine())));
        column.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

        let total_genuine = column.iter().filter(|(_, g)| *g).count();
        let mut left_n = 0usize;
        let mut left_genuine = 0usize;
        for w in 0..total - 1 {
            left_n += 1;
            if column[w].1 {
                left_genuine += 1;
            }
            let (a, b) = (column[w].0, column[w + 1].0);
            if a == b {
                continue;
            }
            let right_n = total - left_n;
            if left_n < min_leaf || right_n < min_leaf {
                continue;
            }
            let mut threshold = (a + b) / 2.0;
            if threshold >= b {
                threshold = a; // midpoint rounded up to the next value
            }
            let right_genuine = total_genuine - left_genuine;
            let score = (left_n as f64 * gini(left_genuine, left_n)
                + right_n as f64 * gini(right_genuine, right_n))
                / total_f;
            if best.is_none_or(|(s, _, _)| score < s) {
                best = Some((score, f, threshold));
            }
        }
    }

    best.map(|(_, f, t)| (f, t))
}

impl TreeModel {
    /// Genuine fraction at the leaf `query` routes to.
    pub fn score(&self, query: &[f64]) -> f64 {
        let mut node = 0usize;
        loop {
            match &self.nodes[node] {
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if query[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    };
                }
                Node::Leaf { genuine, total } => {
                    return *genuine as f64 / (*total).max(1) as f64;
                }
            }
        }
    }

    pub fn predict(&self, query: &[f64]) -> Label {
        if self.score(query) >= 0.5 {
            Label::Genuine
        } else {
            Label::Impostor
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }
}
