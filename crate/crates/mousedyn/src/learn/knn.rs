//! Brute-force k-nearest-neighbors classifier.

use super::{Label, LearnError};

/// Stored training set (expected pre-scaled) plus the neighbor count.
#[derive(Debug, Clone)]
pub struct KnnModel {
    data: Vec<Vec<f64>>,
    labels: Vec<Label>,
    k: usize,
}

/// Build a KNN model. Fails when `k` exceeds the training size.
pub fn knn_fit(data: Vec<Vec<f64>>, labels: Vec<Label>, k: usize) -> Result<KnnModel, LearnError> {
    assert_eq!(data.len(), labels.len());
    if data.is_empty() {
        return Err(LearnError::EmptyInput);
    }
    if k == 0 || k > data.len() {
        return Err(LearnError::KTooLarge { k, n: data.len() });
    }
    Ok(KnnModel { data, labels, k })
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

impl KnnModel {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Fraction of the k nearest training samples labeled genuine.
    /// Distance ties break toward the lower training index.
    pub fn score(&self, query: &[f64]) -> f64 {
        let mut dist: Vec<(f64, usize)> = self
            .data
            .iter()
            .enumerate()
            .map(|(i, row)| (sq_dist(row, query), i))
            .collect();
        // total order: distances are finite, then index breaks ties;
        // selection keeps the same k-smallest set a full sort would
        if self.k < dist.len() {
            dist.select_nth_unstable_by(self.k - 1, |a, b| a.partial_cmp(b).unwrap());
        }
        let genuine = dist[..self.k]
            .iter()
            .filter(|&&(_, i)| self.labels[i].is_genuine())
            .count();
        genuine as f64 / self.k as f64
    }

    pub fn predict(&self, query: &[f64]) -> Label {
        if self.score(query) >= 0.5 {
            Label::Genuine
        } else {
            Label::Impostor
        }
    }
}
