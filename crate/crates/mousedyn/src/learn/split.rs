//! Seeded train/test splitting.

use std::collections::BTreeMap;

use super::LearnError;
use crate::rng::Xoshiro256StarStar;

/// Stratified split: per label, shuffle and send `floor(ratio * n)`
/// samples to the training side, then re-shuffle both sides so label
/// blocks do not survive in the output order. Returns index lists into
/// the caller's sample array.
///
/// Requires at least two distinct labels, each with at least two
/// samples.
pub fn train_test_split_indices<L: Ord + Clone + std::fmt::Debug>(
    labels: &[L],
    ratio: f64,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>), LearnError> {
    if labels.is_empty() {
        return Err(LearnError::EmptyInput);
    }
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(LearnError::BadRatio(ratio));
    }

    let mut by_label: BTreeMap<&L, Vec<usize>> = BTreeMap::new();
    for (i, l) in labels.iter().enumerate() {
        by_label.entry(l).or_default().push(i);
    }
    if by_label.len() < 2 {
        return Err(LearnError::SingleClass);
    }
    for (l, idx) in &by_label {
        if idx.len() < 2 {
            return Err(LearnError::LabelTooSmall(format!("{l:?}")));
        }
    }

    let mut rng = Xoshiro256StarStar::from_seed(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for idx in by_label.values() {
        let mut idx = idx.clone();
        rng.shuffle(&mut idx);
        let n_train = ((ratio * idx.len() as f64).floor() as usize).clamp(1, idx.len() - 1);
        train.extend_from_slice(&idx[..n_train]);
        test.extend_from_slice(&idx[n_train..]);
    }
    rng.shuffle(&mut train);
    rng.shuffle(&mut test);
    Ok((train, test))
}

/// Unstratified seeded split, used where a single class is expected
/// (the verification stage trains on genuine data only).
pub fn plain_split_indices(
    n: usize,
    ratio: f64,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>), LearnError> {
    if n == 0 {
        return Err(LearnError::EmptyInput);
    }
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(LearnError::BadRatio(ratio));
    }
    let mut idx: Vec<usize> = (0..n).collect();
    let mut rng = Xoshiro256StarStar::from_seed(seed);
    rng.shuffle(&mut idx);
    let n_train = ((ratio * n as f64).floor() as usize)
        .min(n - 1)
        .max(if n > 1 { 1 } else { 0 });
    let test = idx.split_off(n_train);
    Ok((idx, test))
}
