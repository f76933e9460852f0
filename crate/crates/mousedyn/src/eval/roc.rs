//! ROC curves, trapezoidal AUC, and the crossover equal error rate.

use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::learn::Label;

/// One operating point. `threshold: None` marks the initial
/// accept-nothing point (a threshold above every score).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    pub threshold: Option<f64>,
    pub fpr: f64,
    pub tpr: f64,
}

/// Operating points from (0,0) to (1,1), FPR and TPR non-decreasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    pub points: Vec<RocPoint>,
}

/// Sweep thresholds over the distinct score values in descending
/// order; samples sharing a score enter the curve together.
pub fn roc_curve(scores: &[f64], labels: &[Label]) -> Result<RocCurve, EvalError> {
    if scores.len() != labels.len() {
        return Err(EvalError::LengthMismatch(scores.len(), labels.len()));
    }
    if scores.is_empty() {
        return Err(EvalError::EmptyInput);
    }
    let n_genuine = labels.iter().filter(|l| l.is_genuine()).count();
    let n_impostor = labels.len() - n_genuine;
    if n_genuine == 0 || n_impostor == 0 {
        return Err(EvalError::MissingClass);
    }

    let mut pairs: Vec<(f64, bool)> = scores
        .iter()
        .zip(labels)
        .map(|(&s, l)| (s, l.is_genuine()))
        .collect();
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());

    let mut points = vec![RocPoint {
        threshold: None,
        fpr: 0.0,
        tpr: 0.0,
    }];
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut i = 0;
    while i < pairs.len() {
        let score = pairs[i].0;
        while i < pairs.len() && pairs[i].0 == score {
            if pairs[i].1 {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push(RocPoint {
            threshold: Some(score),
            fpr: fp as f64 / n_impostor as f64,
            tpr: tp as f64 / n_genuine as f64,
        });
    }

    Ok(RocCurve { points })
}

/// Area under the curve by the trapezoidal rule.
pub fn auc(curve: &RocCurve) -> f64 {
    curve
        .points
        .windows(2)
        .map(|w| (w[1].fpr - w[0].fpr) * (w[0].tpr + w[1].tpr) / 2.0)
        .sum()
}

/// FPR at the operating point where FPR = 1 - TPR, linearly
/// interpolated between the bracketing curve points. Both FPR and
/// 1-TPR are monotone along the curve, so the crossing is unique.
pub fn eer_roc(curve: &RocCurve) -> f64 {
    let d = |p: &RocPoint| (1.0 - p.tpr) - p.fpr;
    for w in curve.points.windows(2) {
        let (d0, d1) = (d(&w[0]), d(&w[1]));
        if d1 <= 0.0 {
            if d0 == d1 {
                return w[1].fpr;
            }
            let s = d0 / (d0 - d1);
            return w[0].fpr + s * (w[1].fpr - w[0].fpr);
        }
    }
    // last point is (1,1) where d = -1, so we never get here for a
    // well-formed curve
    curve.points.last().map(|p| p.fpr).unwrap_or(0.5)
}
