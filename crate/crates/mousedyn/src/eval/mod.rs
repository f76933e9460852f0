//! Evaluation: confusion metrics, FAR/FRR, equal error rates, ROC/AUC,
//! and the verification / authentication experiment drivers.
//!
//! Metrics with a zero denominator are reported as undefined (`None`),
//! never silently zeroed. Two EER variants are emitted side by side:
//! the (FAR+FRR)/2 value at the decision threshold, and the standard
//! ROC crossover where FAR equals FRR.

mod driver;
mod report;
mod roc;

pub use driver::{run_scenario_a, run_scenario_b, run_verification, ExperimentConfig};
pub use report::{AverageRow, EvalReport, UserEval};
pub use roc::{auc, eer_roc, roc_curve, RocCurve, RocPoint};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::learn::Label;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("scores and labels are empty")]
    EmptyInput,
    #[error("scores and labels have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("both classes must be present")]
    MissingClass,
    #[error("need at least 2 users, found {0}")]
    TooFewUsers(usize),
    #[error("no actions of the requested kind")]
    NoActions,
}

/// Classification counts at a fixed threshold.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub tn: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.tp + self.tn + self.fp + self.fn_
    }
}

/// Count outcomes with acceptance rule `score >= threshold`.
pub fn confusion(
    scores: &[f64],
    labels: &[Label],
    threshold: f64,
) -> Result<ConfusionMatrix, EvalError> {
    if scores.len() != labels.len() {
        return Err(EvalError::LengthMismatch(scores.len(), labels.len()));
    }
    if scores.is_empty() {
        return Err(EvalError::EmptyInput);
    }
    let mut cm = ConfusionMatrix::default();
    for (&s, l) in scores.iter().zip(labels) {
        let accepted = s >= threshold;
        match (l.is_genuine(), accepted) {
            (true, true) => cm.tp += 1,
            (true, false) => cm.fn_ += 1,
            (false, true) => cm.fp += 1,
            (false, false) => cm.tn += 1,
        }
    }
    Ok(cm)
}

/// Ratio metrics of a confusion matrix; `None` where the denominator
/// is zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasicMetrics {
    pub acc: Option<f64>,
    pub tpr: Option<f64>,
    pub tnr: Option<f64>,
    pub fpr: Option<f64>,
    pub fnr: Option<f64>,
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

pub fn metrics(cm: &ConfusionMatrix) -> BasicMetrics {
    BasicMetrics {
        acc: ratio(cm.tp + cm.tn, cm.total()),
        tpr: ratio(cm.tp, cm.tp + cm.fn_),
        tnr: ratio(cm.tn, cm.tn + cm.fp),
        fpr: ratio(cm.fp, cm.fp + cm.tn),
        fnr: ratio(cm.fn_, cm.fn_ + cm.tp),
    }
}

/// False acceptance and false rejection rates at `threshold`.
/// Errors unless both classes are present.
pub fn far_frr(scores: &[f64], labels: &[Label], threshold: f64) -> Result<(f64, f64), EvalError> {
    if scores.len() != labels.len() {
        return Err(EvalError::LengthMismatch(scores.len(), labels.len()));
    }
    let cm = confusion(scores, labels, threshold)?;
    let impostors = cm.fp + cm.tn;
    let genuines = cm.tp + cm.fn_;
    if impostors == 0 || genuines == 0 {
        return Err(EvalError::MissingClass);
    }
    Ok((
        cm.fp as f64 / impostors as f64,
        cm.fn_ as f64 / genuines as f64,
    ))
}

/// The half-total-error-rate form of the equal error rate.
pub fn eer_eq8(far: f64, frr: f64) -> f64 {
    (far + frr) / 2.0
}
