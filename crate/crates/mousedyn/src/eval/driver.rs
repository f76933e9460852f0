//! Experiment drivers: the verification stage and the two
//! authentication scenarios.
//!
//! Scenario A evaluates one target user at a time against sampled
//! impostor actions of every kind; scenario B restricts the data to a
//! single action kind first. Per-user work runs in parallel; every
//! random choice derives from (seed, user index), so worker count
//! never changes a report.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::report::{EvalReport, UserEval};
use super::{auc, confusion, eer_eq8, eer_roc, far_frr, metrics, roc_curve, EvalError};
use crate::features::{FeatureRow, TYPE_OF_ACTION_INDEX};
use crate::learn::{
    plain_split_indices, train_test_split_indices, Label, ModelConfig, ModelKind, TrainedModel,
};
use crate::rng::{derive_seed, Xoshiro256StarStar};
use crate::segment::ActionKind;

const STREAM_SPLIT: u64 = 0;
const STREAM_IMPOSTOR: u64 = 1;
const STREAM_MODEL: u64 = 2;

/// Knobs shared by all experiment drivers.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    /// Fraction of each class sent to the training side.
    pub split_ratio: f64,
    /// Impostor sample size as a multiple of the genuine count.
    pub impostor_ratio: f64,
    /// Acceptance threshold for label decisions and FAR/FRR.
    pub threshold: f64,
    pub model: ModelConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            split_ratio: 0.7,
            impostor_ratio: 1.0,
            threshold: 0.5,
            model: ModelConfig::default(),
        }
    }
}

/// The row order used by the reference result tables.
const TABLE_USER_ORDER: [u32; 10] = [35, 7, 9, 12, 15, 16, 20, 21, 23, 29];

fn trailing_number(id: &str) -> Option<u32> {
    let digits: String = id
        .chars()
        .rev()
        .take_while(|c| c.is_ascii_digit())
        .collect::<String>()
        .chars()
        .rev()
        .collect();
    digits.parse().ok()
}

/// Order user ids the way the reference result tables list them
/// (user 35 first); ids outside that list follow, sorted.
pub(crate) fn table_user_order(mut ids: Vec<String>) -> Vec<String> {
    ids.sort_by_key(|id| {
        let rank = trailing_number(id)
            .and_then(|n| TABLE_USER_ORDER.iter().position(|&p| p == n))
            .unwrap_or(usize::MAX);
        (rank, id.clone())
    });
    ids
}

fn group_by_user(rows: &[FeatureRow]) -> BTreeMap<&str, Vec<&FeatureRow>> {
    let mut map: BTreeMap<&str, Vec<&FeatureRow>> = BTreeMap::new();
    for r in rows {
        map.entry(r.user_id.as_str()).or_default().push(r);
    }
    map
}

fn matrix(rows: &[&FeatureRow], drop_type_column: bool) -> Vec<Vec<f64>> {
    rows.iter()
        .map(|r| {
            let vals = r.features.as_slice();
            if drop_type_column {
                vals.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != TYPE_OF_ACTION_INDEX)
                    .map(|(_, v)| *v)
                    .collect()
            } else {
                vals.to_vec()
            }
        })
        .collect()
}

/// Positive-only sanity stage: per user, train on 70% of that user's
/// actions and report the fraction of held-out actions accepted.
/// Single-class training makes every classifier accept everything, so
/// the expected accuracy is 100% by construction.
pub fn run_verification(
    rows: &[FeatureRow],
    kind: ModelKind,
    cfg: &ExperimentConfig,
    seed: u64,
) -> EvalReport {
    let by_user = group_by_user(rows);
    let users = table_user_order(by_user.keys().map(|s| s.to_string()).collect());

    let evals: Vec<Option<UserEval>> = users
        .par_iter()
        .enumerate()
        .map(|(u_idx, user)| {
            let user_rows = &by_user[user.as_str()];
            let user_seed = derive_seed(seed, u_idx as u64);
            let x = matrix(user_rows, false);
            let y = vec![Label::Genuine; x.len()];

            let (train_idx, test_idx) = match plain_split_indices(
                x.len(),
                cfg.split_ratio,
                derive_seed(user_seed, STREAM_SPLIT),
            ) {
                Ok(s) => s,
                Err(e) => {
                    log::warn!("verification: skipping user {user}: {e}");
                    return None;
                }
            };
            if train_idx.is_empty() || test_idx.is_empty() {
                log::warn!("verification: skipping user {user}: too few actions");
                return None;
            }

            let train_x: Vec<Vec<f64>> = train_idx.iter().map(|&i| x[i].clone()).collect();
            let train_y: Vec<Label> = train_idx.iter().map(|&i| y[i]).collect();
            let model = match TrainedModel::fit(
                kind,
                &train_x,
                &train_y,
                &cfg.model,
                derive_seed(user_seed, STREAM_MODEL),
            ) {
                Ok(m) => m,
                Err(e) => {
                    log::warn!("verification: skipping user {user}: {e}");
                    return None;
                }
            };

            let scores: Vec<f64> = test_idx.iter().map(|&i| model.score(&x[i])).collect();
            let accepted = scores.iter().filter(|&&s| s >= cfg.threshold).count();
            let cm = confusion(&scores, &vec![Label::Genuine; scores.len()], cfg.threshold).ok();

            Some(UserEval {
                user_id: user.clone(),
                n_train: train_idx.len(),
                n_test: test_idx.len(),
                acc: Some(accepted as f64 / scores.len() as f64),
                auc: None,
                far: None,
                frr: None,
                eer_eq8: None,
                eer_roc: None,
                confusion: cm,
                roc: None,
            })
        })
        .collect();

    EvalReport::new(
        "verify",
        kind.as_str(),
        "all",
        seed,
        evals.into_iter().flatten().collect(),
    )
}

/// Genuine-versus-impostor evaluation shared by both scenarios.
fn run_authentication(
    rows: &[FeatureRow],
    scenario: &str,
    action_tag: &str,
    drop_type_column: bool,
    kind: ModelKind,
    cfg: &ExperimentConfig,
    seed: u64,
) -> Result<EvalReport, EvalError> {
    let by_user = group_by_user(rows);
    if by_user.len() < 2 {
        return Err(EvalError::TooFewUsers(by_user.len()));
    }
    let users = table_user_order(by_user.keys().map(|s| s.to_string()).collect());

    let evals: Vec<Option<UserEval>> = users
        .par_iter()
        .enumerate()
        .map(|(u_idx, user)| {
            let user_seed = derive_seed(seed, u_idx as u64);
            let genuine: &[&FeatureRow] = &by_user[user.as_str()];

            // deterministic impostor pool: other users in table order
            let pool: Vec<&FeatureRow> = users
                .iter()
                .filter(|u| *u != user)
                .flat_map(|u| by_user[u.as_str()].iter().copied())
                .collect();
            let want = (cfg.impostor_ratio * genuine.len() as f64).floor() as usize;
            let n_impostors = want.min(pool.len());

            let mut rng = Xoshiro256StarStar::from_seed(derive_seed(user_seed, STREAM_IMPOSTOR));
            let impostors: Vec<&FeatureRow> = rng
                .sample_indices(pool.len(), n_impostors)
                .into_iter()
                .map(|i| pool[i])
                .collect();

            let mut picked: Vec<&FeatureRow> = genuine.to_vec();
            picked.extend(impostors);
            let x = matrix(&picked, drop_type_column);
            let labels: Vec<Label> = (0..x.len())
                .map(|i| {
                    if i < genuine.len() {
                        Label::Genuine
                    } else {
                        Label::Impostor
                    }
                })
                .collect();

            let (train_idx, test_idx) = match train_test_split_indices(
                &labels,
                cfg.split_ratio,
                derive_seed(user_seed, STREAM_SPLIT),
            ) {
                Ok(s) => s,
                Err(e) => {
                    log::warn!("{scenario}: skipping user {user}: {e}");
                    return None;
                }
            };

            let train_x: Vec<Vec<f64>> = train_idx.iter().map(|&i| x[i].clone()).collect();
            let train_y: Vec<Label> = train_idx.iter().map(|&i| labels[i]).collect();
            let model = match TrainedModel::fit(
                kind,
                &train_x,
                &train_y,
                &cfg.model,
                derive_seed(user_seed, STREAM_MODEL),
            ) {
                Ok(m) => m,
                Err(e) => {
                    log::warn!("{scenario}: skipping user {user}: {e}");
                    return None;
                }
            };

            let scores: Vec<f64> = test_idx.iter().map(|&i| model.score(&x[i])).collect();
            let test_y: Vec<Label> = test_idx.iter().map(|&i| labels[i]).collect();

            let cm = confusion(&scores, &test_y, cfg.threshold).ok()?;
            let basic = metrics(&cm);
            let rates = far_frr(&scores, &test_y, cfg.threshold).ok();
            let curve = roc_curve(&scores, &test_y).ok();

            Some(UserEval {
                user_id: user.clone(),
                n_train: train_idx.len(),
                n_test: test_idx.len(),
                acc: basic.acc,
                auc: curve.as_ref().map(auc),
                far: rates.map(|(f, _)| f),
                frr: rates.map(|(_, f)| f),
                eer_eq8: rates.map(|(f, r)| eer_eq8(f, r)),
                eer_roc: curve.as_ref().map(eer_roc),
                confusion: Some(cm),
                roc: curve.map(|c| c.points),
            })
        })
        .collect();

    Ok(EvalReport::new(
        scenario,
        kind.as_str(),
        action_tag,
        seed,
        evals.into_iter().flatten().collect(),
    ))
}

/// Scenario A: one target user at a time, actions of every kind.
pub fn run_scenario_a(
    rows: &[FeatureRow],
    kind: ModelKind,
    cfg: &ExperimentConfig,
    seed: u64,
) -> Result<EvalReport, EvalError> {
    run_authentication(rows, "a", "all", false, kind, cfg, seed)
}

/// Scenario B: the same protocol restricted to one action kind. The
/// constant action-type column is excluded from the feature set.
pub fn run_scenario_b(
    rows: &[FeatureRow],
    action: ActionKind,
    kind: ModelKind,
    cfg: &ExperimentConfig,
    seed: u64,
) -> Result<EvalReport, EvalError> {
    let filtered: Vec<FeatureRow> = rows.iter().filter(|r| r.kind == action).cloned().collect();
    let tag = action.as_str().to_ascii_lowercase();

    if filtered.is_empty() {
        log::warn!("scenario b: no {action} actions in the dataset");
        return Ok(EvalReport::new("b", kind.as_str(), tag, seed, Vec::new()));
    }

    let all_users: std::collections::BTreeSet<&str> =
        rows.iter().map(|r| r.user_id.as_str()).collect();
    let kept_users: std::collections::BTreeSet<&str> =
        filtered.iter().map(|r| r.user_id.as_str()).collect();
    for missing in all_users.difference(&kept_users) {
        log::warn!("scenario b: user {missing} has no {action} actions, skipped");
    }

    run_authentication(&filtered, "b", &tag, true, kind, cfg, seed)
}
