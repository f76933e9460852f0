//! Experiment reports: per-user metric rows, an average row, and the
//! JSON / CSV / console renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{ConfusionMatrix, RocPoint};

/// Metrics for one target user.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserEval {
    pub user_id: String,
    pub n_train: usize,
    pub n_test: usize,
    pub acc: Option<f64>,
    pub auc: Option<f64>,
    pub far: Option<f64>,
    pub frr: Option<f64>,
    pub eer_eq8: Option<f64>,
    pub eer_roc: Option<f64>,
    pub confusion: Option<ConfusionMatrix>,
    pub roc: Option<Vec<RocPoint>>,
}

/// Column-wise arithmetic mean over the user rows, taken over the rows
/// where the column is defined.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AverageRow {
    pub acc: Option<f64>,
    pub auc: Option<f64>,
    pub far: Option<f64>,
    pub frr: Option<f64>,
    pub eer_eq8: Option<f64>,
    pub eer_roc: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub scenario: String,
    pub model: String,
    pub action: String,
    pub seed: u64,
    pub rows: Vec<UserEval>,
    pub average: AverageRow,
}

fn mean_of<F: Fn(&UserEval) -> Option<f64>>(rows: &[UserEval], get: F) -> Option<f64> {
    let vals: Vec<f64> = rows.iter().filter_map(&get).collect();
    (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
}

impl EvalReport {
    pub fn new(
        scenario: impl Into<String>,
        model: impl Into<String>,
        action: impl Into<String>,
        seed: u64,
        rows: Vec<UserEval>,
    ) -> EvalReport {
        let average = AverageRow {
            acc: mean_of(&rows, |r| r.acc),
            auc: mean_of(&rows, |r| r.auc),
            far: mean_of(&rows, |r| r.far),
            frr: mean_of(&rows, |r| r.frr),
            eer_eq8: mean_of(&rows, |r| r.eer_eq8),
            eer_roc: mean_of(&rows, |r| r.eer_roc),
        };
        EvalReport {
            scenario: scenario.into(),
            model: model.into(),
            action: action.into(),
            seed,
            rows,
            average,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<EvalReport, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// Flat CSV mirror of the metric columns, one user per row plus the
    /// average row.
    pub fn summary_csv(&self) -> String {
        fn cell(v: Option<f64>) -> String {
            v.map(|v| format!("{v}")).unwrap_or_else(|| "n/a".into())
        }
        let mut out = String::from("user,acc,auc,far,frr,eer_eq8,eer_roc\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.user_id,
                cell(r.acc),
                cell(r.auc),
                cell(r.far),
                cell(r.frr),
                cell(r.eer_eq8),
                cell(r.eer_roc)
            );
        }
        let a = &self.average;
        let _ = writeln!(
            out,
            "Avg,{},{},{},{},{},{}",
            cell(a.acc),
            cell(a.auc),
            cell(a.far),
            cell(a.frr),
            cell(a.eer_eq8),
            cell(a.eer_roc)
        );
        out
    }

    /// Fixed-width console table in the layout of the usual
    /// per-user result tables.
    pub fn format_table(&self) -> String {
        fn pct(v: Option<f64>) -> String {
            v.map(|v| format!("{:.1}", v * 100.0))
                .unwrap_or_else(|| "n/a".into())
        }
        fn num(v: Option<f64>) -> String {
            v.map(|v| format!("{v:.3}")).unwrap_or_else(|| "n/a".into())
        }
        let mut out = format!(
            "scenario={} model={} action={} seed={}\n",
            self.scenario, self.model, self.action, self.seed
        );
        let _ = writeln!(
            out,
            "{:<10} {:>7} {:>7} {:>7} {:>7} {:>9} {:>9}",
            "User", "ACC%", "AUC", "FAR", "FRR", "EER(eq8)", "EER(roc)"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<10} {:>7} {:>7} {:>7} {:>7} {:>9} {:>9}",
                r.user_id,
                pct(r.acc),
                num(r.auc),
                num(r.far),
                num(r.frr),
                num(r.eer_eq8),
                num(r.eer_roc)
            );
        }
        let a = &self.average;
        let _ = writeln!(
            out,
            "{:<10} {:>7} {:>7} {:>7} {:>7} {:>9} {:>9}",
            "Avg",
            pct(a.acc),
            num(a.auc),
            num(a.far),
            num(a.frr),
            num(a.eer_eq8),
            num(a.eer_roc)
        );
        out
    }

    /// `threshold,fpr,tpr` CSV for one user's ROC points, if present.
    pub fn roc_csv(&self, user_id: &str) -> Option<String> {
        let row = self.rows.iter().find(|r| r.user_id == user_id)?;
        let points = row.roc.as_ref()?;
        let mut out = String::from("threshold,fpr,tpr\n");
        for p in points {
            let t = p
                .threshold
                .map(|t| format!("{t}"))
                .unwrap_or_else(|| "inf".into());
            let _ = writeln!(out, "{},{},{}", t, p.fpr, p.tpr);
        }
        Some(out)
    }
}
