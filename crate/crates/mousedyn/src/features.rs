//! Kinematic feature extraction.
//!
//! Each action is reduced to 39 numeric features describing its
//! geometry (path length, straightness, deviation from the end-to-end
//! line) and its kinematics (velocity, acceleration, jerk, angular
//! velocity, and curvature statistics from finite differences of the
//! trajectory samples).

use std::f64::consts::PI;
use std::io::{BufRead, Write};

use rayon::prelude::*;
use thiserror::Error;

use crate::ingest::Dataset;
use crate::segment::{segment_actions, Action, ActionKind, Point, SegmentConfig};

/// Division guard for quantities that may legitimately be zero
/// (dt is strictly positive by construction and never needs it).
const EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy)]
pub struct FeatureConfig {
    /// Minimum |curvature| (rad/pixel) for a local maximum to count as
    /// a critical point.
    pub curvature_threshold: f64,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self {
            curvature_threshold: 0.5,
        }
    }
}

/// Finite-difference series over an action's points.
///
/// For n points: the velocity families have n-1 entries, the angular
/// families and acceleration n-2, and jerk n-3. Zero-length spatial
/// steps keep the previous heading (leading ones take the first real
/// heading), so they contribute dtheta = 0 and curv = 0.
#[derive(Debug, Clone, Default)]
pub struct Kinematics {
    pub dt: Vec<f64>,
    pub vx: Vec<f64>,
    pub vy: Vec<f64>,
    pub v: Vec<f64>,
    pub theta: Vec<f64>,
    pub dtheta: Vec<f64>,
    pub omega: Vec<f64>,
    pub curv: Vec<f64>,
    pub accel: Vec<f64>,
    pub jerk: Vec<f64>,
}

fn wrap_angle(mut d: f64) -> f64 {
    while d > PI {
        d -= 2.0 * PI;
    }
    while d <= -PI {
        d += 2.0 * PI;
    }
    d
}

/// Compute all finite-difference series for a point sequence with
/// strictly increasing times.
pub fn kinematics(points: &[Point]) -> Kinematics {
    let n = points.len();
    let mut k = Kinematics::default();
    if n < 2 {
        return k;
    }

    // leading zero-length steps inherit the first real heading, so a
    // stationary start never manufactures a turn
    let mut prev_theta = points
        .windows(2)
        .map(|w| (w[1].x - w[0].x, w[1].y - w[0].y))
        .find(|&(dx, dy)| dx != 0.0 || dy != 0.0)
        .map(|(dx, dy)| dy.atan2(dx))
        .unwrap_or(0.0);

    let mut ds = Vec::with_capacity(n - 1);
    for w in points.windows(2) {
        let dt = w[1].t - w[0].t;
        let dx = w[1].x - w[0].x;
        let dy = w[1].y - w[0].y;
        let step = (dx * dx + dy * dy).sqrt();
        let theta = if step == 0.0 {
            prev_theta
        } else {
            dy.atan2(dx)
        };
        prev_theta = theta;
        let vx = dx / dt;
        let vy = dy / dt;
        k.dt.push(dt);
        ds.push(step);
        k.vx.push(vx);
        k.vy.push(vy);
        k.v.push((vx * vx + vy * vy).sqrt());
        k.theta.push(theta);
    }

    for j in 0..n.saturating_sub(2) {
        let d = wrap_angle(k.theta[j + 1] - k.theta[j]);
        k.dtheta.push(d);
        k.omega.push(d / k.dt[j + 1]);
        k.curv
            .push(if ds[j + 1] > 0.0 { d / ds[j + 1] } else { 0.0 });
        k.accel.push((k.v[j + 1] - k.v[j]) / k.dt[j + 1]);
    }

    for j in 0..n.saturating_sub(3) {
        k.jerk.push((k.accel[j + 1] - k.accel[j]) / k.dt[j + 2]);
    }

    k
}

/// Max perpendicular distance of any point to the line through the
/// first and last point; falls back to max distance from the first
/// point when the endpoints coincide.
pub fn largest_deviation(points: &[Point]) -> f64 {
    let first = points.first().expect("at least 2 points");
    let last = points.last().unwrap();
    let dx = last.x - first.x;
    let dy = last.y - first.y;
    let base = (dx * dx + dy * dy).sqrt();
    let mut best = 0.0f64;
    if base == 0.0 {
        for p in points {
            let ex = p.x - first.x;
            let ey = p.y - first.y;
            best = best.max((ex * ex + ey * ey).sqrt());
        }
    } else {
        for p in points {
            let cross = (p.x - first.x) * dy - (p.y - first.y) * dx;
            best = best.max(cross.abs() / base);
        }
    }
    best
}

/// Count strict local maxima of |curv| at or above `threshold`.
/// A missing neighbor at the series boundary never blocks a maximum.
pub fn num_critical_points(curv: &[f64], threshold: f64) -> usize {
    (0..curv.len())
        .filter(|&i| {
            let c = curv[i].abs();
            c >= threshold
                && (i == 0 || c > curv[i - 1].abs())
                && (i + 1 == curv.len() || c > curv[i + 1].abs())
        })
        .count()
}

/// Time from the action start to the first strict local maximum of the
/// speed series (accumulated dt through that step); the whole duration
/// when speed never peaks.
pub fn a_beg_time(v: &[f64], dt: &[f64]) -> f64 {
    debug_assert_eq!(v.len(), dt.len());
    for i in 0..v.len() {
        let left_ok = i == 0 || v[i] > v[i - 1];
        let right_ok = i + 1 == v.len() || v[i] > v[i + 1];
        if left_ok && right_ok {
            return dt[..=i].iter().sum();
        }
    }
    dt.iter().sum()
}

fn stats(series: &[f64]) -> (f64, f64, f64, f64) {
    if series.is_empty() {
        return (0.0, 0.0, 0.0, 0.0);
    }
    let n = series.len() as f64;
    let mean = series.iter().sum::<f64>() / n;
    let var = series.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    let max = series.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = series.iter().cloned().fold(f64::INFINITY, f64::min);
    (mean, var.sqrt(), max, min)
}

pub const FEATURE_COUNT: usize = 39;

/// Feature names in ranking order; also the CSV column order.
pub const FEATURE_NAMES: [&str; FEATURE_COUNT] = [
    "type_of_action",
    "travelled_distance_in_pixels",
    "elapsed_time",
    "direction_of_movement",
    "straightness",
    "num_points",
    "sum_of_angles",
    "mean_curv",
    "sd_curv",
    "max_curv",
    "min_curv",
    "mean_omega",
    "sd_omega",
    "max_omega",
    "min_omega",
    "largest_deviation",
    "dist_end_to_end_line",
    "num_critical_points",
    "mean_vx",
    "sd_vx",
    "max_vx",
    "min_vx",
    "mean_vy",
    "sd_vy",
    "max_vy",
    "min_vy",
    "mean_v",
    "sd_v",
    "max_v",
    "min_v",
    "mean_a",
    "sd_a",
    "max_a",
    "min_a",
    "mean_jerk",
    "sd_jerk",
    "max_jerk",
    "min_jerk",
    "a_beg_time",
];

/// Index of the categorical action-type feature (the only column that
/// is constant in single-action experiments).
pub const TYPE_OF_ACTION_INDEX: usize = 0;

/// The 39 per-action features, stored in ranking order.
#[derive(Debug, Clone, PartialEq)]
pub struct Features(pub [f64; FEATURE_COUNT]);

impl Features {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        FEATURE_NAMES
            .iter()
            .position(|&n| n == name)
            .map(|i| self.0[i])
    }

    pub fn straightness(&self) -> f64 {
        self.0[4]
    }
}

/// Features for one action plus its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRow {
    pub user_id: String,
    pub session_id: String,
    pub action_id: u32,
    pub kind: ActionKind,
    pub features: Features,
}

/// Compute the full feature vector for one action.
pub fn extract_features(action: &Action, cfg: &FeatureConfig) -> FeatureRow {
    let pts = &action.points;
    debug_assert!(pts.len() >= 4, "actions need at least 4 points");
    let k = kinematics(pts);

    let travelled: f64 = pts
        .windows(2)
        .map(|w| {
            let dx = w[1].x - w[0].x;
            let dy = w[1].y - w[0].y;
            (dx * dx + dy * dy).sqrt()
        })
        .sum();

    let first = pts.first().unwrap();
    let last = pts.last().unwrap();
    let ex = last.x - first.x;
    let ey = last.y - first.y;
    let dist_e2e = (ex * ex + ey * ey).sqrt();
    let coincident = last.x == first.x && last.y == first.y;

    let direction = if coincident {
        0.0
    } else {
        let d = ey.atan2(ex);
        if d == -PI {
            PI
        } else {
            d
        }
    };
    let straightness = (dist_e2e / travelled.max(EPS)).clamp(0.0, 1.0);
    let sum_of_angles: f64 = k.dtheta.iter().map(|d| d.abs()).sum();
    let elapsed = last.t - first.t;

    let (mean_curv, sd_curv, max_curv, min_curv) = stats(&k.curv);
    let (mean_omega, sd_omega, max_omega, min_omega) = stats(&k.omega);
    let (mean_vx, sd_vx, max_vx, min_vx) = stats(&k.vx);
    let (mean_vy, sd_vy, max_vy, min_vy) = stats(&k.vy);
    let (mean_v, sd_v, max_v, min_v) = stats(&k.v);
    let (mean_a, sd_a, max_a, min_a) = stats(&k.accel);
    let (mean_jerk, sd_jerk, max_jerk, min_jerk) = stats(&k.jerk);

    let values = [
        action.kind.code(),
        travelled,
        elapsed,
        direction,
        straightness,
        pts.len() as f64,
        sum_of_angles,
        mean_curv,
        sd_curv,
        max_curv,
        min_curv,
        mean_omega,
        sd_omega,
        max_omega,
        min_omega,
        largest_deviation(pts),
        dist_e2e,
        num_critical_points(&k.curv, cfg.curvature_threshold) as f64,
        mean_vx,
        sd_vx,
        max_vx,
        min_vx,
        mean_vy,
        sd_vy,
        max_vy,
        min_vy,
        mean_v,
        sd_v,
        max_v,
        min_v,
        mean_a,
        sd_a,
        max_a,
        min_a,
        mean_jerk,
        sd_jerk,
        max_jerk,
        min_jerk,
        a_beg_time(&k.v, &k.dt),
    ];

    FeatureRow {
        user_id: action.user_id.clone(),
        session_id: action.session_id.clone(),
        action_id: action.action_id,
        kind: action.kind,
        features: Features(values),
    }
}

/// Segment and featurize every session of a dataset. Sessions are
/// processed in parallel and reduced in (user, session) order.
pub fn extract_all(
    dataset: &Dataset,
    seg_cfg: &SegmentConfig,
    feat_cfg: &FeatureConfig,
) -> Vec<FeatureRow> {
    let sessions: Vec<_> = dataset.users.values().flat_map(|ss| ss.iter()).collect();
    sessions
        .par_iter()
        .map(|session| {
            segment_actions(session, seg_cfg)
                .iter()
                .map(|a| extract_features(a, feat_cfg))
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

#[derive(Debug, Error)]
pub enum FeatureCsvError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Schema { line: usize, msg: String },
}

/// Write the feature table in its interchange CSV form.
pub fn write_feature_csv(rows: &[FeatureRow], mut w: impl Write) -> Result<(), FeatureCsvError> {
    let mut header = String::from("user_id,session_id,action_id,kind");
    for name in FEATURE_NAMES {
        header.push(',');
        header.push_str(name);
    }
    writeln!(w, "{header}")?;
    for row in rows {
        let mut line = format!(
            "{},{},{},{}",
            row.user_id, row.session_id, row.action_id, row.kind
        );
        for v in row.features.as_slice() {
            line.push(',');
            line.push_str(&format!("{v}"));
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// Read a feature table written by [`write_feature_csv`].
pub fn read_feature_csv(r: impl BufRead) -> Result<Vec<FeatureRow>, FeatureCsvError> {
    let mut rows = Vec::new();
    let mut expected_header = String::from("user_id,session_id,action_id,kind");
    for name in FEATURE_NAMES {
        expected_header.push(',');
        expected_header.push_str(name);
    }

    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if i == 0 {
            if line.trim_end() != expected_header {
                return Err(FeatureCsvError::Schema {
                    line: 1,
                    msg: "unexpected header".into(),
                });
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 + FEATURE_COUNT {
            return Err(FeatureCsvError::Schema {
                line: i + 1,
                msg: format!(
                    "expected {} fields, found {}",
                    4 + FEATURE_COUNT,
                    fields.len()
                ),
            });
        }
        let action_id: u32 = fields[2].parse().map_err(|_| FeatureCsvError::Schema {
            line: i + 1,
            msg: format!("bad action id {:?}", fields[2]),
        })?;
        let kind = ActionKind::parse(fields[3]).ok_or_else(|| FeatureCsvError::Schema {
            line: i + 1,
            msg: format!("bad action kind {:?}", fields[3]),
        })?;
        let mut values = [0.0; FEATURE_COUNT];
        for (j, tok) in fields[4..].iter().enumerate() {
            let v: f64 = tok.parse().map_err(|_| FeatureCsvError::Schema {
                line: i + 1,
                msg: format!("bad value {tok:?} in column {}", FEATURE_NAMES[j]),
            })?;
            if !v.is_finite() {
                return Err(FeatureCsvError::Schema {
                    line: i + 1,
                    msg: format!("non-finite value in column {}", FEATURE_NAMES[j]),
                });
            }
            values[j] = v;
        }
        rows.push(FeatureRow {
            user_id: fields[0].to_string(),
            session_id: fields[1].to_string(),
            action_id,
            kind,
            features: Features(values),
        });
    }
    Ok(rows)
}
