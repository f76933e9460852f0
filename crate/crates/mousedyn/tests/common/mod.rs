//! Shared helpers for the integration and acceptance suites: scaled
//! tolerance comparison, random trajectory generation on dyadic grids
//! (so translation and time shifts are exact in floating point), and a
//! definition-level reimplementation of the 39 features that shares no
//! code with the library's extraction path.

#![allow(dead_code)]

use mousedyn::rng::Xoshiro256StarStar;
use mousedyn::segment::{Action, ActionKind, Point};

/// |a-b| within `tol`, relative for large magnitudes.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1.0f64.max(a.abs()).max(b.abs())
}

pub fn assert_close(a: f64, b: f64, tol: f64, what: &str) {
    assert!(close(a, b, tol), "{what}: {a} vs {b} (tol {tol})");
}

/// Random action whose times sit on a 1/1024 s grid and coordinates on
/// a 1/32 px grid. Roughly one step in twelve is a zero-length hold to
/// exercise the heading carry-over convention.
pub fn random_action(rng: &mut Xoshiro256StarStar, min_points: usize, max_points: usize) -> Action {
    let n = min_points + rng.gen_range(max_points - min_points + 1);
    let mut t = rng.gen_range(4096) as f64 / 1024.0;
    let mut x = (rng.gen_range(1024 * 32) as f64) / 32.0;
    let mut y = (rng.gen_range(768 * 32) as f64) / 32.0;
    let mut points = Vec::with_capacity(n);
    points.push(Point { t, x, y });
    for _ in 1..n {
        t += (8 + rng.gen_range(200)) as f64 / 1024.0;
        if rng.gen_range(12) != 0 {
            x += (rng.gen_range(1281) as f64 - 640.0) / 32.0;
            y += (rng.gen_range(1281) as f64 - 640.0) / 32.0;
        }
        points.push(Point { t, x, y });
    }
    let kind = match rng.gen_range(3) {
        0 => ActionKind::MM,
        1 => ActionKind::PC,
        _ => ActionKind::DD,
    };
    Action::new("u", "s", 0, kind, points).expect("generated action is valid")
}

fn wrap(mut d: f64) -> f64 {
    use std::f64::consts::PI;
    while d > PI {
        d -= 2.0 * PI;
    }
    while d <= -PI {
        d += 2.0 * PI;
    }
    d
}

fn naive_stats(xs: &[f64]) -> (f64, f64, f64, f64) {
    if xs.is_empty() {
        return (0.0, 0.0, 0.0, 0.0);
    }
    let mut sum = 0.0;
    for &v in xs {
        sum += v;
    }
    let mean = sum / xs.len() as f64;
    let mut sq = 0.0;
    for &v in xs {
        sq += (v - mean) * (v - mean);
    }
    let sd = (sq / xs.len() as f64).sqrt();
    let mut max = xs[0];
    let mut min = xs[0];
    for &v in xs {
        if v > max {
            max = v;
        }
        if v < min {
            min = v;
        }
    }
    (mean, sd, max, min)
}

/// Recompute all 39 features straight from their definitions. Kept
/// deliberately plain so it can be checked by eye against the feature
/// descriptions; the only shared items with the library are the Action
/// type and the output ordering.
pub fn oracle_features(action: &Action, curvature_threshold: f64) -> [f64; 39] {
    use std::f64::consts::PI;
    let pts = &action.points;
    let n = pts.len();

    // heading carried over zero-length steps; a stationary start takes
    // the heading of the first real movement
    let mut first_heading = 0.0;
    for i in 0..n - 1 {
        let dx = pts[i + 1].x - pts[i].x;
        let dy = pts[i + 1].y - pts[i].y;
        if dx != 0.0 || dy != 0.0 {
            first_heading = dy.atan2(dx);
            break;
        }
    }

    let mut dt = vec![0.0; n - 1];
    let mut step_len = vec![0.0; n - 1];
    let mut vx = vec![0.0; n - 1];
    let mut vy = vec![0.0; n - 1];
    let mut speed = vec![0.0; n - 1];
    let mut heading = vec![0.0; n - 1];
    for i in 0..n - 1 {
        let ddt = pts[i + 1].t - pts[i].t;
        let dx = pts[i + 1].x - pts[i].x;
        let dy = pts[i + 1].y - pts[i].y;
        dt[i] = ddt;
        step_len[i] = (dx * dx + dy * dy).sqrt();
        vx[i] = dx / ddt;
        vy[i] = dy / ddt;
        speed[i] = (vx[i] * vx[i] + vy[i] * vy[i]).sqrt();
        heading[i] = if step_len[i] == 0.0 {
            if i == 0 {
                first_heading
            } else {
                heading[i - 1]
            }
        } else {
            dy.atan2(dx)
        };
    }

    let mut turn = vec![0.0; n - 2];
    let mut omega = vec![0.0; n - 2];
    let mut curvature = vec![0.0; n - 2];
    let mut accel = vec![0.0; n - 2];
    for i in 0..n - 2 {
        turn[i] = wrap(heading[i + 1] - heading[i]);
        omega[i] = turn[i] / dt[i + 1];
        curvature[i] = if step_len[i + 1] > 0.0 {
            turn[i] / step_len[i + 1]
        } else {
            0.0
        };
        accel[i] = (speed[i + 1] - speed[i]) / dt[i + 1];
    }
    let mut jerk = vec![0.0; n - 3];
    for i in 0..n - 3 {
        jerk[i] = (accel[i + 1] - accel[i]) / dt[i + 2];
    }

    let mut travelled = 0.0;
    for &s in &step_len {
        travelled += s;
    }
    let ex = pts[n - 1].x - pts[0].x;
    let ey = pts[n - 1].y - pts[0].y;
    let dist_e2e = (ex * ex + ey * ey).sqrt();
    let coincident = pts[n - 1].x == pts[0].x && pts[n - 1].y == pts[0].y;
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
    let denom = if travelled > 1e-12 { travelled } else { 1e-12 };
    let straightness = (dist_e2e / denom).clamp(0.0, 1.0);

    let mut sum_angles = 0.0;
    for &a in &turn {
        sum_angles += a.abs();
    }
    let elapsed = pts[n - 1].t - pts[0].t;

    // largest deviation from the end-to-end line
    let mut deviation = 0.0f64;
    if dist_e2e == 0.0 {
        for p in pts {
            let dx = p.x - pts[0].x;
            let dy = p.y - pts[0].y;
            deviation = deviation.max((dx * dx + dy * dy).sqrt());
        }
    } else {
        for p in pts {
            let cross = (p.x - pts[0].x) * ey - (p.y - pts[0].y) * ex;
            deviation = deviation.max(cross.abs() / dist_e2e);
        }
    }

    // strict local maxima of |curvature| above the threshold
    let mut criticals = 0usize;
    for i in 0..curvature.len() {
        let c = curvature[i].abs();
        if c < curvature_threshold {
            continue;
        }
        let left = i == 0 || c > curvature[i - 1].abs();
        let right = i + 1 == curvature.len() || c > curvature[i + 1].abs();
        if left && right {
            criticals += 1;
        }
    }

    // time until the speed series first peaks
    let mut beg = None;
    for i in 0..speed.len() {
        let left = i == 0 || speed[i] > speed[i - 1];
        let right = i + 1 == speed.len() || speed[i] > speed[i + 1];
        if left && right {
            let mut acc = 0.0;
            for &d in &dt[..=i] {
                acc += d;
            }
            beg = Some(acc);
            break;
        }
    }
    let a_beg = beg.unwrap_or_else(|| {
        let mut acc = 0.0;
        for &d in &dt {
            acc += d;
        }
        acc
    });

    let (mean_curv, sd_curv, max_curv, min_curv) = naive_stats(&curvature);
    let (mean_omega, sd_omega, max_omega, min_omega) = naive_stats(&omega);
    let (mean_vx, sd_vx, max_vx, min_vx) = naive_stats(&vx);
    let (mean_vy, sd_vy, max_vy, min_vy) = naive_stats(&vy);
    let (mean_v, sd_v, max_v, min_v) = naive_stats(&speed);
    let (mean_a, sd_a, max_a, min_a) = naive_stats(&accel);
    let (mean_j, sd_j, max_j, min_j) = naive_stats(&jerk);

    [
        match action.kind {
            ActionKind::MM => 0.0,
            ActionKind::PC => 1.0,
            ActionKind::DD => 2.0,
        },
        travelled,
        elapsed,
        direction,
        straightness,
        n as f64,
        sum_angles,
        mean_curv,
        sd_curv,
        max_curv,
        min_curv,
        mean_omega,
        sd_omega,
        max_omega,
        min_omega,
        deviation,
        dist_e2e,
        criticals as f64,
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
        mean_j,
        sd_j,
        max_j,
        min_j,
        a_beg,
    ]
}

/// Transformed copies of an action for the invariance suites.
pub fn translate_action(action: &Action, dx: f64, dy: f64) -> Action {
    let mut a = action.clone();
    for p in &mut a.points {
        p.x += dx;
        p.y += dy;
    }
    a
}

pub fn time_shift_action(action: &Action, dt: f64) -> Action {
    let mut a = action.clone();
    for p in &mut a.points {
        p.t += dt;
    }
    a
}

pub fn rotate_action(action: &Action, phi: f64) -> Action {
    let (sin, cos) = phi.sin_cos();
    let mut a = action.clone();
    for p in &mut a.points {
        let (x, y) = (p.x, p.y);
        p.x = x * cos - y * sin;
        p.y = x * sin + y * cos;
    }
    a
}

pub fn scale_action(action: &Action, s: f64) -> Action {
    let mut a = action.clone();
    for p in &mut a.points {
        p.x *= s;
        p.y *= s;
    }
    a
}
