//! Synthetic session generator.
//!
//! Produces plausible clickstream logs with controllable motion style,
//! useful for demos and for end-to-end tests when no real capture is
//! available. Timestamps land on a 1/1024 s grid and coordinates on
//! whole pixels, so written files re-parse to bit-identical values.

use std::f64::consts::TAU;
use std::fs;
use std::io::Write;
use std::path::Path;

use crate::ingest::{Button, EventState, RawEvent};
use crate::rng::{derive_seed, Xoshiro256StarStar};

const TICK: f64 = 1.0 / 1024.0;
/// Pause between generated actions; comfortably above the default
/// segmentation gap threshold.
const ACTION_GAP_TICKS: u64 = 12 * 1024;

#[derive(Debug, Clone, Copy)]
pub struct StrokeStyle {
    /// Mean cursor speed, pixels per second.
    pub speed: f64,
    /// Relative speed variation within a stroke, 0..1.
    pub speed_jitter: f64,
    /// Random per-step heading change, radians.
    pub turn_jitter: f64,
    /// Amplitude of the systematic swerve along a stroke, radians.
    pub wobble: f64,
    pub points_min: usize,
    pub points_max: usize,
}

impl StrokeStyle {
    /// Quick, direct strokes with little curvature.
    pub fn fast_straight() -> StrokeStyle {
        StrokeStyle {
            speed: 1800.0,
            speed_jitter: 0.15,
            turn_jitter: 0.03,
            wobble: 0.02,
            points_min: 20,
            points_max: 50,
        }
    }

    /// Slow, meandering strokes with heavy curvature.
    pub fn slow_curvy() -> StrokeStyle {
        StrokeStyle {
            speed: 320.0,
            speed_jitter: 0.4,
            turn_jitter: 0.3,
            wobble: 0.45,
            points_min: 25,
            points_max: 60,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SynthUser {
    pub user_id: String,
    pub style: StrokeStyle,
    pub sessions: usize,
    pub actions_per_session: usize,
}

fn uniform(rng: &mut Xoshiro256StarStar, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.next_f64()
}

struct Cursor {
    /// Time in ticks; converted to seconds only at emission.
    ticks: u64,
    x: f64,
    y: f64,
    events: Vec<RawEvent>,
}

impl Cursor {
    fn emit(&mut self, button: Button, state: EventState) {
        let t = self.ticks as f64 * TICK;
        self.events.push(RawEvent {
            rtime: t,
            ctime: t,
            button,
            state,
            x: self.x.round().clamp(0.0, 1600.0),
            y: self.y.round().clamp(0.0, 1200.0),
        });
    }
}

fn stroke(
    cursor: &mut Cursor,
    style: &StrokeStyle,
    n_points: usize,
    state: EventState,
    rng: &mut Xoshiro256StarStar,
) {
    let mut heading = uniform(rng, 0.0, TAU);
    let phase = uniform(rng, 0.0, TAU);
    for i in 0..n_points {
        let dt_ticks = 8 + rng.gen_range(9) as u64;
        cursor.ticks += dt_ticks;
        let speed = style.speed * (1.0 + style.speed_jitter * (uniform(rng, -1.0, 1.0)));
        let step = speed * (dt_ticks as f64 * TICK);
        heading += style.wobble * (i as f64 * 0.6 + phase).sin()
            + style.turn_jitter * uniform(rng, -1.0, 1.0);
        let nx = cursor.x + step * heading.cos();
        let ny = cursor.y + step * heading.sin();
        // bounce off the screen edges
        if !(0.0..=1600.0).contains(&nx) {
            heading = std::f64::consts::PI - heading;
        }
        if !(0.0..=1200.0).contains(&ny) {
            heading = -heading;
        }
        cursor.x = (cursor.x + step * heading.cos()).clamp(0.0, 1600.0);
        cursor.y = (cursor.y + step * heading.sin()).clamp(0.0, 1200.0);
        cursor.emit(Button::NoButton, state.clone());
    }
}

/// Generate one session's event stream: a mix of MM, PC, and DD
/// actions separated by long pauses.
pub fn generate_session_events(
    style: &StrokeStyle,
    n_actions: usize,
    rng: &mut Xoshiro256StarStar,
) -> Vec<RawEvent> {
    let mut cursor = Cursor {
        ticks: 0,
        x: uniform(rng, 200.0, 1400.0),
        y: uniform(rng, 150.0, 1000.0),
        events: Vec::new(),
    };

    for _ in 0..n_actions {
        cursor.ticks += ACTION_GAP_TICKS;
        let n_points = style.points_min + rng.gen_range(style.points_max - style.points_min + 1);
        match rng.gen_range(10) {
            // mouse move
            0..=4 => stroke(&mut cursor, style, n_points, EventState::Move, rng),
            // point click: approach movement then press/release in place
            5..=7 => {
                stroke(&mut cursor, style, n_points, EventState::Move, rng);
                cursor.ticks += 16 + rng.gen_range(32) as u64;
                cursor.emit(Button::Left, EventState::Pressed);
                cursor.ticks += 64 + rng.gen_range(64) as u64;
                cursor.emit(Button::Left, EventState::Released);
            }
            // drag and drop
            _ => {
                let approach = (n_points / 3).max(4);
                stroke(&mut cursor, style, approach, EventState::Move, rng);
                cursor.ticks += 16 + rng.gen_range(32) as u64;
                cursor.emit(Button::Left, EventState::Pressed);
                stroke(&mut cursor, style, n_points, EventState::Drag, rng);
                cursor.ticks += 16 + rng.gen_range(32) as u64;
                cursor.emit(Button::Left, EventState::Released);
            }
        }
    }

    cursor.events
}

/// Write a dataset tree `<root>/<user>/session_<n>` for the given
/// users. Everything derives from `seed`.
pub fn write_synthetic_dataset(root: &Path, users: &[SynthUser], seed: u64) -> std::io::Result<()> {
    for (u_idx, user) in users.iter().enumerate() {
        let dir = root.join(&user.user_id);
        fs::create_dir_all(&dir)?;
        let user_seed = derive_seed(seed, u_idx as u64);
        for s_idx in 0..user.sessions {
            let mut rng = Xoshiro256StarStar::from_seed(derive_seed(user_seed, s_idx as u64));
            let events = generate_session_events(&user.style, user.actions_per_session, &mut rng);
            let mut file = fs::File::create(dir.join(format!("session_{s_idx:02}")))?;
            writeln!(file, "record timestamp,client timestamp,button,state,x,y")?;
            for ev in &events {
                writeln!(file, "{}", ev.to_canonical_line())?;
            }
        }
    }
    Ok(())
}

/// Two-user demo dataset: one fast/straight mover, one slow/curvy one.
pub fn demo_users(actions_per_session: usize, sessions: usize) -> Vec<SynthUser> {
    vec![
        SynthUser {
            user_id: "user_fast".into(),
            style: StrokeStyle::fast_straight(),
            sessions,
            actions_per_session,
        },
        SynthUser {
            user_id: "user_curvy".into(),
            style: StrokeStyle::slow_curvy(),
            sessions,
            actions_per_session,
        },
    ]
}
