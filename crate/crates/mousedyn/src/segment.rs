//! Action segmentation.
//!
//! A session's event stream is cut into three kinds of actions:
//! mouse moves (MM), point clicks (PC), and drag-and-drops (DD).
//! Boundary rules, in priority order:
//!
//! 1. `Pressed` opens a click scope and the matching `Released` closes
//!    it. The movement leading up to the press belongs to the click
//!    action; if the scope contained a `Drag` the action is DD,
//!    otherwise PC.
//! 2. An inter-event pause longer than `gap_threshold` ends the action
//!    in progress. A click scope broken by a gap is discarded, like an
//!    unmatched `Pressed` at end of session.
//! 3. A maximal run of movement events that never reaches a click is MM.
//!
//! Scroll events are dropped before segmentation, orphan `Released`/
//! `Drag` events (no open scope) are discarded and terminate the run in
//! progress, and actions with fewer than `min_points` points are thrown
//! away.

use std::fmt;

use crate::ingest::{EventState, Session};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ActionKind {
    MM,
    PC,
    DD,
}

impl ActionKind {
    pub const ALL: [ActionKind; 3] = [ActionKind::MM, ActionKind::PC, ActionKind::DD];

    pub fn as_str(&self) -> &'static str {
        match self {
            ActionKind::MM => "MM",
            ActionKind::PC => "PC",
            ActionKind::DD => "DD",
        }
    }

    pub fn parse(s: &str) -> Option<ActionKind> {
        match s.to_ascii_uppercase().as_str() {
            "MM" => Some(ActionKind::MM),
            "PC" => Some(ActionKind::PC),
            "DD" => Some(ActionKind::DD),
            _ => None,
        }
    }

    /// Categorical encoding used as the first feature.
    pub fn code(&self) -> f64 {
        match self {
            ActionKind::MM => 0.0,
            ActionKind::PC => 1.0,
            ActionKind::DD => 2.0,
        }
    }
}

impl fmt::Display for ActionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One trajectory sample on the client clock.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub t: f64,
    pub x: f64,
    pub y: f64,
}

/// A contiguous event subsequence of one kind; the unit of
/// classification.
#[derive(Debug, Clone, PartialEq)]
pub struct Action {
    pub user_id: String,
    pub session_id: String,
    /// Ordinal of the action within its session.
    pub action_id: u32,
    pub kind: ActionKind,
    pub points: Vec<Point>,
}

impl Action {
    /// Validated constructor for hand-built actions: at least 4 points
    /// with strictly increasing times.
    pub fn new(
        user_id: impl Into<String>,
        session_id: impl Into<String>,
        action_id: u32,
        kind: ActionKind,
        points: Vec<Point>,
    ) -> Option<Action> {
        if points.len() < 4 {
            return None;
        }
        if !points.windows(2).all(|w| w[0].t < w[1].t) {
            return None;
        }
        Some(Action {
            user_id: user_id.into(),
            session_id: session_id.into(),
            action_id,
            kind,
            points,
        })
    }

    pub fn duration(&self) -> f64 {
        self.points.last().unwrap().t - self.points.first().unwrap().t
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SegmentConfig {
    /// Pause length (seconds) that ends the action in progress.
    pub gap_threshold: f64,
    /// Minimum samples per retained action; jerk is a third difference
    /// so anything below 4 carries no usable kinematics.
    pub min_points: usize,
}

impl SegmentConfig {
    pub fn new(gap_threshold: f64, min_points: usize) -> Result<Self, String> {
        if gap_threshold.is_nan() || gap_threshold <= 0.0 {
            return Err(format!("gap-threshold must be > 0, got {gap_threshold}"));
        }
        if min_points < 4 {
            return Err(format!("min-points must be >= 4, got {min_points}"));
        }
        Ok(Self {
            gap_threshold,
            min_points,
        })
    }
}

impl Default for SegmentConfig {
    fn default() -> Self {
        Self {
            gap_threshold: 10.0,
            min_points: 4,
        }
    }
}

/// Per-kind action tallies.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ActionCounts {
    pub mm: usize,
    pub pc: usize,
    pub dd: usize,
}

impl ActionCounts {
    pub fn total(&self) -> usize {
        self.mm + self.pc + self.dd
    }

    pub fn get(&self, kind: ActionKind) -> usize {
        match kind {
            ActionKind::MM => self.mm,
            ActionKind::PC => self.pc,
            ActionKind::DD => self.dd,
        }
    }
}

pub fn action_counts(actions: &[Action]) -> ActionCounts {
    let mut c = ActionCounts::default();
    for a in actions {
        match a.kind {
            ActionKind::MM => c.mm += 1,
            ActionKind::PC => c.pc += 1,
            ActionKind::DD => c.dd += 1,
        }
    }
    c
}

/// Partition a session's events into actions.
pub fn segment_actions(session: &Session, cfg: &SegmentConfig) -> Vec<Action> {
    let mut out = Vec::new();
    let mut buffer: Vec<Point> = Vec::new();
    let mut in_click = false;
    let mut saw_drag = false;
    let mut prev_t: Option<f64> = None;
    let mut next_id: u32 = 0;

    let flush =
        |buffer: &mut Vec<Point>, kind: ActionKind, out: &mut Vec<Action>, next_id: &mut u32| {
            if buffer.len() >= cfg.min_points {
                out.push(Action {
                    user_id: session.user_id.clone(),
                    session_id: session.session_id.clone(),
                    action_id: *next_id,
                    kind,
                    points: std::mem::take(buffer),
                });
                *next_id += 1;
            } else {
                buffer.clear();
            }
        };

    for ev in session.events.iter().filter(|e| !e.is_scroll()) {
        if let Some(pt) = prev_t {
            if !buffer.is_empty() && ev.ctime - pt > cfg.gap_threshold {
                if in_click {
                    buffer.clear(); // scope broken by the pause
                } else {
                    flush(&mut buffer, ActionKind::MM, &mut out, &mut next_id);
                }
                in_click = false;
                saw_drag = false;
            }
        }
        prev_t = Some(ev.ctime);

        let point = Point {
            t: ev.ctime,
            x: ev.x,
            y: ev.y,
        };

        match (&ev.state, in_click) {
            (EventState::Pressed, false) => {
                buffer.push(point);
                in_click = true;
                saw_drag = false;
            }
            (EventState::Pressed, true) => {
                // repeated press without release: broken scope
                buffer.clear();
                buffer.push(point);
                saw_drag = false;
            }
            (EventState::Released, true) => {
                buffer.push(point);
                let kind = if saw_drag {
                    ActionKind::DD
                } else {
                    ActionKind::PC
                };
                flush(&mut buffer, kind, &mut out, &mut next_id);
                in_click = false;
                saw_drag = false;
            }
            (EventState::Released, false) | (EventState::Drag, false) => {
                // orphan: close off whatever movement came before it
                flush(&mut buffer, ActionKind::MM, &mut out, &mut next_id);
            }
            (EventState::Drag, true) => {
                buffer.push(point);
                saw_drag = true;
            }
            // Move and unknown states are plain trajectory samples
            _ => buffer.push(point),
        }
    }

    if !in_click {
        flush(&mut buffer, ActionKind::MM, &mut out, &mut next_id);
    }

    out
}
