//! Session log parsing.
//!
//! Input is the six-column clickstream layout used by the Balabit mouse
//! challenge release: `rtime,ctime,button,state,x,y` with one row per
//! recorded event and an optional header row. Sessions live in
//! `<root>/<user>/<session-file>`.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("session contains no valid event rows")]
    EmptySession,
    #[error("dataset root {0} contains no user directories")]
    NoUsers(PathBuf),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// Mouse button identifier from the `button` column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Button {
    NoButton,
    Left,
    Right,
    Scroll,
    /// Vendor-specific token preserved verbatim.
    Other(String),
}

impl Button {
    fn parse(tok: &str) -> Self {
        match tok {
            "NoButton" => Button::NoButton,
            "Left" => Button::Left,
            "Right" => Button::Right,
            "Scroll" => Button::Scroll,
            other => Button::Other(other.to_string()),
        }
    }

    fn as_str(&self) -> &str {
        match self {
            Button::NoButton => "NoButton",
            Button::Left => "Left",
            Button::Right => "Right",
            Button::Scroll => "Scroll",
            Button::Other(s) => s,
        }
    }
}

/// Button state from the `state` column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EventState {
    Move,
    Pressed,
    Released,
    Drag,
    /// Scroll wheel down.
    Down,
    /// Scroll wheel up.
    Up,
    Other(String),
}

impl EventState {
    fn parse(tok: &str) -> Self {
        match tok {
            "Move" => EventState::Move,
            "Pressed" => EventState::Pressed,
            "Released" => EventState::Released,
            "Drag" => EventState::Drag,
            "Down" => EventState::Down,
            "Up" => EventState::Up,
            other => EventState::Other(other.to_string()),
        }
    }

    fn as_str(&self) -> &str {
        match self {
            EventState::Move => "Move",
            EventState::Pressed => "Pressed",
            EventState::Released => "Released",
            EventState::Drag => "Drag",
            EventState::Down => "Down",
            EventState::Up => "Up",
            EventState::Other(s) => s,
        }
    }
}

/// One parsed log row.
#[derive(Debug, Clone, PartialEq)]
pub struct RawEvent {
    /// Seconds since session start on the network monitor clock.
    pub rtime: f64,
    /// Seconds since session start on the client clock. This is the
    /// kinematic clock used downstream.
    pub ctime: f64,
    pub button: Button,
    pub state: EventState,
    pub x: f64,
    pub y: f64,
}

impl RawEvent {
    /// Scroll traffic carries no trajectory information and is dropped
    /// before segmentation.
    pub fn is_scroll(&self) -> bool {
        self.button == Button::Scroll || matches!(self.state, EventState::Down | EventState::Up)
    }

    /// Canonical text form; parsing it back yields an identical event.
    pub fn to_canonical_line(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.rtime,
            self.ctime,
            self.button.as_str(),
            self.state.as_str(),
            self.x,
            self.y
        )
    }
}

/// Outcome of parsing a single line.
#[derive(Debug, Clone, PartialEq)]
pub enum Parsed {
    Event(RawEvent),
    /// Header row, skipped.
    Header,
}

const HEADER_FIRST_FIELDS: [&str; 2] = ["record timestamp", "rtime"];

/// Parse one six-field row. `line_no` is 1-based and only used in error
/// messages.
pub fn parse_event_line(line: &str, line_no: usize) -> Result<Parsed, IngestError> {
    let fields: Vec<&str> = line.split(',').collect();
    let err = |msg: String| IngestError::Parse { line: line_no, msg };

    if fields.len() != 6 {
        return Err(err(format!("expected 6 fields, found {}", fields.len())));
    }

    let first = fields[0].trim();
    if first.parse::<f64>().is_err() && HEADER_FIRST_FIELDS.contains(&first) {
        return Ok(Parsed::Header);
    }

    let time = |tok: &str, name: &str| -> Result<f64, IngestError> {
        let v: f64 = tok
            .trim()
            .parse()
            .map_err(|_| err(format!("bad {name} {tok:?}")))?;
        if !v.is_finite() || v < 0.0 {
            return Err(err(format!("{name} {tok:?} out of range")));
        }
        Ok(v)
    };
    let coord = |tok: &str, name: &str| -> Result<f64, IngestError> {
        let v: f64 = tok
            .trim()
            .parse()
            .map_err(|_| err(format!("bad {name} {tok:?}")))?;
        if !v.is_finite() {
            return Err(err(format!("{name} {tok:?} not finite")));
        }
        Ok(v)
    };

    Ok(Parsed::Event(RawEvent {
        rtime: time(fields[0], "record timestamp")?,
        ctime: time(fields[1], "client timestamp")?,
        button: Button::parse(fields[2].trim()),
        state: EventState::parse(fields[3].trim()),
        x: coord(fields[4], "x coordinate")?,
        y: coord(fields[5], "y coordinate")?,
    }))
}

/// One user session: events sorted by client time with duplicate
/// timestamps merged (last event wins, so dt is never zero downstream).
#[derive(Debug, Clone, PartialEq)]
pub struct Session {
    pub user_id: String,
    pub session_id: String,
    pub events: Vec<RawEvent>,
}

/// Read and normalize a whole session from a line source.
pub fn load_session(
    source: impl BufRead,
    user_id: &str,
    session_id: &str,
) -> Result<Session, IngestError> {
    let mut events = Vec::new();
    for (i, line) in source.lines().enumerate() {
        let line = line.map_err(|e| IngestError::Parse {
            line: i + 1,
            msg: format!("unreadable line: {e}"),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        match parse_event_line(&line, i + 1)? {
            Parsed::Event(ev) => events.push(ev),
            Parsed::Header => {}
        }
    }
    if events.is_empty() {
        return Err(IngestError::EmptySession);
    }

    // Stable sort, then keep the last event of every equal-ctime run.
    events.sort_by(|a, b| a.ctime.partial_cmp(&b.ctime).unwrap());
    let mut merged: Vec<RawEvent> = Vec::with_capacity(events.len());
    for ev in events {
        match merged.last() {
            Some(last) if last.ctime == ev.ctime => *merged.last_mut().unwrap() = ev,
            _ => merged.push(ev),
        }
    }

    Ok(Session {
        user_id: user_id.to_string(),
        session_id: session_id.to_string(),
        events: merged,
    })
}

/// All sessions of all users, keyed by user id.
#[derive(Debug, Clone, Default)]
pub struct Dataset {
    pub users: BTreeMap<String, Vec<Session>>,
}

impl Dataset {
    pub fn total_sessions(&self) -> usize {
        self.users.values().map(|s| s.len()).sum()
    }

    pub fn total_events(&self) -> usize {
        self.users
            .values()
            .flat_map(|ss| ss.iter())
            .map(|s| s.events.len())
            .sum()
    }
}

/// Walk `<root>/<user>/<session-file>` and load every parseable session.
///
/// Users and sessions are ordered lexicographically, sessions parse in
/// parallel, and unparseable or empty sessions are dropped with a
/// warning, so two runs over the same tree produce identical datasets.
pub fn load_dataset(root: &Path) -> Result<Dataset, IngestError> {
    let entries = std::fs::read_dir(root).map_err(|e| IngestError::Io {
        path: root.to_path_buf(),
        source: e,
    })?;

    let mut user_dirs: Vec<(String, PathBuf)> = entries
        .filter_map(|e| e.ok())
        .filter(|e| e.path().is_dir())
        .map(|e| (e.file_name().to_string_lossy().into_owned(), e.path()))
        .collect();
    user_dirs.sort();
    if user_dirs.is_empty() {
        return Err(IngestError::NoUsers(root.to_path_buf()));
    }

    let mut users = BTreeMap::new();
    for (user_id, dir) in user_dirs {
        let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
            .map_err(|e| IngestError::Io {
                path: dir.clone(),
                source: e,
            })?
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| p.is_file())
            .collect();
        files.sort();

        let sessions: Vec<Session> = files
            .par_iter()
            .filter_map(|path| {
                let session_id = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default();
                let file = match File::open(path) {
                    Ok(f) => f,
                    Err(e) => {
                        log::warn!("skipping {}: {e}", path.display());
                        return None;
                    }
                };
                match load_session(BufReader::new(file), &user_id, &session_id) {
                    Ok(s) => Some(s),
                    Err(e) => {
                        log::warn!("skipping session {}: {e}", path.display());
                        None
                    }
                }
            })
            .collect();

        if sessions.is_empty() {
            log::warn!("user {user_id}: no parseable sessions");
        }
        users.insert(user_id, sessions);
    }

    Ok(Dataset { users })
}
