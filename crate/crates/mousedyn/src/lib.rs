//! Mouse-dynamics continuous authentication.
//!
//! The pipeline parses clickstream session logs, segments them into
//! mouse-move / point-click / drag-and-drop actions, extracts 39
//! kinematic features per action, trains KNN / decision-tree /
//! random-forest classifiers, and evaluates genuine-versus-impostor
//! decisions with ACC, AUC, FAR, FRR, EER, and ROC curves.
//!
//! Modules follow the pipeline stages:
//!
//! - [`ingest`]: session file parsing into per-user datasets
//! - [`segment`]: action boundary detection
//! - [`features`]: the 39-feature vector and its CSV interchange form
//! - [`learn`]: splits, scaling, and the three classifiers
//! - [`eval`]: metrics, ROC/EER, and the experiment drivers
//! - [`cli`]: the `mousedyn` command-line front end
//! - [`synth`]: synthetic session generator for demos and testing

pub mod cli;
pub mod eval;
pub mod features;
pub mod ingest;
pub mod learn;
pub mod plot;
pub mod rng;
pub mod segment;
pub mod synth;

pub use eval::{run_scenario_a, run_scenario_b, run_verification, EvalReport, ExperimentConfig};
pub use features::{extract_all, extract_features, FeatureConfig, FeatureRow};
pub use ingest::{load_dataset, load_session, Dataset};
pub use learn::{ModelConfig, ModelKind};
pub use segment::{segment_actions, Action, ActionKind, SegmentConfig};
