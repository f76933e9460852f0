//! The `mousedyn` command-line front end.
//!
//! Three subcommands wire the pipeline together: `extract` turns a
//! session tree into the feature CSV, `experiment` runs the
//! verification or authentication protocols and writes report files,
//! and `roc` renders report ROC arrays as SVG.
//!
//! Knob precedence: built-in defaults, then `MOUSEDYN_SEED`, then the
//! `--config` file, then flags. Exit codes: 0 success, 1 usage error,
//! 2 data error, 3 I/O error.

use std::collections::BTreeMap;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use thiserror::Error;

use crate::eval::{
    run_scenario_a, run_scenario_b, run_verification, EvalError, EvalReport, ExperimentConfig,
};
use crate::features::{
    extract_all, read_feature_csv, write_feature_csv, FeatureConfig, FeatureCsvError, FeatureRow,
};
use crate::ingest::{load_dataset, IngestError};
use crate::learn::{FeatureSubsample, ForestConfig, ModelConfig, ModelKind, TreeConfig};
use crate::plot::{roc_svg_overlay, roc_svg_single};
use crate::segment::{ActionKind, SegmentConfig};

pub const SEED_ENV_VAR: &str = "MOUSEDYN_SEED";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<IngestError> for CliError {
    fn from(e: IngestError) -> Self {
        match e {
            IngestError::Io { .. } => CliError::Io(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<FeatureCsvError> for CliError {
    fn from(e: FeatureCsvError) -> Self {
        match e {
            FeatureCsvError::Io(_) => CliError::Io(e.to_string()),
            FeatureCsvError::Schema { .. } => CliError::Data(e.to_string()),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        CliError::Data(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "mousedyn",
    version,
    about = "Mouse dynamics continuous authentication pipeline"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a session tree and write the per-action feature table
    Extract(ExtractArgs),
    /// Run verification or authentication experiments and write reports
    Experiment(ExperimentArgs),
    /// Render ROC curves from a report file as SVG
    Roc(RocArgs),
}

/// Pipeline knobs shared by every subcommand.
#[derive(Debug, Args, Clone)]
pub struct CommonOpts {
    /// Master seed for splits and sampling [default: 42, or MOUSEDYN_SEED]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Training fraction of each class [default: 0.7]
    #[arg(long)]
    pub split_ratio: Option<f64>,
    /// Pause (seconds) that ends an action [default: 10]
    #[arg(long)]
    pub gap_threshold: Option<f64>,
    /// Minimum samples per retained action [default: 4]
    #[arg(long)]
    pub min_points: Option<usize>,
    /// Curvature floor for critical points (rad/pixel) [default: 0.5]
    #[arg(long)]
    pub curvature_threshold: Option<f64>,
    /// Neighbor count for KNN [default: 5]
    #[arg(long)]
    pub k: Option<usize>,
    /// Tree count for the random forest [default: 100]
    #[arg(long)]
    pub n_trees: Option<usize>,
    /// Maximum tree depth [default: unlimited]
    #[arg(long)]
    pub max_depth: Option<usize>,
    /// Minimum samples on each side of a split [default: 1]
    #[arg(long)]
    pub min_leaf: Option<usize>,
    /// Impostor sample size as a multiple of the genuine count [default: 1.0]
    #[arg(long)]
    pub impostor_ratio: Option<f64>,
    /// Config file with key=value lines; flags win over file entries
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    /// Dataset root: one directory per user containing session files
    #[arg(long)]
    pub input: PathBuf,
    /// Output feature CSV path
    #[arg(long)]
    pub output: PathBuf,
    #[command(flatten)]
    pub common: CommonOpts,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// Experiment protocol: verify, a, or b
    #[arg(long)]
    pub scenario: String,
    /// Action kind for scenario b: mm, pc, dd, or all [default: all]
    #[arg(long)]
    pub action: Option<String>,
    /// Classifier: dt, knn, rf, or all
    #[arg(long)]
    pub model: String,
    /// Feature CSV produced by `extract`
    #[arg(long)]
    pub features: Option<PathBuf>,
    /// Dataset root (extracted on the fly when no --features given)
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Directory for report JSON/CSV and per-user ROC CSV files [default: reports]
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonOpts,
}

#[derive(Debug, Args)]
pub struct RocArgs {
    /// Report JSON produced by `experiment`
    #[arg(long)]
    pub report: PathBuf,
    /// Output SVG file (overlay mode) or directory (split mode)
    #[arg(long)]
    pub out: PathBuf,
    /// One SVG per user instead of a single overlay chart
    #[arg(long)]
    pub split: bool,
    #[command(flatten)]
    pub common: CommonOpts,
}

/// Fully resolved knob values.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub seed: u64,
    pub split_ratio: f64,
    pub gap_threshold: f64,
    pub min_points: usize,
    pub curvature_threshold: f64,
    pub k: usize,
    pub n_trees: usize,
    pub max_depth: Option<usize>,
    pub min_leaf: usize,
    pub impostor_ratio: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            split_ratio: 0.7,
            gap_threshold: 10.0,
            min_points: 4,
            curvature_threshold: 0.5,
            k: 5,
            n_trees: 100,
            max_depth: None,
            min_leaf: 1,
            impostor_ratio: 1.0,
        }
    }
}

impl RunConfig {
    /// defaults -> MOUSEDYN_SEED -> config file -> flags, then range
    /// validation.
    pub fn resolve(opts: &CommonOpts) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::default();

        if let Ok(raw) = std::env::var(SEED_ENV_VAR) {
            cfg.seed = raw
                .parse()
                .map_err(|_| CliError::Usage(format!("bad {SEED_ENV_VAR} value {raw:?}")))?;
        }

        if let Some(path) = &opts.config {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
            cfg.apply_file(&text)?;
        }

        let o = opts;
        if let Some(v) = o.seed {
            cfg.seed = v;
        }
        if let Some(v) = o.split_ratio {
            cfg.split_ratio = v;
        }
        if let Some(v) = o.gap_threshold {
            cfg.gap_threshold = v;
        }
        if let Some(v) = o.min_points {
            cfg.min_points = v;
        }
        if let Some(v) = o.curvature_threshold {
            cfg.curvature_threshold = v;
        }
        if let Some(v) = o.k {
            cfg.k = v;
        }
        if let Some(v) = o.n_trees {
            cfg.n_trees = v;
        }
        if let Some(v) = o.max_depth {
            cfg.max_depth = Some(v);
        }
        if let Some(v) = o.min_leaf {
            cfg.min_leaf = v;
        }
        if let Some(v) = o.impostor_ratio {
            cfg.impostor_ratio = v;
        }

        cfg.validate()?;
        Ok(cfg)
    }

    fn apply_file(&mut self, text: &str) -> Result<(), CliError> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("config line {}: expected key=value", lineno + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |what: &str| {
                Err(CliError::Usage(format!(
                    "config line {}: bad {what} value {value:?}",
                    lineno + 1
                )))
            };
            match key {
                "seed" => match value.parse() {
                    Ok(v) => self.seed = v,
                    Err(_) => return bad("seed"),
                },
                "split-ratio" => match value.parse() {
                    Ok(v) => self.split_ratio = v,
                    Err(_) => return bad("split-ratio"),
                },
                "gap-threshold" => match value.parse() {
                    Ok(v) => self.gap_threshold = v,
                    Err(_) => return bad("gap-threshold"),
                },
                "min-points" => match value.parse() {
                    Ok(v) => self.min_points = v,
                    Err(_) => return bad("min-points"),
                },
                "curvature-threshold" => match value.parse() {
                    Ok(v) => self.curvature_threshold = v,
                    Err(_) => return bad("curvature-threshold"),
                },
                "k" => match value.parse() {
                    Ok(v) => self.k = v,
                    Err(_) => return bad("k"),
                },
                "n-trees" => match value.parse() {
                    Ok(v) => self.n_trees = v,
                    Err(_) => return bad("n-trees"),
                },
                "max-depth" => {
                    if value.eq_ignore_ascii_case("none") {
                        self.max_depth = None;
                    } else {
                        match value.parse() {
                            Ok(v) => self.max_depth = Some(v),
                            Err(_) => return bad("max-depth"),
                        }
                    }
                }
                "min-leaf" => match value.parse() {
                    Ok(v) => self.min_leaf = v,
                    Err(_) => return bad("min-leaf"),
                },
                "impostor-ratio" => match value.parse() {
                    Ok(v) => self.impostor_ratio = v,
                    Err(_) => return bad("impostor-ratio"),
                },
                other => {
                    return Err(CliError::Usage(format!(
                        "config line {}: unknown key {other:?}",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), CliError> {
        let usage = |msg: String| Err(CliError::Usage(msg));
        if self.split_ratio.is_nan() || self.split_ratio <= 0.0 || self.split_ratio >= 1.0 {
            return usage(format!(
                "split-ratio must be in (0, 1), got {}",
                self.split_ratio
            ));
        }
        if self.gap_threshold.is_nan() || self.gap_threshold <= 0.0 {
            return usage(format!(
                "gap-threshold must be > 0, got {}",
                self.gap_threshold
            ));
        }
        if self.min_points < 4 {
            return usage(format!("min-points must be >= 4, got {}", self.min_points));
        }
        if self.curvature_threshold.is_nan() || self.curvature_threshold < 0.0 {
            return usage(format!(
                "curvature-threshold must be >= 0, got {}",
                self.curvature_threshold
            ));
        }
        if self.k < 1 {
            return usage("k must be >= 1".into());
        }
        if self.n_trees < 1 {
            return usage("n-trees must be >= 1".into());
        }
        if self.min_leaf < 1 {
            return usage("min-leaf must be >= 1".into());
        }
        if self.impostor_ratio.is_nan() || self.impostor_ratio <= 0.0 {
            return usage(format!(
                "impostor-ratio must be > 0, got {}",
                self.impostor_ratio
            ));
        }
        Ok(())
    }

    pub fn segment_config(&self) -> SegmentConfig {
        SegmentConfig {
            gap_threshold: self.gap_threshold,
            min_points: self.min_points,
        }
    }

    pub fn feature_config(&self) -> FeatureConfig {
        FeatureConfig {
            curvature_threshold: self.curvature_threshold,
        }
    }

    pub fn experiment_config(&self) -> ExperimentConfig {
        ExperimentConfig {
            split_ratio: self.split_ratio,
            impostor_ratio: self.impostor_ratio,
            threshold: 0.5,
            model: ModelConfig {
                k: self.k,
                tree: TreeConfig {
                    max_depth: self.max_depth,
                    min_leaf: self.min_leaf,
                },
                forest: ForestConfig {
                    n_trees: self.n_trees,
                    bootstrap: true,
                    subsample: FeatureSubsample::Sqrt,
                    tree: TreeConfig {
                        max_depth: self.max_depth,
                        min_leaf: self.min_leaf,
                    },
                },
            },
        }
    }
}

/// Parse arguments and run; returns the process exit code.
pub fn main_impl<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let matches = match Cli::command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return 1;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Extract(args) => cmd_extract(args),
        Command::Experiment(args) => cmd_experiment(args),
        Command::Roc(args) => cmd_roc(args),
    }
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn cmd_extract(args: ExtractArgs) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(&args.common)?;
    let dataset = load_dataset(&args.input)?;
    let rows = extract_all(&dataset, &cfg.segment_config(), &cfg.feature_config());

    let mut by_user: BTreeMap<&str, [usize; 3]> = BTreeMap::new();
    for row in &rows {
        let slot = match row.kind {
            ActionKind::MM => 0,
            ActionKind::PC => 1,
            ActionKind::DD => 2,
        };
        by_user.entry(row.user_id.as_str()).or_default()[slot] += 1;
    }
    println!(
        "{:<16} {:>6} {:>6} {:>6} {:>7}",
        "user", "MM", "PC", "DD", "total"
    );
    for (user, c) in &by_user {
        println!(
            "{user:<16} {:>6} {:>6} {:>6} {:>7}",
            c[0],
            c[1],
            c[2],
            c[0] + c[1] + c[2]
        );
    }

    let mut buf = Vec::new();
    write_feature_csv(&rows, &mut buf)?;
    fs::write(&args.output, buf)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", args.output.display())))?;
    println!(
        "wrote {} feature rows to {}",
        rows.len(),
        args.output.display()
    );
    Ok(())
}

fn load_rows(
    features: Option<&Path>,
    input: Option<&Path>,
    cfg: &RunConfig,
) -> Result<Vec<FeatureRow>, CliError> {
    match (features, input) {
        (Some(path), _) => {
            let file = fs::File::open(path)
                .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
            Ok(read_feature_csv(BufReader::new(file))?)
        }
        (None, Some(root)) => {
            let dataset = load_dataset(root)?;
            Ok(extract_all(
                &dataset,
                &cfg.segment_config(),
                &cfg.feature_config(),
            ))
        }
        (None, None) => Err(CliError::Usage(
            "experiment needs --features <csv> or --input <dataset dir>".into(),
        )),
    }
}

fn parse_models(spec: &str) -> Result<Vec<ModelKind>, CliError> {
    if spec.eq_ignore_ascii_case("all") {
        return Ok(ModelKind::ALL.to_vec());
    }
    ModelKind::parse(spec)
        .map(|m| vec![m])
        .ok_or_else(|| CliError::Usage(format!("unknown model {spec:?} (dt, knn, rf, or all)")))
}

fn parse_actions(spec: Option<&str>) -> Result<Option<Vec<ActionKind>>, CliError> {
    match spec {
        None => Ok(None),
        Some(s) if s.eq_ignore_ascii_case("all") => Ok(Some(ActionKind::ALL.to_vec())),
        Some(s) => ActionKind::parse(s)
            .map(|k| Some(vec![k]))
            .ok_or_else(|| CliError::Usage(format!("unknown action {s:?} (mm, pc, dd, or all)"))),
    }
}

fn report_stem(report: &EvalReport) -> String {
    match report.scenario.as_str() {
        "b" => format!("report_b_{}_{}", report.model, report.action),
        s => format!("report_{s}_{}", report.model),
    }
}

fn emit_report(report: &EvalReport, out_dir: &Path) -> Result<(), CliError> {
    let stem = report_stem(report);
    write_text(&out_dir.join(format!("{stem}.json")), &report.to_json())?;
    write_text(&out_dir.join(format!("{stem}.csv")), &report.summary_csv())?;
    for row in &report.rows {
        if row.roc.is_some() {
            let csv = report.roc_csv(&row.user_id).unwrap();
            let name = format!(
                "{}_{}.csv",
                stem.replacen("report_", "roc_", 1),
                row.user_id
            );
            write_text(&out_dir.join(name), &csv)?;
        }
    }
    print!("{}", report.format_table());
    println!("wrote {stem}.json / {stem}.csv to {}\n", out_dir.display());
    Ok(())
}

fn cmd_experiment(args: ExperimentArgs) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(&args.common)?;
    let rows = load_rows(args.features.as_deref(), args.input.as_deref(), &cfg)?;
    if rows.is_empty() {
        return Err(CliError::Data("feature table is empty".into()));
    }

    let models = parse_models(&args.model)?;
    let actions = parse_actions(args.action.as_deref())?;
    let out_dir = args.out_dir.unwrap_or_else(|| PathBuf::from("reports"));
    fs::create_dir_all(&out_dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", out_dir.display())))?;

    // scenarios verify and a always use every action kind
    let reject_action_selector = |name: &str| -> Result<(), CliError> {
        match args.action.as_deref() {
            Some(a) if !a.eq_ignore_ascii_case("all") => Err(CliError::Usage(format!(
                "{name} always uses all actions; drop --action"
            ))),
            _ => Ok(()),
        }
    };

    let scenario = args.scenario.to_ascii_lowercase();
    let exp_cfg = cfg.experiment_config();
    match scenario.as_str() {
        "verify" | "verification" => {
            reject_action_selector("the verification stage")?;
            for model in models {
                let report = run_verification(&rows, model, &exp_cfg, cfg.seed);
                emit_report(&report, &out_dir)?;
            }
        }
        "a" => {
            reject_action_selector("scenario a")?;
            for model in models {
                let report = run_scenario_a(&rows, model, &exp_cfg, cfg.seed)?;
                emit_report(&report, &out_dir)?;
            }
        }
        "b" => {
            let kinds = actions.unwrap_or_else(|| ActionKind::ALL.to_vec());
            for model in &models {
                for kind in &kinds {
                    let report = run_scenario_b(&rows, *kind, *model, &exp_cfg, cfg.seed)?;
                    emit_report(&report, &out_dir)?;
                }
            }
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown scenario {other:?} (verify, a, or b)"
            )))
        }
    }
    Ok(())
}

fn cmd_roc(args: RocArgs) -> Result<(), CliError> {
    let _ = RunConfig::resolve(&args.common)?;
    let text = fs::read_to_string(&args.report)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", args.report.display())))?;
    let report = EvalReport::from_json(&text)
        .map_err(|e| CliError::Data(format!("malformed report {}: {e}", args.report.display())))?;

    let title = format!(
        "ROC — scenario {} / {} / {}",
        report.scenario, report.model, report.action
    );

    if args.split {
        fs::create_dir_all(&args.out)
            .map_err(|e| CliError::Io(format!("cannot create {}: {e}", args.out.display())))?;
        let mut written = 0usize;
        for row in &report.rows {
            if let Some(svg) = roc_svg_single(row, &format!("{title} — {}", row.user_id)) {
                let path = args.out.join(format!(
                    "roc_{}_{}_{}_{}.svg",
                    report.scenario, report.model, report.action, row.user_id
                ));
                write_text(&path, &svg)?;
                written += 1;
            }
        }
        if written == 0 {
            return Err(CliError::Data("report contains no ROC data".into()));
        }
        println!("wrote {written} SVG files to {}", args.out.display());
    } else {
        let svg = roc_svg_overlay(&report, &title)
            .ok_or_else(|| CliError::Data("report contains no ROC data".into()))?;
        let path = if args.out.is_dir() {
            args.out.join(format!(
                "roc_{}_{}_{}.svg",
                report.scenario, report.model, report.action
            ))
        } else {
            args.out.clone()
        };
        write_text(&path, &svg)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
