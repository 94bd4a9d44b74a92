//! Command implementations behind the `qdarwin` binary.

pub mod config;
pub mod selftest;

use std::path::{Path, PathBuf};

use qdarwin_core::experiments::{
    builtin_figure, emit_plot, emit_plot_with_layout, emit_table, run_sweep_with_progress, PlotLayout, SweepRecord,
    SweepSpec, FIGURE_TAGS,
};
use qdarwin_core::{Quantifier, ThresholdMode};

pub use config::{load_config, parse_config, RunConfig};
pub use selftest::{cmd_selftest, SelftestOptions, SelftestReport};

#[derive(Debug)]
pub enum CliError {
    /// Bad command line; exit 2.
    Usage(String),
    /// Bad configuration file; exit 2.
    Config(String),
    /// Failure while computing or writing; exit 1.
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Compute(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Compute(m) => write!(f, "error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    /// Worker threads; `None` uses the available parallelism.
    pub workers: Option<usize>,
    pub threshold_mode: Option<ThresholdMode>,
    pub quantifier: Option<Quantifier>,
    /// Suppress progress lines.
    pub quiet: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            out_dir: PathBuf::from("out"),
            workers: None,
            threshold_mode: None,
            quantifier: None,
            quiet: false,
        }
    }
}

/// Files written by a command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outputs {
    pub table: PathBuf,
    pub plot: PathBuf,
}

/// Runs `f` on a pool with `workers` threads (or the global pool).
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(CliError::Usage("--workers must be at least 1".into())),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| CliError::Compute(format!("cannot start worker pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn apply_overrides(spec: &mut SweepSpec, opts: &RunOptions) {
    if let Some(m) = opts.threshold_mode {
        spec.redundancy.threshold_mode = m;
    }
    if let Some(q) = opts.quantifier {
        spec.redundancy.quantifier = q;
    }
}

fn run(spec: &SweepSpec, opts: &RunOptions) -> Result<Vec<SweepRecord>, CliError> {
    let tag = spec.tag.clone();
    let quiet = opts.quiet;
    let reporter = move |done: usize, total: usize| {
        if !quiet {
            eprintln!("[{tag}] {done}/{total} points");
        }
    };
    if !opts.quiet {
        eprintln!("[{}] {} parameter points", spec.tag, spec.point_count());
    }
    with_workers(opts.workers, || run_sweep_with_progress(spec, &reporter))?
        .map_err(|e| CliError::Compute(e.to_string()))
}

fn write_outputs(
    records: &[SweepRecord],
    tag: &str,
    layout: Option<PlotLayout>,
    out_dir: &Path,
) -> Result<Outputs, CliError> {
    let table = out_dir.join(format!("{tag}.csv"));
    let plot = out_dir.join(format!("{tag}.svg"));
    let io = |e: qdarwin_core::Error| CliError::Compute(e.to_string());
    emit_table(records, &table).map_err(io)?;
    match layout {
        Some(l) => emit_plot_with_layout(records, l, &plot).map_err(io)?,
        None => emit_plot(records, tag, &plot).map_err(io)?,
    }
    Ok(Outputs { table, plot })
}

/// Reproduces a built-in figure into `<out>/<tag>.csv` and `<out>/<tag>.svg`.
pub fn cmd_figure(tag: &str, opts: &RunOptions) -> Result<Outputs, CliError> {
    let mut spec = builtin_figure(tag).map_err(|_| {
        CliError::Usage(format!(
            "unknown figure `{tag}` (expected one of {})",
            FIGURE_TAGS.join(", ")
        ))
    })?;
    apply_overrides(&mut spec, opts);
    let records = run(&spec, opts)?;
    write_outputs(&records, tag, None, &opts.out_dir)
}

/// Runs the sweep described by a TOML config file.
pub fn cmd_sweep(config: &Path, opts: &RunOptions) -> Result<Outputs, CliError> {
    let mut spec = load_config(config)?;
    apply_overrides(&mut spec, opts);
    let records = run(&spec, opts)?;
    let layout = match PlotLayout::for_figure(&spec.tag) {
        Ok(l) => l,
        Err(_) => PlotLayout::generic(&records),
    };
    write_outputs(&records, &spec.tag, Some(layout), &opts.out_dir)
}
