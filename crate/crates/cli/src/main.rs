use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qdarwin_cli::{cmd_figure, cmd_selftest, cmd_sweep, with_workers, CliError, RunOptions, SelftestOptions};
use qdarwin_core::{Quantifier, ThresholdMode};

#[derive(Parser)]
#[command(name = "qdarwin", version, about = "Redundancy and pointer states in a non-commuting spin-star model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output directory for tables and plots.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Redundancy threshold reading: literal (I >= (1-delta)S) or strict (I >= delta S).
    #[arg(long, global = true)]
    threshold_mode: Option<ThresholdMode>,
    /// Information quantifier for redundancy: holevo or two-sided.
    #[arg(long, global = true)]
    quantifier: Option<Quantifier>,
    /// No progress lines on stderr.
    #[arg(long, short, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Reproduce a built-in figure: fig1 .. fig5.
    Figure { tag: String },
    /// Run a sweep described by a TOML config file.
    Sweep { config: PathBuf },
    /// Run the verification suite.
    Selftest {
        /// Seed for random probe states.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, hide = true, default_value_t = 2.0)]
        entropy_base: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = RunOptions {
        out_dir: cli.out,
        workers: cli.workers,
        threshold_mode: cli.threshold_mode,
        quantifier: cli.quantifier,
        quiet: cli.quiet,
    };
    let result = match cli.command {
        Command::Figure { tag } => cmd_figure(&tag, &opts).map(|o| {
            println!("{}\n{}", o.table.display(), o.plot.display());
        }),
        Command::Sweep { config } => cmd_sweep(&config, &opts).map(|o| {
            println!("{}\n{}", o.table.display(), o.plot.display());
        }),
        Command::Selftest { seed, entropy_base } => {
            let st = SelftestOptions { seed, entropy_base };
            match with_workers(opts.workers, || cmd_selftest(&st)) {
                Ok(report) => {
                    print!("{}", report.render());
                    if report.passed() {
                        Ok(())
                    } else {
                        Err(CliError::Compute(format!("self-test failed: {}", report.failures().join(", "))))
                    }
                }
                Err(e) => Err(e),
            }
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            if matches!(e, CliError::Usage(_)) {
                eprintln!("usage: qdarwin <figure <tag>|sweep <config>|selftest> [--out <dir>] [--workers <k>]");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
