use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use paramp_cli::commands::{
    cmd_find_threshold, cmd_threshold, emit, resolve_sweep, run_simulation, sweep_rows,
    write_sweep_csv, write_trace_csv, SweepOverrides, SLOW_SEARCH_Q,
};
use paramp_cli::{CliError, CliResult, DesignConfig};

#[derive(Debug, Parser)]
#[command(name = "paramp", version, about = "Parametric pellicle-oscillator threshold calculator")]
struct Cli {
    /// Cap on worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analytic threshold report as JSON.
    Threshold {
        #[arg(long)]
        config: PathBuf,
        /// Write the JSON here instead of stdout.
        #[arg(long)]
        json_out: Option<PathBuf>,
    },
    /// Time-domain run, CSV trace.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bisect the drive velocity for zero growth and compare with the
    /// analytic threshold.
    FindThreshold {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        tol: f64,
    },
    /// Threshold report over a grid of one parameter, CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// One of Q, Q_s, Q_p, mass_kg, gap_m, area_m2, E_dc.
        #[arg(long)]
        axis: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        min: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        max: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        /// Logarithmic spacing.
        #[arg(long)]
        log: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn print_json(value: &serde_json::Value, path: Option<&Path>) -> CliResult<()> {
    emit(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        writeln!(w)
    })
}

fn warn_all(design: &DesignConfig) {
    for w in &design.warnings {
        eprintln!("warning: {w}");
    }
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Io(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Threshold { config, json_out } => {
            let design = DesignConfig::load(&config)?;
            warn_all(&design);
            print_json(&cmd_threshold(&design)?, json_out.as_deref())
        }
        Command::Simulate { config, out } => {
            let design = DesignConfig::load(&config)?;
            warn_all(&design);
            let trace = run_simulation(&design)?;
            for w in &trace.meta.warnings {
                eprintln!("warning: {w}");
            }
            emit(out.as_deref(), |w| write_trace_csv(&trace, w))
        }
        Command::FindThreshold { config, tol } => {
            let design = DesignConfig::load(&config)?;
            if design.cavity.quality() > SLOW_SEARCH_Q {
                eprintln!(
                    "warning: Q = {:e} > {SLOW_SEARCH_Q:e}; each probe must run many ring-down times, expect a long search",
                    design.cavity.quality()
                );
            }
            let out = cmd_find_threshold(&design, tol)?;
            print_json(&out.to_json(), None)
        }
        Command::Sweep {
            config,
            axis,
            min,
            max,
            points,
            log,
            out,
        } => {
            let design = DesignConfig::load(&config)?;
            let spec = resolve_sweep(
                &design,
                &SweepOverrides {
                    axis,
                    min,
                    max,
                    points,
                    log,
                },
            )?;
            let rows = sweep_rows(&design, &spec)?;
            emit(out.as_deref(), |w| write_sweep_csv(spec.axis, &rows, w))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("paramp: error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
