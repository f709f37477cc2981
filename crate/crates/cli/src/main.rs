use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use auxsync_cli::husimi::{husimi_table, normalization_comment, run_husimi};
use auxsync_cli::state::{run_evolve, run_steady};
use auxsync_cli::sweep::run_sweep;
use auxsync_cli::{CliError, CliResult, RunConfig};
use auxsync_validation::run_acceptance;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "auxsync",
    version,
    about = "Spin-1 phase synchronization via lossy auxiliary states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration (MHz, rad, µs).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; stdout if omitted (or the config's `output`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override a config value, e.g. `--set drive.delta_b=0.2`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// α, Δ_B or β sweep to CSV.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Husimi-Q grid of the steady state to CSV.
    Husimi {
        #[command(flatten)]
        common: Common,
    },
    /// Steady state summary as JSON.
    Steady {
        #[command(flatten)]
        common: Common,
    },
    /// Populations and S_q over time to CSV.
    Evolve {
        #[command(flatten)]
        common: Common,
    },
    /// Run every acceptance criterion; exit 1 if any fails.
    Acceptance {
        #[command(flatten)]
        common: Common,
    },
}

fn open_output(common: &Common, cfg: &RunConfig) -> CliResult<Box<dyn Write>> {
    match common.out.as_ref().or(cfg.output.as_ref()) {
        Some(p) => {
            let f = File::create(p).map_err(|source| CliError::Io {
                path: p.clone(),
                source,
            })?;
            Ok(Box::new(BufWriter::new(f)))
        }
        None => Ok(Box::new(std::io::stdout().lock())),
    }
}

fn write_all(w: &mut dyn Write, text: &str, path: Option<&Path>) -> CliResult<()> {
    w.write_all(text.as_bytes())
        .and_then(|_| w.flush())
        .map_err(|source| CliError::Io {
            path: path.map_or_else(|| PathBuf::from("<stdout>"), Path::to_path_buf),
            source,
        })
}

fn run(cli: Cli) -> CliResult<bool> {
    match cli.command {
        Command::Sweep { common, jobs } => {
            let cfg = RunConfig::load(common.config.as_deref(), &common.sets)?;
            let out = run_sweep(&cfg, jobs)?;
            for i in &out.non_unique {
                eprintln!("row {i}: unique=false, S_q fields left empty");
            }
            let mut w = open_output(&common, &cfg)?;
            out.table.write_csv(&mut w, &[])?;
            Ok(true)
        }
        Command::Husimi { common } => {
            let cfg = RunConfig::load(common.config.as_deref(), &common.sets)?;
            let field = run_husimi(&cfg)?;
            let mut w = open_output(&common, &cfg)?;
            husimi_table(&field).write_csv(&mut w, &[normalization_comment(&field)])?;
            Ok(true)
        }
        Command::Steady { common } => {
            let cfg = RunConfig::load(common.config.as_deref(), &common.sets)?;
            let report = run_steady(&cfg)?;
            let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
            let mut w = open_output(&common, &cfg)?;
            write_all(&mut w, &text, common.out.as_deref())?;
            Ok(true)
        }
        Command::Evolve { common } => {
            let cfg = RunConfig::load(common.config.as_deref(), &common.sets)?;
            let table = run_evolve(&cfg)?;
            let mut w = open_output(&common, &cfg)?;
            table.write_csv(&mut w, &[])?;
            Ok(true)
        }
        Command::Acceptance { common } => {
            let cfg = RunConfig::load(common.config.as_deref(), &common.sets)?;
            let reports = run_acceptance(&cfg.constants()?);
            let mut text = String::new();
            for r in &reports {
                text.push_str(&r.line());
                text.push('\n');
            }
            let failed = reports.iter().filter(|r| !r.passed()).count();
            text.push_str(&format!(
                "{} of {} criteria passed\n",
                reports.len() - failed,
                reports.len()
            ));
            print!("{text}");
            if let Some(p) = common.out.as_ref().or(cfg.output.as_ref()) {
                std::fs::write(p, &text).map_err(|source| CliError::Io {
                    path: p.clone(),
                    source,
                })?;
            }
            Ok(failed == 0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
