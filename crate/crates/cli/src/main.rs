use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};

use sakubun::engine::build_cache;
use sakubun::{analyze, score, service, stats, CliError, Config, Engine, PartialConfig};

#[derive(Parser)]
#[command(name = "sakubun", version, about = "Japanese composition analysis and scoring")]
struct Cli {
    /// JSON config file; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(flatten)]
    overrides: PartialConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Features, grammar report and matches of one document as JSON.
    Analyze { file: PathBuf },
    /// Score every .txt/.tsv document in a directory.
    Score { dir: PathBuf },
    /// Corpus statistics from a report and its feature matrix.
    Stats { report: PathBuf, matrix: PathBuf },
    /// Run the HTTP service.
    Serve,
    /// Compile a pattern directory into a registry cache.
    Cache { patterns_dir: PathBuf, cache_file: PathBuf },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = Config::load(cli.config.as_deref(), cli.overrides)?;
    match cli.command {
        Command::Analyze { file } => {
            let engine = Engine::load(&cfg)?;
            print!("{}", analyze::cmd_analyze(&engine, &file)?);
        }
        Command::Score { dir } => {
            let engine = Engine::load(&cfg)?;
            let out = score::score_dir(&engine, &cfg, &dir)?;
            for p in score::write_outputs(&cfg.out, &out)? {
                eprintln!("wrote {}", p.display());
            }
        }
        Command::Stats { report, matrix } => print!("{}", stats::cmd_stats(&report, &matrix)?),
        Command::Serve => {
            let engine = Arc::new(Engine::load(&cfg)?);
            let rt = tokio::runtime::Runtime::new().map_err(|e| CliError::io("tokio runtime", e))?;
            rt.block_on(service::serve(engine, cfg.port, &cfg.cors_origin))
                .map_err(|e| CliError::io(format!("port {}", cfg.port), e))?;
        }
        Command::Cache { patterns_dir, cache_file } => {
            let r = build_cache(&patterns_dir, &cache_file, &cfg)?;
            eprintln!("cached {} patterns in {}", r.len(), cache_file.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_writer(std::io::stderr)
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| tracing_subscriber::EnvFilter::new("info")),
        )
        .init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.kind());
            ExitCode::FAILURE
        }
    }
}
