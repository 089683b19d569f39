use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use squeezetrap::cli::{self, Command, EXIT_FAILURE};
use squeezetrap::config::load_config;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Verify,
    Simulate,
    Equilibria,
    Spectrum,
    Stability,
}

/// Squeezed-state dynamics, equilibria and Floquet spectra of trapped ions.
#[derive(Debug, Parser)]
#[command(version)]
struct Args {
    #[arg(value_enum)]
    command: Cmd,
    /// JSON run configuration (optional for `verify`).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads; SQUEEZETRAP_THREADS takes precedence.
    #[arg(long)]
    threads: Option<usize>,
    /// Only run verification groups whose name contains NAME.
    #[arg(long, value_name = "NAME")]
    filter: Option<String>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let threads = std::env::var("SQUEEZETRAP_THREADS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .or(args.threads);
    if let Some(n) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot size the worker pool: {e}");
            return ExitCode::from(EXIT_FAILURE as u8);
        }
    }
    let config = match args.config.as_deref().map(load_config).transpose() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_FAILURE as u8);
        }
    };
    let cmd = match args.command {
        Cmd::Verify => Command::Verify,
        Cmd::Simulate => Command::Simulate,
        Cmd::Equilibria => Command::Equilibria,
        Cmd::Spectrum => Command::Spectrum,
        Cmd::Stability => Command::Stability,
    };
    let code = cli::execute(
        cmd,
        config.as_ref(),
        args.filter.as_deref(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    ExitCode::from(code as u8)
}
