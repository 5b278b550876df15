//! `trimspec` command-line front end.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::Command;
use error::CliError;

#[derive(Parser)]
#[command(name = "trimspec", version, about = "Extreme eigenvalues of trimmed B-spline discretizations")]
struct Cli {
    /// TOML file with `key = value` settings; command-line settings win.
    #[arg(long, short, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// One trimming parameter: `geometry=ID delta=X [p k N gamma q q_tri out vectors matrices]`.
    Run {
        #[arg(value_name = "KEY=VALUE")]
        settings: Vec<String>,
    },
    /// A δ-sweep with slope fits: `geometry=ID [p k N gamma deltas q q_tri out]`.
    Sweep {
        #[arg(value_name = "KEY=VALUE")]
        settings: Vec<String>,
    },
    /// The acceptance suite: `[criteria=1,2,... out verbose]`.
    Accept {
        #[arg(value_name = "KEY=VALUE")]
        settings: Vec<String>,
    },
    /// Shipped geometries and their parameter domains.
    ListGeometries,
}

fn execute(cli: Cli) -> Result<(String, u8), CliError> {
    let (command, settings) = match cli.command {
        Cmd::Run { settings } => (Command::Run, settings),
        Cmd::Sweep { settings } => (Command::Sweep, settings),
        Cmd::Accept { settings } => (Command::Accept, settings),
        Cmd::ListGeometries => (Command::ListGeometries, Vec::new()),
    };
    let map = config::collect(command, cli.config.as_deref(), &settings)?;
    let cfg = config::build(command, &map)?;
    match command {
        Command::Run => commands::run(&cfg),
        Command::Sweep => commands::sweep(&cfg),
        Command::Accept => commands::accept(&cfg),
        Command::ListGeometries => Ok((commands::list_geometries(), 0)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok((text, status)) => {
            print!("{text}");
            ExitCode::from(status)
        }
        Err(e) => {
            eprintln!("trimspec: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
