use std::path::PathBuf;

use clap::{Parser, Subcommand};
use wip_dynamics::cli;
use wip_dynamics::ModelKind;

#[derive(Parser)]
#[command(name = "wip", version, about = "Wheeled inverted pendulum simulator")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one model and write the trajectory as CSV.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `sim.model` from the config.
        #[arg(long, value_enum)]
        model: Option<ModelKind>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        quiet: bool,
    },
    /// Run all three models and report per-variable errors.
    Compare {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        quiet: bool,
    },
    /// Run the structural check suite.
    Check {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        quiet: bool,
    },
}

fn main() {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            std::process::exit(if e.use_stderr() { cli::EXIT_CONFIG } else { cli::EXIT_OK });
        }
    };
    let (mut out, mut err) = (std::io::stdout().lock(), std::io::stderr().lock());
    let code = match args.command {
        Command::Simulate { config, model, out: path, quiet } => {
            cli::cmd_simulate(&config, model, path.as_deref(), quiet, &mut out, &mut err)
        }
        Command::Compare { config, out: path, quiet } => {
            cli::cmd_compare(&config, path.as_deref(), quiet, &mut out, &mut err)
        }
        Command::Check { config, out: path, quiet } => {
            cli::cmd_check(&config, path.as_deref(), quiet, &mut out, &mut err)
        }
    };
    drop(out);
    std::process::exit(code);
}
