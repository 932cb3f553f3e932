use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use fcf_cli::query::{execute, QueryCmd};
use fcf_cli::{load_model, CliError};

/// Queries over potentials and Markov trees on families of compatible
/// frames.
#[derive(Parser)]
#[command(name = "fcf", version)]
struct Cli {
    /// JSON model file
    #[arg(long, short)]
    model: PathBuf,
    #[command(subcommand)]
    query: QueryCmd,
}

fn run(cli: &Cli) -> Result<String, CliError> {
    let model = load_model(&cli.model)?;
    let mut out = Vec::new();
    execute(&model, &cli.query, &mut out)?;
    Ok(out.join("\n"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            println!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
