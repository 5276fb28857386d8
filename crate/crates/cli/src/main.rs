//! `rateratio` command-line front end.

mod args;
mod commands;
mod output;

use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, Format};
use output::Output;

/// Failure classes and their exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Exit 2: bad arguments, malformed spec files, unusable paths.
    Usage(String),
    /// Exit 3: the computation itself failed or hit a domain boundary.
    Numeric(String),
}

impl From<rateratio::Error> for CliError {
    fn from(e: rateratio::Error) -> Self {
        match e {
            rateratio::Error::Config(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

fn render(out: &Output, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(&out.json).expect("serializable") + "\n",
        Format::Csv => out.csv.clone(),
        Format::Text => out.text.clone(),
    }
}

fn write_file(path: &Path, body: &str) -> Result<(), CliError> {
    fs::write(path, body).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn emit(body: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => write_file(path, body),
        None => std::io::stdout()
            .write_all(body.as_bytes())
            .map_err(|e| CliError::Usage(format!("stdout: {e}"))),
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let out = cli.out.as_deref();
    let result = match &cli.command {
        Command::Predict(p) => commands::predict(p, cli.seed)?,
        Command::Infer(a) => commands::infer(a)?,
        Command::Ratio(a) => commands::ratio(a)?,
        Command::Combine(a) => commands::combine(a)?,
        Command::Mc(m) => commands::mc(m, cli.seed)?,
        Command::Mcmc(a) => {
            let art = commands::mcmc(a, cli.seed)?;
            return match out {
                Some(dir) => {
                    fs::create_dir_all(dir)
                        .map_err(|e| CliError::Usage(format!("{}: {e}", dir.display())))?;
                    write_file(&dir.join("chain.csv"), &art.chain_csv)?;
                    write_file(&dir.join("summary.txt"), &art.summary_text)?;
                    write_file(&dir.join("summary.json"), &art.summary_json)
                }
                None => emit(&render(&art.output, cli.format), None),
            };
        }
    };
    emit(&render(&result, cli.format), out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Numeric(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
