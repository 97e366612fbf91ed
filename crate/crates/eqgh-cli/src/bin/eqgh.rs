//! Scenario runner: convergent sequences with their convergence reports.

use anyhow::Result;
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use eqgh_cli::{read_text, write_text};
use eqgh_core::scenario::{run_sequence, Scenario};

#[derive(Parser)]
#[command(name = "eqgh", about = "equivariant convergence scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    #[command(subcommand)]
    Scenario(ScenarioCommand),
}

#[derive(Subcommand)]
enum ScenarioCommand {
    /// Run a scenario end to end and emit its report.
    Run {
        /// "circle", "torus", or a path to a scenario JSON file.
        which: String,
        /// Number of steps (defaults to the scenario's own count).
        #[arg(long)]
        steps: Option<usize>,
        /// CSV report destination (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Directory for the JSON sidecar with certificates.
        #[arg(long)]
        certs: Option<PathBuf>,
    },
}

fn run() -> Result<bool> {
    let cli = Cli::parse();
    match cli.command {
        Command::Scenario(ScenarioCommand::Run {
            which,
            steps,
            out,
            certs,
        }) => {
            let mut scenario = match which.as_str() {
                "circle" => Scenario::circle(24),
                "torus" => Scenario::collapsing_torus(6, 5, 5),
                path => serde_json::from_str(&read_text(&PathBuf::from(path))?)?,
            };
            if let Some(steps) = steps {
                scenario.steps = steps;
            }
            let report = run_sequence(&scenario);
            let csv = report.to_csv();
            match out {
                Some(path) => write_text(&path, &csv)?,
                None => print!("{csv}"),
            }
            if let Some(dir) = certs {
                std::fs::create_dir_all(&dir)?;
                let sidecar = dir.join(format!("{}.json", report.scenario));
                write_text(&sidecar, &serde_json::to_string_pretty(&report)?)?;
            }
            Ok(report.all_steps_clean())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
