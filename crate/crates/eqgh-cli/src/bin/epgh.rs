//! Equivariant pointed Gromov-Hausdorff distance between two actions.

use anyhow::Result;
use clap::{Parser, Subcommand};
use std::path::PathBuf;

use eqgh_cli::{load_action, write_text};
use eqgh_core::epgh::{epgh_distance_bounded, SearchBounds};

#[derive(Parser)]
#[command(name = "epgh", about = "equivariant pointed GH distance estimates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Smallest grid epsilon admitting approximations in both directions.
    Dist {
        a: PathBuf,
        b: PathBuf,
        /// Override the instance-size guard (points and group order).
        #[arg(long)]
        max_size: Option<usize>,
        /// Write the witness triples and per-condition reports as JSON.
        #[arg(long)]
        emit_certificate: Option<PathBuf>,
    },
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Dist {
            a,
            b,
            max_size,
            emit_certificate,
        } => {
            let action_a = load_action(&a)?;
            let action_b = load_action(&b)?;
            let mut bounds = SearchBounds::from_env();
            if let Some(size) = max_size {
                bounds.max_points = size;
                bounds.max_group = size;
            }
            let result = epgh_distance_bounded(&action_a, &action_b, &bounds)?;
            println!("{}", result.epsilon);
            if let Some(path) = emit_certificate {
                let forward_report = eqgh_core::epgh::verify_approximation(
                    &action_a,
                    &action_b,
                    &result.forward,
                )?;
                let backward_report = eqgh_core::epgh::verify_approximation(
                    &action_b,
                    &action_a,
                    &result.backward,
                )?;
                let payload = serde_json::json!({
                    "epsilon": result.epsilon,
                    "forward": result.forward,
                    "forward_report": forward_report,
                    "backward": result.backward,
                    "backward_report": backward_report,
                });
                write_text(&path, &serde_json::to_string_pretty(&payload)?)?;
            }
            Ok(())
        }
    }
}
