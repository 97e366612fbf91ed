//! Centers of mass on SO(n) and the discrete-to-continuous pipeline.

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde::Deserialize;
use std::path::PathBuf;

use eqgh_cli::{load_rotations, read_text};
use eqgh_core::io::{rotation_to_json, RawRotation};
use eqgh_core::lie::{
    continuify, geodesic_distance, karcher_mean, ComConfig, Rotation, TargetNet,
};

#[derive(Parser)]
#[command(name = "lie", about = "compact matrix group numerics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weighted intrinsic mean of rotations.
    Mean {
        points: PathBuf,
        weights: PathBuf,
        #[arg(long, default_value_t = 0.4)]
        r_conv: f64,
        #[arg(long, default_value_t = 1.0)]
        r_growth: f64,
        #[arg(long, default_value_t = 3)]
        n_max: usize,
    },
    /// Continuous representative of a finite-subgroup map.
    Continuify {
        /// JSON: { "source": [rotations], "images": [rotations] }.
        psi: PathBuf,
        #[arg(long)]
        nu: f64,
        #[arg(long)]
        eta: f64,
        #[arg(long, default_value_t = 0.4)]
        r_conv: f64,
        #[arg(long, default_value_t = 1.0)]
        r_growth: f64,
        #[arg(long, default_value_t = 3)]
        n_max: usize,
    },
}

#[derive(Deserialize)]
struct PsiFile {
    source: Vec<RawRotation>,
    images: Vec<RawRotation>,
}

fn rotations_of(raw: Vec<RawRotation>) -> Result<Vec<Rotation>> {
    raw.into_iter()
        .map(|r| Rotation::try_new(r.matrix).context("invalid rotation"))
        .collect()
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Mean {
            points,
            weights,
            r_conv,
            r_growth,
            n_max,
        } => {
            let points = load_rotations(&points)?;
            let weights: Vec<f64> = serde_json::from_str(&read_text(&weights)?)?;
            let cfg = ComConfig {
                r_conv,
                r_growth,
                n_max,
            };
            let mean = karcher_mean(&points, &weights, &cfg)?;
            println!("{}", rotation_to_json(&mean));
            Ok(())
        }
        Command::Continuify {
            psi,
            nu,
            eta,
            r_conv,
            r_growth,
            n_max,
        } => {
            let file: PsiFile = serde_json::from_str(&read_text(&psi)?)?;
            let source = rotations_of(file.source)?;
            let images = rotations_of(file.images)?;
            let cfg = ComConfig {
                r_conv,
                r_growth,
                n_max,
            };
            let target = if images.iter().all(|r| r.n() == 2) {
                TargetNet::So2Uniform
            } else {
                TargetNet::Points(images.clone())
            };
            let rep = continuify(&source, &images, nu, eta, &target, &cfg)?;
            let evaluations: Vec<Rotation> = rep
                .eval_batch(&source)
                .into_iter()
                .collect::<Result<_, _>>()?;
            let max_deviation = evaluations
                .iter()
                .zip(&images)
                .map(|(a, b)| geodesic_distance(a, b))
                .fold(0.0_f64, f64::max);
            let payload = serde_json::json!({
                "summary": rep.summary(),
                "alpha": rep.alpha(),
                "source_net": rep.source_net_indices(),
                "max_deviation_at_source": max_deviation,
                "evaluations_at_source": evaluations
                    .iter()
                    .map(|r| r.matrix().clone())
                    .collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&payload)?);
            Ok(())
        }
    }
}
