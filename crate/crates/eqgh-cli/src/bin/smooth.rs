//! Almost-homomorphism defect and the snap to an exact homomorphism.

use anyhow::{bail, Result};
use clap::{Parser, Subcommand};
use std::path::PathBuf;

use eqgh_cli::{load_rotations, read_text};
use eqgh_core::io::group_from_json;
use eqgh_core::smoothing::{
    check_monomorphism, homomorphism_defect, kernel, snap_to_homomorphism, AlmostHomomorphism,
    MapImages, DEFAULT_Q_MAX,
};

#[derive(Parser)]
#[command(name = "smooth", about = "snap almost-homomorphisms to exact ones")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Snap a map to the nearest exact homomorphism.
    Snap {
        /// Rotation targets: JSON array of rotations, one per source
        /// element. Finite targets: JSON array of element indices.
        psi: PathBuf,
        /// Source group JSON.
        #[arg(long)]
        source: PathBuf,
        /// "so2", "so3", or a path to a target group JSON.
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = DEFAULT_Q_MAX)]
        q_max: f64,
        /// Discrete-metric scale for finite targets.
        #[arg(long, default_value_t = 0.05)]
        metric_scale: f64,
    },
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Snap {
            psi,
            source,
            target,
            q_max,
            metric_scale,
        } => {
            let source = group_from_json(&read_text(&source)?)?;
            let images = match target.as_str() {
                "so2" | "so3" => {
                    let rotations = load_rotations(&psi)?;
                    let expected = if target == "so2" { 2 } else { 3 };
                    if rotations.iter().any(|r| r.n() != expected) {
                        bail!("images must be {expected}x{expected} rotations for {target}");
                    }
                    MapImages::Rotations(rotations)
                }
                path => {
                    let target_group = group_from_json(&read_text(&PathBuf::from(path))?)?;
                    let images: Vec<usize> = serde_json::from_str(&read_text(&psi)?)?;
                    MapImages::Finite {
                        target: target_group,
                        metric_scale,
                        images,
                    }
                }
            };
            let map = AlmostHomomorphism { source, images };
            let defect = homomorphism_defect(&map)?;
            let snap = snap_to_homomorphism(&map, q_max)?;
            let (kernel_group, kernel_embedding) = kernel(&snap.hom)?;
            let mono = check_monomorphism(&snap.hom)?;
            let payload = serde_json::json!({
                "defect": defect,
                "snap": snap,
                "kernel_order": kernel_group.order(),
                "kernel_elements": kernel_embedding,
                "monomorphism": mono,
            });
            println!("{}", serde_json::to_string_pretty(&payload)?);
            Ok(())
        }
    }
}
