//! Action pseudoseminorm tables and minimal nets.

use anyhow::Result;
use clap::{Parser, Subcommand};
use std::path::PathBuf;

use eqgh_cli::{load_action, load_space};
use eqgh_core::action_geometry::{
    action_seminorm, covering_multiplicity, metric_regime, minimal_net, seminorm_table,
};

#[derive(Parser)]
#[command(name = "actiongeo", about = "geometry a group inherits from its action")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Seminorm values at radius R, for one element or the whole group.
    Seminorm {
        action: PathBuf,
        #[arg(long = "R")]
        radius: f64,
        #[arg(long)]
        element: Option<usize>,
        /// Also report the separation/triangle regime at this radius.
        #[arg(long)]
        regime: bool,
    },
    /// Greedy minimal mu-net of a space, with its covering multiplicity.
    Net {
        space: PathBuf,
        #[arg(long)]
        mu: f64,
    },
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Seminorm {
            action,
            radius,
            element,
            regime,
        } => {
            let action = load_action(&action)?;
            let payload = match element {
                Some(g) => serde_json::json!({
                    "radius": radius,
                    "element": g,
                    "value": action_seminorm(&action, g, radius),
                }),
                None => {
                    let table = seminorm_table(&action, radius);
                    let mut out = serde_json::json!({
                        "radius": radius,
                        "values": table.values,
                    });
                    if regime {
                        out["regime"] = serde_json::to_value(metric_regime(&action, radius))?;
                    }
                    out
                }
            };
            println!("{}", serde_json::to_string_pretty(&payload)?);
            Ok(())
        }
        Command::Net { space, mu } => {
            let space = load_space(&space)?;
            let net = minimal_net(&space, mu)?;
            let multiplicity = covering_multiplicity(&space, &net)?;
            let payload = serde_json::json!({
                "mu": mu,
                "members": net.members,
                "covering_multiplicity": multiplicity,
            });
            println!("{}", serde_json::to_string_pretty(&payload)?);
            Ok(())
        }
    }
}
