//! Shared file helpers for the command-line tools.

use anyhow::{Context, Result};
use std::path::Path;

use eqgh_core::groups::GroupAction;
use eqgh_core::io;
use eqgh_core::lie::Rotation;
use eqgh_core::metric::FiniteMetricSpace;

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn load_action(path: &Path) -> Result<GroupAction> {
    io::action_from_json(&read_text(path)?).with_context(|| format!("loading {}", path.display()))
}

pub fn load_space(path: &Path) -> Result<FiniteMetricSpace> {
    io::space_from_json(&read_text(path)?).with_context(|| format!("loading {}", path.display()))
}

pub fn load_rotations(path: &Path) -> Result<Vec<Rotation>> {
    io::rotations_from_json(&read_text(path)?)
        .with_context(|| format!("loading {}", path.display()))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
