//! JSON wire formats, validated on load.
//!
//! Spaces: `{ "n": int, "basepoint": int, "dist": [[real]] }` (row-major,
//! full matrix). Groups: `{ "order": int, "cayley": [[int]] }`. Actions:
//! `{ "group": <group>, "space": <space>, "perm": [[int]] }`. Rotations:
//! `{ "n": int, "matrix": [[real]] }`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::{validate_action, validate_group, FiniteGroup, GroupAction, GroupError};
use crate::lie::{Rotation, RotationError};
use crate::metric::{validate_space, FiniteMetricSpace, MetricError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("metric: {0}")]
    Metric(#[from] MetricError),
    #[error("group: {0}")]
    Group(#[from] GroupError),
    #[error("rotation: {0}")]
    Rotation(#[from] RotationError),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RawSpace {
    pub n: usize,
    pub basepoint: usize,
    pub dist: Vec<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RawGroup {
    pub order: usize,
    pub cayley: Vec<Vec<usize>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RawAction {
    pub group: RawGroup,
    pub space: RawSpace,
    pub perm: Vec<Vec<usize>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RawRotation {
    pub n: usize,
    pub matrix: Vec<Vec<f64>>,
}

pub fn space_from_json(text: &str) -> Result<FiniteMetricSpace, IoError> {
    let raw: RawSpace = serde_json::from_str(text)?;
    if raw.dist.len() != raw.n {
        return Err(IoError::Shape(format!(
            "declared n = {} but matrix has {} rows",
            raw.n,
            raw.dist.len()
        )));
    }
    Ok(validate_space(raw.dist, raw.basepoint)?)
}

pub fn space_to_json(space: &FiniteMetricSpace) -> String {
    serde_json::to_string_pretty(&RawSpace {
        n: space.n(),
        basepoint: space.basepoint(),
        dist: space.matrix().clone(),
    })
    .expect("space serializes")
}

pub fn group_from_json(text: &str) -> Result<FiniteGroup, IoError> {
    let raw: RawGroup = serde_json::from_str(text)?;
    if raw.cayley.len() != raw.order {
        return Err(IoError::Shape(format!(
            "declared order = {} but table has {} rows",
            raw.order,
            raw.cayley.len()
        )));
    }
    Ok(validate_group(raw.cayley)?)
}

pub fn group_to_json(group: &FiniteGroup) -> String {
    serde_json::to_string_pretty(&RawGroup {
        order: group.order(),
        cayley: group.cayley().clone(),
    })
    .expect("group serializes")
}

pub fn action_from_json(text: &str) -> Result<GroupAction, IoError> {
    let raw: RawAction = serde_json::from_str(text)?;
    let group = validate_group(raw.group.cayley)?;
    let space = validate_space(raw.space.dist, raw.space.basepoint)?;
    Ok(validate_action(group, space, raw.perm)?)
}

pub fn action_to_json(action: &GroupAction) -> String {
    serde_json::to_string_pretty(&RawAction {
        group: RawGroup {
            order: action.group().order(),
            cayley: action.group().cayley().clone(),
        },
        space: RawSpace {
            n: action.space().n(),
            basepoint: action.space().basepoint(),
            dist: action.space().matrix().clone(),
        },
        perm: action.perm().clone(),
    })
    .expect("action serializes")
}

pub fn rotation_from_json(text: &str) -> Result<Rotation, IoError> {
    let raw: RawRotation = serde_json::from_str(text)?;
    if raw.matrix.len() != raw.n {
        return Err(IoError::Shape(format!(
            "declared n = {} but matrix has {} rows",
            raw.n,
            raw.matrix.len()
        )));
    }
    Ok(Rotation::try_new(raw.matrix)?)
}

pub fn rotation_to_json(rotation: &Rotation) -> String {
    serde_json::to_string_pretty(&RawRotation {
        n: rotation.n(),
        matrix: rotation.matrix().clone(),
    })
    .expect("rotation serializes")
}

pub fn rotations_from_json(text: &str) -> Result<Vec<Rotation>, IoError> {
    let raw: Vec<RawRotation> = serde_json::from_str(text)?;
    raw.into_iter()
        .map(|r| Rotation::try_new(r.matrix).map_err(IoError::from))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::cyclic_shift_action;
    use crate::metric::circle_space;

    #[test]
    fn space_round_trip() {
        let space = circle_space(6);
        let text = space_to_json(&space);
        let loaded = space_from_json(&text).unwrap();
        assert_eq!(loaded, space);
    }

    #[test]
    fn invalid_space_is_rejected_on_load() {
        let text = r#"{ "n": 2, "basepoint": 0, "dist": [[0.0, 1.0], [0.9, 0.0]] }"#;
        assert!(matches!(space_from_json(text), Err(IoError::Metric(_))));
    }

    #[test]
    fn action_round_trip() {
        let action = cyclic_shift_action(circle_space(6), 3, 2).unwrap();
        let text = action_to_json(&action);
        let loaded = action_from_json(&text).unwrap();
        assert_eq!(loaded.perm(), action.perm());
        assert_eq!(loaded.group().cayley(), action.group().cayley());
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let text = r#"{ "n": 3, "basepoint": 0, "dist": [[0.0, 1.0], [1.0, 0.0]] }"#;
        assert!(matches!(space_from_json(text), Err(IoError::Shape(_))));
    }

    #[test]
    fn rotation_round_trip_and_validation() {
        let r = Rotation::so2(0.4);
        let text = rotation_to_json(&r);
        let loaded = rotation_from_json(&text).unwrap();
        assert_eq!(loaded, r);
        let bad = r#"{ "n": 2, "matrix": [[1.0, 0.3], [0.0, 1.0]] }"#;
        assert!(rotation_from_json(bad).is_err());
    }
}
