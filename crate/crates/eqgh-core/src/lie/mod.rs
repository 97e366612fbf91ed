//! Compact matrix group geometry: bi-invariant distance on SO(n), weighted
//! centers of mass, bump partitions of unity, and the discrete-to-continuous
//! pipeline.

mod continuify;
mod mean;
mod rotation;

pub use continuify::{
    continuify, greedy_rotation_net, measure_modulus, so2_uniform_net, ContinuifySummary,
    ContinuousMapRep, TargetNet,
};
pub use mean::{karcher_mean, weighted_log_direction, BumpPartition, ComConfig};
pub use rotation::{
    diameter_normalizer, geodesic_distance, geodesic_distance_flagged, principal_log, reproject,
    skew_exp, Rotation, RotationError, CUT_LOCUS_TOL, ORTHOGONALITY_TOL,
};
