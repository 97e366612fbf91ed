//! Equivariant pointed Gromov-Hausdorff machinery at desk scale.
//!
//! The crate works with finite pointed metric spaces carrying effective
//! isometric actions of finite groups. It verifies and searches equivariant
//! pointed GH approximation certificates, computes the geometry a group
//! inherits from its action (pseudoseminorms, minimal nets), runs the
//! discrete-to-continuous center-of-mass pipeline on compact matrix groups,
//! snaps almost-homomorphisms to exact homomorphisms, and analyzes kernels
//! and symmetry preservation along convergent sequences.

#![forbid(unsafe_code)]

pub mod action_geometry;
pub mod epgh;
pub mod groups;
pub mod io;
pub mod lie;
pub mod metric;
pub mod parallel;
pub mod scenario;
pub mod smoothing;

pub use groups::{FiniteGroup, GroupAction};
pub use lie::Rotation;
pub use metric::FiniteMetricSpace;
