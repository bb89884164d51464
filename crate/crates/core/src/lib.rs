//! Computational workbench for the affine geometry AG(4,3): caps, anchor
//! points, demicaps, partitions into maximal caps, and the symmetry group of
//! a maximal cap acting on its 1-completable partners.

pub mod caps;
pub mod demicaps;
pub mod partitions;
pub mod render;
pub mod verify;
pub mod symmetry;
pub mod gf3geom;

pub use caps::{canonical_cap, is_cap, CapError, CompletionProfile, MaximalCap};
pub use gf3geom::{third_point, ALine, GeomError, Hyperplane, Line, Point, PointSet};
