//! Pure geometric core: workplane construction, pinhole deprojection,
//! shoulder-wrist ray casting and workplane frame transforms.
//!
//! Everything here is a function of immutable values. Units are meters
//! (pixels for image coordinates).

mod camera;
mod frame;
mod plane;
mod ray;
mod vector;

pub use camera::{deproject, project, CameraIntrinsics};
pub use frame::{
    point_in_bounds, to_workplane, workplane_frame, PlanarPoint, RigidMotion, WorkplaneFrame,
    WorkspaceBounds,
};
pub use plane::{plane_from_corners, Orientation, Plane, PlaneOptions};
pub use ray::{intersect_ray_plane, Intersection, MissReason, RayOptions};
pub use vector::{Point3, Vec3};

use thiserror::Error;

/// Default tolerance for the fourth corner's distance to the plane.
pub const PLANARITY_TOLERANCE: f64 = 0.005;
/// Minimum cross-product norm of the first three corners, in square meters.
pub const DEGENERACY_TOLERANCE: f64 = 1e-6;
/// Minimum shoulder-to-wrist separation.
pub const MIN_ARM_LENGTH: f64 = 0.01;
/// Rays whose unit direction has smaller normal component are treated as parallel.
pub const PARALLEL_TOLERANCE: f64 = 1e-6;
/// Accepted intersections must satisfy `t >= T_MIN` (beyond the wrist).
pub const T_MIN: f64 = 1.0;
/// Out-of-plane residual expected from an on-plane point.
pub const RESIDUAL_TOLERANCE: f64 = 0.01;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("corners {indices:?} are collinear (cross product norm {norm:.3e} m^2)")]
    CollinearCorners { indices: [usize; 3], norm: f64 },
    #[error("corner {index} is {distance:.4} m off the plane (tolerance {tolerance} m)")]
    NonPlanarCorner {
        index: usize,
        distance: f64,
        tolerance: f64,
    },
    #[error("corners do not form a simple quadrilateral")]
    SelfIntersectingCorners,
    #[error("expected 3 or 4 corners, got {0}")]
    CornerCount(usize),
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),
    #[error("depth must be positive, got {0}")]
    NonPositiveDepth(f64),
    #[error("pixel ({px}, {py}) outside {width}x{height} image")]
    PixelOutOfBounds {
        px: f64,
        py: f64,
        width: u32,
        height: u32,
    },
    #[error("point is behind the camera (z = {0})")]
    BehindCamera(f64),
    #[error("invalid camera intrinsics: {0}")]
    InvalidIntrinsics(&'static str),
    #[error("shoulder and wrist are {0:.4} m apart")]
    DegenerateArm(f64),
    #[error("ray does not hit the plane: {0}")]
    NoIntersection(MissReason),
    #[error("corners {origin} and {axis} are not an adjacent pair")]
    InvalidCornerPair { origin: usize, axis: usize },
}

impl GeometryError {
    /// Variant name, for messages that should be greppable.
    pub fn name(&self) -> &'static str {
        match self {
            GeometryError::CollinearCorners { .. } => "CollinearCorners",
            GeometryError::NonPlanarCorner { .. } => "NonPlanarCorner",
            GeometryError::SelfIntersectingCorners => "SelfIntersectingCorners",
            GeometryError::CornerCount(_) => "CornerCount",
            GeometryError::NonFinite(_) => "NonFinite",
            GeometryError::NonPositiveDepth(_) => "NonPositiveDepth",
            GeometryError::PixelOutOfBounds { .. } => "PixelOutOfBounds",
            GeometryError::BehindCamera(_) => "BehindCamera",
            GeometryError::InvalidIntrinsics(_) => "InvalidIntrinsics",
            GeometryError::DegenerateArm(_) => "DegenerateArm",
            GeometryError::NoIntersection(_) => "NoIntersection",
            GeometryError::InvalidCornerPair { .. } => "InvalidCornerPair",
        }
    }
}
