use std::fmt;

use super::{GeometryError, Plane, Point3, MIN_ARM_LENGTH, PARALLEL_TOLERANCE, T_MIN};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayOptions {
    pub min_arm_length: f64,
    pub parallel_tolerance: f64,
    pub t_min: f64,
}

impl Default for RayOptions {
    fn default() -> Self {
        Self {
            min_arm_length: MIN_ARM_LENGTH,
            parallel_tolerance: PARALLEL_TOLERANCE,
            t_min: T_MIN,
        }
    }
}

/// Where the extended arm meets the plane. `t` is measured in units of the
/// shoulder-to-wrist vector, so `t = 1` is the wrist itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Intersection {
    pub point: Point3,
    pub t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MissReason {
    Parallel { cosine: f64 },
    BehindArm { t: f64 },
}

impl fmt::Display for MissReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MissReason::Parallel { cosine } => write!(f, "ray parallel to plane (cos {cosine:.2e})"),
            MissReason::BehindArm { t } => write!(f, "intersection behind the hand (t = {t:.3})"),
        }
    }
}

/// Extend the line from `shoulder` through `wrist` until it meets `plane`.
///
/// Solves `P = Ps + t·(Pw − Ps)` with `t = −(⟨n, Ps⟩ + d) / ⟨n, Pw − Ps⟩`.
pub fn intersect_ray_plane(
    shoulder: Point3,
    wrist: Point3,
    plane: &Plane,
    opts: &RayOptions,
) -> Result<Intersection, GeometryError> {
    if !shoulder.is_finite() || !wrist.is_finite() {
        return Err(GeometryError::NonFinite("joint position"));
    }
    let dir = wrist - shoulder;
    let len = dir.norm();
    if !(len > opts.min_arm_length) {
        return Err(GeometryError::DegenerateArm(len));
    }
    let n = plane.normal();
    let denom = n.dot(dir);
    let cosine = denom / len;
    if cosine.abs() < opts.parallel_tolerance {
        return Err(GeometryError::NoIntersection(MissReason::Parallel { cosine }));
    }
    let t = -(n.dot(shoulder.coords()) + plane.d()) / denom;
    if !(t >= opts.t_min) {
        return Err(GeometryError::NoIntersection(MissReason::BehindArm { t }));
    }
    Ok(Intersection {
        point: shoulder + dir * t,
        t,
    })
}
