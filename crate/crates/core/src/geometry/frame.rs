use nalgebra::{Matrix3, Rotation3, Quaternion, UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};

use super::{GeometryError, Plane, Point3, Vec3};

/// A point expressed in a workplane frame. `z_residual` is the out-of-plane
/// component and is zero for points lying on the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PlanarPoint {
    pub u: f64,
    pub v: f64,
    #[serde(default)]
    pub z_residual: f64,
}

impl PlanarPoint {
    pub const fn new(u: f64, v: f64) -> Self {
        Self {
            u,
            v,
            z_residual: 0.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.v.is_finite() && self.z_residual.is_finite()
    }

    /// In-plane Euclidean distance; the residual is ignored.
    pub fn planar_distance(&self, other: &PlanarPoint) -> f64 {
        (self.u - other.u).hypot(self.v - other.v)
    }

    pub fn offset(&self, du: f64, dv: f64) -> PlanarPoint {
        PlanarPoint {
            u: self.u + du,
            v: self.v + dv,
            z_residual: self.z_residual,
        }
    }

    /// Component-wise mean, accumulated as offsets from the first point so
    /// that a run of identical points averages to exactly that point.
    /// Returns `None` for an empty slice.
    pub fn mean(points: &[PlanarPoint]) -> Option<PlanarPoint> {
        let first = *points.first()?;
        let k = points.len() as f64;
        let (mut du, mut dv, mut dz) = (0.0, 0.0, 0.0);
        for p in points {
            du += p.u - first.u;
            dv += p.v - first.v;
            dz += p.z_residual - first.z_residual;
        }
        Some(PlanarPoint {
            u: first.u + du / k,
            v: first.v + dv / k,
            z_residual: first.z_residual + dz / k,
        })
    }
}

/// A frame anchored at a plane corner: x along a corner-to-corner edge, z
/// along the plane normal. The quaternion maps frame axes to parent axes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFrame", into = "RawFrame")]
pub struct WorkplaneFrame {
    origin: Point3,
    orientation: UnitQuaternion<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawQuaternion {
    w: f64,
    x: f64,
    y: f64,
    z: f64,
}

#[derive(Serialize, Deserialize)]
struct RawFrame {
    origin: Point3,
    quaternion: RawQuaternion,
}

impl From<WorkplaneFrame> for RawFrame {
    fn from(f: WorkplaneFrame) -> Self {
        let [w, x, y, z] = f.quaternion_wxyz();
        RawFrame {
            origin: f.origin,
            quaternion: RawQuaternion { w, x, y, z },
        }
    }
}

impl TryFrom<RawFrame> for WorkplaneFrame {
    type Error = GeometryError;
    fn try_from(r: RawFrame) -> Result<Self, Self::Error> {
        let q = r.quaternion;
        WorkplaneFrame::from_parts(r.origin, [q.w, q.x, q.y, q.z])
    }
}

impl WorkplaneFrame {
    /// The parent frame itself.
    pub fn identity() -> Self {
        Self {
            origin: Point3::ORIGIN,
            orientation: UnitQuaternion::identity(),
        }
    }

    /// Build from an origin and a `(w, x, y, z)` quaternion that must already
    /// be unit length.
    pub fn from_parts(origin: Point3, wxyz: [f64; 4]) -> Result<Self, GeometryError> {
        if !origin.is_finite() || wxyz.iter().any(|c| !c.is_finite()) {
            return Err(GeometryError::NonFinite("frame"));
        }
        let q = Quaternion::new(wxyz[0], wxyz[1], wxyz[2], wxyz[3]);
        if (q.norm() - 1.0).abs() > 1e-9 {
            return Err(GeometryError::NonFinite("frame quaternion is not unit length"));
        }
        Ok(Self {
            origin,
            orientation: UnitQuaternion::new_unchecked(q),
        })
    }

    pub fn origin(&self) -> Point3 {
        self.origin
    }

    pub fn orientation(&self) -> UnitQuaternion<f64> {
        self.orientation
    }

    pub fn quaternion_wxyz(&self) -> [f64; 4] {
        let q = self.orientation.quaternion();
        [q.w, q.i, q.j, q.k]
    }

    pub fn x_axis(&self) -> Vec3 {
        (self.orientation * Vector3::x()).into()
    }

    pub fn y_axis(&self) -> Vec3 {
        (self.orientation * Vector3::y()).into()
    }

    pub fn z_axis(&self) -> Vec3 {
        (self.orientation * Vector3::z()).into()
    }

    /// Rotation matrix with the frame axes as columns.
    pub fn rotation_matrix(&self) -> [[f64; 3]; 3] {
        let m = self.orientation.to_rotation_matrix();
        let m = m.matrix();
        [
            [m[(0, 0)], m[(0, 1)], m[(0, 2)]],
            [m[(1, 0)], m[(1, 1)], m[(1, 2)]],
            [m[(2, 0)], m[(2, 1)], m[(2, 2)]],
        ]
    }

    pub fn to_workplane(&self, p: Point3) -> PlanarPoint {
        let local = self
            .orientation
            .inverse_transform_vector(&(p - self.origin).into());
        PlanarPoint {
            u: local.x,
            v: local.y,
            z_residual: local.z,
        }
    }

    pub fn from_workplane(&self, p: PlanarPoint) -> Point3 {
        let v = self
            .orientation
            .transform_vector(&Vector3::new(p.u, p.v, p.z_residual));
        self.origin + Vec3::from(v)
    }
}

/// Frame at `corners[origin]` with x toward `corners[axis]`. The two corners
/// must be adjacent in boundary order.
pub fn workplane_frame(
    plane: &Plane,
    origin: usize,
    axis: usize,
) -> Result<WorkplaneFrame, GeometryError> {
    let adjacent = origin < 4 && axis < 4 && matches!((axis + 4 - origin) % 4, 1 | 3);
    if !adjacent {
        return Err(GeometryError::InvalidCornerPair { origin, axis });
    }
    let corners = plane.corners();
    let z = plane.normal();
    let edge = corners[axis] - corners[origin];
    let x = (edge - z * z.dot(edge))
        .normalized()
        .ok_or(GeometryError::InvalidCornerPair { origin, axis })?;
    let y = z.cross(x);
    let m = Matrix3::from_columns(&[x.into(), y.into(), z.into()]);
    let rotation = Rotation3::from_matrix_unchecked(m);
    Ok(WorkplaneFrame {
        origin: corners[origin],
        orientation: UnitQuaternion::from_rotation_matrix(&rotation),
    })
}

pub fn to_workplane(point: Point3, frame: &WorkplaneFrame) -> PlanarPoint {
    frame.to_workplane(point)
}

/// Workspace outline in workplane coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkspaceBounds {
    corners: [(f64, f64); 4],
}

impl WorkspaceBounds {
    pub fn new(corners: [(f64, f64); 4]) -> Self {
        Self { corners }
    }

    pub fn from_plane(plane: &Plane, frame: &WorkplaneFrame) -> Self {
        let c = plane.corners().map(|p| {
            let q = frame.to_workplane(p);
            (q.u, q.v)
        });
        Self { corners: c }
    }

    pub fn corners(&self) -> &[(f64, f64); 4] {
        &self.corners
    }

    pub fn contains(&self, p: &PlanarPoint) -> bool {
        point_in_bounds(p, &self.corners)
    }

    /// Axis-aligned extent `(min_u, min_v, max_u, max_v)`.
    pub fn bbox(&self) -> (f64, f64, f64, f64) {
        self.corners.iter().fold(
            (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY),
            |(a, b, c, d), &(u, v)| (a.min(u), b.min(v), c.max(u), d.max(v)),
        )
    }
}

/// Inside-or-on-boundary test against a simple quadrilateral.
pub fn point_in_bounds(p: &PlanarPoint, corners: &[(f64, f64); 4]) -> bool {
    let (x, y) = (p.u, p.v);
    let mut inside = false;
    for i in 0..4 {
        let (ax, ay) = corners[i];
        let (bx, by) = corners[(i + 1) % 4];
        let cross = (bx - ax) * (y - ay) - (by - ay) * (x - ax);
        let len = (bx - ax).hypot(by - ay);
        if cross.abs() <= 1e-12 * len.max(1.0)
            && x >= ax.min(bx) - 1e-12
            && x <= ax.max(bx) + 1e-12
            && y >= ay.min(by) - 1e-12
            && y <= ay.max(by) + 1e-12
        {
            return true;
        }
        if (ay > y) != (by > y) {
            let xi = ax + (y - ay) * (bx - ax) / (by - ay);
            if x < xi {
                inside = !inside;
            }
        }
    }
    inside
}

/// A proper rigid motion `p ↦ R·p + t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidMotion {
    pub rotation: UnitQuaternion<f64>,
    pub translation: Vec3,
}

impl RigidMotion {
    pub fn identity() -> Self {
        Self {
            rotation: UnitQuaternion::identity(),
            translation: Vec3::ZERO,
        }
    }

    pub fn new(axis_angle: Vec3, translation: Vec3) -> Self {
        Self {
            rotation: UnitQuaternion::from_scaled_axis(axis_angle.into()),
            translation,
        }
    }

    /// Motion whose rotation has the given orthonormal columns.
    pub fn from_columns(x: Vec3, y: Vec3, z: Vec3, translation: Vec3) -> Self {
        let m = Matrix3::from_columns(&[x.into(), y.into(), z.into()]);
        Self {
            rotation: UnitQuaternion::from_rotation_matrix(&Rotation3::from_matrix_unchecked(m)),
            translation,
        }
    }

    pub fn apply(&self, p: Point3) -> Point3 {
        let r: Vec3 = (self.rotation * Vector3::from(p.coords())).into();
        Point3::new(r.x, r.y, r.z) + self.translation
    }

    pub fn apply_vec(&self, v: Vec3) -> Vec3 {
        (self.rotation * Vector3::from(v)).into()
    }

    pub fn inverse(&self) -> Self {
        let rotation = self.rotation.inverse();
        let t: Vec3 = (rotation * Vector3::from(self.translation)).into();
        Self {
            rotation,
            translation: -t,
        }
    }
}
