use serde::{Deserialize, Serialize};

use super::{GeometryError, Point3, Vec3, DEGENERACY_TOLERANCE, PLANARITY_TOLERANCE};

/// How to pick the sign of the plane normal, which the corner cross product
/// alone leaves open.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Orientation {
    /// Normal faces a known viewpoint, usually the camera origin.
    Viewpoint(Point3),
    /// Normal has a non-negative component along the given direction.
    Along(Vec3),
    /// Same as `Along(Vec3::Z)`.
    Up,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneOptions {
    pub planarity_tolerance: f64,
    pub degeneracy_tolerance: f64,
    pub orientation: Orientation,
}

impl Default for PlaneOptions {
    fn default() -> Self {
        Self {
            planarity_tolerance: PLANARITY_TOLERANCE,
            degeneracy_tolerance: DEGENERACY_TOLERANCE,
            orientation: Orientation::Up,
        }
    }
}

impl PlaneOptions {
    pub fn facing(viewpoint: Point3) -> Self {
        Self {
            orientation: Orientation::Viewpoint(viewpoint),
            ..Self::default()
        }
    }
}

/// A bounded planar workspace: `⟨normal, p⟩ + d = 0` with four corners.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPlane", into = "RawPlane")]
pub struct Plane {
    normal: Vec3,
    d: f64,
    corners: [Point3; 4],
}

#[derive(Serialize, Deserialize)]
struct RawPlane {
    normal: Vec3,
    d: f64,
    corners: Vec<Point3>,
}

impl From<Plane> for RawPlane {
    fn from(p: Plane) -> Self {
        RawPlane {
            normal: p.normal,
            d: p.d,
            corners: p.corners.to_vec(),
        }
    }
}

impl TryFrom<RawPlane> for Plane {
    type Error = GeometryError;

    /// Stored planes are rebuilt from their corners; the stored normal only
    /// pins the sign.
    fn try_from(raw: RawPlane) -> Result<Self, Self::Error> {
        if !raw.normal.is_finite() || !raw.d.is_finite() {
            return Err(GeometryError::NonFinite("plane"));
        }
        plane_from_corners(
            &raw.corners,
            &PlaneOptions {
                orientation: Orientation::Along(raw.normal),
                ..PlaneOptions::default()
            },
        )
    }
}

impl Plane {
    pub fn normal(&self) -> Vec3 {
        self.normal
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn corners(&self) -> &[Point3; 4] {
        &self.corners
    }

    /// `⟨n, p⟩ + d`, the signed distance since `n` is unit length.
    pub fn signed_distance(&self, p: Point3) -> f64 {
        self.normal.dot(p.coords()) + self.d
    }

    /// Orthogonal projection of `p` onto the plane.
    pub fn project(&self, p: Point3) -> Point3 {
        p - self.normal * self.signed_distance(p)
    }

    /// Centroid of the four corners.
    pub fn center(&self) -> Point3 {
        let mut c = Vec3::ZERO;
        for p in &self.corners {
            c = c + p.coords();
        }
        let c = c * 0.25;
        Point3::new(c.x, c.y, c.z)
    }
}

/// Build a plane from three or four corners given in boundary order.
///
/// The normal is `normalize((P2 − P1) × (P3 − P2))` with its sign fixed by
/// `opts.orientation`, and `d = −⟨n, P3⟩`. A missing fourth corner is
/// completed as `P1 + (P3 − P2)`. A supplied fourth corner must lie within
/// the planarity tolerance and is stored projected onto the plane.
pub fn plane_from_corners(corners: &[Point3], opts: &PlaneOptions) -> Result<Plane, GeometryError> {
    if corners.len() != 3 && corners.len() != 4 {
        return Err(GeometryError::CornerCount(corners.len()));
    }
    if corners.iter().any(|c| !c.is_finite()) {
        return Err(GeometryError::NonFinite("corner"));
    }
    let (p1, p2, p3) = (corners[0], corners[1], corners[2]);
    let raw = (p2 - p1).cross(p3 - p2);
    let area = raw.norm();
    if !(area > opts.degeneracy_tolerance) {
        return Err(GeometryError::CollinearCorners {
            indices: [0, 1, 2],
            norm: area,
        });
    }
    let mut normal = raw * (1.0 / area);
    if should_flip(normal, p1, opts.orientation) {
        normal = -normal;
    }
    let d = -normal.dot(p3.coords());

    let p4 = match corners.get(3) {
        Some(&p4) => {
            let distance = normal.dot(p4.coords()) + d;
            if distance.abs() > opts.planarity_tolerance {
                return Err(GeometryError::NonPlanarCorner {
                    index: 3,
                    distance: distance.abs(),
                    tolerance: opts.planarity_tolerance,
                });
            }
            p4 - normal * distance
        }
        None => p1 + (p3 - p2),
    };
    let corners = [p1, p2, p3, p4];
    if !is_simple_quad(&corners, normal) {
        return Err(GeometryError::SelfIntersectingCorners);
    }
    Ok(Plane { normal, d, corners })
}

fn should_flip(n: Vec3, p1: Point3, orientation: Orientation) -> bool {
    match orientation {
        Orientation::Viewpoint(eye) => {
            let s = n.dot(eye - p1);
            if s != 0.0 {
                s < 0.0
            } else {
                should_flip(n, p1, Orientation::Up)
            }
        }
        Orientation::Along(dir) => {
            let s = n.dot(dir);
            if s != 0.0 {
                s < 0.0
            } else {
                should_flip(n, p1, Orientation::Up)
            }
        }
        // Lexicographic on (z, y, x) so vertical planes still get a fixed sign.
        Orientation::Up => {
            for c in [n.z, n.y, n.x] {
                if c != 0.0 {
                    return c < 0.0;
                }
            }
            false
        }
    }
}

fn is_simple_quad(corners: &[Point3; 4], normal: Vec3) -> bool {
    let Some(e1) = (corners[1] - corners[0]).normalized() else {
        return false;
    };
    let e2 = normal.cross(e1);
    let q: Vec<(f64, f64)> = corners
        .iter()
        .map(|c| {
            let r = *c - corners[0];
            (r.dot(e1), r.dot(e2))
        })
        .collect();
    !segments_touch(q[0], q[1], q[2], q[3]) && !segments_touch(q[1], q[2], q[3], q[0])
}

fn orient(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

fn on_segment(a: (f64, f64), b: (f64, f64), p: (f64, f64)) -> bool {
    p.0 >= a.0.min(b.0) && p.0 <= a.0.max(b.0) && p.1 >= a.1.min(b.1) && p.1 <= a.1.max(b.1)
}

fn segments_touch(a: (f64, f64), b: (f64, f64), c: (f64, f64), d: (f64, f64)) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}
