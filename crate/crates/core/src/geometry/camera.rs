use serde::{Deserialize, Serialize};

use super::{GeometryError, Point3};

/// Pinhole intrinsics of a pre-calibrated, distortion-free camera.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawIntrinsics", into = "RawIntrinsics")]
pub struct CameraIntrinsics {
    fx: f64,
    fy: f64,
    cx: f64,
    cy: f64,
    width: u32,
    height: u32,
}

#[derive(Serialize, Deserialize)]
struct RawIntrinsics {
    fx: f64,
    fy: f64,
    cx: f64,
    cy: f64,
    width: u32,
    height: u32,
}

impl TryFrom<RawIntrinsics> for CameraIntrinsics {
    type Error = GeometryError;
    fn try_from(r: RawIntrinsics) -> Result<Self, Self::Error> {
        CameraIntrinsics::new(r.fx, r.fy, r.cx, r.cy, r.width, r.height)
    }
}

impl From<CameraIntrinsics> for RawIntrinsics {
    fn from(c: CameraIntrinsics) -> Self {
        RawIntrinsics {
            fx: c.fx,
            fy: c.fy,
            cx: c.cx,
            cy: c.cy,
            width: c.width,
            height: c.height,
        }
    }
}

impl CameraIntrinsics {
    pub fn new(
        fx: f64,
        fy: f64,
        cx: f64,
        cy: f64,
        width: u32,
        height: u32,
    ) -> Result<Self, GeometryError> {
        if !(fx.is_finite() && fy.is_finite() && cx.is_finite() && cy.is_finite()) {
            return Err(GeometryError::NonFinite("intrinsics"));
        }
        if fx <= 0.0 || fy <= 0.0 {
            return Err(GeometryError::InvalidIntrinsics("focal lengths must be positive"));
        }
        if !(0.0..width as f64).contains(&cx) || !(0.0..height as f64).contains(&cy) {
            return Err(GeometryError::InvalidIntrinsics(
                "principal point must lie inside the image",
            ));
        }
        Ok(Self {
            fx,
            fy,
            cx,
            cy,
            width,
            height,
        })
    }

    pub fn fx(&self) -> f64 {
        self.fx
    }
    pub fn fy(&self) -> f64 {
        self.fy
    }
    pub fn cx(&self) -> f64 {
        self.cx
    }
    pub fn cy(&self) -> f64 {
        self.cy
    }
    pub fn width(&self) -> u32 {
        self.width
    }
    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn contains_pixel(&self, px: f64, py: f64) -> bool {
        (0.0..self.width as f64).contains(&px) && (0.0..self.height as f64).contains(&py)
    }
}

/// Lift a pixel with metric depth into a camera-frame point.
pub fn deproject(
    px: f64,
    py: f64,
    depth: f64,
    intr: &CameraIntrinsics,
) -> Result<Point3, GeometryError> {
    if !(px.is_finite() && py.is_finite() && depth.is_finite()) {
        return Err(GeometryError::NonFinite("pixel or depth"));
    }
    if depth <= 0.0 {
        return Err(GeometryError::NonPositiveDepth(depth));
    }
    if !intr.contains_pixel(px, py) {
        return Err(GeometryError::PixelOutOfBounds {
            px,
            py,
            width: intr.width,
            height: intr.height,
        });
    }
    Ok(Point3::new(
        (px - intr.cx) * depth / intr.fx,
        (py - intr.cy) * depth / intr.fy,
        depth,
    ))
}

/// Project a camera-frame point to pixel coordinates.
pub fn project(point: Point3, intr: &CameraIntrinsics) -> Result<(f64, f64), GeometryError> {
    if !point.is_finite() {
        return Err(GeometryError::NonFinite("point"));
    }
    if point.z <= 0.0 {
        return Err(GeometryError::BehindCamera(point.z));
    }
    Ok((
        intr.fx * point.x / point.z + intr.cx,
        intr.fy * point.y / point.z + intr.cy,
    ))
}
