//! Plane files and corner input files.

use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};

use gesture_pointer::geometry::{
    deproject, plane_from_corners, workplane_frame, CameraIntrinsics, GeometryError, Plane, PlaneOptions, Point3,
};
use gesture_pointer::pipeline::Workspace;

use crate::error::{CliError, CliResult, ResultExt};
use crate::io::write_atomic;

#[derive(Debug, Clone, PartialEq)]
pub struct PlaneFile {
    pub plane: Plane,
    pub origin_corner: usize,
    pub x_corner: usize,
    /// `|⟨n, P⟩ + d|` of each input corner before projection.
    pub residuals: Vec<f64>,
}

impl PlaneFile {
    pub fn workspace(&self) -> CliResult<Workspace> {
        Workspace::new(self.plane.clone(), self.origin_corner, self.x_corner).or_usage("plane file frame")
    }

    pub fn to_json(&self) -> CliResult<String> {
        let frame = workplane_frame(&self.plane, self.origin_corner, self.x_corner).or_usage("workplane frame")?;
        let mut doc = serde_json::to_value(&self.plane).expect("plane serialization is infallible");
        let frame_doc = serde_json::to_value(frame).expect("frame serialization is infallible");
        doc["frame"] = json!({
            "origin_corner": self.origin_corner,
            "x_corner": self.x_corner,
            "origin": frame_doc["origin"],
            "quaternion": frame_doc["quaternion"],
        });
        doc["residuals"] = json!(self.residuals);
        let mut s = serde_json::to_string_pretty(&doc).expect("plane file serialization is infallible");
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        let doc: Value = serde_json::from_str(text).or_usage("plane file is not valid JSON")?;
        let plane: Plane = serde_json::from_value(doc.clone()).or_usage("plane file")?;
        let index = |key: &str| -> CliResult<usize> {
            match doc.get("frame").and_then(|f| f.get(key)) {
                None => Ok(if key == "origin_corner" { 0 } else { 1 }),
                Some(v) => v
                    .as_u64()
                    .map(|i| i as usize)
                    .ok_or_else(|| CliError::usage(format!("plane file: frame.{key} must be a corner index"))),
            }
        };
        let residuals = doc
            .get("residuals")
            .and_then(Value::as_array)
            .map(|a| a.iter().filter_map(Value::as_f64).collect())
            .unwrap_or_default();
        let file = PlaneFile {
            plane,
            origin_corner: index("origin_corner")?,
            x_corner: index("x_corner")?,
            residuals,
        };
        file.workspace()?;
        Ok(file)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).or_usage(format!("reading plane file {}", path.display()))?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Usage(e) => CliError::Usage(e.context(format!("plane file {}", path.display()))),
            other => other,
        })
    }

    pub fn save(&self, path: &Path) -> CliResult<()> {
        write_atomic(path, self.to_json()?.as_bytes()).or_runtime(format!("writing {}", path.display()))
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum CornerRecord {
    Point { x: f64, y: f64, z: f64 },
    Pixel { px: f64, py: f64, depth: f64 },
}

#[derive(Debug, Deserialize)]
struct MarkerRecord {
    #[allow(dead_code)]
    #[serde(default)]
    id: Option<Value>,
    position: Point3,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CornerFile {
    #[serde(default)]
    intrinsics: Option<CameraIntrinsics>,
    #[serde(default)]
    corners: Option<Vec<CornerRecord>>,
    #[serde(default)]
    markers: Option<Vec<MarkerRecord>>,
}

/// Corners from a corner file: `corners` as `{x,y,z}` or `{px,py,depth}`
/// (the latter needs `intrinsics`), or `markers` whose positions are used in
/// order.
pub fn read_corners(text: &str) -> CliResult<Vec<Point3>> {
    let file: CornerFile = serde_json::from_str(text).or_usage("corner file")?;
    match (file.corners, file.markers) {
        (Some(corners), None) => corners
            .into_iter()
            .enumerate()
            .map(|(i, c)| match c {
                CornerRecord::Point { x, y, z } => Ok(Point3::new(x, y, z)),
                CornerRecord::Pixel { px, py, depth } => {
                    let intr = file
                        .intrinsics
                        .as_ref()
                        .ok_or_else(|| CliError::usage(format!("corner {i}: pixel corner needs intrinsics")))?;
                    deproject(px, py, depth, intr).or_usage(format!("corner {i}"))
                }
            })
            .collect(),
        (None, Some(markers)) => Ok(markers.into_iter().map(|m| m.position).collect()),
        (Some(_), Some(_)) => Err(CliError::usage("corner file has both corners and markers")),
        (None, None) => Err(CliError::usage("corner file needs corners or markers")),
    }
}

pub fn define_plane(
    corners: &[Point3],
    opts: &PlaneOptions,
    origin_corner: usize,
    x_corner: usize,
) -> CliResult<PlaneFile> {
    let named = |ctx: &str, e: GeometryError| CliError::Usage(anyhow::Error::new(e.clone()).context(format!("{ctx} ({})", e.name())));
    let plane = plane_from_corners(corners, opts).map_err(|e| named("invalid plane corners", e))?;
    workplane_frame(&plane, origin_corner, x_corner).map_err(|e| named("invalid frame corners", e))?;
    let residuals = corners.iter().map(|&c| plane.signed_distance(c).abs()).collect();
    Ok(PlaneFile {
        plane,
        origin_corner,
        x_corner,
        residuals,
    })
}
