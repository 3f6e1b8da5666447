//! Frame-to-gesture-point wiring shared by the replay tools and the
//! evaluation harness: arm ray → plane intersection → workplane → stabilizer.

use std::str::FromStr;

use crate::geometry::{
    intersect_ray_plane, workplane_frame, GeometryError, PlanarPoint, Plane, Point3, RayOptions,
    WorkplaneFrame, WorkspaceBounds,
};
use crate::stabilizer::{GesturePoint, Stabilizer};
use crate::stream::{arm_ray, Hand, JointPair, KeypointFrame, MIN_CONFIDENCE};

/// A plane together with its workplane frame and projected outline.
#[derive(Debug, Clone)]
pub struct Workspace {
    plane: Plane,
    frame: WorkplaneFrame,
    bounds: WorkspaceBounds,
}

impl Workspace {
    pub fn new(plane: Plane, origin_corner: usize, x_corner: usize) -> Result<Self, GeometryError> {
        let frame = workplane_frame(&plane, origin_corner, x_corner)?;
        Ok(Self::with_frame(plane, frame))
    }

    pub fn with_frame(plane: Plane, frame: WorkplaneFrame) -> Self {
        let bounds = WorkspaceBounds::from_plane(&plane, &frame);
        Self { plane, frame, bounds }
    }

    pub fn plane(&self) -> &Plane {
        &self.plane
    }

    pub fn frame(&self) -> &WorkplaneFrame {
        &self.frame
    }

    pub fn bounds(&self) -> &WorkspaceBounds {
        &self.bounds
    }

    /// Intersection of the `start → through` ray in workplane coordinates.
    pub fn locate(&self, start: Point3, through: Point3, opts: &RayOptions) -> Result<PlanarPoint, GeometryError> {
        let hit = intersect_ray_plane(start, through, &self.plane, opts)?;
        Ok(self.frame.to_workplane(hit.point))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HandSelection {
    Left,
    #[default]
    Right,
    Both,
}

impl HandSelection {
    pub fn hands(self) -> &'static [Hand] {
        match self {
            HandSelection::Left => &[Hand::Left],
            HandSelection::Right => &[Hand::Right],
            HandSelection::Both => &Hand::BOTH,
        }
    }
}

impl From<Hand> for HandSelection {
    fn from(h: Hand) -> Self {
        match h {
            Hand::Left => HandSelection::Left,
            Hand::Right => HandSelection::Right,
        }
    }
}

impl FromStr for HandSelection {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "left" => Ok(HandSelection::Left),
            "right" => Ok(HandSelection::Right),
            "both" => Ok(HandSelection::Both),
            _ => Err(format!("unknown hand selection {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    pub hands: HandSelection,
    pub pair: JointPair,
    pub min_confidence: f64,
    pub ray: RayOptions,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            hands: HandSelection::Right,
            pair: JointPair::ShoulderWrist,
            min_confidence: MIN_CONFIDENCE,
            ray: RayOptions::default(),
        }
    }
}

/// What one frame produced.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FrameOutput {
    pub points: Vec<GesturePoint>,
    /// Selected hands with a usable arm ray in this frame.
    pub rays: usize,
    /// Rays that missed the plane or landed outside the workspace.
    pub discarded: usize,
}

/// Stateful per-session pipeline. Hands never share buffers.
#[derive(Debug, Clone)]
pub struct Pipeline {
    workspace: Workspace,
    config: PipelineConfig,
    stabilizer: Stabilizer,
}

impl Pipeline {
    pub fn new(workspace: Workspace, config: PipelineConfig) -> Self {
        let stabilizer = Stabilizer::new(*workspace.bounds());
        Self {
            workspace,
            config,
            stabilizer,
        }
    }

    pub fn workspace(&self) -> &Workspace {
        &self.workspace
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.config
    }

    pub fn process(&mut self, frame: &KeypointFrame) -> FrameOutput {
        let mut out = FrameOutput::default();
        for &hand in self.config.hands.hands() {
            let Some(ray) = arm_ray(frame, hand, self.config.pair, self.config.min_confidence) else {
                continue;
            };
            out.rays += 1;
            let point = match self.workspace.locate(ray.start, ray.through, &self.config.ray) {
                Ok(p) => p,
                Err(_) => {
                    out.discarded += 1;
                    continue;
                }
            };
            match self.stabilizer.push(point, frame.timestamp, hand) {
                Some(g) => out.points.push(g),
                None => out.discarded += 1,
            }
        }
        out
    }

    pub fn reset(&mut self) {
        self.stabilizer.reset_all();
    }
}
