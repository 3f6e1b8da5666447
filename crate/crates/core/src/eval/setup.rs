use crate::geometry::{
    plane_from_corners, GeometryError, PlanarPoint, PlaneOptions, Point3, RigidMotion, Vec3,
};
use crate::pipeline::Workspace;
use crate::stream::Hand;

use super::board::{BOARD_DEPTH, BOARD_WIDTH};

/// Default shoulder-to-wrist distance of the simulated arm.
pub const ARM_LENGTH: f64 = 0.55;

/// A seated user in front of the board, all in one Cartesian frame.
///
/// The standard setup puts the board on the `z = 0` table plane with corner 0
/// at the origin, u along +x and v along +y. The user sits on the near
/// (`v < 0`) edge with shoulders 60 cm above the table.
#[derive(Debug, Clone)]
pub struct DeskSetup {
    pub workspace: Workspace,
    pub right_shoulder: Point3,
    pub left_shoulder: Point3,
    pub arm_length: f64,
}

impl DeskSetup {
    pub fn standard() -> Self {
        let corners = [
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(BOARD_WIDTH, 0.0, 0.0),
            Point3::new(BOARD_WIDTH, BOARD_DEPTH, 0.0),
            Point3::new(0.0, BOARD_DEPTH, 0.0),
        ];
        let plane = plane_from_corners(&corners, &PlaneOptions::default()).expect("table corners are valid");
        Self {
            workspace: Workspace::new(plane, 0, 1).expect("corners 0 and 1 are adjacent"),
            right_shoulder: Point3::new(0.58, -0.20, 0.60),
            left_shoulder: Point3::new(0.22, -0.20, 0.60),
            arm_length: ARM_LENGTH,
        }
    }

    /// World-to-camera motion of the standard RGB-D camera: mounted across
    /// the board from the user, looking down at it, OpenCV axes (x right, y
    /// down, z forward).
    pub fn standard_camera() -> RigidMotion {
        let eye = Point3::new(0.40, 1.20, 0.90);
        let look = Point3::new(0.40, 0.00, 0.30);
        let forward = (look - eye).normalized().expect("eye differs from look-at point");
        let right = forward.cross(Vec3::Z).normalized().expect("camera is not looking straight down");
        let down = forward.cross(right);
        // Columns are the camera axes in world coordinates: camera-to-world.
        RigidMotion::from_columns(right, down, forward, eye - Point3::ORIGIN).inverse()
    }

    /// The same physical setup expressed in another frame. The workplane
    /// frame is rebuilt from the moved corners, so planar coordinates are
    /// unchanged.
    pub fn transformed(&self, motion: &RigidMotion) -> Result<Self, GeometryError> {
        let corners: Vec<Point3> = self.workspace.plane().corners().iter().map(|&c| motion.apply(c)).collect();
        let opts = PlaneOptions {
            orientation: crate::geometry::Orientation::Along(motion.apply_vec(self.workspace.plane().normal())),
            ..PlaneOptions::default()
        };
        let plane = plane_from_corners(&corners, &opts)?;
        Ok(Self {
            workspace: Workspace::new(plane, 0, 1)?,
            right_shoulder: motion.apply(self.right_shoulder),
            left_shoulder: motion.apply(self.left_shoulder),
            arm_length: self.arm_length,
        })
    }

    pub fn shoulder(&self, hand: Hand) -> Point3 {
        match hand {
            Hand::Right => self.right_shoulder,
            Hand::Left => self.left_shoulder,
        }
    }

    /// The 3D point of a workplane location.
    pub fn world_point(&self, p: &PlanarPoint) -> Point3 {
        self.workspace.frame().from_workplane(PlanarPoint::new(p.u, p.v))
    }
}

impl Default for DeskSetup {
    fn default() -> Self {
        Self::standard()
    }
}
