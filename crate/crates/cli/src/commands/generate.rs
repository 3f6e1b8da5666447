use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use gesture_pointer::eval::DeskSetup;
use gesture_pointer::geometry::{project, CameraIntrinsics, PlanarPoint, Point3};
use gesture_pointer::stream::{frame_to_json, generate_scenario, GestureScenario, Hand, KeypointFrame};

use crate::args::GenerateArgs;
use crate::config::Settings;
use crate::error::{CliError, CliResult, ResultExt};
use crate::io::open_output;
use crate::planefile::PlaneFile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
enum View {
    #[default]
    Table,
    Camera,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
struct IntrinsicsToml {
    fx: f64,
    fy: f64,
    cx: f64,
    cy: f64,
    width: u32,
    height: u32,
}

/// Scenario TOML. Positions are meters; `target` is a workplane `[u, v]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioToml {
    target: [f64; 2],
    #[serde(default = "default_hand")]
    hand: String,
    #[serde(default = "default_frames")]
    frames: usize,
    #[serde(default)]
    sigma: f64,
    #[serde(default)]
    persistence: f64,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    arm_length: Option<f64>,
    /// Required with `--plane`; otherwise the standard desk shoulder.
    #[serde(default)]
    shoulder: Option<[f64; 3]>,
    #[serde(default)]
    frame_rate: Option<f64>,
    #[serde(default)]
    source: Option<String>,
    /// Coordinate frame of the built-in desk setup.
    #[serde(default)]
    view: View,
    /// Emit pixel+depth joints after an intrinsics header.
    #[serde(default)]
    pixel: bool,
    #[serde(default)]
    intrinsics: Option<IntrinsicsToml>,
}

fn default_hand() -> String {
    "right".into()
}

fn default_frames() -> usize {
    60
}

/// Intrinsics of the standard simulated camera.
pub fn standard_intrinsics() -> CameraIntrinsics {
    CameraIntrinsics::new(615.0, 615.0, 320.0, 240.0, 640, 480).expect("constant intrinsics are valid")
}

#[derive(Serialize)]
struct PixelJoint {
    px: f64,
    py: f64,
    depth: f64,
    c: f64,
}

#[derive(Serialize)]
struct PixelFrame<'a> {
    t: f64,
    source: &'a str,
    joints: BTreeMap<&'static str, PixelJoint>,
}

fn pixel_frame_to_json(frame: &KeypointFrame, intr: &CameraIntrinsics) -> CliResult<String> {
    let mut joints = BTreeMap::new();
    for (id, j) in &frame.joints {
        let (px, py) = project(j.position, intr).or_runtime(format!("projecting {}", id.name()))?;
        joints.insert(
            id.name(),
            PixelJoint {
                px,
                py,
                depth: j.position.z,
                c: j.confidence,
            },
        );
    }
    Ok(serde_json::to_string(&PixelFrame {
        t: frame.timestamp,
        source: &frame.source_id,
        joints,
    })
    .expect("frame serialization is infallible"))
}

pub fn run(args: &GenerateArgs, settings: &Settings) -> CliResult<()> {
    let text = std::fs::read_to_string(&args.scenario).or_usage(format!("reading {}", args.scenario.display()))?;
    let sc: ScenarioToml = toml::from_str(&text).or_usage(format!("scenario {}", args.scenario.display()))?;
    let hand: Hand = sc.hand.parse().map_err(|e| CliError::usage(format!("scenario hand: {e}")))?;

    let (workspace, default_shoulder, default_arm) = match &settings.plane {
        Some(path) => (PlaneFile::load(path)?.workspace()?, None, gesture_pointer::eval::ARM_LENGTH),
        None => {
            let mut setup = DeskSetup::standard();
            if sc.view == View::Camera {
                setup = setup
                    .transformed(&DeskSetup::standard_camera())
                    .or_runtime("camera view of the desk")?;
            }
            (setup.workspace.clone(), Some(setup.shoulder(hand)), setup.arm_length)
        }
    };
    let shoulder = match (sc.shoulder, default_shoulder) {
        (Some([x, y, z]), _) => Point3::new(x, y, z),
        (None, Some(s)) => s,
        (None, None) => return Err(CliError::usage("scenario needs `shoulder` when --plane is given")),
    };
    let target = workspace.frame().from_workplane(PlanarPoint::new(sc.target[0], sc.target[1]));
    let mut scenario = GestureScenario::new(workspace.plane().clone(), shoulder, target, sc.arm_length.unwrap_or(default_arm));
    scenario.noise_sigma = sc.sigma;
    scenario.persistence = sc.persistence;
    scenario.sample_count = sc.frames;
    scenario.rng_seed = sc.seed;
    scenario.hand = hand;
    if let Some(r) = sc.frame_rate {
        scenario.frame_rate = r;
    }
    if let Some(s) = sc.source {
        scenario.source_id = s;
    }
    let frames = generate_scenario(&scenario).or_usage("invalid scenario")?;

    let intrinsics = match (sc.pixel, sc.intrinsics) {
        (false, _) => None,
        (true, None) => Some(standard_intrinsics()),
        (true, Some(i)) => Some(CameraIntrinsics::new(i.fx, i.fy, i.cx, i.cy, i.width, i.height).or_usage("scenario intrinsics")?),
    };
    let mut out = open_output(args.output.as_deref())?;
    let write_err = |e| CliError::Runtime(anyhow::Error::new(e).context("writing stream"));
    if let Some(intr) = &intrinsics {
        out.line(&gesture_pointer::stream::header_to_json(intr)).map_err(write_err)?;
    }
    for frame in frames {
        let line = match &intrinsics {
            None => frame_to_json(&frame),
            Some(intr) => pixel_frame_to_json(&frame, intr)?,
        };
        out.line(&line).map_err(write_err)?;
    }
    out.flush().map_err(write_err)
}
