use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "gesture-pointer", version, about = "Pointing-gesture localisation on a planar workspace")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand. Unset flags fall back to the file named
/// by `GESTURE_POINTER_CONFIG`, then to built-in defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct GlobalArgs {
    /// Plane file written by `define-plane`.
    #[arg(long, global = true, value_name = "FILE")]
    pub plane: Option<PathBuf>,
    /// Coordinates of emitted points.
    #[arg(long, global = true, value_enum)]
    pub frame: Option<FrameArg>,
    #[arg(long, global = true, value_enum)]
    pub hand: Option<HandArg>,
    /// Joints defining the arm ray.
    #[arg(long, global = true, value_enum)]
    pub pair: Option<PairArg>,
    /// Samples per snap.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Stability threshold in meters.
    #[arg(long, global = true)]
    pub threshold: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory for reports.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Joints below this confidence are ignored.
    #[arg(long, global = true)]
    pub min_confidence: Option<f64>,
    /// Target/area registry file.
    #[arg(long, global = true, value_name = "FILE")]
    pub registry: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrameArg {
    Workplane,
    Camera,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HandArg {
    Left,
    Right,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairArg {
    #[serde(alias = "shoulder_wrist")]
    ShoulderWrist,
    #[serde(alias = "elbow_wrist")]
    ElbowWrist,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Pick,
    Place,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKindArg {
    Pick,
    Place,
    Quantitative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoardArg {
    #[value(name = "quantitative_10")]
    Quantitative10,
    #[value(name = "pick_square")]
    PickSquare,
    #[value(name = "place_areas")]
    PlaceAreas,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a plane file from three or four corners.
    DefinePlane(DefinePlaneArgs),
    /// Write a synthetic keypoint stream for a scenario file.
    Generate(GenerateArgs),
    /// Run a recorded stream through the pipeline.
    Replay(ReplayArgs),
    /// Serve the line protocol on stdio or TCP.
    Live(LiveArgs),
    /// Monte-Carlo pick/place/accuracy sweep with CSV and JSON reports.
    Sweep(SweepArgs),
    /// Find the joint noise that yields a given mean intersection error.
    Calibrate(CalibrateArgs),
    /// Edit a target/area registry file.
    Registry(RegistryArgs),
}

#[derive(Debug, Args)]
pub struct DefinePlaneArgs {
    /// Corner file: `corners` as 3D points or pixel+depth (with `intrinsics`), or `markers` poses.
    pub input: PathBuf,
    /// Point the normal faces, as `x,y,z`. Defaults to the camera origin.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true, conflicts_with = "up")]
    pub viewpoint: Option<[f64; 3]>,
    /// Orient the normal along +z instead of toward a viewpoint.
    #[arg(long)]
    pub up: bool,
    /// Corner index of the workplane origin.
    #[arg(long, default_value_t = 0)]
    pub origin: usize,
    /// Adjacent corner the workplane x axis points to.
    #[arg(long, default_value_t = 1)]
    pub x_corner: usize,
    #[arg(short, long, value_name = "FILE")]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Scenario TOML file.
    pub scenario: PathBuf,
    /// Stream file to write; stdout if omitted.
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    /// Stream file, or `-` for stdin.
    pub stream: PathBuf,
    /// Attempt a snap after every N accepted points.
    #[arg(long, value_enum)]
    pub snap: Option<StrategyArg>,
    /// Restrict pick snaps to one target group.
    #[arg(long)]
    pub group: Option<String>,
    /// Output file; stdout if omitted.
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LiveArgs {
    /// `stdio` or `tcp:HOST:PORT`.
    #[arg(long, default_value = "stdio")]
    pub listen: String,
    /// Exit once this many TCP connections have closed.
    #[arg(long, value_name = "N")]
    pub max_connections: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub kind: SweepKindArg,
    /// Joint noise standard deviation in meters.
    #[arg(long, conflicts_with = "calibrate")]
    pub sigma: Option<f64>,
    /// Calibrate sigma to this mean intersection error first.
    #[arg(long, value_name = "METERS")]
    pub calibrate: Option<f64>,
    /// Side distances (pick) or area sizes (place), comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub l: Vec<f64>,
    #[arg(long, default_value_t = gesture_pointer::eval::TRIALS_PER_TARGET)]
    pub trials: usize,
    #[arg(long, default_value_t = gesture_pointer::eval::FRAMES_PER_TRIAL)]
    pub frames: usize,
    /// Share of noise variance held fixed over a gesture.
    #[arg(long, default_value_t = gesture_pointer::eval::DEFAULT_PERSISTENCE)]
    pub persistence: f64,
    /// Board file for the accuracy sweep (default: built-in quantitative_10).
    #[arg(long, value_name = "FILE")]
    pub board: Option<PathBuf>,
    /// Samples per calibration evaluation.
    #[arg(long, default_value_t = 10_000)]
    pub calibration_samples: usize,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    /// Target mean intersection error in meters.
    pub target_error: f64,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// Relative tolerance on the achieved error.
    #[arg(long, default_value_t = 0.02)]
    pub tolerance: f64,
}

#[derive(Debug, Args)]
pub struct RegistryArgs {
    #[command(subcommand)]
    pub action: RegistryAction,
}

#[derive(Debug, Subcommand)]
pub enum RegistryAction {
    /// Print targets and areas.
    List,
    AddTarget {
        id: String,
        #[arg(allow_hyphen_values = true)]
        u: f64,
        #[arg(allow_hyphen_values = true)]
        v: f64,
        #[arg(long)]
        label: Option<String>,
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        side: Option<String>,
    },
    AddArea {
        id: String,
        #[arg(allow_hyphen_values = true)]
        cu: f64,
        #[arg(allow_hyphen_values = true)]
        cv: f64,
        hu: f64,
        hv: f64,
    },
    /// Remove a target or area by id.
    Remove { id: String },
    /// Overwrite the registry with a standard board layout.
    Board {
        #[arg(value_enum)]
        kind: BoardArg,
        #[arg(long)]
        l: Option<f64>,
    },
}

fn parse_point(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected x,y,z, got {s:?}"));
    }
    let mut out = [0.0; 3];
    for (o, p) in out.iter_mut().zip(parts) {
        let x: f64 = p.trim().parse().map_err(|e| format!("{p:?}: {e}"))?;
        if !x.is_finite() {
            return Err(format!("{p:?} is not finite"));
        }
        *o = x;
    }
    Ok(out)
}
