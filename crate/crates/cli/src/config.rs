use std::path::{Path, PathBuf};

use serde::Deserialize;

use gesture_pointer::pipeline::HandSelection;
use gesture_pointer::snap::{SNAP_SAMPLES, STABILITY_THRESHOLD};
use gesture_pointer::stream::{JointPair, MIN_CONFIDENCE};

use crate::args::{FrameArg, GlobalArgs, HandArg, PairArg};
use crate::error::{CliError, CliResult};

pub const CONFIG_ENV: &str = "GESTURE_POINTER_CONFIG";

/// Contents of the optional defaults file. Keys mirror the global flags.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub plane: Option<PathBuf>,
    pub frame: Option<FrameArg>,
    pub hand: Option<HandArg>,
    pub pair: Option<PairArg>,
    pub n: Option<usize>,
    pub threshold: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub min_confidence: Option<f64>,
    pub registry: Option<PathBuf>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("config file {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::usage(format!("config file {}: {e}", path.display())))
    }

    /// The file named by the environment, if any.
    pub fn from_env() -> CliResult<Self> {
        match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
            _ => Ok(Self::default()),
        }
    }
}

/// Fully resolved global settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub plane: Option<PathBuf>,
    pub frame: FrameArg,
    pub hands: HandSelection,
    pub pair: JointPair,
    pub n: usize,
    pub threshold: f64,
    pub seed: u64,
    pub out: PathBuf,
    pub min_confidence: f64,
    pub registry: Option<PathBuf>,
}

impl Settings {
    /// Flags win over the file, the file over built-in defaults.
    pub fn resolve(flags: &GlobalArgs, file: &ConfigFile) -> CliResult<Self> {
        let hands = match flags.hand.or(file.hand).unwrap_or(HandArg::Right) {
            HandArg::Left => HandSelection::Left,
            HandArg::Right => HandSelection::Right,
            HandArg::Both => HandSelection::Both,
        };
        let pair = match flags.pair.or(file.pair).unwrap_or(PairArg::ShoulderWrist) {
            PairArg::ShoulderWrist => JointPair::ShoulderWrist,
            PairArg::ElbowWrist => JointPair::ElbowWrist,
        };
        let s = Settings {
            plane: flags.plane.clone().or_else(|| file.plane.clone()),
            frame: flags.frame.or(file.frame).unwrap_or(FrameArg::Workplane),
            hands,
            pair,
            n: flags.n.or(file.n).unwrap_or(SNAP_SAMPLES),
            threshold: flags.threshold.or(file.threshold).unwrap_or(STABILITY_THRESHOLD),
            seed: flags.seed.or(file.seed).unwrap_or(0),
            out: flags.out.clone().or_else(|| file.out.clone()).unwrap_or_else(|| PathBuf::from(".")),
            min_confidence: flags.min_confidence.or(file.min_confidence).unwrap_or(MIN_CONFIDENCE),
            registry: flags.registry.clone().or_else(|| file.registry.clone()),
        };
        if s.n == 0 {
            return Err(CliError::usage("--n must be positive"));
        }
        if !(s.threshold > 0.0 && s.threshold.is_finite()) {
            return Err(CliError::usage("--threshold must be a positive number of meters"));
        }
        if !(0.0..=1.0).contains(&s.min_confidence) {
            return Err(CliError::usage("--min-confidence must lie in [0, 1]"));
        }
        Ok(s)
    }

    pub fn require_plane(&self) -> CliResult<&Path> {
        self.plane
            .as_deref()
            .ok_or_else(|| CliError::usage("a plane file is required (--plane)"))
    }

    pub fn require_registry(&self) -> CliResult<&Path> {
        self.registry
            .as_deref()
            .ok_or_else(|| CliError::usage("a registry file is required (--registry)"))
    }
}
