mod calibrate;
mod define_plane;
mod generate;
mod live;
mod registry;
mod replay;
mod sweep;

pub use generate::standard_intrinsics;

use gesture_pointer::pipeline::{PipelineConfig, Workspace};
use gesture_pointer::geometry::RayOptions;
use gesture_pointer::snap::{Registry, SnapConfig};

use crate::args::{Command, FrameArg};
use crate::config::Settings;
use crate::error::{CliError, CliResult};
use crate::planefile::PlaneFile;
use crate::session::{AutoSnap, OutputFrame, SessionConfig};

pub fn dispatch(command: &Command, settings: &Settings) -> CliResult<()> {
    match command {
        Command::DefinePlane(a) => define_plane::run(a),
        Command::Generate(a) => generate::run(a, settings),
        Command::Replay(a) => replay::run(a, settings),
        Command::Live(a) => live::run(a, settings),
        Command::Sweep(a) => sweep::run(a, settings),
        Command::Calibrate(a) => calibrate::run(a, settings),
        Command::Registry(a) => registry::run(&a.action, settings),
    }
}

fn workspace(settings: &Settings) -> CliResult<Workspace> {
    PlaneFile::load(settings.require_plane()?)?.workspace()
}

fn load_registry(settings: &Settings) -> CliResult<Registry> {
    Registry::from_file(settings.require_registry()?).map_err(|e| CliError::Usage(e.into()))
}

fn session_config(settings: &Settings, auto_snap: Option<AutoSnap>) -> SessionConfig {
    SessionConfig {
        pipeline: PipelineConfig {
            hands: settings.hands,
            pair: settings.pair,
            min_confidence: settings.min_confidence,
            ray: RayOptions::default(),
        },
        output: match settings.frame {
            FrameArg::Workplane => OutputFrame::Workplane,
            FrameArg::Camera => OutputFrame::Camera,
        },
        snap: SnapConfig {
            samples: settings.n,
            threshold: settings.threshold,
            max_distance: None,
        },
        auto_snap,
        registry_path: settings.registry.clone(),
    }
}
