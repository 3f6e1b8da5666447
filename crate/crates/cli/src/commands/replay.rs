
use gesture_pointer::snap::{SharedRegistry, StrategyKind};

use crate::args::{ReplayArgs, StrategyArg};
use crate::config::Settings;
use crate::error::{CliError, CliResult, ResultExt};
use crate::io::{lines_lossy, open_input, open_output};
use crate::session::{AutoSnap, Event, Session};

use super::{load_registry, session_config, workspace};

pub fn run(args: &ReplayArgs, settings: &Settings) -> CliResult<()> {
    let ws = workspace(settings)?;
    let auto = args.snap.map(|s| AutoSnap {
        strategy: match s {
            StrategyArg::Pick => StrategyKind::Pick,
            StrategyArg::Place => StrategyKind::Place,
        },
        group: args.group.clone(),
    });
    let registry = match &auto {
        Some(a) => {
            let reg = load_registry(settings)?;
            let empty = match a.strategy {
                StrategyKind::Pick => reg.list_targets().is_empty(),
                StrategyKind::Place => reg.list_areas().is_empty(),
            };
            if empty {
                return Err(CliError::usage(format!("registry has nothing to {} snap to", a.strategy)));
            }
            reg
        }
        None => Default::default(),
    };
    let input = open_input(&args.stream)?;
    let mut out = open_output(args.output.as_deref())?;
    let mut session = Session::new(ws, session_config(settings, auto), SharedRegistry::new(registry));

    for line in lines_lossy(input) {
        let line = line.or_runtime("reading stream")?;
        for event in session.feed(&line) {
            match event {
                Event::Line(l) => out.line(&l).or_runtime("writing output")?,
                Event::Warning { message, .. } => eprintln!("warning: {message}"),
            }
        }
    }
    out.flush().or_runtime("writing output")?;
    let s = session.stats();
    eprintln!(
        "replayed {} frames: {} points, {} snaps, {} warnings ({} malformed, {} without arm ray, {} out of order)",
        s.frames,
        s.points,
        s.snaps,
        s.warnings(),
        s.malformed,
        s.no_ray,
        s.non_monotonic
    );
    Ok(())
}
