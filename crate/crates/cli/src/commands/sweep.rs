use std::path::Path;

use gesture_pointer::eval::{
    calibrate_sigma, load_board, make_board, render, run_pick_sweep, run_place_sweep, run_quantitative,
    BoardKind, CalibrationConfig, DeskSetup, EvalError, ReportFormat, SweepConfig, SweepReport, PICK_SERIES,
    PLACE_SERIES,
};
use gesture_pointer::pipeline::HandSelection;
use gesture_pointer::snap::SnapConfig;
use gesture_pointer::stream::Hand;

use crate::args::{SweepArgs, SweepKindArg};
use crate::config::Settings;
use crate::error::{CliError, CliResult, ResultExt};
use crate::io::write_atomic;

/// Invalid parameters are the caller's fault; anything else is a runtime failure.
pub fn eval_error(e: EvalError) -> CliError {
    match e {
        EvalError::InvalidParameters(_) | EvalError::UnsupportedFormat(_) => CliError::Usage(e.into()),
        other => CliError::Runtime(other.into()),
    }
}

pub fn single_hand(settings: &Settings) -> CliResult<Hand> {
    match settings.hands {
        HandSelection::Left => Ok(Hand::Left),
        HandSelection::Right => Ok(Hand::Right),
        HandSelection::Both => Err(CliError::usage("simulation runs one hand at a time; use --hand left or right")),
    }
}

pub fn calibration_config(hand: Hand, settings: &Settings, samples: usize, tolerance: f64) -> CliResult<CalibrationConfig> {
    if samples == 0 {
        return Err(CliError::usage("calibration needs at least one sample"));
    }
    if !(tolerance > 0.0 && tolerance < 1.0) {
        return Err(CliError::usage("calibration tolerance must lie in (0, 1)"));
    }
    let mut cfg = CalibrationConfig::standard(hand, settings.seed);
    cfg.pair = settings.pair;
    cfg.samples = samples;
    cfg.tolerance = tolerance;
    Ok(cfg)
}

fn write_reports(report: &SweepReport, dir: &Path) -> CliResult<String> {
    std::fs::create_dir_all(dir).or_usage(format!("creating {}", dir.display()))?;
    let mut csv = String::new();
    for format in [ReportFormat::Csv, ReportFormat::Json] {
        let body = render(report, format);
        let path = dir.join(format!("{}.{}", report.kind.as_str(), format.extension()));
        write_atomic(&path, body.as_bytes()).or_runtime(format!("writing {}", path.display()))?;
        eprintln!("wrote {}", path.display());
        if format == ReportFormat::Csv {
            csv = body;
        }
    }
    Ok(csv)
}

pub fn run(args: &SweepArgs, settings: &Settings) -> CliResult<()> {
    let hand = single_hand(settings)?;
    let sigma = match (args.sigma, args.calibrate) {
        (_, Some(target)) => {
            let cfg = calibration_config(hand, settings, args.calibration_samples, 0.02)?;
            let sigma = calibrate_sigma(target, &cfg).map_err(eval_error)?;
            eprintln!("calibrated sigma {sigma:.6} m for mean error {target} m");
            sigma
        }
        (Some(s), None) => s,
        (None, None) => 0.0,
    };
    if args.trials == 0 {
        return Err(CliError::usage("--trials must be positive"));
    }
    let cfg = SweepConfig {
        setup: DeskSetup::standard(),
        hand,
        pair: settings.pair,
        sigma,
        persistence: args.persistence,
        trials_per_target: args.trials,
        frames_per_trial: args.frames,
        snap: SnapConfig {
            samples: settings.n,
            threshold: settings.threshold,
            max_distance: None,
        },
        seed: settings.seed,
    };
    let report = match args.kind {
        SweepKindArg::Pick => {
            let ls = if args.l.is_empty() { PICK_SERIES.to_vec() } else { args.l.clone() };
            run_pick_sweep(&ls, &cfg)
        }
        SweepKindArg::Place => {
            let ls = if args.l.is_empty() { PLACE_SERIES.to_vec() } else { args.l.clone() };
            run_place_sweep(&ls, &cfg)
        }
        SweepKindArg::Quantitative => {
            if !args.l.is_empty() {
                return Err(CliError::usage("--l does not apply to the accuracy sweep"));
            }
            let board = match &args.board {
                Some(p) => {
                    let text = std::fs::read_to_string(p).or_usage(format!("reading {}", p.display()))?;
                    load_board(&text).map_err(eval_error)?
                }
                None => make_board(BoardKind::Quantitative10, None).map_err(eval_error)?,
            };
            run_quantitative(&board, &cfg)
        }
    }
    .map_err(eval_error)?;
    let csv = write_reports(&report, &settings.out)?;
    print!("{csv}");
    Ok(())
}
