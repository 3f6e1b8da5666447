use serde::Serialize;

use gesture_pointer::eval::{calibrate_sigma, simulated_mean_error};

use crate::args::CalibrateArgs;
use crate::config::Settings;
use crate::error::CliResult;

use super::sweep::{calibration_config, eval_error, single_hand};

#[derive(Serialize)]
struct Calibration {
    hand: &'static str,
    target_error_m: f64,
    sigma_m: f64,
    achieved_error_m: Option<f64>,
    samples: usize,
    seed: u64,
}

pub fn run(args: &CalibrateArgs, settings: &Settings) -> CliResult<()> {
    let hand = single_hand(settings)?;
    let cfg = calibration_config(hand, settings, args.samples, args.tolerance)?;
    let sigma = calibrate_sigma(args.target_error, &cfg).map_err(eval_error)?;
    let achieved = simulated_mean_error(sigma, &cfg).map_err(eval_error)?;
    let line = Calibration {
        hand: hand.as_str(),
        target_error_m: args.target_error,
        sigma_m: sigma,
        achieved_error_m: achieved,
        samples: args.samples,
        seed: settings.seed,
    };
    println!("{}", serde_json::to_string(&line).expect("serialization is infallible"));
    Ok(())
}
