//! Desk-scale evaluation harness: board layouts, error metrics, seeded
//! Monte-Carlo pick/place sweeps over the synthetic generator, noise
//! calibration, and report emission.
//!
//! Everything here is synthetic. Human pointing biomechanics are reduced to
//! Gaussian joint noise with a persistent per-gesture component.

mod board;
mod metrics;
mod report;
mod setup;
mod sweep;

pub use board::{
    load_board, make_board, BoardKind, BoardLayout, BOARD_DEPTH, BOARD_WIDTH, PICK_SERIES, PLACE_SERIES,
};
pub use metrics::{
    euclidean_error, euclidean_error_slices, ground_truth, mean_std, Coordinates, GROUND_TRUTH_SAMPLES,
};
pub use report::{emit_report, render, ReportFormat, CSV_HEADER};
pub use setup::{DeskSetup, ARM_LENGTH};
pub use sweep::{
    calibrate_sigma, derive_seed, pick_series, place_series, run_pick_sweep, run_place_sweep, run_quantitative,
    simulated_mean_error, CalibrationConfig, CellSummary, SweepConfig, SweepKind, SweepReport, TrialResult,
    DEFAULT_PERSISTENCE, FRAMES_PER_TRIAL, TRIALS_PER_TARGET,
};

use thiserror::Error;

use crate::geometry::GeometryError;
use crate::snap::SnapError;
use crate::stream::StreamError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("calibration did not converge after {iterations} iterations (last sigma {sigma}, error {error})")]
    NonConvergence { iterations: usize, sigma: f64, error: f64 },
    #[error("unsupported report format {0:?}")]
    UnsupportedFormat(String),
    #[error(transparent)]
    Stream(#[from] StreamError),
    #[error(transparent)]
    Snap(#[from] SnapError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
