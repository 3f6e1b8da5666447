//! Target selection over stabilized gesture points.
//!
//! Both strategies first require the last N samples to be stable (every
//! sample strictly within the threshold of their mean). Pick then selects the
//! nearest target; place selects the area containing the mean, falling back
//! to the nearest area center when the mean lies outside every area.

mod gate;
mod registry;
mod strategy;

pub use gate::{stability_gate, Gate, STABILITY_THRESHOLD};
pub use registry::{Area, Registry, SharedRegistry, Target};
pub use strategy::{
    pick_snap, place_snap, NoSelection, PickStrategy, PlaceStrategy, SnapConfig, SnapOutcome,
    SnapRequest, SnapResult, SnapStrategy, StrategyKind, SNAP_SAMPLES,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SnapError {
    #[error("no samples")]
    EmptySamples,
    #[error("expected {expected} samples, got {got}")]
    SampleCount { expected: usize, got: usize },
    #[error("no selectable targets")]
    EmptyRegistry,
    #[error("no areas defined")]
    EmptyAreas,
    #[error("duplicate id {0:?}")]
    DuplicateId(String),
    #[error("unknown id {0:?}")]
    UnknownId(String),
    #[error("invalid area {0:?}: half extents must be positive")]
    InvalidArea(String),
    #[error("malformed registry file: {0}")]
    MalformedFile(String),
}
