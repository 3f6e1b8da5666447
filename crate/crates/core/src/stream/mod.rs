//! Skeleton keypoint frames, JSONL ingestion, and a synthetic gesture
//! generator that stands in for the pose-estimation camera stack.

mod frame;
mod jsonl;
mod scenario;

pub use frame::{
    arm_ray, default_arm_ray, ArmRay, Hand, Joint, JointId, JointPair, KeypointFrame,
    MIN_RAY_SEPARATION,
};
pub use jsonl::{
    frame_to_json, header_to_json, parse_frame, parse_record, Parsed, Record, StreamParser,
    StreamWarning,
};
pub use scenario::{
    generate_scenario, GestureScenario, ScenarioStream, DEFAULT_FRAME_RATE, SYNTHETIC_CONFIDENCE,
};

use thiserror::Error;

/// Joints below this confidence are ignored by default.
pub const MIN_CONFIDENCE: f64 = 0.3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StreamError {
    #[error("malformed record: {0}")]
    MalformedRecord(String),
    #[error("target unreachable: arm length {arm_length:.3} m >= shoulder-target distance {distance:.3} m")]
    TargetUnreachable { arm_length: f64, distance: f64 },
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}
