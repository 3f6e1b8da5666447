use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::geometry::{Plane, Point3, Vec3, PLANARITY_TOLERANCE};

use super::{Hand, JointId, KeypointFrame, StreamError, MIN_RAY_SEPARATION};

pub const DEFAULT_FRAME_RATE: f64 = 30.0;
/// Confidence attached to every synthetic joint.
pub const SYNTHETIC_CONFIDENCE: f64 = 0.95;

/// A synthetic pointing gesture: one arm held still, aimed at `target`.
///
/// Joint noise is Gaussian per axis with total standard deviation
/// `noise_sigma`. A `persistence` fraction of the variance is drawn once per
/// gesture and shared by all its frames (a steady aiming offset); the rest is
/// fresh jitter each frame. `persistence = 0` makes frames independent.
#[derive(Debug, Clone, PartialEq)]
pub struct GestureScenario {
    pub plane: Plane,
    pub shoulder_base: Point3,
    pub target: Point3,
    pub noise_sigma: f64,
    pub persistence: f64,
    pub arm_length: f64,
    pub sample_count: usize,
    pub rng_seed: u64,
    pub hand: Hand,
    pub frame_rate: f64,
    pub source_id: String,
}

impl GestureScenario {
    pub fn new(plane: Plane, shoulder_base: Point3, target: Point3, arm_length: f64) -> Self {
        Self {
            plane,
            shoulder_base,
            target,
            noise_sigma: 0.0,
            persistence: 0.0,
            arm_length,
            sample_count: 1,
            rng_seed: 0,
            hand: Hand::Right,
            frame_rate: DEFAULT_FRAME_RATE,
            source_id: "synthetic".to_string(),
        }
    }

    pub fn validate(&self) -> Result<(), StreamError> {
        let invalid = |m: &str| Err(StreamError::InvalidScenario(m.to_string()));
        if !self.shoulder_base.is_finite() || !self.target.is_finite() {
            return invalid("positions must be finite");
        }
        if self.plane.signed_distance(self.target).abs() > PLANARITY_TOLERANCE {
            return invalid("target is not on the plane");
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return invalid("noise_sigma must be a non-negative number");
        }
        if !(0.0..=1.0).contains(&self.persistence) {
            return invalid("persistence must lie in [0, 1]");
        }
        if self.sample_count == 0 {
            return invalid("sample_count must be at least 1");
        }
        if !(self.frame_rate > 0.0 && self.frame_rate.is_finite()) {
            return invalid("frame_rate must be positive");
        }
        if !(self.arm_length > MIN_RAY_SEPARATION && self.arm_length.is_finite()) {
            return invalid("arm_length must exceed 1 cm");
        }
        let reach = self.target.distance(self.shoulder_base);
        if self.arm_length >= reach {
            return Err(StreamError::TargetUnreachable {
                arm_length: self.arm_length,
                distance: reach,
            });
        }
        Ok(())
    }

    /// The noiseless wrist: on the shoulder-target segment, `arm_length` from the shoulder.
    pub fn ideal_wrist(&self) -> Point3 {
        let dir = (self.target - self.shoulder_base) * (1.0 / self.target.distance(self.shoulder_base));
        self.shoulder_base + dir * self.arm_length
    }
}

/// Deterministic frame iterator for a scenario.
#[derive(Debug, Clone)]
pub struct ScenarioStream {
    shoulder: Point3,
    elbow: Point3,
    wrist: Point3,
    bias: [Vec3; 3],
    jitter_scale: f64,
    hand: Hand,
    source_id: String,
    frame_rate: f64,
    rng: ChaCha8Rng,
    index: usize,
    count: usize,
}

fn gaussian(rng: &mut ChaCha8Rng) -> Vec3 {
    Vec3::new(
        StandardNormal.sample(rng),
        StandardNormal.sample(rng),
        StandardNormal.sample(rng),
    )
}

/// Frames with `sample_count` noisy observations of the scenario's arm, at a
/// fixed `1 / frame_rate` step starting from `t = 0`.
pub fn generate_scenario(s: &GestureScenario) -> Result<ScenarioStream, StreamError> {
    s.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(s.rng_seed);
    let bias_scale = s.noise_sigma * s.persistence.sqrt();
    let bias = [gaussian(&mut rng), gaussian(&mut rng), gaussian(&mut rng)].map(|b| b * bias_scale);
    let wrist = s.ideal_wrist();
    let elbow = s.shoulder_base + (wrist - s.shoulder_base) * 0.5;
    Ok(ScenarioStream {
        shoulder: s.shoulder_base,
        elbow,
        wrist,
        bias,
        jitter_scale: s.noise_sigma * (1.0 - s.persistence).sqrt(),
        hand: s.hand,
        source_id: s.source_id.clone(),
        frame_rate: s.frame_rate,
        rng,
        index: 0,
        count: s.sample_count,
    })
}

impl Iterator for ScenarioStream {
    type Item = KeypointFrame;

    fn next(&mut self) -> Option<KeypointFrame> {
        if self.index >= self.count {
            return None;
        }
        let t = self.index as f64 / self.frame_rate;
        self.index += 1;
        let shoulder = self.shoulder + self.bias[0] + gaussian(&mut self.rng) * self.jitter_scale;
        let elbow = self.elbow + self.bias[1] + gaussian(&mut self.rng) * self.jitter_scale;
        let wrist = self.wrist + self.bias[2] + gaussian(&mut self.rng) * self.jitter_scale;
        Some(
            KeypointFrame::new(t, self.source_id.clone())
                .with_joint(JointId::shoulder(self.hand), shoulder, SYNTHETIC_CONFIDENCE)
                .with_joint(JointId::elbow(self.hand), elbow, SYNTHETIC_CONFIDENCE)
                .with_joint(JointId::wrist(self.hand), wrist, SYNTHETIC_CONFIDENCE),
        )
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.count - self.index;
        (n, Some(n))
    }
}

impl ExactSizeIterator for ScenarioStream {}
