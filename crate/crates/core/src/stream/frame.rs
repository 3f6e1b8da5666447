use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::geometry::Point3;

use super::MIN_CONFIDENCE;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hand {
    Left,
    Right,
}

impl Hand {
    pub const BOTH: [Hand; 2] = [Hand::Left, Hand::Right];

    pub fn as_str(self) -> &'static str {
        match self {
            Hand::Left => "left",
            Hand::Right => "right",
        }
    }
}

impl fmt::Display for Hand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Hand {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "left" => Ok(Hand::Left),
            "right" => Ok(Hand::Right),
            _ => Err(format!("unknown hand {s:?}")),
        }
    }
}

/// Which joint starts the pointing ray; the wrist is always the second point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JointPair {
    #[default]
    ShoulderWrist,
    ElbowWrist,
}

impl FromStr for JointPair {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "shoulder-wrist" | "shoulder_wrist" => Ok(JointPair::ShoulderWrist),
            "elbow-wrist" | "elbow_wrist" => Ok(JointPair::ElbowWrist),
            _ => Err(format!("unknown joint pair {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JointId {
    LeftShoulder,
    RightShoulder,
    LeftElbow,
    RightElbow,
    LeftWrist,
    RightWrist,
}

impl JointId {
    pub const ALL: [JointId; 6] = [
        JointId::LeftShoulder,
        JointId::RightShoulder,
        JointId::LeftElbow,
        JointId::RightElbow,
        JointId::LeftWrist,
        JointId::RightWrist,
    ];

    pub fn name(self) -> &'static str {
        match self {
            JointId::LeftShoulder => "left_shoulder",
            JointId::RightShoulder => "right_shoulder",
            JointId::LeftElbow => "left_elbow",
            JointId::RightElbow => "right_elbow",
            JointId::LeftWrist => "left_wrist",
            JointId::RightWrist => "right_wrist",
        }
    }

    pub fn from_name(name: &str) -> Option<JointId> {
        JointId::ALL.into_iter().find(|j| j.name() == name)
    }

    pub fn shoulder(hand: Hand) -> JointId {
        match hand {
            Hand::Left => JointId::LeftShoulder,
            Hand::Right => JointId::RightShoulder,
        }
    }

    pub fn elbow(hand: Hand) -> JointId {
        match hand {
            Hand::Left => JointId::LeftElbow,
            Hand::Right => JointId::RightElbow,
        }
    }

    pub fn wrist(hand: Hand) -> JointId {
        match hand {
            Hand::Left => JointId::LeftWrist,
            Hand::Right => JointId::RightWrist,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Joint {
    pub position: Point3,
    pub confidence: f64,
}

/// One timestamped skeleton observation in the camera frame.
#[derive(Debug, Clone, PartialEq)]
pub struct KeypointFrame {
    pub timestamp: f64,
    pub source_id: String,
    pub joints: BTreeMap<JointId, Joint>,
}

impl KeypointFrame {
    pub fn new(timestamp: f64, source_id: impl Into<String>) -> Self {
        Self {
            timestamp,
            source_id: source_id.into(),
            joints: BTreeMap::new(),
        }
    }

    pub fn with_joint(mut self, id: JointId, position: Point3, confidence: f64) -> Self {
        self.joints.insert(
            id,
            Joint {
                position,
                confidence,
            },
        );
        self
    }

    pub fn joint(&self, id: JointId) -> Option<&Joint> {
        self.joints.get(&id)
    }
}

/// A candidate pointing ray extracted from one frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArmRay {
    pub hand: Hand,
    pub pair: JointPair,
    pub start: Point3,
    pub through: Point3,
}

/// Minimum start-to-wrist separation for a usable ray.
pub const MIN_RAY_SEPARATION: f64 = 0.01;

/// Extract the ray for `hand` if both joints are present, confident enough
/// and at least a centimeter apart.
pub fn arm_ray(
    frame: &KeypointFrame,
    hand: Hand,
    pair: JointPair,
    min_confidence: f64,
) -> Option<ArmRay> {
    let start_id = match pair {
        JointPair::ShoulderWrist => JointId::shoulder(hand),
        JointPair::ElbowWrist => JointId::elbow(hand),
    };
    let start = frame.joint(start_id)?;
    let wrist = frame.joint(JointId::wrist(hand))?;
    if start.confidence < min_confidence || wrist.confidence < min_confidence {
        return None;
    }
    if !(wrist.position.distance(start.position) > MIN_RAY_SEPARATION) {
        return None;
    }
    Some(ArmRay {
        hand,
        pair,
        start: start.position,
        through: wrist.position,
    })
}

/// `arm_ray` with the default confidence threshold.
pub fn default_arm_ray(frame: &KeypointFrame, hand: Hand, pair: JointPair) -> Option<ArmRay> {
    arm_ray(frame, hand, pair, MIN_CONFIDENCE)
}
