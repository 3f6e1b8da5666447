//! Skeleton JSONL: one frame per line, joints keyed by name.
//!
//! ```text
//! {"t": 0.033, "source": "cam0", "joints": {"right_wrist": {"x": 0.1, "y": 0.2, "z": 0.9, "c": 0.8}}}
//! ```
//!
//! Joints may instead be given as `{"px", "py", "depth", "c"}`; such streams
//! start with a header line `{"intrinsics": {"fx", "fy", "cx", "cy", "width", "height"}}`.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::geometry::{deproject, CameraIntrinsics, Point3};

use super::{Joint, JointId, KeypointFrame, StreamError};

#[derive(Debug, Clone, PartialEq)]
pub enum Record {
    Header(CameraIntrinsics),
    Frame(KeypointFrame),
}

fn malformed(msg: impl Into<String>) -> StreamError {
    StreamError::MalformedRecord(msg.into())
}

fn number(obj: &Map<String, Value>, key: &str, ctx: &str) -> Result<f64, StreamError> {
    let v = obj
        .get(key)
        .ok_or_else(|| malformed(format!("{ctx}: missing \"{key}\"")))?
        .as_f64()
        .ok_or_else(|| malformed(format!("{ctx}: \"{key}\" is not a number")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(malformed(format!("{ctx}: \"{key}\" is not finite")))
    }
}

/// Parse one line as either an intrinsics header or a frame. Pixel-form
/// joints need `intrinsics` from an earlier header.
pub fn parse_record(line: &str, intrinsics: Option<&CameraIntrinsics>) -> Result<Record, StreamError> {
    let value: Value =
        serde_json::from_str(line).map_err(|e| malformed(format!("invalid JSON: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| malformed("record is not a JSON object"))?;

    if let Some(intr) = obj.get("intrinsics") {
        if obj.contains_key("joints") {
            return Err(malformed("record has both \"intrinsics\" and \"joints\""));
        }
        let intr: CameraIntrinsics = serde_json::from_value(intr.clone())
            .map_err(|e| malformed(format!("intrinsics: {e}")))?;
        return Ok(Record::Header(intr));
    }

    let timestamp = number(obj, "t", "frame")?;
    let source_id = match obj.get("source") {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(_) => return Err(malformed("\"source\" is not a string")),
    };
    let joints_obj = obj
        .get("joints")
        .ok_or_else(|| malformed("missing \"joints\""))?
        .as_object()
        .ok_or_else(|| malformed("\"joints\" is not an object"))?;

    let mut joints = BTreeMap::new();
    for (name, raw) in joints_obj {
        let Some(id) = JointId::from_name(name) else {
            continue;
        };
        let j = raw
            .as_object()
            .ok_or_else(|| malformed(format!("{name}: not an object")))?;
        let confidence = number(j, "c", name)?;
        if !(0.0..=1.0).contains(&confidence) {
            return Err(malformed(format!("{name}: confidence {confidence} outside [0, 1]")));
        }
        let position = if j.contains_key("x") {
            Point3::new(number(j, "x", name)?, number(j, "y", name)?, number(j, "z", name)?)
        } else if j.contains_key("px") {
            let intr = intrinsics
                .ok_or_else(|| malformed(format!("{name}: pixel joint without intrinsics header")))?;
            let (px, py, depth) = (number(j, "px", name)?, number(j, "py", name)?, number(j, "depth", name)?);
            deproject(px, py, depth, intr).map_err(|e| malformed(format!("{name}: {e}")))?
        } else {
            return Err(malformed(format!("{name}: needs x/y/z or px/py/depth")));
        };
        joints.insert(id, Joint { position, confidence });
    }
    Ok(Record::Frame(KeypointFrame {
        timestamp,
        source_id,
        joints,
    }))
}

/// Parse a frame line; headers are rejected here.
pub fn parse_frame(line: &str, intrinsics: Option<&CameraIntrinsics>) -> Result<KeypointFrame, StreamError> {
    match parse_record(line, intrinsics)? {
        Record::Frame(f) => Ok(f),
        Record::Header(_) => Err(malformed("expected a frame, found an intrinsics header")),
    }
}

#[derive(Serialize)]
struct OutJoint {
    x: f64,
    y: f64,
    z: f64,
    c: f64,
}

#[derive(Serialize)]
struct OutFrame<'a> {
    t: f64,
    source: &'a str,
    joints: BTreeMap<&'static str, OutJoint>,
}

/// Canonical single-line encoding (3D joint form, joints sorted by name).
pub fn frame_to_json(frame: &KeypointFrame) -> String {
    let joints = frame
        .joints
        .iter()
        .map(|(id, j)| {
            (
                id.name(),
                OutJoint {
                    x: j.position.x,
                    y: j.position.y,
                    z: j.position.z,
                    c: j.confidence,
                },
            )
        })
        .collect();
    serde_json::to_string(&OutFrame {
        t: frame.timestamp,
        source: &frame.source_id,
        joints,
    })
    .expect("frame serialization is infallible")
}

pub fn header_to_json(intr: &CameraIntrinsics) -> String {
    serde_json::json!({ "intrinsics": intr }).to_string()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StreamWarning {
    NonMonotonicTimestamp { previous: f64, current: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Parsed {
    Frame {
        frame: KeypointFrame,
        warning: Option<StreamWarning>,
    },
    Header,
    Blank,
}

/// Line-by-line reader state: remembers the intrinsics header and checks
/// timestamp order.
#[derive(Debug, Clone, Default)]
pub struct StreamParser {
    intrinsics: Option<CameraIntrinsics>,
    last_timestamp: Option<f64>,
}

impl StreamParser {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_intrinsics(intrinsics: CameraIntrinsics) -> Self {
        Self {
            intrinsics: Some(intrinsics),
            last_timestamp: None,
        }
    }

    pub fn intrinsics(&self) -> Option<&CameraIntrinsics> {
        self.intrinsics.as_ref()
    }

    pub fn feed(&mut self, line: &str) -> Result<Parsed, StreamError> {
        if line.trim().is_empty() {
            return Ok(Parsed::Blank);
        }
        match parse_record(line, self.intrinsics.as_ref())? {
            Record::Header(intr) => {
                self.intrinsics = Some(intr);
                Ok(Parsed::Header)
            }
            Record::Frame(frame) => {
                let warning = match self.last_timestamp {
                    Some(prev) if frame.timestamp < prev => Some(StreamWarning::NonMonotonicTimestamp {
                        previous: prev,
                        current: frame.timestamp,
                    }),
                    _ => None,
                };
                self.last_timestamp = Some(match self.last_timestamp {
                    Some(prev) => prev.max(frame.timestamp),
                    None => frame.timestamp,
                });
                Ok(Parsed::Frame { frame, warning })
            }
        }
    }
}
