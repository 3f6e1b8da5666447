//! One stream's worth of pipeline state. `replay` and `live` both drive a
//! [`Session`], which is what makes their outputs identical.

use std::collections::VecDeque;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use gesture_pointer::geometry::PlanarPoint;
use gesture_pointer::pipeline::{Pipeline, PipelineConfig, Workspace};
use gesture_pointer::snap::{
    pick_snap, place_snap, NoSelection, SharedRegistry, SnapConfig, SnapError, SnapOutcome, SnapRequest,
    StrategyKind,
};
use gesture_pointer::stabilizer::GesturePoint;
use gesture_pointer::stream::{Hand, Parsed, StreamParser, StreamWarning};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFrame {
    Workplane,
    /// The plane file's 3D frame, normally the camera's.
    Camera,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AutoSnap {
    pub strategy: StrategyKind,
    pub group: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SessionConfig {
    pub pipeline: PipelineConfig,
    pub output: OutputFrame,
    pub snap: SnapConfig,
    /// Snap after every `snap.samples` accepted points of a hand.
    pub auto_snap: Option<AutoSnap>,
    /// Registry file re-read by the `reload` command.
    pub registry_path: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SessionStats {
    pub lines: usize,
    pub frames: usize,
    pub points: usize,
    pub malformed: usize,
    /// Frames where no selected hand had a usable arm ray.
    pub no_ray: usize,
    pub non_monotonic: usize,
    pub snaps: usize,
}

impl SessionStats {
    /// Every condition reported as a warning.
    pub fn warnings(&self) -> usize {
        self.malformed + self.no_ray + self.non_monotonic
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WarningKind {
    Malformed,
    NoRay,
    NonMonotonic,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Event {
    /// An output record.
    Line(String),
    Warning { kind: WarningKind, message: String },
}

#[derive(Serialize)]
struct PlanarLine<'a> {
    t: f64,
    hand: &'a str,
    u: f64,
    v: f64,
    window: usize,
}

#[derive(Serialize)]
struct CameraLine<'a> {
    t: f64,
    hand: &'a str,
    x: f64,
    y: f64,
    z: f64,
    window: usize,
}

#[derive(Serialize)]
struct SnapLine<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    snap: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hand: Option<&'a str>,
    ok: bool,
    id: Option<&'a str>,
    fallback: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<&'a str>,
    u: f64,
    v: f64,
    max_dev: f64,
}

#[derive(Serialize)]
struct ErrLine<'a> {
    err: &'a str,
}

pub fn err_line(msg: &str) -> String {
    serde_json::to_string(&ErrLine { err: msg }).expect("serializing a string cannot fail")
}

fn ok_line() -> String {
    r#"{"ok":true}"#.to_string()
}

#[derive(Debug, Deserialize)]
#[serde(tag = "cmd", rename_all = "snake_case", deny_unknown_fields)]
enum Control {
    Snap {
        strategy: String,
        #[serde(default)]
        group: Option<String>,
        #[serde(default)]
        hand: Option<String>,
    },
    Reset,
    Reload,
    Stats,
}

fn hand_index(h: Hand) -> usize {
    match h {
        Hand::Left => 0,
        Hand::Right => 1,
    }
}

pub struct Session {
    pipeline: Pipeline,
    config: SessionConfig,
    registry: SharedRegistry,
    parser: StreamParser,
    recent: [VecDeque<PlanarPoint>; 2],
    accepted: [usize; 2],
    stats: SessionStats,
}

impl Session {
    pub fn new(workspace: Workspace, config: SessionConfig, registry: SharedRegistry) -> Self {
        Self {
            pipeline: Pipeline::new(workspace, config.pipeline),
            config,
            registry,
            parser: StreamParser::new(),
            recent: [VecDeque::new(), VecDeque::new()],
            accepted: [0, 0],
            stats: SessionStats::default(),
        }
    }

    pub fn stats(&self) -> SessionStats {
        self.stats
    }

    /// Process one stream line (frame, intrinsics header or blank).
    pub fn feed(&mut self, line: &str) -> Vec<Event> {
        self.stats.lines += 1;
        let line_no = self.stats.lines;
        let mut events = Vec::new();
        let (frame, warning) = match self.parser.feed(line) {
            Ok(Parsed::Frame { frame, warning }) => (frame, warning),
            Ok(Parsed::Header | Parsed::Blank) => return events,
            Err(e) => {
                self.stats.malformed += 1;
                events.push(Event::Warning {
                    kind: WarningKind::Malformed,
                    message: format!("line {line_no}: {e}"),
                });
                return events;
            }
        };
        self.stats.frames += 1;
        if let Some(StreamWarning::NonMonotonicTimestamp { previous, current }) = warning {
            self.stats.non_monotonic += 1;
            events.push(Event::Warning {
                kind: WarningKind::NonMonotonic,
                message: format!("line {line_no}: timestamp {current} is before {previous}"),
            });
        }
        let out = self.pipeline.process(&frame);
        if out.rays == 0 {
            self.stats.no_ray += 1;
            events.push(Event::Warning {
                kind: WarningKind::NoRay,
                message: format!("line {line_no}: no usable arm ray"),
            });
        }
        for g in out.points {
            self.stats.points += 1;
            events.push(Event::Line(self.point_line(&g)));
            let i = hand_index(g.hand);
            let n = self.config.snap.samples;
            let recent = &mut self.recent[i];
            if recent.len() == n {
                recent.pop_front();
            }
            recent.push_back(g.position);
            self.accepted[i] += 1;
            if let Some(auto) = self.config.auto_snap.clone() {
                if self.accepted[i] % n == 0 {
                    self.stats.snaps += 1;
                    let result = self.snap(g.hand, auto.strategy, auto.group.as_deref());
                    events.push(Event::Line(snap_line(
                        Some((auto.strategy, g.timestamp, g.hand)),
                        &result,
                    )));
                }
            }
        }
        events
    }

    fn point_line(&self, g: &GesturePoint) -> String {
        let hand = g.hand.as_str();
        let line = match self.config.output {
            OutputFrame::Workplane => serde_json::to_string(&PlanarLine {
                t: g.timestamp,
                hand,
                u: g.position.u,
                v: g.position.v,
                window: g.window_size,
            }),
            OutputFrame::Camera => {
                let p = self
                    .pipeline
                    .workspace()
                    .frame()
                    .from_workplane(PlanarPoint::new(g.position.u, g.position.v));
                serde_json::to_string(&CameraLine {
                    t: g.timestamp,
                    hand,
                    x: p.x,
                    y: p.y,
                    z: p.z,
                    window: g.window_size,
                })
            }
        };
        line.expect("point serialization is infallible")
    }

    /// Snap over the hand's last N stabilized points.
    pub fn snap(&self, hand: Hand, strategy: StrategyKind, group: Option<&str>) -> Result<SnapOutcome, SnapError> {
        let recent = &self.recent[hand_index(hand)];
        if recent.is_empty() {
            return Err(SnapError::EmptySamples);
        }
        let mut req = SnapRequest::new(recent.iter().copied().collect(), strategy);
        if let Some(g) = group {
            req = req.with_group(g);
        }
        let reg = self.registry.snapshot();
        match strategy {
            StrategyKind::Pick => pick_snap(&req, &reg.targets(), &self.config.snap),
            StrategyKind::Place => place_snap(&req, &reg.areas(), &self.config.snap),
        }
    }

    /// Live-protocol line: a control command or a stream line. Returns the
    /// lines to send back.
    pub fn handle_live(&mut self, line: &str) -> Vec<String> {
        let is_control = serde_json::from_str::<serde_json::Value>(line)
            .map(|v| v.get("cmd").is_some())
            .unwrap_or(false);
        if is_control {
            return vec![self.control(line)];
        }
        self.feed(line)
            .into_iter()
            .filter_map(|e| match e {
                Event::Line(l) => Some(l),
                Event::Warning {
                    kind: WarningKind::Malformed,
                    message,
                } => Some(err_line(&message)),
                Event::Warning { .. } => None,
            })
            .collect()
    }

    fn control(&mut self, line: &str) -> String {
        let cmd: Control = match serde_json::from_str(line) {
            Ok(c) => c,
            Err(e) => return err_line(&format!("bad command: {e}")),
        };
        match cmd {
            Control::Snap { strategy, group, hand } => {
                let strategy: StrategyKind = match strategy.parse() {
                    Ok(s) => s,
                    Err(e) => return err_line(&e),
                };
                let hand = match (hand, self.config.pipeline.hands.hands()) {
                    (Some(h), _) => match h.parse::<Hand>() {
                        Ok(h) => h,
                        Err(e) => return err_line(&e.to_string()),
                    },
                    (None, [only]) => *only,
                    (None, _) => return err_line("hand required in both-hands mode"),
                };
                match self.snap(hand, strategy, group.as_deref()) {
                    Ok(outcome) => snap_line(None, &Ok(outcome)),
                    Err(e) => err_line(&e.to_string()),
                }
            }
            Control::Reset => {
                self.pipeline.reset();
                self.recent = [VecDeque::new(), VecDeque::new()];
                self.accepted = [0, 0];
                ok_line()
            }
            Control::Reload => match &self.config.registry_path {
                None => err_line("no registry file configured"),
                Some(p) => match self.registry.load_file(p) {
                    Ok(()) => ok_line(),
                    Err(e) => err_line(&e.to_string()),
                },
            },
            Control::Stats => serde_json::to_string(&self.stats).expect("stats serialization is infallible"),
        }
    }
}

/// Result line; `context` adds the replay prefix (strategy, time, hand).
fn snap_line(context: Option<(StrategyKind, f64, Hand)>, result: &Result<SnapOutcome, SnapError>) -> String {
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            return match context {
                None => err_line(&e.to_string()),
                Some((s, t, h)) => serde_json::json!({
                    "snap": s.to_string(), "t": t, "hand": h.as_str(), "err": e.to_string()
                })
                .to_string(),
            }
        }
    };
    let strategy = context.map(|c| c.0.to_string());
    let (ok, id, fallback, reason, mean, max_dev) = match outcome {
        SnapOutcome::Selected(r) => (
            true,
            Some(r.selected_id.as_str()),
            r.fallback_used,
            None,
            r.mean_point,
            r.max_radial_deviation,
        ),
        SnapOutcome::NoSelection(NoSelection::Unstable { mean, max_deviation }) => {
            (false, None, false, Some("unstable"), *mean, *max_deviation)
        }
        SnapOutcome::NoSelection(NoSelection::BeyondCutoff { .. }) => {
            (false, None, false, Some("beyond_cutoff"), PlanarPoint::new(f64::NAN, f64::NAN), f64::NAN)
        }
    };
    serde_json::to_string(&SnapLine {
        snap: strategy.as_deref(),
        t: context.map(|c| c.1),
        hand: context.map(|c| c.2.as_str()),
        ok,
        id,
        fallback,
        reason,
        u: mean.u,
        v: mean.v,
        max_dev,
    })
    .expect("snap serialization is infallible")
}

#[cfg(test)]
mod tests {
    use super::*;
    use gesture_pointer::eval::DeskSetup;
    use gesture_pointer::pipeline::HandSelection;
    use gesture_pointer::snap::{Registry, Target};
    use gesture_pointer::stream::{frame_to_json, generate_scenario, GestureScenario};

    fn session(hands: HandSelection, auto: Option<AutoSnap>) -> Session {
        let setup = DeskSetup::standard();
        let mut reg = Registry::new();
        reg.add_target(Target::new("near", 0.3, 0.2)).unwrap();
        reg.add_target(Target::new("far", 0.5, 0.5)).unwrap();
        Session::new(
            setup.workspace,
            SessionConfig {
                pipeline: PipelineConfig {
                    hands,
                    ..PipelineConfig::default()
                },
                output: OutputFrame::Workplane,
                snap: SnapConfig::default(),
                auto_snap: auto,
                registry_path: None,
            },
            SharedRegistry::new(reg),
        )
    }

    fn stream(u: f64, v: f64, frames: usize) -> Vec<String> {
        let setup = DeskSetup::standard();
        let mut s = GestureScenario::new(
            setup.workspace.plane().clone(),
            setup.right_shoulder,
            setup.world_point(&PlanarPoint::new(u, v)),
            setup.arm_length,
        );
        s.sample_count = frames;
        generate_scenario(&s).unwrap().map(|f| frame_to_json(&f)).collect()
    }

    #[test]
    fn snap_before_points_reports_no_samples() {
        let mut s = session(HandSelection::Right, None);
        assert_eq!(
            s.handle_live(r#"{"cmd":"snap","strategy":"pick"}"#),
            vec![r#"{"err":"no samples"}"#.to_string()]
        );
    }

    #[test]
    fn live_snap_selects_the_aimed_target() {
        let mut s = session(HandSelection::Right, None);
        for line in stream(0.5, 0.5, 20) {
            assert_eq!(s.handle_live(&line).len(), 1);
        }
        let reply = s.handle_live(r#"{"cmd":"snap","strategy":"pick"}"#);
        let v: serde_json::Value = serde_json::from_str(&reply[0]).unwrap();
        assert_eq!(v["ok"], true);
        assert_eq!(v["id"], "far");
        assert_eq!(v["fallback"], false);
    }

    #[test]
    fn auto_snap_every_n_points() {
        let mut s = session(
            HandSelection::Right,
            Some(AutoSnap {
                strategy: StrategyKind::Pick,
                group: None,
            }),
        );
        let lines: Vec<Event> = stream(0.3, 0.2, 31).iter().flat_map(|l| s.feed(l)).collect();
        let snaps: Vec<&String> = lines
            .iter()
            .filter_map(|e| match e {
                Event::Line(l) if l.starts_with("{\"snap\"") => Some(l),
                _ => None,
            })
            .collect();
        assert_eq!(snaps.len(), 2);
        assert!(snaps[0].contains("\"id\":\"near\""));
        assert_eq!(s.stats().points, 31);
    }

    #[test]
    fn malformed_lines_become_errors_and_the_session_continues() {
        let mut s = session(HandSelection::Both, None);
        let replies = s.handle_live("{not json");
        assert!(replies[0].starts_with("{\"err\":\"line 1:"));
        assert!(s.handle_live(r#"{"cmd":"launch"}"#)[0].starts_with("{\"err\""));
        assert_eq!(
            s.handle_live(r#"{"cmd":"snap","strategy":"pick"}"#),
            vec![err_line("hand required in both-hands mode")]
        );
        let pts = s.handle_live(&stream(0.3, 0.2, 1)[0]);
        assert_eq!(pts.len(), 1);
        assert_eq!(s.stats().malformed, 1);
    }

    #[test]
    fn frames_without_wrists_are_counted() {
        let mut s = session(HandSelection::Right, None);
        let frames = [r#"{"t":0,"joints":{"right_shoulder":{"x":0,"y":0,"z":1,"c":1}}}"#; 4];
        let out: Vec<Event> = frames.iter().flat_map(|l| s.feed(l)).collect();
        assert!(out.iter().all(|e| matches!(e, Event::Warning { kind: WarningKind::NoRay, .. })));
        assert_eq!(s.stats().warnings(), 4);
        assert_eq!(s.stats().points, 0);
    }
}
