use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::geometry::PlanarPoint;

use super::{stability_gate, Area, Gate, SnapError, Target, STABILITY_THRESHOLD};

/// Samples averaged per selection.
pub const SNAP_SAMPLES: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyKind {
    Pick,
    Place,
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StrategyKind::Pick => "pick",
            StrategyKind::Place => "place",
        })
    }
}

impl FromStr for StrategyKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pick" => Ok(StrategyKind::Pick),
            "place" => Ok(StrategyKind::Place),
            _ => Err(format!("unknown strategy {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnapConfig {
    pub samples: usize,
    pub threshold: f64,
    /// Optional pick cutoff; `None` always selects the nearest target.
    pub max_distance: Option<f64>,
}

impl Default for SnapConfig {
    fn default() -> Self {
        Self {
            samples: SNAP_SAMPLES,
            threshold: STABILITY_THRESHOLD,
            max_distance: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SnapRequest {
    pub samples: Vec<PlanarPoint>,
    pub strategy: StrategyKind,
    pub group_filter: Option<String>,
}

impl SnapRequest {
    pub fn new(samples: Vec<PlanarPoint>, strategy: StrategyKind) -> Self {
        Self {
            samples,
            strategy,
            group_filter: None,
        }
    }

    pub fn with_group(mut self, group: impl Into<String>) -> Self {
        self.group_filter = Some(group.into());
        self
    }

    /// Request over the most recent `n` points of `history`.
    pub fn from_recent(history: &[PlanarPoint], n: usize, strategy: StrategyKind) -> Self {
        let start = history.len().saturating_sub(n);
        Self::new(history[start..].to_vec(), strategy)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SnapResult {
    pub selected_id: String,
    pub mean_point: PlanarPoint,
    pub max_radial_deviation: f64,
    pub fallback_used: bool,
    pub distance_to_selected: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NoSelection {
    Unstable { mean: PlanarPoint, max_deviation: f64 },
    BeyondCutoff { nearest_id: String, distance: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum SnapOutcome {
    Selected(SnapResult),
    NoSelection(NoSelection),
}

impl SnapOutcome {
    pub fn selected(&self) -> Option<&SnapResult> {
        match self {
            SnapOutcome::Selected(r) => Some(r),
            SnapOutcome::NoSelection(_) => None,
        }
    }

    pub fn selected_id(&self) -> Option<&str> {
        self.selected().map(|r| r.selected_id.as_str())
    }
}

/// A selection algorithm evaluated against an immutable snapshot of
/// candidates. Implementations are free to run concurrently.
pub trait SnapStrategy: Send + Sync {
    fn kind(&self) -> StrategyKind;
    fn snap(&self, req: &SnapRequest, cfg: &SnapConfig) -> Result<SnapOutcome, SnapError>;
}

/// Nearest known target to the stable mean.
#[derive(Debug, Clone, Default)]
pub struct PickStrategy {
    pub targets: Vec<Target>,
}

/// Containing area, else the area with the nearest center.
#[derive(Debug, Clone, Default)]
pub struct PlaceStrategy {
    pub areas: Vec<Area>,
}

impl SnapStrategy for PickStrategy {
    fn kind(&self) -> StrategyKind {
        StrategyKind::Pick
    }
    fn snap(&self, req: &SnapRequest, cfg: &SnapConfig) -> Result<SnapOutcome, SnapError> {
        pick_snap(req, &self.targets, cfg)
    }
}

impl SnapStrategy for PlaceStrategy {
    fn kind(&self) -> StrategyKind {
        StrategyKind::Place
    }
    fn snap(&self, req: &SnapRequest, cfg: &SnapConfig) -> Result<SnapOutcome, SnapError> {
        place_snap(req, &self.areas, cfg)
    }
}

fn check_samples(req: &SnapRequest, cfg: &SnapConfig) -> Result<(), SnapError> {
    if req.samples.is_empty() {
        return Err(SnapError::EmptySamples);
    }
    if req.samples.len() != cfg.samples {
        return Err(SnapError::SampleCount {
            expected: cfg.samples,
            got: req.samples.len(),
        });
    }
    Ok(())
}

/// Order by distance, then id, so equidistant candidates resolve the same way every time.
fn closer(a: (f64, &str), b: (f64, &str)) -> Ordering {
    a.0.total_cmp(&b.0).then_with(|| a.1.cmp(b.1))
}

pub fn pick_snap(req: &SnapRequest, targets: &[Target], cfg: &SnapConfig) -> Result<SnapOutcome, SnapError> {
    let candidates: Vec<&Target> = targets
        .iter()
        .filter(|t| match &req.group_filter {
            Some(g) => t.group.as_deref() == Some(g.as_str()),
            None => true,
        })
        .collect();
    if candidates.is_empty() {
        return Err(SnapError::EmptyRegistry);
    }
    check_samples(req, cfg)?;
    let (mean, max_deviation) = match stability_gate(&req.samples, cfg.threshold)? {
        Gate::Stable { mean, max_deviation } => (mean, max_deviation),
        Gate::Unstable { mean, max_deviation } => {
            return Ok(SnapOutcome::NoSelection(NoSelection::Unstable { mean, max_deviation }))
        }
    };
    let (best, distance) = candidates
        .iter()
        .map(|t| (*t, mean.planar_distance(&t.position)))
        .min_by(|a, b| closer((a.1, &a.0.id), (b.1, &b.0.id)))
        .expect("candidates is non-empty");
    if let Some(cutoff) = cfg.max_distance {
        if distance > cutoff {
            return Ok(SnapOutcome::NoSelection(NoSelection::BeyondCutoff {
                nearest_id: best.id.clone(),
                distance,
            }));
        }
    }
    Ok(SnapOutcome::Selected(SnapResult {
        selected_id: best.id.clone(),
        mean_point: mean,
        max_radial_deviation: max_deviation,
        fallback_used: false,
        distance_to_selected: distance,
    }))
}

fn nearest_area<'a>(areas: impl Iterator<Item = &'a Area>, p: &PlanarPoint) -> Option<(&'a Area, f64)> {
    areas
        .map(|a| (a, p.planar_distance(&a.center)))
        .min_by(|a, b| closer((a.1, &a.0.id), (b.1, &b.0.id)))
}

pub fn place_snap(req: &SnapRequest, areas: &[Area], cfg: &SnapConfig) -> Result<SnapOutcome, SnapError> {
    if areas.is_empty() {
        return Err(SnapError::EmptyAreas);
    }
    check_samples(req, cfg)?;
    let (mean, max_deviation) = match stability_gate(&req.samples, cfg.threshold)? {
        Gate::Stable { mean, max_deviation } => (mean, max_deviation),
        Gate::Unstable { mean, max_deviation } => {
            return Ok(SnapOutcome::NoSelection(NoSelection::Unstable { mean, max_deviation }))
        }
    };
    let (area, distance, fallback_used) =
        match nearest_area(areas.iter().filter(|a| a.contains(&mean)), &mean) {
            Some((a, d)) => (a, d, false),
            None => {
                let (a, d) = nearest_area(areas.iter(), &mean).expect("areas is non-empty");
                (a, d, true)
            }
        };
    Ok(SnapOutcome::Selected(SnapResult {
        selected_id: area.id.clone(),
        mean_point: mean,
        max_radial_deviation: max_deviation,
        fallback_used,
        distance_to_selected: distance,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn around(u: f64, v: f64) -> Vec<PlanarPoint> {
        // 15 samples within a few millimeters of (u, v), centered on it.
        let mut s = Vec::new();
        for i in 0..7 {
            let d = 0.001 * i as f64;
            s.push(PlanarPoint::new(u + d, v - d));
            s.push(PlanarPoint::new(u - d, v + d));
        }
        s.push(PlanarPoint::new(u, v));
        s
    }

    fn spread() -> Vec<PlanarPoint> {
        let mut s = around(0.3, 0.3);
        s[0] = PlanarPoint::new(0.5, 0.3);
        s
    }

    fn cfg() -> SnapConfig {
        SnapConfig::default()
    }

    #[test]
    fn picks_nearest_target() {
        let targets = [Target::new("far", 0.5, 0.5), Target::new("near", 0.1, 0.1)];
        let out = pick_snap(&SnapRequest::new(around(0.12, 0.11), StrategyKind::Pick), &targets, &cfg()).unwrap();
        let r = out.selected().unwrap();
        assert_eq!(r.selected_id, "near");
        assert!(!r.fallback_used);
        assert!((r.distance_to_selected - (0.02f64.hypot(0.01))).abs() < 1e-12);
    }

    #[test]
    fn group_filter_narrows_candidates() {
        let targets = [
            Target::new("small_1", 0.30, 0.30).with_group("small_bolt"),
            Target::new("big_1", 0.40, 0.30).with_group("big_bolt"),
            Target::new("big_2", 0.10, 0.50).with_group("big_bolt"),
        ];
        let req = SnapRequest::new(around(0.31, 0.30), StrategyKind::Pick);
        assert_eq!(pick_snap(&req, &targets, &cfg()).unwrap().selected_id(), Some("small_1"));
        let req = req.with_group("big_bolt");
        assert_eq!(pick_snap(&req, &targets, &cfg()).unwrap().selected_id(), Some("big_1"));
        let req = SnapRequest::new(around(0.31, 0.30), StrategyKind::Pick).with_group("nut");
        assert_eq!(pick_snap(&req, &targets, &cfg()), Err(SnapError::EmptyRegistry));
    }

    #[test]
    fn unstable_samples_never_select() {
        let targets = [Target::new("t", 0.3, 0.3)];
        let out = pick_snap(&SnapRequest::new(spread(), StrategyKind::Pick), &targets, &cfg()).unwrap();
        assert!(matches!(out, SnapOutcome::NoSelection(NoSelection::Unstable { .. })));
        let areas = [Area::square("a", 0.3, 0.3, 0.2).unwrap()];
        let out = place_snap(&SnapRequest::new(spread(), StrategyKind::Place), &areas, &cfg()).unwrap();
        assert!(out.selected().is_none());
    }

    #[test]
    fn equidistant_targets_break_by_id() {
        let targets = [Target::new("b", 0.4, 0.3), Target::new("a", 0.2, 0.3)];
        let out = pick_snap(&SnapRequest::new(around(0.3, 0.3), StrategyKind::Pick), &targets, &cfg()).unwrap();
        assert_eq!(out.selected_id(), Some("a"));
    }

    #[test]
    fn cutoff_is_optional() {
        let targets = [Target::new("t", 0.5, 0.5)];
        let req = SnapRequest::new(around(0.1, 0.1), StrategyKind::Pick);
        assert_eq!(pick_snap(&req, &targets, &cfg()).unwrap().selected_id(), Some("t"));
        let strict = SnapConfig {
            max_distance: Some(0.1),
            ..cfg()
        };
        assert!(matches!(
            pick_snap(&req, &targets, &strict).unwrap(),
            SnapOutcome::NoSelection(NoSelection::BeyondCutoff { .. })
        ));
    }

    #[test]
    fn sample_count_and_empty_inputs() {
        let targets = [Target::new("t", 0.5, 0.5)];
        let short = SnapRequest::new(vec![PlanarPoint::new(0.1, 0.1); 3], StrategyKind::Pick);
        assert_eq!(
            pick_snap(&short, &targets, &cfg()),
            Err(SnapError::SampleCount { expected: 15, got: 3 })
        );
        let empty = SnapRequest::new(vec![], StrategyKind::Pick);
        assert_eq!(pick_snap(&empty, &targets, &cfg()), Err(SnapError::EmptySamples));
        assert_eq!(pick_snap(&short, &[], &cfg()), Err(SnapError::EmptyRegistry));
        assert_eq!(place_snap(&short, &[], &cfg()), Err(SnapError::EmptyAreas));
    }

    #[test]
    fn place_containment_and_fallback() {
        let areas = [
            Area::square("a1", 0.2, 0.2, 0.2).unwrap(),
            Area::square("a2", 0.5, 0.5, 0.2).unwrap(),
        ];
        let inside = place_snap(&SnapRequest::new(around(0.22, 0.19), StrategyKind::Place), &areas, &cfg()).unwrap();
        let r = inside.selected().unwrap();
        assert_eq!((r.selected_id.as_str(), r.fallback_used), ("a1", false));

        // Outside both; |(0.14, 0.13)| to a2 beats |(0.16, 0.17)| to a1.
        let out = place_snap(&SnapRequest::new(around(0.36, 0.37), StrategyKind::Place), &areas, &cfg()).unwrap();
        let r = out.selected().unwrap();
        assert_eq!((r.selected_id.as_str(), r.fallback_used), ("a2", true));

        // Exactly between two centers: id decides.
        let areas = [
            Area::square("b2", 0.75, 0.75, 0.2).unwrap(),
            Area::square("b1", 0.25, 0.25, 0.2).unwrap(),
        ];
        let out = place_snap(&SnapRequest::new(vec![PlanarPoint::new(0.5, 0.5); 15], StrategyKind::Place), &areas, &cfg()).unwrap();
        let r = out.selected().unwrap();
        assert_eq!((r.selected_id.as_str(), r.fallback_used), ("b1", true));
    }

    #[test]
    fn overlapping_areas_prefer_closer_center() {
        let areas = [
            Area::square("big", 0.3, 0.3, 0.4).unwrap(),
            Area::square("small", 0.35, 0.35, 0.1).unwrap(),
        ];
        let out = place_snap(&SnapRequest::new(around(0.36, 0.36), StrategyKind::Place), &areas, &cfg()).unwrap();
        assert_eq!(out.selected_id(), Some("small"));
    }

    #[test]
    fn trait_objects_dispatch() {
        let strategies: Vec<Box<dyn SnapStrategy>> = vec![
            Box::new(PickStrategy {
                targets: vec![Target::new("t", 0.3, 0.3)],
            }),
            Box::new(PlaceStrategy {
                areas: vec![Area::square("a", 0.3, 0.3, 0.1).unwrap()],
            }),
        ];
        let req = SnapRequest::new(around(0.3, 0.3), StrategyKind::Pick);
        let ids: Vec<_> = strategies
            .iter()
            .map(|s| s.snap(&req, &cfg()).unwrap().selected_id().unwrap().to_string())
            .collect();
        assert_eq!(ids, ["t", "a"]);
        assert_eq!(strategies[1].kind(), StrategyKind::Place);
    }
}
