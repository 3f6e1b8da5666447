use rayon::prelude::*;

use crate::geometry::{PlanarPoint, RayOptions};
use crate::pipeline::{HandSelection, Pipeline, PipelineConfig};
use crate::snap::{pick_snap, place_snap, SnapConfig, SnapOutcome, SnapRequest, StrategyKind};
use crate::stream::{arm_ray, generate_scenario, GestureScenario, Hand, JointPair, MIN_CONFIDENCE};

use super::board::{make_board, BoardKind, BoardLayout, PICK_SERIES, PLACE_SERIES};
use super::metrics::{euclidean_error, mean_std};
use super::setup::DeskSetup;
use super::EvalError;

/// Default share of the joint noise variance held fixed over one gesture.
pub const DEFAULT_PERSISTENCE: f64 = 0.8;
/// Trials per target and cell in the published protocol.
pub const TRIALS_PER_TARGET: usize = 10;
/// Two seconds at 30 Hz.
pub const FRAMES_PER_TRIAL: usize = 60;

/// Everything a sweep needs besides the board series.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub setup: DeskSetup,
    pub hand: Hand,
    pub pair: JointPair,
    pub sigma: f64,
    pub persistence: f64,
    pub trials_per_target: usize,
    pub frames_per_trial: usize,
    pub snap: SnapConfig,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            setup: DeskSetup::standard(),
            hand: Hand::Right,
            pair: JointPair::ShoulderWrist,
            sigma: 0.0,
            persistence: DEFAULT_PERSISTENCE,
            trials_per_target: TRIALS_PER_TARGET,
            frames_per_trial: FRAMES_PER_TRIAL,
            snap: SnapConfig::default(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepKind {
    Pick,
    Place,
    Quantitative,
}

impl SweepKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepKind::Pick => "pick",
            SweepKind::Place => "place",
            SweepKind::Quantitative => "quantitative",
        }
    }

    fn tag(self) -> u64 {
        match self {
            SweepKind::Pick => 1,
            SweepKind::Place => 2,
            SweepKind::Quantitative => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub trial_id: usize,
    pub target_id: String,
    pub l: Option<f64>,
    pub gestured_mean: PlanarPoint,
    pub ground_truth: PlanarPoint,
    pub error: f64,
    pub selected_id: Option<String>,
    pub success: bool,
    pub fallback_used: bool,
    /// `gestured_mean - ground_truth` in the plane.
    pub offset: (f64, f64),
    /// Stabilized points produced before the trial resolved.
    pub points: usize,
}

/// Per-(l, target) tally.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub l: Option<f64>,
    pub target_id: String,
    pub trials: usize,
    pub successes: usize,
    pub success_pct: f64,
    pub mean_err: f64,
    pub std_err: f64,
    pub fallback_pct: f64,
    pub mean_du: f64,
    pub mean_dv: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub kind: SweepKind,
    pub hand: Hand,
    pub sigma: f64,
    pub persistence: f64,
    pub seed: u64,
    pub samples: usize,
    pub threshold: f64,
    pub trials_per_target: usize,
    pub cells: Vec<CellSummary>,
    pub trials: Vec<TrialResult>,
}

impl SweepReport {
    pub fn empty(kind: SweepKind, cfg: &SweepConfig) -> Self {
        Self {
            kind,
            hand: cfg.hand,
            sigma: cfg.sigma,
            persistence: cfg.persistence,
            seed: cfg.seed,
            samples: cfg.snap.samples,
            threshold: cfg.snap.threshold,
            trials_per_target: cfg.trials_per_target,
            cells: Vec::new(),
            trials: Vec::new(),
        }
    }

    /// Success rate of one cell, in percent.
    pub fn success_pct(&self, l: Option<f64>, target_id: &str) -> Option<f64> {
        self.cells
            .iter()
            .find(|c| c.l == l && c.target_id == target_id)
            .map(|c| c.success_pct)
    }

    /// Pooled success rate over every target at side distance / size `l`.
    pub fn pooled_success_pct(&self, l: f64) -> Option<f64> {
        let (n, k) = self
            .cells
            .iter()
            .filter(|c| c.l == Some(l))
            .fold((0, 0), |acc, c| (acc.0 + c.trials, acc.1 + c.successes));
        (n > 0).then(|| 100.0 * k as f64 / n as f64)
    }
}

/// Mix `parts` into `base` to get an independent-looking stream seed.
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    parts.iter().fold(mix(base), |acc, &p| mix(acc ^ mix(p)))
}

fn validate(cfg: &SweepConfig) -> Result<(), EvalError> {
    if !(cfg.sigma >= 0.0 && cfg.sigma.is_finite()) {
        return Err(EvalError::InvalidParameters(format!("sigma must be non-negative, got {}", cfg.sigma)));
    }
    if !(0.0..=1.0).contains(&cfg.persistence) {
        return Err(EvalError::InvalidParameters("persistence must lie in [0, 1]".into()));
    }
    if cfg.snap.samples == 0 || cfg.frames_per_trial < cfg.snap.samples {
        return Err(EvalError::InvalidParameters(format!(
            "frames_per_trial ({}) must be at least the snap sample count ({})",
            cfg.frames_per_trial, cfg.snap.samples
        )));
    }
    if !(cfg.snap.threshold > 0.0) {
        return Err(EvalError::InvalidParameters("threshold must be positive".into()));
    }
    Ok(())
}

fn scenario(cfg: &SweepConfig, aim: &PlanarPoint, seed: u64, frames: usize) -> GestureScenario {
    let mut s = GestureScenario::new(
        cfg.setup.workspace.plane().clone(),
        cfg.setup.shoulder(cfg.hand),
        cfg.setup.world_point(aim),
        cfg.setup.arm_length,
    );
    s.noise_sigma = cfg.sigma;
    s.persistence = cfg.persistence;
    s.sample_count = frames;
    s.rng_seed = seed;
    s.hand = cfg.hand;
    s
}

/// One gesture aimed at `aim`, snapping after every `N` accepted points
/// until something is selected or the frames run out.
fn run_trial(
    cfg: &SweepConfig,
    board: &BoardLayout,
    strategy: StrategyKind,
    trial_id: usize,
    target_id: &str,
    aim: PlanarPoint,
    seed: u64,
) -> Result<TrialResult, EvalError> {
    let frames = generate_scenario(&scenario(cfg, &aim, seed, cfg.frames_per_trial))?;
    let mut pipeline = Pipeline::new(
        cfg.setup.workspace.clone(),
        PipelineConfig {
            hands: HandSelection::from(cfg.hand),
            pair: cfg.pair,
            min_confidence: MIN_CONFIDENCE,
            ray: RayOptions::default(),
        },
    );
    let n = cfg.snap.samples;
    let mut history: Vec<PlanarPoint> = Vec::with_capacity(cfg.frames_per_trial);
    let mut outcome: Option<SnapOutcome> = None;
    for frame in frames {
        for g in pipeline.process(&frame).points {
            history.push(g.position);
            if history.len() % n != 0 {
                continue;
            }
            let req = SnapRequest::from_recent(&history, n, strategy);
            let o = match strategy {
                StrategyKind::Pick => pick_snap(&req, &board.targets, &cfg.snap)?,
                StrategyKind::Place => place_snap(&req, &board.areas, &cfg.snap)?,
            };
            let selected = matches!(o, SnapOutcome::Selected(_));
            outcome = Some(o);
            if selected {
                break;
            }
        }
        if matches!(outcome, Some(SnapOutcome::Selected(_))) {
            break;
        }
    }
    let recent = &history[history.len().saturating_sub(n)..];
    let (gestured_mean, selected_id, fallback_used) = match &outcome {
        Some(SnapOutcome::Selected(r)) => (r.mean_point, Some(r.selected_id.clone()), r.fallback_used),
        _ => (PlanarPoint::mean(recent).unwrap_or(PlanarPoint::new(f64::NAN, f64::NAN)), None, false),
    };
    let ground_truth = PlanarPoint::new(aim.u, aim.v);
    Ok(TrialResult {
        trial_id,
        target_id: target_id.to_string(),
        l: board.l,
        gestured_mean,
        ground_truth,
        error: euclidean_error(&gestured_mean, &ground_truth),
        success: selected_id.as_deref() == Some(target_id),
        selected_id,
        fallback_used,
        offset: (gestured_mean.u - ground_truth.u, gestured_mean.v - ground_truth.v),
        points: history.len(),
    })
}

fn summarize(l: Option<f64>, target_id: &str, trials: &[&TrialResult]) -> CellSummary {
    let n = trials.len();
    let successes = trials.iter().filter(|t| t.success).count();
    let fallbacks = trials.iter().filter(|t| t.fallback_used).count();
    let finite: Vec<&&TrialResult> = trials.iter().filter(|t| t.error.is_finite()).collect();
    let errors: Vec<f64> = finite.iter().map(|t| t.error).collect();
    let (mean_err, std_err) = mean_std(&errors);
    let (mean_du, _) = mean_std(&finite.iter().map(|t| t.offset.0).collect::<Vec<_>>());
    let (mean_dv, _) = mean_std(&finite.iter().map(|t| t.offset.1).collect::<Vec<_>>());
    let pct = |k: usize| if n == 0 { 0.0 } else { 100.0 * k as f64 / n as f64 };
    CellSummary {
        l,
        target_id: target_id.to_string(),
        trials: n,
        successes,
        success_pct: pct(successes),
        mean_err,
        std_err,
        fallback_pct: pct(fallbacks),
        mean_du,
        mean_dv,
    }
}

/// Run `trials_per_target` trials for every aim point of every board. Trials
/// run in parallel; results are ordered by (board, aim point, trial).
fn run_sweep(kind: SweepKind, boards: &[BoardLayout], strategy: StrategyKind, cfg: &SweepConfig) -> Result<SweepReport, EvalError> {
    validate(cfg)?;
    let mut jobs = Vec::new();
    for (bi, board) in boards.iter().enumerate() {
        for (ti, (id, aim)) in board.aim_points().into_iter().enumerate() {
            for trial in 0..cfg.trials_per_target {
                let seed = derive_seed(cfg.seed, &[kind.tag(), bi as u64, ti as u64, trial as u64]);
                jobs.push((bi, id.clone(), aim, trial, seed));
            }
        }
    }
    let trials: Vec<TrialResult> = jobs
        .par_iter()
        .map(|(bi, id, aim, trial, seed)| run_trial(cfg, &boards[*bi], strategy, *trial, id, *aim, *seed))
        .collect::<Result<_, _>>()?;
    let mut report = SweepReport::empty(kind, cfg);
    let per_target = cfg.trials_per_target.max(1);
    let mut start = 0;
    while start < trials.len() {
        let chunk: Vec<&TrialResult> = trials[start..start + per_target].iter().collect();
        report.cells.push(summarize(chunk[0].l, &chunk[0].target_id, &chunk));
        start += per_target;
    }
    report.trials = trials;
    Ok(report)
}

/// Pick sweep over the given side distances (see [`PICK_SERIES`]).
pub fn run_pick_sweep(ls: &[f64], cfg: &SweepConfig) -> Result<SweepReport, EvalError> {
    let boards = ls
        .iter()
        .map(|&l| make_board(BoardKind::PickSquare, Some(l)))
        .collect::<Result<Vec<_>, _>>()?;
    run_sweep(SweepKind::Pick, &boards, StrategyKind::Pick, cfg)
}

/// Place sweep over the given area sizes (see [`PLACE_SERIES`]).
pub fn run_place_sweep(ls: &[f64], cfg: &SweepConfig) -> Result<SweepReport, EvalError> {
    let boards = ls
        .iter()
        .map(|&l| make_board(BoardKind::PlaceAreas, Some(l)))
        .collect::<Result<Vec<_>, _>>()?;
    run_sweep(SweepKind::Place, &boards, StrategyKind::Place, cfg)
}

/// Accuracy run on a target board (by default `quantitative_10`), with pick
/// snapping so the report also carries selection success.
pub fn run_quantitative(board: &BoardLayout, cfg: &SweepConfig) -> Result<SweepReport, EvalError> {
    if board.targets.is_empty() {
        return Err(EvalError::InvalidParameters("accuracy board has no targets".into()));
    }
    run_sweep(SweepKind::Quantitative, std::slice::from_ref(board), StrategyKind::Pick, cfg)
}

/// The standard pick series.
pub fn pick_series() -> &'static [f64] {
    &PICK_SERIES
}

/// The standard place series.
pub fn place_series() -> &'static [f64] {
    &PLACE_SERIES
}

/// How [`calibrate_sigma`] measures error.
#[derive(Debug, Clone)]
pub struct CalibrationConfig {
    pub setup: DeskSetup,
    pub hand: Hand,
    pub pair: JointPair,
    /// Aim points, cycled round-robin over the samples.
    pub aims: Vec<PlanarPoint>,
    pub samples: usize,
    pub seed: u64,
    /// Relative tolerance on the simulated mean error.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl CalibrationConfig {
    /// Aim at the quantitative board's targets.
    pub fn standard(hand: Hand, seed: u64) -> Self {
        let board = make_board(BoardKind::Quantitative10, None).expect("built-in board is valid");
        Self {
            setup: DeskSetup::standard(),
            hand,
            pair: JointPair::ShoulderWrist,
            aims: board.targets.iter().map(|t| t.position).collect(),
            samples: 10_000,
            seed,
            tolerance: 0.02,
            max_iterations: 60,
        }
    }
}

/// Mean distance between single-frame ray intersections and their aim
/// points, at joint noise `sigma`. Samples whose ray misses the plane are
/// skipped; `None` if all of them miss.
pub fn simulated_mean_error(sigma: f64, cfg: &CalibrationConfig) -> Result<Option<f64>, EvalError> {
    if cfg.aims.is_empty() || cfg.samples == 0 {
        return Err(EvalError::InvalidParameters("calibration needs aim points and samples".into()));
    }
    let sweep = SweepConfig {
        setup: cfg.setup.clone(),
        hand: cfg.hand,
        pair: cfg.pair,
        sigma,
        persistence: 0.0,
        ..SweepConfig::default()
    };
    let ws = &cfg.setup.workspace;
    let errors: Vec<Option<f64>> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let aim = cfg.aims[i % cfg.aims.len()];
            let seed = derive_seed(cfg.seed, &[0xCA1, i as u64]);
            let frame = generate_scenario(&scenario(&sweep, &aim, seed, 1))?
                .next()
                .expect("one frame requested");
            let Some(ray) = arm_ray(&frame, cfg.hand, cfg.pair, MIN_CONFIDENCE) else {
                return Ok(None);
            };
            Ok(ws
                .locate(ray.start, ray.through, &RayOptions::default())
                .ok()
                .map(|p| euclidean_error(&p, &PlanarPoint::new(aim.u, aim.v))))
        })
        .collect::<Result<_, EvalError>>()?;
    let hits: Vec<f64> = errors.into_iter().flatten().collect();
    Ok((!hits.is_empty()).then(|| hits.iter().sum::<f64>() / hits.len() as f64))
}

/// Joint noise sigma whose simulated mean intersection error matches
/// `target_mean_error` within the configured relative tolerance.
///
/// Every evaluation reuses the same seeds, so the simulated error is a
/// deterministic, increasing function of sigma and bisection applies.
pub fn calibrate_sigma(target_mean_error: f64, cfg: &CalibrationConfig) -> Result<f64, EvalError> {
    if target_mean_error == 0.0 {
        return Ok(0.0);
    }
    if !(target_mean_error > 0.0 && target_mean_error.is_finite()) {
        return Err(EvalError::InvalidParameters(format!(
            "target mean error must be positive, got {target_mean_error}"
        )));
    }
    let within = |e: f64| (e - target_mean_error).abs() <= cfg.tolerance * target_mean_error;
    let error_at = |s: f64| -> Result<f64, EvalError> { Ok(simulated_mean_error(s, cfg)?.unwrap_or(f64::INFINITY)) };

    // Bracket first, then bisect; accepting a doubling step would bias the
    // result toward the edge of the tolerance band.
    let mut iterations = 0;
    let (mut lo, mut hi) = (0.0, target_mean_error / 20.0);
    let mut last;
    loop {
        iterations += 1;
        let e = error_at(hi)?;
        last = (hi, e);
        if e > target_mean_error {
            break;
        }
        if iterations >= cfg.max_iterations {
            return Err(EvalError::NonConvergence {
                iterations,
                sigma: last.0,
                error: last.1,
            });
        }
        lo = hi;
        hi *= 2.0;
    }
    while iterations < cfg.max_iterations {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        let e = error_at(mid)?;
        last = (mid, e);
        if within(e) {
            return Ok(mid);
        }
        if e > target_mean_error {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Err(EvalError::NonConvergence {
        iterations,
        sigma: last.0,
        error: last.1,
    })
}
