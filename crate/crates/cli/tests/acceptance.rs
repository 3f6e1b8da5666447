//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gesture_pointer::eval::{
    calibrate_sigma, emit_report, make_board, run_pick_sweep, run_place_sweep, run_quantitative, simulated_mean_error,
    BoardKind, CalibrationConfig, DeskSetup, SweepConfig, PICK_SERIES, PLACE_SERIES,
};
use gesture_pointer::geometry::{
    intersect_ray_plane, plane_from_corners, PlanarPoint, PlaneOptions, Point3, RayOptions, RigidMotion, Vec3,
    WorkspaceBounds,
};
use gesture_pointer::snap::{
    pick_snap, place_snap, stability_gate, Area, SnapConfig, SnapError, SnapOutcome, SnapRequest, StrategyKind,
    Target, STABILITY_THRESHOLD,
};
use gesture_pointer::stabilizer::{Stabilizer, WINDOW};
use gesture_pointer::stream::{frame_to_json, generate_scenario, GestureScenario, Hand};

use common::*;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_time(start: Instant, limit: Duration, detail: String) -> Outcome {
    let took = start.elapsed();
    if took < limit {
        Ok(detail)
    } else {
        Err(format!("{detail}; took {took:.1?}, limit {limit:?}"))
    }
}

// 1. Geometry ---------------------------------------------------------------

const GEOMETRY_CASES: usize = 10_000;

struct RayCase {
    corners: [Point3; 4],
    shoulder: Point3,
    wrist: Point3,
}

fn unit_vector(rng: &mut ChaCha8Rng) -> Vec3 {
    loop {
        let v = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        if let Some(u) = v.normalized().filter(|_| v.norm() > 0.1) {
            return u;
        }
    }
}

fn random_case(rng: &mut ChaCha8Rng) -> RayCase {
    let center = Point3::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
    let n = unit_vector(rng);
    let a = n.cross(unit_vector(rng)).normalized().unwrap_or_else(|| n.cross(Vec3::X).normalized().unwrap());
    let b = n.cross(a);
    let (w, h) = (rng.random_range(0.2..1.5), rng.random_range(0.2..1.5));
    let corners = [
        center + a * -w + b * -h,
        center + a * w + b * -h,
        center + a * w + b * h,
        center + a * -w + b * h,
    ];
    let aim = center + a * rng.random_range(-w..w) + b * rng.random_range(-h..h);
    let side = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let shoulder = aim + n * (side * rng.random_range(0.3..2.0)) + unit_vector(rng) * rng.random_range(0.0..0.5);
    // The wrist sits partway along the arm, so the target lies beyond it.
    let wrist = shoulder + (aim - shoulder) * rng.random_range(0.2..0.9);
    RayCase { corners, shoulder, wrist }
}

fn intersect(c: &RayCase) -> Result<(Point3, f64, gesture_pointer::geometry::Plane), String> {
    let plane = plane_from_corners(&c.corners, &PlaneOptions::default()).map_err(|e| e.to_string())?;
    let hit = intersect_ray_plane(c.shoulder, c.wrist, &plane, &RayOptions::default()).map_err(|e| e.to_string())?;
    Ok((hit.point, hit.t, plane))
}

fn geometry_oracles() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6E0);
    let (mut worst_sub, mut worst_scale, mut worst_rigid) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..GEOMETRY_CASES {
        let case = random_case(&mut rng);
        let (p, t, plane) = intersect(&case).map_err(|e| format!("case {i}: {e}"))?;
        // Substitution: the point satisfies the plane equation and lies on the arm line.
        let sub = (plane.normal().dot(p.coords()) + plane.d()).abs();
        let arm = case.wrist - case.shoulder;
        let off_line = arm.cross(p - case.shoulder).norm() / arm.norm();
        let on_line = (p - (case.shoulder + arm * t)).norm();
        worst_sub = worst_sub.max(sub);
        check(sub < 1e-9 && off_line < 1e-9 && on_line < 1e-9 && t >= 1.0, || {
            format!("case {i}: substitution {sub:e}, off-line {off_line:e}, t {t}")
        })?;

        // Scale invariance.
        let s = rng.random_range(0.2..5.0);
        let scaled = RayCase {
            corners: case.corners.map(|c| c.scale(s)),
            shoulder: case.shoulder.scale(s),
            wrist: case.wrist.scale(s),
        };
        let (ps, ts, _) = intersect(&scaled).map_err(|e| format!("case {i} scaled: {e}"))?;
        let dev = ps.distance(p.scale(s)) / s;
        worst_scale = worst_scale.max(dev);
        check(dev < 1e-9 && (ts - t).abs() < 1e-9 * t.max(1.0), || {
            format!("case {i}: scale {s} moves the hit by {dev:e} (t {t} vs {ts})")
        })?;

        // Rigid-motion equivariance.
        let m = RigidMotion::new(
            unit_vector(&mut rng) * rng.random_range(0.0..std::f64::consts::PI),
            Vec3::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)),
        );
        let moved = RayCase {
            corners: case.corners.map(|c| m.apply(c)),
            shoulder: m.apply(case.shoulder),
            wrist: m.apply(case.wrist),
        };
        let (pm, _, _) = intersect(&moved).map_err(|e| format!("case {i} moved: {e}"))?;
        let dev = pm.distance(m.apply(p));
        worst_rigid = worst_rigid.max(dev);
        check(dev < 1e-9, || format!("case {i}: rigid motion moves the hit by {dev:e}"))?;
    }
    within_time(
        start,
        Duration::from_secs(5),
        format!(
            "{GEOMETRY_CASES} cases; max residual {worst_sub:.1e}, scale {worst_scale:.1e}, rigid {worst_rigid:.1e} m"
        ),
    )
}

// 2. Noiseless end to end -------------------------------------------------

fn noiseless_exactness() -> Outcome {
    let start = Instant::now();
    let setups = [
        ("table", DeskSetup::standard()),
        ("camera", DeskSetup::standard().transformed(&DeskSetup::standard_camera()).map_err(|e| e.to_string())?),
    ];
    let mut trials = 0;
    for (view, setup) in setups {
        for hand in [Hand::Right, Hand::Left] {
            let cfg = SweepConfig {
                setup: setup.clone(),
                hand,
                sigma: 0.0,
                ..SweepConfig::default()
            };
            let quant = make_board(BoardKind::Quantitative10, None).map_err(|e| e.to_string())?;
            let reports = [
                run_quantitative(&quant, &cfg),
                run_pick_sweep(&PICK_SERIES, &cfg),
                run_place_sweep(&PLACE_SERIES, &cfg),
            ];
            for r in reports {
                let r = r.map_err(|e| e.to_string())?;
                for t in &r.trials {
                    check(t.success, || {
                        format!("{view}/{}: {} l={:?} selected {:?}", hand.as_str(), t.target_id, t.l, t.selected_id)
                    })?;
                }
                trials += r.trials.len();
            }
        }
    }
    within_time(
        start,
        Duration::from_secs(30),
        format!("{trials} trials over quantitative_10, 8 pick and 3 place boards, both hands, table and camera frames"),
    )
}

// 3. Calibration ------------------------------------------------------------

const SEED_A: u64 = 1;
const SEED_B: u64 = 2;
const RIGHT_TARGET: f64 = 0.031;
const LEFT_TARGET: f64 = 0.065;

fn calibrate(hand: Hand, target: f64) -> Result<(f64, f64), String> {
    let sigma = calibrate_sigma(target, &CalibrationConfig::standard(hand, SEED_A)).map_err(|e| e.to_string())?;
    let held_out = CalibrationConfig::standard(hand, SEED_B);
    let err = simulated_mean_error(sigma, &held_out)
        .map_err(|e| e.to_string())?
        .ok_or("no held-out sample hit the plane")?;
    Ok((sigma, err))
}

fn calibration_fidelity() -> Outcome {
    let mut parts = Vec::new();
    for (hand, target) in [(Hand::Right, RIGHT_TARGET), (Hand::Left, LEFT_TARGET)] {
        let (sigma, err) = calibrate(hand, target)?;
        let rel = err / target - 1.0;
        let part = format!("{} {target} m: sigma {sigma:.5}, held-out {err:.5} ({:+.2}%)", hand.as_str(), 100.0 * rel);
        check(rel.abs() <= 0.05, || part.clone())?;
        parts.push(part);
    }
    Ok(parts.join("; "))
}

// 4. Envelopes --------------------------------------------------------------

const PICK_TRIALS: usize = 250;
const PLACE_TRIALS: usize = 1000;

fn envelopes() -> Outcome {
    let sigma = calibrate_sigma(RIGHT_TARGET, &CalibrationConfig::standard(Hand::Right, SEED_A)).map_err(|e| e.to_string())?;
    let base = SweepConfig {
        sigma,
        seed: SEED_B,
        ..SweepConfig::default()
    };
    let pick = run_pick_sweep(
        &PICK_SERIES,
        &SweepConfig {
            trials_per_target: PICK_TRIALS,
            ..base.clone()
        },
    )
    .map_err(|e| e.to_string())?;
    let place = run_place_sweep(
        &PLACE_SERIES,
        &SweepConfig {
            trials_per_target: PLACE_TRIALS,
            ..base
        },
    )
    .map_err(|e| e.to_string())?;
    let p = |l: f64| pick.pooled_success_pct(l).unwrap_or(f64::NAN);
    let q = |l: f64| place.pooled_success_pct(l).unwrap_or(f64::NAN);
    let series = |f: &dyn Fn(f64) -> f64, ls: &[f64]| {
        ls.iter().map(|&l| format!("{l}:{:.1}", f(l))).collect::<Vec<_>>().join(" ")
    };
    let detail = format!(
        "sigma {sigma:.5}; pick {}; place {}",
        series(&p, &PICK_SERIES),
        series(&q, &PLACE_SERIES)
    );
    let mut failures = Vec::new();
    for l in PICK_SERIES.iter().copied().filter(|&l| l >= 0.10) {
        if !(p(l) >= 95.0) {
            failures.push(format!("pick l={l} below 95%"));
        }
    }
    if !(p(0.06) > p(0.04) && p(0.04) > p(0.02)) {
        failures.push("pick not strictly decreasing over 0.06 > 0.04 > 0.02".into());
    }
    if !(q(0.20) >= 95.0) {
        failures.push("place l=0.20 below 95%".into());
    }
    if !(q(0.20) > q(0.10) && q(0.10) > q(0.05)) {
        failures.push("place not strictly decreasing".into());
    }
    if failures.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{}; {detail}", failures.join(", ")))
    }
}

// 5. Snap strategies -------------------------------------------------------

const SNAP_CASES: usize = 10_000;

fn stable_samples(rng: &mut ChaCha8Rng, n: usize) -> Vec<PlanarPoint> {
    let c = (rng.random_range(0.0..0.8), rng.random_range(0.0..0.6));
    // Every sample lies within 2 cm of the center, so within 4 cm of the mean.
    (0..n)
        .map(|_| {
            let r = rng.random_range(0.0..0.02);
            let a = rng.random_range(0.0..std::f64::consts::TAU);
            PlanarPoint::new(c.0 + r * a.cos(), c.1 + r * a.sin())
        })
        .collect()
}

fn plain_mean(s: &[PlanarPoint]) -> (f64, f64) {
    let k = s.len() as f64;
    (s.iter().map(|p| p.u).sum::<f64>() / k, s.iter().map(|p| p.v).sum::<f64>() / k)
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

/// First element of the minimum under (distance, id).
fn nearest<'a>(items: impl Iterator<Item = (&'a str, (f64, f64))>, m: (f64, f64)) -> Option<&'a str> {
    let mut best: Option<(f64, &str)> = None;
    for (id, p) in items {
        let d = dist(p, m);
        best = match best {
            Some((bd, bid)) if bd < d || (bd == d && bid < id) => Some((bd, bid)),
            _ => Some((d, id)),
        };
    }
    best.map(|b| b.1)
}

fn selected(o: &SnapOutcome) -> Result<(&str, bool, (f64, f64)), String> {
    match o {
        SnapOutcome::Selected(r) => Ok((&r.selected_id, r.fallback_used, (r.mean_point.u, r.mean_point.v))),
        other => Err(format!("expected a selection, got {other:?}")),
    }
}

fn snap_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5AB);
    let cfg = SnapConfig::default();
    let n = cfg.samples;
    let mut groups_hit = 0;
    for i in 0..SNAP_CASES {
        let samples = stable_samples(&mut rng, n);
        let truth = plain_mean(&samples);
        let k = rng.random_range(1..=10);
        let targets: Vec<Target> = (0..k)
            .map(|j| {
                Target::new(format!("t{j}"), rng.random_range(0.0..0.8), rng.random_range(0.0..0.6))
                    .with_group(if rng.random_bool(0.5) { "a" } else { "b" })
            })
            .collect();
        let group = rng.random_bool(0.3).then_some("a");
        let mut req = SnapRequest::new(samples.clone(), StrategyKind::Pick);
        if let Some(g) = group {
            req = req.with_group(g);
        }
        let candidates: Vec<&Target> = targets
            .iter()
            .filter(|t| group.is_none_or(|g| t.group.as_deref() == Some(g)))
            .collect();
        let got = pick_snap(&req, &targets, &cfg);
        if candidates.is_empty() {
            check(matches!(got, Err(SnapError::EmptyRegistry)), || format!("pick case {i}: {got:?}"))?;
            continue;
        }
        groups_hit += usize::from(group.is_some());
        let got = got.map_err(|e| format!("pick case {i}: {e}"))?;
        let (id, fallback, mean) = selected(&got).map_err(|e| format!("pick case {i}: {e}"))?;
        check(dist(mean, truth) < 1e-12, || format!("pick case {i}: mean {mean:?} vs {truth:?}"))?;
        let expect = nearest(candidates.iter().map(|t| (t.id.as_str(), (t.position.u, t.position.v))), mean);
        check(Some(id) == expect && !fallback, || format!("pick case {i}: {id} vs {expect:?}"))?;
    }

    let mut fallbacks = 0;
    for i in 0..SNAP_CASES {
        let samples = stable_samples(&mut rng, n);
        let truth = plain_mean(&samples);
        let k = rng.random_range(1..=6);
        let areas: Vec<Area> = (0..k)
            .map(|j| {
                Area::new(
                    format!("a{j}"),
                    rng.random_range(0.0..0.8),
                    rng.random_range(0.0..0.6),
                    rng.random_range(0.01..0.2),
                    rng.random_range(0.01..0.2),
                )
                .unwrap()
            })
            .collect();
        let got = place_snap(&SnapRequest::new(samples, StrategyKind::Place), &areas, &cfg)
            .map_err(|e| format!("place case {i}: {e}"))?;
        let (id, fallback, mean) = selected(&got).map_err(|e| format!("place case {i}: {e}"))?;
        check(dist(mean, truth) < 1e-12, || format!("place case {i}: mean {mean:?} vs {truth:?}"))?;
        let inside = |a: &&Area| (mean.0 - a.center.u).abs() <= a.half_extent.0 && (mean.1 - a.center.v).abs() <= a.half_extent.1;
        let containing: Vec<&Area> = areas.iter().filter(inside).collect();
        let pool: Vec<&Area> = if containing.is_empty() { areas.iter().collect() } else { containing.clone() };
        let expect = nearest(pool.iter().map(|a| (a.id.as_str(), (a.center.u, a.center.v))), mean);
        check(Some(id) == expect && fallback == containing.is_empty(), || {
            format!("place case {i}: {id} (fallback {fallback}) vs {expect:?}, {} containing", containing.len())
        })?;
        fallbacks += usize::from(fallback);
    }

    // The gate is strict: a sample exactly at the threshold is unstable.
    let edge = STABILITY_THRESHOLD;
    let just_inside = edge - 1e-12;
    let pair = |d: f64| [PlanarPoint::new(-d, 0.0), PlanarPoint::new(d, 0.0)];
    let at = stability_gate(&pair(edge), STABILITY_THRESHOLD).map_err(|e| e.to_string())?;
    let below = stability_gate(&pair(just_inside), STABILITY_THRESHOLD).map_err(|e| e.to_string())?;
    check(at.max_deviation() == edge && !at.is_stable(), || format!("at threshold: {at:?}"))?;
    check(below.is_stable(), || format!("below threshold: {below:?}"))?;
    let spread = [PlanarPoint::new(0.3, 0.3), PlanarPoint::new(0.42, 0.3)];
    let wide = pick_snap(
        &SnapRequest::new(spread.to_vec(), StrategyKind::Pick),
        &[Target::new("x", 0.36, 0.3)],
        &SnapConfig { samples: 2, ..cfg },
    )
    .map_err(|e| e.to_string())?;
    check(matches!(wide, SnapOutcome::NoSelection(_)), || format!("6 cm spread selected: {wide:?}"))?;

    Ok(format!(
        "{SNAP_CASES} pick cases ({groups_hit} group-filtered), {SNAP_CASES} place cases ({fallbacks} fallbacks), gate strict at {edge} m"
    ))
}

// 6. Stabilizer ---------------------------------------------------------------

const INTERLEAVINGS: usize = 1000;

/// Independent reimplementation of the stabilizer's arithmetic.
fn shifted_mean(s: &[(f64, f64)]) -> (f64, f64) {
    let (fu, fv) = s[0];
    let k = s.len() as f64;
    let (mut du, mut dv) = (0.0, 0.0);
    for &(u, v) in s {
        du += u - fu;
        dv += v - fv;
    }
    (fu + du / k, fv + dv / k)
}

fn stabilizer_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x57AB);
    let bounds = WorkspaceBounds::new([(0.0, 0.0), (0.8, 0.0), (0.8, 0.6), (0.0, 0.6)]);
    let (mut outputs, mut dropped, mut dyadic) = (0usize, 0usize, 0usize);
    for case in 0..INTERLEAVINGS {
        let mut stab = Stabilizer::new(bounds.clone());
        let mut accepted: [Vec<(f64, f64)>; 2] = [Vec::new(), Vec::new()];
        let len = rng.random_range(1..60);
        for step in 0..len {
            // Grid of 1/64 m; zero is skipped so no sample sits on an edge.
            let mut coord = |lo: i32, hi: i32| loop {
                let a = rng.random_range(lo..hi);
                if a != 0 {
                    return a as f64 / 64.0;
                }
            };
            let u = coord(-16, 70);
            let v = coord(-16, 52);
            let hand = if rng.random_bool(0.5) { Hand::Right } else { Hand::Left };
            let idx = usize::from(hand == Hand::Right);
            let inside = u > 0.0 && u < 0.8 && v > 0.0 && v < 0.6;
            let out = stab.push(PlanarPoint::new(u, v), step as f64, hand);
            if !inside {
                dropped += 1;
                check(out.is_none(), || format!("case {case} step {step}: out-of-bounds ({u}, {v}) emitted"))?;
                continue;
            }
            accepted[idx].push((u, v));
            let hist = &accepted[idx];
            let window = &hist[hist.len().saturating_sub(WINDOW)..];
            let expect = shifted_mean(window);
            let g = out.ok_or_else(|| format!("case {case} step {step}: accepted sample gave no output"))?;
            check(
                g.position.u == expect.0 && g.position.v == expect.1 && g.window_size == window.len() && g.hand == hand,
                || format!("case {case} step {step}: {:?} vs {expect:?}", g.position),
            )?;
            // With a power-of-two window the mean of grid points is exact.
            if window.len().is_power_of_two() {
                let k = window.len() as f64;
                let exact = (window.iter().map(|p| p.0).sum::<f64>() / k, window.iter().map(|p| p.1).sum::<f64>() / k);
                check(g.position.u == exact.0 && g.position.v == exact.1, || {
                    format!("case {case} step {step}: {:?} vs exact {exact:?}", g.position)
                })?;
                dyadic += 1;
            }
            outputs += 1;
        }
    }
    Ok(format!(
        "{INTERLEAVINGS} interleavings, {outputs} outputs equal, {dropped} drops, {dyadic} checked against exact means"
    ))
}

// 7. Determinism and formats -----------------------------------------------------

fn scenario_stream(seed: u64) -> Vec<String> {
    let setup = DeskSetup::standard();
    let mut s = GestureScenario::new(
        setup.workspace.plane().clone(),
        setup.right_shoulder,
        setup.world_point(&PlanarPoint::new(0.5, 0.2)),
        setup.arm_length,
    );
    s.noise_sigma = 0.012;
    s.persistence = 0.8;
    s.rng_seed = seed;
    generate_scenario(&s).expect("valid scenario").map(|f| frame_to_json(&f)).collect()
}

fn exit_code_contract() -> Result<usize, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let f = |name: &str| fixture(name).to_string_lossy().into_owned();
    std::fs::write(d("line.json"), r#"{"corners":[{"x":0,"y":0,"z":0},{"x":1,"y":0,"z":0},{"x":2,"y":0,"z":0}]}"#)
        .map_err(|e| e.to_string())?;
    std::fs::write(d("bad.toml"), "colour = 1\n").map_err(|e| e.to_string())?;
    let (plane, reg, stream) = (f("plane.json"), f("registry_pick.json"), f("noiseless.jsonl"));
    let owned_reg = d("reg.json");
    let cases: Vec<(Vec<String>, i32)> = vec![
        (vec!["--version".into()], 0),
        (vec![], 2),
        (vec!["teleport".into()], 2),
        (vec!["define-plane".into(), f("table_corners.json"), "--up".into(), "-o".into(), d("p.json")], 0),
        (vec!["define-plane".into(), d("line.json"), "-o".into(), d("q.json")], 2),
        (vec!["define-plane".into(), d("missing.json"), "-o".into(), d("q.json")], 2),
        (vec!["generate".into(), f("noisy.toml"), "-o".into(), d("s.jsonl")], 0),
        (vec!["generate".into(), d("bad.toml")], 2),
        (vec!["replay".into(), "--plane".into(), plane.clone(), stream.clone(), "-o".into(), d("r.jsonl")], 0),
        (vec!["replay".into(), stream.clone()], 2),
        (vec!["replay".into(), "--plane".into(), plane.clone(), "--snap".into(), "pick".into(), stream.clone()], 2),
        (vec!["live".into(), "--plane".into(), plane.clone()], 0),
        (vec!["live".into(), "--plane".into(), plane.clone(), "--listen".into(), "pipe".into()], 2),
        (vec!["sweep".into(), "--kind".into(), "pick".into(), "--l".into(), "0.1".into(), "--trials".into(), "1".into(), "--out".into(), d("out")], 0),
        (vec!["sweep".into(), "--kind".into(), "pick".into(), "--l".into(), "0.9".into(), "--out".into(), d("out")], 2),
        (vec!["calibrate".into(), "0.031".into(), "--samples".into(), "500".into()], 0),
        (vec!["calibrate".into(), "0.031".into(), "--hand".into(), "both".into()], 2),
        (vec!["registry".into(), "--registry".into(), reg.clone(), "list".into()], 0),
        (vec!["registry".into(), "--registry".into(), owned_reg.clone(), "add-target".into(), "a".into(), "0.1".into(), "0.1".into()], 0),
        (vec!["registry".into(), "--registry".into(), owned_reg.clone(), "add-target".into(), "a".into(), "0.2".into(), "0.1".into()], 2),
        (vec!["registry".into(), "--registry".into(), owned_reg, "remove".into(), "zz".into()], 2),
    ];
    let mut runtime_cases: Vec<(Vec<String>, i32)> = Vec::new();
    if cfg!(target_os = "linux") {
        runtime_cases.push((vec!["generate".into(), f("noisy.toml"), "-o".into(), "/dev/full".into()], 1));
        runtime_cases.push((vec!["replay".into(), "--plane".into(), plane, stream, "-o".into(), "/dev/full".into()], 1));
    }
    let all: Vec<_> = cases.into_iter().chain(runtime_cases).collect();
    for (args, want) in &all {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let o = run_stdin(&args, b"");
        check(code(&o) == *want, || {
            format!("`{}` exited {} (want {want}): {}", args.join(" "), code(&o), stderr(&o).trim())
        })?;
    }
    Ok(all.len())
}

fn determinism_and_formats() -> Outcome {
    check(scenario_stream(7) == scenario_stream(7), || "same seed, different streams".into())?;
    check(scenario_stream(7) != scenario_stream(8), || "different seeds, same stream".into())?;

    let cfg = SweepConfig {
        sigma: 0.0122,
        trials_per_target: 5,
        seed: 42,
        ..SweepConfig::default()
    };
    let a = run_pick_sweep(&[0.10, 0.04], &cfg).map_err(|e| e.to_string())?;
    let b = run_pick_sweep(&[0.10, 0.04], &cfg).map_err(|e| e.to_string())?;
    for f in ["csv", "json"] {
        check(emit_report(&a, f).ok() == emit_report(&b, f).ok(), || format!("{f} reports differ"))?;
    }

    let gen = |toml: &str| run(&["generate", path_str(&fixture(toml))]).stdout;
    check(gen("noisy.toml") == gen("noisy.toml"), || "generate is not deterministic".into())?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut reports = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(k.to_string());
        let args = ["sweep", "--kind", "place", "--sigma", "0.012", "--trials", "3", "--seed", "9", "--out", path_str(&out)];
        check(code(&run(&args)) == 0, || "sweep failed".into())?;
        let read = |n: &str| std::fs::read(out.join(n)).unwrap_or_default();
        reports.push((read("place.csv"), read("place.json")));
    }
    check(reports[0] == reports[1] && !reports[0].0.is_empty(), || "sweep reports are not byte-identical".into())?;

    for (name, plane) in GOLDENS {
        let replay = replay_golden(name, plane);
        check(code(&replay) == 0, || format!("{name}: replay failed"))?;
        check_golden(name, &stdout(&replay))?;
        let input = std::fs::read(fixture(&format!("{name}.jsonl"))).map_err(|e| e.to_string())?;
        let plane_path = fixture(plane);
        let live = run_stdin(&["live", "--plane", path_str(&plane_path)], &input);
        check(without_errors(&stdout(&live)) == points_only(&stdout(&replay)), || {
            format!("{name}: live and replay disagree")
        })?;
    }
    let codes = exit_code_contract()?;
    Ok(format!("streams and reports byte-identical; 3 goldens match replay and live; {codes} exit-code cases"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("geometry oracle suite", geometry_oracles),
        ("noiseless end-to-end exactness", noiseless_exactness),
        ("calibration fidelity", calibration_fidelity),
        ("envelope reproduction", envelopes),
        ("snap strategy oracle", snap_oracles),
        ("stabilizer algebra", stabilizer_algebra),
        ("determinism and formats", determinism_and_formats),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let took = start.elapsed();
        match result {
            Ok(detail) => println!("PASS {} {name} [{took:.1?}]: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name} [{took:.1?}]: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
