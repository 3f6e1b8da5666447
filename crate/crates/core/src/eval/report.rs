use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::{json, Value};

use super::sweep::{CellSummary, SweepReport, TrialResult};
use super::EvalError;

pub const CSV_HEADER: &str =
    "kind,l_m,target_id,trials,successes,success_pct,mean_err_m,std_err_m,fallback_pct,mean_du_m,mean_dv_m,sigma_m,seed";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = EvalError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(EvalError::UnsupportedFormat(other.to_string())),
        }
    }
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
        }
    }
}

/// Round to the printed precision so both formats carry the same numbers.
/// Adding zero folds `-0.0` into `0.0`.
fn meters(x: f64) -> f64 {
    (x * 1e4).round() / 1e4 + 0.0
}

fn percent(x: f64) -> f64 {
    (x * 1e2).round() / 1e2 + 0.0
}

/// Meter values that are not finite (e.g. no trial produced a point) print
/// as an empty CSV field and a JSON null.
fn csv_m(x: f64) -> String {
    if x.is_finite() {
        format!("{:.4}", meters(x))
    } else {
        String::new()
    }
}

fn json_m(x: f64) -> Value {
    if x.is_finite() {
        json!(meters(x))
    } else {
        Value::Null
    }
}

fn csv_row(out: &mut String, r: &SweepReport, c: &CellSummary) {
    let l = c.l.map(csv_m).unwrap_or_default();
    writeln!(
        out,
        "{},{},{},{},{},{:.2},{},{},{:.2},{},{},{},{}",
        r.kind.as_str(),
        l,
        c.target_id,
        c.trials,
        c.successes,
        c.success_pct,
        csv_m(c.mean_err),
        csv_m(c.std_err),
        c.fallback_pct,
        csv_m(c.mean_du),
        csv_m(c.mean_dv),
        csv_m(r.sigma),
        r.seed
    )
    .expect("writing to a String cannot fail");
}

fn json_row(r: &SweepReport, c: &CellSummary) -> Value {
    json!({
        "kind": r.kind.as_str(),
        "l_m": c.l.map(json_m),
        "target_id": c.target_id,
        "trials": c.trials,
        "successes": c.successes,
        "success_pct": percent(c.success_pct),
        "mean_err_m": json_m(c.mean_err),
        "std_err_m": json_m(c.std_err),
        "fallback_pct": percent(c.fallback_pct),
        "mean_du_m": json_m(c.mean_du),
        "mean_dv_m": json_m(c.mean_dv),
        "sigma_m": json_m(r.sigma),
        "seed": r.seed,
    })
}

fn json_trial(t: &TrialResult) -> Value {
    json!({
        "trial_id": t.trial_id,
        "target_id": t.target_id,
        "l_m": t.l.map(json_m),
        "gestured_u": json_m(t.gestured_mean.u),
        "gestured_v": json_m(t.gestured_mean.v),
        "truth_u": json_m(t.ground_truth.u),
        "truth_v": json_m(t.ground_truth.v),
        "error_m": json_m(t.error),
        "selected_id": t.selected_id,
        "success": t.success,
        "fallback_used": t.fallback_used,
        "du_m": json_m(t.offset.0),
        "dv_m": json_m(t.offset.1),
        "points": t.points,
    })
}

/// Render a report. `format` is `"csv"` or `"json"`.
pub fn emit_report(report: &SweepReport, format: &str) -> Result<String, EvalError> {
    Ok(render(report, format.parse()?))
}

pub fn render(report: &SweepReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Csv => {
            let mut out = String::new();
            out.push_str(CSV_HEADER);
            out.push('\n');
            for c in &report.cells {
                csv_row(&mut out, report, c);
            }
            out
        }
        ReportFormat::Json => {
            let doc = json!({
                "synthetic": true,
                "config": {
                    "kind": report.kind.as_str(),
                    "hand": report.hand.as_str(),
                    "sigma_m": report.sigma,
                    "persistence": report.persistence,
                    "seed": report.seed,
                    "n": report.samples,
                    "threshold_m": report.threshold,
                    "trials_per_target": report.trials_per_target,
                },
                "rows": report.cells.iter().map(|c| json_row(report, c)).collect::<Vec<_>>(),
                "trials": report.trials.iter().map(json_trial).collect::<Vec<_>>(),
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("report serialization is infallible");
            s.push('\n');
            s
        }
    }
}
