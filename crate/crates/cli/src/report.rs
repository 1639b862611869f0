//! CSV and JSON serialization of experiment results.
//!
//! Every series file has the header `round,mean,std,run_1,...,run_R` and one
//! row per round. Numbers are written with six significant digits so that
//! output is stable across platforms and readable by any plotting tool.

use std::fs;
use std::io;
use std::path::Path;

use hedgebid_core::experiments::aggregate;
use hedgebid_core::{AllCases, CaseOutcome, SummaryRow};
use serde::Serialize;
use serde_json::{json, Value};

pub const SOCIAL_COST_CSV: &str = "social_cost.csv";
pub const PRICE_CSV: &str = "price.csv";
pub const SUMMARY_JSON: &str = "summary.json";

/// Name of the average-regret file of `bidder` (0-based id, 1-based name).
pub fn regret_csv(bidder: usize) -> String {
    format!("regret_bidder{}.csv", bidder + 1)
}

pub fn payoff_csv(bidder: usize) -> String {
    format!("payoff_bidder{}.csv", bidder + 1)
}

/// Formats `x` like C's `%.6g`.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    // Round first: the exponent of the rounded value picks the notation.
    let sci = format!("{:.5e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Renders per-run series as CSV text.
pub fn series_csv(runs: &[Vec<f64>]) -> String {
    let agg = aggregate(runs);
    let mut out = String::from("round,mean,std");
    for r in 1..=runs.len() {
        out.push_str(&format!(",run_{r}"));
    }
    out.push('\n');
    for t in 0..agg.len() {
        out.push_str(&(t + 1).to_string());
        out.push(',');
        out.push_str(&fmt_sig(agg.mean[t]));
        out.push(',');
        out.push_str(&fmt_sig(agg.std[t]));
        for run in runs {
            out.push(',');
            out.push_str(&fmt_sig(run[t]));
        }
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct FinalStats {
    mean: f64,
    std: f64,
}

fn final_stats(runs: &[Vec<f64>]) -> FinalStats {
    let agg = aggregate(runs);
    FinalStats {
        mean: agg.last_mean().unwrap_or(0.0),
        std: agg.last_std().unwrap_or(0.0),
    }
}

/// Everything needed to replay a case, plus its final-round statistics.
pub fn case_summary(outcome: &CaseOutcome, instance_path: &str) -> Value {
    let focal = outcome.spec.focal();
    let regret = outcome.average_regret_runs(focal).map(|r| final_stats(&r));
    json!({
        "case": outcome.spec.case,
        "label": outcome.spec.case.label(),
        "instance": instance_path,
        "roles": outcome.spec.roles,
        "focal_bidder": focal + 1,
        "config": outcome.config,
        "eta": outcome.etas,
        "normalization_bounds": outcome.bounds,
        "seeds": outcome.runs.iter().map(|r| r.seed).collect::<Vec<_>>(),
        "equilibrium": outcome.equilibrium.as_ref().map(|e| json!({
            "profile": e.profile,
            "iterations": e.iterations,
            "converged": e.converged,
        })),
        "final": {
            "social_cost": final_stats(&outcome.social_cost_runs()),
            "price": final_stats(&outcome.price_runs()),
            "focal_payoff": final_stats(&outcome.payoff_runs(focal)),
            "focal_average_regret": regret,
        },
        "mean_final_weights": outcome.mean_final_weights(focal),
        "clipped_utilities": outcome.clipped(),
    })
}

fn write_json(path: &Path, value: &Value) -> io::Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(io::Error::other)?;
    text.push('\n');
    fs::write(path, text)
}

/// Writes the four series files and `summary.json` of one case into `dir`.
pub fn write_reports(outcome: &CaseOutcome, instance_path: &str, dir: &Path) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let focal = outcome.spec.focal();
    fs::write(
        dir.join(SOCIAL_COST_CSV),
        series_csv(&outcome.social_cost_runs()),
    )?;
    fs::write(dir.join(PRICE_CSV), series_csv(&outcome.price_runs()))?;
    if let Some(regret) = outcome.average_regret_runs(focal) {
        fs::write(dir.join(regret_csv(focal)), series_csv(&regret))?;
    }
    fs::write(
        dir.join(payoff_csv(focal)),
        series_csv(&outcome.payoff_runs(focal)),
    )?;
    write_json(
        &dir.join(SUMMARY_JSON),
        &case_summary(outcome, instance_path),
    )
}

/// Writes one subdirectory per case (`case_a`, ...) and a top-level
/// `summary.json` holding the ranked table.
pub fn write_all_reports(all: &AllCases, instance_path: &str, dir: &Path) -> io::Result<()> {
    for outcome in &all.outcomes {
        let sub = dir.join(format!("case_{}", outcome.spec.case.letter()));
        write_reports(outcome, instance_path, &sub)?;
    }
    write_json(
        &dir.join(SUMMARY_JSON),
        &table_json(&all.table, instance_path),
    )
}

pub fn table_json(table: &[SummaryRow], instance_path: &str) -> Value {
    json!({
        "instance": instance_path,
        "ranking": table,
    })
}

/// Plain-text rendering of the ranked table.
pub fn table_text(table: &[SummaryRow]) -> String {
    let mut out = format!(
        "{:<4} {:<4} {:<20} {:>14} {:>12} {:>12} {:>12}\n",
        "rank", "case", "label", "social_cost", "std", "price", "payoff_5"
    );
    for (i, row) in table.iter().enumerate() {
        out.push_str(&format!(
            "{:<4} {:<4} {:<20} {:>14} {:>12} {:>12} {:>12}\n",
            i + 1,
            row.case.letter(),
            row.label,
            fmt_sig(row.social_cost_mean),
            fmt_sig(row.social_cost_std),
            fmt_sig(row.price_mean),
            fmt_sig(row.focal_payoff_mean),
        ));
    }
    out
}
