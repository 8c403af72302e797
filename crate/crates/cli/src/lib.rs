//! Scenario-driven front end for `sbs-core`: time sweeps to CSV, single-time
//! reports and oracle runs to JSON.

pub mod error;
pub mod format;
pub mod report;
pub mod scenario;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use sbs_core::diagnostics::{sbs_verdict, SbsReport};
use sbs_core::oracle::{cross_check, implication_sample, OracleVerdict, SuiteConfig};

pub use error::{CliError, ParseError};
use format::g12;
pub use scenario::{Scenario, Sweep};

/// CSV column names for a model.
pub fn csv_header(scenario: &Scenario) -> Vec<String> {
    let model = &scenario.model;
    let mut cols = vec!["t".to_string()];
    if model.unobserved.is_some() {
        for i in 0..model.system_dim {
            for j in i + 1..model.system_dim {
                cols.push(format!("gamma_abs_{i}_{j}"));
            }
        }
    }
    for k in 0..model.observed.len() {
        cols.push(format!("env{k}_overlap"));
        cols.push(format!("env{k}_orth_residual"));
        cols.push(format!("env{k}_cond_dist"));
    }
    cols.extend(["neg_system", "coh_abs", "sbs"].map(String::from));
    cols
}

fn csv_row(report: &SbsReport) -> String {
    let mut cells = vec![g12(report.time)];
    cells.extend(report.gamma.iter().map(|g| g12(g.value.norm())));
    for e in &report.envs {
        cells.push(g12(e.generalized_overlap));
        cells.push(g12(e.orthogonality_residual));
        cells.push(g12(e.conditional_state_distance));
    }
    cells.push(g12(report.negativity("S|rest").unwrap_or(0.0)));
    cells.push(g12(report.system_state[(0, 1)].norm()));
    cells.push(if report.sbs_reached { "1" } else { "0" }.to_string());
    cells.join(",")
}

/// One CSV row per time point, computed in parallel and written in order.
pub fn simulate(scenario: &Scenario, sweep: &Sweep) -> Result<String, CliError> {
    sweep.validate()?;
    let rows = sweep
        .times()
        .par_iter()
        .map(|&t| sbs_verdict(&scenario.model, &scenario.state, t, &scenario.thresholds).map(|r| csv_row(&r)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = csv_header(scenario).join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    Ok(out)
}

/// Full report at time `t`, optionally with oracle cross-checks. Returns the
/// JSON and the number of failed oracle verdicts.
pub fn check(scenario: &Scenario, t: f64, oracle: bool) -> Result<(Value, usize), CliError> {
    if !t.is_finite() {
        return Err(CliError::validation("t", "time must be finite"));
    }
    let r = sbs_verdict(&scenario.model, &scenario.state, t, &scenario.thresholds)?;
    let mut out = report::sbs_report(&r);
    let mut failures = 0;
    if oracle {
        let vs = cross_check(&scenario.model, &scenario.state, t, &scenario.thresholds)?;
        failures = vs.iter().filter(|v| !v.pass).count();
        out["oracle"] = report::verdicts(&vs);
    }
    Ok((out, failures))
}

/// Runs the implication suite in parallel. Counterexamples are listed in
/// full; passing verdicts are summarized per quantity.
pub fn verify(config: &SuiteConfig, samples: usize) -> Result<(Value, usize), CliError> {
    config.validate().map_err(|e| match e {
        sbs_core::Error::DimensionTooLarge { .. } => CliError::DimensionCap(e),
        other => CliError::validation("dims", other.to_string()),
    })?;
    let verdicts: Vec<OracleVerdict> = (0..samples)
        .into_par_iter()
        .map(|s| implication_sample(config, s))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    let mut summary: BTreeMap<String, (usize, f64)> = BTreeMap::new();
    for v in &verdicts {
        let entry = summary.entry(family_of(&v.quantity)).or_insert((0, 0.0));
        entry.0 += 1;
        if v.abs_diff.is_finite() {
            entry.1 = entry.1.max(v.abs_diff);
        }
    }
    let counterexamples: Vec<Value> = verdicts.iter().filter(|v| !v.pass).map(report::verdict).collect();
    let failures = counterexamples.len();
    let out = json!({
        "seed": config.seed,
        "samples": samples,
        "dims": config.dims,
        "times_per_sample": config.times_per_sample,
        "fault_injected": config.corrupt,
        "verdict_count": verdicts.len(),
        "pass": failures == 0,
        "summary": summary
            .into_iter()
            .map(|(k, (count, max))| (k, json!({"count": count, "max_abs_diff": max})))
            .collect::<serde_json::Map<_, _>>(),
        "counterexamples": counterexamples,
    });
    Ok((out, failures))
}

/// Folds per-environment and per-pointer suffixes into one family name.
fn family_of(quantity: &str) -> String {
    let base = quantity.split('[').next().unwrap_or(quantity);
    base.trim_end_matches(|c: char| c.is_ascii_digit() || c == '_').to_string()
}
