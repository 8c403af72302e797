//! JSON encoding of reports and oracle verdicts.
//!
//! Keys of the check report:
//!
//! * `time`, `system_dim`, `thresholds` (`support_tol`, `orthogonality_tol`,
//!   `decoherence_tol`, `equality_tol`)
//! * `gamma`: `[{i, j, value: [re, im], abs}]`, empty without an unobserved
//!   environment
//! * `environments`: per observed environment `index`, `dim`,
//!   `orthogonality_residual`, `generalized_overlap`,
//!   `conditional_state_distance`, `support_ranks`, `decoherence_factor`,
//!   `purity_bound {bound, purity, satisfied}`,
//!   `rank_bound {rank, max_allowed, satisfied}`,
//!   `w_structure {norm, tolerance, satisfied} | null`,
//!   `overlap_bound {lhs, rhs, satisfied}`, `separable`, `strictly_orthogonal`
//! * `negativity`: object keyed by `S|rest`, `S|observed`, `S|E{k}`
//! * `system_state`, `max_coherence`, `decohered`, `separable_condition_met`,
//!   `separability_scope`, `strict_orthogonality_envs`, `sbs_reached`,
//!   `proposition1_consistent`, `strict_orthogonality`
//! * `oracle` (only with `--oracle`): `{pass, verdicts: [...]}`
//!
//! Non-finite numbers only appear in oracle verdicts for evaluations that
//! failed, and are written as `null`.

use serde_json::{json, Map, Value};

use sbs_core::diagnostics::{OrthogonalityScope, SbsReport, SeparabilityScope, Thresholds};
use sbs_core::oracle::{OracleValue, OracleVerdict};
use sbs_core::{ComplexMatrix, C64};

pub fn complex(z: C64) -> Value {
    json!([z.re, z.im])
}

pub fn matrix(m: &ComplexMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array(m.row(r).iter().map(|&z| complex(z)).collect()))
            .collect(),
    )
}

pub fn thresholds(t: &Thresholds) -> Value {
    json!({
        "support_tol": t.support_tol,
        "orthogonality_tol": t.orthogonality_tol,
        "decoherence_tol": t.decoherence_tol,
        "equality_tol": t.equality_tol,
    })
}

pub fn sbs_report(report: &SbsReport) -> Value {
    let gamma: Vec<Value> = report
        .gamma
        .iter()
        .map(|g| json!({"i": g.i, "j": g.j, "value": complex(g.value), "abs": g.value.norm()}))
        .collect();
    let envs: Vec<Value> = report
        .envs
        .iter()
        .map(|e| {
            json!({
                "index": e.index,
                "dim": e.dim,
                "orthogonality_residual": e.orthogonality_residual,
                "generalized_overlap": e.generalized_overlap,
                "conditional_state_distance": e.conditional_state_distance,
                "support_ranks": e.support_ranks,
                "decoherence_factor": complex(e.decoherence_factor),
                "purity_bound": {
                    "bound": e.purity_bound.bound,
                    "purity": e.purity_bound.purity,
                    "satisfied": e.purity_bound.satisfied,
                },
                "rank_bound": {
                    "rank": e.rank_bound.rank,
                    "max_allowed": e.rank_bound.max_allowed,
                    "satisfied": e.rank_bound.satisfied,
                },
                "w_structure": e.w_structure.map(|w| json!({
                    "norm": w.norm,
                    "tolerance": w.tolerance,
                    "satisfied": w.satisfied,
                })),
                "overlap_bound": {
                    "lhs": e.overlap_bound.lhs,
                    "rhs": e.overlap_bound.rhs,
                    "satisfied": e.overlap_bound.satisfied,
                },
                "separable": e.separable,
                "strictly_orthogonal": e.strictly_orthogonal,
            })
        })
        .collect();
    let negativity: Map<String, Value> = report
        .negativities
        .iter()
        .map(|n| (n.label.clone(), json!(n.value)))
        .collect();
    let strict = report.strict_orthogonality.as_ref().map(|s| {
        json!({
            "per_env_orthogonal": s.per_env_orthogonal,
            "scope": match s.scope {
                OrthogonalityScope::All => "all",
                OrthogonalityScope::AtLeastOne => "at_least_one",
                OrthogonalityScope::None => "none",
            },
            "negativity": s.negativity,
            "expected": s.expected,
            "deviation": s.deviation,
            "pass": s.pass,
        })
    });
    json!({
        "time": report.time,
        "system_dim": report.system_dim,
        "thresholds": thresholds(&report.thresholds),
        "gamma": gamma,
        "environments": envs,
        "negativity": negativity,
        "system_state": matrix(&report.system_state),
        "max_coherence": report.max_coherence,
        "decohered": report.decohered,
        "separable_condition_met": report.separable_condition_met,
        "separability_scope": match report.separability_scope {
            SeparabilityScope::Iff => "iff",
            SeparabilityScope::NecessaryOnly => "necessary_only",
        },
        "strict_orthogonality_envs": report.strict_orthogonality_envs,
        "sbs_reached": report.sbs_reached,
        "proposition1_consistent": report.proposition1_consistent,
        "strict_orthogonality": strict,
    })
}

fn value(v: OracleValue) -> Value {
    match v {
        OracleValue::Real(x) => json!(x),
        OracleValue::Complex(z) => complex(z),
    }
}

pub fn verdict(v: &OracleVerdict) -> Value {
    let mut out = json!({
        "quantity": v.quantity,
        "fast": value(v.fast),
        "oracle": value(v.oracle),
        "abs_diff": v.abs_diff,
        "tolerance": v.tolerance,
        "pass": v.pass,
    });
    if let Some(r) = v.replay {
        out["replay"] = json!({"seed": r.seed, "sample": r.sample, "time_index": r.time_index});
    }
    out
}

pub fn verdicts(vs: &[OracleVerdict]) -> Value {
    json!({
        "pass": vs.iter().all(|v| v.pass),
        "verdicts": vs.iter().map(verdict).collect::<Vec<_>>(),
    })
}
