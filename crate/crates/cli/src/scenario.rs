//! Scenario files: JSON with complex numbers as `[re, im]` and matrices as
//! row-major arrays of rows.
//!
//! ```json
//! {
//!   "model": { "builder": "explicit", "energies": [0, 1],
//!              "unobserved": null,
//!              "observed": [{ "initial": [[[1,0],[0,0]],[[0,0],[0,0]]],
//!                             "generators": [M0, M1] }] },
//!   "system": { "amplitudes": [[0.6, 0], [0.8, 0]] },
//!   "thresholds": { "orthogonality_tol": 1e-8 },
//!   "sweep": { "t_start": 0, "t_end": 3.14159, "steps": 50 }
//! }
//! ```
//!
//! Other builders: `spin_bath` (`couplings`, optional `energies`,
//! `observed`), `orthogonalizing` (`d_half`, `g`, optional `initial`,
//! `bath_couplings`, `energies`) and `random` (`seed`, `env_dims`,
//! `purities`, optional `system_dim`).

use std::path::Path;

use serde::{Deserialize, Serialize};

use sbs_core::diagnostics::Thresholds;
use sbs_core::model::{
    orthogonalizing_model, orthogonalizing_model_with_initial, random_model, spin_bath_environment,
    validate, DephasingModel, EnvironmentSpec, SystemState,
};
use sbs_core::{ComplexMatrix, C64, DESK_SCALE_CAP};

use crate::error::{CliError, ParseError};

type RawMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    model: RawModel,
    system: RawSystem,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    thresholds: Option<RawThresholds>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sweep: Option<Sweep>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "builder", rename_all = "snake_case", deny_unknown_fields)]
enum RawModel {
    Explicit {
        energies: Vec<f64>,
        #[serde(default)]
        unobserved: Option<RawEnv>,
        #[serde(default)]
        observed: Vec<RawEnv>,
    },
    SpinBath {
        couplings: Vec<f64>,
        #[serde(default)]
        energies: Option<Vec<f64>>,
        #[serde(default)]
        observed: Vec<RawEnv>,
    },
    Orthogonalizing {
        d_half: usize,
        g: f64,
        #[serde(default)]
        initial: Option<RawMatrix>,
        #[serde(default)]
        bath_couplings: Option<Vec<f64>>,
        #[serde(default)]
        energies: Option<Vec<f64>>,
    },
    Random {
        seed: u64,
        #[serde(default = "qubit")]
        system_dim: usize,
        env_dims: Vec<usize>,
        purities: Vec<f64>,
    },
}

fn qubit() -> usize {
    2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEnv {
    initial: RawMatrix,
    generators: Vec<RawMatrix>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    amplitudes: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawThresholds {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    support_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    orthogonality_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    decoherence_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    equality_tol: Option<f64>,
}

/// Inclusive time grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub t_start: f64,
    pub t_end: f64,
    pub steps: usize,
}

impl Sweep {
    pub fn validate(&self) -> Result<(), CliError> {
        if !self.t_start.is_finite() || !self.t_end.is_finite() {
            return Err(CliError::validation("sweep", "times must be finite"));
        }
        if self.t_end <= self.t_start {
            return Err(CliError::validation(
                "sweep.t_end",
                format!("t_end {} must exceed t_start {}", self.t_end, self.t_start),
            ));
        }
        if self.steps == 0 {
            return Err(CliError::validation("sweep.steps", "need at least one step"));
        }
        Ok(())
    }

    /// `steps` points from `t_start` to `t_end`, both included; a single step
    /// is just `t_start`.
    pub fn times(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.t_start];
        }
        let dt = (self.t_end - self.t_start) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| {
                if k == self.steps - 1 {
                    self.t_end
                } else {
                    self.t_start + dt * k as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub model: DephasingModel,
    pub state: SystemState,
    pub thresholds: Thresholds,
    pub sweep: Option<Sweep>,
}

fn decode_matrix(raw: &RawMatrix, field: &str, dim: Option<usize>) -> Result<ComplexMatrix, ParseError> {
    let rows = raw.len();
    if rows == 0 {
        return Err(ParseError::at(field, "matrix has no rows"));
    }
    let expected = dim.unwrap_or(rows);
    if rows != expected {
        return Err(ParseError::at(field, format!("{rows} rows, expected {expected}")));
    }
    if let Some((r, row)) = raw.iter().enumerate().find(|(_, row)| row.len() != expected) {
        return Err(ParseError::at(
            field,
            format!("row {r} has {} entries, expected {expected}", row.len()),
        ));
    }
    let data = raw
        .iter()
        .flatten()
        .map(|&[re, im]| C64::new(re, im))
        .collect();
    ComplexMatrix::new(rows, rows, data).map_err(|e| ParseError::at(field, e.to_string()))
}

fn encode_matrix(m: &ComplexMatrix) -> RawMatrix {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

fn decode_env(raw: &RawEnv, path: &str) -> Result<EnvironmentSpec, ParseError> {
    let initial = decode_matrix(&raw.initial, &format!("{path}.initial"), None)?;
    let dim = initial.rows();
    let generators = raw
        .generators
        .iter()
        .enumerate()
        .map(|(i, g)| decode_matrix(g, &format!("{path}.generators[{i}]"), Some(dim)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(EnvironmentSpec::new(initial, generators))
}

fn encode_env(env: &EnvironmentSpec) -> RawEnv {
    RawEnv {
        initial: encode_matrix(&env.initial),
        generators: env.generators.iter().map(encode_matrix).collect(),
    }
}

fn check_energies(energies: &[f64], system_dim: usize) -> Result<(), CliError> {
    if energies.len() != system_dim {
        return Err(CliError::validation(
            "model.energies",
            format!("{} energies for system dimension {system_dim}", energies.len()),
        ));
    }
    Ok(())
}

fn build_model(raw: &RawModel, system_dim: usize) -> Result<DephasingModel, CliError> {
    let model = match raw {
        RawModel::Explicit {
            energies,
            unobserved,
            observed,
        } => {
            check_energies(energies, system_dim)?;
            DephasingModel {
                system_dim,
                energies: energies.clone(),
                unobserved: unobserved
                    .as_ref()
                    .map(|e| decode_env(e, "model.unobserved"))
                    .transpose()?,
                observed: observed
                    .iter()
                    .enumerate()
                    .map(|(k, e)| decode_env(e, &format!("model.observed[{k}]")))
                    .collect::<Result<Vec<_>, _>>()?,
            }
        }
        RawModel::SpinBath {
            couplings,
            energies,
            observed,
        } => {
            let energies = energies.clone().unwrap_or_else(|| vec![0.0; system_dim]);
            check_energies(&energies, system_dim)?;
            DephasingModel {
                system_dim,
                energies,
                unobserved: Some(spin_bath_environment(couplings).map_err(|e| match e {
                    sbs_core::Error::DimensionTooLarge { .. } => CliError::DimensionCap(e),
                    other => CliError::validation("model.couplings", other.to_string()),
                })?),
                observed: observed
                    .iter()
                    .enumerate()
                    .map(|(k, e)| decode_env(e, &format!("model.observed[{k}]")))
                    .collect::<Result<Vec<_>, _>>()?,
            }
        }
        RawModel::Orthogonalizing {
            d_half,
            g,
            initial,
            bath_couplings,
            energies,
        } => {
            if *d_half == 0 {
                return Err(CliError::validation("model.d_half", "must be at least 1"));
            }
            if 2 * d_half * 2 > DESK_SCALE_CAP {
                return Err(CliError::DimensionCap(sbs_core::Error::DimensionTooLarge {
                    dim: 4 * d_half,
                    cap: DESK_SCALE_CAP,
                }));
            }
            let mut model = match initial {
                None => orthogonalizing_model(*d_half, *g),
                Some(raw) => {
                    let m = decode_matrix(raw, "model.initial", Some(*d_half))?;
                    orthogonalizing_model_with_initial(*d_half, *g, &m)
                        .map_err(|e| CliError::validation("model.initial", e.to_string()))?
                }
            };
            if let Some(c) = bath_couplings {
                model.unobserved = Some(spin_bath_environment(c).map_err(|e| match e {
                    sbs_core::Error::DimensionTooLarge { .. } => CliError::DimensionCap(e),
                    other => CliError::validation("model.bath_couplings", other.to_string()),
                })?);
            }
            if let Some(e) = energies {
                check_energies(e, system_dim)?;
                model.energies = e.clone();
            }
            model
        }
        RawModel::Random {
            seed,
            system_dim: d,
            env_dims,
            purities,
        } => {
            if *d != system_dim {
                return Err(CliError::validation(
                    "model.system_dim",
                    format!("{d} but system.amplitudes has {system_dim} entries"),
                ));
            }
            let total = env_dims.iter().try_fold(*d, |acc, &k| acc.checked_mul(k));
            if total.is_none_or(|t| t > DESK_SCALE_CAP) {
                return Err(CliError::DimensionCap(sbs_core::Error::DimensionTooLarge {
                    dim: total.unwrap_or(usize::MAX),
                    cap: DESK_SCALE_CAP,
                }));
            }
            random_model(*seed, *d, env_dims, purities).map_err(|e| match e {
                sbs_core::Error::BadPurityTarget { .. } => CliError::from_validation(e),
                other => CliError::validation("model.env_dims", other.to_string()),
            })?
        }
    };
    if model.system_dim != system_dim {
        return Err(CliError::validation(
            "system.amplitudes",
            format!(
                "{system_dim} amplitudes for a system of dimension {}",
                model.system_dim
            ),
        ));
    }
    Ok(model)
}

fn build_thresholds(raw: Option<&RawThresholds>) -> Thresholds {
    let d = Thresholds::default();
    let raw = raw.cloned().unwrap_or_default();
    Thresholds {
        support_tol: raw.support_tol.unwrap_or(d.support_tol),
        orthogonality_tol: raw.orthogonality_tol.unwrap_or(d.orthogonality_tol),
        decoherence_tol: raw.decoherence_tol.unwrap_or(d.decoherence_tol),
        equality_tol: raw.equality_tol.unwrap_or(d.equality_tol),
    }
}

impl Scenario {
    /// Parses and validates scenario text.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let raw: RawScenario = serde_json::from_str(text).map_err(ParseError::from)?;
        let system_dim = raw.system.amplitudes.len();
        if system_dim < 2 {
            return Err(CliError::validation(
                "system.amplitudes",
                format!("{system_dim} amplitudes, need at least 2"),
            ));
        }
        let model = build_model(&raw.model, system_dim)?;
        if model.total_dim() > DESK_SCALE_CAP {
            return Err(CliError::DimensionCap(sbs_core::Error::DimensionTooLarge {
                dim: model.total_dim(),
                cap: DESK_SCALE_CAP,
            }));
        }
        let state = SystemState::new(
            raw.system
                .amplitudes
                .iter()
                .map(|&[re, im]| C64::new(re, im))
                .collect(),
        );
        let (model, state) = validate(&model, &state).map_err(CliError::from_validation)?;
        let thresholds = build_thresholds(raw.thresholds.as_ref());
        thresholds.validate().map_err(CliError::from_validation)?;
        if let Some(sweep) = &raw.sweep {
            sweep.validate()?;
        }
        Ok(Self {
            model,
            state,
            thresholds,
            sweep: raw.sweep,
        })
    }

    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// The scenario in explicit form; parsing it back gives the same value.
    pub fn to_json(&self) -> String {
        let t = &self.thresholds;
        let raw = RawScenario {
            model: RawModel::Explicit {
                energies: self.model.energies.clone(),
                unobserved: self.model.unobserved.as_ref().map(encode_env),
                observed: self.model.observed.iter().map(encode_env).collect(),
            },
            system: RawSystem {
                amplitudes: self.state.amplitudes.iter().map(|a| [a.re, a.im]).collect(),
            },
            thresholds: Some(RawThresholds {
                support_tol: Some(t.support_tol),
                orthogonality_tol: Some(t.orthogonality_tol),
                decoherence_tol: Some(t.decoherence_tol),
                equality_tol: Some(t.equality_tol),
            }),
            sweep: self.sweep,
        };
        serde_json::to_string_pretty(&raw).expect("scenario values are finite")
    }
}
