//! Checks that decide whether environments can distinguish the system's
//! pointer states, how much entanglement that takes, and whether the joint
//! state has a spectrum broadcast structure.
//!
//! The exact conditions (orthogonal supports, equal conditional states) are
//! evaluated numerically against a [`Thresholds`] record that is echoed into
//! every [`SbsReport`].
//!
//! The overlap bound compares the environment's decoherence factor with the
//! generalized overlap between `ρ₀₀^k(t)` and `ρ₁₁^k(t)`. The bound is
//! sometimes printed with `ρ₀₀` in every slot of `Tr √(√ρ σ √ρ)`, which is
//! identically one; the two distinct conditional states are used here.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::dynamics::{
    conditional_unitaries, decoherence_factor, env_decoherence_factor, joint_state_from_frame,
    observed_state, system_state, ConditionalFrame, JointState,
};
use crate::error::{Error, Result};
use crate::linalg::{
    generalized_overlap, herm_eigenvalues, purity, support_projector, trace_norm,
    DEFAULT_SUPPORT_TOL,
};
use crate::matrix::{partial_trace, partial_transpose_many, ComplexMatrix, FactorLayout, C64};
use crate::model::{DephasingModel, EnvironmentSpec, SystemState};

/// Negativities below this are reported as exactly zero.
pub const NEGATIVITY_FLOOR: f64 = 1e-12;

/// Agreement required between the Negativity and `|a₀a₁|` under strict
/// orthogonality.
pub const NEGATIVITY_THEOREM_TOL: f64 = 1e-8;

/// Slack on the decoherence/overlap inequality.
pub const OVERLAP_BOUND_SLACK: f64 = 1e-9;

/// Slack on the purity bound.
pub const PURITY_BOUND_SLACK: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thresholds {
    /// Relative eigenvalue cutoff for supports and ranks.
    pub support_tol: f64,
    /// Largest `‖ρ_ii ρ_jj‖₁` still counted as orthogonal.
    pub orthogonality_tol: f64,
    /// `|Γ_ij|` below this counts as fully decohered.
    pub decoherence_tol: f64,
    /// Largest elementwise `|ρ_ii − ρ_jj|` still counted as equal.
    pub equality_tol: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            support_tol: DEFAULT_SUPPORT_TOL,
            orthogonality_tol: 1e-8,
            decoherence_tol: 1e-6,
            equality_tol: 1e-8,
        }
    }
}

impl Thresholds {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("support_tol", self.support_tol),
            ("orthogonality_tol", self.orthogonality_tol),
            ("decoherence_tol", self.decoherence_tol),
            ("equality_tol", self.equality_tol),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::BadThreshold { name, value });
            }
        }
        Ok(())
    }

    /// Bound on `‖P w P‖_max` matching `orthogonality_tol`.
    ///
    /// The residual `‖ρ₀₀ w ρ₀₀ w†‖₁` is quadratic in the support block of `w`
    /// (for a pure state it is `|⟨ψ|w|ψ⟩|²`), hence the square root.
    pub fn w_structure_tol(&self) -> f64 {
        self.orthogonality_tol.sqrt()
    }
}

/// `‖ρ_a ρ_b‖₁`; zero exactly when the supports are orthogonal.
pub fn orthogonality_residual(rho_a: &ComplexMatrix, rho_b: &ComplexMatrix) -> Result<f64> {
    if rho_a.rows() != rho_b.rows() || !rho_a.is_square() || !rho_b.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} and {}x{}",
            rho_a.rows(),
            rho_a.cols(),
            rho_b.rows(),
            rho_b.cols()
        )));
    }
    trace_norm(&rho_a.matmul(rho_b))
}

/// Largest elementwise distance between two conditional states.
pub fn conditional_state_distance(rho_a: &ComplexMatrix, rho_b: &ComplexMatrix) -> f64 {
    rho_a.max_abs_diff(rho_b)
}

fn pairs(d: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..d).flat_map(move |i| (i + 1..d).map(move |j| (i, j)))
}

/// For a qubit, equal conditional states are equivalent to the absence of
/// system–environment entanglement; for larger systems they are only a
/// necessary condition for separability.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeparabilityScope {
    Iff,
    NecessaryOnly,
}

impl SeparabilityScope {
    pub fn for_system(system_dim: usize) -> Self {
        if system_dim == 2 {
            Self::Iff
        } else {
            Self::NecessaryOnly
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Separability {
    pub env: usize,
    pub holds: bool,
    /// Largest `max|ρ_ii − ρ_jj|` over pointer pairs.
    pub max_distance: f64,
    pub scope: SeparabilityScope,
}

/// `ρ_ii^k(t) = ρ_jj^k(t)` for every pointer pair, per observed environment
/// (`env = None` checks all of them).
pub fn separability_condition(
    frame: &ConditionalFrame,
    env: Option<usize>,
    thresholds: &Thresholds,
) -> Result<Vec<Separability>> {
    let indices: Vec<usize> = match env {
        Some(k) => {
            frame.observed_env(k)?;
            alloc::vec![k]
        }
        None => (0..frame.observed.len()).collect(),
    };
    let scope = SeparabilityScope::for_system(frame.system_dim);
    Ok(indices
        .into_iter()
        .map(|k| {
            let e = &frame.observed[k];
            let max_distance = pairs(frame.system_dim)
                .map(|(i, j)| {
                    conditional_state_distance(e.conditional_state(i, i), e.conditional_state(j, j))
                })
                .fold(0.0, f64::max);
            Separability {
                env: k,
                holds: max_distance < thresholds.equality_tol,
                max_distance,
                scope,
            }
        })
        .collect())
}

fn check_partition(layout: &FactorLayout, partition: &[usize]) -> Result<()> {
    let n = layout.len();
    if partition.is_empty() {
        return Err(Error::BadPartition("empty".into()));
    }
    if let Some(&bad) = partition.iter().find(|&&f| f >= n) {
        return Err(Error::BadPartition(format!("factor {bad} of {n}")));
    }
    let mut sorted = partition.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != partition.len() {
        return Err(Error::BadPartition(format!("duplicate factors in {partition:?}")));
    }
    if sorted.len() == n {
        return Err(Error::BadPartition("partition contains every factor".into()));
    }
    Ok(())
}

/// `(‖ρ^{T_S}‖₁ − Tr ρ) / 2` for an arbitrary matrix and layout.
pub fn negativity_of(rho: &ComplexMatrix, layout: &FactorLayout, partition: &[usize]) -> Result<f64> {
    check_partition(layout, partition)?;
    let pt = partial_transpose_many(rho, layout, partition)?;
    let value = 0.5 * (trace_norm(&pt)? - rho.trace().re);
    Ok(if value < NEGATIVITY_FLOOR { 0.0 } else { value })
}

/// Negativity of a joint state across `partition | complement`.
pub fn negativity(joint: &JointState, partition: &[usize]) -> Result<f64> {
    negativity_of(&joint.matrix, &joint.layout, partition)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrthogonalityScope {
    /// Every observed environment is strictly orthogonal.
    All,
    /// At least one, but not every, observed environment is.
    AtLeastOne,
    None,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StrictOrthogonalityCheck {
    pub per_env_orthogonal: Vec<bool>,
    pub scope: OrthogonalityScope,
    /// Negativity of the full joint state across system | rest.
    pub negativity: f64,
    /// `|a₀ a₁|`.
    pub expected: f64,
    pub deviation: f64,
    /// `None` when no environment is orthogonal and nothing is asserted.
    pub pass: Option<bool>,
}

/// Negativity under strict orthogonality must equal `|a₀a₁|`.
pub fn strict_orthogonality_entanglement_check(
    model: &DephasingModel,
    state: &SystemState,
    t: f64,
    thresholds: &Thresholds,
) -> Result<StrictOrthogonalityCheck> {
    if !model.is_qubit() {
        return Err(Error::NotAQubitSystem(model.system_dim));
    }
    let frame = conditional_unitaries(model, t)?;
    let joint = joint_state_from_frame(model, state, &frame)?;
    strict_orthogonality_from(&frame, &joint, thresholds)
}

fn strict_orthogonality_from(
    frame: &ConditionalFrame,
    joint: &JointState,
    thresholds: &Thresholds,
) -> Result<StrictOrthogonalityCheck> {
    if frame.system_dim != 2 {
        return Err(Error::NotAQubitSystem(frame.system_dim));
    }
    let per_env_orthogonal = frame
        .observed
        .iter()
        .map(|e| {
            orthogonality_residual(e.conditional_state(0, 0), e.conditional_state(1, 1))
                .map(|r| r <= thresholds.orthogonality_tol)
        })
        .collect::<Result<Vec<_>>>()?;
    let count = per_env_orthogonal.iter().filter(|&&o| o).count();
    let scope = match count {
        0 => OrthogonalityScope::None,
        c if c == per_env_orthogonal.len() => OrthogonalityScope::All,
        _ => OrthogonalityScope::AtLeastOne,
    };
    let negativity = negativity(joint, &[0])?;
    let a = &joint.amplitudes.amplitudes;
    let expected = (a[0] * a[1]).norm();
    let deviation = (negativity - expected).abs();
    let pass = (count > 0).then_some(deviation < NEGATIVITY_THEOREM_TOL);
    Ok(StrictOrthogonalityCheck {
        per_env_orthogonal,
        scope,
        negativity,
        expected,
        deviation,
        pass,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PurityBound {
    pub bound: f64,
    pub purity: f64,
    pub satisfied: bool,
}

/// Smallest initial purity that still allows orthogonal conditional states:
/// `2/d` for even `d`, `2/(d−1)` for odd `d`.
///
/// A one-dimensional environment can never hold two orthogonal states; it
/// gets the unattainable bound `2`.
pub fn purity_bound(dim: usize) -> f64 {
    match dim {
        0 | 1 => 2.0,
        d if d % 2 == 0 => 2.0 / d as f64,
        d => 2.0 / (d - 1) as f64,
    }
}

pub fn purity_bound_check(env: &EnvironmentSpec) -> Result<PurityBound> {
    let bound = purity_bound(env.dim);
    let p = purity(&env.initial)?;
    Ok(PurityBound {
        bound,
        purity: p,
        satisfied: p >= bound - PURITY_BOUND_SLACK,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankBound {
    pub rank: usize,
    pub max_allowed: usize,
    pub satisfied: bool,
}

/// Largest support dimension compatible with orthogonality: `⌊d/2⌋`.
pub fn max_support_rank(dim: usize) -> usize {
    dim / 2
}

/// Support rank of `ρ₀₀^k(t)` against `⌊d_k/2⌋`; a necessary condition for
/// orthogonality.
pub fn rank_bound_check(
    frame: &ConditionalFrame,
    k: usize,
    thresholds: &Thresholds,
) -> Result<RankBound> {
    let env = frame.observed_env(k)?;
    let rank = support_projector(env.conditional_state(0, 0), thresholds.support_tol)?.rank;
    let max_allowed = max_support_rank(env.dim());
    Ok(RankBound {
        rank,
        max_allowed,
        satisfied: rank <= max_allowed,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WStructure {
    /// `‖P w P‖_max` with `P` the support projector of `ρ₀₀`.
    pub norm: f64,
    pub tolerance: f64,
    pub satisfied: bool,
}

/// Support block test for a given conditional state and relative unitary.
pub fn relative_unitary_structure(
    rho00: &ComplexMatrix,
    w: &ComplexMatrix,
    thresholds: &Thresholds,
) -> Result<WStructure> {
    let p = support_projector(rho00, thresholds.support_tol)?.projector;
    let norm = p.matmul(w).matmul(&p).max_abs();
    let tolerance = thresholds.w_structure_tol();
    Ok(WStructure {
        norm,
        tolerance,
        satisfied: norm <= tolerance,
    })
}

/// The relative unitary `w₁w₀†` must map the support of `ρ₀₀^k(t)` into its
/// kernel: `P w P = 0`.
pub fn w_structure_check(
    frame: &ConditionalFrame,
    k: usize,
    thresholds: &Thresholds,
) -> Result<WStructure> {
    if frame.system_dim != 2 {
        return Err(Error::NotAQubitSystem(frame.system_dim));
    }
    let env = frame.observed_env(k)?;
    relative_unitary_structure(env.conditional_state(0, 0), &env.relative_unitary(), thresholds)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OverlapBound {
    /// `|Tr[w₁† w₀ ρ^k(0)]|`.
    pub lhs: f64,
    /// Generalized overlap of `ρ₀₀^k(t)` and `ρ₁₁^k(t)`.
    pub rhs: f64,
    pub satisfied: bool,
}

pub fn overlap_bound_check(frame: &ConditionalFrame, k: usize) -> Result<OverlapBound> {
    let lhs = env_decoherence_factor(frame, k)?.norm();
    let env = frame.observed_env(k)?;
    let rhs = generalized_overlap(env.conditional_state(0, 0), env.conditional_state(1, 1))?;
    Ok(OverlapBound {
        lhs,
        rhs,
        satisfied: lhs <= rhs + OVERLAP_BOUND_SLACK,
    })
}

/// Diagnostics for one observed environment.
#[derive(Clone, Debug, PartialEq)]
pub struct EnvReport {
    pub index: usize,
    pub dim: usize,
    /// Largest `‖ρ_ii ρ_jj‖₁` over pointer pairs.
    pub orthogonality_residual: f64,
    /// Largest generalized overlap over pointer pairs.
    pub generalized_overlap: f64,
    /// Largest `max|ρ_ii − ρ_jj|` over pointer pairs.
    pub conditional_state_distance: f64,
    /// Support rank of each `ρ_ii(t)`.
    pub support_ranks: Vec<usize>,
    pub decoherence_factor: C64,
    pub purity_bound: PurityBound,
    pub rank_bound: RankBound,
    /// Only for qubit systems.
    pub w_structure: Option<WStructure>,
    pub overlap_bound: OverlapBound,
    pub separable: bool,
    pub strictly_orthogonal: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GammaEntry {
    pub i: usize,
    pub j: usize,
    pub value: C64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NegativityEntry {
    /// `"S|rest"`, `"S|observed"` or `"S|E{k}"`.
    pub label: String,
    /// Factors on the system side, in the layout of the state it was taken on.
    pub factors: Vec<usize>,
    pub value: f64,
}

/// Everything known about the state at one time, plus the verdicts.
#[derive(Clone, Debug, PartialEq)]
pub struct SbsReport {
    pub time: f64,
    pub thresholds: Thresholds,
    pub system_dim: usize,
    /// `Γ_ij` for `i < j`; empty without an unobserved environment.
    pub gamma: Vec<GammaEntry>,
    pub envs: Vec<EnvReport>,
    pub negativities: Vec<NegativityEntry>,
    /// Reduced system state.
    pub system_state: ComplexMatrix,
    /// Largest `|⟨i|ρ_S|j⟩|`, `i ≠ j`.
    pub max_coherence: f64,
    /// All `|Γ_ij| < decoherence_tol`; `None` without an unobserved environment.
    pub decohered: Option<bool>,
    pub separable_condition_met: bool,
    pub separability_scope: SeparabilityScope,
    pub strict_orthogonality_envs: Vec<usize>,
    pub sbs_reached: bool,
    /// Separability of every observed environment rules out SBS.
    pub proposition1_consistent: bool,
    /// Qubit systems only.
    pub strict_orthogonality: Option<StrictOrthogonalityCheck>,
}

impl SbsReport {
    pub fn negativity(&self, label: &str) -> Option<f64> {
        self.negativities
            .iter()
            .find(|n| n.label == label)
            .map(|n| n.value)
    }
}

fn env_report(
    frame: &ConditionalFrame,
    model: &DephasingModel,
    k: usize,
    thresholds: &Thresholds,
) -> Result<EnvReport> {
    let env = &frame.observed[k];
    let d = frame.system_dim;
    let (mut residual, mut overlap, mut distance) = (0.0f64, 0.0f64, 0.0f64);
    for (i, j) in pairs(d) {
        let (a, b) = (env.conditional_state(i, i), env.conditional_state(j, j));
        residual = residual.max(orthogonality_residual(a, b)?);
        overlap = overlap.max(generalized_overlap(a, b)?);
        distance = distance.max(conditional_state_distance(a, b));
    }
    let support_ranks = (0..d)
        .map(|i| support_projector(env.conditional_state(i, i), thresholds.support_tol).map(|s| s.rank))
        .collect::<Result<Vec<_>>>()?;
    Ok(EnvReport {
        index: k,
        dim: env.dim(),
        orthogonality_residual: residual,
        generalized_overlap: overlap,
        conditional_state_distance: distance,
        support_ranks,
        decoherence_factor: env.coherence_factor(0, 1),
        purity_bound: purity_bound_check(&model.observed[k])?,
        rank_bound: rank_bound_check(frame, k, thresholds)?,
        w_structure: (d == 2)
            .then(|| w_structure_check(frame, k, thresholds))
            .transpose()?,
        overlap_bound: overlap_bound_check(frame, k)?,
        separable: distance < thresholds.equality_tol,
        strictly_orthogonal: residual <= thresholds.orthogonality_tol,
    })
}

fn negativity_entries(model: &DephasingModel, joint: &JointState) -> Result<Vec<NegativityEntry>> {
    let mut out = alloc::vec![NegativityEntry {
        label: "S|rest".into(),
        factors: alloc::vec![0],
        value: negativity(joint, &[0])?,
    }];
    if model.unobserved.is_some() && !model.observed.is_empty() {
        let obs = observed_state(joint, model)?;
        out.push(NegativityEntry {
            label: "S|observed".into(),
            factors: alloc::vec![0],
            value: negativity(&obs, &[0])?,
        });
    }
    for k in 0..model.observed.len() {
        let (reduced, layout) =
            partial_trace(&joint.matrix, &joint.layout, &[0, model.observed_factor(k)])?;
        out.push(NegativityEntry {
            label: format!("S|E{k}"),
            factors: alloc::vec![0],
            value: negativity_of(&reduced, &layout, &[0])?,
        });
    }
    Ok(out)
}

/// Full diagnostic report and SBS verdict at time `t`.
///
/// SBS is reached when there is at least one observed environment, every
/// observed environment is strictly orthogonal for every pointer pair, and
/// (if an unobserved environment is present) every `|Γ_ij|` is below
/// `decoherence_tol`.
pub fn sbs_verdict(
    model: &DephasingModel,
    state: &SystemState,
    t: f64,
    thresholds: &Thresholds,
) -> Result<SbsReport> {
    thresholds.validate()?;
    let frame = conditional_unitaries(model, t)?;
    let joint = joint_state_from_frame(model, state, &frame)?;
    sbs_verdict_from(model, &frame, &joint, thresholds)
}

/// [`sbs_verdict`] on an already evolved frame and joint state.
pub fn sbs_verdict_from(
    model: &DephasingModel,
    frame: &ConditionalFrame,
    joint: &JointState,
    thresholds: &Thresholds,
) -> Result<SbsReport> {
    let d = model.system_dim;
    let gamma = if frame.unobserved.is_some() {
        pairs(d)
            .map(|(i, j)| decoherence_factor(frame, i, j).map(|value| GammaEntry { i, j, value }))
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    let decohered = frame
        .unobserved
        .as_ref()
        .map(|_| gamma.iter().all(|g| g.value.norm() < thresholds.decoherence_tol));

    let envs = (0..model.observed.len())
        .map(|k| env_report(frame, model, k, thresholds))
        .collect::<Result<Vec<_>>>()?;
    let separable_condition_met = envs.iter().all(|e| e.separable);
    let strict_orthogonality_envs: Vec<usize> = envs
        .iter()
        .filter(|e| e.strictly_orthogonal)
        .map(|e| e.index)
        .collect();
    let sbs_reached = !envs.is_empty()
        && strict_orthogonality_envs.len() == envs.len()
        && decohered.unwrap_or(true);

    let system = system_state(joint);
    let max_coherence = pairs(d)
        .map(|(i, j)| system[(i, j)].norm())
        .fold(0.0, f64::max);

    Ok(SbsReport {
        time: frame.time,
        thresholds: *thresholds,
        system_dim: d,
        gamma,
        negativities: negativity_entries(model, joint)?,
        system_state: system,
        max_coherence,
        decohered,
        separable_condition_met,
        separability_scope: SeparabilityScope::for_system(d),
        strict_orthogonality_envs,
        sbs_reached,
        proposition1_consistent: !(separable_condition_met && sbs_reached),
        strict_orthogonality: (d == 2)
            .then(|| strict_orthogonality_from(frame, joint, thresholds))
            .transpose()?,
        envs,
    })
}

/// Smallest eigenvalue of a Hermitian matrix; used to audit emitted states.
pub fn min_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    Ok(herm_eigenvalues(m)?[0])
}
