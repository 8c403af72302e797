//! Brute-force references for the fast block-wise code paths.
//!
//! Everything here is rebuilt from matrix primitives: the joint state comes
//! from one dense evolution operator over the whole Hilbert space, Negativity
//! from the full spectrum of the partial transpose, and decoherence factors
//! from closed forms where they exist. The implication suite then samples
//! seeded models and checks the structural theorems against these references.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagnostics::{negativity, sbs_verdict_from, SbsReport, Thresholds};
use crate::dynamics::{
    conditional_unitaries, decoherence_factor, joint_state_from_frame, predicted_coherence,
    ConditionalFrame, EnvFrame,
};
use crate::error::{Error, Result};
use crate::linalg::{herm_eigenvalues, psd_sqrt, trace_norm, unitary_exp};
use crate::matrix::{partial_trace, partial_transpose_many, tensor, ComplexMatrix, FactorLayout, C64};
use crate::model::{
    orthogonalization_time, random_density_matrix, random_environment, random_hermitian,
    random_orthogonalizing_environment, random_system_state, spin_bath_environment,
    DephasingModel, EnvironmentSpec, SystemState,
};
use crate::ORACLE_SCALE_CAP;

/// Dense joint state against block assembly, elementwise.
pub const JOINT_STATE_TOL: f64 = 1e-9;
/// Spectral Negativity against the trace-norm formula.
pub const NEGATIVITY_TOL: f64 = 1e-10;
/// Separability must leave no Negativity above this.
pub const SEPARABLE_NEGATIVITY_TOL: f64 = 1e-9;
/// Negativity counted as zero when testing the converse.
pub const ZERO_NEGATIVITY: f64 = 1e-12;
/// Decoherence factors against their references.
pub const GAMMA_TOL: f64 = 1e-9;
/// Slack on `|Γ| ≤ B`.
pub const OVERLAP_SLACK: f64 = 1e-9;
/// Negativity against `|a₀a₁|` under strict orthogonality.
pub const ORTHOGONAL_NEGATIVITY_TOL: f64 = 1e-8;
/// Remaining system coherence under strict orthogonality.
pub const DEPHASING_TOL: f64 = 1e-9;
/// Purity and population conservation.
pub const CONSERVATION_TOL: f64 = 1e-10;

fn check_oracle_scale(dim: usize) -> Result<()> {
    if dim > ORACLE_SCALE_CAP {
        return Err(Error::DimensionTooLarge {
            dim,
            cap: ORACLE_SCALE_CAP,
        });
    }
    Ok(())
}

fn embed(op: &ComplexMatrix, at: usize, dims: &[usize]) -> Result<ComplexMatrix> {
    let factors: Vec<ComplexMatrix> = dims
        .iter()
        .enumerate()
        .map(|(f, &d)| if f == at { op.clone() } else { ComplexMatrix::identity(d) })
        .collect();
    tensor(&factors)
}

/// The full Hamiltonian `Σ_i |i⟩⟨i| ⊗ (ε_i + Σ_env V_env^i)` as one matrix.
pub fn dense_hamiltonian(model: &DephasingModel) -> Result<ComplexMatrix> {
    let dims = model.factor_dims();
    let total = model.total_dim();
    check_oracle_scale(total)?;
    let env_dims = &dims[1..];
    let env_total: usize = env_dims.iter().product();
    let envs: Vec<&EnvironmentSpec> = model.environments().map(|(_, e)| e).collect();
    let mut h = ComplexMatrix::zeros(total, total);
    for i in 0..model.system_dim {
        let mut conditional = ComplexMatrix::identity(env_total).scale_real(model.energies[i]);
        for (slot, env) in envs.iter().enumerate() {
            if env_dims.is_empty() {
                break;
            }
            conditional = &conditional + &embed(&env.generators[i], slot, env_dims)?;
        }
        let pointer = ComplexMatrix::basis_projector(model.system_dim, i);
        h = &h + &pointer.kron(&conditional);
    }
    Ok(h)
}

/// Initial product state `|ψ⟩⟨ψ| ⊗ ρ_unobs ⊗ ρ_1 ⊗ …`.
pub fn dense_initial_state(model: &DephasingModel, state: &SystemState) -> Result<ComplexMatrix> {
    let mut factors = vec![ComplexMatrix::projector(&state.amplitudes)];
    factors.extend(model.environments().map(|(_, e)| e.initial.clone()));
    tensor(&factors)
}

/// `U ρ(0) U†` with `U = exp(−iHt)` built over the whole space.
pub fn dense_joint_state(model: &DephasingModel, state: &SystemState, t: f64) -> Result<ComplexMatrix> {
    check_oracle_scale(model.total_dim())?;
    let u = unitary_exp(&dense_hamiltonian(model)?, t)?;
    Ok(dense_initial_state(model, state)?.conjugate_by(&u))
}

/// Negated sum of the negative eigenvalues of the partial transpose.
pub fn eigen_negativity(rho: &ComplexMatrix, layout: &FactorLayout, partition: &[usize]) -> Result<f64> {
    check_oracle_scale(rho.rows())?;
    let pt = partial_transpose_many(rho, layout, partition)?;
    let negative: f64 = herm_eigenvalues(&pt.hermitian_part())?
        .into_iter()
        .filter(|&l| l < 0.0)
        .sum();
    Ok(-negative)
}

/// `Π_j cos(g_j t)` for a spin bath starting in `|0…0⟩`.
pub fn spin_bath_gamma_closed_form(couplings: &[f64], t: f64) -> f64 {
    couplings.iter().map(|g| (g * t).cos()).product()
}

/// Where a verdict came from, enough to rebuild it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Replay {
    pub seed: u64,
    pub sample: usize,
    pub time_index: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OracleValue {
    Real(f64),
    Complex(C64),
}

impl OracleValue {
    fn as_complex(self) -> C64 {
        match self {
            Self::Real(x) => C64::new(x, 0.0),
            Self::Complex(z) => z,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleVerdict {
    pub quantity: String,
    pub fast: OracleValue,
    pub oracle: OracleValue,
    /// Distance for equalities, violation `max(0, fast − oracle)` for bounds.
    pub abs_diff: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub replay: Option<Replay>,
}

impl OracleVerdict {
    /// Passes when `|fast − oracle| ≤ tolerance`.
    pub fn equal(quantity: impl Into<String>, fast: OracleValue, oracle: OracleValue, tolerance: f64) -> Self {
        let abs_diff = (fast.as_complex() - oracle.as_complex()).norm();
        Self::finish(quantity.into(), fast, oracle, abs_diff, tolerance)
    }

    /// Passes when `fast ≤ oracle + tolerance`.
    pub fn at_most(quantity: impl Into<String>, fast: f64, oracle: f64, tolerance: f64) -> Self {
        let excess = fast - oracle;
        let abs_diff = if excess.is_nan() { excess } else { excess.max(0.0) };
        Self::finish(quantity.into(), OracleValue::Real(fast), OracleValue::Real(oracle), abs_diff, tolerance)
    }

    fn finish(quantity: String, fast: OracleValue, oracle: OracleValue, abs_diff: f64, tolerance: f64) -> Self {
        Self {
            quantity,
            fast,
            oracle,
            abs_diff,
            tolerance,
            // NaN never passes
            pass: abs_diff <= tolerance,
            replay: None,
        }
    }

    fn failure(quantity: String, replay: Option<Replay>) -> Self {
        Self {
            quantity,
            fast: OracleValue::Real(f64::NAN),
            oracle: OracleValue::Real(f64::NAN),
            abs_diff: f64::INFINITY,
            tolerance: 0.0,
            pass: false,
            replay,
        }
    }

    fn with_replay(mut self, replay: Option<Replay>) -> Self {
        self.replay = replay;
        self
    }
}

/// Verdicts that did not pass.
pub fn counterexamples(verdicts: &[OracleVerdict]) -> Vec<&OracleVerdict> {
    verdicts.iter().filter(|v| !v.pass).collect()
}

fn real(x: f64) -> OracleValue {
    OracleValue::Real(x)
}

/// Compares every fast quantity at time `t` with its dense reference:
/// joint state, system coherences, Negativity, and decoherence factors of
/// the unobserved environment.
pub fn cross_check(
    model: &DephasingModel,
    state: &SystemState,
    t: f64,
    thresholds: &Thresholds,
) -> Result<Vec<OracleVerdict>> {
    thresholds.validate()?;
    let frame = conditional_unitaries(model, t)?;
    let joint = joint_state_from_frame(model, state, &frame)?;
    let dense = dense_joint_state(model, state, t)?;
    let mut out = vec![OracleVerdict::equal(
        "joint_state_max_abs_diff",
        real(joint.matrix.max_abs_diff(&dense)),
        real(0.0),
        JOINT_STATE_TOL,
    )];

    let (system, _) = partial_trace(&dense, &joint.layout, &[0])?;
    for i in 0..model.system_dim {
        for j in i + 1..model.system_dim {
            out.push(OracleVerdict::equal(
                format!("system_coherence_{i}_{j}"),
                OracleValue::Complex(predicted_coherence(model, state, &frame, i, j)),
                OracleValue::Complex(system[(i, j)]),
                JOINT_STATE_TOL,
            ));
        }
    }

    out.push(OracleVerdict::equal(
        "negativity_system_rest",
        real(negativity(&joint, &[0])?),
        real(eigen_negativity(&dense, &joint.layout, &[0])?),
        NEGATIVITY_TOL,
    ));

    if let Some(env) = &model.unobserved {
        for i in 0..model.system_dim {
            for j in i + 1..model.system_dim {
                let wi = unitary_exp(&env.generators[i], t)?;
                let wj = unitary_exp(&env.generators[j], t)?;
                let reference = wj.dagger().matmul(&wi).matmul(&env.initial).trace();
                out.push(OracleVerdict::equal(
                    format!("gamma_{i}_{j}"),
                    OracleValue::Complex(decoherence_factor(&frame, i, j)?),
                    OracleValue::Complex(reference),
                    GAMMA_TOL,
                ));
            }
        }
    }
    Ok(out)
}

/// Parameters of the implication suite.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Observed-environment dimensions to draw from.
    pub dims: Vec<usize>,
    pub times_per_sample: usize,
    pub thresholds: Thresholds,
    /// Negative control: scale `w₁` of the first observed environment by
    /// 1.05 so it stops being unitary. Every sample must then fail.
    pub corrupt: bool,
}

impl SuiteConfig {
    pub fn new(seed: u64, dims: Vec<usize>) -> Self {
        Self {
            seed,
            dims,
            times_per_sample: 3,
            thresholds: Thresholds::default(),
            corrupt: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() {
            return Err(Error::EmptyList);
        }
        for &d in &self.dims {
            if d == 0 {
                return Err(Error::Shape("environment dimension 0".into()));
            }
            // qubit × observed × two-spin bath
            check_oracle_scale(2 * d * 4)?;
        }
        self.thresholds.validate()
    }

    /// Independent stream per sample, so any sample replays on its own.
    pub fn sample_rng(&self, sample: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(sample as u64);
        rng
    }
}

/// Which family a sample is drawn from; cycles with the sample index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleKind {
    Generic,
    EqualGenerators,
    Orthogonalizing,
    WithSpinBath,
}

impl SampleKind {
    pub fn of(sample: usize) -> Self {
        match sample % 4 {
            0 => Self::Generic,
            1 => Self::EqualGenerators,
            2 => Self::Orthogonalizing,
            _ => Self::WithSpinBath,
        }
    }
}

/// A qubit model drawn for one sample, with its time grid.
#[derive(Clone, Debug)]
pub struct Sample {
    pub kind: SampleKind,
    pub model: DephasingModel,
    pub state: SystemState,
    pub times: Vec<f64>,
}

fn uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

fn random_purity<R: Rng + ?Sized>(rng: &mut R, d: usize) -> f64 {
    uniform(rng, 1.0 / d as f64, 1.0)
}

pub fn draw_sample(config: &SuiteConfig, sample: usize) -> Result<Sample> {
    let mut rng = config.sample_rng(sample);
    let d = config.dims[rng.random_range(0..config.dims.len())];
    let kind = SampleKind::of(sample);
    let energies = vec![uniform(&mut rng, -1.0, 1.0), uniform(&mut rng, -1.0, 1.0)];
    let mut unobserved = None;
    let mut first_time = None;
    let observed = match kind {
        SampleKind::Generic => {
            let p = random_purity(&mut rng, d);
            random_environment(&mut rng, d, p, 2)?
        }
        SampleKind::EqualGenerators => {
            let p = random_purity(&mut rng, d);
            let initial = random_density_matrix(&mut rng, d, p)?;
            let v = random_hermitian(&mut rng, d, 1.0);
            EnvironmentSpec::new(initial, vec![v.clone(), v])
        }
        SampleKind::Orthogonalizing => {
            let g = uniform(&mut rng, 0.5, 2.0);
            first_time = Some(orthogonalization_time(g));
            random_orthogonalizing_environment(&mut rng, d.max(2), g)?
        }
        SampleKind::WithSpinBath => {
            let spins = rng.random_range(1..=2);
            let couplings: Vec<f64> = (0..spins).map(|_| uniform(&mut rng, 0.2, 2.0)).collect();
            unobserved = Some(spin_bath_environment(&couplings)?);
            let p = random_purity(&mut rng, d);
            random_environment(&mut rng, d, p, 2)?
        }
    };
    let state = random_system_state(&mut rng, 2);
    let times = (0..config.times_per_sample)
        .map(|k| match (k, first_time) {
            (0, Some(t)) => t,
            _ => uniform(&mut rng, 0.0, TAU),
        })
        .collect();
    Ok(Sample {
        kind,
        model: DephasingModel {
            system_dim: 2,
            energies,
            unobserved,
            observed: vec![observed],
        },
        state,
        times,
    })
}

fn corrupt_frame(frame: &mut ConditionalFrame) {
    if let Some(env) = frame.observed.first_mut() {
        let mut unitaries = env.unitaries.clone();
        unitaries[1] = unitaries[1].scale_real(1.05);
        *env = EnvFrame::from_unitaries(env.id, env.initial.clone(), unitaries);
    }
}

fn sum_sq(m: &ComplexMatrix) -> f64 {
    m.as_slice().iter().map(|z| z.norm_sqr()).sum()
}

fn conservation_verdicts(frame: &ConditionalFrame, joint_system: &ComplexMatrix, state: &SystemState) -> Vec<OracleVerdict> {
    let mut out = Vec::new();
    for env in frame.environments() {
        let initial = sum_sq(&env.initial);
        for i in 0..frame.system_dim {
            out.push(OracleVerdict::equal(
                format!("purity_conservation_{}_{i}", env.id),
                real(sum_sq(env.conditional_state(i, i))),
                real(initial),
                CONSERVATION_TOL,
            ));
        }
    }
    for (i, a) in state.amplitudes.iter().enumerate() {
        out.push(OracleVerdict::equal(
            format!("population_{i}"),
            real(joint_system[(i, i)].re),
            real(a.norm_sqr()),
            CONSERVATION_TOL,
        ));
    }
    out
}

fn implication_verdicts(
    model: &DephasingModel,
    frame: &ConditionalFrame,
    report: &SbsReport,
    joint_matrix: &ComplexMatrix,
    layout: &FactorLayout,
    state: &SystemState,
) -> Result<Vec<OracleVerdict>> {
    let mut out = Vec::new();
    let th = &report.thresholds;

    // separable ⇒ no entanglement with the observed environments
    if report.separable_condition_met && !report.envs.is_empty() {
        let label = if model.unobserved.is_some() { "S|observed" } else { "S|rest" };
        if let Some(n) = report.negativity(label) {
            out.push(OracleVerdict::at_most(
                format!("separable_implies_zero_negativity[{label}]"),
                n,
                0.0,
                SEPARABLE_NEGATIVITY_TOL,
            ));
        }
    }

    // no entanglement ⇒ separable, for a single environment
    if model.unobserved.is_none() && report.envs.len() == 1 {
        let n = eigen_negativity(joint_matrix, layout, &[0])?;
        if n < ZERO_NEGATIVITY {
            out.push(OracleVerdict::at_most(
                "zero_negativity_implies_separable",
                report.envs[0].conditional_state_distance,
                0.0,
                th.equality_tol,
            ));
        }
    }

    // |Tr[w₁†w₀ρ]| ≤ ‖√ρ₀₀ √ρ₁₁‖₁
    for (k, env) in frame.observed.iter().enumerate() {
        let gamma = env.unitaries[1]
            .dagger()
            .matmul(&env.unitaries[0])
            .matmul(&env.initial)
            .trace()
            .norm();
        let overlap = trace_norm(
            &psd_sqrt(env.conditional_state(0, 0))?.matmul(&psd_sqrt(env.conditional_state(1, 1))?),
        )?;
        out.push(OracleVerdict::at_most(format!("overlap_bound_env{k}"), gamma, overlap, OVERLAP_SLACK));
    }

    // strict orthogonality ⇒ Negativity |a₀a₁| and no coherence left
    if !report.strict_orthogonality_envs.is_empty() {
        let a = &state.amplitudes;
        out.push(OracleVerdict::equal(
            "orthogonal_negativity",
            real(eigen_negativity(joint_matrix, layout, &[0])?),
            real((a[0] * a[1]).norm()),
            ORTHOGONAL_NEGATIVITY_TOL,
        ));
        out.push(OracleVerdict::at_most(
            "orthogonal_full_dephasing",
            report.max_coherence,
            0.0,
            DEPHASING_TOL,
        ));
    }
    Ok(out)
}

/// All verdicts for one sample. Errors while evaluating a sample become
/// failing verdicts rather than aborting the suite.
pub fn implication_sample(config: &SuiteConfig, sample: usize) -> Vec<OracleVerdict> {
    let fail = |what: String, time_index: usize| {
        OracleVerdict::failure(
            what,
            Some(Replay {
                seed: config.seed,
                sample,
                time_index,
            }),
        )
    };
    let drawn = match draw_sample(config, sample) {
        Ok(s) => s,
        Err(e) => return vec![fail(format!("draw: {e}"), 0)],
    };
    let mut out = Vec::new();
    for (time_index, &t) in drawn.times.iter().enumerate() {
        let replay = Some(Replay {
            seed: config.seed,
            sample,
            time_index,
        });
        match evaluate(config, &drawn, t) {
            Ok(verdicts) => out.extend(verdicts.into_iter().map(|v| v.with_replay(replay))),
            Err((mut partial, e)) => {
                partial.push(fail(format!("evaluation: {e}"), time_index));
                out.extend(partial.into_iter().map(|v| v.with_replay(replay)));
            }
        }
    }
    out
}

fn evaluate(
    config: &SuiteConfig,
    sample: &Sample,
    t: f64,
) -> core::result::Result<Vec<OracleVerdict>, (Vec<OracleVerdict>, Error)> {
    let model = &sample.model;
    let mut frame = conditional_unitaries(model, t).map_err(|e| (Vec::new(), e))?;
    if config.corrupt {
        corrupt_frame(&mut frame);
    }
    let joint = joint_state_from_frame(model, &sample.state, &frame).map_err(|e| (Vec::new(), e))?;
    let (system, _) = partial_trace(&joint.matrix, &joint.layout, &[0]).map_err(|e| (Vec::new(), e))?;
    let mut out = conservation_verdicts(&frame, &system, &sample.state);
    let more = sbs_verdict_from(model, &frame, &joint, &config.thresholds).and_then(|report| {
        implication_verdicts(model, &frame, &report, &joint.matrix, &joint.layout, &sample.state)
    });
    match more {
        Ok(v) => {
            out.extend(v);
            Ok(out)
        }
        Err(e) => Err((out, e)),
    }
}

/// Runs [`implication_sample`] for samples `0..n_samples`.
pub fn run_suite(config: &SuiteConfig, n_samples: usize) -> Result<Vec<OracleVerdict>> {
    config.validate()?;
    Ok((0..n_samples).flat_map(|s| implication_sample(config, s)).collect())
}

/// Seeded qubit models over the given observed-environment dimensions.
pub fn sampled_implication_suite(n_samples: usize, seed: u64, dims: &[usize]) -> Result<Vec<OracleVerdict>> {
    run_suite(&SuiteConfig::new(seed, dims.to_vec()), n_samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::joint_state;
    use crate::matrix::FactorLayout;
    use crate::model::{orthogonalizing_model, random_model, spin_bath_model};
    use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_3, PI};

    fn plus() -> SystemState {
        SystemState::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2])
    }

    #[test]
    fn dense_state_at_zero_is_initial() {
        let model = random_model(3, 2, &[2, 3], &[0.8, 0.5]).unwrap();
        let state = plus();
        let dense = dense_joint_state(&model, &state, 0.0).unwrap();
        assert!(dense.max_abs_diff(&dense_initial_state(&model, &state).unwrap()) < 1e-15);
    }

    #[test]
    fn dense_state_matches_block_assembly() {
        let model = orthogonalizing_model(1, 1.0);
        let t = orthogonalization_time(1.0);
        let dense = dense_joint_state(&model, &plus(), t).unwrap();
        assert!(dense.max_abs_diff(&joint_state(&model, &plus(), t).unwrap().matrix) < 1e-12);

        let mut model = random_model(13, 2, &[2, 3], &[0.9, 0.6]).unwrap();
        model.unobserved = Some(spin_bath_environment(&[0.7]).unwrap());
        let state = SystemState::from_real(&[0.6, 0.8]);
        for t in [0.3, 1.1, 2.9] {
            let dense = dense_joint_state(&model, &state, t).unwrap();
            let fast = joint_state(&model, &state, t).unwrap().matrix;
            assert!(dense.max_abs_diff(&fast) < 1e-9);
        }
    }

    #[test]
    fn dense_state_respects_cap() {
        let model = random_model(1, 2, &[16, 16], &[0.5, 0.5]).unwrap();
        assert!(matches!(
            dense_joint_state(&model, &plus(), 1.0),
            Err(Error::DimensionTooLarge { dim: 512, cap: 256 })
        ));
    }

    #[test]
    fn eigen_negativity_examples() {
        let layout = FactorLayout::new(vec![2, 2]).unwrap();
        let h = FRAC_1_SQRT_2;
        let bell = ComplexMatrix::projector(&[C64::new(h, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(h, 0.0)]);
        assert!((eigen_negativity(&bell, &layout, &[0]).unwrap() - 0.5).abs() < 1e-12);
        let product = ComplexMatrix::basis_projector(2, 0).kron(&ComplexMatrix::from_real_diag(&[0.3, 0.7]));
        assert!(eigen_negativity(&product, &layout, &[0]).unwrap().abs() < 1e-14);
        let (a0, a1) = (0.9f64.sqrt(), 0.1f64.sqrt());
        let psi = [C64::new(a0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(a1, 0.0)];
        let n = eigen_negativity(&ComplexMatrix::projector(&psi), &layout, &[0]).unwrap();
        assert!((n - 0.3).abs() < 1e-12);
    }

    #[test]
    fn closed_form_examples() {
        assert!((spin_bath_gamma_closed_form(&[1.0], FRAC_PI_3) - 0.5).abs() < 1e-15);
        assert_eq!(spin_bath_gamma_closed_form(&[0.4, 2.5], 0.0), 1.0);
        assert!(spin_bath_gamma_closed_form(&[1.0, 2.0], FRAC_PI_2).abs() < 1e-15);

        let couplings = [0.3, 1.1, 0.8];
        let model = spin_bath_model(3, &couplings).unwrap();
        for t in [0.2, 1.0, PI] {
            let frame = conditional_unitaries(&model, t).unwrap();
            let gamma = decoherence_factor(&frame, 0, 1).unwrap();
            assert!((gamma.re - spin_bath_gamma_closed_form(&couplings, t)).abs() < 1e-12);
            assert!(gamma.im.abs() < 1e-12);
        }
    }

    #[test]
    fn cross_check_passes() {
        let th = Thresholds::default();
        let model = orthogonalizing_model(2, 1.0);
        let verdicts = cross_check(&model, &plus(), orthogonalization_time(1.0), &th).unwrap();
        assert!(verdicts.iter().all(|v| v.pass), "{verdicts:?}");

        let mut model = random_model(5, 3, &[2], &[0.7]).unwrap();
        model.unobserved = Some(random_environment(&mut crate::model::seeded_rng(9), 3, 0.8, 3).unwrap());
        let state = random_system_state(&mut crate::model::seeded_rng(10), 3);
        let verdicts = cross_check(&model, &state, 0.9, &th).unwrap();
        assert_eq!(verdicts.iter().filter(|v| v.quantity.starts_with("gamma")).count(), 3);
        assert!(verdicts.iter().all(|v| v.pass), "{verdicts:?}");
    }

    #[test]
    fn verdict_semantics() {
        let v = OracleVerdict::at_most("x", 0.5, 0.4, 0.2);
        assert!(v.pass && (v.abs_diff - 0.1).abs() < 1e-15);
        let v = OracleVerdict::at_most("x", 0.1, 0.4, 0.0);
        assert!(v.pass && v.abs_diff == 0.0);
        let v = OracleVerdict::equal("x", real(f64::NAN), real(0.0), 1.0);
        assert!(!v.pass);
        let v = OracleVerdict::at_most("x", f64::NAN, 0.0, 1.0);
        assert!(!v.pass);
    }

    #[test]
    fn suite_small_run() {
        assert!(sampled_implication_suite(0, 1, &[2]).unwrap().is_empty());
        let verdicts = sampled_implication_suite(40, 7, &[2, 3, 4]).unwrap();
        assert!(counterexamples(&verdicts).is_empty(), "{:?}", counterexamples(&verdicts));
        for q in ["orthogonal_negativity", "separable_implies_zero_negativity", "overlap_bound", "purity_conservation"] {
            assert!(verdicts.iter().any(|v| v.quantity.starts_with(q)), "{q} never exercised");
        }
    }

    #[test]
    fn suite_replays_samples() {
        let config = SuiteConfig::new(21, vec![2, 3]);
        let all = run_suite(&config, 6).unwrap();
        let fifth = implication_sample(&config, 5);
        let from_all: Vec<_> = all.iter().filter(|v| v.replay.unwrap().sample == 5).cloned().collect();
        assert_eq!(fifth, from_all);
    }

    #[test]
    fn negative_control_is_caught() {
        let mut config = SuiteConfig::new(3, vec![2, 3]);
        config.corrupt = true;
        let verdicts = run_suite(&config, 8).unwrap();
        for s in 0..8 {
            assert!(
                verdicts.iter().any(|v| !v.pass && v.replay.unwrap().sample == s),
                "sample {s} corrupted without a counterexample"
            );
        }
        let bad = counterexamples(&verdicts)[0];
        assert_eq!(bad.replay.unwrap().seed, 3);
    }

    #[test]
    fn suite_config_errors() {
        assert!(matches!(sampled_implication_suite(1, 0, &[]), Err(Error::EmptyList)));
        assert!(matches!(
            sampled_implication_suite(1, 0, &[64]),
            Err(Error::DimensionTooLarge { .. })
        ));
    }
}
