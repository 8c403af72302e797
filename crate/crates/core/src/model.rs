//! The pure-dephasing model and its initial state.
//!
//! The Hamiltonian is block diagonal in the system pointer basis:
//!
//! ```text
//! H = Σ_i |i⟩⟨i| ⊗ (ε_i + V_not^i + Σ_k V_k^i)
//! ```
//!
//! where each conditional generator `V^i` already contains the free
//! Hamiltonian of its environment. Environments never couple to each other.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{EnvId, Error, Result};
use crate::linalg::{herm_eigenvalues, HERMITIAN_TOL};
use crate::matrix::{ComplexMatrix, C64, ONE, ZERO};
use crate::DESK_SCALE_CAP;

/// Trace and PSD tolerance for initial environment states.
pub const DENSITY_TOL: f64 = 1e-10;

/// Amplitude norms off by less than this are renormalized; more is an error.
pub const RENORMALIZE_TOL: f64 = 1e-8;

/// One environment: its initial state and one conditional generator per
/// system pointer state.
#[derive(Clone, Debug, PartialEq)]
pub struct EnvironmentSpec {
    pub dim: usize,
    pub initial: ComplexMatrix,
    /// `generators[i]` drives the environment while the system is in `|i⟩`.
    pub generators: Vec<ComplexMatrix>,
}

impl EnvironmentSpec {
    pub fn new(initial: ComplexMatrix, generators: Vec<ComplexMatrix>) -> Self {
        Self {
            dim: initial.rows(),
            initial,
            generators,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DephasingModel {
    pub system_dim: usize,
    /// Pointer energies `ε_i`.
    pub energies: Vec<f64>,
    pub unobserved: Option<EnvironmentSpec>,
    pub observed: Vec<EnvironmentSpec>,
}

impl DephasingModel {
    /// All environments in factor order: unobserved first, then observed.
    pub fn environments(&self) -> impl Iterator<Item = (EnvId, &EnvironmentSpec)> {
        self.unobserved
            .iter()
            .map(|e| (EnvId::Unobserved, e))
            .chain(self.observed.iter().enumerate().map(|(k, e)| (EnvId::Observed(k), e)))
    }

    pub fn env(&self, id: EnvId) -> Option<&EnvironmentSpec> {
        match id {
            EnvId::Unobserved => self.unobserved.as_ref(),
            EnvId::Observed(k) => self.observed.get(k),
        }
    }

    /// Factor dimensions `[d_S, d_not?, d_1, …, d_N]`.
    pub fn factor_dims(&self) -> Vec<usize> {
        core::iter::once(self.system_dim)
            .chain(self.environments().map(|(_, e)| e.dim))
            .collect()
    }

    /// Factor index of observed environment `k` in the joint layout.
    pub fn observed_factor(&self, k: usize) -> usize {
        1 + usize::from(self.unobserved.is_some()) + k
    }

    pub fn total_dim(&self) -> usize {
        self.factor_dims()
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .unwrap_or(usize::MAX)
    }

    pub fn is_qubit(&self) -> bool {
        self.system_dim == 2
    }
}

/// Pure initial system state `Σ_i a_i |i⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemState {
    pub amplitudes: Vec<C64>,
}

impl SystemState {
    pub fn new(amplitudes: Vec<C64>) -> Self {
        Self { amplitudes }
    }

    pub fn from_real(amplitudes: &[f64]) -> Self {
        Self::new(amplitudes.iter().map(|&a| C64::new(a, 0.0)).collect())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn density(&self) -> ComplexMatrix {
        ComplexMatrix::projector(&self.amplitudes)
    }

    pub fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }
}

fn validate_env(
    id: EnvId,
    env: &EnvironmentSpec,
    system_dim: usize,
) -> Result<EnvironmentSpec> {
    let bad = |reason: String| Error::BadDensityMatrix { env: id, reason };
    let rho = &env.initial;
    if !rho.is_square() || rho.rows() != env.dim {
        return Err(Error::DimensionMismatch(format!(
            "{id}: initial state is {}x{}, environment dimension {}",
            rho.rows(),
            rho.cols(),
            env.dim
        )));
    }
    let residual = rho.hermiticity_residual();
    if residual > HERMITIAN_TOL * rho.max_abs() {
        return Err(bad(format!("not Hermitian (residual {residual:e})")));
    }
    let initial = rho.hermitian_part();
    let trace = initial.trace().re;
    if (trace - 1.0).abs() > DENSITY_TOL {
        return Err(bad(format!("trace {trace}")));
    }
    let min = herm_eigenvalues(&initial)?[0];
    if min < -DENSITY_TOL {
        return Err(bad(format!("negative eigenvalue {min:e}")));
    }

    if env.generators.len() != system_dim {
        return Err(Error::DimensionMismatch(format!(
            "{id}: {} generators for system dimension {system_dim}",
            env.generators.len()
        )));
    }
    let mut generators = Vec::with_capacity(system_dim);
    for (i, v) in env.generators.iter().enumerate() {
        if v.rows() != env.dim || v.cols() != env.dim {
            return Err(Error::DimensionMismatch(format!(
                "{id}: generator {i} is {}x{}, environment dimension {}",
                v.rows(),
                v.cols(),
                env.dim
            )));
        }
        let residual = v.hermiticity_residual();
        if residual > HERMITIAN_TOL * v.max_abs() {
            return Err(Error::NonHermitianGenerator {
                env: id,
                index: i,
                residual,
            });
        }
        generators.push(v.hermitian_part());
    }
    Ok(EnvironmentSpec {
        dim: env.dim,
        initial,
        generators,
    })
}

/// Checks every model and state invariant and returns normalized copies.
///
/// Generators and initial states are replaced by their exact Hermitian parts;
/// amplitudes whose squared norm is within [`RENORMALIZE_TOL`] of one are
/// rescaled. Validation is idempotent.
pub fn validate(
    model: &DephasingModel,
    state: &SystemState,
) -> Result<(DephasingModel, SystemState)> {
    let d = model.system_dim;
    if d < 2 {
        return Err(Error::DimensionMismatch(format!(
            "system dimension {d}, need at least 2 pointer states"
        )));
    }
    if model.energies.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "{} energies for system dimension {d}",
            model.energies.len()
        )));
    }
    if model.energies.iter().any(|e| !e.is_finite()) {
        return Err(Error::NonFinite);
    }
    if state.amplitudes.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "{} amplitudes for system dimension {d}",
            state.amplitudes.len()
        )));
    }
    if state.amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let norm_sq = state.norm_sqr();
    if (norm_sq - 1.0).abs() > RENORMALIZE_TOL {
        return Err(Error::BadNormalization { norm_sq });
    }
    let amplitudes = if (norm_sq - 1.0).abs() <= 8.0 * f64::EPSILON {
        state.amplitudes.clone()
    } else {
        let norm = norm_sq.sqrt();
        state.amplitudes.iter().map(|a| a / norm).collect()
    };

    let unobserved = model
        .unobserved
        .as_ref()
        .map(|e| validate_env(EnvId::Unobserved, e, d))
        .transpose()?;
    let observed = model
        .observed
        .iter()
        .enumerate()
        .map(|(k, e)| validate_env(EnvId::Observed(k), e, d))
        .collect::<Result<Vec<_>>>()?;

    Ok((
        DephasingModel {
            system_dim: d,
            energies: model.energies.clone(),
            unobserved,
            observed,
        },
        SystemState::new(amplitudes),
    ))
}

// ---------------------------------------------------------------------------
// Random generators

/// Deterministic RNG used by every seeded builder.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(gaussian(rng), gaussian(rng)) * core::f64::consts::FRAC_1_SQRT_2
}

/// GUE-style Hermitian matrix: real Gaussian diagonal, complex Gaussian
/// off-diagonal entries of unit variance, times `scale`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> ComplexMatrix {
    let mut upper = vec![ZERO; n * n];
    for r in 0..n {
        upper[r * n + r] = C64::new(gaussian(rng), 0.0);
        for c in r + 1..n {
            upper[r * n + c] = complex_gaussian(rng);
        }
    }
    ComplexMatrix::from_fn(n, n, |r, c| {
        let z = if r <= c { upper[r * n + c] } else { upper[c * n + r].conj() };
        z * scale
    })
}

/// Haar-random unitary from Gram–Schmidt on a complex Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<C64> = (0..n).map(|_| complex_gaussian(rng)).collect();
        for _ in 0..2 {
            for q in &cols {
                let proj: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                v.iter_mut().zip(q).for_each(|(x, y)| *x -= proj * y);
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    ComplexMatrix::from_fn(n, n, |r, c| cols[c][r])
}

/// Normalized random pure state.
pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..n).map(|_| complex_gaussian(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

fn purity_of(weights: &[f64]) -> f64 {
    weights.iter().map(|w| w * w).sum()
}

fn mix(a: &[f64], b: &[f64], s: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| (1.0 - s) * x + s * y).collect()
}

/// Bisects `s ∈ [0, 1]` so that `purity(mix(from, to, s))` hits `target`;
/// purity is monotone along both segments used below.
fn bisect_mixing(from: &[f64], to: &[f64], target: f64) -> Vec<f64> {
    let (mut lo, mut hi) = (0.0, 1.0);
    let increasing = purity_of(to) >= purity_of(from);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let p = purity_of(&mix(from, to, mid));
        if (p < target) == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    mix(from, to, 0.5 * (lo + hi))
}

/// Random density matrix of dimension `n` with purity `target`.
///
/// Eigenvalues come from a flat simplex draw and are then mixed either towards
/// the maximally mixed spectrum or towards the pure spectrum concentrated on
/// the largest weight until the purity matches; the eigenbasis is Haar random.
pub fn random_density_matrix<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    target: f64,
) -> Result<ComplexMatrix> {
    let min = 1.0 / n as f64;
    if !(min - 1e-12..=1.0 + 1e-12).contains(&target) {
        return Err(Error::BadPurityTarget { target, min, dim: n });
    }
    let raw: Vec<f64> = (0..n)
        .map(|_| -(1.0 - rng.random::<f64>()).ln())
        .collect();
    let total: f64 = raw.iter().sum();
    let simplex: Vec<f64> = raw.iter().map(|x| x / total).collect();

    let weights = if target >= 1.0 {
        let top = argmax(&simplex);
        (0..n).map(|i| if i == top { 1.0 } else { 0.0 }).collect()
    } else if target <= min {
        vec![min; n]
    } else if target >= purity_of(&simplex) {
        let top = argmax(&simplex);
        let pure: Vec<f64> = (0..n).map(|i| if i == top { 1.0 } else { 0.0 }).collect();
        bisect_mixing(&simplex, &pure, target)
    } else {
        bisect_mixing(&simplex, &vec![min; n], target)
    };
    let u = random_unitary(rng, n);
    Ok(ComplexMatrix::from_real_diag(&weights).conjugate_by(&u))
}

fn argmax(xs: &[f64]) -> usize {
    xs.iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map_or(0, |(i, _)| i)
}

/// Environment with GUE generators and an initial state of given purity.
pub fn random_environment<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    purity: f64,
    system_dim: usize,
) -> Result<EnvironmentSpec> {
    let initial = random_density_matrix(rng, dim, purity)?;
    let generators = (0..system_dim)
        .map(|_| random_hermitian(rng, dim, 1.0))
        .collect();
    Ok(EnvironmentSpec::new(initial, generators))
}

/// Random normalized system amplitudes.
pub fn random_system_state<R: Rng + ?Sized>(rng: &mut R, system_dim: usize) -> SystemState {
    SystemState::new(random_pure_state(rng, system_dim))
}

/// Seeded random model with one observed environment per entry of `env_dims`.
pub fn random_model(
    seed: u64,
    system_dim: usize,
    env_dims: &[usize],
    purities: &[f64],
) -> Result<DephasingModel> {
    if env_dims.len() != purities.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} environment dimensions but {} purities",
            env_dims.len(),
            purities.len()
        )));
    }
    for (&d, &p) in env_dims.iter().zip(purities) {
        let min = 1.0 / d as f64;
        if !(min..=1.0).contains(&p) {
            return Err(Error::BadPurityTarget { target: p, min, dim: d });
        }
    }
    let mut rng = seeded_rng(seed);
    let energies = (0..system_dim).map(|_| gaussian(&mut rng)).collect();
    let observed = env_dims
        .iter()
        .zip(purities)
        .map(|(&d, &p)| random_environment(&mut rng, d, p, system_dim))
        .collect::<Result<Vec<_>>>()?;
    Ok(DephasingModel {
        system_dim,
        energies,
        unobserved: None,
        observed,
    })
}

// ---------------------------------------------------------------------------
// Deterministic builders

/// `Σ_m |m⟩⟨m + d| + h.c.` on a space of dimension `2·d_half`.
pub fn block_swap_generator(d_half: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(2 * d_half, 2 * d_half, |r, c| {
        if r + d_half == c || c + d_half == r {
            ONE
        } else {
            ZERO
        }
    })
}

/// Time at which `exp(−i g X_block t)` maps the first half of the
/// environment onto the second.
pub fn orthogonalization_time(g: f64) -> f64 {
    FRAC_PI_2 / g
}

/// Qubit coupled to one observed environment of dimension `2·d_half` with
/// `V⁰ = 0`, `V¹ = g·X_block`, starting maximally mixed on the first half.
pub fn orthogonalizing_model(d_half: usize, g: f64) -> DephasingModel {
    let initial = ComplexMatrix::identity(d_half).scale_real(1.0 / d_half as f64);
    orthogonalizing_model_with_initial(d_half, g, &initial)
        .expect("maximally mixed state is a valid initial state")
}

/// Like [`orthogonalizing_model`] with an explicit `d_half × d_half` initial
/// state, embedded into the first half of the environment.
pub fn orthogonalizing_model_with_initial(
    d_half: usize,
    g: f64,
    initial_on_first_half: &ComplexMatrix,
) -> Result<DephasingModel> {
    if initial_on_first_half.rows() != d_half || initial_on_first_half.cols() != d_half {
        return Err(Error::DimensionMismatch(format!(
            "initial state must be {d_half}x{d_half}"
        )));
    }
    let d = 2 * d_half;
    let initial = ComplexMatrix::from_fn(d, d, |r, c| {
        if r < d_half && c < d_half {
            initial_on_first_half[(r, c)]
        } else {
            ZERO
        }
    });
    let generators = vec![
        ComplexMatrix::zeros(d, d),
        block_swap_generator(d_half).scale_real(g),
    ];
    Ok(DephasingModel {
        system_dim: 2,
        energies: vec![0.0, 0.0],
        unobserved: None,
        observed: vec![EnvironmentSpec::new(initial, generators)],
    })
}

/// Qubit-environment of dimension `dim ≥ 2` that reaches strict orthogonality
/// at [`orthogonalization_time(g)`](orthogonalization_time), in a random basis.
///
/// The first `2·⌊dim/2⌋` levels carry a block swap; an odd leftover level is a
/// spectator. The initial state has random rank `r ≤ ⌊dim/2⌋` and random
/// purity in `[1/r, 1]`, supported on the first half. `V⁰` is a random
/// multiple of the identity.
pub fn random_orthogonalizing_environment<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    g: f64,
) -> Result<EnvironmentSpec> {
    if dim < 2 {
        return Err(Error::DimensionMismatch(format!(
            "orthogonality needs environment dimension ≥ 2, got {dim}"
        )));
    }
    let d_half = dim / 2;
    let rank = rng.random_range(1..=d_half);
    let target = 1.0 / rank as f64 + rng.random::<f64>() * (1.0 - 1.0 / rank as f64);
    let core_state = random_density_matrix(rng, rank, target)?;
    let rotate_a = random_unitary(rng, d_half);
    let on_a = ComplexMatrix::from_fn(d_half, d_half, |r, c| {
        if r < rank && c < rank {
            core_state[(r, c)]
        } else {
            ZERO
        }
    })
    .conjugate_by(&rotate_a);

    let swap = block_swap_generator(d_half);
    let pad = |m: &ComplexMatrix| {
        ComplexMatrix::from_fn(dim, dim, |r, c| {
            if r < 2 * d_half && c < 2 * d_half {
                m[(r, c)]
            } else {
                ZERO
            }
        })
    };
    let basis = random_unitary(rng, dim);
    let initial = pad(&ComplexMatrix::from_fn(2 * d_half, 2 * d_half, |r, c| {
        if r < d_half && c < d_half {
            on_a[(r, c)]
        } else {
            ZERO
        }
    }))
    .conjugate_by(&basis)
    .hermitian_part();
    let v1 = pad(&swap.scale_real(g)).conjugate_by(&basis).hermitian_part();
    let v0 = ComplexMatrix::identity(dim).scale_real(gaussian(rng));
    Ok(EnvironmentSpec::new(initial, vec![v0, v1]))
}

/// Bath of `couplings.len()` spins, each starting in `|0⟩`, coupled through
/// `V¹ = Σ_j g_j X_j` (and `V⁰ = 0`).
pub fn spin_bath_environment(couplings: &[f64]) -> Result<EnvironmentSpec> {
    let n = couplings.len();
    if n == 0 {
        return Err(Error::DimensionMismatch("spin bath needs at least one spin".into()));
    }
    if n >= usize::BITS as usize || (1usize << n) > DESK_SCALE_CAP {
        return Err(Error::DimensionTooLarge {
            dim: 1usize.checked_shl(n as u32).unwrap_or(usize::MAX),
            cap: DESK_SCALE_CAP,
        });
    }
    let dim = 1usize << n;
    // X_j flips bit (n-1-j) of the basis index.
    let v1 = ComplexMatrix::from_fn(dim, dim, |r, c| {
        let flipped = r ^ c;
        if flipped.count_ones() == 1 {
            let j = n - 1 - flipped.trailing_zeros() as usize;
            C64::new(couplings[j], 0.0)
        } else {
            ZERO
        }
    });
    let initial = ComplexMatrix::basis_projector(dim, 0);
    Ok(EnvironmentSpec::new(
        initial,
        vec![ComplexMatrix::zeros(dim, dim), v1],
    ))
}

/// Qubit dephased by an unobserved spin bath; no observed environments.
pub fn spin_bath_model(n_spins: usize, couplings: &[f64]) -> Result<DephasingModel> {
    if couplings.len() != n_spins {
        return Err(Error::DimensionMismatch(format!(
            "{} couplings for {n_spins} spins",
            couplings.len()
        )));
    }
    Ok(DephasingModel {
        system_dim: 2,
        energies: vec![0.0, 0.0],
        unobserved: Some(spin_bath_environment(couplings)?),
        observed: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{herm_eigenvalues, purity, unitary_exp};

    fn qubit_env() -> EnvironmentSpec {
        EnvironmentSpec::new(
            ComplexMatrix::basis_projector(2, 0),
            vec![ComplexMatrix::zeros(2, 2), ComplexMatrix::pauli_x()],
        )
    }

    fn qubit_model() -> DephasingModel {
        DephasingModel {
            system_dim: 2,
            energies: vec![0.0, 1.0],
            unobserved: None,
            observed: vec![qubit_env()],
        }
    }

    #[test]
    fn accepts_minimal_model() {
        let (m, s) = validate(&qubit_model(), &SystemState::from_real(&[1.0, 0.0])).unwrap();
        assert_eq!(m, qubit_model());
        assert_eq!(s.amplitudes[0], ONE);
    }

    #[test]
    fn rejects_bad_normalization() {
        let err = validate(&qubit_model(), &SystemState::from_real(&[0.8, 0.7])).unwrap_err();
        match err {
            Error::BadNormalization { norm_sq } => assert!((norm_sq - 1.13).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn renormalizes_small_drift() {
        let s = SystemState::from_real(&[0.6, 0.8 + 1e-10]);
        let (_, s) = validate(&qubit_model(), &s).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian_generator() {
        let mut m = qubit_model();
        m.observed[0].generators[1] =
            ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let err = validate(&m, &SystemState::from_real(&[1.0, 0.0])).unwrap_err();
        assert!(matches!(
            err,
            Error::NonHermitianGenerator { env: EnvId::Observed(0), index: 1, .. }
        ));
    }

    #[test]
    fn rejects_bad_density_and_dimensions() {
        let mut m = qubit_model();
        m.observed[0].initial = ComplexMatrix::from_real_diag(&[0.7, 0.7]);
        assert!(matches!(
            validate(&m, &SystemState::from_real(&[1.0, 0.0])),
            Err(Error::BadDensityMatrix { .. })
        ));
        let mut m = qubit_model();
        m.observed[0].initial = ComplexMatrix::from_real_diag(&[1.2, -0.2]);
        assert!(matches!(
            validate(&m, &SystemState::from_real(&[1.0, 0.0])),
            Err(Error::BadDensityMatrix { .. })
        ));
        let mut m = qubit_model();
        m.observed[0].generators.pop();
        assert!(matches!(
            validate(&m, &SystemState::from_real(&[1.0, 0.0])),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            validate(&qubit_model(), &SystemState::from_real(&[1.0])),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn validate_is_idempotent() {
        let m = random_model(3, 3, &[2, 3], &[0.7, 0.5]).unwrap();
        let mut rng = seeded_rng(3);
        let s = random_system_state(&mut rng, 3);
        let once = validate(&m, &s).unwrap();
        let twice = validate(&once.0, &once.1).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn random_model_is_reproducible() {
        let a = random_model(1, 2, &[2], &[1.0]).unwrap();
        let b = random_model(1, 2, &[2], &[1.0]).unwrap();
        assert_eq!(a, b);
        assert!((purity(&a.observed[0].initial).unwrap() - 1.0).abs() < 1e-12);
        assert_ne!(a, random_model(2, 2, &[2], &[1.0]).unwrap());
    }

    #[test]
    fn random_model_purity_targets() {
        assert!(matches!(
            random_model(1, 2, &[2], &[0.1]),
            Err(Error::BadPurityTarget { .. })
        ));
        let m = random_model(7, 2, &[4], &[0.6]).unwrap();
        let rho = &m.observed[0].initial;
        assert!((purity(rho).unwrap() - 0.6).abs() < 1e-6);
        assert!(herm_eigenvalues(rho).unwrap()[0] > -1e-12);
        let mut rng = seeded_rng(11);
        for target in [0.25, 0.26, 0.4, 0.9, 1.0] {
            let rho = random_density_matrix(&mut rng, 4, target).unwrap();
            assert!((purity(&rho).unwrap() - target).abs() < 1e-6, "target {target}");
        }
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = seeded_rng(4);
        let u = random_unitary(&mut rng, 6);
        assert!(crate::linalg::unitarity_defect(&u) < 1e-12);
    }

    #[test]
    fn orthogonalizing_model_maps_first_half_to_second() {
        for d_half in 1..=4 {
            let m = orthogonalizing_model(d_half, 1.3);
            let env = &m.observed[0];
            let w = unitary_exp(&env.generators[1], orthogonalization_time(1.3)).unwrap();
            let rho11 = env.initial.conjugate_by(&w);
            assert!(env.initial.matmul(&rho11).max_abs() < 1e-14);
            for i in 0..d_half {
                assert!((rho11[(d_half + i, d_half + i)].re - 1.0 / d_half as f64).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn random_orthogonalizing_environment_is_valid() {
        let mut rng = seeded_rng(8);
        for dim in 2..=7 {
            let env = random_orthogonalizing_environment(&mut rng, dim, 0.9).unwrap();
            let model = DephasingModel {
                system_dim: 2,
                energies: vec![0.0, 0.0],
                unobserved: None,
                observed: vec![env.clone()],
            };
            validate(&model, &SystemState::from_real(&[1.0, 0.0])).unwrap();
            let t = orthogonalization_time(0.9);
            let w0 = unitary_exp(&env.generators[0], t).unwrap();
            let w1 = unitary_exp(&env.generators[1], t).unwrap();
            let r0 = env.initial.conjugate_by(&w0);
            let r1 = env.initial.conjugate_by(&w1);
            assert!(r0.matmul(&r1).max_abs() < 1e-12, "dim {dim}");
        }
    }

    #[test]
    fn spin_bath_structure() {
        let m = spin_bath_model(2, &[1.0, 2.0]).unwrap();
        let env = m.unobserved.as_ref().unwrap();
        assert_eq!(env.dim, 4);
        // X on spin 0 connects |00⟩ and |10⟩ (indices 0 and 2).
        assert_eq!(env.generators[1][(0, 2)], C64::new(1.0, 0.0));
        assert_eq!(env.generators[1][(0, 1)], C64::new(2.0, 0.0));
        assert_eq!(env.generators[1][(0, 3)], ZERO);
        assert!(matches!(
            spin_bath_model(13, &[1.0; 13]),
            Err(Error::DimensionTooLarge { .. })
        ));
        assert!(spin_bath_model(2, &[1.0]).is_err());
    }
}
