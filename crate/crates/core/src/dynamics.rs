//! Exact evolution of the dephasing model.
//!
//! All Hamiltonian terms commute, so the joint state at time `t` is assembled
//! block by block from per-environment conditional unitaries
//! `w_i(t) = exp(−i V^i t)`: block `(i, j)` is
//! `a_i a_j* e^{−i(ε_i − ε_j)t} ⊗_env w_i ρ(0) w_j†`.
//! No time stepping is involved.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{EnvId, Error, Result};
use crate::linalg::unitary_exp;
use crate::matrix::{partial_trace, tensor, ComplexMatrix, FactorLayout, C64};
use crate::model::{DephasingModel, SystemState};
use crate::DESK_SCALE_CAP;

/// Conditional evolution of one environment at a fixed time.
#[derive(Clone, Debug)]
pub struct EnvFrame {
    pub id: EnvId,
    pub initial: ComplexMatrix,
    /// `w_i(t)` for each pointer state `i`.
    pub unitaries: Vec<ComplexMatrix>,
    /// `states[i][j] = w_i ρ(0) w_j†`.
    pub states: Vec<Vec<ComplexMatrix>>,
}

impl EnvFrame {
    /// Builds the `ρ_ij` table from given conditional unitaries.
    pub fn from_unitaries(id: EnvId, initial: ComplexMatrix, unitaries: Vec<ComplexMatrix>) -> Self {
        let left: Vec<ComplexMatrix> = unitaries.iter().map(|w| w.matmul(&initial)).collect();
        let daggers: Vec<ComplexMatrix> = unitaries.iter().map(ComplexMatrix::dagger).collect();
        let states = left
            .iter()
            .map(|wl| daggers.iter().map(|wd| wl.matmul(wd)).collect())
            .collect();
        Self {
            id,
            initial,
            unitaries,
            states,
        }
    }

    pub fn dim(&self) -> usize {
        self.initial.rows()
    }

    /// `ρ_ij(t)`.
    pub fn conditional_state(&self, i: usize, j: usize) -> &ComplexMatrix {
        &self.states[i][j]
    }

    /// `w_i w_j†`.
    pub fn relative(&self, i: usize, j: usize) -> ComplexMatrix {
        self.unitaries[i].matmul(&self.unitaries[j].dagger())
    }

    /// Relative unitary `w = w₁ w₀†`.
    pub fn relative_unitary(&self) -> ComplexMatrix {
        self.relative(1, 0)
    }

    /// `Tr[w_j† w_i ρ(0)] = Tr ρ_ij(t)`.
    pub fn coherence_factor(&self, i: usize, j: usize) -> C64 {
        self.states[i][j].trace()
    }
}

/// Conditional unitaries and states of every environment at time `t`.
#[derive(Clone, Debug)]
pub struct ConditionalFrame {
    pub time: f64,
    pub system_dim: usize,
    pub unobserved: Option<EnvFrame>,
    pub observed: Vec<EnvFrame>,
}

impl ConditionalFrame {
    /// Unobserved first, then observed, matching the joint factor order.
    pub fn environments(&self) -> impl Iterator<Item = &EnvFrame> {
        self.unobserved.iter().chain(&self.observed)
    }

    pub fn observed_env(&self, k: usize) -> Result<&EnvFrame> {
        self.observed.get(k).ok_or(Error::BadIndex {
            index: k,
            factors: self.observed.len(),
        })
    }
}

/// `w_i = exp(−i V^i t)` for every environment and pointer state.
pub fn conditional_unitaries(model: &DephasingModel, t: f64) -> Result<ConditionalFrame> {
    let frame_for = |id: EnvId| -> Result<EnvFrame> {
        let env = model.env(id).expect("environment id comes from the model");
        let unitaries = env
            .generators
            .iter()
            .map(|v| unitary_exp(v, t))
            .collect::<Result<Vec<_>>>()?;
        Ok(EnvFrame::from_unitaries(id, env.initial.clone(), unitaries))
    };
    Ok(ConditionalFrame {
        time: t,
        system_dim: model.system_dim,
        unobserved: model
            .unobserved
            .as_ref()
            .map(|_| frame_for(EnvId::Unobserved))
            .transpose()?,
        observed: (0..model.observed.len())
            .map(|k| frame_for(EnvId::Observed(k)))
            .collect::<Result<Vec<_>>>()?,
    })
}

fn check_pair(frame: &ConditionalFrame, i: usize, j: usize) -> Result<()> {
    if i == j {
        return Err(Error::SameIndex(i));
    }
    let d = frame.system_dim;
    for idx in [i, j] {
        if idx >= d {
            return Err(Error::BadIndex { index: idx, factors: d });
        }
    }
    Ok(())
}

/// Decoherence factor `Γ_ij = Tr[w_j† w_i R(0)]` of the unobserved environment.
pub fn decoherence_factor(frame: &ConditionalFrame, i: usize, j: usize) -> Result<C64> {
    check_pair(frame, i, j)?;
    let env = frame.unobserved.as_ref().ok_or(Error::NoUnobservedEnvironment)?;
    Ok(env.coherence_factor(i, j))
}

/// `Tr[w₁† w₀ ρ^k(0)]`: the factor observed environment `k` contributes to the
/// `(0, 1)` system coherence.
pub fn env_decoherence_factor(frame: &ConditionalFrame, k: usize) -> Result<C64> {
    check_pair(frame, 0, 1)?;
    Ok(frame.observed_env(k)?.coherence_factor(0, 1))
}

/// Joint density matrix together with its factor layout.
#[derive(Clone, Debug)]
pub struct JointState {
    pub time: f64,
    pub matrix: ComplexMatrix,
    pub layout: FactorLayout,
    /// Initial amplitudes the state was assembled from.
    pub amplitudes: SystemState,
    /// Factor index of the unobserved environment, if it is still present.
    pub unobserved_factor: Option<usize>,
}

fn check_cap(dim: usize) -> Result<()> {
    if dim > DESK_SCALE_CAP {
        return Err(Error::DimensionTooLarge {
            dim,
            cap: DESK_SCALE_CAP,
        });
    }
    Ok(())
}

/// `a_i a_j* e^{−i(ε_i − ε_j)t}`.
pub fn system_coefficient(model: &DephasingModel, state: &SystemState, t: f64, i: usize, j: usize) -> C64 {
    let phase = C64::from_polar(1.0, -(model.energies[i] - model.energies[j]) * t);
    state.amplitudes[i] * state.amplitudes[j].conj() * phase
}

fn assemble(
    model: &DephasingModel,
    state: &SystemState,
    t: f64,
    mut block_factors: impl FnMut(usize, usize) -> (C64, Vec<ComplexMatrix>),
) -> Result<ComplexMatrix> {
    let d = model.system_dim;
    let mut blocks = Vec::with_capacity(d);
    for i in 0..d {
        let mut row = Vec::with_capacity(d);
        for j in 0..d {
            let (scale, factors) = block_factors(i, j);
            let c = system_coefficient(model, state, t, i, j) * scale;
            let block = if factors.is_empty() {
                ComplexMatrix::from_diag(&[c])
            } else {
                tensor(&factors)?.scale(c)
            };
            row.push(block);
        }
        blocks.push(row);
    }
    ComplexMatrix::from_blocks(&blocks)
}

/// Full joint state at time `t`, system first, then unobserved, then observed.
pub fn joint_state(model: &DephasingModel, state: &SystemState, t: f64) -> Result<JointState> {
    check_cap(model.total_dim())?;
    let frame = conditional_unitaries(model, t)?;
    joint_state_from_frame(model, state, &frame)
}

/// Block assembly from an already computed frame.
pub fn joint_state_from_frame(
    model: &DephasingModel,
    state: &SystemState,
    frame: &ConditionalFrame,
) -> Result<JointState> {
    check_cap(model.total_dim())?;
    let matrix = assemble(model, state, frame.time, |i, j| {
        let factors = frame
            .environments()
            .map(|env| env.conditional_state(i, j).clone())
            .collect();
        (C64::new(1.0, 0.0), factors)
    })?;
    Ok(JointState {
        time: frame.time,
        matrix,
        layout: FactorLayout::new(model.factor_dims())?,
        amplitudes: state.clone(),
        unobserved_factor: model.unobserved.as_ref().map(|_| 1),
    })
}

/// Traces out the unobserved environment.
pub fn observed_state(joint: &JointState, model: &DephasingModel) -> Result<JointState> {
    let traced = joint
        .unobserved_factor
        .ok_or(Error::NoUnobservedEnvironment)?;
    if joint.layout.dims() != model.factor_dims().as_slice() {
        return Err(Error::DimensionMismatch(format!(
            "joint layout {:?} does not match model {:?}",
            joint.layout.dims(),
            model.factor_dims()
        )));
    }
    let keep: Vec<usize> = (0..joint.layout.len()).filter(|&f| f != traced).collect();
    let (matrix, layout) = partial_trace(&joint.matrix, &joint.layout, &keep)?;
    Ok(JointState {
        time: joint.time,
        matrix,
        layout,
        amplitudes: joint.amplitudes.clone(),
        unobserved_factor: None,
    })
}

/// State of the system and observed environments assembled directly with the
/// decoherence factors: block `(i, j)` is `c_ij Γ_ij ⊗_k ρ_ij^k`.
pub fn observed_state_direct(
    model: &DephasingModel,
    state: &SystemState,
    frame: &ConditionalFrame,
) -> Result<JointState> {
    let unobserved = frame.unobserved.as_ref().ok_or(Error::NoUnobservedEnvironment)?;
    let dims: Vec<usize> = core::iter::once(model.system_dim)
        .chain(model.observed.iter().map(|e| e.dim))
        .collect();
    check_cap(dims.iter().product())?;
    let matrix = assemble(model, state, frame.time, |i, j| {
        let factors = frame
            .observed
            .iter()
            .map(|env| env.conditional_state(i, j).clone())
            .collect();
        (unobserved.coherence_factor(i, j), factors)
    })?;
    Ok(JointState {
        time: frame.time,
        matrix,
        layout: FactorLayout::new(dims)?,
        amplitudes: state.clone(),
        unobserved_factor: None,
    })
}

/// Reduced state of the system alone.
pub fn system_state(joint: &JointState) -> ComplexMatrix {
    partial_trace(&joint.matrix, &joint.layout, &[0])
        .expect("joint layouts always match their matrix")
        .0
}

/// Closed-form system coherence
/// `a_i a_j* e^{−i(ε_i−ε_j)t} Π_env Tr ρ_ij^env(t)`.
pub fn predicted_coherence(
    model: &DephasingModel,
    state: &SystemState,
    frame: &ConditionalFrame,
    i: usize,
    j: usize,
) -> C64 {
    frame
        .environments()
        .map(|env| env.coherence_factor(i, j))
        .fold(system_coefficient(model, state, frame.time, i, j), |acc, g| acc * g)
}
