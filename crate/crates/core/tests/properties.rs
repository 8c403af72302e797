use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use sbs_core::diagnostics::{
    negativity, orthogonality_residual, purity_bound_check, rank_bound_check, sbs_verdict,
    w_structure_check, Thresholds,
};
use sbs_core::dynamics::{
    conditional_unitaries, decoherence_factor, joint_state, observed_state, observed_state_direct,
    system_state,
};
use sbs_core::linalg::{
    generalized_overlap, herm_eig, purity, unitarity_defect, unitary_exp,
};
use sbs_core::matrix::{partial_trace, partial_transpose, tensor};
use sbs_core::model::{
    orthogonalization_time, orthogonalizing_model, random_density_matrix, random_environment,
    random_hermitian, random_model, random_orthogonalizing_environment, random_system_state,
    seeded_rng, spin_bath_model, validate, DephasingModel, EnvironmentSpec,
};
use sbs_core::oracle::spin_bath_gamma_closed_form;
use sbs_core::{ComplexMatrix, FactorLayout, C64};

fn purity_for(rng: &mut ChaCha8Rng, d: usize) -> f64 {
    1.0 / d as f64 + rng.random::<f64>() * (1.0 - 1.0 / d as f64)
}

fn random_qubit_model(rng: &mut ChaCha8Rng, dims: &[usize], with_unobserved: bool) -> DephasingModel {
    let mut env = |d: usize| {
        let p = purity_for(rng, d);
        random_environment(rng, d, p, 2).unwrap()
    };
    let unobserved = with_unobserved.then(|| env(2));
    let observed = dims.iter().map(|&d| env(d)).collect();
    DephasingModel {
        system_dim: 2,
        energies: vec![0.3, -0.8],
        unobserved,
        observed,
    }
}

fn min_eig(m: &ComplexMatrix) -> f64 {
    herm_eig(&m.hermitian_part()).unwrap().eigenvalues[0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hermitian_reconstruction(seed in any::<u64>(), n in 1usize..9) {
        let m = random_hermitian(&mut seeded_rng(seed), n, 1.0);
        let residual = herm_eig(&m).unwrap().reconstruct().max_abs_diff(&m);
        prop_assert!(residual < 1e-9 * m.max_abs().max(f64::MIN_POSITIVE));
    }

    #[test]
    fn exponential_group_property(seed in any::<u64>(), n in 1usize..6, s in -3.0f64..3.0, t in -3.0f64..3.0) {
        let h = random_hermitian(&mut seeded_rng(seed), n, 1.0);
        let product = unitary_exp(&h, s).unwrap().matmul(&unitary_exp(&h, t).unwrap());
        prop_assert!(product.max_abs_diff(&unitary_exp(&h, s + t).unwrap()) < 1e-9);
    }

    #[test]
    fn reduced_states_are_density_matrices(seed in any::<u64>(), d0 in 1usize..4, d1 in 1usize..4, d2 in 1usize..4) {
        let mut rng = seeded_rng(seed);
        let total = d0 * d1 * d2;
        let p = purity_for(&mut rng, total);
        let rho = random_density_matrix(&mut rng, total, p).unwrap();
        let layout = FactorLayout::new(vec![d0, d1, d2]).unwrap();
        for keep in 0..3 {
            let (r, _) = partial_trace(&rho, &layout, &[keep]).unwrap();
            prop_assert!((r.trace() - C64::new(1.0, 0.0)).norm() < 1e-12);
            prop_assert!(min_eig(&r) >= -1e-10);
        }
    }

    #[test]
    fn partial_transpose_involution(seed in any::<u64>(), d0 in 1usize..4, d1 in 1usize..4, sub in 0usize..2) {
        let mut rng = seeded_rng(seed);
        let rho = random_density_matrix(&mut rng, d0 * d1, 1.0).unwrap();
        let layout = FactorLayout::new(vec![d0, d1]).unwrap();
        let once = partial_transpose(&rho, &layout, sub).unwrap();
        prop_assert_eq!(once.trace(), rho.trace());
        prop_assert_eq!(partial_transpose(&once, &layout, sub).unwrap(), rho);
    }

    #[test]
    fn overlap_in_unit_interval(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = seeded_rng(seed);
        let (p, q) = (purity_for(&mut rng, n), purity_for(&mut rng, n));
        let rho = random_density_matrix(&mut rng, n, p).unwrap();
        let sigma = random_density_matrix(&mut rng, n, q).unwrap();
        let b = generalized_overlap(&rho, &sigma).unwrap();
        prop_assert!((0.0..=1.0 + 1e-9).contains(&b), "overlap {}", b);
    }

    #[test]
    fn tensor_associative(seed in any::<u64>(), a in 1usize..3, b in 1usize..3, c in 1usize..3) {
        let mut rng = seeded_rng(seed);
        // small dyadic entries multiply without rounding, so nesting order is exact
        let mut dyadic = |n: usize| {
            ComplexMatrix::from_fn(n, n, |_, _| {
                C64::new(rng.random_range(-8i32..8) as f64 / 4.0, rng.random_range(-8i32..8) as f64 / 4.0)
            })
        };
        let (x, y, z) = (dyadic(a), dyadic(b), dyadic(c));
        let left = tensor(&[x.clone(), tensor(&[y.clone(), z.clone()]).unwrap()]).unwrap();
        let right = tensor(&[tensor(&[x, y]).unwrap(), z]).unwrap();
        prop_assert_eq!(left, right);

        let (x, y, z) = (
            random_hermitian(&mut rng, a, 1.0),
            random_hermitian(&mut rng, b, 1.0),
            random_hermitian(&mut rng, c, 1.0),
        );
        let left = tensor(&[x.clone(), tensor(&[y.clone(), z.clone()]).unwrap()]).unwrap();
        let right = tensor(&[tensor(&[x, y]).unwrap(), z]).unwrap();
        prop_assert!(left.max_abs_diff(&right) <= 1e-15 * left.max_abs().max(1.0));
    }

    #[test]
    fn validate_idempotent(seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let model = random_qubit_model(&mut rng, &[2, 3], true);
        let state = random_system_state(&mut rng, 2);
        let once = validate(&model, &state).unwrap();
        let twice = validate(&once.0, &once.1).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn random_model_reproducible(seed in any::<u64>()) {
        prop_assert_eq!(
            random_model(seed, 2, &[2, 3], &[0.9, 0.5]).unwrap(),
            random_model(seed, 2, &[2, 3], &[0.9, 0.5]).unwrap()
        );
    }

    #[test]
    fn dynamics_invariants(seed in any::<u64>(), t in 0.0f64..10.0, pure in any::<bool>()) {
        let mut rng = seeded_rng(seed);
        let mut model = random_qubit_model(&mut rng, &[2, 3], true);
        if pure {
            for env in model.observed.iter_mut().chain(model.unobserved.iter_mut()) {
                env.initial = random_density_matrix(&mut rng, env.dim, 1.0).unwrap();
            }
        }
        let state = random_system_state(&mut rng, 2);
        let frame = conditional_unitaries(&model, t).unwrap();
        for env in frame.environments() {
            let p0 = purity(&env.initial).unwrap();
            for i in 0..2 {
                prop_assert!(unitarity_defect(&env.unitaries[i]) < 1e-10);
                prop_assert!((purity(env.conditional_state(i, i)).unwrap() - p0).abs() < 1e-10);
            }
        }

        let joint = joint_state(&model, &state, t).unwrap();
        let via_trace = observed_state(&joint, &model).unwrap();
        let direct = observed_state_direct(&model, &state, &frame).unwrap();
        prop_assert!(via_trace.matrix.max_abs_diff(&direct.matrix) < 1e-10);

        let sys = system_state(&joint);
        let a = &state.amplitudes;
        let expected = (a[0] * a[1]).norm()
            * decoherence_factor(&frame, 0, 1).unwrap().norm()
            * frame.observed.iter().map(|e| e.coherence_factor(0, 1).norm()).product::<f64>();
        prop_assert!((sys[(0, 1)].norm() - expected).abs() < 1e-9);
        for i in 0..2 {
            prop_assert!((sys[(i, i)].re - a[i].norm_sqr()).abs() < 1e-12);
        }
        if pure {
            prop_assert!((purity(&joint.matrix).unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn negativity_symmetric(seed in any::<u64>(), t in 0.0f64..6.0) {
        let mut rng = seeded_rng(seed);
        let model = random_qubit_model(&mut rng, &[2, 2], false);
        let state = random_system_state(&mut rng, 2);
        let joint = joint_state(&model, &state, t).unwrap();
        for (s, c) in [(&[0][..], &[1, 2][..]), (&[1][..], &[0, 2][..]), (&[0, 1][..], &[2][..])] {
            let diff = (negativity(&joint, s).unwrap() - negativity(&joint, c).unwrap()).abs();
            prop_assert!(diff < 1e-10);
        }
    }

    #[test]
    fn orthogonality_consequences(seed in any::<u64>(), d in 2usize..7, extra in 0usize..2) {
        let mut rng = seeded_rng(seed);
        let g = 0.5 + rng.random::<f64>();
        let mut observed = vec![random_orthogonalizing_environment(&mut rng, d, g).unwrap()];
        for _ in 0..extra {
            let p = purity_for(&mut rng, 2);
            observed.push(random_environment(&mut rng, 2, p, 2).unwrap());
        }
        let model = DephasingModel { system_dim: 2, energies: vec![0.0, 1.0], unobserved: None, observed };
        let state = random_system_state(&mut rng, 2);
        let t = orthogonalization_time(g);
        let th = Thresholds::default();
        let report = sbs_verdict(&model, &state, t, &th).unwrap();
        let env = &report.envs[0];
        prop_assert!(env.orthogonality_residual <= 1e-10);
        prop_assert!(env.purity_bound.satisfied && env.rank_bound.satisfied);
        prop_assert!(env.w_structure.unwrap().satisfied);
        let a = &state.amplitudes;
        prop_assert!((report.negativity("S|rest").unwrap() - (a[0] * a[1]).norm()).abs() < 1e-8);
        prop_assert!(report.max_coherence < 1e-9);
    }

    #[test]
    fn sampled_bounds(seed in any::<u64>(), d in 2usize..5, t in 0.0f64..6.0) {
        let mut rng = seeded_rng(seed);
        let p = purity_for(&mut rng, d);
        let model = DephasingModel {
            system_dim: 2,
            energies: vec![0.0, 0.0],
            unobserved: None,
            observed: vec![random_environment(&mut rng, d, p, 2).unwrap()],
        };
        let th = Thresholds::default();
        let state = random_system_state(&mut rng, 2);
        let report = sbs_verdict(&model, &state, t, &th).unwrap();
        let env = &report.envs[0];
        prop_assert!(env.overlap_bound.satisfied);
        // the equivalence of the support-block test and the residual
        prop_assert_eq!(env.w_structure.unwrap().satisfied, env.strictly_orthogonal);
        if report.separable_condition_met {
            prop_assert!(report.negativity("S|rest").unwrap() < 1e-9);
            prop_assert!(!report.sbs_reached);
        }
    }
}

#[test]
fn orthogonalizing_models_reach_zero_residual() {
    for d_half in 1..=4 {
        let model = orthogonalizing_model(d_half, 1.3);
        let frame = conditional_unitaries(&model, orthogonalization_time(1.3)).unwrap();
        let env = &frame.observed[0];
        let r = orthogonality_residual(env.conditional_state(0, 0), env.conditional_state(1, 1)).unwrap();
        assert!(r < 1e-10, "d_half = {d_half}: residual {r:e}");
    }
}

#[test]
fn spin_bath_matches_closed_form_on_grid() {
    let couplings = [0.4, 1.3, 0.9];
    let model = spin_bath_model(3, &couplings).unwrap();
    for k in 0..100 {
        let t = 0.1 * k as f64;
        let frame = conditional_unitaries(&model, t).unwrap();
        let gamma = decoherence_factor(&frame, 0, 1).unwrap();
        assert!((gamma - C64::new(spin_bath_gamma_closed_form(&couplings, t), 0.0)).norm() < 1e-9);
    }
}

#[test]
fn support_block_test_matches_residual_on_mixed_samples() {
    let th = Thresholds::default();
    let mut rng = seeded_rng(77);
    let (mut orthogonal, mut not) = (0, 0);
    for s in 0..300 {
        let d = rng.random_range(2..=6);
        let g = 0.5 + rng.random::<f64>();
        let env: EnvironmentSpec = random_orthogonalizing_environment(&mut rng, d, g).unwrap();
        let model = DephasingModel { system_dim: 2, energies: vec![0.0, 0.0], unobserved: None, observed: vec![env] };
        let t = if s % 2 == 0 { orthogonalization_time(g) } else { rng.random::<f64>() * 6.0 };
        let frame = conditional_unitaries(&model, t).unwrap();
        let e = &frame.observed[0];
        let residual = orthogonality_residual(e.conditional_state(0, 0), e.conditional_state(1, 1)).unwrap();
        let w = w_structure_check(&frame, 0, &th).unwrap();
        assert_eq!(w.satisfied, residual <= th.orthogonality_tol, "sample {s}: residual {residual:e}, ‖PwP‖ {:e}", w.norm);
        if w.satisfied {
            orthogonal += 1;
            assert!(purity_bound_check(&model.observed[0]).unwrap().satisfied);
            assert!(rank_bound_check(&frame, 0, &th).unwrap().satisfied);
        } else {
            not += 1;
        }
    }
    assert!(orthogonal > 0 && not > 0);
}
