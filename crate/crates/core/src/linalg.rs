//! Hermitian eigendecomposition and the spectral functions derived from it.
//!
//! Every matrix function here (exponential, square root, trace norm) goes
//! through [`herm_eig`]. The solver reduces the matrix to a real symmetric
//! tridiagonal form with complex Householder reflections and then runs the
//! implicit QL iteration, accumulating the transformations.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

// Float math for no_std builds; shadowed by the inherent methods when std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, ONE, ZERO};

/// Relative Hermiticity residual accepted by [`herm_eig`].
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Negative eigenvalues down to `-PSD_CLAMP · λ_max` are treated as zero.
pub const PSD_CLAMP: f64 = 1e-10;

/// Default relative cutoff used by [`support_projector`].
pub const DEFAULT_SUPPORT_TOL: f64 = 1e-10;

/// Trace deviation accepted for a density matrix.
pub const TRACE_TOL: f64 = 1e-8;

const MAX_QL_ITERATIONS: usize = 100;

/// Eigenvalues in ascending order with orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    /// `U · f(Λ) · U†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let u = &self.eigenvectors;
        let n = u.rows();
        let weights: Vec<C64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, n, |r, c| {
            (0..n)
                .filter(|&k| weights[k] != ZERO)
                .map(|k| u[(r, k)] * weights[k] * u[(c, k)].conj())
                .sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|l| C64::new(l, 0.0))
    }

    /// Largest eigenvalue modulus.
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l.abs()).fold(0.0, f64::max)
    }

    /// Column `k` of the eigenvector matrix.
    pub fn vector(&self, k: usize) -> Vec<C64> {
        (0..self.eigenvectors.rows())
            .map(|r| self.eigenvectors[(r, k)])
            .collect()
    }
}

/// Hermitian residual check relative to the largest entry.
pub(crate) fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    m.require_square()?;
    let residual = m.hermiticity_residual();
    if residual > HERMITIAN_TOL * m.max_abs() {
        return Err(Error::NotHermitian { residual });
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix.
pub fn herm_eig(m: &ComplexMatrix) -> Result<Spectrum> {
    check_hermitian(m)?;
    let (eigenvalues, eigenvectors) = tridiagonal_ql(householder(&m.hermitian_part()))?;
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only; same solver as [`herm_eig`].
pub fn herm_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    herm_eig(m).map(|s| s.eigenvalues)
}

struct Tridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
    basis: Vec<C64>,
}

/// Reduces a Hermitian matrix to real tridiagonal form `A = V T V†`.
fn householder(a: &ComplexMatrix) -> Tridiagonal {
    let n = a.rows();
    let mut m: Vec<C64> = a.as_slice().to_vec();
    let mut q: Vec<C64> = ComplexMatrix::identity(n).as_slice().to_vec();
    let mut v = vec![ZERO; n];
    let mut p = vec![ZERO; n];

    for k in 0..n.saturating_sub(2) {
        let norm = (k + 1..n).map(|i| m[i * n + k].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = m[(k + 1) * n + k];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { ONE };
        let alpha = -phase * norm;

        v.iter_mut().for_each(|z| *z = ZERO);
        for i in k + 1..n {
            v[i] = m[i * n + k];
        }
        v[k + 1] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|z| *z /= vnorm);

        // A ← H A H with H = I − 2vv†, as a rank-2 update.
        for i in 0..n {
            p[i] = (k + 1..n).map(|j| m[i * n + j] * v[j]).sum();
        }
        let kappa: C64 = (0..n).map(|i| v[i].conj() * p[i]).sum();
        let w: Vec<C64> = (0..n).map(|i| p[i] - v[i] * kappa.re).collect();
        for i in 0..n {
            for j in 0..n {
                m[i * n + j] -= (v[i] * w[j].conj() + w[i] * v[j].conj()) * 2.0;
            }
        }
        for i in k + 2..n {
            m[i * n + k] = ZERO;
            m[k * n + i] = ZERO;
        }
        m[(k + 1) * n + k] = alpha;
        m[k * n + k + 1] = alpha.conj();

        // Q ← Q H
        for r in 0..n {
            let qv: C64 = (k + 1..n).map(|j| q[r * n + j] * v[j]).sum();
            for j in k + 1..n {
                q[r * n + j] -= qv * v[j].conj() * 2.0;
            }
        }
    }

    // Rotate the complex sub-diagonal onto the positive reals: T_real = D† T D.
    let diag: Vec<f64> = (0..n).map(|i| m[i * n + i].re).collect();
    let mut off = vec![0.0; n];
    let mut d = ONE;
    for i in 0..n {
        for r in 0..n {
            q[r * n + i] *= d;
        }
        if i + 1 < n {
            let t = m[(i + 1) * n + i];
            off[i] = t.norm();
            if off[i] > 0.0 {
                d *= t / off[i];
            }
        }
    }
    Tridiagonal {
        diag,
        off,
        basis: q,
    }
}

/// Implicit QL with Wilkinson-style shifts on a real symmetric tridiagonal
/// matrix; rotations are applied to the complex basis columns.
fn tridiagonal_ql(t: Tridiagonal) -> Result<(Vec<f64>, ComplexMatrix)> {
    let Tridiagonal {
        diag: mut d,
        off: mut e,
        basis: mut z,
    } = t;
    let n = d.len();

    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > MAX_QL_ITERATIONS {
                return Err(Error::NoConvergence);
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    let zi = z[k * n + i];
                    let zi1 = z[k * n + i + 1];
                    z[k * n + i + 1] = zi * s + zi1 * c;
                    z[k * n + i] = zi * c - zi1 * s;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let eigenvalues = order.iter().map(|&k| d[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| z[r * n + order[c]]);
    Ok((eigenvalues, vectors))
}

/// `exp(−iHt)` for Hermitian `H`.
pub fn unitary_exp(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    if t == 0.0 {
        check_hermitian(h)?;
        return Ok(ComplexMatrix::identity(h.rows()));
    }
    let spectrum = herm_eig(h)?;
    Ok(spectrum.reconstruct_with(|l| {
        let (s, c) = (l * t).sin_cos();
        C64::new(c, -s)
    }))
}

/// Eigenvalues of a PSD matrix after clamping roundoff negatives.
///
/// Values in `[−PSD_CLAMP·λ_max, 0)` become zero, as do positive values at the
/// level of the solver's own roundoff (`n·ε·λ_max`); anything more negative is
/// an error. `min_scale` stands in for `λ_max` when the matrix is known to
/// be small only through cancellation.
fn clamped_psd_spectrum(m: &ComplexMatrix, min_scale: f64) -> Result<Spectrum> {
    let mut spectrum = herm_eig(m)?;
    let scale = spectrum.spectral_radius().max(min_scale);
    let floor = f64::EPSILON * spectrum.eigenvalues.len() as f64 * scale;
    for l in spectrum.eigenvalues.iter_mut() {
        if *l < -PSD_CLAMP * scale {
            return Err(Error::NotPsd { eigenvalue: *l });
        }
        if *l <= floor {
            *l = 0.0;
        }
    }
    Ok(spectrum)
}

/// Hermitian PSD square root.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let spectrum = clamped_psd_spectrum(m, 0.0)?;
    Ok(spectrum.reconstruct_with(|l| C64::new(l.sqrt(), 0.0)))
}

/// Sum of singular values.
///
/// Hermitian input uses `Σ|λ|` directly; otherwise the eigenvalues of the
/// Hermitian dilation `[[0, M], [M†, 0]]` are `±σ_i`, so half their absolute
/// sum is the trace norm.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    let n = m.require_square()?;
    let scale = m.max_abs();
    if m.hermiticity_residual() <= HERMITIAN_TOL * scale {
        return Ok(herm_eigenvalues(m)?.iter().map(|l| l.abs()).sum());
    }
    let dilation = ComplexMatrix::from_fn(2 * n, 2 * n, |r, c| match (r < n, c < n) {
        (true, false) => m[(r, c - n)],
        (false, true) => m[(c, r - n)].conj(),
        _ => ZERO,
    });
    Ok(0.5 * herm_eigenvalues(&dilation)?.iter().map(|l| l.abs()).sum::<f64>())
}

/// Cheap density-matrix check: square, Hermitian, unit trace.
pub(crate) fn check_density_shape(rho: &ComplexMatrix) -> Result<()> {
    if !rho.is_square() {
        return Err(Error::NotDensityMatrix(format!(
            "{}x{} is not square",
            rho.rows(),
            rho.cols()
        )));
    }
    let residual = rho.hermiticity_residual();
    if residual > HERMITIAN_TOL * rho.max_abs().max(1.0) {
        return Err(Error::NotDensityMatrix(format!(
            "Hermiticity residual {residual:e}"
        )));
    }
    let trace = rho.trace();
    if (trace - ONE).norm() > TRACE_TOL {
        return Err(Error::NotDensityMatrix(format!("trace {trace}")));
    }
    Ok(())
}

/// Generalized overlap `Tr √(√ρ σ √ρ)` of two density matrices.
pub fn generalized_overlap(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> Result<f64> {
    check_density_shape(rho)?;
    check_density_shape(sigma)?;
    if rho.rows() != sigma.rows() {
        return Err(Error::DimensionMismatch(format!(
            "overlap of {}-dimensional and {}-dimensional states",
            rho.rows(),
            sigma.rows()
        )));
    }
    let root = psd_sqrt(rho).map_err(not_density)?;
    let inner = sigma.conjugate_by(&root).hermitian_part();
    // √ρ σ √ρ vanishes for orthogonal states; its roundoff is relative to the
    // unit-trace inputs, not to its own spectrum.
    let spectrum = clamped_psd_spectrum(&inner, 1.0).map_err(not_density)?;
    Ok(spectrum.eigenvalues.iter().map(|l| l.sqrt()).sum())
}

fn not_density(e: Error) -> Error {
    match e {
        Error::NotPsd { eigenvalue } => {
            Error::NotDensityMatrix(format!("negative eigenvalue {eigenvalue:e}"))
        }
        other => other,
    }
}

/// Orthogonal projector onto the support of a PSD matrix.
#[derive(Clone, Debug)]
pub struct Support {
    pub projector: ComplexMatrix,
    pub rank: usize,
    /// Relative cutoff that produced `rank`.
    pub tol: f64,
}

/// Projector onto eigenvectors with eigenvalue `> tol · λ_max`.
pub fn support_projector(rho: &ComplexMatrix, tol: f64) -> Result<Support> {
    let spectrum = clamped_psd_spectrum(rho, 0.0)?;
    let lmax = spectrum.spectral_radius();
    let cutoff = tol * lmax;
    let keep: Vec<bool> = spectrum
        .eigenvalues
        .iter()
        .map(|&l| lmax > 0.0 && l > cutoff)
        .collect();
    let rank = keep.iter().filter(|&&k| k).count();
    let n = rho.rows();
    let u = &spectrum.eigenvectors;
    let projector = ComplexMatrix::from_fn(n, n, |r, c| {
        (0..n)
            .filter(|&k| keep[k])
            .map(|k| u[(r, k)] * u[(c, k)].conj())
            .sum()
    });
    Ok(Support {
        projector,
        rank,
        tol,
    })
}

/// `Tr ρ²`. Checks Hermiticity and unit trace, not positivity.
pub fn purity(rho: &ComplexMatrix) -> Result<f64> {
    check_density_shape(rho)?;
    Ok(rho.as_slice().iter().map(|z| z.norm_sqr()).sum())
}

/// Max-abs deviation of `U†U` from the identity.
pub fn unitarity_defect(u: &ComplexMatrix) -> f64 {
    u.dagger()
        .matmul(u)
        .max_abs_diff(&ComplexMatrix::identity(u.cols()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(seed: u64, n: usize) -> ComplexMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = ComplexMatrix::from_fn(n, n, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        a.hermitian_part()
    }

    fn random_psd(seed: u64, n: usize) -> ComplexMatrix {
        let a = random_hermitian(seed, n);
        a.matmul(&a.dagger())
    }

    #[test]
    fn diagonal_and_pauli_spectra() {
        let s = herm_eig(&ComplexMatrix::from_real_diag(&[3.0, 1.0])).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0, 3.0]);
        assert!((s.eigenvectors[(1, 0)].norm() - 1.0).abs() < 1e-15);
        assert!((s.eigenvectors[(0, 1)].norm() - 1.0).abs() < 1e-15);

        let s = herm_eig(&ComplexMatrix::pauli_x()).unwrap();
        assert!((s.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((s.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn random_hermitian_reconstructs() {
        for seed in 0..20 {
            for n in [1, 2, 3, 6, 13] {
                let m = random_hermitian(seed, n);
                let s = herm_eig(&m).unwrap();
                assert!(unitarity_defect(&s.eigenvectors) < 1e-10, "seed {seed} n {n}");
                assert!(
                    s.reconstruct().max_abs_diff(&m) < 1e-9 * m.max_abs(),
                    "seed {seed} n {n}"
                );
                assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
            }
        }
    }

    #[test]
    fn degenerate_and_zero_matrices() {
        let s = herm_eig(&ComplexMatrix::zeros(4, 4)).unwrap();
        assert!(s.eigenvalues.iter().all(|&l| l == 0.0));
        let i5 = ComplexMatrix::identity(5);
        let s = herm_eig(&i5).unwrap();
        assert!(s.reconstruct().max_abs_diff(&i5) < 1e-14);
    }

    #[test]
    fn herm_eig_errors() {
        assert!(matches!(
            herm_eig(&ComplexMatrix::zeros(2, 3)),
            Err(Error::NonSquare { .. })
        ));
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(herm_eig(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn exp_closed_forms() {
        let u = unitary_exp(&ComplexMatrix::pauli_z(), FRAC_PI_2).unwrap();
        let expected = ComplexMatrix::from_diag(&[C64::new(0.0, -1.0), C64::new(0.0, 1.0)]);
        assert!(u.max_abs_diff(&expected) < 1e-15);

        let h = random_hermitian(3, 4);
        assert_eq!(unitary_exp(&h, 0.0).unwrap(), ComplexMatrix::identity(4));

        // cos(t) I − i sin(t) X at t = π/2
        let u = unitary_exp(&ComplexMatrix::pauli_x(), FRAC_PI_2).unwrap();
        let expected = ComplexMatrix::pauli_x().scale(C64::new(0.0, -1.0));
        assert!(u.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn exp_group_property() {
        let h = random_hermitian(9, 5);
        let a = unitary_exp(&h, 0.3).unwrap();
        let b = unitary_exp(&h, 1.1).unwrap();
        let ab = unitary_exp(&h, 1.4).unwrap();
        assert!(a.matmul(&b).max_abs_diff(&ab) < 1e-9);
        assert!(unitarity_defect(&ab) < 1e-10);
    }

    #[test]
    fn sqrt_cases() {
        assert!(psd_sqrt(&ComplexMatrix::identity(3)).unwrap().max_abs_diff(&ComplexMatrix::identity(3)) < 1e-15);
        let s = psd_sqrt(&ComplexMatrix::from_real_diag(&[4.0, 0.0])).unwrap();
        assert!(s.max_abs_diff(&ComplexMatrix::from_real_diag(&[2.0, 0.0])) < 1e-15);
        for seed in 0..10 {
            let m = random_psd(seed, 4);
            let s = psd_sqrt(&m).unwrap();
            assert!(s.matmul(&s).max_abs_diff(&m) < 1e-8 * m.max_abs());
            assert!(s.hermiticity_residual() < 1e-12);
        }
        assert!(matches!(
            psd_sqrt(&ComplexMatrix::from_real_diag(&[1.0, -0.1])),
            Err(Error::NotPsd { .. })
        ));
        // tiny roundoff negatives are clamped
        assert!(psd_sqrt(&ComplexMatrix::from_real_diag(&[1.0, -1e-13])).is_ok());
    }

    #[test]
    fn trace_norm_cases() {
        assert!((trace_norm(&ComplexMatrix::identity(5)).unwrap() - 5.0).abs() < 1e-14);
        assert!((trace_norm(&ComplexMatrix::pauli_z()).unwrap() - 2.0).abs() < 1e-14);
        let m = random_hermitian(4, 4);
        let oracle: f64 = herm_eig(&m).unwrap().eigenvalues.iter().map(|l| l.abs()).sum();
        assert!((trace_norm(&m).unwrap() - oracle).abs() < 1e-12);
        // non-Hermitian: diag(1/2, 0) · unitary phase
        let nh = ComplexMatrix::from_real_rows(&[&[0.0, 0.5], &[0.0, 0.0]]).unwrap();
        assert!((trace_norm(&nh).unwrap() - 0.5).abs() < 1e-14);
        assert!(matches!(
            trace_norm(&ComplexMatrix::zeros(1, 2)),
            Err(Error::NonSquare { .. })
        ));
    }

    #[test]
    fn overlap_cases() {
        let zero = ComplexMatrix::basis_projector(2, 0);
        let one = ComplexMatrix::basis_projector(2, 1);
        let mixed = ComplexMatrix::from_real_diag(&[0.5, 0.5]);
        assert!((generalized_overlap(&mixed, &mixed).unwrap() - 1.0).abs() < 1e-12);
        assert!(generalized_overlap(&zero, &one).unwrap().abs() < 1e-12);
        // √(I/2)|0⟩⟨0|√(I/2) = |0⟩⟨0|/2, whose root has trace 1/√2.
        let b = generalized_overlap(&mixed, &zero).unwrap();
        assert!((b - FRAC_1_SQRT_2).abs() < 1e-12);
        let b_rev = generalized_overlap(&zero, &mixed).unwrap();
        assert!((b - b_rev).abs() < 1e-9);
        assert!(matches!(
            generalized_overlap(&mixed, &ComplexMatrix::identity(3).scale_real(1.0 / 3.0)),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            generalized_overlap(&mixed, &ComplexMatrix::identity(2)),
            Err(Error::NotDensityMatrix(_))
        ));
    }

    #[test]
    fn overlap_of_rotated_orthogonal_states_is_zero() {
        let basis = herm_eig(&random_hermitian(17, 5)).unwrap().eigenvectors;
        let rho = ComplexMatrix::from_real_diag(&[0.7, 0.3, 0.0, 0.0, 0.0]).conjugate_by(&basis);
        let sigma = ComplexMatrix::from_real_diag(&[0.0, 0.0, 0.2, 0.8, 0.0]).conjugate_by(&basis);
        assert!(generalized_overlap(&rho, &sigma).unwrap() < 1e-7);
    }

    #[test]
    fn support_cases() {
        let s = support_projector(&ComplexMatrix::from_real_diag(&[0.5, 0.5, 0.0]), DEFAULT_SUPPORT_TOL).unwrap();
        assert_eq!(s.rank, 2);
        assert!(s.projector.max_abs_diff(&ComplexMatrix::from_real_diag(&[1.0, 1.0, 0.0])) < 1e-14);

        let psi = [C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        let p = ComplexMatrix::projector(&psi);
        let s = support_projector(&p, DEFAULT_SUPPORT_TOL).unwrap();
        assert_eq!(s.rank, 1);
        assert!(s.projector.max_abs_diff(&p) < 1e-14);

        // rank-2 PSD in d = 5 as a sum of two projectors
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut vec = || -> Vec<C64> {
            (0..5)
                .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect()
        };
        let m = &ComplexMatrix::projector(&vec()).scale_real(0.3) + &ComplexMatrix::projector(&vec());
        let s = support_projector(&m, DEFAULT_SUPPORT_TOL).unwrap();
        assert_eq!(s.rank, 2);
        let p = &s.projector;
        assert!(p.matmul(p).max_abs_diff(p) < 1e-12);
        assert!(m.conjugate_by(p).max_abs_diff(&m) < 1e-9);
    }

    #[test]
    fn purity_cases() {
        let psi = [C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        assert!((purity(&ComplexMatrix::projector(&psi)).unwrap() - 1.0).abs() < 1e-15);
        let mm = ComplexMatrix::identity(4).scale_real(0.25);
        assert!((purity(&mm).unwrap() - 0.25).abs() < 1e-15);
        let d = ComplexMatrix::from_real_diag(&[0.7, 0.3]);
        assert!((purity(&d).unwrap() - 0.58).abs() < 1e-15);
        assert!(purity(&ComplexMatrix::identity(2)).is_err());
    }
}
