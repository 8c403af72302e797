//! Dense complex matrices and tensor-structure operations.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Dense complex matrix stored row-major.
///
/// Matrices are values: every operation returns a new matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, checking shape and finiteness.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape(format!("{rows}x{cols} has a zero dimension")));
        }
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(Error::Shape(format!(
                "row {i} has {} entries, expected {cols}",
                r.len()
            )));
        }
        Self::new(rows.len(), cols, rows.iter().flatten().copied().collect())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { ONE } else { ZERO })
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |r, c| if r == c { diag[r] } else { ZERO })
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |r, c| if r == c { C64::new(diag[r], 0.0) } else { ZERO })
    }

    /// Projector `|ψ⟩⟨ψ|` onto the (not necessarily normalized) vector `psi`.
    pub fn projector(psi: &[C64]) -> Self {
        let n = psi.len();
        Self::from_fn(n, n, |r, c| psi[r] * psi[c].conj())
    }

    /// Basis projector `|i⟩⟨i|` in dimension `n`.
    pub fn basis_projector(n: usize, i: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == i && c == i { ONE } else { ZERO })
    }

    pub fn pauli_x() -> Self {
        Self::from_fn(2, 2, |r, c| if r != c { ONE } else { ZERO })
    }

    pub fn pauli_z() -> Self {
        Self::from_real_diag(&[1.0, -1.0])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Side length of a square matrix.
    pub fn dim(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn get(&self, r: usize, c: usize) -> Option<C64> {
        (r < self.rows && c < self.cols).then(|| self.data[r * self.cols + c])
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub(crate) fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> C64 {
        self.diagonal().into_iter().sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch in max_abs_diff"
        );
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |M - M†|` for a square matrix.
    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.rows;
        let mut worst: f64 = 0.0;
        for r in 0..n {
            for c in r..n {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// `(M + M†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| {
            (self[(r, c)] + self[(c, r)].conj()) * 0.5
        })
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut data = vec![ZERO; rows * cols];
        for ar in 0..self.rows {
            for ac in 0..self.cols {
                let a = self[(ar, ac)];
                if a == ZERO {
                    continue;
                }
                for br in 0..other.rows {
                    let base = (ar * other.rows + br) * cols + ac * other.cols;
                    let src = other.row(br);
                    for (dst, b) in data[base..base + other.cols].iter_mut().zip(src) {
                        *dst = a * b;
                    }
                }
            }
        }
        Self { rows, cols, data }
    }

    /// `self · other`; panics if the inner dimensions differ.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "inner dimension mismatch in matrix product"
        );
        let (n, m) = (self.rows, other.cols);
        let mut data = vec![ZERO; n * m];
        for i in 0..n {
            let out = &mut data[i * m..(i + 1) * m];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                for (o, b) in out.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        Self {
            rows: n,
            cols: m,
            data,
        }
    }

    /// `A · B · A†`, the conjugation used everywhere for evolving states.
    pub fn conjugate_by(&self, a: &Self) -> Self {
        a.matmul(self).matmul(&a.dagger())
    }

    /// Builds a square block matrix from an `n × n` grid of equally sized square blocks.
    pub fn from_blocks(blocks: &[Vec<ComplexMatrix>]) -> Result<Self> {
        let n = blocks.len();
        let b = blocks
            .first()
            .and_then(|row| row.first())
            .map(|m| m.rows)
            .ok_or(Error::EmptyList)?;
        let dim = n * b;
        let mut data = vec![ZERO; dim * dim];
        for (bi, row) in blocks.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Shape(format!("block row {bi} has {} blocks", row.len())));
            }
            for (bj, block) in row.iter().enumerate() {
                if block.rows != b || block.cols != b {
                    return Err(Error::Shape(format!("block ({bi}, {bj}) is not {b}x{b}")));
                }
                for r in 0..b {
                    let base = (bi * b + r) * dim + bj * b;
                    data[base..base + b].copy_from_slice(block.row(r));
                }
            }
        }
        Ok(Self {
            rows: dim,
            cols: dim,
            data,
        })
    }

    /// Extracts the `(bi, bj)` block of size `b × b`.
    pub fn block(&self, bi: usize, bj: usize, b: usize) -> Self {
        Self::from_fn(b, b, |r, c| self[(bi * b + r, bj * b + c)])
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Kronecker product of `factors` in the listed order.
pub fn tensor(factors: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let (first, rest) = factors.split_first().ok_or(Error::EmptyList)?;
    Ok(rest.iter().fold(first.clone(), |acc, m| acc.kron(m)))
}

/// Ordered subsystem dimensions of a tensor-product space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorLayout {
    dims: Vec<usize>,
}

impl FactorLayout {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Shape("layout has no factors".into()));
        }
        if dims.contains(&0) {
            return Err(Error::Shape(format!("layout {dims:?} has a zero dimension")));
        }
        Ok(Self { dims })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Row-major strides: the flat index is `Σ digit[f] · stride[f]`.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for f in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[f] = strides[f + 1] * self.dims[f + 1];
        }
        strides
    }

    fn check(&self, m: &ComplexMatrix) -> Result<()> {
        let n = m.require_square()?;
        if n != self.total_dim() {
            return Err(Error::LayoutMismatch {
                layout: self.total_dim(),
                matrix: n,
            });
        }
        Ok(())
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.dims.len() {
            return Err(Error::BadIndex {
                index,
                factors: self.dims.len(),
            });
        }
        Ok(())
    }

    /// Flat offsets of every composite index over the factors in `subset`.
    fn offsets(&self, subset: &[usize]) -> Vec<usize> {
        let strides = self.strides();
        let mut offsets = vec![0usize];
        for &f in subset {
            let mut next = Vec::with_capacity(offsets.len() * self.dims[f]);
            for &o in &offsets {
                for d in 0..self.dims[f] {
                    next.push(o + d * strides[f]);
                }
            }
            offsets = next;
        }
        offsets
    }
}

/// Traces out every factor not listed in `keep`.
///
/// Kept factors stay in their original order; duplicates in `keep` are ignored.
pub fn partial_trace(
    rho: &ComplexMatrix,
    layout: &FactorLayout,
    keep: &[usize],
) -> Result<(ComplexMatrix, FactorLayout)> {
    layout.check(rho)?;
    if keep.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    for &k in keep {
        layout.check_index(k)?;
    }
    let kept: Vec<usize> = (0..layout.len()).filter(|f| keep.contains(f)).collect();
    let traced: Vec<usize> = (0..layout.len()).filter(|f| !keep.contains(f)).collect();
    let kept_offsets = layout.offsets(&kept);
    let traced_offsets = layout.offsets(&traced);
    let n = kept_offsets.len();
    let out = ComplexMatrix::from_fn(n, n, |r, c| {
        let (ro, co) = (kept_offsets[r], kept_offsets[c]);
        traced_offsets
            .iter()
            .map(|&t| rho[(ro + t, co + t)])
            .sum()
    });
    let reduced = FactorLayout::new(kept.iter().map(|&f| layout.dims[f]).collect())?;
    Ok((out, reduced))
}

/// Transposes the single factor `subsystem`.
pub fn partial_transpose(
    rho: &ComplexMatrix,
    layout: &FactorLayout,
    subsystem: usize,
) -> Result<ComplexMatrix> {
    partial_transpose_many(rho, layout, &[subsystem])
}

/// Transposes every factor listed in `subsystems`.
pub fn partial_transpose_many(
    rho: &ComplexMatrix,
    layout: &FactorLayout,
    subsystems: &[usize],
) -> Result<ComplexMatrix> {
    layout.check(rho)?;
    for &s in subsystems {
        layout.check_index(s)?;
    }
    let strides = layout.strides();
    let swapped: Vec<(usize, usize)> = (0..layout.len())
        .filter(|f| subsystems.contains(f))
        .map(|f| (layout.dims[f], strides[f]))
        .collect();
    let n = rho.rows;
    Ok(ComplexMatrix::from_fn(n, n, |r, c| {
        let (mut sr, mut sc) = (r, c);
        for &(d, s) in &swapped {
            let (dr, dc) = ((r / s) % d, (c / s) % d);
            sr = sr - dr * s + dc * s;
            sc = sc - dc * s + dr * s;
        }
        rho[(sr, sc)]
    }))
}
