//! Dense complex matrices and the structured exponential / logarithm used
//! throughout the crate.
//!
//! Every matrix in this crate is small (at most 8×8 in practice), so the
//! representation is a thin wrapper over a column-major `nalgebra` matrix
//! with a row-major public face.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Tolerance used when certifying factorizations.
pub const TOL_FACTOR: f64 = 1e-10;
/// Tolerance on spectral clustering (e.g. "all eigenvalues equal to one").
pub const TOL_SPECTRUM: f64 = 1e-8;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Block partition `n = p + q` of the ambient space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockSpec {
    pub p: usize,
    pub q: usize,
}

impl BlockSpec {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::InvalidInput(format!("block sizes must be positive, got ({p},{q})")));
        }
        Ok(BlockSpec { p, q })
    }

    pub fn n(&self) -> usize {
        self.p + self.q
    }

    pub fn rank(&self) -> usize {
        self.p.min(self.q)
    }

    /// `I_{p,q} = diag(1_p, -1_q)`.
    pub fn form(&self) -> CMatrix {
        let n = self.n();
        CMatrix::from_fn(n, n, |i, j| if i != j { ZERO } else if i < self.p { ONE } else { -ONE })
    }

    fn sign(&self, i: usize) -> f64 {
        if i < self.p {
            1.0
        } else {
            -1.0
        }
    }
}

impl fmt::Display for BlockSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SU({},{})", self.p, self.q)
    }
}

/// A dense complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct CMatrix(DMatrix<C64>);

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows(), self.cols())?;
        for i in 0..self.rows() {
            write!(f, "  ")?;
            for j in 0..self.cols() {
                let z = self[(i, j)];
                write!(f, "{:>10.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        CMatrix(DMatrix::identity(n, n))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        CMatrix(DMatrix::from_fn(rows, cols, f))
    }

    /// Matrix unit `E_{ij}`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(i, j)] = ONE;
        m
    }

    pub fn diag(d: &[C64]) -> Self {
        let n = d.len();
        Self::from_fn(n, n, |i, j| if i == j { d[i] } else { ZERO })
    }

    /// Builds a matrix from rows, rejecting ragged input and non-finite entries.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::InvalidInput("empty matrix".into()));
        }
        let cols = rows[0].len();
        if cols == 0 || rows.iter().any(|row| row.len() != cols) {
            return Err(Error::InvalidInput("ragged or empty rows".into()));
        }
        let m = Self::from_fn(r, cols, |i, j| rows[i][j]);
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(m)
    }

    pub fn from_row_slice(rows: usize, cols: usize, data: &[C64]) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        let m = CMatrix(DMatrix::from_row_slice(rows, cols, data));
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(m)
    }

    pub fn from_dmatrix(m: DMatrix<C64>) -> Self {
        CMatrix(m)
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Entries in row-major order.
    pub fn to_row_major(&self) -> Vec<C64> {
        let mut v = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                v.push(self[(i, j)]);
            }
        }
        v
    }

    pub fn to_rows(&self) -> Vec<Vec<C64>> {
        (0..self.rows()).map(|i| (0..self.cols()).map(|j| self[(i, j)]).collect()).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        CMatrix(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        CMatrix(self.0.transpose())
    }

    pub fn conj(&self) -> Self {
        CMatrix(self.0.map(|z| z.conj()))
    }

    pub fn scale(&self, s: C64) -> Self {
        CMatrix(&self.0 * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(cr(s))
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> f64 {
        (0..self.cols())
            .map(|j| (0..self.rows()).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn dist(&self, other: &CMatrix) -> f64 {
        (self - other).norm()
    }

    pub fn commutator(&self, other: &CMatrix) -> CMatrix {
        &(self * other) - &(other * self)
    }

    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> CMatrix {
        CMatrix(self.0.view((r0, c0), (nr, nc)).into_owned())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &CMatrix) {
        self.0.view_mut((r0, c0), (b.rows(), b.cols())).copy_from(&b.0);
    }

    /// The four blocks `(A, B, C, D)` of a square matrix under `s`.
    pub fn blocks(&self, s: BlockSpec) -> (CMatrix, CMatrix, CMatrix, CMatrix) {
        let (p, q) = (s.p, s.q);
        (self.block(0, 0, p, p), self.block(0, p, p, q), self.block(p, 0, q, p), self.block(p, p, q, q))
    }

    pub fn from_blocks(a: &CMatrix, b: &CMatrix, c: &CMatrix, d: &CMatrix) -> CMatrix {
        let (p, q) = (a.rows(), d.rows());
        let mut m = CMatrix::zeros(p + q, p + q);
        m.set_block(0, 0, a);
        m.set_block(0, p, b);
        m.set_block(p, 0, c);
        m.set_block(p, p, d);
        m
    }

    pub fn block_diag(a: &CMatrix, d: &CMatrix) -> CMatrix {
        Self::from_blocks(a, &CMatrix::zeros(a.rows(), d.rows()), &CMatrix::zeros(d.rows(), a.rows()), d)
    }

    pub fn det(&self) -> Result<C64> {
        self.require_square()?;
        Ok(self.0.clone().determinant())
    }

    pub fn inverse(&self) -> Result<CMatrix> {
        self.require_square()?;
        let lu = self.0.clone().lu();
        lu.try_inverse().map(CMatrix).filter(CMatrix::is_finite).ok_or(Error::Singular)
    }

    /// Solves `self · X = rhs`.
    pub fn solve(&self, rhs: &CMatrix) -> Result<CMatrix> {
        self.require_square()?;
        self.0.clone().lu().solve(&rhs.0).map(CMatrix).filter(CMatrix::is_finite).ok_or(Error::Singular)
    }

    pub fn singular_values(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self.0.clone().svd(false, false).singular_values.iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    /// 2-norm condition number; infinite for singular matrices.
    pub fn condition_number(&self) -> f64 {
        let s = self.singular_values();
        let (hi, lo) = (s[0], *s.last().unwrap());
        if lo == 0.0 {
            f64::INFINITY
        } else {
            hi / lo
        }
    }

    /// Eigen-decomposition of a Hermitian matrix: ascending eigenvalues and
    /// the unitary whose columns are the eigenvectors.
    pub fn hermitian_eigen(&self) -> Result<(Vec<f64>, CMatrix)> {
        self.require_square()?;
        let h = CMatrix(self.0.clone() + self.0.adjoint()).scale_re(0.5);
        let eig = h.0.symmetric_eigen();
        let n = self.rows();
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let vals = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vecs = CMatrix::from_fn(n, n, |r, k| eig.eigenvectors[(r, idx[k])]);
        Ok((vals, vecs))
    }

    /// Applies a real function to a Hermitian matrix through its spectrum.
    pub fn hermitian_fn(&self, f: impl Fn(f64) -> f64) -> Result<CMatrix> {
        let (vals, u) = self.hermitian_eigen()?;
        let d: Vec<C64> = vals.iter().map(|&v| cr(f(v))).collect();
        Ok(&(&u * &CMatrix::diag(&d)) * &u.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && (self - &self.adjoint()).max_abs() <= tol * self.max_abs().max(1.0)
    }

    pub fn vec_c(&self) -> Vec<C64> {
        self.to_row_major()
    }

    /// Matrix–vector product.
    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols(), "vector length");
        (0..self.rows()).map(|i| (0..self.cols()).map(|j| self[(i, j)] * v[j]).sum()).collect()
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NonSquare(self.rows(), self.cols()))
        }
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, ij: (usize, usize)) -> &C64 {
        &self.0[ij]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, ij: (usize, usize)) -> &mut C64 {
        &mut self.0[ij]
    }
}

impl<'a> Mul<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 * &rhs.0)
    }
}

impl Mul<CMatrix> for CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: CMatrix) -> CMatrix {
        CMatrix(self.0 * rhs.0)
    }
}

impl<'a> Add<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 + &rhs.0)
    }
}

impl Add<CMatrix> for CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: CMatrix) -> CMatrix {
        CMatrix(self.0 + rhs.0)
    }
}

impl AddAssign<&CMatrix> for CMatrix {
    fn add_assign(&mut self, rhs: &CMatrix) {
        self.0 += &rhs.0;
    }
}

impl<'a> Sub<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 - &rhs.0)
    }
}

impl Sub<CMatrix> for CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: CMatrix) -> CMatrix {
        CMatrix(self.0 - rhs.0)
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        CMatrix(-&self.0)
    }
}

/// Largest `k ≤ n` with `X^k ≠ 0`, plus one; `None` when `X` is not nilpotent
/// to working precision.
fn nilpotency_order(x: &CMatrix) -> Option<usize> {
    let n = x.rows();
    let scale = x.norm().max(1.0);
    let mut p = x.clone();
    for k in 1..=n {
        if p.norm() <= 1e-15 * scale.powi(k as i32) {
            return Some(k);
        }
        p = &p * x;
    }
    None
}

/// Exact exponential of a matrix known to be nilpotent: the power series
/// terminates after at most `n` terms.
pub fn mat_exp_nilpotent(x: &CMatrix) -> CMatrix {
    let n = x.rows();
    let mut sum = CMatrix::identity(n);
    let mut term = CMatrix::identity(n);
    for k in 1..n {
        term = (&term * x).scale_re(1.0 / k as f64);
        if term.max_abs() == 0.0 {
            break;
        }
        sum += &term;
    }
    sum
}

/// Matrix exponential.
///
/// Nilpotent inputs use the terminating series; everything else goes through
/// scaling and squaring with a Taylor kernel evaluated to full precision on
/// a matrix of norm at most 1/2.
pub fn mat_exp(x: &CMatrix) -> Result<CMatrix> {
    if !x.is_square() {
        return Err(Error::NonSquare(x.rows(), x.cols()));
    }
    let n = x.rows();
    if nilpotency_order(x).is_some() {
        return Ok(mat_exp_nilpotent(x));
    }
    let norm = x.norm1();
    let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let y = x.scale_re(0.5f64.powi(s));
    let mut sum = CMatrix::identity(n);
    let mut term = CMatrix::identity(n);
    for k in 1..40 {
        term = (&term * &y).scale_re(1.0 / k as f64);
        sum += &term;
        if term.max_abs() <= 1e-18 * sum.max_abs() {
            break;
        }
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    Ok(sum)
}

/// Logarithm of a unipotent matrix via the terminating Mercator series.
pub fn mat_log_unipotent(u: &CMatrix) -> Result<CMatrix> {
    if !u.is_square() {
        return Err(Error::NonSquare(u.rows(), u.cols()));
    }
    let n = u.rows();
    let nil = u - &CMatrix::identity(n);
    // All eigenvalues equal one  <=>  (U - 1)^n = 0.
    let mut p = CMatrix::identity(n);
    for _ in 0..n {
        p = &p * &nil;
    }
    let scale = nil.norm().max(1.0).powi(n as i32);
    if p.norm() > TOL_SPECTRUM * scale {
        return Err(Error::NotUnipotent);
    }
    let mut log = CMatrix::zeros(n, n);
    let mut pow = CMatrix::identity(n);
    for k in 1..n {
        pow = &pow * &nil;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        log += &pow.scale_re(sign / k as f64);
    }
    Ok(log)
}

/// `I_{p,q} X^* I_{p,q}`.
pub fn indef_adjoint(x: &CMatrix, s: BlockSpec) -> Result<CMatrix> {
    if !x.is_square() || x.rows() != s.n() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix against block spec {s}",
            x.rows(),
            x.cols()
        )));
    }
    let n = s.n();
    Ok(CMatrix::from_fn(n, n, |i, j| x[(j, i)].conj() * (s.sign(i) * s.sign(j))))
}

/// `θ(X) = I_{p,q} X I_{p,q}`.
pub fn theta(x: &CMatrix, s: BlockSpec) -> CMatrix {
    let n = s.n();
    CMatrix::from_fn(n, n, |i, j| x[(i, j)] * (s.sign(i) * s.sign(j)))
}

/// Lie-algebra involution `σ(X) = -I X^* I` whose fixed points form 𝔰𝔲(p,q).
pub fn sigma_alg(x: &CMatrix, s: BlockSpec) -> CMatrix {
    let n = s.n();
    CMatrix::from_fn(n, n, |i, j| -x[(j, i)].conj() * (s.sign(i) * s.sign(j)))
}

/// Pairwise (cascade) summation; the summation tree depends only on the length.
pub fn pairwise_sum<T>(xs: &[T]) -> T
where
    T: Copy + Add<Output = T> + Default,
{
    match xs.len() {
        0 => T::default(),
        1 => xs[0],
        n if n <= 8 => xs.iter().copied().fold(T::default(), |a, b| a + b),
        n => {
            let (a, b) = xs.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_zero_is_identity() {
        assert_eq!(mat_exp(&CMatrix::zeros(2, 2)).unwrap(), CMatrix::identity(2));
    }

    #[test]
    fn exp_of_matrix_unit() {
        let e = mat_exp(&CMatrix::unit(2, 0, 1)).unwrap();
        let want = CMatrix::from_rows(&[vec![ONE, ONE], vec![ZERO, ONE]]).unwrap();
        assert!(e.dist(&want) < 1e-15);
    }

    #[test]
    fn exp_of_boost() {
        let t = 0.7f64;
        let x = CMatrix::from_rows(&[vec![ZERO, cr(t)], vec![cr(t), ZERO]]).unwrap();
        let e = mat_exp(&x).unwrap();
        let want = CMatrix::from_rows(&[vec![cr(t.cosh()), cr(t.sinh())], vec![cr(t.sinh()), cr(t.cosh())]]).unwrap();
        assert!(e.dist(&want) < 1e-14);
    }

    #[test]
    fn exp_of_large_rotation() {
        let t = 20.0f64;
        let x = CMatrix::from_rows(&[vec![ZERO, cr(-t)], vec![cr(t), ZERO]]).unwrap();
        let e = mat_exp(&x).unwrap();
        let want =
            CMatrix::from_rows(&[vec![cr(t.cos()), cr(-t.sin())], vec![cr(t.sin()), cr(t.cos())]]).unwrap();
        assert!(e.dist(&want) < 1e-12, "{}", e.dist(&want));
    }

    #[test]
    fn log_of_identity_and_translation() {
        assert_eq!(mat_log_unipotent(&CMatrix::identity(3)).unwrap(), CMatrix::zeros(3, 3));
        let z = c(0.3, -1.2);
        let u = CMatrix::from_rows(&[vec![ONE, z], vec![ZERO, ONE]]).unwrap();
        assert!(mat_log_unipotent(&u).unwrap().dist(&CMatrix::unit(2, 0, 1).scale(z)) < 1e-15);
    }

    #[test]
    fn log_rejects_non_unipotent() {
        let d = CMatrix::diag(&[cr(2.0), cr(0.5)]);
        assert!(matches!(mat_log_unipotent(&d), Err(Error::NotUnipotent)));
    }

    #[test]
    fn indefinite_adjoint_examples() {
        let s = BlockSpec::new(1, 1).unwrap();
        assert_eq!(indef_adjoint(&CMatrix::identity(2), s).unwrap(), CMatrix::identity(2));
        let g = C64::from_polar(1.0, 0.4);
        let d = CMatrix::diag(&[g, g.inv()]);
        let want = CMatrix::diag(&[g.conj(), g.inv().conj()]);
        assert!(indef_adjoint(&d, s).unwrap().dist(&want) < 1e-15);
        let x = CMatrix::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]]).unwrap();
        assert_eq!(theta(&x, s), x.scale_re(-1.0));
        assert!(indef_adjoint(&CMatrix::identity(3), s).is_err());
    }

    #[test]
    fn pairwise_sum_matches_naive() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64).sin()).collect();
        let naive: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - naive).abs() < 1e-12);
    }
}
