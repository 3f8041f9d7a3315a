//! Dense Hermitian operators with support-aware spectral calculus.
//!
//! Powers are always taken on the support: eigenvalues at or below
//! `rel_tol * lambda_max` are treated as the kernel and mapped to zero, so
//! `X^0` is the support projector and negative powers are pseudo-inverses.

use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Relative tolerance below which eigenvalues count as kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportCutoff {
    rel_tol: f64,
}

impl SupportCutoff {
    pub const DEFAULT_REL_TOL: f64 = 1e-12;

    pub fn new(rel_tol: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&rel_tol) {
            return Err(Error::InvalidConfig(format!(
                "support tolerance {rel_tol} outside [0, 1)"
            )));
        }
        Ok(Self { rel_tol })
    }

    pub fn rel_tol(self) -> f64 {
        self.rel_tol
    }

    /// Tolerance for support comparisons. Floored at a few ulps so that a zero
    /// cutoff still tolerates rounding in computed operators.
    pub(crate) fn relation_tol(self) -> f64 {
        self.rel_tol.max(16.0 * f64::EPSILON)
    }

    fn threshold(self, lambda_max: f64) -> f64 {
        self.rel_tol * lambda_max.max(0.0)
    }
}

impl Default for SupportCutoff {
    fn default() -> Self {
        Self {
            rel_tol: Self::DEFAULT_REL_TOL,
        }
    }
}

/// Which tensor factor a partial trace removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Support relation between two PSD operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportRelation {
    /// `ker(Y) ⊆ ker(X)` and not conversely.
    Dominated,
    /// Same support.
    EqualSupport,
    /// Supports are orthogonal.
    Orthogonal,
    None,
}

/// Spectral decomposition `X = V diag(values) V†` with values descending.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl EigenDecomposition {
    pub fn lambda_max(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// Indices of eigenvalues on the support at the given cutoff.
    pub fn support_mask(&self, cut: SupportCutoff) -> Vec<bool> {
        let lmax = self.lambda_max();
        if lmax <= 0.0 {
            return vec![false; self.values.len()];
        }
        let thr = cut.threshold(lmax);
        self.values.iter().map(|&l| l > thr).collect()
    }

    pub fn rank(&self, cut: SupportCutoff) -> usize {
        self.support_mask(cut).iter().filter(|&&s| s).count()
    }

    /// `Σ_i w_i v_i v_i†` for the given eigenvalue weights.
    pub fn synthesize(&self, weights: &[f64]) -> HermitianOperator {
        let d = self.values.len();
        let mut out = CMatrix::zeros(d, d);
        for (k, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let v = self.vectors.column(k);
            for j in 0..d {
                let vj = v[j].conj() * w;
                for i in 0..d {
                    out[(i, j)] += v[i] * vj;
                }
            }
        }
        HermitianOperator::from_hermitian_unchecked(out)
    }

    /// Applies `f` to support eigenvalues and zero to the kernel.
    pub fn map_on_support(&self, cut: SupportCutoff, f: impl Fn(f64) -> f64) -> HermitianOperator {
        let mask = self.support_mask(cut);
        let weights: Vec<f64> = self
            .values
            .iter()
            .zip(&mask)
            .map(|(&l, &s)| if s { f(l) } else { 0.0 })
            .collect();
        self.synthesize(&weights)
    }

    pub fn reconstruct(&self) -> HermitianOperator {
        self.synthesize(&self.values)
    }
}

/// A dense self-adjoint complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    mat: CMatrix,
}

fn symmetrize(mat: &CMatrix) -> CMatrix {
    (mat + mat.adjoint()) * Complex64::new(0.5, 0.0)
}

impl HermitianOperator {
    /// Hermiticity tolerance relative to the largest entry.
    pub const HERMITIAN_REL_TOL: f64 = 1e-12;

    /// Validates and symmetrizes `(X + X†)/2`.
    pub fn new(mat: CMatrix) -> Result<Self> {
        if mat.nrows() == 0 {
            return Err(Error::InvalidOperator("empty matrix".into()));
        }
        if mat.nrows() != mat.ncols() {
            return Err(Error::InvalidOperator(format!(
                "matrix is {}x{}, not square",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidOperator("non-finite entry".into()));
        }
        let scale = mat.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let asym = (&mat - mat.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if asym > Self::HERMITIAN_REL_TOL * scale {
            return Err(Error::InvalidOperator(format!(
                "not Hermitian (deviation {asym:e})"
            )));
        }
        Ok(Self::from_hermitian_unchecked(mat))
    }

    pub(crate) fn from_hermitian_unchecked(mat: CMatrix) -> Self {
        Self {
            mat: symmetrize(&mat),
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d = diag.len();
        let mat = CMatrix::from_fn(d, d, |i, j| {
            if i == j {
                Complex64::new(diag[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Self { mat }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: CMatrix::identity(dim, dim),
        }
    }

    /// `I/d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self::identity(dim).scale(1.0 / dim as f64)
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            mat: CMatrix::zeros(dim, dim),
        }
    }

    /// Rank-one projector onto the normalized `v`.
    pub fn pure(v: &[Complex64]) -> Result<Self> {
        let norm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if norm2 <= 0.0 || !norm2.is_finite() {
            return Err(Error::InvalidOperator("zero or non-finite vector".into()));
        }
        let d = v.len();
        let mat = CMatrix::from_fn(d, d, |i, j| v[i] * v[j].conj() / norm2);
        Ok(Self::from_hermitian_unchecked(mat))
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.mat[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.mat[(i, i)].re).sum()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            mat: &self.mat * Complex64::new(c, 0.0),
        }
    }

    /// Largest entry modulus.
    pub fn max_abs_entry(&self) -> f64 {
        self.mat.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Entrywise max-modulus distance.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.mat - &other.mat)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// `Re tr[X Y]`.
    pub fn trace_product(&self, other: &Self) -> f64 {
        let d = self.dim();
        let mut acc = 0.0;
        for i in 0..d {
            for k in 0..d {
                acc += (self.mat[(i, k)] * other.mat[(k, i)]).re;
            }
        }
        acc
    }

    /// `P X P` for Hermitian `P`.
    pub fn sandwich(&self, p: &Self) -> Self {
        Self::from_hermitian_unchecked(&p.mat * &self.mat * &p.mat)
    }

    /// `U X U†`.
    pub fn conjugate_by(&self, u: &CMatrix) -> Self {
        Self::from_hermitian_unchecked(u * &self.mat * u.adjoint())
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self {
            mat: self.mat.kronecker(&other.mat),
        }
    }

    /// Eigendecomposition with eigenvalues sorted descending.
    pub fn eig(&self) -> Result<EigenDecomposition> {
        if self.mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidOperator("non-finite entry".into()));
        }
        let se = self.mat.clone().symmetric_eigen();
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by(|&i, &j| se.eigenvalues[j].total_cmp(&se.eigenvalues[i]));
        let values = order.iter().map(|&i| se.eigenvalues[i]).collect();
        let vectors = CMatrix::from_fn(self.dim(), self.dim(), |r, c| se.eigenvectors[(r, order[c])]);
        Ok(EigenDecomposition { values, vectors })
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self.eig()?.values)
    }

    /// Largest absolute eigenvalue.
    pub fn op_norm(&self) -> Result<f64> {
        self.schatten_norm(f64::INFINITY)
    }

    /// `X^p` on the support of the PSD operator `X`.
    pub fn power_on_support(&self, p: f64, cut: SupportCutoff) -> Result<Self> {
        if !p.is_finite() {
            return Err(Error::InvalidExponent(p));
        }
        let e = self.eig()?;
        if p < 0.0 && e.rank(cut) == 0 {
            return Err(Error::ZeroOperator);
        }
        Ok(e.map_on_support(cut, |l| if p == 0.0 { 1.0 } else { l.powf(p) }))
    }

    /// Orthogonal projector onto the support, `X^0`.
    pub fn support_projector(&self, cut: SupportCutoff) -> Result<Self> {
        Ok(self.eig()?.map_on_support(cut, |_| 1.0))
    }

    /// Smallest eigenvalue above the cutoff.
    pub fn min_nonzero_eig(&self, cut: SupportCutoff) -> Result<f64> {
        let e = self.eig()?;
        let mask = e.support_mask(cut);
        e.values
            .iter()
            .zip(&mask)
            .filter(|(_, &s)| s)
            .map(|(&l, _)| l)
            .reduce(f64::min)
            .ok_or(Error::ZeroOperator)
    }

    /// Schatten (quasi-)norm `(Σ|λ_i|^p)^{1/p}`; `p = f64::INFINITY` gives the
    /// operator norm.
    pub fn schatten_norm(&self, p: f64) -> Result<f64> {
        if p.is_nan() || p <= 0.0 {
            return Err(Error::InvalidExponent(p));
        }
        let abs: Vec<f64> = self.eigenvalues()?.iter().map(|l| l.abs()).collect();
        Ok(schatten_from_abs(&abs, p))
    }

    /// Partial trace over `traced` for an operator on `A ⊗ B` (B index fastest).
    pub fn partial_trace(&self, d_a: usize, d_b: usize, traced: Subsystem) -> Result<Self> {
        check_bipartite(self.dim(), d_a, d_b)?;
        let m = &self.mat;
        let out = match traced {
            Subsystem::A => CMatrix::from_fn(d_b, d_b, |b, bp| {
                (0..d_a).map(|a| m[(a * d_b + b, a * d_b + bp)]).sum()
            }),
            Subsystem::B => CMatrix::from_fn(d_a, d_a, |a, ap| {
                (0..d_b).map(|b| m[(a * d_b + b, ap * d_b + b)]).sum()
            }),
        };
        Ok(Self::from_hermitian_unchecked(out))
    }

    pub fn is_psd(&self, abs_tol: f64) -> Result<bool> {
        Ok(self.eigenvalues()?.last().map_or(true, |&l| l >= -abs_tol))
    }
}

pub(crate) fn schatten_from_abs(abs: &[f64], p: f64) -> f64 {
    let s = abs.iter().copied().fold(0.0, f64::max);
    if s == 0.0 {
        return 0.0;
    }
    if p.is_infinite() {
        return s;
    }
    s * abs.iter().map(|a| (a / s).powf(p)).sum::<f64>().powf(1.0 / p)
}

fn check_bipartite(dim: usize, d_a: usize, d_b: usize) -> Result<()> {
    if d_a == 0 || d_b == 0 || d_a * d_b != dim {
        return Err(Error::DimMismatch {
            expected: d_a * d_b,
            got: dim,
        });
    }
    Ok(())
}

/// `tr_A[Z (X_A ⊗ 1_B)]` without forming the Kronecker product.
pub fn contract_a(z: &HermitianOperator, x_a: &HermitianOperator, d_a: usize, d_b: usize) -> Result<HermitianOperator> {
    check_bipartite(z.dim(), d_a, d_b)?;
    if x_a.dim() != d_a {
        return Err(Error::DimMismatch { expected: d_a, got: x_a.dim() });
    }
    let (zm, xm) = (&z.mat, &x_a.mat);
    let out = CMatrix::from_fn(d_b, d_b, |b, bp| {
        let mut acc = Complex64::new(0.0, 0.0);
        for a in 0..d_a {
            for ap in 0..d_a {
                acc += zm[(a * d_b + b, ap * d_b + bp)] * xm[(ap, a)];
            }
        }
        acc
    });
    Ok(HermitianOperator::from_hermitian_unchecked(out))
}

/// `tr_B[Z (1_A ⊗ Y_B)]` without forming the Kronecker product.
pub fn contract_b(z: &HermitianOperator, y_b: &HermitianOperator, d_a: usize, d_b: usize) -> Result<HermitianOperator> {
    check_bipartite(z.dim(), d_a, d_b)?;
    if y_b.dim() != d_b {
        return Err(Error::DimMismatch { expected: d_b, got: y_b.dim() });
    }
    let (zm, ym) = (&z.mat, &y_b.mat);
    let out = CMatrix::from_fn(d_a, d_a, |a, ap| {
        let mut acc = Complex64::new(0.0, 0.0);
        for b in 0..d_b {
            for bp in 0..d_b {
                acc += zm[(a * d_b + b, ap * d_b + bp)] * ym[(bp, b)];
            }
        }
        acc
    });
    Ok(HermitianOperator::from_hermitian_unchecked(out))
}

/// `X ≪ Y`: the part of `X` on `ker(Y)` is negligible.
pub fn is_dominated(x: &HermitianOperator, y: &HermitianOperator, cut: SupportCutoff) -> Result<bool> {
    let xn = x.op_norm()?;
    if xn == 0.0 {
        return Ok(true);
    }
    let kernel = &HermitianOperator::identity(y.dim()) - &y.support_projector(cut)?;
    Ok(x.sandwich(&kernel).op_norm()? <= cut.relation_tol() * xn)
}

/// `X ⊥ Y`: the part of `X` on `supp(Y)` is negligible.
pub fn is_orthogonal(x: &HermitianOperator, y: &HermitianOperator, cut: SupportCutoff) -> Result<bool> {
    let xn = x.op_norm()?;
    if xn == 0.0 {
        return Ok(true);
    }
    let proj = y.support_projector(cut)?;
    Ok(x.sandwich(&proj).op_norm()? <= cut.relation_tol() * xn)
}

pub fn support_relation(x: &HermitianOperator, y: &HermitianOperator, cut: SupportCutoff) -> Result<SupportRelation> {
    if x.dim() != y.dim() {
        return Err(Error::DimMismatch { expected: x.dim(), got: y.dim() });
    }
    let xy = is_dominated(x, y, cut)?;
    let yx = is_dominated(y, x, cut)?;
    Ok(match (xy, yx) {
        (true, true) => SupportRelation::EqualSupport,
        (true, false) => SupportRelation::Dominated,
        _ if is_orthogonal(x, y, cut)? => SupportRelation::Orthogonal,
        _ => SupportRelation::None,
    })
}

impl Add for &HermitianOperator {
    type Output = HermitianOperator;
    fn add(self, rhs: Self) -> HermitianOperator {
        HermitianOperator { mat: &self.mat + &rhs.mat }
    }
}

impl Sub for &HermitianOperator {
    type Output = HermitianOperator;
    fn sub(self, rhs: Self) -> HermitianOperator {
        HermitianOperator { mat: &self.mat - &rhs.mat }
    }
}

impl Mul<f64> for &HermitianOperator {
    type Output = HermitianOperator;
    fn mul(self, rhs: f64) -> HermitianOperator {
        self.scale(rhs)
    }
}
