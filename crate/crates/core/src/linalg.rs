//! Dense linear algebra primitives with explicit rank and inertia thresholds.
//!
//! The `*_scaled` variants take a reference magnitude for blocks and
//! products of larger objects.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Mat = DMatrix<f64>;

/// Relative asymmetry accepted by [`inertia`] before symmetrizing.
pub const SYMMETRY_REL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    /// Singular value `s` counts toward the rank iff
    /// `s > rank_rel_tol * max(s_max, scale) * max(rows, cols)`.
    pub rank_rel_tol: f64,
    /// Eigenvalue `l` is classified as zero iff
    /// `|l| <= eig_zero_factor * eps * dim * max(max|l|, scale)`.
    pub eig_zero_factor: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rank_rel_tol: 1e-12,
            eig_zero_factor: 100.0,
        }
    }
}

impl Tolerance {
    pub fn new(rank_rel_tol: f64, eig_zero_factor: f64) -> Result<Self> {
        let tol = Tolerance {
            rank_rel_tol,
            eig_zero_factor,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn with_eig_zero_factor(self, eig_zero_factor: f64) -> Self {
        Tolerance {
            eig_zero_factor,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rank_rel_tol.is_finite() && self.rank_rel_tol > 0.0) {
            return Err(Error::Tolerance(format!(
                "rank_rel_tol must be positive, got {}",
                self.rank_rel_tol
            )));
        }
        if !(self.eig_zero_factor.is_finite() && self.eig_zero_factor >= 1.0) {
            return Err(Error::Tolerance(format!(
                "eig_zero_factor must be >= 1, got {}",
                self.eig_zero_factor
            )));
        }
        Ok(())
    }

    pub fn rank_threshold(&self, sigma_max: f64, scale: f64, rows: usize, cols: usize) -> f64 {
        self.rank_rel_tol * sigma_max.max(scale) * rows.max(cols) as f64
    }

    pub fn eig_threshold(&self, max_abs: f64, scale: f64, dim: usize) -> f64 {
        self.eig_zero_factor * f64::EPSILON * dim.max(1) as f64 * max_abs.max(scale)
    }
}

/// Eigenvalue sign counts of a symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct InertiaTriple {
    pub plus: usize,
    pub zero: usize,
    pub minus: usize,
}

impl InertiaTriple {
    pub fn new(plus: usize, zero: usize, minus: usize) -> Self {
        InertiaTriple { plus, zero, minus }
    }

    /// Number of negative eigenvalues.
    pub fn ind(&self) -> usize {
        self.minus
    }

    pub fn sign(&self) -> i64 {
        self.plus as i64 - self.minus as i64
    }

    pub fn rank(&self) -> usize {
        self.plus + self.minus
    }

    pub fn dim(&self) -> usize {
        self.plus + self.zero + self.minus
    }

    /// Inertia of the negated matrix.
    pub fn negated(&self) -> Self {
        InertiaTriple {
            plus: self.minus,
            zero: self.zero,
            minus: self.plus,
        }
    }
}

impl std::fmt::Display for InertiaTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.plus, self.zero, self.minus)
    }
}

pub fn ensure_finite(a: &Mat) -> Result<()> {
    if a.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Maximum absolute row sum.
pub fn norm_inf(a: &Mat) -> f64 {
    a.row_iter()
        .map(|row| row.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn symmetrize(a: &Mat) -> Mat {
    (a + a.transpose()) * 0.5
}

struct Decomposition {
    u: Mat,
    sigma: Vec<f64>,
    v_t: Mat,
    threshold: f64,
}

impl Decomposition {
    fn new(a: &Mat, scale: f64, tol: &Tolerance) -> Self {
        let (rows, cols) = a.shape();
        let svd = a.clone().svd(true, true);
        let sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
        let sigma_max = sigma.iter().copied().fold(0.0, f64::max);
        Decomposition {
            u: svd.u.expect("svd computed with u"),
            v_t: svd.v_t.expect("svd computed with v_t"),
            threshold: tol.rank_threshold(sigma_max, scale, rows, cols),
            sigma,
        }
    }

    fn rank(&self) -> usize {
        self.sigma.iter().filter(|&&s| s > self.threshold).count()
    }

    fn pinv(&self) -> Mat {
        let mut out = Mat::zeros(self.v_t.ncols(), self.u.nrows());
        for (i, &s) in self.sigma.iter().enumerate() {
            if s > self.threshold {
                let v = self.v_t.row(i).transpose();
                let u = self.u.column(i);
                out += (v * u.transpose()) / s;
            }
        }
        out
    }
}

fn is_empty(a: &Mat) -> bool {
    a.nrows() == 0 || a.ncols() == 0
}

pub fn pseudoinverse_scaled(a: &Mat, scale: f64, tol: &Tolerance) -> Mat {
    if is_empty(a) {
        return Mat::zeros(a.ncols(), a.nrows());
    }
    Decomposition::new(a, scale, tol).pinv()
}

pub fn rank_scaled(a: &Mat, scale: f64, tol: &Tolerance) -> usize {
    if is_empty(a) {
        return 0;
    }
    Decomposition::new(a, scale, tol).rank()
}

/// Orthonormal basis (as columns) of the null space of `a`.
pub fn kernel_basis(a: &Mat, scale: f64, tol: &Tolerance) -> Mat {
    let (rows, cols) = a.shape();
    if cols == 0 {
        return Mat::zeros(0, 0);
    }
    if rows == 0 {
        return Mat::identity(cols, cols);
    }
    // Pad wide matrices so the decomposition returns a full right factor.
    let padded = if rows < cols {
        let mut p = Mat::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("svd computed with v_t");
    let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let threshold = tol.rank_threshold(sigma_max, scale, rows, cols);
    let kernel: Vec<_> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= threshold)
        .map(|(i, _)| v_t.row(i).transpose())
        .collect();
    if kernel.is_empty() {
        Mat::zeros(cols, 0)
    } else {
        Mat::from_columns(&kernel)
    }
}

/// Inertia of `(s + s^T)/2` without any symmetry check.
pub fn inertia_scaled(s: &Mat, scale: f64, tol: &Tolerance) -> InertiaTriple {
    let dim = s.nrows();
    if dim == 0 {
        return InertiaTriple::default();
    }
    let eig = SymmetricEigen::new(symmetrize(s));
    let max_abs = eig.eigenvalues.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let thr = tol.eig_threshold(max_abs, scale, dim);
    let mut out = InertiaTriple::default();
    for &l in eig.eigenvalues.iter() {
        if l > thr {
            out.plus += 1;
        } else if l < -thr {
            out.minus += 1;
        } else {
            out.zero += 1;
        }
    }
    out
}

/// Inertia of `F S F` where `F = N N^T` is the orthogonal projector onto the
/// column space of the orthonormal `basis` N.
///
/// The nonzero spectrum of `F S F` is the spectrum of `N^T S N`; the remaining
/// eigenvalues are structurally zero and are counted without classification.
pub fn projected_inertia(s: &Mat, basis: &Mat, scale: f64, tol: &Tolerance) -> InertiaTriple {
    let dim = s.nrows();
    if basis.ncols() == 0 {
        return InertiaTriple::new(0, dim, 0);
    }
    let compressed = basis.transpose() * symmetrize(s) * basis;
    let inner = inertia_scaled(&compressed, scale, tol);
    InertiaTriple::new(inner.plus, dim - inner.plus - inner.minus, inner.minus)
}

pub fn pseudoinverse(a: &Mat, tol: &Tolerance) -> Result<Mat> {
    ensure_finite(a)?;
    Ok(pseudoinverse_scaled(a, 0.0, tol))
}

/// `(E_A, F_A) = (I - A A^+, I - A^+ A)`.
pub fn kernel_projectors(a: &Mat, tol: &Tolerance) -> Result<(Mat, Mat)> {
    ensure_finite(a)?;
    Ok(kernel_projectors_scaled(a, 0.0, tol))
}

pub fn kernel_projectors_scaled(a: &Mat, scale: f64, tol: &Tolerance) -> (Mat, Mat) {
    (
        kernel_projector(&a.transpose(), scale, tol),
        kernel_projector(a, scale, tol),
    )
}

/// Orthogonal projector onto `ker a`, i.e. `I - a^+ a`, built from a kernel basis.
pub fn kernel_projector(a: &Mat, scale: f64, tol: &Tolerance) -> Mat {
    let k = kernel_basis(a, scale, tol);
    &k * k.transpose()
}

pub fn rank_of(a: &Mat, tol: &Tolerance) -> Result<usize> {
    ensure_finite(a)?;
    Ok(rank_scaled(a, 0.0, tol))
}

pub fn inertia(s: &Mat, tol: &Tolerance) -> Result<InertiaTriple> {
    ensure_finite(s)?;
    if !s.is_square() {
        return Err(Error::Shape(format!(
            "inertia needs a square matrix, got {}x{}",
            s.nrows(),
            s.ncols()
        )));
    }
    let defect = norm_inf(&(s - s.transpose()));
    let limit = SYMMETRY_REL_TOL * norm_inf(s);
    if defect > limit {
        return Err(Error::Asymmetric { defect, limit });
    }
    Ok(inertia_scaled(s, 0.0, tol))
}

pub fn block_matrix(a: &Mat, b: &Mat, c: &Mat, d: &Mat) -> Mat {
    let (k, l) = (a.nrows() + c.nrows(), a.ncols() + b.ncols());
    let mut out = Mat::zeros(k, l);
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((0, a.ncols()), b.shape()).copy_from(b);
    out.view_mut((a.nrows(), 0), c.shape()).copy_from(c);
    out.view_mut((a.nrows(), a.ncols()), d.shape()).copy_from(d);
    out
}

pub fn hstack(blocks: &[Mat]) -> Mat {
    let rows = blocks.first().map_or(0, |b| b.nrows());
    let cols = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = Mat::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        out.view_mut((0, at), b.shape()).copy_from(b);
        at += b.ncols();
    }
    out
}

pub fn vstack(top: &Mat, bottom: &Mat) -> Mat {
    let mut out = Mat::zeros(top.nrows() + bottom.nrows(), top.ncols());
    out.view_mut((0, 0), top.shape()).copy_from(top);
    out.view_mut((top.nrows(), 0), bottom.shape())
        .copy_from(bottom);
    out
}

/// Inertia of `[[A, B], [B^T, D]]` computed directly and through the
/// two-step reduction
/// `i(A) + rank(M) + i(F_M (D - B^T A^+ B) F_M)` with `M = E_A B`.
pub fn block_inertia_reduction(
    a: &Mat,
    b: &Mat,
    d: &Mat,
    tol: &Tolerance,
) -> Result<(InertiaTriple, InertiaTriple)> {
    for m in [a, b, d] {
        ensure_finite(m)?;
    }
    if !a.is_square() || !d.is_square() || b.nrows() != a.nrows() || b.ncols() != d.nrows() {
        return Err(Error::DimensionMismatch {
            context: "block_inertia_reduction",
            expected: format!(
                "A k x k, B k x l, D l x l with k={} l={}",
                a.nrows(),
                d.nrows()
            ),
            found: format!(
                "A {}x{}, B {}x{}, D {}x{}",
                a.nrows(),
                a.ncols(),
                b.nrows(),
                b.ncols(),
                d.nrows(),
                d.ncols()
            ),
        });
    }
    let whole = block_matrix(a, b, &b.transpose(), d);
    let direct = inertia(&whole, tol)?;

    let scale = whole.norm();
    let a_pinv = pseudoinverse_scaled(a, scale, tol);
    let (e_a, _) = kernel_projectors_scaled(a, scale, tol);
    let m = &e_a * b;
    let rank_m = rank_scaled(&m, scale, tol);
    let schur = d - b.transpose() * &a_pinv * b;
    let kernel = kernel_basis(&m, scale, tol);
    let tail = projected_inertia(&schur, &kernel, scale, tol);
    let head = inertia_scaled(a, scale, tol);

    let plus = head.plus + rank_m + tail.plus;
    let minus = head.minus + rank_m + tail.minus;
    let dim = whole.nrows();
    let reduced = InertiaTriple::new(plus, dim.saturating_sub(plus + minus), minus);
    Ok((direct, reduced))
}
