//! Lagrangian frames, symplectic matrices, the rotation family `R_alpha` and
//! seeded random generators for the verification harness.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ensure_finite, hstack, norm_inf, rank_of, vstack, Mat, Tolerance};

/// Relative defect accepted in `Y^T J Y = 0` and `Z^T J Z = J`.
pub const STRUCTURE_REL_TOL: f64 = 1e-8;

/// `J = [[0, I], [-I, 0]]` of size `2n`.
pub fn j_matrix(n: usize) -> Mat {
    let mut j = Mat::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = 1.0;
        j[(n + i, i)] = -1.0;
    }
    j
}

fn structure_limit(m: &Mat) -> f64 {
    STRUCTURE_REL_TOL * m.norm().powi(2).max(1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameReport {
    pub n: usize,
    pub rank: usize,
    pub lagrangian_defect: f64,
    pub limit: f64,
    pub accepted: bool,
}

/// Checks `rank Y = n` and `Y^T J Y = 0` for a `2n x n` matrix.
pub fn validate_frame(y: &Mat, tol: &Tolerance) -> Result<FrameReport> {
    ensure_finite(y)?;
    if !y.nrows().is_multiple_of(2) || y.nrows() == 0 || y.nrows() != 2 * y.ncols() {
        return Err(Error::Shape(format!(
            "a frame must be 2n x n, got {}x{}",
            y.nrows(),
            y.ncols()
        )));
    }
    let n = y.ncols();
    let rank = rank_of(y, tol)?;
    let defect = norm_inf(&(y.transpose() * j_matrix(n) * y));
    let limit = structure_limit(y);
    Ok(FrameReport {
        n,
        rank,
        lagrangian_defect: defect,
        limit,
        accepted: rank == n && defect <= limit,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymplecticReport {
    pub n: usize,
    pub defect: f64,
    pub limit: f64,
    pub accepted: bool,
}

pub fn validate_symplectic(z: &Mat) -> Result<SymplecticReport> {
    ensure_finite(z)?;
    if !z.is_square() || !z.nrows().is_multiple_of(2) || z.nrows() == 0 {
        return Err(Error::Shape(format!(
            "a symplectic matrix must be 2n x 2n, got {}x{}",
            z.nrows(),
            z.ncols()
        )));
    }
    let n = z.nrows() / 2;
    let j = j_matrix(n);
    let defect = norm_inf(&(z.transpose() * &j * z - &j));
    let limit = structure_limit(z);
    Ok(SymplecticReport {
        n,
        defect,
        limit,
        accepted: defect <= limit,
    })
}

/// A `2n x n` matrix `Y = (X; U)` of rank `n` with `Y^T J Y = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangianFrame {
    y: Mat,
}

impl LagrangianFrame {
    pub fn new(y: Mat, tol: &Tolerance) -> Result<Self> {
        let report = validate_frame(&y, tol)?;
        if !report.accepted {
            return Err(Error::InvalidFrame {
                n: report.n,
                rank: report.rank,
                defect: report.lagrangian_defect,
            });
        }
        Ok(LagrangianFrame { y })
    }

    pub fn from_blocks(x: &Mat, u: &Mat, tol: &Tolerance) -> Result<Self> {
        if x.shape() != u.shape() {
            return Err(Error::DimensionMismatch {
                context: "frame blocks",
                expected: format!("{}x{}", x.nrows(), x.ncols()),
                found: format!("{}x{}", u.nrows(), u.ncols()),
            });
        }
        Self::new(vstack(x, u), tol)
    }

    /// Wraps a matrix known to be a frame up to roundoff, e.g. the image of a
    /// frame under a symplectic map.
    pub(crate) fn from_matrix_unchecked(y: Mat) -> Self {
        debug_assert_eq!(y.nrows(), 2 * y.ncols());
        LagrangianFrame { y }
    }

    /// The frame `(0; I)`.
    pub fn vertical(n: usize) -> Self {
        LagrangianFrame {
            y: vstack(&Mat::zeros(n, n), &Mat::identity(n, n)),
        }
    }

    /// The frame `(I; 0) = J (0; I)`.
    pub fn horizontal(n: usize) -> Self {
        LagrangianFrame {
            y: vstack(&Mat::identity(n, n), &Mat::zeros(n, n)),
        }
    }

    pub fn n(&self) -> usize {
        self.y.ncols()
    }

    pub fn matrix(&self) -> &Mat {
        &self.y
    }

    pub fn into_matrix(self) -> Mat {
        self.y
    }

    pub fn x(&self) -> Mat {
        self.y.rows(0, self.n()).into_owned()
    }

    pub fn u(&self) -> Mat {
        self.y.rows(self.n(), self.n()).into_owned()
    }

    /// Frobenius norm, used as the reference magnitude for blocks of `Y`.
    pub fn scale(&self) -> f64 {
        self.y.norm()
    }

    /// `Y C` for a nonsingular `C`; spans the same subspace.
    pub fn right_scaled(&self, c: &Mat) -> Result<Self> {
        if c.shape() != (self.n(), self.n()) {
            return Err(Error::DimensionMismatch {
                context: "right scaling",
                expected: format!("{0}x{0}", self.n()),
                found: format!("{}x{}", c.nrows(), c.ncols()),
            });
        }
        if c.clone().try_inverse().is_none() {
            return Err(Error::Shape("right scaling matrix is singular".into()));
        }
        Ok(LagrangianFrame { y: &self.y * c })
    }
}

pub fn check_same_n(context: &'static str, a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch {
            context,
            expected: format!("n = {a}"),
            found: format!("n = {b}"),
        });
    }
    Ok(())
}

/// `w(Y1, Y2) = Y1^T J Y2 = X1^T U2 - U1^T X2`.
///
/// Evaluated entrywise so that `w(Y1, Y2) = -w(Y2, Y1)^T` holds bit for bit.
pub fn wronskian(y1: &LagrangianFrame, y2: &LagrangianFrame) -> Result<Mat> {
    check_same_n("wronskian", y1.n(), y2.n())?;
    let n = y1.n();
    let (a, b) = (y1.matrix(), y2.matrix());
    Ok(Mat::from_fn(n, n, |i, j| {
        (0..n).fold(0.0, |acc, k| {
            acc + (a[(k, i)] * b[(n + k, j)] - a[(n + k, i)] * b[(k, j)])
        })
    }))
}

/// A `2n x 2n` matrix `Z` with `Z^T J Z = J`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix {
    z: Mat,
}

impl SymplecticMatrix {
    pub fn new(z: Mat) -> Result<Self> {
        let report = validate_symplectic(&z)?;
        if !report.accepted {
            return Err(Error::InvalidSymplectic {
                defect: report.defect,
            });
        }
        Ok(SymplecticMatrix { z })
    }

    pub(crate) fn from_matrix_unchecked(z: Mat) -> Self {
        SymplecticMatrix { z }
    }

    pub fn identity(n: usize) -> Self {
        SymplecticMatrix {
            z: Mat::identity(2 * n, 2 * n),
        }
    }

    pub fn j(n: usize) -> Self {
        SymplecticMatrix { z: j_matrix(n) }
    }

    /// `((I, 0), (Q, I))` for symmetric `Q`.
    pub fn lower_shear(q: &Mat) -> Result<Self> {
        let n = q.nrows();
        Self::new(crate::linalg::block_matrix(
            &Mat::identity(n, n),
            &Mat::zeros(n, n),
            q,
            &Mat::identity(n, n),
        ))
    }

    /// `((I, B), (0, I))` for symmetric `B`.
    pub fn upper_shear(b: &Mat) -> Result<Self> {
        let n = b.nrows();
        Self::new(crate::linalg::block_matrix(
            &Mat::identity(n, n),
            b,
            &Mat::zeros(n, n),
            &Mat::identity(n, n),
        ))
    }

    /// `diag(K, K^{-T})` for nonsingular `K`.
    pub fn block_diagonal(k: &Mat) -> Result<Self> {
        let n = k.nrows();
        let inv = k
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Shape("block-diagonal factor is singular".into()))?;
        Self::new(crate::linalg::block_matrix(
            k,
            &Mat::zeros(n, n),
            &Mat::zeros(n, n),
            &inv.transpose(),
        ))
    }

    pub fn n(&self) -> usize {
        self.z.nrows() / 2
    }

    pub fn matrix(&self) -> &Mat {
        &self.z
    }

    pub fn into_matrix(self) -> Mat {
        self.z
    }

    pub fn a(&self) -> Mat {
        let n = self.n();
        self.z.view((0, 0), (n, n)).into_owned()
    }

    pub fn b(&self) -> Mat {
        let n = self.n();
        self.z.view((0, n), (n, n)).into_owned()
    }

    pub fn c(&self) -> Mat {
        let n = self.n();
        self.z.view((n, 0), (n, n)).into_owned()
    }

    pub fn d(&self) -> Mat {
        let n = self.n();
        self.z.view((n, n), (n, n)).into_owned()
    }

    /// `Z^{-1} = -J Z^T J`.
    pub fn inverse(&self) -> Self {
        let j = j_matrix(self.n());
        SymplecticMatrix {
            z: -(&j * self.z.transpose() * &j),
        }
    }

    pub fn compose(&self, other: &SymplecticMatrix) -> Self {
        SymplecticMatrix {
            z: &self.z * &other.z,
        }
    }

    pub fn apply(&self, y: &LagrangianFrame) -> Result<LagrangianFrame> {
        check_same_n("symplectic action", self.n(), y.n())?;
        Ok(LagrangianFrame::from_matrix_unchecked(&self.z * y.matrix()))
    }

    /// `Z (0; I)`, the last `n` columns.
    pub fn frame(&self) -> LagrangianFrame {
        let n = self.n();
        LagrangianFrame::from_matrix_unchecked(self.z.columns(n, n).into_owned())
    }

    /// `Z^{-1} (0; I)`.
    pub fn inverse_frame(&self) -> LagrangianFrame {
        self.inverse().frame()
    }

    /// `Z L` with `L = ((I, 0), (Q, I))`; another completion of the same frame.
    pub fn right_lower(&self, q: &Mat) -> Result<Self> {
        Ok(self.compose(&Self::lower_shear(q)?))
    }
}

/// A symplectic `Z` with `Z (0; I) = Y`.
///
/// `Z = (J Y (Y^T Y)^{-1} | Y)`: the first block spans `J L`, which is an
/// orthogonal Lagrangian complement of `L = im Y`, scaled so that the
/// off-diagonal Wronskian block is the identity.
pub fn frame_to_symplectic(y: &LagrangianFrame) -> SymplecticMatrix {
    let n = y.n();
    let gram = y.matrix().transpose() * y.matrix();
    let gram_inv = gram
        .try_inverse()
        .expect("Gram matrix of a rank-n frame is invertible");
    let complement = j_matrix(n) * y.matrix() * gram_inv;
    SymplecticMatrix::from_matrix_unchecked(hstack(&[complement, y.matrix().clone()]))
}

/// `R_alpha = ((cos a I, sin a I), (-sin a I, cos a I))`, symplectic and orthogonal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationMatrix {
    pub n: usize,
    pub alpha: f64,
}

impl RotationMatrix {
    pub fn new(n: usize, alpha: f64) -> Self {
        RotationMatrix { n, alpha }
    }

    pub fn matrix(&self) -> Mat {
        let (s, c) = self.alpha.sin_cos();
        let i = Mat::identity(self.n, self.n);
        crate::linalg::block_matrix(&(&i * c), &(&i * s), &(&i * -s), &(&i * c))
    }

    pub fn symplectic(&self) -> SymplecticMatrix {
        SymplecticMatrix::from_matrix_unchecked(self.matrix())
    }

    /// `R_alpha^{-1} Y = (cos a X - sin a U; sin a X + cos a U)`.
    pub fn inverse_apply(&self, y: &LagrangianFrame) -> Result<LagrangianFrame> {
        check_same_n("rotation", self.n, y.n())?;
        let (s, c) = self.alpha.sin_cos();
        let (x, u) = (y.x(), y.u());
        Ok(LagrangianFrame::from_matrix_unchecked(vstack(
            &(&x * c - &u * s),
            &(&x * s + &u * c),
        )))
    }

    /// Upper block of `R_alpha^{-1} Y`.
    pub fn rotated_x(&self, y: &LagrangianFrame) -> Mat {
        let (s, c) = self.alpha.sin_cos();
        y.x() * c - y.u() * s
    }
}

/// Parameters for the transversal rotation search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleSearch {
    /// A candidate is admissible when `sigma_min(X~_k) > floor * sigma_max(Y_k)` for all k.
    pub floor: f64,
    /// Number of leading candidates compared; the best admissible one wins.
    pub probe: usize,
    pub max_attempts: usize,
    pub seed: u64,
}

impl Default for AngleSearch {
    fn default() -> Self {
        AngleSearch {
            floor: 1e-6,
            probe: 64,
            max_attempts: 4096,
            seed: 0,
        }
    }
}

impl AngleSearch {
    /// Candidate `k`: `alpha = 0` first, then `atan(gamma)` with `gamma` on a
    /// golden-ratio sequence in `(-10, 10)`.
    pub fn candidate(&self, k: usize) -> f64 {
        if k == 0 {
            return 0.0;
        }
        const GOLDEN: f64 = 0.618_033_988_749_894_9;
        const PLASTIC: f64 = 0.754_877_666_246_692_7;
        let offset = (self.seed as f64 * PLASTIC).fract();
        let t = (offset + k as f64 * GOLDEN).fract();
        (20.0 * t - 10.0).atan()
    }
}

fn sigma_extremes(a: &Mat) -> (f64, f64) {
    let sv = a.clone().singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    (min, max)
}

/// Worst transversality ratio `min_k sigma_min(X~_k) / sigma_max(Y_k)`.
pub fn transversality(rotation: &RotationMatrix, frames: &[LagrangianFrame]) -> f64 {
    frames
        .iter()
        .map(|y| {
            let (_, ymax) = sigma_extremes(y.matrix());
            let (xmin, _) = sigma_extremes(&rotation.rotated_x(y));
            xmin / ymax
        })
        .fold(f64::INFINITY, f64::min)
}

/// Finds `alpha` with every rotated upper block `cos a X_k - sin a U_k` nonsingular.
pub fn find_transversal_angle(
    frames: &[LagrangianFrame],
    search: &AngleSearch,
) -> Result<RotationMatrix> {
    let first = frames
        .first()
        .ok_or(Error::ChainTooShort { need: 1, got: 0 })?;
    let n = first.n();
    for y in frames {
        check_same_n("transversal search", n, y.n())?;
    }
    let mut best = (f64::NEG_INFINITY, 0.0);
    for k in 0..search.max_attempts.max(1) {
        let alpha = search.candidate(k);
        let quality = transversality(&RotationMatrix::new(n, alpha), frames);
        if quality > best.0 {
            best = (quality, alpha);
        }
        if k + 1 >= search.probe && best.0 > search.floor {
            return Ok(RotationMatrix::new(n, best.1));
        }
    }
    if best.0 > search.floor {
        return Ok(RotationMatrix::new(n, best.1));
    }
    Err(Error::AngleSearchExhausted {
        attempts: search.max_attempts,
        best: best.0,
    })
}

pub const DEFAULT_GENERATOR_COUNT: usize = 6;

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_symmetric<R: Rng>(n: usize, rng: &mut R) -> Mat {
    let mut s = Mat::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = rng.random_range(-1.0..1.0);
            s[(i, j)] = v;
            s[(j, i)] = v;
        }
    }
    s
}

/// `I + E` with `|E|_2 <= 1/2`, hence nonsingular and well conditioned.
pub fn random_nonsingular(n: usize, seed: u64) -> Mat {
    let mut r = rng(seed);
    random_nonsingular_from(n, &mut r)
}

fn random_nonsingular_from<R: Rng>(n: usize, rng: &mut R) -> Mat {
    let e = Mat::from_fn(n, n, |_, _| rng.random_range(-0.5..0.5) / n as f64);
    Mat::identity(n, n) + e
}

/// Product of `factors` random generators: upper and lower shears with
/// symmetric blocks, `diag(K, K^{-T})`, and `J`. The first three factors are
/// one shear of each kind and a block diagonal, the rest are drawn at random.
pub fn random_symplectic_with(n: usize, seed: u64, factors: usize) -> SymplecticMatrix {
    let mut r = rng(seed);
    let mut z = Mat::identity(2 * n, 2 * n);
    let eye = Mat::identity(n, n);
    let zero = Mat::zeros(n, n);
    for k in 0..factors {
        let kind = if k < 3 { k } else { r.random_range(0..4) };
        let g = match kind {
            0 => crate::linalg::block_matrix(&eye, &random_symmetric(n, &mut r), &zero, &eye),
            1 => crate::linalg::block_matrix(&eye, &zero, &random_symmetric(n, &mut r), &eye),
            2 => {
                let k = random_nonsingular_from(n, &mut r);
                let k_inv_t = k.clone().try_inverse().expect("nonsingular").transpose();
                crate::linalg::block_matrix(&k, &zero, &zero, &k_inv_t)
            }
            _ => j_matrix(n),
        };
        z = g * z;
    }
    SymplecticMatrix::from_matrix_unchecked(z)
}

pub fn random_symplectic(n: usize, seed: u64) -> SymplecticMatrix {
    random_symplectic_with(n, seed, DEFAULT_GENERATOR_COUNT)
}

pub fn random_frame(n: usize, seed: u64) -> LagrangianFrame {
    random_symplectic(n, seed).frame()
}

/// Integer-valued variant: shears with entries in {-1, 0, 1}, signed unit
/// triangular `K`, and `J`. Products stay exact in floating point and
/// frequently have singular upper blocks and nontrivial intersections.
pub fn random_integer_symplectic(n: usize, seed: u64, factors: usize) -> SymplecticMatrix {
    let mut r = rng(seed);
    let mut z = Mat::identity(2 * n, 2 * n);
    let eye = Mat::identity(n, n);
    let zero = Mat::zeros(n, n);
    let int_sym = |r: &mut ChaCha8Rng| {
        let mut s = Mat::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = r.random_range(-1i32..=1) as f64;
                s[(i, j)] = v;
                s[(j, i)] = v;
            }
        }
        s
    };
    for _ in 0..factors {
        let g = match r.random_range(0..4) {
            0 => crate::linalg::block_matrix(&eye, &int_sym(&mut r), &zero, &eye),
            1 => crate::linalg::block_matrix(&eye, &zero, &int_sym(&mut r), &eye),
            2 => {
                let mut k = Mat::identity(n, n);
                for i in 0..n {
                    if r.random_bool(0.5) {
                        k[(i, i)] = -1.0;
                    }
                    for j in 0..i {
                        k[(i, j)] = r.random_range(-1i32..=1) as f64;
                    }
                }
                let k_inv_t = k
                    .clone()
                    .try_inverse()
                    .expect("unit triangular")
                    .map(f64::round)
                    .transpose();
                crate::linalg::block_matrix(&k, &zero, &zero, &k_inv_t)
            }
            _ => j_matrix(n),
        };
        z = g * z;
    }
    SymplecticMatrix::from_matrix_unchecked(z)
}

pub fn random_integer_frame(n: usize, seed: u64) -> LagrangianFrame {
    random_integer_symplectic(n, seed, DEFAULT_GENERATOR_COUNT).frame()
}

/// Convenience for tests and fixtures: a frame from row-major data.
pub fn frame_from_rows(n: usize, data: &[f64], tol: &Tolerance) -> Result<LagrangianFrame> {
    if data.len() != 2 * n * n {
        return Err(Error::Shape(format!(
            "expected {} entries for a {}x{} frame, got {}",
            2 * n * n,
            2 * n,
            n,
            data.len()
        )));
    }
    LagrangianFrame::new(Mat::from_row_slice(2 * n, n, data), tol)
}

/// `n = 1` frame `(x, u)^T`.
pub fn line(x: f64, u: f64) -> LagrangianFrame {
    LagrangianFrame::from_matrix_unchecked(Mat::from_column_slice(2, 1, &[x, u]))
}

pub fn diag(values: &[f64]) -> Mat {
    Mat::from_diagonal(&DVector::from_column_slice(values))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn wronskian_examples() {
        let y = random_frame(2, 3);
        assert!(wronskian(&y, &y).unwrap().amax() < 1e-12);
        let w = wronskian(&line(1.0, 0.0), &line(0.0, 1.0)).unwrap();
        assert_eq!(w[(0, 0)], 1.0);
    }

    #[test]
    fn wronskian_exact_antisymmetry() {
        for seed in 0..20 {
            let (a, b) = (random_frame(3, seed), random_frame(3, seed + 100));
            let w12 = wronskian(&a, &b).unwrap();
            let w21 = wronskian(&b, &a).unwrap();
            assert_eq!(w12, -w21.transpose());
        }
    }

    #[test]
    fn wronskian_symplectic_invariance() {
        let (a, b) = (random_frame(2, 1), random_frame(2, 2));
        let r = random_symplectic(2, 9);
        let w = wronskian(&a, &b).unwrap();
        let wr = wronskian(&r.apply(&a).unwrap(), &r.apply(&b).unwrap()).unwrap();
        assert!((w - wr).amax() < 1e-10);
    }

    #[test]
    fn wronskian_dimension_mismatch() {
        let r = wronskian(&LagrangianFrame::vertical(1), &LagrangianFrame::vertical(2));
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn validate_frame_examples() {
        let v = LagrangianFrame::vertical(2);
        assert!(validate_frame(v.matrix(), &tol()).unwrap().accepted);
        let ii = vstack(&Mat::identity(2, 2), &Mat::identity(2, 2));
        assert!(validate_frame(&ii, &tol()).unwrap().accepted);
        let r = validate_frame(&Mat::zeros(2, 1), &tol()).unwrap();
        assert!(!r.accepted);
        assert_eq!(r.rank, 0);
        assert!(matches!(
            validate_frame(&Mat::zeros(3, 1), &tol()),
            Err(Error::Shape(_))
        ));
        // rank 2 but not Lagrangian: columns e1 and e3 in R^4 have w = 1
        let bad = Mat::from_row_slice(4, 2, &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        let r = validate_frame(&bad, &tol()).unwrap();
        assert_eq!(r.rank, 2);
        assert!(!r.accepted);
        assert!(LagrangianFrame::new(bad, &tol()).is_err());
    }

    #[test]
    fn validate_symplectic_examples() {
        assert!(validate_symplectic(&Mat::identity(4, 4)).unwrap().accepted);
        assert!(validate_symplectic(&j_matrix(2)).unwrap().accepted);
        let two = Mat::identity(2, 2) * 2.0;
        assert!(!validate_symplectic(&two).unwrap().accepted);
        assert!(matches!(
            validate_symplectic(&Mat::identity(3, 3)),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn frame_completion_examples() {
        let z = frame_to_symplectic(&LagrangianFrame::vertical(2));
        assert_eq!(z.matrix(), &Mat::identity(4, 4));
        // (I; 0) = J (0; I), so J itself is a completion
        let z = frame_to_symplectic(&LagrangianFrame::horizontal(2));
        assert_eq!(z.matrix(), &j_matrix(2));
        for seed in 0..10 {
            let y = random_frame(3, seed);
            let z = frame_to_symplectic(&y);
            assert!(validate_symplectic(z.matrix()).unwrap().accepted);
            assert_eq!(z.frame().matrix(), y.matrix());
        }
    }

    #[test]
    fn inverse_is_symplectic_inverse() {
        for seed in 0..10 {
            let z = random_symplectic(3, seed);
            let prod = z.matrix() * z.inverse().matrix();
            assert!((prod - Mat::identity(6, 6)).amax() < 1e-9);
        }
    }

    #[test]
    fn rotation_is_symplectic_and_orthogonal() {
        let r = RotationMatrix::new(2, 0.3).matrix();
        assert!(validate_symplectic(&r).unwrap().accepted);
        assert!((r.transpose() * &r - Mat::identity(4, 4)).amax() < 1e-14);
        assert_eq!(RotationMatrix::new(2, 0.0).matrix(), Mat::identity(4, 4));
    }

    #[test]
    fn transversal_angle_examples() {
        let h = LagrangianFrame::horizontal(1);
        let quarter = RotationMatrix::new(1, std::f64::consts::FRAC_PI_4);
        assert!((quarter.rotated_x(&h)[(0, 0)] - 0.5_f64.sqrt()).abs() < 1e-15);
        let v = LagrangianFrame::vertical(1);
        assert!((quarter.rotated_x(&v)[(0, 0)] + 0.5_f64.sqrt()).abs() < 1e-15);

        let search = AngleSearch::default();
        for frames in [vec![h.clone()], vec![v.clone()], vec![h, v]] {
            let r = find_transversal_angle(&frames, &search).unwrap();
            assert!(transversality(&r, &frames) > search.floor);
            for y in &frames {
                let ry = r.inverse_apply(y).unwrap();
                assert!(validate_frame(ry.matrix(), &tol()).unwrap().accepted);
            }
        }
    }

    #[test]
    fn transversal_angle_keeps_identity_when_possible() {
        let frames = vec![line(1.0, 0.0)];
        let search = AngleSearch {
            probe: 1,
            ..AngleSearch::default()
        };
        let r = find_transversal_angle(&frames, &search).unwrap();
        assert_eq!(r.alpha, 0.0);
    }

    #[test]
    fn transversal_angle_empty_input() {
        assert!(find_transversal_angle(&[], &AngleSearch::default()).is_err());
    }

    #[test]
    fn random_generators_are_valid_and_deterministic() {
        for seed in 0..20 {
            let z = random_symplectic(3, seed);
            assert!(validate_symplectic(z.matrix()).unwrap().accepted);
            assert_eq!(z, random_symplectic(3, seed));
            let zi = random_integer_symplectic(2, seed, 6);
            assert!(validate_symplectic(zi.matrix()).unwrap().accepted);
            assert!(zi.matrix().iter().all(|v| v.fract() == 0.0));
            let y = random_frame(2, seed);
            assert_eq!(y.matrix(), random_symplectic(2, seed).frame().matrix());
            assert!(validate_frame(y.matrix(), &tol()).unwrap().accepted);
        }
        assert_eq!(
            random_symplectic_with(1, 5, 0).matrix(),
            &Mat::identity(2, 2)
        );
    }

    #[test]
    fn random_pairs_are_generically_transversal() {
        let n = 2;
        let transversal = (0..100)
            .filter(|&s| {
                let w = wronskian(&random_frame(n, s), &random_frame(n, s + 1000)).unwrap();
                crate::linalg::rank_of(&w, &tol()).unwrap() == n
            })
            .count();
        assert_eq!(transversal, 100);
    }
}
