//! Cyclic sums of comparative indices over chains of frames.

use serde::{Deserialize, Serialize};

use crate::comparative::{comparative_index, wronskian_rank};
use crate::error::{Error, Result};
use crate::lagrangian::{
    check_same_n, find_transversal_angle, frame_to_symplectic, wronskian, AngleSearch,
    LagrangianFrame, SymplecticMatrix,
};
use crate::linalg::{
    block_matrix, hstack, inertia_scaled, kernel_basis, kernel_projector, projected_inertia,
    pseudoinverse_scaled, rank_scaled, symmetrize, InertiaTriple, Mat, Tolerance,
};
use crate::report::CheckReport;

/// Ordered frames `Y_1, ..., Y_m` with `m >= 2` and a common `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameChain {
    frames: Vec<LagrangianFrame>,
}

impl FrameChain {
    pub fn new(frames: Vec<LagrangianFrame>) -> Result<Self> {
        if frames.len() < 2 {
            return Err(Error::ChainTooShort {
                need: 2,
                got: frames.len(),
            });
        }
        let n = frames[0].n();
        for y in &frames {
            check_same_n("frame chain", n, y.n())?;
        }
        Ok(FrameChain { frames })
    }

    pub fn m(&self) -> usize {
        self.frames.len()
    }

    pub fn n(&self) -> usize {
        self.frames[0].n()
    }

    pub fn frames(&self) -> &[LagrangianFrame] {
        &self.frames
    }

    /// 0-based access.
    pub fn frame(&self, i: usize) -> &LagrangianFrame {
        &self.frames[i]
    }

    /// Subchain through the given 0-based positions, in that order.
    pub fn select(&self, idx: &[usize]) -> Result<FrameChain> {
        let max = self.m() - 1;
        let frames = idx
            .iter()
            .map(|&i| {
                self.frames
                    .get(i)
                    .cloned()
                    .ok_or(Error::OutOfRange { index: i, max })
            })
            .collect::<Result<Vec<_>>>()?;
        FrameChain::new(frames)
    }

    pub fn reversed(&self) -> FrameChain {
        let mut frames = self.frames.clone();
        frames.reverse();
        FrameChain { frames }
    }

    /// `(Y_{k+1}, ..., Y_m, Y_1, ..., Y_k)`.
    pub fn rotated(&self, k: usize) -> FrameChain {
        let mut frames = self.frames.clone();
        frames.rotate_left(k % self.m());
        FrameChain { frames }
    }

    /// `(Z Y_1, ..., Z Y_m)`.
    pub fn transformed(&self, z: &SymplecticMatrix) -> Result<FrameChain> {
        let frames = self
            .frames
            .iter()
            .map(|y| z.apply(y))
            .collect::<Result<Vec<_>>>()?;
        FrameChain::new(frames)
    }

    /// `(Y_1 C_1, ..., Y_m C_m)`.
    pub fn right_scaled(&self, c: &[Mat]) -> Result<FrameChain> {
        if c.len() != self.m() {
            return Err(Error::DimensionMismatch {
                context: "right scaling list",
                expected: format!("{} matrices", self.m()),
                found: format!("{}", c.len()),
            });
        }
        let frames = self
            .frames
            .iter()
            .zip(c)
            .map(|(y, c)| y.right_scaled(c))
            .collect::<Result<Vec<_>>>()?;
        FrameChain::new(frames)
    }

    /// Largest frame norm; reference magnitude for Wronskian blocks.
    pub(crate) fn scale(&self) -> f64 {
        self.frames.iter().map(|y| y.scale()).fold(0.0, f64::max)
    }

    /// `rank w(Y_i, Y_j)` for 0-based `i, j`.
    pub fn rank_w(&self, i: usize, j: usize, tol: &Tolerance) -> Result<usize> {
        wronskian_rank(&self.frames[i], &self.frames[j], tol)
    }

    /// `sum_{j<m} rank w(Y_j, Y_{j+1}) + rank w(Y_m, Y_1)`.
    pub fn cyclic_rank_sum(&self, tol: &Tolerance) -> Result<usize> {
        let m = self.m();
        (0..m).try_fold(0, |acc, j| Ok(acc + self.rank_w(j, (j + 1) % m, tol)?))
    }

    /// `dim(L_1 + ... + L_m) = rank(Y_1 | ... | Y_m)`.
    pub fn sum_dimension(&self, tol: &Tolerance) -> usize {
        let joint = hstack(
            &self
                .frames
                .iter()
                .map(|y| y.matrix().clone())
                .collect::<Vec<_>>(),
        );
        rank_scaled(&joint, self.scale(), tol)
    }

    /// `dim(L_1 ∩ ... ∩ L_m) = 2n - dim(L_1 + ... + L_m)`.
    pub fn intersection_dimension(&self, tol: &Tolerance) -> usize {
        2 * self.n() - self.sum_dimension(tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct CyclicSumBundle {
    pub mu_minus: i64,
    pub mu_plus: i64,
    pub nu_minus: i64,
    pub nu_plus: i64,
}

impl CyclicSumBundle {
    /// Sums under reversal of the chain.
    pub fn swapped(&self) -> Self {
        CyclicSumBundle {
            mu_minus: self.mu_plus,
            mu_plus: self.mu_minus,
            nu_minus: self.nu_plus,
            nu_plus: self.nu_minus,
        }
    }
}

/// `(mu, mu*)` of the pair `(Y_i, Y_j)`, 0-based.
fn pair(chain: &FrameChain, i: usize, j: usize, tol: &Tolerance) -> Result<(i64, i64)> {
    let b = comparative_index(chain.frame(i), chain.frame(j), tol)?;
    Ok((b.mu as i64, b.mu_star as i64))
}

/// All four cyclic sums through their defining sums of comparative indices.
pub fn cyclic_sums(chain: &FrameChain, tol: &Tolerance) -> Result<CyclicSumBundle> {
    let m = chain.m();
    let (mut minus, mut plus) = (0, 0);
    for j in 0..m - 1 {
        let (a, b) = pair(chain, j, j + 1, tol)?;
        minus += a;
        plus += b;
    }
    let (close_minus, close_plus) = pair(chain, m - 1, 0, tol)?;
    let (back_minus, back_plus) = pair(chain, 0, m - 1, tol)?;
    Ok(CyclicSumBundle {
        mu_minus: minus + close_minus,
        mu_plus: plus + close_plus,
        nu_minus: minus - back_minus,
        nu_plus: plus - back_plus,
    })
}

/// `(mu_c^-, mu_c^+)`.
pub fn cyclic_sum_first(chain: &FrameChain, tol: &Tolerance) -> Result<(i64, i64)> {
    let b = cyclic_sums(chain, tol)?;
    Ok((b.mu_minus, b.mu_plus))
}

/// `(nu_c^-, nu_c^+)`.
pub fn cyclic_sum_second(chain: &FrameChain, tol: &Tolerance) -> Result<(i64, i64)> {
    let b = cyclic_sums(chain, tol)?;
    Ok((b.nu_minus, b.nu_plus))
}

/// The symmetric `mn x mn` matrix of Wronskians `w_{i,j} = w(Y_i, Y_j)` with
/// zero diagonal blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct WronskianBlockMatrix {
    n: usize,
    m: usize,
    s: Mat,
    scale: f64,
}

impl WronskianBlockMatrix {
    pub fn new(chain: &FrameChain) -> Result<Self> {
        let (n, m) = (chain.n(), chain.m());
        let mut s = Mat::zeros(m * n, m * n);
        for i in 0..m {
            for j in i + 1..m {
                let w = wronskian(chain.frame(i), chain.frame(j))?;
                s.view_mut((i * n, j * n), (n, n)).copy_from(&w);
                s.view_mut((j * n, i * n), (n, n)).copy_from(&w.transpose());
            }
        }
        let scale = chain.scale().powi(2);
        Ok(WronskianBlockMatrix { n, m, s, scale })
    }

    pub fn matrix(&self) -> &Mat {
        &self.s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Reference magnitude of the blocks.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `w_{i,j}`, 1-based as in the block notation.
    pub fn w(&self, i: usize, j: usize) -> Mat {
        let n = self.n;
        self.s.view(((i - 1) * n, (j - 1) * n), (n, n)).into_owned()
    }

    /// Principal submatrix `S_{a, ..., b}` on blocks `a..=b` (1-based).
    /// An empty range or a single block gives the zero matrix of that size.
    pub fn principal(&self, a: usize, b: usize) -> Mat {
        let n = self.n;
        if b < a {
            return Mat::zeros(0, 0);
        }
        let k = (b - a + 1) * n;
        self.s.view(((a - 1) * n, (a - 1) * n), (k, k)).into_owned()
    }

    fn row(&self, i: usize, from: usize, to: usize) -> Mat {
        let blocks: Vec<Mat> = (from..=to).map(|j| self.w(i, j)).collect();
        if blocks.is_empty() {
            Mat::zeros(self.n, 0)
        } else {
            hstack(&blocks)
        }
    }

    /// `W = (w_{m,1} ... w_{m,m-1})`.
    pub fn big_w(&self) -> Mat {
        self.row(self.m, 1, self.m - 1)
    }

    /// `N = (w_{m,2} ... w_{m,m-1})`.
    pub fn big_n(&self) -> Mat {
        self.row(self.m, 2, self.m - 1)
    }

    /// `K = (w_{1,2} ... w_{1,m-1})`.
    pub fn big_k(&self) -> Mat {
        self.row(1, 2, self.m - 1)
    }

    fn w_m1_pinv(&self, tol: &Tolerance) -> Mat {
        pseudoinverse_scaled(&self.w(self.m, 1), self.scale, tol)
    }

    /// `M~ = (I - w_{m,1} w_{m,1}^+) N`.
    pub fn m_tilde(&self, tol: &Tolerance) -> Mat {
        kernel_projector(&self.w(self.m, 1).transpose(), self.scale, tol) * self.big_n()
    }

    /// `M = (I - w_{m,1}^+ w_{m,1}) K`.
    pub fn m_alt(&self, tol: &Tolerance) -> Mat {
        kernel_projector(&self.w(self.m, 1), self.scale, tol) * self.big_k()
    }

    /// `D = K^T w_{m,1}^+ N`.
    pub fn d(&self, tol: &Tolerance) -> Mat {
        self.big_k().transpose() * self.w_m1_pinv(tol) * self.big_n()
    }

    fn reduced_scale(&self, tol: &Tolerance) -> f64 {
        self.scale * (self.scale * self.w_m1_pinv(tol).norm()).max(1.0)
    }

    /// `S_{2..m-1} - D - D^T`.
    pub fn reduced_tail(&self, tol: &Tolerance) -> Mat {
        let d = self.d(tol);
        symmetrize(&(self.principal(2, self.m - 1) - &d - d.transpose()))
    }

    /// `S_bar = [[0, M~], [M~^T, S_{2..m-1} - D - D^T]]`; `use_alt` puts `M` in place of `M~`.
    pub fn s_bar(&self, use_alt: bool, tol: &Tolerance) -> Result<Mat> {
        if self.m < 3 {
            return Err(Error::UnsupportedRoute(
                "the reduced block matrix needs m >= 3".into(),
            ));
        }
        let off = if use_alt {
            self.m_alt(tol)
        } else {
            self.m_tilde(tol)
        };
        Ok(block_matrix(
            &Mat::zeros(self.n, self.n),
            &off,
            &off.transpose(),
            &self.reduced_tail(tol),
        ))
    }

    pub fn inertia(&self, tol: &Tolerance) -> InertiaTriple {
        inertia_scaled(&self.s, self.scale, tol)
    }

    /// Inertia of `F_W S_{1..m-1} F_W` and `rank W`.
    pub fn projected_head(&self, tol: &Tolerance) -> (InertiaTriple, usize) {
        let big_w = self.big_w();
        let kernel = kernel_basis(&big_w, self.scale, tol);
        let rank = big_w.ncols() - kernel.ncols();
        let s = self.principal(1, self.m - 1);
        (projected_inertia(&s, &kernel, self.scale, tol), rank)
    }

    /// Inertia of `F_M~ (S_{2..m-1} - D - D^T) F_M~` and `rank M~`.
    pub fn projected_tail(&self, tol: &Tolerance) -> Result<(InertiaTriple, usize)> {
        if self.m < 3 {
            return Err(Error::UnsupportedRoute(
                "the reduced block matrix needs m >= 3".into(),
            ));
        }
        let mt = self.m_tilde(tol);
        let kernel = kernel_basis(&mt, self.scale, tol);
        let rank = mt.ncols() - kernel.ncols();
        let tail = self.reduced_tail(tol);
        Ok((
            projected_inertia(&tail, &kernel, self.reduced_scale(tol), tol),
            rank,
        ))
    }

    pub fn s_bar_inertia(&self, use_alt: bool, tol: &Tolerance) -> Result<InertiaTriple> {
        let sb = self.s_bar(use_alt, tol)?;
        Ok(inertia_scaled(&sb, self.reduced_scale(tol), tol))
    }

    pub fn rank_w_m1(&self, tol: &Tolerance) -> usize {
        rank_scaled(&self.w(self.m, 1), self.scale, tol)
    }

    pub fn rank_m_tilde(&self, tol: &Tolerance) -> usize {
        rank_scaled(&self.m_tilde(tol), self.scale, tol)
    }
}

pub fn wronskian_block_matrix(chain: &FrameChain) -> Result<WronskianBlockMatrix> {
    WronskianBlockMatrix::new(chain)
}

/// `(mu_c^-, mu_c^+) = (i_+(S), i_-(S))`.
pub fn cyclic_sum_via_inertia(chain: &FrameChain, tol: &Tolerance) -> Result<(i64, i64)> {
    let i = WronskianBlockMatrix::new(chain)?.inertia(tol);
    Ok((i.plus as i64, i.minus as i64))
}

/// The second-kind sums through every reduced block formula that applies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NuRoutes {
    /// `rank M~ + ind(-+ F_W S_{1..m-1} F_W)`.
    pub projected: (i64, i64),
    /// `ind(-+ S_bar)`; `None` for `m = 2`.
    pub s_bar: Option<(i64, i64)>,
    /// `S_bar` with `M` in place of `M~`.
    pub s_bar_alt: Option<(i64, i64)>,
    /// `rank M~ + ind(-+ F_M~ (S_{2..m-1} - D - D^T) F_M~)`.
    pub split: Option<(i64, i64)>,
}

impl NuRoutes {
    pub fn values(&self) -> Vec<(i64, i64)> {
        std::iter::once(self.projected)
            .chain(self.s_bar)
            .chain(self.s_bar_alt)
            .chain(self.split)
            .collect()
    }

    pub fn agree(&self) -> bool {
        self.values().iter().all(|v| *v == self.projected)
    }
}

pub fn nu_via_inertia(chain: &FrameChain, tol: &Tolerance) -> Result<NuRoutes> {
    let s = WronskianBlockMatrix::new(chain)?;
    let (head, rank_w) = s.projected_head(tol);
    let rank_mt = rank_w as i64 - s.rank_w_m1(tol) as i64;
    let projected = (rank_mt + head.plus as i64, rank_mt + head.minus as i64);
    if chain.m() < 3 {
        return Ok(NuRoutes {
            projected,
            s_bar: None,
            s_bar_alt: None,
            split: None,
        });
    }
    let sb = s.s_bar_inertia(false, tol)?;
    let sb_alt = s.s_bar_inertia(true, tol)?;
    let (tail, rank_tail) = s.projected_tail(tol)?;
    Ok(NuRoutes {
        projected,
        s_bar: Some((sb.plus as i64, sb.minus as i64)),
        s_bar_alt: Some((sb_alt.plus as i64, sb_alt.minus as i64)),
        split: Some((
            (rank_tail + tail.plus) as i64,
            (rank_tail + tail.minus) as i64,
        )),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutedRoutes {
    /// `rank W + ind(-+ F_W S_{1..m-1} F_W)`.
    pub projected: (i64, i64),
    /// `rank w_{m,1} + ind(-+ S_bar)`; `None` for `m = 2`.
    pub s_bar: Option<(i64, i64)>,
    pub rank_w: usize,
    pub rank_w_m1: usize,
    pub rank_m_tilde: usize,
}

pub fn permuted_block_inertia(chain: &FrameChain, tol: &Tolerance) -> Result<PermutedRoutes> {
    let s = WronskianBlockMatrix::new(chain)?;
    let (head, rank_w) = s.projected_head(tol);
    let rank_w_m1 = s.rank_w_m1(tol);
    let projected = ((rank_w + head.plus) as i64, (rank_w + head.minus) as i64);
    let (s_bar, rank_m_tilde) = if chain.m() >= 3 {
        let sb = s.s_bar_inertia(false, tol)?;
        (
            Some(((rank_w_m1 + sb.plus) as i64, (rank_w_m1 + sb.minus) as i64)),
            s.rank_m_tilde(tol),
        )
    } else {
        (None, 0)
    };
    Ok(PermutedRoutes {
        projected,
        s_bar,
        rank_w,
        rank_w_m1,
        rank_m_tilde,
    })
}

/// Sums in a chart where every rotated upper block is nonsingular:
/// `Q~_k = U~_k X~_k^{-1}` and indices of the differences `Q~_k - Q~_{k+1}`.
pub fn transversal_chart_sums(
    chain: &FrameChain,
    search: &AngleSearch,
    tol: &Tolerance,
) -> Result<CyclicSumBundle> {
    let rotation = find_transversal_angle(chain.frames(), search)?;
    let q: Vec<Mat> = chain
        .frames()
        .iter()
        .map(|y| {
            let r = rotation.inverse_apply(y)?;
            let x_inv = r
                .x()
                .try_inverse()
                .ok_or_else(|| Error::Shape("rotated upper block is singular".into()))?;
            Ok(symmetrize(&(r.u() * x_inv)))
        })
        .collect::<Result<_>>()?;
    let diff = |a: usize, b: usize| {
        let d = symmetrize(&(&q[a] - &q[b]));
        inertia_scaled(&d, q[a].norm().max(q[b].norm()), tol)
    };
    let m = chain.m();
    let (mut minus, mut plus) = (0i64, 0i64);
    for k in 0..m - 1 {
        let i = diff(k, k + 1);
        minus += i.plus as i64;
        plus += i.minus as i64;
    }
    let close = diff(m - 1, 0);
    let back = diff(0, m - 1);
    Ok(CyclicSumBundle {
        mu_minus: minus + close.plus as i64,
        mu_plus: plus + close.minus as i64,
        nu_minus: minus - back.plus as i64,
        nu_plus: plus - back.minus as i64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicBounds {
    pub r_lower: i64,
    pub p_upper: i64,
    pub nu_lower: i64,
    pub nu_upper: i64,
}

/// `r = max_{l<k} rank w(Y_l, Y_k)` and
/// `P = sum_j min(rank w(Y_j, Y_{j+1}), rank w(R(0; I), Y_{j+1}))` closed cyclically;
/// the second-kind bounds are shifted by `rank w(Y_1, Y_m)`.
pub fn cyclic_sum_bounds(
    chain: &FrameChain,
    r: &SymplecticMatrix,
    tol: &Tolerance,
) -> Result<CyclicBounds> {
    check_same_n("bounds", chain.n(), r.n())?;
    let m = chain.m();
    let mut r_lower = 0;
    for l in 0..m {
        for k in l + 1..m {
            r_lower = r_lower.max(chain.rank_w(l, k, tol)?);
        }
    }
    let anchor = r.frame();
    let mut p_upper = 0;
    for j in 0..m {
        let next = (j + 1) % m;
        let a = chain.rank_w(j, next, tol)?;
        let b = wronskian_rank(&anchor, chain.frame(next), tol)?;
        p_upper += a.min(b);
    }
    let shift = chain.rank_w(0, m - 1, tol)? as i64;
    Ok(CyclicBounds {
        r_lower: r_lower as i64,
        p_upper: p_upper as i64,
        nu_lower: r_lower as i64 - shift,
        nu_upper: p_upper as i64 - shift,
    })
}

/// Evaluates the structural identities of cyclic sums on one chain.
///
/// `r` is any symplectic matrix and `c` holds one nonsingular `n x n` factor per frame.
pub fn chain_property_report(
    chain: &FrameChain,
    r: &SymplecticMatrix,
    c: &[Mat],
    tol: &Tolerance,
) -> Result<CheckReport> {
    check_same_n("chain properties", chain.n(), r.n())?;
    let m = chain.m();
    let base = cyclic_sums(chain, tol)?;
    let rw = |i: usize, j: usize| -> Result<i64> { Ok(chain.rank_w(i, j, tol)? as i64) };
    let sums = |idx: &[usize]| cyclic_sums(&chain.select(idx)?, tol);
    let mut rep = CheckReport::new();
    let both = |rep: &mut CheckReport, name: &str, lhs: CyclicSumBundle, rhs: CyclicSumBundle| {
        rep.check_eq(format!("{name} mu-"), lhs.mu_minus, rhs.mu_minus);
        rep.check_eq(format!("{name} mu+"), lhs.mu_plus, rhs.mu_plus);
        rep.check_eq(format!("{name} nu-"), lhs.nu_minus, rhs.nu_minus);
        rep.check_eq(format!("{name} nu+"), lhs.nu_plus, rhs.nu_plus);
    };

    let close = rw(m - 1, 0)?;
    rep.check_eq(
        "mu- = nu- + rank w(Ym,Y1)",
        base.mu_minus,
        base.nu_minus + close,
    );
    rep.check_eq(
        "mu+ = nu+ + rank w(Ym,Y1)",
        base.mu_plus,
        base.nu_plus + close,
    );
    rep.check_le("nu- >= 0", 0, base.nu_minus);
    rep.check_le("nu+ >= 0", 0, base.nu_plus);

    both(
        &mut rep,
        "right scaling",
        cyclic_sums(&chain.right_scaled(c)?, tol)?,
        base,
    );
    let r_inv = r.inverse();
    both(
        &mut rep,
        "symplectic invariance",
        cyclic_sums(&chain.transformed(&r_inv)?, tol)?,
        base,
    );

    for k in 1..m {
        let rot = cyclic_sums(&chain.rotated(k), tol)?;
        rep.check_eq(format!("cyclic shift {k} mu-"), rot.mu_minus, base.mu_minus);
        rep.check_eq(format!("cyclic shift {k} mu+"), rot.mu_plus, base.mu_plus);
    }
    let shifted = cyclic_sums(&chain.rotated(1), tol)?;
    let shift_corr = rw(0, 1)? - close;
    rep.check_eq("nu- shift", base.nu_minus, shifted.nu_minus + shift_corr);
    rep.check_eq("nu+ shift", base.nu_plus, shifted.nu_plus + shift_corr);

    both(
        &mut rep,
        "reversal",
        cyclic_sums(&chain.reversed(), tol)?.swapped(),
        base,
    );

    let ranks: i64 = (0..m - 1).map(|j| rw(j, j + 1)).sum::<Result<i64>>()?;
    rep.check_eq(
        "mu- + mu+ = rank sum",
        base.mu_minus + base.mu_plus,
        ranks + close,
    );
    let back = rw(0, m - 1)?;
    rep.check_eq(
        "nu- + nu+ = rank sum",
        base.nu_minus + base.nu_plus,
        ranks - back,
    );

    // Chart centred at the last frame
    let z_inv = frame_to_symplectic(chain.frame(m - 1)).inverse();
    let moved: Vec<LagrangianFrame> = chain
        .frames()
        .iter()
        .map(|y| z_inv.apply(y))
        .collect::<Result<_>>()?;
    let (mut zm_minus, mut zm_plus) = (0i64, 0i64);
    for j in 0..m.saturating_sub(2) {
        let b = comparative_index(&moved[j], &moved[j + 1], tol)?;
        zm_minus += b.mu as i64;
        zm_plus += b.mu_star as i64;
    }
    rep.check_eq("last-frame chart mu-", base.mu_minus, zm_minus + close);
    rep.check_eq("last-frame chart mu+", base.mu_plus, zm_plus + close);
    rep.check_eq("last-frame chart nu-", base.nu_minus, zm_minus);
    rep.check_eq("last-frame chart nu+", base.nu_plus, zm_plus);

    let all: Vec<usize> = (0..m).collect();
    for l in 1..m - 1 {
        let head = sums(&all[..=l])?;
        let tail_from_first = sums(&[&[0][..], &all[l..]].concat())?;
        let head_with_last = sums(&[&all[..=l], &[m - 1][..]].concat())?;
        let tail = sums(&all[l..])?;
        let r1l = rw(0, l)?;
        let rlm = rw(l, m - 1)?;
        let k = l + 1;
        rep.check_eq(
            format!("split {k} nu- first"),
            base.nu_minus,
            head.nu_minus + tail_from_first.nu_minus,
        );
        rep.check_eq(
            format!("split {k} nu+ first"),
            base.nu_plus,
            head.nu_plus + tail_from_first.nu_plus,
        );
        rep.check_eq(
            format!("split {k} nu- last"),
            base.nu_minus,
            head_with_last.nu_minus + tail.nu_minus,
        );
        rep.check_eq(
            format!("split {k} nu+ last"),
            base.nu_plus,
            head_with_last.nu_plus + tail.nu_plus,
        );
        rep.check_eq(
            format!("split {k} mu- first"),
            base.mu_minus,
            head.mu_minus + tail_from_first.mu_minus - r1l,
        );
        rep.check_eq(
            format!("split {k} mu+ first"),
            base.mu_plus,
            head.mu_plus + tail_from_first.mu_plus - r1l,
        );
        rep.check_eq(
            format!("split {k} mu- last"),
            base.mu_minus,
            head_with_last.mu_minus + tail.mu_minus - rlm,
        );
        rep.check_eq(
            format!("split {k} mu+ last"),
            base.mu_plus,
            head_with_last.mu_plus + tail.mu_plus - rlm,
        );
    }

    if m >= 3 {
        let mut fan_first = CyclicSumBundle::default();
        let mut fan_last = CyclicSumBundle::default();
        for j in 1..m - 1 {
            let t = sums(&[0, j, j + 1])?;
            add(&mut fan_first, &t);
        }
        for j in 0..m - 2 {
            let t = sums(&[j, j + 1, m - 1])?;
            add(&mut fan_last, &t);
        }
        let first_corr: i64 = (2..m - 1).map(|j| rw(0, j)).sum::<Result<i64>>()?;
        let last_corr: i64 = (1..m - 2).map(|j| rw(j, m - 1)).sum::<Result<i64>>()?;
        rep.check_eq("triples at first nu-", base.nu_minus, fan_first.nu_minus);
        rep.check_eq("triples at first nu+", base.nu_plus, fan_first.nu_plus);
        rep.check_eq("triples at last nu-", base.nu_minus, fan_last.nu_minus);
        rep.check_eq("triples at last nu+", base.nu_plus, fan_last.nu_plus);
        rep.check_eq(
            "triples at first mu-",
            base.mu_minus,
            fan_first.mu_minus - first_corr,
        );
        rep.check_eq(
            "triples at first mu+",
            base.mu_plus,
            fan_first.mu_plus - first_corr,
        );
        rep.check_eq(
            "triples at last mu-",
            base.mu_minus,
            fan_last.mu_minus - last_corr,
        );
        rep.check_eq(
            "triples at last mu+",
            base.mu_plus,
            fan_last.mu_plus - last_corr,
        );
    }

    if m == 3 {
        let pair_ranks = rw(0, 1)? + rw(0, 2)? + rw(1, 2)?;
        let swapped = sums(&[1, 0, 2])?;
        rep.check_eq(
            "transposition mu-",
            base.mu_minus,
            pair_ranks - swapped.mu_minus,
        );
        rep.check_eq(
            "transposition mu+",
            base.mu_plus,
            pair_ranks - swapped.mu_plus,
        );
        for other in [[2, 1, 0], [0, 2, 1]] {
            let o = sums(&other)?;
            rep.check_eq("odd permutations agree mu-", o.mu_minus, swapped.mu_minus);
            rep.check_eq("odd permutations agree mu+", o.mu_plus, swapped.mu_plus);
        }
        let (r12, r23, r13) = (rw(0, 1)?, rw(1, 2)?, rw(0, 2)?);
        let s132 = sums(&[0, 2, 1])?;
        let s321 = sums(&[2, 1, 0])?;
        for (sign, lhs, a, b, c) in [
            (
                "-",
                base.nu_minus,
                swapped.nu_minus,
                s132.nu_minus,
                s321.nu_minus,
            ),
            (
                "+",
                base.nu_plus,
                swapped.nu_plus,
                s132.nu_plus,
                s321.nu_plus,
            ),
        ] {
            rep.check_eq(format!("transposition 12 nu{sign}"), lhs, r12 - a);
            rep.check_eq(format!("transposition 23 nu{sign}"), lhs, r23 - b);
            rep.check_eq(format!("reversal nu{sign}"), lhs, r12 + r23 - r13 - c);
        }
    }

    if m == 4 {
        let s123 = sums(&[0, 1, 2])?;
        let s134 = sums(&[0, 2, 3])?;
        let s124 = sums(&[0, 1, 3])?;
        let s234 = sums(&[1, 2, 3])?;
        rep.check_eq(
            "cocycle nu- a",
            base.nu_minus,
            s123.nu_minus + s134.nu_minus,
        );
        rep.check_eq("cocycle nu+ a", base.nu_plus, s123.nu_plus + s134.nu_plus);
        rep.check_eq(
            "cocycle nu- b",
            base.nu_minus,
            s124.nu_minus + s234.nu_minus,
        );
        rep.check_eq("cocycle nu+ b", base.nu_plus, s124.nu_plus + s234.nu_plus);
    }
    Ok(rep)
}

fn add(acc: &mut CyclicSumBundle, t: &CyclicSumBundle) {
    acc.mu_minus += t.mu_minus;
    acc.mu_plus += t.mu_plus;
    acc.nu_minus += t.nu_minus;
    acc.nu_plus += t.nu_plus;
}

/// Agreement of the definition route with every inertia route, plus the rank
/// identities tying the reduced forms together.
pub fn route_agreement_report(
    chain: &FrameChain,
    search: &AngleSearch,
    tol: &Tolerance,
) -> Result<CheckReport> {
    let base = cyclic_sums(chain, tol)?;
    let mut rep = CheckReport::new();
    let (a, b) = cyclic_sum_via_inertia(chain, tol)?;
    rep.check_eq("inertia mu-", a, base.mu_minus);
    rep.check_eq("inertia mu+", b, base.mu_plus);

    let p = permuted_block_inertia(chain, tol)?;
    rep.check_eq("projected mu-", p.projected.0, base.mu_minus);
    rep.check_eq("projected mu+", p.projected.1, base.mu_plus);
    if let Some((a, b)) = p.s_bar {
        rep.check_eq("reduced mu-", a, base.mu_minus);
        rep.check_eq("reduced mu+", b, base.mu_plus);
        rep.check_eq(
            "rank W = rank w_m1 + rank M~",
            p.rank_w as i64,
            (p.rank_w_m1 + p.rank_m_tilde) as i64,
        );
    }

    let nu = nu_via_inertia(chain, tol)?;
    for (k, (a, b)) in nu.values().into_iter().enumerate() {
        rep.check_eq(format!("nu route {k} nu-"), a, base.nu_minus);
        rep.check_eq(format!("nu route {k} nu+"), b, base.nu_plus);
    }

    let t = transversal_chart_sums(chain, search, tol)?;
    rep.check_eq("chart mu-", t.mu_minus, base.mu_minus);
    rep.check_eq("chart mu+", t.mu_plus, base.mu_plus);
    rep.check_eq("chart nu-", t.nu_minus, base.nu_minus);
    rep.check_eq("chart nu+", t.nu_plus, base.nu_plus);

    // rank(F_W S F_W) against intersection dimensions
    let s = WronskianBlockMatrix::new(chain)?;
    let (head, rank_w) = s.projected_head(tol);
    let (n, m) = (chain.n() as i64, chain.m() as i64);
    let pair_dims: i64 = (0..chain.m())
        .map(|j| Ok(n - chain.rank_w(j, (j + 1) % chain.m(), tol)? as i64))
        .sum::<Result<i64>>()?;
    let cap = chain.intersection_dimension(tol) as i64;
    rep.check_eq(
        "rank F_W S F_W from intersections",
        head.rank() as i64,
        2 * cap + (m - 2) * n - pair_dims,
    );
    rep.check_eq(
        "dim of sum = n + rank W",
        chain.sum_dimension(tol) as i64,
        n + rank_w as i64,
    );
    Ok(rep)
}
