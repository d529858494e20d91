//! Discrete symplectic systems `y_{k+1} = S_k y_k`, `k = 0, ..., N`, and
//! their focal points.

use serde::{Deserialize, Serialize};

use crate::comparative::comparative_index;
use crate::cyclic::{cyclic_sums, FrameChain, WronskianBlockMatrix};
use crate::error::{Error, Result};
use crate::lagrangian::{
    check_same_n, frame_to_symplectic, random_integer_symplectic, random_symplectic_with,
    LagrangianFrame, SymplecticMatrix,
};
use crate::linalg::{
    block_matrix, hstack, inertia_scaled, kernel_basis, kernel_projector, projected_inertia,
    pseudoinverse_scaled, rank_scaled, symmetrize, InertiaTriple, Mat, Tolerance,
};
use crate::report::CheckReport;

#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticSystem {
    coefficients: Vec<SymplecticMatrix>,
}

impl SymplecticSystem {
    /// Coefficients `S_0, ..., S_N`; at least one is required.
    pub fn new(coefficients: Vec<SymplecticMatrix>) -> Result<Self> {
        let first = coefficients
            .first()
            .ok_or(Error::ChainTooShort { need: 1, got: 0 })?;
        let n = first.n();
        for s in &coefficients {
            check_same_n("symplectic system", n, s.n())?;
        }
        Ok(SymplecticSystem { coefficients })
    }

    pub fn from_matrices(matrices: Vec<Mat>) -> Result<Self> {
        Self::new(
            matrices
                .into_iter()
                .map(SymplecticMatrix::new)
                .collect::<Result<_>>()?,
        )
    }

    pub fn constant(s: SymplecticMatrix, big_n: usize) -> Self {
        SymplecticSystem {
            coefficients: vec![s; big_n + 1],
        }
    }

    pub fn identity(n: usize, big_n: usize) -> Self {
        Self::constant(SymplecticMatrix::identity(n), big_n)
    }

    /// Random coefficients; `integer` selects the {-1, 0, 1} generator.
    pub fn random(n: usize, big_n: usize, seed: u64, factors: usize, integer: bool) -> Self {
        let coefficients = (0..=big_n)
            .map(|k| {
                let s = seed
                    .wrapping_mul(0x9E37_79B9_7F4A_7C15)
                    .wrapping_add(k as u64);
                if integer {
                    random_integer_symplectic(n, s, factors)
                } else {
                    random_symplectic_with(n, s, factors)
                }
            })
            .collect();
        SymplecticSystem { coefficients }
    }

    pub fn n(&self) -> usize {
        self.coefficients[0].n()
    }

    /// The last step index `N`.
    pub fn big_n(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficient(&self, k: usize) -> &SymplecticMatrix {
        &self.coefficients[k]
    }

    pub fn coefficients(&self) -> &[SymplecticMatrix] {
        &self.coefficients
    }
}

/// A conjoined basis `Y_0, ..., Y_{N+1}` together with symplectic fundamental
/// matrices `Z_k` satisfying `Y_k = Z_k (0; I)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjoinedTrajectory {
    pub fundamentals: Vec<SymplecticMatrix>,
    pub frames: Vec<LagrangianFrame>,
}

impl ConjoinedTrajectory {
    fn from_fundamentals(fundamentals: Vec<SymplecticMatrix>) -> Self {
        let frames = fundamentals.iter().map(SymplecticMatrix::frame).collect();
        ConjoinedTrajectory {
            fundamentals,
            frames,
        }
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn x(&self, k: usize) -> Mat {
        self.frames[k].x()
    }

    /// `Z_k^{-1} (0; I)` for `k = 0, ..., N+1`.
    pub fn inverse_chain(&self) -> Result<FrameChain> {
        FrameChain::new(
            self.fundamentals
                .iter()
                .map(|z| z.inverse_frame())
                .collect(),
        )
    }

    /// Replaces every `Z_k` by `Z_k L`; the frames are unchanged when `L` is
    /// lower block-triangular.
    pub fn right_multiplied(&self, l: &SymplecticMatrix) -> Self {
        Self::from_fundamentals(self.fundamentals.iter().map(|z| z.compose(l)).collect())
    }
}

fn check_trajectory(system: &SymplecticSystem, traj: &ConjoinedTrajectory) -> Result<()> {
    if traj.len() != system.big_n() + 2 {
        return Err(Error::DimensionMismatch {
            context: "trajectory length",
            expected: format!("{}", system.big_n() + 2),
            found: format!("{}", traj.len()),
        });
    }
    check_same_n("trajectory", system.n(), traj.frames[0].n())
}

/// Forward propagation of a fundamental matrix from `Z_0`.
pub fn propagate_fundamental(
    system: &SymplecticSystem,
    z0: &SymplecticMatrix,
) -> Result<ConjoinedTrajectory> {
    check_same_n("propagation", system.n(), z0.n())?;
    let mut zs = Vec::with_capacity(system.big_n() + 2);
    zs.push(z0.clone());
    for s in system.coefficients() {
        let next = s.compose(zs.last().expect("non-empty"));
        zs.push(next);
    }
    Ok(ConjoinedTrajectory::from_fundamentals(zs))
}

/// Trajectory through `Y_0`, with `Z_0` the completion of `Y_0`.
pub fn propagate(system: &SymplecticSystem, y0: &LagrangianFrame) -> Result<ConjoinedTrajectory> {
    propagate_fundamental(system, &frame_to_symplectic(y0))
}

/// Largest relative defect of `Y_k = S_k^{-1} Y_{k+1}`.
pub fn backward_defect(system: &SymplecticSystem, traj: &ConjoinedTrajectory) -> Result<f64> {
    check_trajectory(system, traj)?;
    let mut worst: f64 = 0.0;
    for (k, s) in system.coefficients().iter().enumerate() {
        let back = s.inverse().matrix() * traj.frames[k + 1].matrix();
        let d = (back - traj.frames[k].matrix()).amax();
        worst = worst.max(d / traj.frames[k].matrix().amax().max(1.0));
    }
    Ok(worst)
}

/// The solution with `Y_M = (0; I)`, built from `Z_M = I` in both directions.
pub fn principal_solution(system: &SymplecticSystem, m: usize) -> Result<ConjoinedTrajectory> {
    let last = system.big_n() + 1;
    if m > last {
        return Err(Error::OutOfRange {
            index: m,
            max: last,
        });
    }
    let n = system.n();
    let mut zs = vec![SymplecticMatrix::identity(n); last + 1];
    for k in m..last {
        zs[k + 1] = system.coefficient(k).compose(&zs[k]);
    }
    for k in (0..m).rev() {
        zs[k] = system.coefficient(k).inverse().compose(&zs[k + 1]);
    }
    Ok(ConjoinedTrajectory::from_fundamentals(zs))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForwardFocal {
    /// `rank M_k`, multiplicity at `k + 1`.
    pub m1: Vec<usize>,
    /// Multiplicity in the open interval `(k, k + 1)`.
    pub m2: Vec<usize>,
    pub m: Vec<usize>,
    /// `mu(Y_{k+1}, S_k (0; I))`.
    pub via_frames: Vec<usize>,
    /// `mu*(Z_{k+1}^{-1} (0; I), Z_k^{-1} (0; I))`.
    pub via_fundamentals: Vec<usize>,
}

impl ForwardFocal {
    pub fn total(&self) -> usize {
        self.m.iter().sum()
    }

    pub fn agree(&self) -> bool {
        self.m == self.via_frames && self.m == self.via_fundamentals
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BackwardFocal {
    /// `mu*(Y_k, S_k^{-1} (0; I))`.
    pub m_star: Vec<usize>,
    /// `mu(Z_k^{-1} (0; I), Z_{k+1}^{-1} (0; I))`.
    pub via_fundamentals: Vec<usize>,
}

impl BackwardFocal {
    pub fn total(&self) -> usize {
        self.m_star.iter().sum()
    }

    pub fn agree(&self) -> bool {
        self.m_star == self.via_fundamentals
    }
}

/// Forward focal points: `M_k = (I - X_{k+1} X_{k+1}^+) B_k`,
/// `T_k = I - M_k^+ M_k`, `m2(k) = ind(T_k X_k X_{k+1}^+ B_k T_k)`.
pub fn forward_focal_multiplicities(
    system: &SymplecticSystem,
    traj: &ConjoinedTrajectory,
    tol: &Tolerance,
) -> Result<ForwardFocal> {
    check_trajectory(system, traj)?;
    let steps = system.big_n() + 1;
    let mut out = ForwardFocal {
        m1: Vec::with_capacity(steps),
        m2: Vec::with_capacity(steps),
        m: Vec::with_capacity(steps),
        via_frames: Vec::with_capacity(steps),
        via_fundamentals: Vec::with_capacity(steps),
    };
    for k in 0..steps {
        let s = system.coefficient(k);
        let b = s.b();
        let s_scale = s.matrix().norm();
        let (yk, yk1) = (&traj.frames[k], &traj.frames[k + 1]);
        let x1 = yk1.x();
        let x1_pinv = pseudoinverse_scaled(&x1, yk1.scale(), tol);
        let mk = kernel_projector(&x1.transpose(), yk1.scale(), tol) * &b;
        let kernel = kernel_basis(&mk, s_scale, tol);
        let m1 = mk.ncols() - kernel.ncols();
        let inner = symmetrize(&(yk.x() * &x1_pinv * &b));
        let scale = yk.scale() * s_scale * x1_pinv.norm().max(1.0 / yk1.scale());
        let m2 = projected_inertia(&inner, &kernel, scale, tol).minus;
        out.m1.push(m1);
        out.m2.push(m2);
        out.m.push(m1 + m2);
        out.via_frames
            .push(comparative_index(yk1, &s.frame(), tol)?.mu);
        let (zk, zk1) = (&traj.fundamentals[k], &traj.fundamentals[k + 1]);
        out.via_fundamentals
            .push(comparative_index(&zk1.inverse_frame(), &zk.inverse_frame(), tol)?.mu_star);
    }
    Ok(out)
}

pub fn backward_focal_multiplicities(
    system: &SymplecticSystem,
    traj: &ConjoinedTrajectory,
    tol: &Tolerance,
) -> Result<BackwardFocal> {
    check_trajectory(system, traj)?;
    let steps = system.big_n() + 1;
    let mut out = BackwardFocal {
        m_star: Vec::with_capacity(steps),
        via_fundamentals: Vec::with_capacity(steps),
    };
    for k in 0..steps {
        let s_inv = system.coefficient(k).inverse();
        out.m_star
            .push(comparative_index(&traj.frames[k], &s_inv.frame(), tol)?.mu_star);
        let (zk, zk1) = (&traj.fundamentals[k], &traj.fundamentals[k + 1]);
        out.via_fundamentals
            .push(comparative_index(&zk.inverse_frame(), &zk1.inverse_frame(), tol)?.mu);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FocalPointTally {
    pub m1: Vec<usize>,
    pub m2: Vec<usize>,
    pub m: Vec<usize>,
    pub m_star: Vec<usize>,
    pub l_total: usize,
    pub l_star_total: usize,
    pub routes_agree: bool,
}

pub fn focal_tally(
    system: &SymplecticSystem,
    traj: &ConjoinedTrajectory,
    tol: &Tolerance,
) -> Result<FocalPointTally> {
    let f = forward_focal_multiplicities(system, traj, tol)?;
    let b = backward_focal_multiplicities(system, traj, tol)?;
    Ok(FocalPointTally {
        l_total: f.total(),
        l_star_total: b.total(),
        routes_agree: f.agree() && b.agree(),
        m1: f.m1,
        m2: f.m2,
        m: f.m,
        m_star: b.m_star,
    })
}

/// Cyclic sums over `Z_0^{-1}(0; I), ..., Z_{N+1}^{-1}(0; I)` and the reversed chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FocalCyclic {
    pub mu_minus_chain: i64,
    pub mu_plus_rev: i64,
    pub nu_minus_chain: i64,
    pub nu_plus_rev: i64,
}

pub fn focal_via_cyclic(traj: &ConjoinedTrajectory, tol: &Tolerance) -> Result<FocalCyclic> {
    let chain = traj.inverse_chain()?;
    let fwd = cyclic_sums(&chain, tol)?;
    let rev = cyclic_sums(&chain.reversed(), tol)?;
    Ok(FocalCyclic {
        mu_minus_chain: fwd.mu_minus,
        mu_plus_rev: rev.mu_plus,
        nu_minus_chain: fwd.nu_minus,
        nu_plus_rev: rev.nu_plus,
    })
}

/// Block matrices assembled from the upper blocks `X^{[M]}_k` of all principal solutions.
#[derive(Debug, Clone, PartialEq)]
pub struct PrincipalBlocks {
    /// `x[M][k] = X^{[M]}_k`.
    pub x: Vec<Vec<Mat>>,
    pub s0: Mat,
    pub k_d: Option<Mat>,
    pub n_d: Option<Mat>,
    pub m_tilde_d: Option<Mat>,
    pub m_d: Option<Mat>,
    pub d_d: Option<Mat>,
    /// `[[0, M~_d], [M~_d^T, S_{2..N+1} - D_d - D_d^T]]`, defined for `N >= 1`.
    pub s0_bar: Option<Mat>,
    scale: f64,
    reduced_scale: f64,
}

impl PrincipalBlocks {
    pub fn inertia(&self, tol: &Tolerance) -> InertiaTriple {
        inertia_scaled(&self.s0, self.scale, tol)
    }

    pub fn bar_inertia(&self, use_m_d: bool, tol: &Tolerance) -> Option<InertiaTriple> {
        let bar = self.s0_bar.as_ref()?;
        if !use_m_d {
            return Some(inertia_scaled(bar, self.reduced_scale, tol));
        }
        let n = self.x[0][0].nrows();
        let m_d = self.m_d.as_ref()?;
        let mut alt = bar.clone();
        alt.view_mut((0, n), m_d.shape()).copy_from(m_d);
        alt.view_mut((n, 0), (m_d.ncols(), n))
            .copy_from(&m_d.transpose());
        Some(inertia_scaled(&alt, self.reduced_scale, tol))
    }

    /// `S_{2..N+1} - D_d - D_d^T`.
    pub fn reduced_tail(&self) -> Option<Mat> {
        let bar = self.s0_bar.as_ref()?;
        let n = self.x[0][0].nrows();
        let k = bar.nrows() - n;
        Some(bar.view((n, n), (k, k)).into_owned())
    }
}

pub fn principal_block_matrix(
    system: &SymplecticSystem,
    tol: &Tolerance,
) -> Result<PrincipalBlocks> {
    let n = system.n();
    let last = system.big_n() + 1;
    let trajs: Vec<ConjoinedTrajectory> = (0..=last)
        .map(|m| principal_solution(system, m))
        .collect::<Result<_>>()?;
    let x: Vec<Vec<Mat>> = trajs
        .iter()
        .map(|t| (0..=last).map(|k| t.x(k)).collect())
        .collect();
    let scale = trajs
        .iter()
        .flat_map(|t| t.frames.iter().map(LagrangianFrame::scale))
        .fold(1.0, f64::max);

    let size = (last + 1) * n;
    let mut s0 = Mat::zeros(size, size);
    for (a, row) in x.iter().enumerate() {
        for (b, blk) in row.iter().enumerate().skip(a + 1) {
            s0.view_mut((a * n, b * n), (n, n))
                .copy_from(&blk.transpose());
            s0.view_mut((b * n, a * n), (n, n)).copy_from(blk);
        }
    }

    let mut out = PrincipalBlocks {
        s0,
        k_d: None,
        n_d: None,
        m_tilde_d: None,
        m_d: None,
        d_d: None,
        s0_bar: None,
        scale,
        reduced_scale: scale,
        x,
    };
    let big_n = system.big_n();
    if big_n == 0 {
        return Ok(out);
    }
    let x = &out.x;
    let k_d = hstack(&(1..=big_n).map(|k| x[0][k].transpose()).collect::<Vec<_>>());
    let n_d = hstack(
        &(1..=big_n)
            .map(|k| x[last][k].transpose())
            .collect::<Vec<_>>(),
    );
    let m_tilde_d = kernel_projector(&x[last][0], scale, tol) * &n_d;
    let m_d = kernel_projector(&x[0][last], scale, tol) * &k_d;
    let x_pinv = pseudoinverse_scaled(&x[0][last], scale, tol);
    let d_d = -(k_d.transpose() * &x_pinv * &n_d);
    let k = big_n * n;
    let s_mid = out.s0.view((n, n), (k, k)).into_owned();
    let tail = symmetrize(&(s_mid - &d_d - d_d.transpose()));
    let bar = block_matrix(&Mat::zeros(n, n), &m_tilde_d, &m_tilde_d.transpose(), &tail);
    out.reduced_scale = scale * (scale * x_pinv.norm()).max(1.0);
    out.k_d = Some(k_d);
    out.n_d = Some(n_d);
    out.m_tilde_d = Some(m_tilde_d);
    out.m_d = Some(m_d);
    out.d_d = Some(d_d);
    out.s0_bar = Some(bar);
    Ok(out)
}

/// `(ind(-S^{[0]}), ind(-S_bar^{[0]}))`; the second is `None` for `N = 0`.
pub fn focal_counts_via_inertia(
    system: &SymplecticSystem,
    tol: &Tolerance,
) -> Result<(usize, Option<usize>)> {
    let p = principal_block_matrix(system, tol)?;
    Ok((
        p.inertia(tol).plus,
        p.bar_inertia(false, tol).map(|i| i.plus),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisconjugacyCertificate {
    pub disconjugate: bool,
    /// `ind(-S_bar^{[0]})`.
    pub focal_count: usize,
    pub m_tilde_zero: bool,
    pub m_zero: bool,
    pub tail_nonpositive: bool,
    /// Largest eigenvalue of `S_bar^{[0]}`; positive exactly when disconjugacy fails.
    pub max_eigenvalue: f64,
}

impl DisconjugacyCertificate {
    /// The split condition `M~_d = M_d = 0` and `S_{2..N+1} - D_d - D_d^T <= 0`.
    pub fn split_condition(&self) -> bool {
        self.m_tilde_zero && self.m_zero && self.tail_nonpositive
    }
}

pub fn disconjugacy_check(
    system: &SymplecticSystem,
    tol: &Tolerance,
) -> Result<DisconjugacyCertificate> {
    if system.big_n() == 0 {
        return Err(Error::UnsupportedRoute(
            "the reduced principal block matrix needs N >= 1".into(),
        ));
    }
    let p = principal_block_matrix(system, tol)?;
    let bar = p.s0_bar.as_ref().expect("N >= 1");
    let focal_count = p.bar_inertia(false, tol).expect("N >= 1").plus;
    let m_tilde_zero = rank_scaled(p.m_tilde_d.as_ref().expect("N >= 1"), p.scale, tol) == 0;
    let m_zero = rank_scaled(p.m_d.as_ref().expect("N >= 1"), p.scale, tol) == 0;
    let tail = p.reduced_tail().expect("N >= 1");
    let tail_nonpositive = inertia_scaled(&tail, p.reduced_scale, tol).plus == 0;
    let max_eigenvalue = nalgebra::SymmetricEigen::new(symmetrize(bar))
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(DisconjugacyCertificate {
        disconjugate: focal_count == 0,
        focal_count,
        m_tilde_zero,
        m_zero,
        tail_nonpositive,
        max_eigenvalue,
    })
}

/// Every focal-point identity on one system, using `other` as a second
/// conjoined basis (given by its initial fundamental matrix).
pub fn focal_report(
    system: &SymplecticSystem,
    other: &SymplecticMatrix,
    tol: &Tolerance,
) -> Result<CheckReport> {
    let mut rep = CheckReport::new();
    let last = system.big_n() + 1;
    let p0 = principal_solution(system, 0)?;
    let pn = principal_solution(system, last)?;
    let t0 = focal_tally(system, &p0, tol)?;
    let tn = focal_tally(system, &pn, tol)?;
    rep.check_eq("routes agree at principal 0", t0.routes_agree as i64, 1);
    rep.check_eq("routes agree at principal N+1", tn.routes_agree as i64, 1);
    let (l0, ls0) = (t0.l_total as i64, t0.l_star_total as i64);
    let (ln, lsn) = (tn.l_total as i64, tn.l_star_total as i64);
    rep.check_eq("l(Y[0]) = l*(Y[N+1])", l0, lsn);
    rep.check_eq("l*(Y[0]) = l(Y[N+1])", ls0, ln);

    let basis = propagate_fundamental(system, other)?;
    let tb = focal_tally(system, &basis, tol)?;
    rep.check_eq("routes agree on basis", tb.routes_agree as i64, 1);
    for (name, traj) in [("principal 0", &p0), ("basis", &basis)] {
        let c = focal_via_cyclic(traj, tol)?;
        rep.check_eq(
            format!("{name}: mu-(chain) = l*(Y[0])"),
            c.mu_minus_chain,
            ls0,
        );
        rep.check_eq(
            format!("{name}: mu+(reversed) = l(Y[N+1])"),
            c.mu_plus_rev,
            ln,
        );
        rep.check_eq(
            format!("{name}: nu-(chain) = l*(Y[N+1])"),
            c.nu_minus_chain,
            lsn,
        );
        rep.check_eq(
            format!("{name}: nu+(reversed) = l(Y[0])"),
            c.nu_plus_rev,
            l0,
        );
    }

    let (a, b) = focal_counts_via_inertia(system, tol)?;
    rep.check_eq("ind(-S[0]) = l*(Y[0])", a as i64, ls0);
    if let Some(b) = b {
        rep.check_eq("ind(-S_bar[0]) = l(Y[0])", b as i64, l0);
        let p = principal_block_matrix(system, tol)?;
        let alt = p.bar_inertia(true, tol).expect("N >= 1").plus;
        rep.check_eq("ind(-S_bar[0]) with M_d = l(Y[0])", alt as i64, l0);
        let general = WronskianBlockMatrix::new(&p0.inverse_chain()?)?;
        rep.check_eq(
            "S[0] equals the Wronskian block matrix",
            ((&p.s0 - general.matrix()).amax() <= 1e-8 * p.scale.powi(2)) as i64,
            1,
        );
        let cert = disconjugacy_check(system, tol)?;
        rep.check_eq(
            "disconjugacy split condition",
            cert.split_condition() as i64,
            cert.disconjugate as i64,
        );
    }

    let (lb, lsb) = (tb.l_total as i64, tb.l_star_total as i64);
    rep.check_le("l(Y[0]) <= l(Y)", l0, lb);
    rep.check_le("l(Y) <= l(Y[N+1])", lb, ln);
    rep.check_le("l*(Y[N+1]) <= l*(Y)", lsn, lsb);
    rep.check_le("l*(Y) <= l*(Y[0])", lsb, ls0);
    let gap = comparative_index(&basis.frames[last], &p0.frames[last], tol)?.mu as i64;
    rep.check_eq("l(Y[0]) = l(Y) - mu(Y_N+1, Y[0]_N+1)", l0, lb - gap);
    Ok(rep)
}
