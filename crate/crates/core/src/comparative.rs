//! Comparative index `mu(Y, Yhat)` and its dual `mu*(Y, Yhat)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lagrangian::{
    check_same_n, frame_to_symplectic, wronskian, LagrangianFrame, SymplecticMatrix,
};
use crate::linalg::{
    hstack, inertia_scaled, kernel_basis, kernel_projector, projected_inertia,
    pseudoinverse_scaled, rank_scaled, symmetrize, Mat, Tolerance,
};
use crate::report::CheckReport;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparativeIndexBreakdown {
    pub mu1: usize,
    pub mu2: usize,
    pub mu2_star: usize,
    pub mu: usize,
    pub mu_star: usize,
    /// `M`, whose rank is `mu1`. In the Q formulation this is `M~ = (I - X X^+) Xhat`.
    #[serde(skip)]
    pub m: Mat,
    /// Orthogonal projector onto `ker M`.
    #[serde(skip)]
    pub t: Mat,
    /// Symmetric `P`, whose negative and positive counts are `mu2` and `mu2_star`.
    #[serde(skip)]
    pub p: Mat,
}

impl ComparativeIndexBreakdown {
    fn assemble(m: Mat, kernel: &Mat, inner: &Mat, scale: f64, tol: &Tolerance) -> Self {
        let mu1 = m.ncols() - kernel.ncols();
        let t = kernel * kernel.transpose();
        let pin = projected_inertia(inner, kernel, scale, tol);
        let p = symmetrize(&(&t * inner * &t));
        ComparativeIndexBreakdown {
            mu1,
            mu2: pin.minus,
            mu2_star: pin.plus,
            mu: mu1 + pin.minus,
            mu_star: mu1 + pin.plus,
            m,
            t,
            p,
        }
    }

    /// `sign P = mu2* - mu2`.
    pub fn sign_p(&self) -> i64 {
        self.mu2_star as i64 - self.mu2 as i64
    }

    pub fn integers(&self) -> (usize, usize, usize) {
        (self.mu1, self.mu2, self.mu2_star)
    }
}

pub(crate) fn upper_rank(y: &LagrangianFrame, tol: &Tolerance) -> usize {
    rank_scaled(&y.x(), y.scale(), tol)
}

/// `rank w(Y, Yhat)`, thresholded against `|Y| |Yhat|`.
pub fn wronskian_rank(
    y: &LagrangianFrame,
    yhat: &LagrangianFrame,
    tol: &Tolerance,
) -> Result<usize> {
    let w = wronskian(y, yhat)?;
    Ok(rank_scaled(&w, y.scale() * yhat.scale(), tol))
}

/// `rank X` for the upper block of a frame.
pub fn rank_x(y: &LagrangianFrame, tol: &Tolerance) -> usize {
    upper_rank(y, tol)
}

/// `M = (I - X^+ X) w`, `T = I - M^+ M`, `P = T w^T X^+ Xhat T`.
pub fn comparative_index(
    y: &LagrangianFrame,
    yhat: &LagrangianFrame,
    tol: &Tolerance,
) -> Result<ComparativeIndexBreakdown> {
    check_same_n("comparative index", y.n(), yhat.n())?;
    let (sy, sh) = (y.scale(), yhat.scale());
    let x = y.x();
    let w = wronskian(y, yhat)?;
    let x_pinv = pseudoinverse_scaled(&x, sy, tol);
    let m = kernel_projector(&x, sy, tol) * &w;
    let kernel = kernel_basis(&m, sy * sh, tol);
    let inner = symmetrize(&(w.transpose() * &x_pinv * yhat.x()));
    let scale = sy * sh * sh * x_pinv.norm().max(1.0 / sy);
    Ok(ComparativeIndexBreakdown::assemble(
        m, &kernel, &inner, scale, tol,
    ))
}

/// Symmetric `Q = (U X^+ + (U X^+)^T) / 2`, which satisfies `X^T Q X = X^T U`.
pub fn symmetric_q(y: &LagrangianFrame, tol: &Tolerance) -> Mat {
    let x_pinv = pseudoinverse_scaled(&y.x(), y.scale(), tol);
    symmetrize(&(y.u() * x_pinv))
}

struct QForm {
    m_tilde: Mat,
    d: Mat,
    scale: f64,
}

fn q_form(y: &LagrangianFrame, yhat: &LagrangianFrame, tol: &Tolerance) -> Result<QForm> {
    check_same_n("comparative index", y.n(), yhat.n())?;
    let (sy, sh) = (y.scale(), yhat.scale());
    let (x, xh) = (y.x(), yhat.x());
    let x_pinv = pseudoinverse_scaled(&x, sy, tol);
    let xh_pinv = pseudoinverse_scaled(&xh, sh, tol);
    let m_tilde = kernel_projector(&x.transpose(), sy, tol) * &xh;
    let q = symmetrize(&(y.u() * &x_pinv));
    let qh = symmetrize(&(yhat.u() * &xh_pinv));
    let d = symmetrize(&(xh.transpose() * (qh - q) * &xh));
    let amplification = (sy * x_pinv.norm()).max(sh * xh_pinv.norm()).max(1.0);
    Ok(QForm {
        m_tilde,
        d,
        scale: sh * sh * amplification,
    })
}

/// Same integers through `M~ = (I - X X^+) Xhat` and `P = T Xhat^T (Qhat - Q) Xhat T`.
pub fn comparative_index_via_q(
    y: &LagrangianFrame,
    yhat: &LagrangianFrame,
    tol: &Tolerance,
) -> Result<ComparativeIndexBreakdown> {
    let f = q_form(y, yhat, tol)?;
    let kernel = kernel_basis(&f.m_tilde, yhat.scale(), tol);
    Ok(ComparativeIndexBreakdown::assemble(
        f.m_tilde, &kernel, &f.d, f.scale, tol,
    ))
}

/// `(mu, mu*) = (i_-, i_+)` of `[[0, M~], [M~^T, Xhat^T (Qhat - Q) Xhat]]`.
pub fn comparative_index_via_block_inertia(
    y: &LagrangianFrame,
    yhat: &LagrangianFrame,
    tol: &Tolerance,
) -> Result<(usize, usize)> {
    let f = q_form(y, yhat, tol)?;
    let n = y.n();
    let block =
        crate::linalg::block_matrix(&Mat::zeros(n, n), &f.m_tilde, &f.m_tilde.transpose(), &f.d);
    let i = inertia_scaled(&block, f.scale, tol);
    Ok((i.minus, i.plus))
}

/// `mu1 = rank(X | Xhat) - rank X`.
pub fn mu1_rank_formula(
    y: &LagrangianFrame,
    yhat: &LagrangianFrame,
    tol: &Tolerance,
) -> Result<usize> {
    check_same_n("mu1 rank formula", y.n(), yhat.n())?;
    let scale = y.scale().max(yhat.scale());
    let joint = rank_scaled(&hstack(&[y.x(), yhat.x()]), scale, tol);
    Ok(joint.saturating_sub(rank_scaled(&y.x(), y.scale(), tol)))
}

/// `mu1 = rank(X^T | w(Y, Yhat)) - rank X`.
pub fn mu1_wronskian_formula(
    y: &LagrangianFrame,
    yhat: &LagrangianFrame,
    tol: &Tolerance,
) -> Result<usize> {
    let w = wronskian(y, yhat)?;
    let (sy, sh) = (y.scale(), yhat.scale());
    // Rescale X^T so both blocks carry comparable magnitudes.
    let joint = rank_scaled(&hstack(&[y.x().transpose() * sh, w]), sy * sh, tol);
    Ok(joint.saturating_sub(rank_scaled(&y.x(), sy, tol)))
}

pub fn mu(y: &LagrangianFrame, yhat: &LagrangianFrame, tol: &Tolerance) -> Result<usize> {
    Ok(comparative_index(y, yhat, tol)?.mu)
}

pub fn mu_star(y: &LagrangianFrame, yhat: &LagrangianFrame, tol: &Tolerance) -> Result<usize> {
    Ok(comparative_index(y, yhat, tol)?.mu_star)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MainTheoremReport {
    pub lhs_mu: i64,
    pub rhs_mu: i64,
    pub lhs_mu_star: i64,
    pub rhs_mu_star: i64,
}

impl MainTheoremReport {
    pub fn holds(&self) -> bool {
        self.lhs_mu == self.rhs_mu && self.lhs_mu_star == self.rhs_mu_star
    }
}

/// Both sides of
/// `mu(W Y, W Yhat) = mu(Y, Yhat) + mu(Yhat, W^{-1}(0; I)) - mu(Y, W^{-1}(0; I))`
/// and of the dual identity.
pub fn verify_main_theorem(
    w: &SymplecticMatrix,
    y: &LagrangianFrame,
    yhat: &LagrangianFrame,
    tol: &Tolerance,
) -> Result<MainTheoremReport> {
    check_same_n("transformation identity", w.n(), y.n())?;
    check_same_n("transformation identity", y.n(), yhat.n())?;
    let v = w.inverse_frame();
    let lhs = comparative_index(&w.apply(y)?, &w.apply(yhat)?, tol)?;
    let base = comparative_index(y, yhat, tol)?;
    let a = comparative_index(yhat, &v, tol)?;
    let b = comparative_index(y, &v, tol)?;
    Ok(MainTheoremReport {
        lhs_mu: lhs.mu as i64,
        rhs_mu: base.mu as i64 + a.mu as i64 - b.mu as i64,
        lhs_mu_star: lhs.mu_star as i64,
        rhs_mu_star: base.mu_star as i64 + a.mu_star as i64 - b.mu_star as i64,
    })
}

fn is_lower_block_triangular(l: &SymplecticMatrix) -> bool {
    let b = l.b();
    b.amax() <= 1e-12 * l.matrix().amax().max(1.0)
}

/// Evaluates the basic index properties on one pair.
///
/// `lower` must be lower block-triangular symplectic; `c`, `chat` are
/// nonsingular right factors.
pub fn index_properties(
    y: &LagrangianFrame,
    yhat: &LagrangianFrame,
    lower: &SymplecticMatrix,
    c: &Mat,
    chat: &Mat,
    tol: &Tolerance,
) -> Result<CheckReport> {
    if !is_lower_block_triangular(lower) {
        return Err(Error::Shape(
            "transformation is not lower block-triangular".into(),
        ));
    }
    let base = comparative_index(y, yhat, tol)?;
    let back = comparative_index(yhat, y, tol)?;
    let rank_w = wronskian_rank(y, yhat, tol)? as i64;
    let (rx, rxh) = (rank_x(y, tol) as i64, rank_x(yhat, tol) as i64);
    let mut r = CheckReport::new();

    let lowered = comparative_index(&lower.apply(y)?, &lower.apply(yhat)?, tol)?;
    r.check_eq(
        "lower triangular invariance mu",
        lowered.mu as i64,
        base.mu as i64,
    );
    r.check_eq(
        "lower triangular invariance mu*",
        lowered.mu_star as i64,
        base.mu_star as i64,
    );
    let scaled = comparative_index(&y.right_scaled(c)?, &yhat.right_scaled(chat)?, tol)?;
    r.check_eq(
        "right scaling invariance mu",
        scaled.mu as i64,
        base.mu as i64,
    );
    r.check_eq(
        "right scaling invariance mu*",
        scaled.mu_star as i64,
        base.mu_star as i64,
    );

    r.check_eq(
        "mu(Y,Yh) + mu(Yh,Y) = rank w",
        (base.mu + back.mu) as i64,
        rank_w,
    );
    r.check_eq(
        "mu(Y,Yh) = rank Xh - rank X + mu*(Yh,Y)",
        base.mu as i64,
        rxh - rx + back.mu_star as i64,
    );

    let z_inv = frame_to_symplectic(y).inverse();
    let dual = comparative_index(&z_inv.frame(), &z_inv.apply(yhat)?, tol)?;
    r.check_eq("mu1 under Z^-1", base.mu1 as i64, dual.mu1 as i64);
    r.check_eq("mu2 under Z^-1", base.mu2 as i64, dual.mu2_star as i64);

    r.check_eq(
        "mu + mu* = rank w + rank Xh - rank X",
        (base.mu + base.mu_star) as i64,
        rank_w + rxh - rx,
    );
    r.check_le("mu <= rank w", base.mu as i64, rank_w);
    r.check_le("mu <= rank Xh", base.mu as i64, rxh);
    Ok(r)
}
