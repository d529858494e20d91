//! Kashiwara index of Lagrangian tuples.

use serde::{Deserialize, Serialize};

use crate::comparative::comparative_index;
use crate::cyclic::{cyclic_sums, CyclicSumBundle, FrameChain, WronskianBlockMatrix};
use crate::error::{Error, Result};
use crate::lagrangian::{
    check_same_n, frame_to_symplectic, wronskian, LagrangianFrame, SymplecticMatrix,
};
use crate::linalg::{inertia_scaled, Mat, Tolerance};
use crate::report::CheckReport;

/// Matrix of `B(x, x) = w(x1, x2) + w(x2, x3) + w(x3, x1)` on `L1 + L2 + L3`
/// in the coordinates `x_i = Y_i c_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct KashiwaraFormMatrix {
    pub s_b: Mat,
    /// `diag(I, -I, I)`.
    pub k_diag: Mat,
    scale: f64,
}

impl KashiwaraFormMatrix {
    pub fn new(y1: &LagrangianFrame, y2: &LagrangianFrame, y3: &LagrangianFrame) -> Result<Self> {
        check_same_n("kashiwara form", y1.n(), y2.n())?;
        check_same_n("kashiwara form", y1.n(), y3.n())?;
        let n = y1.n();
        let w12 = wronskian(y1, y2)?;
        let w23 = wronskian(y2, y3)?;
        let w31 = wronskian(y3, y1)?;
        let mut s = Mat::zeros(3 * n, 3 * n);
        let mut put = |i: usize, j: usize, b: &Mat| {
            let half = b * 0.5;
            s.view_mut((i * n, j * n), (n, n)).copy_from(&half);
            s.view_mut((j * n, i * n), (n, n))
                .copy_from(&half.transpose());
        };
        put(0, 1, &w12);
        put(1, 2, &w23);
        put(2, 0, &w31);
        let mut k = Mat::identity(3 * n, 3 * n);
        for i in n..2 * n {
            k[(i, i)] = -1.0;
        }
        let scale = [y1, y2, y3]
            .iter()
            .map(|y| y.scale())
            .fold(0.0, f64::max)
            .powi(2);
        Ok(KashiwaraFormMatrix {
            s_b: s,
            k_diag: k,
            scale,
        })
    }

    /// `max |S_B + K S_123 K / 2|`.
    pub fn congruence_defect(&self, s123: &Mat) -> f64 {
        (&self.s_b + &self.k_diag * s123 * &self.k_diag * 0.5).amax()
    }

    pub fn signature(&self, tol: &Tolerance) -> i64 {
        inertia_scaled(&self.s_b, self.scale, tol).sign()
    }
}

pub fn kashiwara_form_matrix(
    y1: &LagrangianFrame,
    y2: &LagrangianFrame,
    y3: &LagrangianFrame,
) -> Result<KashiwaraFormMatrix> {
    KashiwaraFormMatrix::new(y1, y2, y3)
}

fn need_three(chain: &FrameChain) -> Result<()> {
    if chain.m() < 3 {
        return Err(Error::ChainTooShort {
            need: 3,
            got: chain.m(),
        });
    }
    Ok(())
}

/// `tau(L1, L2, L3) = sign B`; for longer tuples the sum of `tau(L1, Lj, Lj+1)`.
pub fn kashiwara_index(chain: &FrameChain, tol: &Tolerance) -> Result<i64> {
    need_three(chain)?;
    let first = chain.frame(0);
    (1..chain.m() - 1).try_fold(0, |acc, j| {
        let f = KashiwaraFormMatrix::new(first, chain.frame(j), chain.frame(j + 1))?;
        Ok(acc + f.signature(tol))
    })
}

/// `(mu_c^+ - mu_c^-, nu_c^+ - nu_c^-)`; both equal `tau`.
pub fn kashiwara_via_cyclic(chain: &FrameChain, tol: &Tolerance) -> Result<(i64, i64)> {
    need_three(chain)?;
    let b = cyclic_sums(chain, tol)?;
    Ok((b.mu_plus - b.mu_minus, b.nu_plus - b.nu_minus))
}

fn halve(total: i64, what: &str) -> Result<i64> {
    if total % 2 != 0 {
        return Err(Error::Identity(format!("{what} has odd parity ({total})")));
    }
    Ok(total / 2)
}

/// All four cyclic sums from `tau` and Wronskian ranks:
/// `mu_c^+- = (sum of cyclic ranks +- tau) / 2`, and the second-kind sums with
/// `rank w(Y_1, Y_m)` subtracted instead of `rank w(Y_m, Y_1)` added.
pub fn kashiwara_inverse_formulas(chain: &FrameChain, tol: &Tolerance) -> Result<CyclicSumBundle> {
    let tau = kashiwara_index(chain, tol)?;
    let m = chain.m();
    let open: i64 = (0..m - 1)
        .map(|j| Ok(chain.rank_w(j, j + 1, tol)? as i64))
        .sum::<Result<i64>>()?;
    let close = chain.rank_w(m - 1, 0, tol)? as i64;
    let mu_total = open + close;
    let nu_total = open - close;
    Ok(CyclicSumBundle {
        mu_minus: halve(mu_total - tau, "rank sum - tau")?,
        mu_plus: halve(mu_total + tau, "rank sum + tau")?,
        nu_minus: halve(nu_total - tau, "open rank sum - tau")?,
        nu_plus: halve(nu_total + tau, "open rank sum + tau")?,
    })
}

fn sign_p(y: &LagrangianFrame, yhat: &LagrangianFrame, tol: &Tolerance) -> Result<i64> {
    Ok(comparative_index(y, yhat, tol)?.sign_p())
}

/// `sum_{j=1}^{m-2} sign P(Z^{-1} Y_j, Z^{-1} Y_{j+1})` in the chart of the
/// frame at `anchor`, for the chain read cyclically starting after `anchor`.
fn chart_sign_sum(chain: &FrameChain, anchor: usize, tol: &Tolerance) -> Result<i64> {
    let m = chain.m();
    let z_inv = frame_to_symplectic(chain.frame(anchor)).inverse();
    let moved: Vec<LagrangianFrame> = (1..m)
        .map(|k| z_inv.apply(chain.frame((anchor + k) % m)))
        .collect::<Result<_>>()?;
    moved
        .windows(2)
        .try_fold(0, |acc, p| Ok(acc + sign_p(&p[0], &p[1], tol)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignRepresentations {
    pub tau: i64,
    pub values: Vec<(String, i64)>,
}

impl SignRepresentations {
    pub fn report(&self) -> CheckReport {
        let mut r = CheckReport::new();
        for (name, v) in &self.values {
            r.check_eq(name.clone(), *v, self.tau);
        }
        r
    }
}

/// `tau` through sums of `sign P`, the negated signatures of the block
/// Wronskian matrix and its reductions, and the single-chart forms.
pub fn kashiwara_sign_representations(
    chain: &FrameChain,
    r: &SymplecticMatrix,
    tol: &Tolerance,
) -> Result<SignRepresentations> {
    let tau = kashiwara_index(chain, tol)?;
    let m = chain.m();
    let mut values = Vec::new();

    let moved = chain.transformed(&r.inverse())?;
    let cyclic_sign: i64 = (0..m)
        .map(|j| sign_p(moved.frame(j), moved.frame((j + 1) % m), tol))
        .sum::<Result<i64>>()?;
    values.push(("cyclic sign P under R^-1".to_string(), cyclic_sign));

    values.push((
        "sign P in the chart of Y_m".to_string(),
        chart_sign_sum(chain, m - 1, tol)?,
    ));

    let s = WronskianBlockMatrix::new(chain)?;
    values.push(("-sign S".to_string(), -s.inertia(tol).sign()));
    values.push((
        "-sign F_W S F_W".to_string(),
        -s.projected_head(tol).0.sign(),
    ));
    values.push((
        "-sign F_M~ (S - D - D^T) F_M~".to_string(),
        -s.projected_tail(tol)?.0.sign(),
    ));

    if m == 3 {
        for anchor in 0..2 {
            values.push((
                format!("sign P in the chart of Y_{}", anchor + 1),
                chart_sign_sum(chain, anchor, tol)?,
            ));
        }
    }
    Ok(SignRepresentations { tau, values })
}

/// Every equality between `tau`, cyclic sums and the form matrices on one chain.
pub fn kashiwara_report(
    chain: &FrameChain,
    r: &SymplecticMatrix,
    tol: &Tolerance,
) -> Result<CheckReport> {
    let tau = kashiwara_index(chain, tol)?;
    let mut rep = CheckReport::new();
    let (mu_diff, nu_diff) = kashiwara_via_cyclic(chain, tol)?;
    rep.check_eq("tau = mu+ - mu-", tau, mu_diff);
    rep.check_eq("tau = nu+ - nu-", tau, nu_diff);

    let sums = cyclic_sums(chain, tol)?;
    match kashiwara_inverse_formulas(chain, tol) {
        Ok(inv) => {
            rep.check_eq("half formula mu-", inv.mu_minus, sums.mu_minus);
            rep.check_eq("half formula mu+", inv.mu_plus, sums.mu_plus);
            rep.check_eq("half formula nu-", inv.nu_minus, sums.nu_minus);
            rep.check_eq("half formula nu+", inv.nu_plus, sums.nu_plus);
        }
        Err(Error::Identity(_)) => rep.check_eq("half formula parity", 1, 0),
        Err(e) => return Err(e),
    }
    let bound = chain.cyclic_rank_sum(tol)? as i64;
    rep.check_le("|tau| <= rank sum", tau.abs(), bound);
    rep.extend("", kashiwara_sign_representations(chain, r, tol)?.report());
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lagrangian::{line, random_frame, random_symplectic};
    use crate::linalg::inertia;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn triple() -> FrameChain {
        FrameChain::new(vec![line(1.0, 0.0), line(0.0, 1.0), line(1.0, 1.0)]).unwrap()
    }

    #[test]
    fn curated_triple() {
        let c = triple();
        let f = KashiwaraFormMatrix::new(c.frame(0), c.frame(1), c.frame(2)).unwrap();
        let two = &f.s_b * 2.0;
        let i = inertia(&two, &tol()).unwrap();
        assert_eq!((i.plus, i.minus), (1, 2));
        let s = WronskianBlockMatrix::new(&c).unwrap();
        assert_eq!(f.congruence_defect(s.matrix()), 0.0);
        assert_eq!(kashiwara_index(&c, &tol()).unwrap(), -1);
        assert_eq!(kashiwara_via_cyclic(&c, &tol()).unwrap(), (-1, -1));
        let inv = kashiwara_inverse_formulas(&c, &tol()).unwrap();
        assert_eq!((inv.mu_plus, inv.mu_minus), (1, 2));
        let rep = kashiwara_report(&c, &SymplecticMatrix::identity(1), &tol()).unwrap();
        assert!(rep.all_hold(), "{rep}");
    }

    #[test]
    fn equal_frames() {
        let y = random_frame(2, 1);
        let c = FrameChain::new(vec![y.clone(), y.clone(), y]).unwrap();
        let f = KashiwaraFormMatrix::new(c.frame(0), c.frame(1), c.frame(2)).unwrap();
        assert!(f.s_b.amax() < 1e-12);
        assert_eq!(kashiwara_index(&c, &tol()).unwrap(), 0);
        assert_eq!(kashiwara_via_cyclic(&c, &tol()).unwrap(), (0, 0));
        let reps = kashiwara_sign_representations(&c, &random_symplectic(2, 4), &tol()).unwrap();
        assert!(reps.values.iter().all(|(_, v)| *v == 0));
    }

    #[test]
    fn needs_three_frames() {
        let c = FrameChain::new(vec![line(1.0, 0.0), line(0.0, 1.0)]).unwrap();
        assert!(matches!(
            kashiwara_index(&c, &tol()),
            Err(Error::ChainTooShort { need: 3, got: 2 })
        ));
    }

    #[test]
    fn transposition_flips_and_rotation_keeps() {
        for seed in 0..30 {
            let c =
                FrameChain::new((0..3).map(|k| random_frame(1, seed * 7 + k)).collect()).unwrap();
            let tau = kashiwara_index(&c, &tol()).unwrap();
            let swapped = kashiwara_index(&c.select(&[1, 0, 2]).unwrap(), &tol()).unwrap();
            assert_eq!(swapped, -tau);
            for k in 1..3 {
                assert_eq!(kashiwara_index(&c.rotated(k), &tol()).unwrap(), tau);
            }
        }
    }

    #[test]
    fn random_chains_agree() {
        for seed in 0..40 {
            let n = 1 + seed as usize % 3;
            let m = 3 + seed as usize % 3;
            let c = FrameChain::new(
                (0..m)
                    .map(|k| random_frame(n, seed * 13 + k as u64))
                    .collect(),
            )
            .unwrap();
            let rep = kashiwara_report(&c, &random_symplectic(n, seed + 77), &tol()).unwrap();
            assert!(rep.all_hold(), "seed {seed}\n{rep}");
        }
    }
}
