//! Exact rational oracle and the degenerate fixture corpus.
#![allow(dead_code)]

pub mod corpus;

use cyclidx::{LagrangianFrame, Mat};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

#[derive(Clone, Debug, PartialEq)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<Vec<Q>>,
}

fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat {
            rows,
            cols,
            a: vec![vec![Q::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.a[i][i] = Q::one();
        }
        m
    }

    /// Exact copy of a matrix whose entries are integers.
    pub fn from_integer_mat(m: &Mat) -> Self {
        let mut out = Self::zeros(m.nrows(), m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let v = m[(i, j)];
                assert!(v.fract() == 0.0 && v.abs() < 1e15, "non-integer entry {v}");
                out.a[i][j] = q(v as i64);
            }
        }
        out
    }

    pub fn t(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.a[j][i] = self.a[i][j].clone();
            }
        }
        out
    }

    pub fn mul(&self, o: &QMat) -> Self {
        assert_eq!(self.cols, o.rows);
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.a[i][k].is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    out.a[i][j] += &self.a[i][k] * &o.a[k][j];
                }
            }
        }
        out
    }

    pub fn sub(&self, o: &QMat) -> Self {
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.a[i][j] -= &o.a[i][j];
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self::zeros(self.rows, self.cols).sub(self)
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut out = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.a[i][j] = self.a[r0 + i][c0 + j].clone();
            }
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &QMat) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.a[r0 + i][c0 + j] = b.a[i][j].clone();
            }
        }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            let Some(p) = (r..m.rows).find(|&i| !m.a[i][c].is_zero()) else {
                continue;
            };
            m.a.swap(r, p);
            let inv = m.a[r][c].recip();
            for j in 0..m.cols {
                m.a[r][j] = &m.a[r][j] * &inv;
            }
            for i in 0..m.rows {
                if i != r && !m.a[i][c].is_zero() {
                    let f = m.a[i][c].clone();
                    for j in 0..m.cols {
                        let d = &f * &m.a[r][j];
                        m.a[i][j] -= d;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == m.rows {
                break;
            }
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn inverse(&self) -> Self {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, &Self::identity(n));
        let (r, piv) = aug.rref();
        assert_eq!(piv[..n], (0..n).collect::<Vec<_>>()[..], "singular");
        r.block(0, n, n, n)
    }

    /// Moore-Penrose inverse through a full-rank factorization `A = F G`.
    pub fn pinv(&self) -> Self {
        let (r, piv) = self.rref();
        let k = piv.len();
        if k == 0 {
            return Self::zeros(self.cols, self.rows);
        }
        let mut f = Self::zeros(self.rows, k);
        for (j, &c) in piv.iter().enumerate() {
            for i in 0..self.rows {
                f.a[i][j] = self.a[i][c].clone();
            }
        }
        let g = r.block(0, 0, k, self.cols);
        let gt = g.t();
        let ft = f.t();
        gt.mul(&g.mul(&gt).inverse())
            .mul(&ft.mul(&f).inverse())
            .mul(&ft)
    }

    /// `(i_+, i_0, i_-)` by symmetric Gaussian elimination.
    pub fn inertia(&self) -> (usize, usize, usize) {
        assert_eq!(self.rows, self.cols);
        assert_eq!(self, &self.t(), "not symmetric");
        let mut m = self.clone();
        let n = m.rows;
        let (mut plus, mut minus) = (0, 0);
        let mut active: Vec<usize> = (0..n).collect();
        while !active.is_empty() {
            if let Some(pos) = active.iter().position(|&i| !m.a[i][i].is_zero()) {
                let p = active.remove(pos);
                let d = m.a[p][p].clone();
                if d.is_positive() {
                    plus += 1;
                } else {
                    minus += 1;
                }
                for &i in &active {
                    let f = &m.a[i][p] / &d;
                    if f.is_zero() {
                        continue;
                    }
                    for &j in &active {
                        let v = &f * &m.a[p][j];
                        m.a[i][j] -= v;
                    }
                }
                continue;
            }
            // Zero diagonal: mix a row with one carrying a nonzero off-diagonal entry.
            let pair = active
                .iter()
                .flat_map(|&i| active.iter().map(move |&j| (i, j)))
                .find(|&(i, j)| i != j && !m.a[i][j].is_zero());
            let Some((i, j)) = pair else { break };
            for &k in &active {
                let v = m.a[j][k].clone();
                m.a[i][k] += v;
            }
            for &k in &active {
                let v = m.a[k][j].clone();
                m.a[k][i] += v;
            }
        }
        (plus, n - plus - minus, minus)
    }
}

pub struct QFrame {
    pub n: usize,
    pub x: QMat,
    pub u: QMat,
}

impl QFrame {
    pub fn from_frame(y: &LagrangianFrame) -> Self {
        let n = y.n();
        let m = QMat::from_integer_mat(y.matrix());
        QFrame {
            n,
            x: m.block(0, 0, n, n),
            u: m.block(n, 0, n, n),
        }
    }
}

pub fn wronskian(a: &QFrame, b: &QFrame) -> QMat {
    a.x.t().mul(&b.u).sub(&a.u.t().mul(&b.x))
}

/// `(mu1, mu2, mu2*)` by the definition.
pub fn comparative(y: &QFrame, yh: &QFrame) -> (usize, usize, usize) {
    let n = y.n;
    let w = wronskian(y, yh);
    let xp = y.x.pinv();
    let m = QMat::identity(n).sub(&xp.mul(&y.x)).mul(&w);
    let t = QMat::identity(n).sub(&m.pinv().mul(&m));
    let p = t.mul(&w.t()).mul(&xp).mul(&yh.x).mul(&t);
    let (plus, _, minus) = p.inertia();
    (m.rank(), minus, plus)
}

pub fn mu(y: &QFrame, yh: &QFrame) -> (i64, i64) {
    let (a, b, c) = comparative(y, yh);
    ((a + b) as i64, (a + c) as i64)
}

/// `(mu_c^-, mu_c^+, nu_c^-, nu_c^+)`.
pub fn cyclic(frames: &[QFrame]) -> (i64, i64, i64, i64) {
    let m = frames.len();
    let (mut a, mut b) = (0, 0);
    for j in 0..m - 1 {
        let (x, y) = mu(&frames[j], &frames[j + 1]);
        a += x;
        b += y;
    }
    let close = mu(&frames[m - 1], &frames[0]);
    let back = mu(&frames[0], &frames[m - 1]);
    (a + close.0, b + close.1, a - back.0, b - back.1)
}

pub fn block_wronskian(frames: &[QFrame]) -> QMat {
    let (m, n) = (frames.len(), frames[0].n);
    let mut s = QMat::zeros(m * n, m * n);
    for i in 0..m {
        for j in i + 1..m {
            let w = wronskian(&frames[i], &frames[j]);
            s.set_block(i * n, j * n, &w);
            s.set_block(j * n, i * n, &w.t());
        }
    }
    s
}

/// `sign` of the Kashiwara form, summed over triples `(1, j, j+1)`.
pub fn kashiwara(frames: &[QFrame]) -> i64 {
    (1..frames.len() - 1)
        .map(|j| {
            let s = block_wronskian(&[
                clone_frame(&frames[0]),
                clone_frame(&frames[j]),
                clone_frame(&frames[j + 1]),
            ]);
            let n = frames[0].n;
            let mut k = QMat::identity(3 * n);
            for i in n..2 * n {
                k.a[i][i] = q(-1);
            }
            let sb = k.mul(&s).mul(&k).neg();
            let (p, _, mi) = sb.inertia();
            p as i64 - mi as i64
        })
        .sum()
}

pub fn clone_frame(f: &QFrame) -> QFrame {
    QFrame {
        n: f.n,
        x: f.x.clone(),
        u: f.u.clone(),
    }
}

pub fn qframes(frames: &[LagrangianFrame]) -> Vec<QFrame> {
    frames.iter().map(QFrame::from_frame).collect()
}

/// Exact integer symplectic system `S_0..S_N`.
pub struct QSystem {
    pub n: usize,
    pub s: Vec<QMat>,
}

impl QSystem {
    pub fn from_system(sys: &cyclidx::SymplecticSystem) -> Self {
        QSystem {
            n: sys.n(),
            s: sys
                .coefficients()
                .iter()
                .map(|c| QMat::from_integer_mat(c.matrix()))
                .collect(),
        }
    }

    fn j(&self) -> QMat {
        let n = self.n;
        let mut j = QMat::zeros(2 * n, 2 * n);
        for i in 0..n {
            j.a[i][n + i] = q(1);
            j.a[n + i][i] = q(-1);
        }
        j
    }

    pub fn inverse(&self, k: usize) -> QMat {
        let j = self.j();
        j.mul(&self.s[k].t()).mul(&j).neg()
    }

    /// Frames `Y^{[M]}_k` for `k = 0..=N+1`.
    pub fn principal(&self, at: usize) -> Vec<QMat> {
        let n = self.n;
        let last = self.s.len();
        let mut v = QMat::zeros(2 * n, n);
        v.set_block(n, 0, &QMat::identity(n));
        let mut ys = vec![v; last + 1];
        for k in at..last {
            ys[k + 1] = self.s[k].mul(&ys[k]);
        }
        for k in (0..at).rev() {
            ys[k] = self.inverse(k).mul(&ys[k + 1]);
        }
        ys
    }

    /// `(m(k), m*(k))` per step: `m1 + m2` through `M_k`, `T_k`, and
    /// `mu*(Y_k, S_k^{-1}(0; I))` for the backward count.
    pub fn focal(&self, ys: &[QMat]) -> Vec<(usize, usize)> {
        let n = self.n;
        (0..self.s.len())
            .map(|k| {
                let xk = ys[k].block(0, 0, n, n);
                let x1 = ys[k + 1].block(0, 0, n, n);
                let b = self.s[k].block(0, n, n, n);
                let x1p = x1.pinv();
                let mk = QMat::identity(n).sub(&x1.mul(&x1p)).mul(&b);
                let tk = QMat::identity(n).sub(&mk.pinv().mul(&mk));
                let p = tk.t().mul(&xk).mul(&x1p).mul(&b).mul(&tk);
                let m = mk.rank() + p.inertia().2;
                let y = QFrame {
                    n,
                    x: xk,
                    u: ys[k].block(n, 0, n, n),
                };
                let back = self.inverse(k);
                let yh = QFrame {
                    n,
                    x: back.block(0, n, n, n),
                    u: back.block(n, n, n, n),
                };
                (m, mu(&y, &yh).1 as usize)
            })
            .collect()
    }
}
