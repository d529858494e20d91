//! Randomized identity battery.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::comparative::{
    comparative_index, comparative_index_via_block_inertia, comparative_index_via_q,
    index_properties, verify_main_theorem,
};
use crate::cyclic::{
    chain_property_report, cyclic_sum_bounds, cyclic_sums, route_agreement_report, FrameChain,
};
use crate::discrete::{focal_report, SymplecticSystem};
use crate::error::Result;
use crate::kashiwara::kashiwara_report;
use crate::lagrangian::{
    random_frame, random_integer_frame, random_nonsingular, random_symplectic, AngleSearch,
    LagrangianFrame, SymplecticMatrix,
};
use crate::linalg::{symmetrize, Tolerance};
use crate::report::{CheckReport, IdentityCheck};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChainKind {
    Generic,
    Integer,
    Repeated,
}

/// Seed of trial `k`, derived from the master seed with a splitmix step.
pub fn derive_seed(master: u64, k: u64) -> u64 {
    let mut z = master.wrapping_add(k.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn random_chain(n: usize, m: usize, seed: u64, kind: ChainKind) -> FrameChain {
    let gen = |k: usize| {
        let s = derive_seed(seed, k as u64);
        match kind {
            ChainKind::Generic => random_frame(n, s),
            ChainKind::Integer | ChainKind::Repeated => random_integer_frame(n, s),
        }
    };
    let mut frames: Vec<LagrangianFrame> = (0..m).map(gen).collect();
    if kind == ChainKind::Repeated && m >= 2 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let src = rng.random_range(0..m);
        let dst = (src + rng.random_range(1..m)) % m;
        frames[dst] = frames[src].clone();
    }
    FrameChain::new(frames).expect("m >= 2 frames of equal size")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarnessConfig {
    pub trials: usize,
    pub n_max: usize,
    pub m_max: usize,
    pub big_n_max: usize,
    pub seed: u64,
    pub tol: Tolerance,
    pub search: AngleSearch,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            trials: 100,
            n_max: 3,
            m_max: 6,
            big_n_max: 5,
            seed: 0,
            tol: Tolerance::default(),
            search: AngleSearch::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSetup {
    pub trial: usize,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub kind: ChainKind,
    pub big_n: usize,
}

impl HarnessConfig {
    pub fn setup(&self, trial: usize) -> TrialSetup {
        let seed = derive_seed(self.seed, trial as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let kind = match trial % 4 {
            0 | 1 => ChainKind::Generic,
            2 => ChainKind::Integer,
            _ => ChainKind::Repeated,
        };
        TrialSetup {
            trial,
            seed,
            n: rng.random_range(1..=self.n_max.max(1)),
            m: rng.random_range(2..=self.m_max.max(2)),
            kind,
            big_n: rng.random_range(0..=self.big_n_max),
        }
    }
}

fn comparative_battery(
    y: &LagrangianFrame,
    yh: &LagrangianFrame,
    seed: u64,
    tol: &Tolerance,
) -> Result<CheckReport> {
    let n = y.n();
    let mut rep = CheckReport::new();
    let a = comparative_index(y, yh, tol)?;
    let b = comparative_index_via_q(y, yh, tol)?;
    let (mu, mu_star) = comparative_index_via_block_inertia(y, yh, tol)?;
    rep.check_eq("Q route mu", b.mu as i64, a.mu as i64);
    rep.check_eq("Q route mu*", b.mu_star as i64, a.mu_star as i64);
    rep.check_eq("block route mu", mu as i64, a.mu as i64);
    rep.check_eq("block route mu*", mu_star as i64, a.mu_star as i64);
    let lower = SymplecticMatrix::lower_shear(&symmetrize(&random_nonsingular(n, seed ^ 1)))?;
    rep.extend(
        "",
        index_properties(
            y,
            yh,
            &lower,
            &random_nonsingular(n, seed ^ 2),
            &random_nonsingular(n, seed ^ 3),
            tol,
        )?,
    );
    let t = verify_main_theorem(&random_symplectic(n, seed ^ 4), y, yh, tol)?;
    rep.check_eq("transformation identity mu", t.lhs_mu, t.rhs_mu);
    rep.check_eq("transformation identity mu*", t.lhs_mu_star, t.rhs_mu_star);
    Ok(rep)
}

/// `r <= mu_c^+- <= P` and the shifted bounds for the second kind.
pub fn bounds_report(
    chain: &FrameChain,
    r: &SymplecticMatrix,
    tol: &Tolerance,
) -> Result<CheckReport> {
    let b = cyclic_sum_bounds(chain, r, tol)?;
    let s = cyclic_sums(chain, tol)?;
    let mut rep = CheckReport::new();
    for (name, v) in [("mu-", s.mu_minus), ("mu+", s.mu_plus)] {
        rep.check_le(format!("r <= {name}"), b.r_lower, v);
        rep.check_le(format!("{name} <= P"), v, b.p_upper);
    }
    for (name, v) in [("nu-", s.nu_minus), ("nu+", s.nu_plus)] {
        rep.check_le(format!("r - rank w_1m <= {name}"), b.nu_lower, v);
        rep.check_le(format!("{name} <= P - rank w_1m"), v, b.nu_upper);
    }
    Ok(rep)
}

/// The whole battery on one trial.
pub fn trial_report(config: &HarnessConfig, setup: &TrialSetup) -> Result<CheckReport> {
    let tol = &config.tol;
    let (n, m, seed) = (setup.n, setup.m, setup.seed);
    let chain = random_chain(n, m, seed, setup.kind);
    let r = random_symplectic(n, seed ^ 5);
    let c: Vec<_> = (0..m)
        .map(|k| random_nonsingular(n, derive_seed(seed ^ 6, k as u64)))
        .collect();
    let mut rep = CheckReport::new();
    rep.extend(
        "comparative: ",
        comparative_battery(chain.frame(0), chain.frame(1), seed, tol)?,
    );
    rep.extend("cyclic: ", chain_property_report(&chain, &r, &c, tol)?);
    rep.extend(
        "routes: ",
        route_agreement_report(&chain, &config.search, tol)?,
    );
    rep.extend("bounds: ", bounds_report(&chain, &r, tol)?);
    if m >= 3 {
        rep.extend("kashiwara: ", kashiwara_report(&chain, &r, tol)?);
    }
    let ns = n.min(2);
    let system = SymplecticSystem::random(
        ns,
        setup.big_n,
        seed ^ 7,
        6,
        setup.kind != ChainKind::Generic,
    );
    rep.extend(
        "focal: ",
        focal_report(&system, &random_symplectic(ns, seed ^ 8), tol)?,
    );
    Ok(rep)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialFailure {
    pub trial: usize,
    pub seed: u64,
    pub check: Option<IdentityCheck>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarnessSummary {
    pub trials: usize,
    pub checks: usize,
    pub failures: Vec<TrialFailure>,
}

impl HarnessSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn run_harness(config: &HarnessConfig) -> HarnessSummary {
    let mut summary = HarnessSummary {
        trials: config.trials,
        checks: 0,
        failures: Vec::new(),
    };
    for trial in 0..config.trials {
        let setup = config.setup(trial);
        match trial_report(config, &setup) {
            Ok(rep) => {
                summary.checks += rep.len();
                summary
                    .failures
                    .extend(rep.failures().map(|c| TrialFailure {
                        trial,
                        seed: setup.seed,
                        check: Some(c.clone()),
                        error: None,
                    }));
            }
            Err(e) => summary.failures.push(TrialFailure {
                trial,
                seed: setup.seed,
                check: None,
                error: Some(e.to_string()),
            }),
        }
    }
    summary
}
