use std::fmt;

use cyclidx::comparative::{
    comparative_index, comparative_index_via_block_inertia, comparative_index_via_q,
    mu1_rank_formula, mu1_wronskian_formula,
};
use cyclidx::cyclic::{
    chain_property_report, cyclic_sum_bounds, cyclic_sum_via_inertia, cyclic_sums, nu_via_inertia,
    route_agreement_report, transversal_chart_sums,
};
use cyclidx::discrete::{
    disconjugacy_check, focal_counts_via_inertia, focal_report, focal_tally, focal_via_cyclic,
    principal_solution,
};
use cyclidx::kashiwara::{kashiwara_report, kashiwara_sign_representations};
use cyclidx::lagrangian::{
    random_nonsingular, random_symplectic, validate_frame, validate_symplectic,
};
use cyclidx::verify::{bounds_report, derive_seed, run_harness, HarnessConfig};
use cyclidx::{AngleSearch, CheckReport, Error, IdentityCheck, InputDocument, Result, Tolerance};
use serde::Serialize;
use serde_json::{json, Value};

use crate::SumKind;

#[derive(Debug, Serialize)]
pub struct ReportDocument {
    pub command: String,
    pub tolerance: Tolerance,
    pub results: Value,
    pub checks: Vec<IdentityCheck>,
    pub passed: bool,
}

impl ReportDocument {
    fn new(tol: &Tolerance, results: Value, checks: CheckReport) -> Self {
        ReportDocument {
            command: String::new(),
            tolerance: *tol,
            passed: checks.all_hold(),
            results,
            checks: checks.checks,
        }
    }
}

impl fmt::Display for ReportDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "command: {}", self.command)?;
        writeln!(
            f,
            "tolerance: rank {:e}, eigenvalue kappa {}",
            self.tolerance.rank_rel_tol, self.tolerance.eig_zero_factor
        )?;
        if let Value::Object(map) = &self.results {
            for (k, v) in map {
                writeln!(f, "{k}: {v}")?;
            }
        }
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.checks.iter().filter(|c| !c.holds()).count();
        writeln!(
            f,
            "verdict: {} ({failed} failed of {} listed checks)",
            if self.passed { "pass" } else { "fail" },
            self.checks.len()
        )
    }
}

pub fn validate(text: &str, tol: &Tolerance) -> Result<ReportDocument> {
    let doc = InputDocument::from_json(text)?;
    if doc.frames.is_none() && doc.system.is_none() {
        return Err(Error::Parse(
            "document has neither `frames` nor `system`".into(),
        ));
    }
    let mut checks = CheckReport::new();
    let mut frames = Vec::new();
    if doc.frames.is_some() {
        for (k, y) in doc.frame_matrices()?.iter().enumerate() {
            let r = validate_frame(y, tol)?;
            checks.check_eq(
                format!("frame {k} is Lagrangian of rank n"),
                r.accepted as i64,
                1,
            );
            frames.push(r);
        }
    }
    let mut system = Vec::new();
    if doc.system.is_some() {
        for (k, s) in doc.system_matrices()?.iter().enumerate() {
            let r = validate_symplectic(s)?;
            checks.check_eq(format!("S_{k} is symplectic"), r.accepted as i64, 1);
            system.push(r);
        }
    }
    let results = json!({ "n": doc.n, "frames": frames, "system": system });
    Ok(ReportDocument::new(tol, results, checks))
}

pub fn compindex(
    text: &str,
    i: usize,
    j: usize,
    dual: bool,
    tol: &Tolerance,
) -> Result<ReportDocument> {
    let frames = InputDocument::from_json(text)?.frames(tol)?;
    let max = frames.len().saturating_sub(1);
    for index in [i, j] {
        if index > max {
            return Err(Error::OutOfRange { index, max });
        }
    }
    let (y, yh) = (&frames[i], &frames[j]);
    let b = comparative_index(y, yh, tol)?;
    let q = comparative_index_via_q(y, yh, tol)?;
    let (bmu, bmu_star) = comparative_index_via_block_inertia(y, yh, tol)?;
    let mut checks = CheckReport::new();
    checks.check_eq("Q route mu", q.mu as i64, b.mu as i64);
    checks.check_eq("Q route mu*", q.mu_star as i64, b.mu_star as i64);
    checks.check_eq("block route mu", bmu as i64, b.mu as i64);
    checks.check_eq("block route mu*", bmu_star as i64, b.mu_star as i64);
    checks.check_eq(
        "mu1 = rank(X | Xh) - rank X",
        mu1_rank_formula(y, yh, tol)? as i64,
        b.mu1 as i64,
    );
    checks.check_eq(
        "mu1 = rank(X^T | w) - rank X",
        mu1_wronskian_formula(y, yh, tol)? as i64,
        b.mu1 as i64,
    );
    let headline = if dual {
        ("mu*", b.mu_star)
    } else {
        ("mu", b.mu)
    };
    let results = json!({
        "pair": [i, j],
        "headline": { headline.0: headline.1 },
        "breakdown": b,
    });
    Ok(ReportDocument::new(tol, results, checks))
}

pub fn cyclic(text: &str, kind: SumKind, seed: u64, tol: &Tolerance) -> Result<ReportDocument> {
    let chain = InputDocument::from_json(text)?.chain(tol)?;
    let (n, m) = (chain.n(), chain.m());
    let sums = cyclic_sums(&chain, tol)?;
    let r = random_symplectic(n, seed);
    let c: Vec<_> = (0..m)
        .map(|k| random_nonsingular(n, derive_seed(seed, k as u64)))
        .collect();
    let search = AngleSearch::default();
    let mut checks = CheckReport::new();
    checks.extend("routes: ", route_agreement_report(&chain, &search, tol)?);
    checks.extend("bounds: ", bounds_report(&chain, &r, tol)?);
    checks.extend("properties: ", chain_property_report(&chain, &r, &c, tol)?);
    let headline = match kind {
        SumKind::First => json!({ "mu_minus": sums.mu_minus, "mu_plus": sums.mu_plus }),
        SumKind::Second => json!({ "nu_minus": sums.nu_minus, "nu_plus": sums.nu_plus }),
    };
    let results = json!({
        "m": m,
        "n": n,
        "headline": headline,
        "sums": sums,
        "via_inertia": cyclic_sum_via_inertia(&chain, tol)?,
        "nu_routes": nu_via_inertia(&chain, tol)?,
        "transversal_chart": transversal_chart_sums(&chain, &search, tol)?,
        "bounds": cyclic_sum_bounds(&chain, &r, tol)?,
    });
    Ok(ReportDocument::new(tol, results, checks))
}

pub fn kashiwara(text: &str, seed: u64, tol: &Tolerance) -> Result<ReportDocument> {
    let chain = InputDocument::from_json(text)?.chain(tol)?;
    let r = random_symplectic(chain.n(), seed);
    let reps = kashiwara_sign_representations(&chain, &r, tol)?;
    let checks = kashiwara_report(&chain, &r, tol)?;
    let results = json!({
        "m": chain.m(),
        "tau": reps.tau,
        "representations": reps.values,
    });
    Ok(ReportDocument::new(tol, results, checks))
}

pub fn focal(
    text: &str,
    principal_at: Option<usize>,
    backward: bool,
    seed: u64,
    tol: &Tolerance,
) -> Result<ReportDocument> {
    let system = InputDocument::from_json(text)?.system()?;
    let at = principal_at.unwrap_or(0);
    let traj = principal_solution(&system, at)?;
    let tally = focal_tally(&system, &traj, tol)?;
    let cyclic = focal_via_cyclic(&traj, tol)?;
    let (l_star_0, l_0) = focal_counts_via_inertia(&system, tol)?;
    let disconjugacy = match disconjugacy_check(&system, tol) {
        Ok(c) => serde_json::to_value(c).expect("plain data"),
        Err(Error::UnsupportedRoute(_)) => {
            let p0 = focal_tally(&system, &principal_solution(&system, 0)?, tol)?;
            json!({ "disconjugate": p0.l_total == 0 })
        }
        Err(e) => return Err(e),
    };
    let checks = focal_report(&system, &random_symplectic(system.n(), seed), tol)?;
    let headline = if backward {
        json!({ "l_star": tally.l_star_total })
    } else {
        json!({ "l": tally.l_total })
    };
    let results = json!({
        "n": system.n(),
        "N": system.big_n(),
        "principal_at": at,
        "headline": headline,
        "tally": tally,
        "cyclic": cyclic,
        "inertia": { "ind(-S[0])": l_star_0, "ind(-S_bar[0])": l_0 },
        "disconjugacy": disconjugacy,
    });
    Ok(ReportDocument::new(tol, results, checks))
}

pub fn verify(
    trials: usize,
    n_max: usize,
    m_max: usize,
    seed: u64,
    tol: &Tolerance,
) -> ReportDocument {
    let config = HarnessConfig {
        trials,
        n_max,
        m_max,
        seed,
        tol: *tol,
        ..Default::default()
    };
    let summary = run_harness(&config);
    let mut checks = CheckReport::new();
    let mut errors = Vec::new();
    for f in &summary.failures {
        match (&f.check, &f.error) {
            (Some(c), _) => {
                let mut c = c.clone();
                c.name = format!("trial {} seed {}: {}", f.trial, f.seed, c.name);
                checks.checks.push(c);
            }
            (None, Some(e)) => errors.push(json!({ "trial": f.trial, "seed": f.seed, "error": e })),
            (None, None) => {}
        }
    }
    let results = json!({
        "trials": summary.trials,
        "n_max": n_max,
        "m_max": m_max,
        "identities_checked": summary.checks,
        "failures": summary.failures.len(),
        "errors": errors,
    });
    let mut doc = ReportDocument::new(tol, results, checks);
    doc.passed = summary.passed();
    doc
}
