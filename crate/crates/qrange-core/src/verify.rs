//! Ensemble property-suite runner behind `qrange verify`.
//!
//! Certified invariants are established facts: a failure is a bug and flips
//! the report's exit status. Reported invariants are the new, partially
//! suspect bounds; their hold-rates are recorded and violations archived with
//! replay seeds, but they never fail the run.
//!
//! Every case seed is a pure function of the configured seed and the case
//! index, and all merges happen in case order, so a report is byte-identical
//! across runs and thread counts.

use std::collections::BTreeMap;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, BoundCfg, BoundReport};
use crate::matcore::{self, adjoint, spectral_norm, CMat, C64};
use crate::qrange::{self, QParam, RangeParams};
use crate::radii;
use crate::structure;
use crate::{Error, Result};

const CASE_STRIDE: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ensemble {
    Random,
    Normal,
    Nilpotent,
    Csym,
}

impl std::str::FromStr for Ensemble {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(Ensemble::Random),
            "normal" => Ok(Ensemble::Normal),
            "nilpotent" => Ok(Ensemble::Nilpotent),
            "csym" => Ok(Ensemble::Csym),
            other => Err(Error::Config(format!(
                "unknown ensemble '{other}' (expected random|normal|nilpotent|csym)"
            ))),
        }
    }
}

impl std::fmt::Display for Ensemble {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Ensemble::Random => "random",
            Ensemble::Normal => "normal",
            Ensemble::Nilpotent => "nilpotent",
            Ensemble::Csym => "csym",
        };
        f.write_str(s)
    }
}

fn gaussian_mat(dim: usize, rng: &mut impl Rng) -> CMat {
    let entries: Vec<C64> = (0..dim * dim)
        .map(|_| {
            C64::new(
                rng.sample::<f64, _>(rand_distr::StandardNormal),
                rng.sample::<f64, _>(rand_distr::StandardNormal),
            )
        })
        .collect();
    CMat::new(dim, entries).unwrap()
}

/// Draw one ensemble member. Normal matrices are built as `U D U*` with a
/// Haar-ish unitary from the polar factor of a Gaussian matrix; complex
/// symmetric ones as the symmetric part `(G + G^t)/2`.
pub fn generate(ensemble: Ensemble, dim: usize, seed: u64) -> CMat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match ensemble {
        Ensemble::Random => gaussian_mat(dim, &mut rng),
        Ensemble::Normal => {
            let d: Vec<C64> = (0..dim)
                .map(|_| {
                    C64::new(
                        rng.sample::<f64, _>(rand_distr::StandardNormal),
                        rng.sample::<f64, _>(rand_distr::StandardNormal),
                    )
                })
                .collect();
            let u = matcore::polar(&gaussian_mat(dim, &mut rng)).isometry;
            u.matmul(&CMat::diag(&d)).matmul(&adjoint(&u))
        }
        Ensemble::Nilpotent => {
            let mut t = gaussian_mat(dim, &mut rng);
            for i in 0..dim {
                for j in 0..=i {
                    t.set(i, j, C64::new(0.0, 0.0));
                }
            }
            t
        }
        Ensemble::Csym => {
            let g = gaussian_mat(dim, &mut rng);
            g.add(&g.transpose()).scaled(C64::new(0.5, 0.0))
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub ensemble: Ensemble,
    pub dims: Vec<usize>,
    pub count: usize,
    pub qs: Vec<f64>,
    pub restarts: usize,
    pub recheck_restarts: usize,
    pub seed: u64,
    pub holds_tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            ensemble: Ensemble::Random,
            dims: vec![2, 3, 4, 5, 6],
            count: 100,
            qs: (1..=10).map(|k| k as f64 / 10.0).collect(),
            restarts: 64,
            recheck_restarts: 512,
            seed: 0,
            holds_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct InvariantStat {
    pub pass: u64,
    pub fail: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Violation {
    pub invariant: String,
    pub case_index: usize,
    pub case_seed: u64,
    pub dim: usize,
    pub q: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub ensemble: String,
    pub dims: Vec<usize>,
    pub count: usize,
    pub qs: Vec<f64>,
    pub restarts: usize,
    pub seed: u64,
    pub certified: BTreeMap<String, InvariantStat>,
    pub reported: BTreeMap<String, InvariantStat>,
    pub certified_violations: Vec<Violation>,
    pub archived_violations: Vec<Violation>,
    pub certified_ok: bool,
}

struct Check {
    name: &'static str,
    certified: bool,
    pass: bool,
    q: f64,
    detail: String,
}

impl Check {
    fn new(name: &'static str, certified: bool, pass: bool, q: f64, detail: String) -> Self {
        Self { name, certified, pass, q, detail }
    }
}

fn bound_check(r: &BoundReport, certified: bool) -> Check {
    Check {
        name: match r.bound_id {
            bounds::BoundId::Norm => "bound_NORM",
            bounds::BoundId::LowerNorm => "bound_LOWER_NORM",
            bounds::BoundId::QuadQ => "bound_QUAD_Q",
            bounds::BoundId::QuadQCrawford => "bound_QUAD_Q_CRAWFORD",
            bounds::BoundId::TransQ => "bound_TRANS_Q",
            bounds::BoundId::ThmQ1 => "bound_THM_Q1",
            bounds::BoundId::ThmQ2 => "bound_THM_Q2",
            bounds::BoundId::ThmQ3Stated => "bound_THM_Q3_STATED",
            bounds::BoundId::ThmQ3Proved => "bound_THM_Q3_PROVED",
            bounds::BoundId::ThmQ4 => "bound_THM_Q4",
            bounds::BoundId::ThmQ5 => "bound_THM_Q5",
            bounds::BoundId::ThmQ6 => "bound_THM_Q6",
            bounds::BoundId::ThmQ6Normal => "bound_THM_Q6_NORMAL",
            bounds::BoundId::Qn1 => "bound_QN1",
            bounds::BoundId::Qn2 => "bound_QN2",
        },
        certified,
        pass: r.holds,
        q: r.q,
        detail: format!("rhs={} omega_est={} slack={}", r.rhs, r.omega_est, r.slack),
    }
}

fn case_checks(cfg: &VerifyConfig, index: usize, case_seed: u64) -> Result<Vec<Check>> {
    let dim = cfg.dims[index % cfg.dims.len()];
    let t = generate(cfg.ensemble, dim, case_seed);
    let scale = spectral_norm(&t).max(1e-12);
    let bcfg = BoundCfg {
        restarts: cfg.restarts,
        recheck_restarts: cfg.recheck_restarts,
        seed: case_seed,
        holds_tol: cfg.holds_tol,
    };
    let mut checks: Vec<Check> = Vec::new();

    // Kernel invariants.
    checks.push(Check::new(
        "matcore_adjoint_involution",
        true,
        adjoint(&adjoint(&t)) == t,
        f64::NAN,
        String::new(),
    ));
    let parts = matcore::polar(&t);
    let recon = spectral_norm(&parts.isometry.matmul(&parts.modulus).sub(&t));
    checks.push(Check::new(
        "matcore_polar_reconstruction",
        true,
        recon <= 1e-9 * scale,
        f64::NAN,
        format!("residual={recon}"),
    ));

    // Classical radii. The scalar ingredients are computed once per case and
    // shared with the whole bound sweep.
    let qs = bounds::quantities(&t);
    checks.push(Check::new(
        "radii_norm_sandwich",
        true,
        qs.w <= qs.norm + 1e-9 * scale && qs.norm <= 2.0 * qs.w + 1e-9 * scale,
        f64::NAN,
        format!("w={} norm={}", qs.w, qs.norm),
    ));
    let (qn1, qn2) = bounds::eval_kittaneh_with(&t, &qs, &bcfg);
    checks.push(bound_check(&qn1, true));
    checks.push(bound_check(&qn2, true));

    if index % 4 == 0 {
        let p = radii::prasanna_radius(&t, cfg.restarts, case_seed ^ 0x50).value;
        let gap = (p - qs.m).abs();
        checks.push(Check::new(
            "radii_prasanna_identity",
            true,
            gap <= 1e-6 * qs.m.max(1.0),
            0.0,
            format!("prasanna={p} transcendental={}", qs.m),
        ));
    }

    // Aluthge contraction and spectrum.
    let tilde = structure::aluthge(&t);
    checks.push(Check::new(
        "structure_aluthge_norm_contraction",
        true,
        spectral_norm(&tilde) <= qs.norm + 1e-9 * scale,
        f64::NAN,
        String::new(),
    ));
    if index % 10 == 0 && dim <= 6 {
        let mut ev_t = matcore::eigenvalues(&t);
        let mut ev_a = matcore::eigenvalues(&tilde);
        ev_t.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        ev_a.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        let worst = ev_t
            .iter()
            .zip(&ev_a)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        checks.push(Check::new(
            "structure_aluthge_spectrum",
            true,
            worst <= 1e-7 * scale.max(1.0),
            f64::NAN,
            format!("max eigenvalue gap={worst}"),
        ));
    }

    // Bound catalog over the q grid; the established rows are certified, the
    // new-theorem rows are reported. QN rows are already counted above.
    let rows = bounds::bound_sweep_with(&t, &cfg.qs, &bcfg, &qs)?;
    for r in &rows {
        if matches!(r.bound_id, bounds::BoundId::Qn1 | bounds::BoundId::Qn2) {
            continue;
        }
        let certified = matches!(
            r.bound_id,
            bounds::BoundId::Norm
                | bounds::BoundId::LowerNorm
                | bounds::BoundId::QuadQ
                | bounds::BoundId::TransQ
                | bounds::BoundId::ThmQ5
        );
        checks.push(bound_check(r, certified));
    }

    // Anticommutator bound on a paired draw, reduced q set.
    if index % 5 == 0 {
        let other = generate(cfg.ensemble, dim, case_seed ^ 0xabcd);
        for &q in reduced_qs(&cfg.qs) {
            let (stated, proved) = bounds::eval_thm_q3(&t, &other, q, &bcfg)?;
            checks.push(bound_check(&stated, false));
            checks.push(bound_check(&proved, false));
        }
    }

    // Sampled-range consistency.
    if index % 10 == 0 {
        let q = QParam::real(cfg.qs[cfg.qs.len() / 2])?;
        let params = RangeParams {
            n_theta: 128,
            n_samples: 64,
            restarts: cfg.restarts.min(24),
            seed: case_seed ^ 0x11,
        };
        let range = qrange::range_cloud(&t, q, &params)?;
        checks.push(Check::new(
            "qrange_cloud_inside_envelope",
            true,
            range.max_cloud_violation() <= 1e-8,
            q.value().re,
            format!("violation={}", range.max_cloud_violation()),
        ));
        checks.push(Check::new(
            "qrange_hull_convex",
            true,
            range.hull_convexity_defect() <= 1e-7 * scale * scale,
            q.value().re,
            format!("defect={}", range.hull_convexity_defect()),
        ));

        let q_mid = cfg.qs[cfg.qs.len() / 2];
        let lo = qrange::omega_q(&t, q_mid, 8, case_seed ^ 0x12)?.value;
        let hi = qrange::omega_q(&t, q_mid, 24, case_seed ^ 0x12)?.value;
        checks.push(Check::new(
            "qrange_omega_monotone_restarts",
            true,
            hi >= lo - 1e-12,
            q_mid,
            format!("r8={lo} r24={hi}"),
        ));

        // Affine radius equality, reported (the set identity is the theorem;
        // the radius form is an empirical log).
        let (a, b) = (1.5, C64::new(0.4, -0.3));
        let moved = t.scaled(C64::new(a, 0.0)).shift(b);
        let base = qrange::omega_q(&t, q_mid, cfg.restarts, case_seed ^ 0x13)?.value;
        let got = qrange::omega_q(&moved, q_mid, cfg.restarts, case_seed ^ 0x14)?.value;
        let predicted = a * base + (b * C64::new(q_mid, 0.0)).norm();
        checks.push(Check::new(
            "qrange_affine_radius_equality",
            false,
            (got - predicted).abs() <= 1e-5 * predicted.max(1.0),
            q_mid,
            format!("omega(aT+bI)={got} |a|omega+|bq|={predicted}"),
        ));
    }

    // Spectral inclusion for normal draws: q sigma(T) inside the envelope.
    if cfg.ensemble == Ensemble::Normal && index % 10 == 0 && dim <= 6 {
        let q = QParam::real(*cfg.qs.last().unwrap())?;
        let table = qrange::support_table(&t, q, 180, cfg.restarts.min(24), case_seed ^ 0x15);
        let mut worst = f64::NEG_INFINITY;
        for ev in matcore::eigenvalues(&t) {
            let p = ev * q.value();
            for (k, &h) in table.iter().enumerate() {
                let th = std::f64::consts::TAU * k as f64 / 180.0;
                worst = worst.max((C64::from_polar(1.0, -th) * p).re - h);
            }
        }
        checks.push(Check::new(
            "qrange_spectral_inclusion",
            true,
            worst <= 1e-6 * scale.max(1.0),
            q.value().re,
            format!("worst overshoot={worst}"),
        ));

        // Positive-spectrum variant. At q = 1 the range is the classical
        // numerical range, bounded away from zero by the smallest eigenvalue;
        // at small q the origin does enter (already at q = 0 the spectral
        // inclusion forces 0 into W_0), so only q = 1 is certified and the
        // small-q behaviour is a documented finding.
        let mut rng = ChaCha8Rng::seed_from_u64(case_seed ^ 0x16);
        let d: Vec<C64> = (0..dim)
            .map(|_| C64::new(rng.gen_range(0.2..2.0), 0.0))
            .collect();
        let u = matcore::polar(&gaussian_mat(dim, &mut rng)).isometry;
        let pos = u.matmul(&CMat::diag(&d)).matmul(&adjoint(&u));
        let tbl = qrange::support_table(&pos, QParam::real(1.0)?, 90, 16, case_seed ^ 0x17);
        let margin = tbl.iter().copied().fold(f64::INFINITY, f64::min);
        checks.push(Check::new(
            "structure_positive_spectrum_excludes_zero_q1",
            true,
            margin < -1e-8,
            1.0,
            format!("margin={margin}"),
        ));
    }

    // Complex symmetric draws: the theta = 0 slice of the inclusion.
    if cfg.ensemble == Ensemble::Csym && index % 10 == 0 {
        let q = QParam::real(cfg.qs[cfg.qs.len() / 2])?;
        let base = qrange::support_table(&t, q, 90, cfg.restarts.min(24), case_seed ^ 0x18);
        let other = qrange::support_table(
            &adjoint(&t),
            QParam::new(q.value().conj())?,
            90,
            cfg.restarts.min(24),
            case_seed ^ 0x19,
        );
        let worst = base
            .iter()
            .zip(&other)
            .map(|(a, b)| a - b)
            .fold(f64::NEG_INFINITY, f64::max);
        checks.push(Check::new(
            "structure_adjoint_inclusion_theta0",
            false,
            worst <= 1e-5,
            q.value().re,
            format!("violation={worst}"),
        ));
    }

    Ok(checks)
}

fn reduced_qs(qs: &[f64]) -> Vec<&f64> {
    let mut out = vec![&qs[0]];
    if qs.len() > 2 {
        out.push(&qs[qs.len() / 2]);
    }
    if qs.len() > 1 {
        out.push(&qs[qs.len() - 1]);
    }
    out
}

/// Run the configured suite and assemble the deterministic report.
pub fn run(cfg: &VerifyConfig) -> Result<VerifyReport> {
    if cfg.count == 0 || cfg.dims.is_empty() || cfg.qs.is_empty() {
        return Err(Error::Config("count, dims and qs must be nonempty".into()));
    }
    let case_results: Vec<(usize, u64, usize, Result<Vec<Check>>)> = (0..cfg.count)
        .into_par_iter()
        .map(|i| {
            let case_seed = cfg.seed.wrapping_add(CASE_STRIDE.wrapping_mul(i as u64 + 1));
            let dim = cfg.dims[i % cfg.dims.len()];
            (i, case_seed, dim, case_checks(cfg, i, case_seed))
        })
        .collect();

    let mut certified: BTreeMap<String, InvariantStat> = BTreeMap::new();
    let mut reported: BTreeMap<String, InvariantStat> = BTreeMap::new();
    let mut certified_violations: Vec<Violation> = Vec::new();
    let mut archived_violations: Vec<Violation> = Vec::new();

    for (i, case_seed, dim, outcome) in case_results {
        let checks = outcome?;
        for c in checks {
            let slot = if c.certified { &mut certified } else { &mut reported };
            let stat = slot.entry(c.name.to_string()).or_default();
            if c.pass {
                stat.pass += 1;
            } else {
                stat.fail += 1;
                let v = Violation {
                    invariant: c.name.to_string(),
                    case_index: i,
                    case_seed,
                    dim,
                    q: c.q,
                    detail: c.detail,
                };
                if c.certified {
                    certified_violations.push(v);
                } else {
                    archived_violations.push(v);
                }
            }
        }
    }

    let certified_ok = certified.values().all(|s| s.fail == 0);
    Ok(VerifyReport {
        ensemble: cfg.ensemble.to_string(),
        dims: cfg.dims.clone(),
        count: cfg.count,
        qs: cfg.qs.clone(),
        restarts: cfg.restarts,
        seed: cfg.seed,
        certified,
        reported,
        certified_violations,
        archived_violations,
        certified_ok,
    })
}
