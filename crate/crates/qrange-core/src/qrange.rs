//! The q-numerical range `W_q(T)` and radius `omega_q(T)`.
//!
//! Everything here rides on one reduction: for an admissible pair
//! `(x, y = conj(q) x + sqrt(1-|q|^2) z)` with `z` a unit vector orthogonal
//! to `x`,
//!
//! ```text
//! <Tx, y> = q <Tx, x> + sqrt(1-|q|^2) <Tx, z>,
//! ```
//!
//! and the maximization over `z` (and the free phase) is closed-form:
//! `sup_z |<Tx, z>| = ||Tx - <Tx,x> x|| = sqrt(||Tx||^2 - |<Tx,x>|^2)`.
//! That removes the `z` block and the phase from the search space and leaves
//! optimization over the unit vector `x` alone, which the multi-start sphere
//! optimizer in [`crate::opt`] handles. All maxima reported this way are
//! certified *lower* estimates of the true supremum (every iterate is a
//! feasible admissible pair), accurate to arithmetic slack.
//!
//! Dimension-1 degenerate case: the only admissible value is `t q`, so
//! `W_q(T) = { t q }`; the optimizer is bypassed.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::matcore::{self, CMat, CVec, C64};
use crate::opt::{self, SphereFn, SphereOpt};
use crate::radii;
use crate::{Error, Result};

const SEED_STRIDE: u64 = 0x9e37_79b9_7f4a_7c15;

/// The parameter `q`, a complex number in the closed unit disk. The radius
/// bound suite restricts to real `q` in `[0, 1]`; range sampling and support
/// functions accept the full disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QParam(C64);

impl QParam {
    pub fn new(value: C64) -> Result<Self> {
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        if value.norm() > 1.0 + 1e-12 {
            return Err(Error::Config(format!("|q| = {} exceeds 1", value.norm())));
        }
        Ok(Self(value))
    }

    pub fn real(q: f64) -> Result<Self> {
        Self::new(C64::new(q, 0.0))
    }

    pub fn value(&self) -> C64 {
        self.0
    }

    pub fn modulus(&self) -> f64 {
        self.0.norm().min(1.0)
    }

    /// `sqrt(1 - |q|^2)`, clamped against roundoff above 1.
    pub fn ortho_weight(&self) -> f64 {
        (1.0 - self.modulus().powi(2)).max(0.0).sqrt()
    }
}

/// Unit vectors `(x, y)` with `<x, y> = q`; the sampling primitive behind
/// every `W_q` evaluation.
#[derive(Debug, Clone)]
pub struct AdmissiblePair {
    pub x: CVec,
    pub y: CVec,
    pub q: QParam,
}

impl AdmissiblePair {
    /// `<Tx, y>` for this pair.
    pub fn evaluate(&self, t: &CMat) -> C64 {
        t.apply(&self.x).inner(&self.y)
    }

    pub fn constraint_residual(&self) -> f64 {
        let nx = (self.x.norm() - 1.0).abs();
        let ny = (self.y.norm() - 1.0).abs();
        let ip = (self.x.inner(&self.y) - self.q.value()).norm();
        nx.max(ny).max(ip)
    }
}

/// Draw an admissible pair: `x` uniform on the sphere, `z` uniform on the
/// sphere of the orthogonal complement of `x`, `y = conj(q) x + w z`.
pub fn sample_pair(q: QParam, seed: u64, dim: usize) -> Result<AdmissiblePair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if dim == 1 {
        if (q.modulus() - 1.0).abs() > 1e-12 {
            return Err(Error::InfeasibleQ(q.modulus()));
        }
        let phase = C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
        let x = CVec::new(vec![phase]).unwrap();
        let y = x.scaled(q.value().conj());
        return Ok(AdmissiblePair { x, y, q });
    }
    let x = opt::random_unit(dim, &mut rng);
    let z = loop {
        let g = opt::random_unit(dim, &mut rng);
        let overlap = g.inner(&x);
        let perp = g.sub(&x.scaled(overlap));
        if perp.norm() > 1e-8 {
            break perp.normalized();
        }
    };
    let y = x.scaled(q.value().conj()).add(&z.scaled(C64::new(q.ortho_weight(), 0.0)));
    Ok(AdmissiblePair { x, y, q })
}

/// Multi-start estimate of `omega_q(T)`.
#[derive(Debug, Clone)]
pub struct OmegaEstimate {
    /// Certified lower estimate of `omega_q(T)`.
    pub value: f64,
    pub witness_x: CVec,
    /// Phase of the attaining range point; `<Tx, y> = e^{i phase} value` at
    /// the optimal `y` for `witness_x`.
    pub witness_phase: f64,
    pub restarts_used: usize,
    /// max - min over converged restarts; above ~1e-4 flags suspect runs.
    pub spread: f64,
}

struct OmegaObj<'a> {
    t: &'a CMat,
    q: f64,
    w: f64,
}

impl SphereFn for OmegaObj<'_> {
    fn dim(&self) -> usize {
        self.t.dim()
    }
    #[inline]
    fn eval(&self, x: &[C64], scratch: &mut [C64]) -> f64 {
        self.t.apply_into(x, scratch);
        let mut tx_sq = 0.0;
        let mut quad = C64::new(0.0, 0.0);
        for (tx, xi) in scratch.iter().zip(x) {
            tx_sq += tx.norm_sqr();
            quad += tx * xi.conj();
        }
        let a = quad.norm();
        self.q * a + self.w * (tx_sq - a * a).max(0.0).sqrt()
    }
}

pub(crate) struct SupportObj<'a> {
    t: &'a CMat,
    q: C64,
    w: f64,
    rot: C64,
}

impl<'a> SupportObj<'a> {
    pub(crate) fn new(t: &'a CMat, q: QParam, theta: f64) -> Self {
        Self { t, q: q.value(), w: q.ortho_weight(), rot: C64::from_polar(1.0, -theta) }
    }
}

impl SphereFn for SupportObj<'_> {
    fn dim(&self) -> usize {
        self.t.dim()
    }
    #[inline]
    fn eval(&self, x: &[C64], scratch: &mut [C64]) -> f64 {
        self.t.apply_into(x, scratch);
        let mut tx_sq = 0.0;
        let mut quad = C64::new(0.0, 0.0);
        for (tx, xi) in scratch.iter().zip(x) {
            tx_sq += tx.norm_sqr();
            quad += tx * xi.conj();
        }
        (self.rot * self.q * quad).re + self.w * (tx_sq - quad.norm_sqr()).max(0.0).sqrt()
    }
}

fn omega_starts(t: &CMat) -> Vec<CVec> {
    let mut starts = opt::default_starts(t.dim());
    starts.extend(radii::extremal_starts(t));
    starts
}

/// `omega_q(T)` for real `q` in `[0, 1]` by projected-gradient multi-start
/// over the unit sphere. The returned value never exceeds the true radius
/// beyond arithmetic slack (~1e-9).
pub fn omega_q(t: &CMat, q: f64, restarts: usize, seed: u64) -> Result<OmegaEstimate> {
    if !(0.0..=1.0 + 1e-12).contains(&q) {
        return Err(Error::Config(format!("omega_q requires q in [0,1], got {q}")));
    }
    let q = q.min(1.0);
    if t.dim() == 1 {
        let val = t.at(0, 0) * C64::new(q, 0.0);
        return Ok(OmegaEstimate {
            value: val.norm(),
            witness_x: CVec::basis(1, 0),
            witness_phase: if val.norm() > 0.0 { val.arg() } else { 0.0 },
            restarts_used: 0,
            spread: 0.0,
        });
    }
    let f = OmegaObj { t, q, w: (1.0 - q * q).max(0.0).sqrt() };
    let got = opt::maximize(&f, &omega_starts(t), &SphereOpt::with_restarts(restarts.max(1), seed));
    let tx = t.apply(&got.argmax);
    let quad = tx.inner(&got.argmax);
    Ok(OmegaEstimate {
        value: got.value,
        witness_x: got.argmax,
        witness_phase: if quad.norm() > 1e-300 { quad.arg() } else { 0.0 },
        restarts_used: got.restarts_used,
        spread: got.spread,
    })
}

/// Support value of `W_q(T)` in direction `theta` (lower estimate).
pub fn support_function(t: &CMat, q: QParam, theta: f64, restarts: usize, seed: u64) -> f64 {
    if t.dim() == 1 {
        return (C64::from_polar(1.0, -theta) * t.at(0, 0) * q.value()).re;
    }
    let f = SupportObj::new(t, q, theta);
    let got = opt::maximize(&f, &omega_starts(t), &SphereOpt::with_restarts(restarts.max(1), seed));
    got.value
}

/// Support table on the uniform grid `theta_k = 2 pi k / n_theta`.
///
/// Full multi-start runs are placed on anchor directions (about one in eight
/// grid points); the remaining directions are filled by warm-started
/// refinement sweeps in both orientations, seeded from the neighbouring
/// argmax and from the best anchor vector for that direction. The boundary
/// maximizer moves continuously except at jumps, and the anchor pool covers
/// the jumps.
pub fn support_table(t: &CMat, q: QParam, n_theta: usize, restarts: usize, seed: u64) -> Vec<f64> {
    let thetas: Vec<f64> = (0..n_theta)
        .map(|k| std::f64::consts::TAU * k as f64 / n_theta as f64)
        .collect();
    if t.dim() == 1 {
        return thetas
            .iter()
            .map(|&th| (C64::from_polar(1.0, -th) * t.at(0, 0) * q.value()).re)
            .collect();
    }

    let structured = omega_starts(t);
    let stride = (n_theta / 90).max(1);
    let anchor_restarts = (restarts / 8).clamp(2, 16);
    let anchors: Vec<(usize, f64, CVec)> = (0..n_theta)
        .step_by(stride)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&k| {
            let f = SupportObj::new(t, q, thetas[k]);
            let got = opt::maximize(
                &f,
                &structured,
                &SphereOpt::with_restarts(anchor_restarts, seed ^ SEED_STRIDE.wrapping_mul(k as u64 + 1)),
            );
            (k, got.value, got.argmax)
        })
        .collect();

    let pool: Vec<CVec> = anchors.iter().map(|(_, _, x)| x.clone()).collect();
    let mut h = vec![f64::NEG_INFINITY; n_theta];
    let mut best_x: Vec<Option<CVec>> = vec![None; n_theta];
    for (k, val, x) in &anchors {
        h[*k] = *val;
        best_x[*k] = Some(x.clone());
    }

    let warm_opts = SphereOpt { restarts: 0, seed, ..SphereOpt::default() };
    let mut scratch = vec![C64::new(0.0, 0.0); t.dim()];
    let mut sweep = |order: Vec<usize>, h: &mut Vec<f64>, best_x: &mut Vec<Option<CVec>>| {
        let mut prev: Option<CVec> = None;
        for k in order {
            let f = SupportObj::new(t, q, thetas[k]);
            // Best anchor vector for this direction.
            let mut pool_best: Option<(f64, &CVec)> = None;
            for x in &pool {
                let v = f.eval(x.entries(), &mut scratch);
                if pool_best.map_or(true, |(b, _)| v > b) {
                    pool_best = Some((v, x));
                }
            }
            let mut candidates: Vec<&CVec> = Vec::new();
            if let Some(p) = prev.as_ref() {
                candidates.push(p);
            }
            if let Some((_, x)) = pool_best {
                candidates.push(x);
            }
            for c in candidates {
                let (v, x) = opt::refine_warm(&f, c, &warm_opts);
                if v > h[k] {
                    h[k] = v;
                    best_x[k] = Some(x);
                }
            }
            prev = best_x[k].clone();
        }
    };
    sweep((0..n_theta).collect(), &mut h, &mut best_x);
    sweep((0..n_theta).rev().collect(), &mut h, &mut best_x);
    h
}

/// `W_q(T)` approximation: support table, raw point cloud, boundary polygon.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvexRange {
    pub q: QParam,
    pub n_theta: usize,
    pub support: Vec<f64>,
    pub cloud: Vec<C64>,
    pub hull: Vec<C64>,
}

impl ConvexRange {
    pub fn theta(&self, k: usize) -> f64 {
        std::f64::consts::TAU * k as f64 / self.n_theta as f64
    }

    pub fn thetas(&self) -> Vec<f64> {
        (0..self.n_theta).map(|k| self.theta(k)).collect()
    }

    pub fn min_support(&self) -> f64 {
        self.support.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Largest width over antipodal direction pairs.
    pub fn diameter(&self) -> f64 {
        let half = self.n_theta / 2;
        (0..half)
            .map(|k| self.support[k] + self.support[k + half])
            .fold(0.0f64, f64::max)
    }

    /// Worst violation of `Re(e^{-i theta_k} p) <= h_k` over the cloud.
    pub fn max_cloud_violation(&self) -> f64 {
        let mut worst = 0.0f64;
        for p in &self.cloud {
            for k in 0..self.n_theta {
                let v = (C64::from_polar(1.0, -self.theta(k)) * p).re - self.support[k];
                worst = worst.max(v);
            }
        }
        worst
    }

    /// Signed convexity defect of the hull polygon (nonnegative cross
    /// products mean convex, counterclockwise).
    pub fn hull_convexity_defect(&self) -> f64 {
        let n = self.hull.len();
        if n < 3 {
            return 0.0;
        }
        let mut worst = 0.0f64;
        for i in 0..n {
            let a = self.hull[i];
            let b = self.hull[(i + 1) % n];
            let c = self.hull[(i + 2) % n];
            let cross = (b.re - a.re) * (c.im - b.im) - (b.im - a.im) * (c.re - b.re);
            worst = worst.min(cross);
        }
        -worst
    }
}

/// Membership of the origin: `margin = min_k h(theta_k)`; nonnegative margin
/// (to grid slack) certifies containment, positive margin interiority.
pub fn contains_zero(range: &ConvexRange) -> (bool, f64) {
    let margin = range.min_support();
    (margin >= -1e-8, margin)
}

/// Hausdorff distance of two convex ranges on identical grids: the sup-norm
/// gap of their support functions.
pub fn hausdorff(r1: &ConvexRange, r2: &ConvexRange) -> Result<f64> {
    hausdorff_tables(&r1.support, &r2.support)
}

pub fn hausdorff_tables(h1: &[f64], h2: &[f64]) -> Result<f64> {
    if h1.len() != h2.len() {
        return Err(Error::GridMismatch(h1.len(), h2.len()));
    }
    Ok(h1
        .iter()
        .zip(h2)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

/// Parameters for [`range_cloud`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RangeParams {
    pub n_theta: usize,
    pub n_samples: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for RangeParams {
    fn default() -> Self {
        Self { n_theta: 720, n_samples: 512, restarts: 64, seed: 0 }
    }
}

/// Sampled picture of `W_q(T)`: support table on the angular grid, point
/// cloud from random admissible pairs, boundary polygon from the support
/// envelope. The support table is lifted over the cloud, so every sampled
/// point sits inside the envelope by construction.
pub fn range_cloud(t: &CMat, q: QParam, params: &RangeParams) -> Result<ConvexRange> {
    if params.n_theta < 16 {
        return Err(Error::Config("n_theta must be at least 16".into()));
    }
    let n_theta = params.n_theta;
    let mut support = support_table(t, q, n_theta, params.restarts, params.seed);

    let cloud: Vec<C64> = if t.dim() == 1 {
        vec![t.at(0, 0) * q.value(); params.n_samples.max(1)]
    } else {
        (0..params.n_samples)
            .map(|s| {
                let pair = sample_pair(q, params.seed.wrapping_add(SEED_STRIDE.wrapping_mul(s as u64 + 1)), t.dim())?;
                Ok(pair.evaluate(t))
            })
            .collect::<Result<_>>()?
    };

    for k in 0..n_theta {
        let rot = C64::from_polar(1.0, -std::f64::consts::TAU * k as f64 / n_theta as f64);
        for p in &cloud {
            support[k] = support[k].max((rot * p).re);
        }
    }

    let hull = envelope_polygon(&support);
    Ok(ConvexRange { q, n_theta, support, cloud, hull })
}

/// Boundary polygon of the halfplane intersection
/// `{ p : Re(e^{-i theta_k} p) <= h_k }`: candidate vertices come from
/// consecutive supporting lines; candidates violating any other halfplane
/// (redundant directions) are dropped.
pub fn envelope_polygon(support: &[f64]) -> Vec<C64> {
    let n = support.len();
    let scale = support.iter().fold(0.0f64, |m, h| m.max(h.abs())).max(1e-12);
    let tol = 1e-7 * scale;
    let thetas: Vec<f64> = (0..n).map(|k| std::f64::consts::TAU * k as f64 / n as f64).collect();

    let mut vertices: Vec<C64> = Vec::new();
    for k in 0..n {
        let k2 = (k + 1) % n;
        let (t1, t2) = (thetas[k], thetas[k2]);
        let det = (t2 - t1).sin().abs().max((std::f64::consts::TAU / n as f64).sin().abs());
        let p = C64::new(
            (support[k] * t2.sin() - support[k2] * t1.sin()) / det,
            (support[k2] * t1.cos() - support[k] * t2.cos()) / det,
        );
        let feasible = (0..n).all(|j| {
            (C64::from_polar(1.0, -thetas[j]) * p).re <= support[j] + tol
        });
        if feasible {
            vertices.push(p);
        }
    }
    // Deduplicate near-coincident neighbours.
    let mut out: Vec<C64> = Vec::new();
    for v in vertices {
        if out.last().map_or(true, |last| (last - v).norm() > 1e-9 * scale) {
            out.push(v);
        }
    }
    if out.len() >= 2 && (out[0] - *out.last().unwrap()).norm() <= 1e-9 * scale {
        out.pop();
    }
    if out.is_empty() {
        // Inconsistent table (can only come from optimizer deficits); fall
        // back to the deepest feasible point of the envelope.
        let mut p = C64::new(0.0, 0.0);
        for _ in 0..500 {
            let (mut worst, mut dir) = (f64::NEG_INFINITY, C64::new(1.0, 0.0));
            for j in 0..n {
                let u = C64::from_polar(1.0, thetas[j]);
                let slack = (u.conj() * p).re - support[j];
                if slack > worst {
                    worst = slack;
                    dir = u;
                }
            }
            if worst <= 0.0 {
                break;
            }
            p -= dir * C64::new(worst.min(scale), 0.0);
        }
        out.push(p);
    }
    out
}

/// Outcome of the 2x2 closed-form radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Closed2x2 {
    /// Normal with real nonnegative spectrum:
    /// `q (l1 + l2) / 2 + |l1 - l2| / 2`.
    Diagonal(f64),
    /// Equal-diagonal reduced form `[[g, a], [b, g]]`, `a, b >= 0`:
    /// `|g| q + sqrt((a+b)^2 + 4ab(1-q^2)) / 2`. Exact at `q = 1`; for
    /// `q < 1` this reproduces the source formula, which the sampler
    /// contradicts away from the diagonal case (see the findings log).
    ReducedForm(f64),
    NotApplicable,
}

/// Closed-form `omega_q` for 2x2 matrices where a closed form is on record.
///
/// A 2x2 matrix is unitarily similar to `[[g, a], [b, g]]` with `a, b >= 0`
/// exactly when `p = g^2 - det(T)` is real nonnegative and
/// `||T||_F^2 - 2|g|^2 >= 2p` (trace, determinant and Frobenius norm are a
/// complete set of unitary invariants at this size).
pub fn omega_q_2x2_closed(t: &CMat, q: f64) -> Result<Closed2x2> {
    if t.dim() != 2 {
        return Err(Error::DimMismatch(format!("expected dim 2, got {}", t.dim())));
    }
    let scale = t.max_abs_entry().max(1e-300);
    let tol = 1e-9 * scale;

    let ev = matcore::eigenvalues(t);
    let normal = {
        let tstar = matcore::adjoint(t);
        let comm = tstar.matmul(t).sub(&t.matmul(&tstar));
        matcore::spectral_norm(&comm) <= 1e-10 * scale * scale
    };
    if normal && ev.iter().all(|l| l.im.abs() <= tol && l.re >= -tol) {
        let (l1, l2) = (ev[0].re.max(0.0), ev[1].re.max(0.0));
        return Ok(Closed2x2::Diagonal(0.5 * q * (l1 + l2) + 0.5 * (l1 - l2).abs()));
    }

    let g = t.trace() * C64::new(0.5, 0.0);
    let det = t.at(0, 0) * t.at(1, 1) - t.at(0, 1) * t.at(1, 0);
    let p = g * g - det;
    let s = t.frobenius_norm().powi(2) - 2.0 * g.norm_sqr();
    if p.im.abs() > tol * scale || p.re < -tol * scale || s < 2.0 * p.re - tol * scale {
        return Ok(Closed2x2::NotApplicable);
    }
    let ab = p.re.max(0.0);
    let sum_sq = (s + 2.0 * ab).max(0.0);
    let value = g.norm() * q + 0.5 * (sum_sq + 4.0 * ab * (1.0 - q * q)).max(0.0).sqrt();
    Ok(Closed2x2::ReducedForm(value))
}
