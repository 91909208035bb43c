//! Classical scalar radii: numerical radius `w(T)`, Crawford number `c(T)`,
//! transcendental radius `m(T)`, and the Prasanna form of `m(T)`.
//!
//! `w` and `c` go through the support function of the classical numerical
//! range, `h(theta) = lambda_max(Re(e^{-i theta} T))`: the largest eigenvalue
//! of a Hermitian pencil is globally reliable, unlike direct sphere search.
//! `m(T)` minimizes the convex map `lambda -> ||T - lambda I||` over the
//! plane, so any local minimum found by the pattern search is global.


use crate::matcore::{self, adjoint, herm_eig, spectral_norm, CMat, CVec, C64};
use crate::opt::{self, SphereFn, SphereOpt};
use crate::{Error, Result};

/// Number of support directions scanned before golden refinement.
pub const THETA_GRID: usize = 720;

/// Scalar radius value plus the witness that produced it.
#[derive(Debug, Clone)]
pub enum Witness {
    Vector(CVec),
    Scalar(C64),
}

#[derive(Debug, Clone)]
pub struct RadiusResult {
    pub value: f64,
    pub witness: Witness,
    pub iterations: usize,
    pub converged: bool,
}

/// `Re(e^{-i theta} T) = (e^{-i theta} T + e^{i theta} T*) / 2`.
fn rotated_real_part(t: &CMat, tstar: &CMat, theta: f64) -> CMat {
    let phase = C64::from_polar(1.0, -theta);
    t.scaled(phase * C64::new(0.5, 0.0))
        .add(&tstar.scaled(phase.conj() * C64::new(0.5, 0.0)))
}

fn support_value(t: &CMat, tstar: &CMat, theta: f64) -> f64 {
    let h = rotated_real_part(t, tstar, theta);
    herm_eig(&h, 1e-6).expect("rotated real part is Hermitian").max()
}

/// Golden-section maximization of a scalar function of the angle.
fn golden_max_angle(mut a: f64, mut b: f64, f: &dyn Fn(f64) -> f64, resolution: f64) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - (b - a) * INVPHI;
    let mut d = a + (b - a) * INVPHI;
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a) > resolution {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * INVPHI;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * INVPHI;
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    (mid, f(mid))
}

/// Numerical radius `w(T) = max_theta lambda_max(Re(e^{-i theta} T))`.
pub fn numerical_radius(t: &CMat) -> RadiusResult {
    let tstar = adjoint(t);
    let step = 2.0 * std::f64::consts::PI / THETA_GRID as f64;
    let mut best_k = 0usize;
    let mut best = f64::NEG_INFINITY;
    for k in 0..THETA_GRID {
        let v = support_value(t, &tstar, k as f64 * step);
        if v > best {
            best = v;
            best_k = k;
        }
    }
    let center = best_k as f64 * step;
    let (theta_star, value) = golden_max_angle(
        center - step,
        center + step,
        &|th| support_value(t, &tstar, th),
        1e-10,
    );
    let h = rotated_real_part(t, &tstar, theta_star);
    let eig = herm_eig(&h, 1e-6).expect("Hermitian");
    let witness = eig.vectors.last().unwrap().clone();
    RadiusResult {
        value: value.max(best),
        witness: Witness::Vector(witness),
        iterations: THETA_GRID,
        converged: true,
    }
}

/// Objective `-|<Tx, x>|`, used only to produce a Crawford witness when the
/// origin lies inside the numerical range.
struct NegAbsQuad<'a> {
    t: &'a CMat,
}

impl SphereFn for NegAbsQuad<'_> {
    fn dim(&self) -> usize {
        self.t.dim()
    }
    fn eval(&self, x: &[C64], scratch: &mut [C64]) -> f64 {
        self.t.apply_into(x, scratch);
        let q: C64 = scratch.iter().zip(x).map(|(tx, xi)| tx * xi.conj()).sum();
        -q.norm()
    }
}

/// Crawford number: the distance from the origin to `W(T)`, computed as
/// `max(0, max_theta -h(theta))`. Zero exactly when `0` lies in `W(T)`.
pub fn crawford(t: &CMat) -> RadiusResult {
    let tstar = adjoint(t);
    let step = 2.0 * std::f64::consts::PI / THETA_GRID as f64;
    let mut best_k = 0usize;
    let mut best = f64::NEG_INFINITY;
    for k in 0..THETA_GRID {
        let v = -support_value(t, &tstar, k as f64 * step);
        if v > best {
            best = v;
            best_k = k;
        }
    }
    let center = best_k as f64 * step;
    let (theta_star, refined) = golden_max_angle(
        center - step,
        center + step,
        &|th| -support_value(t, &tstar, th),
        1e-10,
    );
    let value = refined.max(best);

    if value <= 0.0 {
        // Origin inside W(T): value is 0 by definition; search for a vector
        // witness with |<Tx, x>| near zero so failures stay reproducible.
        let got = opt::maximize(
            &NegAbsQuad { t },
            &opt::default_starts(t.dim()),
            &SphereOpt::with_restarts(16, 1),
        );
        return RadiusResult {
            value: 0.0,
            witness: Witness::Vector(got.argmax),
            iterations: THETA_GRID + got.restarts_used,
            converged: true,
        };
    }
    let h = rotated_real_part(t, &tstar, theta_star);
    let eig = herm_eig(&h, 1e-6).expect("Hermitian");
    RadiusResult {
        value,
        witness: Witness::Vector(eig.vectors.last().unwrap().clone()),
        iterations: THETA_GRID,
        converged: true,
    }
}

/// 16-direction pattern search plus per-axis golden refinement for the convex
/// objective `lambda -> ||T - lambda I||`.
pub fn transcendental_radius(t: &CMat) -> RadiusResult {
    let n = t.dim();
    let norm = spectral_norm(t);
    if norm == 0.0 {
        return RadiusResult {
            value: 0.0,
            witness: Witness::Scalar(C64::new(0.0, 0.0)),
            iterations: 0,
            converged: true,
        };
    }
    let objective = |lambda: C64| spectral_norm(&t.shift(-lambda));

    let mut seeds = vec![t.trace() / C64::new(n as f64, 0.0), C64::new(0.0, 0.0)];
    if n <= 8 {
        // Bounding-box center of the spectrum; a cheap stand-in for the
        // Chebyshev center that seeds the search well.
        let ev = matcore::eigenvalues(t);
        let (mut re_lo, mut re_hi, mut im_lo, mut im_hi) =
            (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for z in &ev {
            re_lo = re_lo.min(z.re);
            re_hi = re_hi.max(z.re);
            im_lo = im_lo.min(z.im);
            im_hi = im_hi.max(z.im);
        }
        seeds.push(C64::new(0.5 * (re_lo + re_hi), 0.5 * (im_lo + im_hi)));
    }

    let mut best = seeds[0];
    let mut best_val = objective(best);
    let mut evals = 1usize;
    for &s in &seeds[1..] {
        let v = objective(s);
        evals += 1;
        if v < best_val {
            best_val = v;
            best = s;
        }
    }

    let dirs: Vec<C64> = (0..16)
        .map(|k| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 16.0))
        .collect();
    let mut scale = 0.5 * norm;
    let floor = 1e-9 * norm.max(1.0);
    while scale > floor {
        loop {
            let mut moved = false;
            for &d in &dirs {
                let cand = best + d * C64::new(scale, 0.0);
                let v = objective(cand);
                evals += 1;
                if v < best_val - 1e-15 * (1.0 + best_val) {
                    best_val = v;
                    best = cand;
                    moved = true;
                }
            }
            if !moved {
                break;
            }
        }
        scale *= 0.5;
    }
    // Per-axis golden refinement; the objective is convex so this is safe.
    for _ in 0..3 {
        for axis in 0..2 {
            let f = |s: f64| {
                let cand = if axis == 0 {
                    best + C64::new(s, 0.0)
                } else {
                    best + C64::new(0.0, s)
                };
                -objective(cand)
            };
            let (s_star, neg_v) = golden_max_angle(-1e-5 * norm, 1e-5 * norm, &f, 1e-12 * norm);
            if -neg_v < best_val {
                best_val = -neg_v;
                best = if axis == 0 {
                    best + C64::new(s_star, 0.0)
                } else {
                    best + C64::new(0.0, s_star)
                };
            }
        }
    }
    RadiusResult {
        value: best_val,
        witness: Witness::Scalar(best),
        iterations: evals,
        converged: true,
    }
}

/// `sup_{|x|=1} (||Tx||^2 - |<Tx, x>|^2)`; its square root equals `m(T)`.
pub(crate) struct PrasannaSq<'a> {
    pub t: &'a CMat,
}

impl SphereFn for PrasannaSq<'_> {
    fn dim(&self) -> usize {
        self.t.dim()
    }
    fn eval(&self, x: &[C64], scratch: &mut [C64]) -> f64 {
        self.t.apply_into(x, scratch);
        let mut tx_sq = 0.0;
        let mut quad = C64::new(0.0, 0.0);
        for (tx, xi) in scratch.iter().zip(x) {
            tx_sq += tx.norm_sqr();
            quad += tx * xi.conj();
        }
        tx_sq - quad.norm_sqr()
    }
}

/// Transcendental radius through the variational identity
/// `m^2(T) = sup (||Tx||^2 - |<Tx, x>|^2)`, by multi-start sphere ascent.
pub fn prasanna_radius(t: &CMat, restarts: usize, seed: u64) -> RadiusResult {
    let f = PrasannaSq { t };
    let mut starts = opt::default_starts(t.dim());
    starts.extend(extremal_starts(t));
    let got = opt::maximize(&f, &starts, &SphereOpt::with_restarts(restarts, seed));
    RadiusResult {
        value: got.value.max(0.0).sqrt(),
        witness: Witness::Vector(got.argmax),
        iterations: got.restarts_used,
        converged: got.converged > 0,
    }
}

/// Matrix-adapted starting points shared with the `omega_q` optimizer: the
/// top right singular vector and the extreme eigenvectors of the Hermitian
/// and skew parts.
pub(crate) fn extremal_starts(t: &CMat) -> Vec<CVec> {
    let mut starts = Vec::new();
    let dec = matcore::svd(t);
    starts.push(dec.v.column(0));
    let tstar = adjoint(t);
    let herm = t.add(&tstar).scaled(C64::new(0.5, 0.0));
    let skew = t.sub(&tstar).scaled(C64::new(0.0, -0.5));
    for part in [herm, skew] {
        if let Ok(eig) = herm_eig(&part, 1e-6) {
            starts.push(eig.vectors.first().unwrap().clone());
            starts.push(eig.vectors.last().unwrap().clone());
        }
    }
    starts
}

/// `AB + BA`.
pub fn anticommutator(a: &CMat, b: &CMat) -> Result<CMat> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch(format!(
            "anticommutator needs equal dims, got {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(a.matmul(b).add(&b.matmul(a)))
}
