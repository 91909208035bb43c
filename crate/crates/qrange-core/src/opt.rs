//! Multi-start maximization of scalar objectives on the complex unit sphere.
//!
//! This is the optimizer behind `omega_q`, support functions and the
//! Prasanna radius. Objectives are treated as functions of `2n` real
//! coordinates restricted to the sphere. Gradients are estimated by central
//! differences (step 1e-6) and projected to the tangent space; the objectives
//! carry a square-root kink where `||Tx|| = |<Tx, x>|`, so every restart ends
//! with a coordinate-wise golden-section pass followed by a short second
//! ascent, which recovers the lost accuracy near the kink.
//!
//! Restart `k` draws its starting point from an RNG seeded by `(seed, k)`
//! only, so enlarging the restart budget never changes earlier starts and the
//! reported maximum is monotone in the budget. All results are reduced in
//! restart order, which keeps runs bit-reproducible under parallelism.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::matcore::{CVec, C64};

/// Objective on the unit sphere. `eval` receives a unit vector and a scratch
/// buffer of the same dimension (for `Tx` and friends).
pub trait SphereFn: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, x: &[C64], scratch: &mut [C64]) -> f64;
}

/// Tuning knobs; the defaults match the library-wide optimizer contract.
#[derive(Debug, Clone)]
pub struct SphereOpt {
    pub restarts: usize,
    pub seed: u64,
    pub max_iters: usize,
    pub fd_step: f64,
}

impl Default for SphereOpt {
    fn default() -> Self {
        Self { restarts: 64, seed: 0, max_iters: 120, fd_step: 1e-6 }
    }
}

impl SphereOpt {
    pub fn with_restarts(restarts: usize, seed: u64) -> Self {
        Self { restarts, seed, ..Self::default() }
    }
}

#[derive(Debug, Clone)]
pub struct SphereMax {
    pub value: f64,
    pub argmax: CVec,
    pub restarts_used: usize,
    pub converged: usize,
    /// max - min of final values over converged restarts.
    pub spread: f64,
}

pub fn random_unit(dim: usize, rng: &mut impl Rng) -> CVec {
    loop {
        let entries: Vec<C64> = (0..dim)
            .map(|_| {
                C64::new(
                    rng.sample::<f64, _>(rand_distr::StandardNormal),
                    rng.sample::<f64, _>(rand_distr::StandardNormal),
                )
            })
            .collect();
        let v = CVec::new(entries).expect("gaussian entries are finite");
        if v.norm() > 1e-6 {
            return v.normalized();
        }
    }
}

/// Deterministic non-random starts: basis vectors and the flat vector.
pub fn default_starts(dim: usize) -> Vec<CVec> {
    let mut starts: Vec<CVec> = (0..dim.min(8)).map(|k| CVec::basis(dim, k)).collect();
    starts.push(CVec::from_reals(&vec![1.0; dim]).normalized());
    starts
}

struct Work {
    x: Vec<C64>,
    grad: Vec<f64>,
    cand: Vec<C64>,
    scratch: Vec<C64>,
}

impl Work {
    fn new(dim: usize) -> Self {
        Self {
            x: vec![C64::new(0.0, 0.0); dim],
            grad: vec![0.0; 2 * dim],
            cand: vec![C64::new(0.0, 0.0); dim],
            scratch: vec![C64::new(0.0, 0.0); dim],
        }
    }
}

#[inline]
fn coord(x: &[C64], j: usize) -> f64 {
    if j % 2 == 0 {
        x[j / 2].re
    } else {
        x[j / 2].im
    }
}

#[inline]
fn coord_add(x: &mut [C64], j: usize, dt: f64) {
    if j % 2 == 0 {
        x[j / 2].re += dt;
    } else {
        x[j / 2].im += dt;
    }
}

fn eval_normalized(f: &dyn SphereFn, cand: &mut [C64], scratch: &mut [C64]) -> f64 {
    let norm: f64 = cand.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm <= 1e-300 {
        return f64::NEG_INFINITY;
    }
    let inv = 1.0 / norm;
    for z in cand.iter_mut() {
        *z *= inv;
    }
    f.eval(cand, scratch)
}

/// One gradient-ascent phase from `w.x` (assumed unit). Returns the value and
/// whether the phase converged inside the iteration budget.
fn ascend(f: &dyn SphereFn, w: &mut Work, opts: &SphereOpt, max_iters: usize) -> (f64, bool) {
    let dim = f.dim();
    let nreal = 2 * dim;
    let h = opts.fd_step;
    let mut fx = f.eval(&w.x, &mut w.scratch);
    let mut step = 0.25;
    let mut stall = 0usize;

    for _ in 0..max_iters {
        // Central-difference gradient of the scale-invariant extension.
        for j in 0..nreal {
            w.cand.copy_from_slice(&w.x);
            coord_add(&mut w.cand, j, h);
            let fp = eval_normalized(f, &mut w.cand, &mut w.scratch);
            w.cand.copy_from_slice(&w.x);
            coord_add(&mut w.cand, j, -h);
            let fm = eval_normalized(f, &mut w.cand, &mut w.scratch);
            w.grad[j] = (fp - fm) / (2.0 * h);
        }
        // Project out the radial component.
        let radial: f64 = (0..nreal).map(|j| w.grad[j] * coord(&w.x, j)).sum();
        for j in 0..nreal {
            w.grad[j] -= radial * coord(&w.x, j);
        }
        let gnorm: f64 = w.grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if gnorm < 1e-12 {
            return (fx, true);
        }

        // Backtracking line search along the unit tangent direction.
        let mut t = step;
        let mut improved = false;
        while t > 1e-14 {
            w.cand.copy_from_slice(&w.x);
            for j in 0..nreal {
                coord_add(&mut w.cand, j, t * w.grad[j] / gnorm);
            }
            let ft = eval_normalized(f, &mut w.cand, &mut w.scratch);
            if ft > fx + 1e-4 * t * gnorm {
                w.x.copy_from_slice(&w.cand);
                let gain = ft - fx;
                fx = ft;
                step = (t * 2.0).min(0.5);
                improved = true;
                if gain < 1e-13 * (1.0 + fx.abs()) {
                    stall += 1;
                } else {
                    stall = 0;
                }
                break;
            }
            t *= 0.5;
        }
        if !improved {
            stall += 1;
            step = (step * 0.25).max(1e-10);
        }
        if stall >= 2 {
            return (fx, true);
        }
    }
    (fx, false)
}

/// Coordinate-wise golden-section pass; handles the square-root kink where
/// finite-difference gradients go bad.
fn golden_polish(f: &dyn SphereFn, w: &mut Work, width: f64) -> f64 {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let dim = f.dim();
    let nreal = 2 * dim;
    let mut fx = f.eval(&w.x, &mut w.scratch);
    for j in 0..nreal {
        let probe = |w: &mut Work, t: f64| -> f64 {
            w.cand.copy_from_slice(&w.x);
            coord_add(&mut w.cand, j, t);
            eval_normalized(f, &mut w.cand, &mut w.scratch)
        };
        let (mut a, mut b) = (-width, width);
        let mut c = b - (b - a) * INVPHI;
        let mut d = a + (b - a) * INVPHI;
        let mut fc = probe(w, c);
        let mut fd = probe(w, d);
        for _ in 0..30 {
            if fc >= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - (b - a) * INVPHI;
                fc = probe(w, c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + (b - a) * INVPHI;
                fd = probe(w, d);
            }
        }
        let t = 0.5 * (a + b);
        let ft = probe(w, t);
        if ft > fx {
            coord_add(&mut w.x, j, t);
            let norm: f64 = w.x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let inv = 1.0 / norm;
            for z in w.x.iter_mut() {
                *z *= inv;
            }
            fx = f.eval(&w.x, &mut w.scratch);
        }
    }
    fx
}

/// Full single-start pipeline: ascent, golden polish, short re-ascent.
pub fn refine_from(f: &dyn SphereFn, start: &CVec, opts: &SphereOpt) -> (f64, CVec, bool) {
    let dim = f.dim();
    let mut w = Work::new(dim);
    w.x.copy_from_slice(start.entries());
    let norm: f64 = w.x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    assert!(norm > 1e-300, "start vector must be nonzero");
    let inv = 1.0 / norm;
    for z in w.x.iter_mut() {
        *z *= inv;
    }
    let (_, conv1) = ascend(f, &mut w, opts, opts.max_iters);
    golden_polish(f, &mut w, 0.3);
    let (val, conv2) = ascend(f, &mut w, opts, opts.max_iters / 3 + 5);
    let arg = CVec::new(w.x.clone()).expect("iterates stay finite");
    (val, arg, conv1 || conv2)
}

/// Cheap warm-start refinement used by the support-table sweeps.
pub fn refine_warm(f: &dyn SphereFn, start: &CVec, opts: &SphereOpt) -> (f64, CVec) {
    let dim = f.dim();
    let mut w = Work::new(dim);
    w.x.copy_from_slice(start.entries());
    let norm: f64 = w.x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let inv = 1.0 / norm.max(1e-300);
    for z in w.x.iter_mut() {
        *z *= inv;
    }
    let (_, _) = ascend(f, &mut w, opts, 25);
    golden_polish(f, &mut w, 0.05);
    let (val, _) = ascend(f, &mut w, opts, 10);
    (val, CVec::new(w.x.clone()).expect("iterates stay finite"))
}

/// Maximize over the sphere with `opts.restarts` random starts plus the given
/// structured starts.
pub fn maximize(f: &dyn SphereFn, structured: &[CVec], opts: &SphereOpt) -> SphereMax {
    let dim = f.dim();
    let mut starts: Vec<CVec> = structured.to_vec();
    for k in 0..opts.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ (0x9e37_79b9_7f4a_7c15u64
            .wrapping_mul(k as u64 + 1)));
        starts.push(random_unit(dim, &mut rng));
    }

    let results: Vec<(f64, CVec, bool)> = starts
        .par_iter()
        .map(|s| refine_from(f, s, opts))
        .collect();

    let mut best = 0usize;
    let mut converged = 0usize;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (i, (val, _, conv)) in results.iter().enumerate() {
        if *val > results[best].0 {
            best = i;
        }
        if *conv {
            converged += 1;
            lo = lo.min(*val);
            hi = hi.max(*val);
        }
    }
    let spread = if converged > 0 { hi - lo } else { 0.0 };
    let (value, argmax, _) = results.into_iter().nth(best).unwrap();
    SphereMax { value, argmax, restarts_used: starts.len(), converged, spread }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::CMat;

    /// Rayleigh quotient of a Hermitian matrix: max is the top eigenvalue.
    struct Rayleigh {
        h: CMat,
    }

    impl SphereFn for Rayleigh {
        fn dim(&self) -> usize {
            self.h.dim()
        }
        fn eval(&self, x: &[C64], scratch: &mut [C64]) -> f64 {
            self.h.apply_into(x, scratch);
            scratch
                .iter()
                .zip(x)
                .map(|(tx, xi)| (tx * xi.conj()).re)
                .sum()
        }
    }

    #[test]
    fn finds_top_eigenvalue_of_hermitian() {
        let h = CMat::from_real_rows(&[
            &[1.0, 0.5, 0.0],
            &[0.5, -2.0, 0.25],
            &[0.0, 0.25, 3.0],
        ])
        .unwrap();
        let eig = crate::matcore::herm_eig(&h, 1e-8).unwrap();
        let got = maximize(
            &Rayleigh { h: h.clone() },
            &default_starts(3),
            &SphereOpt::with_restarts(16, 42),
        );
        assert!((got.value - eig.max()).abs() < 1e-9, "{} vs {}", got.value, eig.max());
        assert!(got.converged > 0);
        // Witness reproduces the value.
        let mut scratch = vec![C64::new(0.0, 0.0); 3];
        let back = Rayleigh { h }.eval(got.argmax.entries(), &mut scratch);
        assert!((back - got.value).abs() < 1e-12);
    }

    #[test]
    fn monotone_in_restart_budget() {
        let h = CMat::from_real_rows(&[&[0.3, 1.1], &[1.1, -0.4]]).unwrap();
        let f = Rayleigh { h };
        let starts = default_starts(2);
        let mut prev = f64::NEG_INFINITY;
        for r in [1usize, 4, 16, 64] {
            let got = maximize(&f, &starts, &SphereOpt::with_restarts(r, 7));
            assert!(got.value >= prev - 1e-15);
            prev = got.value;
        }
    }
}
