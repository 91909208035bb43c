//! Dense complex-matrix kernel.
//!
//! Square matrices over `Complex<f64>` with row-major storage, sized for
//! desk-scale work (dimensions up to a few dozen). Eigendecompositions run
//! cyclic Jacobi on Hermitian forms; the SVD is derived from the Jacobi
//! eigendecomposition of `M* M`, which is accurate far beyond the 1e-9
//! reconstruction tolerances used downstream at these sizes.
//!
//! Polar decomposition convention: the returned `isometry` annihilates
//! `ker |T|` (partial isometry, zero extension). The Aluthge transform is
//! insensitive to the extension because `|T|^(1/2)` kills that kernel.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type C64 = Complex64;

/// Default relative tolerance for Hermitian / PSD premise checks.
pub const TOL_HERM: f64 = 1e-10;
pub const TOL_PSD: f64 = 1e-10;

/// Dense complex column vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CVec {
    entries: Vec<C64>,
}

impl CVec {
    pub fn new(entries: Vec<C64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::DimMismatch("vector must have dimension >= 1".into()));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { entries })
    }

    pub fn zeros(dim: usize) -> Self {
        Self { entries: vec![C64::new(0.0, 0.0); dim] }
    }

    /// Standard basis vector `e_k`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.entries[k] = C64::new(1.0, 0.0);
        v
    }

    pub fn from_reals(reals: &[f64]) -> Self {
        Self { entries: reals.iter().map(|&r| C64::new(r, 0.0)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn entries_mut(&mut self) -> &mut [C64] {
        &mut self.entries
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Inner product `<self, other>`, conjugate-linear in the second slot.
    pub fn inner(&self, other: &CVec) -> C64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    pub fn scaled(&self, s: C64) -> CVec {
        CVec { entries: self.entries.iter().map(|z| z * s).collect() }
    }

    pub fn add(&self, other: &CVec) -> CVec {
        debug_assert_eq!(self.dim(), other.dim());
        CVec {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &CVec) -> CVec {
        debug_assert_eq!(self.dim(), other.dim());
        CVec {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn conj(&self) -> CVec {
        CVec { entries: self.entries.iter().map(|z| z.conj()).collect() }
    }

    pub fn normalized(&self) -> CVec {
        let n = self.norm();
        if n == 0.0 {
            return self.clone();
        }
        self.scaled(C64::new(1.0 / n, 0.0))
    }
}

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CMat {
    dim: usize,
    entries: Vec<C64>,
}

impl CMat {
    pub fn new(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimMismatch("matrix must have dimension >= 1".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::DimMismatch(format!(
                "expected {} entries for dim {}, got {}",
                dim * dim,
                dim,
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, entries })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::DimMismatch("rows must form a square matrix".into()));
        }
        Self::new(dim, rows.concat())
    }

    /// Real-entry convenience constructor for fixtures.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let converted: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&converted)
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: vec![C64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn diag(values: &[C64]) -> Self {
        let dim = values.len();
        let mut m = Self::zeros(dim);
        for (i, &v) in values.iter().enumerate() {
            m.entries[i * dim + i] = v;
        }
        m
    }

    pub fn diag_real(values: &[f64]) -> Self {
        Self::diag(&values.iter().map(|&v| C64::new(v, 0.0)).collect::<Vec<_>>())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> CVec {
        CVec { entries: (0..self.dim).map(|i| self.at(i, j)).collect() }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.at(i, i)).sum()
    }

    pub fn transpose(&self) -> CMat {
        let mut out = CMat::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(j, i, self.at(i, j));
            }
        }
        out
    }

    pub fn conj(&self) -> CMat {
        CMat { dim: self.dim, entries: self.entries.iter().map(|z| z.conj()).collect() }
    }

    pub fn add(&self, other: &CMat) -> CMat {
        debug_assert_eq!(self.dim, other.dim);
        CMat {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        debug_assert_eq!(self.dim, other.dim);
        CMat {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scaled(&self, s: C64) -> CMat {
        CMat { dim: self.dim, entries: self.entries.iter().map(|z| z * s).collect() }
    }

    /// `self + s I`.
    pub fn shift(&self, s: C64) -> CMat {
        let mut out = self.clone();
        for i in 0..self.dim {
            let v = out.at(i, i);
            out.set(i, i, v + s);
        }
        out
    }

    pub fn matmul(&self, other: &CMat) -> CMat {
        debug_assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    let v = out.at(i, j) + a * other.at(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &CVec) -> CVec {
        debug_assert_eq!(self.dim, v.dim());
        let n = self.dim;
        let mut out = vec![C64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            let row = self.row(i);
            for j in 0..n {
                acc += row[j] * v.entries[j];
            }
            out[i] = acc;
        }
        CVec { entries: out }
    }

    /// Apply into a preallocated buffer; the optimizer hot loop uses this.
    pub fn apply_into(&self, v: &[C64], out: &mut [C64]) {
        let n = self.dim;
        for i in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            let row = &self.entries[i * n..(i + 1) * n];
            for j in 0..n {
                acc += row[j] * v[j];
            }
            out[i] = acc;
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Principal `k x k` leading submatrix.
    pub fn leading(&self, k: usize) -> CMat {
        assert!(k >= 1 && k <= self.dim);
        let mut out = CMat::zeros(k);
        for i in 0..k {
            for j in 0..k {
                out.set(i, j, self.at(i, j));
            }
        }
        out
    }

    /// Embed into a larger dimension, padding with zeros.
    pub fn pad_to(&self, dim: usize) -> CMat {
        assert!(dim >= self.dim);
        let mut out = CMat::zeros(dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(i, j, self.at(i, j));
            }
        }
        out
    }
}

/// Conjugate transpose.
pub fn adjoint(m: &CMat) -> CMat {
    let n = m.dim();
    let mut out = CMat::zeros(n);
    for i in 0..n {
        for j in 0..n {
            out.set(j, i, m.at(i, j).conj());
        }
    }
    out
}

/// Assemble `[[a, b], [c, d]]` from equally sized square blocks.
pub fn block2x2(a: &CMat, b: &CMat, c: &CMat, d: &CMat) -> Result<CMat> {
    let p = a.dim();
    if b.dim() != p || c.dim() != p || d.dim() != p {
        return Err(Error::DimMismatch("blocks must share one square size".into()));
    }
    let n = 2 * p;
    let mut t = CMat::zeros(n);
    for i in 0..p {
        for j in 0..p {
            t.set(i, j, a.at(i, j));
            t.set(i, j + p, b.at(i, j));
            t.set(i + p, j, c.at(i, j));
            t.set(i + p, j + p, d.at(i, j));
        }
    }
    Ok(t)
}

/// Hermitian eigendecomposition, eigenvalues ascending, eigenvectors
/// orthonormal (columns of a unitary).
#[derive(Debug, Clone)]
pub struct HermEig {
    pub values: Vec<f64>,
    pub vectors: Vec<CVec>,
}

impl HermEig {
    pub fn pairs(&self) -> impl Iterator<Item = (f64, &CVec)> {
        self.values.iter().copied().zip(self.vectors.iter())
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().unwrap()
    }
}

fn hermitian_residual(m: &CMat) -> f64 {
    let mut r: f64 = 0.0;
    for i in 0..m.dim() {
        for j in 0..m.dim() {
            r = r.max((m.at(i, j) - m.at(j, i).conj()).norm());
        }
    }
    r
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// `tol_herm` is relative to the largest entry magnitude; inputs failing the
/// Hermitian premise return [`Error::NotHermitian`]. The iteration runs to an
/// off-diagonal Frobenius norm of about `1e-14 * ||H||_F`, which leaves
/// residuals `||Hv - lambda v||` far inside the 1e-9 contract.
pub fn herm_eig(h: &CMat, tol_herm: f64) -> Result<HermEig> {
    let n = h.dim();
    let scale = h.max_abs_entry().max(1e-300);
    let res = hermitian_residual(h);
    let tol = tol_herm * scale;
    if res > tol {
        return Err(Error::NotHermitian { residual: res, tol });
    }

    // Hermitize to kill representation roundoff before iterating.
    let mut a = CMat::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let v = (h.at(i, j) + h.at(j, i).conj()) * C64::new(0.5, 0.0);
            a.set(i, j, v);
        }
    }

    let mut v = CMat::identity(n);
    let fro = a.frobenius_norm().max(1e-300);
    let stop = 1e-14 * fro;

    for _sweep in 0..80 {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a.at(i, j).norm_sqr();
            }
        }
        if (2.0 * off).sqrt() <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.at(p, q);
                let mag = apq.norm();
                if mag <= 1e-300 {
                    continue;
                }
                // Phase e^{i phi} of the off-diagonal entry, then a real
                // Jacobi angle on the phase-absorbed 2x2 block.
                let phase = apq / C64::new(mag, 0.0);
                let app = a.at(p, p).re;
                let aqq = a.at(q, q).re;
                // Annihilation condition for this G: (aqq-app) c s + |apq|
                // (c^2 - s^2) = 0, i.e. t^2 - 2 tau t - 1 = 0; take the
                // small-magnitude root.
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // Columns: B = A G with G_pp = c, G_pq = -s e^{i phi},
                // G_qp = s e^{-i phi}, G_qq = c.
                let (cs, sc) = (C64::new(c, 0.0), C64::new(s, 0.0));
                for k in 0..n {
                    let akp = a.at(k, p);
                    let akq = a.at(k, q);
                    a.set(k, p, akp * cs + akq * sc * phase.conj());
                    a.set(k, q, akq * cs - akp * sc * phase);
                }
                // Rows: A' = G* B.
                for k in 0..n {
                    let apk = a.at(p, k);
                    let aqk = a.at(q, k);
                    a.set(p, k, apk * cs + aqk * sc * phase);
                    a.set(q, k, aqk * cs - apk * sc * phase.conj());
                }
                // Accumulate V <- V G.
                for k in 0..n {
                    let vkp = v.at(k, p);
                    let vkq = v.at(k, q);
                    v.set(k, p, vkp * cs + vkq * sc * phase.conj());
                    v.set(k, q, vkq * cs - vkp * sc * phase);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.at(i, i).re.partial_cmp(&a.at(j, j).re).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| a.at(i, i).re).collect();
    let vectors: Vec<CVec> = order.iter().map(|&j| v.column(j)).collect();
    Ok(HermEig { values, vectors })
}

/// Singular value decomposition `M = U diag(s) V*`, singular values
/// descending. Left singular vectors are only materialized for singular
/// values above `1e-13 * s_max`; the remaining columns of `u` are zero.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMat,
    pub s: Vec<f64>,
    pub v: CMat,
}

pub fn svd(m: &CMat) -> Svd {
    let n = m.dim();
    let ata = adjoint(m).matmul(m);
    let eig = herm_eig(&ata, 1.0).expect("M*M is Hermitian by construction");

    // Descending singular values.
    let mut s: Vec<f64> = Vec::with_capacity(n);
    let mut v = CMat::zeros(n);
    for (k, idx) in (0..n).rev().enumerate() {
        s.push(eig.values[idx].max(0.0).sqrt());
        for i in 0..n {
            v.set(i, k, eig.vectors[idx].entries()[i]);
        }
    }

    let cut = s[0] * 1e-13;
    let mut u = CMat::zeros(n);
    let mut u_cols: Vec<CVec> = Vec::new();
    for k in 0..n {
        if s[k] <= cut || s[k] == 0.0 {
            continue;
        }
        let mut col = m.apply(&v.column(k)).scaled(C64::new(1.0 / s[k], 0.0));
        // Modified Gram-Schmidt against previous columns keeps U orthonormal
        // even when singular values cluster.
        for prev in &u_cols {
            let proj = col.inner(prev);
            col = col.sub(&prev.scaled(proj));
        }
        let nrm = col.norm();
        if nrm > 1e-300 {
            col = col.scaled(C64::new(1.0 / nrm, 0.0));
        }
        for i in 0..n {
            u.set(i, k, col.entries()[i]);
        }
        u_cols.push(col);
    }
    Svd { u, s, v }
}

/// Largest singular value; relative accuracy well below 1e-10 at these sizes.
pub fn spectral_norm(m: &CMat) -> f64 {
    let ata = adjoint(m).matmul(m);
    let eig = herm_eig(&ata, 1.0).expect("M*M is Hermitian by construction");
    eig.max().max(0.0).sqrt()
}

/// Smallest singular value; equals `inf_{|x|=1} ||Mx||`.
pub fn sigma_min(m: &CMat) -> f64 {
    let ata = adjoint(m).matmul(m);
    let eig = herm_eig(&ata, 1.0).expect("M*M is Hermitian by construction");
    eig.min().max(0.0).sqrt()
}

/// PSD square root. Eigenvalues in `[-tol_psd * ||P||, 0)` are clamped to
/// zero; anything lower is a [`Error::NotPsd`] failure.
pub fn psd_sqrt(p: &CMat, tol_psd: f64) -> Result<CMat> {
    let eig = herm_eig(p, TOL_HERM.max(tol_psd))?;
    let scale = eig.values.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let floor = -tol_psd * scale.max(1e-300);
    if eig.min() < floor {
        return Err(Error::NotPsd { min_eig: eig.min(), tol: tol_psd * scale });
    }
    let n = p.dim();
    let mut out = CMat::zeros(n);
    for (lambda, vec) in eig.pairs() {
        let root = lambda.max(0.0).sqrt();
        if root == 0.0 {
            continue;
        }
        for i in 0..n {
            for j in 0..n {
                let v = out.at(i, j)
                    + vec.entries()[i] * vec.entries()[j].conj() * C64::new(root, 0.0);
                out.set(i, j, v);
            }
        }
    }
    Ok(out)
}

/// Polar decomposition `M = isometry * modulus`.
#[derive(Debug, Clone)]
pub struct PolarParts {
    /// Partial isometry; zero on `ker(modulus)`.
    pub isometry: CMat,
    /// PSD factor `|M| = (M* M)^(1/2)`.
    pub modulus: CMat,
}

pub fn polar(m: &CMat) -> PolarParts {
    let n = m.dim();
    let dec = svd(m);
    let mut modulus = CMat::zeros(n);
    let mut isometry = CMat::zeros(n);
    let cut = dec.s[0] * 1e-13;
    for k in 0..n {
        let vk = dec.v.column(k);
        let sk = dec.s[k];
        for i in 0..n {
            for j in 0..n {
                let add = vk.entries()[i] * vk.entries()[j].conj() * C64::new(sk, 0.0);
                let v = modulus.at(i, j) + add;
                modulus.set(i, j, v);
            }
        }
        if sk > cut && sk > 0.0 {
            let uk = dec.u.column(k);
            for i in 0..n {
                for j in 0..n {
                    let add = uk.entries()[i] * vk.entries()[j].conj();
                    let v = isometry.at(i, j) + add;
                    isometry.set(i, j, v);
                }
            }
        }
    }
    PolarParts { isometry, modulus }
}

/// Inverse by Gauss-Jordan with partial pivoting.
pub fn inverse(m: &CMat) -> Result<CMat> {
    let n = m.dim();
    let mut a = m.clone();
    let mut inv = CMat::identity(n);
    for col in 0..n {
        let mut piv = col;
        let mut best = a.at(col, col).norm();
        for r in (col + 1)..n {
            let mag = a.at(r, col).norm();
            if mag > best {
                best = mag;
                piv = r;
            }
        }
        if best <= 1e-14 * m.max_abs_entry().max(1e-300) {
            return Err(Error::SingularX(best));
        }
        if piv != col {
            for j in 0..n {
                let (x, y) = (a.at(col, j), a.at(piv, j));
                a.set(col, j, y);
                a.set(piv, j, x);
                let (x, y) = (inv.at(col, j), inv.at(piv, j));
                inv.set(col, j, y);
                inv.set(piv, j, x);
            }
        }
        let d = a.at(col, col);
        for j in 0..n {
            a.set(col, j, a.at(col, j) / d);
            inv.set(col, j, inv.at(col, j) / d);
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a.at(r, col);
            if f == C64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                let v = a.at(r, j) - f * a.at(col, j);
                a.set(r, j, v);
                let w = inv.at(r, j) - f * inv.at(col, j);
                inv.set(r, j, w);
            }
        }
    }
    Ok(inv)
}

/// Eigenvalues of a general (small) complex matrix via the characteristic
/// polynomial (Faddeev-LeVerrier) and Durand-Kerner root iteration. Intended
/// for dimensions up to ~8; used as a spectrum oracle, not a workhorse.
pub fn eigenvalues(m: &CMat) -> Vec<C64> {
    let n = m.dim();
    // p(z) = z^n + c[0] z^{n-1} + ... + c[n-1]
    let mut coeffs = vec![C64::new(0.0, 0.0); n];
    let mut mk = m.clone();
    let mut ck = -mk.trace();
    coeffs[0] = ck;
    for k in 1..n {
        let shifted = mk.shift(ck);
        mk = m.matmul(&shifted);
        ck = -mk.trace() / C64::new((k + 1) as f64, 0.0);
        coeffs[k] = ck;
    }

    let eval = |z: C64| -> C64 {
        let mut acc = C64::new(1.0, 0.0);
        for c in &coeffs {
            acc = acc * z + c;
        }
        acc
    };

    // Cauchy bound for the root radius, initial points spread on a circle.
    let radius = 1.0 + coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut roots: Vec<C64> = (0..n)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64;
            C64::new(radius * ang.cos(), radius * ang.sin()) * C64::new(0.7, 0.0)
        })
        .collect();
    let scale = radius.max(1e-300);
    for _ in 0..400 {
        let mut shift_max = 0.0f64;
        for i in 0..n {
            let mut denom = C64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() < 1e-280 {
                denom = C64::new(1e-280, 0.0);
            }
            let delta = eval(roots[i]) / denom;
            roots[i] -= delta;
            shift_max = shift_max.max(delta.norm());
        }
        if shift_max <= 1e-15 * scale {
            break;
        }
    }
    roots.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    pub fn random_cmat(dim: usize, rng: &mut impl Rng) -> CMat {
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

    #[test]
    fn adjoint_of_real_nilpotent() {
        let m = CMat::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let a = adjoint(&m);
        assert_eq!(a, CMat::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]]).unwrap());
    }

    #[test]
    fn adjoint_fixes_hermitian_and_is_involutive() {
        let h = CMat::from_rows(&[
            vec![C64::new(2.0, 0.0), C64::new(1.0, -3.0)],
            vec![C64::new(1.0, 3.0), C64::new(-1.0, 0.0)],
        ])
        .unwrap();
        assert_eq!(adjoint(&h), h);

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for dim in 1..=6 {
            let m = random_cmat(dim, &mut rng);
            assert_eq!(adjoint(&adjoint(&m)), m);
        }
    }

    #[test]
    fn spectral_norm_examples() {
        let t = CMat::diag_real(&[2.0, 1.0]);
        assert!((spectral_norm(&t) - 2.0).abs() < 1e-12);

        let t = CMat::from_real_rows(&[&[2.0, 1.0], &[0.0, 1.0]]).unwrap();
        let expect = (3.0 + 5.0f64.sqrt()).sqrt();
        assert!((spectral_norm(&t) - expect).abs() < 1e-10 * expect);

        assert_eq!(spectral_norm(&CMat::zeros(3)), 0.0);
    }

    #[test]
    fn spectral_norm_matches_adjoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for dim in 1..=8 {
            let m = random_cmat(dim, &mut rng);
            let a = spectral_norm(&m);
            let b = spectral_norm(&adjoint(&m));
            assert!((a - b).abs() <= 1e-12 * a.max(1.0), "dim {dim}: {a} vs {b}");
        }
    }

    #[test]
    fn sigma_min_examples() {
        assert!((sigma_min(&CMat::diag_real(&[2.0, 1.0])) - 1.0).abs() < 1e-12);
        let n = CMat::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(sigma_min(&n).abs() < 1e-12);
        // A rotation (unitary) has all singular values 1.
        let c = std::f64::consts::FRAC_1_SQRT_2;
        let u = CMat::from_real_rows(&[&[c, -c], &[c, c]]).unwrap();
        assert!((sigma_min(&u) - 1.0).abs() < 1e-12);
        assert!(sigma_min(&u) <= spectral_norm(&u) + 1e-15);
    }

    #[test]
    fn herm_eig_small_examples() {
        let eig = herm_eig(&CMat::diag_real(&[1.0, 3.0]), TOL_HERM).unwrap();
        assert!((eig.values[0] - 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 3.0).abs() < 1e-14);

        let x = CMat::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let eig = herm_eig(&x, TOL_HERM).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn herm_eig_rejects_non_hermitian() {
        let n = CMat::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(herm_eig(&n, TOL_HERM), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn herm_eig_reconstructs_random_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for dim in 1..=8 {
            let g = random_cmat(dim, &mut rng);
            let h = g.add(&adjoint(&g)).scaled(C64::new(0.5, 0.0));
            let eig = herm_eig(&h, TOL_HERM).unwrap();
            let scale = spectral_norm(&h).max(1e-12);

            // Residuals ||Hv - lambda v||.
            for (lambda, v) in eig.pairs() {
                let r = h.apply(v).sub(&v.scaled(C64::new(lambda, 0.0)));
                assert!(r.norm() <= 1e-9 * scale, "residual {} at dim {}", r.norm(), dim);
                assert!((v.norm() - 1.0).abs() < 1e-12);
            }
            // Reconstruction sum lambda_k v_k v_k*.
            let mut rec = CMat::zeros(dim);
            for (lambda, v) in eig.pairs() {
                for i in 0..dim {
                    for j in 0..dim {
                        let add = v.entries()[i] * v.entries()[j].conj()
                            * C64::new(lambda, 0.0);
                        let val = rec.at(i, j) + add;
                        rec.set(i, j, val);
                    }
                }
            }
            assert!(spectral_norm(&h.sub(&rec)) <= 1e-9 * scale);
        }
    }

    #[test]
    fn psd_sqrt_examples() {
        let s = psd_sqrt(&CMat::diag_real(&[0.0, 2.0]), TOL_PSD).unwrap();
        assert!(spectral_norm(&s.sub(&CMat::diag_real(&[0.0, 2.0f64.sqrt()]))) < 1e-12);

        let id = CMat::identity(3);
        assert!(spectral_norm(&psd_sqrt(&id, TOL_PSD).unwrap().sub(&id)) < 1e-12);

        let neg = CMat::diag_real(&[1.0, -0.5]);
        assert!(matches!(psd_sqrt(&neg, TOL_PSD), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn psd_sqrt_squares_back_and_fixes_projections() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for dim in 1..=6 {
            let m = random_cmat(dim, &mut rng);
            let p = adjoint(&m).matmul(&m);
            let s = psd_sqrt(&p, TOL_PSD).unwrap();
            let scale = spectral_norm(&p).max(1e-12);
            assert!(spectral_norm(&s.matmul(&s).sub(&p)) <= 1e-9 * scale);
        }
        // Projection: P^2 = P implies sqrt(P) = P.
        let proj = CMat::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap();
        let s = psd_sqrt(&proj, TOL_PSD).unwrap();
        assert!(spectral_norm(&s.sub(&proj)) < 1e-10);
    }

    #[test]
    fn polar_examples() {
        // Positive diagonal: isometry is the identity on the range.
        let d = CMat::diag_real(&[3.0, 1.0]);
        let parts = polar(&d);
        assert!(spectral_norm(&parts.modulus.sub(&d)) < 1e-12);
        assert!(spectral_norm(&parts.isometry.sub(&CMat::identity(2))) < 1e-12);

        // [[0,2],[0,0]]: modulus diag(0,2); isometry maps e2 -> e1, e1 -> 0.
        let n = CMat::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap();
        let parts = polar(&n);
        assert!(spectral_norm(&parts.modulus.sub(&CMat::diag_real(&[0.0, 2.0]))) < 1e-12);
        let expect = CMat::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(spectral_norm(&parts.isometry.sub(&expect)) < 1e-12);

        // Unitary input: modulus is the identity.
        let c = std::f64::consts::FRAC_1_SQRT_2;
        let u = CMat::from_real_rows(&[&[c, -c], &[c, c]]).unwrap();
        let parts = polar(&u);
        assert!(spectral_norm(&parts.modulus.sub(&CMat::identity(2))) < 1e-11);
        assert!(spectral_norm(&parts.isometry.sub(&u)) < 1e-11);
    }

    #[test]
    fn polar_reconstructs_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for dim in 1..=8 {
            let m = random_cmat(dim, &mut rng);
            let parts = polar(&m);
            let scale = spectral_norm(&m).max(1e-12);
            let rec = parts.isometry.matmul(&parts.modulus);
            assert!(
                spectral_norm(&rec.sub(&m)) <= 1e-9 * scale,
                "reconstruction failed at dim {dim}"
            );
            // Modulus Hermitian PSD.
            let eig = herm_eig(&parts.modulus, 1e-8).unwrap();
            assert!(eig.min() >= -1e-10 * scale);
            // Partial isometry on the range of the modulus: W*W acts as
            // identity there.
            let wtw = adjoint(&parts.isometry).matmul(&parts.isometry);
            let diff = wtw.matmul(&parts.modulus).sub(&parts.modulus);
            assert!(spectral_norm(&diff) <= 1e-9 * scale);
        }
    }

    #[test]
    fn inverse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for dim in 1..=6 {
            let m = random_cmat(dim, &mut rng).shift(C64::new(3.0, 0.0));
            let inv = inverse(&m).unwrap();
            let err = spectral_norm(&m.matmul(&inv).sub(&CMat::identity(dim)));
            assert!(err < 1e-10, "dim {dim}: {err}");
        }
        let singular = CMat::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap();
        assert!(inverse(&singular).is_err());
    }

    #[test]
    fn eigenvalues_of_small_matrices() {
        let t = CMat::from_real_rows(&[&[2.0, 1.0], &[0.0, 1.0]]).unwrap();
        let ev = eigenvalues(&t);
        assert!((ev[0] - C64::new(1.0, 0.0)).norm() < 1e-10);
        assert!((ev[1] - C64::new(2.0, 0.0)).norm() < 1e-10);

        let rot = CMat::from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]).unwrap();
        let ev = eigenvalues(&rot);
        assert!((ev[0] - C64::new(0.0, -1.0)).norm() < 1e-10);
        assert!((ev[1] - C64::new(0.0, 1.0)).norm() < 1e-10);
    }

    #[test]
    fn eigenvalues_match_diagonal_of_triangular() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for dim in 2..=6 {
            let mut t = random_cmat(dim, &mut rng);
            for i in 0..dim {
                for j in 0..i {
                    t.set(i, j, C64::new(0.0, 0.0));
                }
            }
            let mut want: Vec<C64> = (0..dim).map(|i| t.at(i, i)).collect();
            want.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
            let got = eigenvalues(&t);
            for (w, g) in want.iter().zip(&got) {
                assert!((w - g).norm() < 1e-7, "dim {dim}: {want:?} vs {got:?}");
            }
        }
    }

    #[test]
    fn svd_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for dim in 1..=8 {
            let m = random_cmat(dim, &mut rng);
            let dec = svd(&m);
            let mut rec = CMat::zeros(dim);
            for k in 0..dim {
                let u = dec.u.column(k);
                let v = dec.v.column(k);
                for i in 0..dim {
                    for j in 0..dim {
                        let add = u.entries()[i] * v.entries()[j].conj()
                            * C64::new(dec.s[k], 0.0);
                        let val = rec.at(i, j) + add;
                        rec.set(i, j, val);
                    }
                }
            }
            let scale = dec.s[0].max(1e-12);
            assert!(spectral_norm(&rec.sub(&m)) <= 1e-9 * scale, "dim {dim}");
        }
    }
}
