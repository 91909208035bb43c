//! Documented-discrepancy regressions.
//!
//! Several reference values shipped with the source material fail their own
//! oracles. Rather than inheriting them, the toolkit recomputes each quantity
//! live and records reference and recomputed values side by side. A finding
//! with `discrepant = true` is a *confirmed* disagreement; the
//! `expected_discrepant` flag pins which way each regression is supposed to
//! come out, so the log itself is testable.

use serde::{Deserialize, Serialize};

use crate::bounds::{self, BoundCfg};
use crate::matcore::{CMat, C64};
use crate::qrange::{self, Closed2x2, QParam};
use crate::radii;
use crate::structure::{self, ConjugationSpec};
use crate::Result;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Finding {
    pub id: String,
    pub summary: String,
    pub values: Vec<(String, f64)>,
    /// Recomputed value disagrees with the reference value.
    pub discrepant: bool,
    /// How this regression is supposed to come out.
    pub expected_discrepant: bool,
}

impl Finding {
    pub fn as_expected(&self) -> bool {
        self.discrepant == self.expected_discrepant
    }

    pub fn value(&self, key: &str) -> Option<f64> {
        self.values.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }
}

fn shear() -> CMat {
    CMat::from_real_rows(&[&[2.0, 1.0], &[0.0, 1.0]]).unwrap()
}

/// Reference radius table for the `[[2,1],[0,1]]` example, q = 0, 0.2, ..., 1.
pub const SHEAR_REFERENCE_OMEGA: [f64; 6] = [1.581, 1.732, 1.887, 2.045, 2.207, 2.414];
pub const SHEAR_REFERENCE_W: f64 = 2.414;
pub const SHEAR_REFERENCE_M: f64 = 0.707;

/// The full discrepancy log, recomputed live.
pub fn documented_discrepancies(restarts: usize, seed: u64) -> Result<Vec<Finding>> {
    let mut out = Vec::new();
    let t = shear();

    // Numerical radius of the shear: ellipse value 3/2 + sqrt(2)/2, not the
    // reference 2.414.
    let w = radii::numerical_radius(&t).value;
    out.push(Finding {
        id: "numerical_radius_2x2_shear".into(),
        summary: "w([[2,1],[0,1]]) recomputed against the reference value".into(),
        values: vec![
            ("reference".into(), SHEAR_REFERENCE_W),
            ("recomputed".into(), w),
            ("ellipse_value".into(), 1.5 + std::f64::consts::FRAC_1_SQRT_2),
        ],
        discrepant: (w - SHEAR_REFERENCE_W).abs() > 1e-3,
        expected_discrepant: true,
    });

    // Transcendental radius of the shear: (1 + sqrt(2))/2, not 0.707.
    let m = radii::transcendental_radius(&t).value;
    out.push(Finding {
        id: "transcendental_radius_2x2_shear".into(),
        summary: "m([[2,1],[0,1]]) recomputed against the reference value".into(),
        values: vec![("reference".into(), SHEAR_REFERENCE_M), ("recomputed".into(), m)],
        discrepant: (m - SHEAR_REFERENCE_M).abs() > 1e-3,
        expected_discrepant: true,
    });

    // Anticommutator bound at A = B = I, q = 1: the stated coefficient gives
    // 1 < omega = 2 while the proved coefficient gives exactly 2.
    let id2 = CMat::identity(2);
    let cfg = BoundCfg { restarts, seed, ..BoundCfg::default() };
    let (stated, proved) = bounds::eval_thm_q3(&id2, &id2, 1.0, &cfg)?;
    out.push(Finding {
        id: "anticommutator_bound_identity".into(),
        summary: "stated vs proved anticommutator coefficient at A = B = I, q = 1".into(),
        values: vec![
            ("omega".into(), stated.omega_est),
            ("stated_rhs".into(), stated.rhs),
            ("stated_slack".into(), stated.slack),
            ("proved_rhs".into(), proved.rhs),
            ("proved_slack".into(), proved.slack),
        ],
        discrepant: !stated.holds && proved.holds,
        expected_discrepant: true,
    });

    // Radius table for the shear on the reference q grid.
    let mut values = Vec::new();
    let mut any_off = false;
    for (i, &reference) in SHEAR_REFERENCE_OMEGA.iter().enumerate() {
        let q = 0.2 * i as f64;
        let est = qrange::omega_q(&t, q, restarts, seed ^ (i as u64 + 1))?;
        values.push((format!("q_{q:.1}_reference"), reference));
        values.push((format!("q_{q:.1}_recomputed"), est.value));
        if (est.value - reference).abs() > 1e-2 {
            any_off = true;
        }
    }
    out.push(Finding {
        id: "shear_radius_table".into(),
        summary: "omega_q([[2,1],[0,1]]) table recomputed on the reference grid".into(),
        values,
        discrepant: any_off,
        expected_discrepant: true,
    });

    // The equal-diagonal closed form tracks the sampler at q = 1 but not
    // below it.
    let closed_q1 = match qrange::omega_q_2x2_closed(&t, 1.0)? {
        Closed2x2::ReducedForm(v) => v,
        other => panic!("shear reduces to equal-diagonal form, got {other:?}"),
    };
    let closed_half = match qrange::omega_q_2x2_closed(&t, 0.5)? {
        Closed2x2::ReducedForm(v) => v,
        other => panic!("shear reduces to equal-diagonal form, got {other:?}"),
    };
    let sampled_half = qrange::omega_q(&t, 0.5, restarts, seed ^ 0x77)?.value;
    out.push(Finding {
        id: "reduced_form_closed_radius".into(),
        summary: "equal-diagonal closed form vs sampler for the shear".into(),
        values: vec![
            ("closed_q1".into(), closed_q1),
            ("w".into(), w),
            ("closed_q0.5".into(), closed_half),
            ("sampled_q0.5".into(), sampled_half),
        ],
        discrepant: (closed_half - sampled_half).abs() > 1e-3,
        expected_discrepant: true,
    });

    // Swap-conjugation fixture: the reference verification claims
    // [[1, i], [i, -1]] is complex symmetric for the coordinate-swap
    // conjugation; the residual is 2. The standard conjugation works.
    let sym = CMat::from_rows(&[
        vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0)],
        vec![C64::new(0.0, 1.0), C64::new(-1.0, 0.0)],
    ])
    .unwrap();
    let swap_res = structure::complex_symmetry_residual(&sym, &ConjugationSpec::swap(2));
    let std_res = structure::complex_symmetry_residual(&sym, &ConjugationSpec::standard(2));
    out.push(Finding {
        id: "swap_conjugation_fixture".into(),
        summary: "conjugation choice for the [[1,i],[i,-1]] fixture".into(),
        values: vec![
            ("swap_residual".into(), swap_res),
            ("standard_residual".into(), std_res),
        ],
        discrepant: swap_res > 1e-8 && std_res <= 1e-8,
        expected_discrepant: true,
    });

    // Block bound at small q: the diagonal-block step
    // omega_q(A + D) <= max(omega_q(A), omega_q(D)) fails away from q = 1.
    // At q = 0, omega_0(diag(2,2)) = omega_0(diag(1,1)) = 0 while
    // omega_0(diag(2,2,1,1)) = m = 1/2.
    let a_blk = CMat::diag_real(&[2.0, 2.0]);
    let d_blk = CMat::diag_real(&[1.0, 1.0]);
    let z_blk = CMat::zeros(2);
    let q4 = bounds::eval_thm_q4(&a_blk, &z_blk, &z_blk, &d_blk, 0.0, &cfg)?;
    out.push(Finding {
        id: "block_bound_small_q".into(),
        summary: "block-diagonal step of the block bound fails at q = 0".into(),
        values: vec![
            ("rhs".into(), q4.rhs),
            ("omega_est".into(), q4.omega_est),
            ("slack".into(), q4.slack),
        ],
        discrepant: !q4.holds,
        expected_discrepant: true,
    });

    // Positive spectrum at small q: the claim that the origin stays outside
    // W_q fails once q drops below the spectral spread; at q = 0 the
    // spectral inclusion already forces 0 into W_0.
    let pos = CMat::diag_real(&[2.0, 0.2]);
    let small_q = QParam::real(0.1)?;
    let tbl_small = qrange::support_table(&pos, small_q, 90, restarts.max(16), seed ^ 0x99);
    let margin_small = tbl_small.iter().copied().fold(f64::INFINITY, f64::min);
    let tbl_one = qrange::support_table(&pos, QParam::real(1.0)?, 90, restarts.max(16), seed ^ 0x9a);
    let margin_one = tbl_one.iter().copied().fold(f64::INFINITY, f64::min);
    out.push(Finding {
        id: "positive_spectrum_origin_small_q".into(),
        summary: "origin enters W_q of a positive-spectrum matrix at small q".into(),
        values: vec![
            ("margin_q_0.1".into(), margin_small),
            ("margin_q_1".into(), margin_one),
        ],
        discrepant: margin_small >= -1e-8 && margin_one < -1e-8,
        expected_discrepant: true,
    });

    // Self-adjoint interval claim: for q < 1 the free phase of the
    // orthogonal component gives the range of diag(2,1) an imaginary extent
    // of sqrt(1-q^2) m(T), so the interval form of the similarity theorem
    // only survives at q = 1.
    let diag21 = CMat::diag_real(&[2.0, 1.0]);
    let r3 = structure::check_thm3(&diag21, &CMat::identity(2), 0.5, 64, 16, seed)?;
    let imag = r3.metrics.iter().find(|(k, _)| k == "imag_extent").unwrap().1;
    out.push(Finding {
        id: "selfadjoint_interval_claim".into(),
        summary: "W_q of a self-adjoint matrix is two-dimensional for q < 1".into(),
        values: vec![
            ("imag_extent_q_0.5".into(), imag),
            ("expected_extent".into(), 3.0f64.sqrt() / 4.0),
        ],
        discrepant: imag > 1e-3,
        expected_discrepant: true,
    });

    // Candidate similarity counterexample diag(i, -i): with X = I the
    // similarity premise fails; with X = swap the origin enters W_q(X^-1).
    let ti = CMat::diag(&[C64::new(0.0, 1.0), C64::new(0.0, -1.0)]);
    let r_id = structure::check_thm3(&ti, &CMat::identity(2), 0.5, 64, 16, seed)?;
    let swap_mat = CMat::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
    let r_swap = structure::check_thm3(&ti, &swap_mat, 0.5, 64, 16, seed)?;
    let res_id = r_id
        .metrics
        .iter()
        .find(|(k, _)| k == "similarity_residual")
        .unwrap()
        .1;
    let margin_swap = r_swap.metrics.iter().find(|(k, _)| k == "xinv_margin").unwrap().1;
    out.push(Finding {
        id: "similarity_counterexample_premises".into(),
        summary: "diag(i,-i) candidate counterexample never satisfies all premises".into(),
        values: vec![
            ("identity_similarity_residual".into(), res_id),
            ("swap_xinv_margin".into(), margin_swap),
        ],
        discrepant: !r_id.premises_ok && !r_swap.premises_ok,
        expected_discrepant: true,
    });

    Ok(out)
}

/// Worked-example regressions that are supposed to come out clean: the
/// diag(2, 1) radius/bound fixture.
pub fn fixture_regressions(restarts: usize, seed: u64) -> Result<Vec<Finding>> {
    let t = CMat::diag_real(&[2.0, 1.0]);
    let qs = bounds::quantities(&t);
    let mut out = Vec::new();

    let mut values = vec![
        ("norm".into(), qs.norm),
        ("sum_norm".into(), qs.sum_norm),
        ("sigma_min_sq".into(), qs.sigma_min * qs.sigma_min),
    ];
    let mut off = (qs.norm - 2.0).abs() > 1e-9
        || (qs.sum_norm - 8.0).abs() > 1e-9
        || (qs.sigma_min * qs.sigma_min - 1.0).abs() > 1e-9;
    for (i, q) in [0.0, 0.25, 0.5, 0.75, 1.0].into_iter().enumerate() {
        let est = qrange::omega_q(&t, q, restarts, seed ^ (i as u64 + 11))?;
        let expect = 1.5 * q + 0.5;
        values.push((format!("omega_q_{q:.2}"), est.value));
        values.push((format!("omega_q_{q:.2}_expected"), expect));
        if (est.value - expect).abs() > 1e-5 {
            off = true;
        }
    }
    let cfg = BoundCfg { restarts, seed, ..BoundCfg::default() };
    for (q, expect) in [(0.0, 3.0), (0.5, 4.982), (1.0, 4.0)] {
        let r = bounds::eval_thm_q1(&t, q, &cfg)?;
        values.push((format!("quad_rhs_q_{q:.1}"), r.rhs));
        if (r.rhs - expect).abs() > 1e-3 {
            off = true;
        }
        if q == 1.0 && r.slack.abs() > 1e-6 {
            off = true;
        }
    }
    out.push(Finding {
        id: "diag_2_1_fixture".into(),
        summary: "diag(2,1) norms, radius formula and quadratic bound values".into(),
        values,
        discrepant: off,
        expected_discrepant: false,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discrepancy_log_comes_out_as_expected() {
        let findings = documented_discrepancies(32, 3).unwrap();
        assert!(findings.len() >= 6);
        for f in &findings {
            assert!(f.as_expected(), "finding {} flipped: {:?}", f.id, f.values);
        }

        let w = findings
            .iter()
            .find(|f| f.id == "numerical_radius_2x2_shear")
            .unwrap();
        let rec = w.value("recomputed").unwrap();
        assert!((rec - (1.5 + std::f64::consts::FRAC_1_SQRT_2)).abs() < 1e-6);

        let anti = findings
            .iter()
            .find(|f| f.id == "anticommutator_bound_identity")
            .unwrap();
        assert!((anti.value("stated_rhs").unwrap() - 1.0).abs() < 1e-9);
        assert!((anti.value("proved_rhs").unwrap() - 2.0).abs() < 1e-9);
        assert!((anti.value("omega").unwrap() - 2.0).abs() < 1e-5);
    }

    #[test]
    fn fixtures_come_out_clean() {
        let fixtures = fixture_regressions(32, 5).unwrap();
        for f in &fixtures {
            assert!(f.as_expected(), "fixture {} failed: {:?}", f.id, f.values);
        }
    }
}
