//! Property tests over random matrices: the kernel contracts and the
//! structural invariants that hold for every input.

use proptest::prelude::*;

use qrange_core::matcore::{adjoint, herm_eig, polar, psd_sqrt, sigma_min, spectral_norm, CMat,
    C64};
use qrange_core::qrange::{self, QParam};
use qrange_core::radii;
use qrange_core::structure;

fn cmat_strategy(dim: usize) -> impl Strategy<Value = CMat> {
    proptest::collection::vec((-3.0..3.0f64, -3.0..3.0f64), dim * dim).prop_map(move |parts| {
        CMat::new(dim, parts.into_iter().map(|(re, im)| C64::new(re, im)).collect()).unwrap()
    })
}

fn any_small_cmat() -> impl Strategy<Value = CMat> {
    (1usize..=5).prop_flat_map(cmat_strategy)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn adjoint_involution_and_norm(t in any_small_cmat()) {
        prop_assert_eq!(adjoint(&adjoint(&t)), t.clone());
        let a = spectral_norm(&t);
        let b = spectral_norm(&adjoint(&t));
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
        prop_assert!(sigma_min(&t) <= a + 1e-12);
    }

    #[test]
    fn polar_and_sqrt_reconstruct(t in any_small_cmat()) {
        let scale = spectral_norm(&t).max(1e-12);
        let parts = polar(&t);
        let rec = parts.isometry.matmul(&parts.modulus);
        prop_assert!(spectral_norm(&rec.sub(&t)) <= 1e-9 * scale);

        let p = adjoint(&t).matmul(&t);
        let s = psd_sqrt(&p, 1e-10).unwrap();
        prop_assert!(spectral_norm(&s.matmul(&s).sub(&p)) <= 1e-9 * scale * scale);
    }

    #[test]
    fn hermitian_eig_residuals(t in any_small_cmat()) {
        let h = t.add(&adjoint(&t)).scaled(C64::new(0.5, 0.0));
        let eig = herm_eig(&h, 1e-8).unwrap();
        let scale = spectral_norm(&h).max(1e-12);
        for (l, v) in eig.pairs() {
            let r = h.apply(v).sub(&v.scaled(C64::new(l, 0.0)));
            prop_assert!(r.norm() <= 1e-9 * scale);
        }
        // Ascending order.
        for w in eig.values.windows(2) {
            prop_assert!(w[0] <= w[1] + 1e-15);
        }
    }

    #[test]
    fn radius_norm_equivalence(t in any_small_cmat()) {
        let w = radii::numerical_radius(&t).value;
        let n = spectral_norm(&t);
        prop_assert!(w <= n + 1e-9 * n.max(1.0));
        prop_assert!(n <= 2.0 * w + 1e-9 * n.max(1.0));
    }

    #[test]
    fn aluthge_contracts_norm(t in any_small_cmat()) {
        let tilde = structure::aluthge(&t);
        prop_assert!(spectral_norm(&tilde) <= spectral_norm(&t) + 1e-9);
    }

    #[test]
    fn admissible_pairs_satisfy_constraints(
        seed in 0u64..1000,
        dim in 2usize..=6,
        q_re in 0.0..1.0f64,
    ) {
        let q = QParam::real(q_re).unwrap();
        let pair = qrange::sample_pair(q, seed, dim).unwrap();
        prop_assert!(pair.constraint_residual() <= 1e-10);
    }
}

proptest! {
    // Optimizer-backed properties are slower; keep the case count low.
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn omega_respects_norm_sandwich(t in cmat_strategy(3), q in 0.05..1.0f64) {
        let norm = spectral_norm(&t);
        prop_assume!(norm > 1e-6);
        let est = qrange::omega_q(&t, q, 32, 7).unwrap().value;
        prop_assert!(est <= norm + 1e-9 * norm);
        let lower = q / (2.0 * (2.0 - q * q)) * norm;
        prop_assert!(est >= lower - 1e-6 * norm);
    }

    #[test]
    fn cloud_stays_inside_envelope(t in cmat_strategy(3)) {
        let q = QParam::real(0.5).unwrap();
        let params = qrange::RangeParams { n_theta: 64, n_samples: 48, restarts: 12, seed: 3 };
        let range = qrange::range_cloud(&t, q, &params).unwrap();
        prop_assert!(range.max_cloud_violation() <= 1e-8);
        let scale = spectral_norm(&t).max(1.0);
        prop_assert!(range.hull_convexity_defect() <= 1e-7 * scale * scale);
    }
}
