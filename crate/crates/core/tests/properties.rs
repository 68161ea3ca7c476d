use proptest::prelude::*;

use rex_core::bounds::{estimate_rank, rex_bound, rex_bound_sq_real, RangeFlag};
use rex_core::inference::{
    overall_significance_test, posi_bound, rex_confidence_interval, CountMode,
};
use rex_core::sampling::SampleMatrix;
use rex_core::special::{chi_cdf, chi_quantile, reg_inc_beta};

proptest! {
    #[test]
    fn chi_quantile_inverts_cdf(d in 1u64..=50, q in 0.01f64..=0.99) {
        let x = chi_quantile(q, d).unwrap();
        prop_assert!((chi_cdf(x, d).unwrap() - q).abs() <= 1e-8);
    }

    #[test]
    fn beta_symmetry(x in 0.0f64..=1.0, a in 0.1f64..20.0, b in 0.1f64..20.0) {
        let lhs = reg_inc_beta(x, a, b).unwrap();
        let rhs = 1.0 - reg_inc_beta(1.0 - x, b, a).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10);
    }

    #[test]
    fn rank_round_trip(p in prop::sample::select(vec![10u64, 100, 3000, 15000]), d in 2u64..=500) {
        let est = estimate_rank(rex_bound_sq_real(p, d as f64), p).unwrap();
        if d <= 10 * p {
            prop_assert!((est.d_real - d as f64).abs() <= 1e-6);
            prop_assert_eq!(est.flag, RangeFlag::Interior);
        } else {
            // beyond the search range [1, 10p]
            prop_assert_eq!(est.flag, RangeFlag::AboveRange);
            prop_assert_eq!(est.d_real, (10 * p) as f64);
        }
    }

    #[test]
    fn rex_bound_below_classical_rate(p in 100u64..100_000, frac in 0.0f64..=1.0) {
        let d = 1 + (frac * (10 * p - 1) as f64) as u64;
        let b = rex_bound(p, d).unwrap();
        prop_assert!(b * b <= d as f64 + 1e-12);
        prop_assert!(b <= (2.0 * (p as f64).ln()).sqrt() * 1.01);
    }

    #[test]
    fn interval_nesting(ks in prop::collection::vec(0.0f64..7.0, 1..40), a1 in 0.001f64..0.9, a2 in 0.001f64..0.9) {
        let (lo, hi) = if a1 <= a2 { (a1, a2) } else { (a2, a1) };
        let wide = rex_confidence_interval(&ks, 3000, lo).unwrap();
        let narrow = rex_confidence_interval(&ks, 3000, hi).unwrap();
        prop_assert!(wide.d_l <= narrow.d_l && narrow.d_u <= wide.d_u);
        prop_assert!(1.0 <= wide.d_l && wide.d_l <= wide.d_u);
    }

    #[test]
    fn interval_monotone_in_extremes(
        ks in prop::collection::vec(0.0f64..7.0, 1..40),
        bumps in prop::collection::vec(0.0f64..1.0, 40),
    ) {
        let raised: Vec<f64> = ks.iter().zip(&bumps).map(|(k, b)| k + b).collect();
        let base = rex_confidence_interval(&ks, 15000, 0.05).unwrap();
        let up = rex_confidence_interval(&raised, 15000, 0.05).unwrap();
        prop_assert!(up.d_l >= base.d_l && up.d_u >= base.d_u);
    }

    #[test]
    fn significance_scale_invariant(
        values in prop::collection::vec(-5.0f64..5.0, 60),
        response in prop::collection::vec(-5.0f64..5.0, 10),
        col in 0usize..6,
        scale in prop_oneof![-100.0f64..-0.01, 0.01f64..100.0],
        rscale in prop_oneof![-100.0f64..-0.01, 0.01f64..100.0],
    ) {
        let (n, p) = (10, 6);
        let design = SampleMatrix::new(n, p, values.clone()).unwrap();
        let base = overall_significance_test(&design, &response, 0.05);
        prop_assume!(base.is_ok());
        let base = base.unwrap();
        let scaled: Vec<f64> = values
            .iter()
            .enumerate()
            .map(|(i, v)| if i % p == col { v * scale } else { *v })
            .collect();
        let resp: Vec<f64> = response.iter().map(|v| v * rscale).collect();
        let other = overall_significance_test(&SampleMatrix::new(n, p, scaled).unwrap(), &resp, 0.05).unwrap();
        prop_assert!((base.max_abs_corr - other.max_abs_corr).abs() <= 1e-12);
        prop_assert_eq!(base.reject, other.reject);
        prop_assert_eq!(base.argmax_index, other.argmax_index);
    }

    #[test]
    fn posi_monotone_in_submodel_size(p in 2u64..300, m in 1u64..300) {
        let m = 1 + m % p;
        let a = posi_bound(p, m, CountMode::ExactCount).unwrap();
        prop_assert!(a.bound <= (p as f64).sqrt());
        if m < p {
            let b = posi_bound(p, m + 1, CountMode::ExactCount).unwrap();
            prop_assert!(b.bound >= a.bound * (1.0 - 1e-12));
        }
    }
}
