mod common;

use plapt::distribution::{cdf, pdf, quantile, tail_quantile, PlAptParams};
use plapt::extremes::{
    a_function, c_alpha_beta, double_hill_components, evi_asymptotic_test, extremal_quantile, Weight, WeightSpec,
};
use plapt::special::{lambert_w, LambertBranch, INV_E};
use plapt::Sample;
use proptest::prelude::*;

fn alpha_strategy() -> impl Strategy<Value = f64> {
    (-2.0..1.5f64).prop_map(|e| 10f64.powf(e))
}

fn alpha_not_one() -> impl Strategy<Value = f64> {
    alpha_strategy().prop_filter("alpha away from 1", |a| (a - 1.0).abs() > 1e-3)
}

fn params_strategy() -> impl Strategy<Value = PlAptParams> {
    (alpha_strategy(), 1.0001..20.0f64, 0.01..20.0f64).prop_map(|(a, b, t)| PlAptParams::new(a, b, t).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn scale_law(p in params_strategy(), u in 0.0..0.999_999f64, c in 0.05..20.0f64) {
        let scaled = p.with_theta(p.theta() * c).unwrap();
        let a = quantile(&scaled, u).unwrap();
        let b = quantile(&p, u).unwrap() / c;
        prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(f64::MIN_POSITIVE));
    }

    #[test]
    fn roundtrip(p in params_strategy(), u in 1e-9..0.999_999_9f64) {
        let x = quantile(&p, u).unwrap();
        prop_assert!((cdf(&p, x) - u).abs() <= 1e-10);
    }

    #[test]
    fn tail_roundtrip(p in params_strategy(), e in 1.0..250.0f64) {
        let v = 10f64.powf(-e);
        let x = tail_quantile(&p, v).unwrap();
        let survival = plapt::distribution::reliability(&p, x);
        prop_assert!((survival / v - 1.0).abs() <= 1e-9, "v = {v:e}, S = {survival:e}");
    }

    #[test]
    fn cdf_is_monotone_and_pdf_nonnegative(p in params_strategy(), x in 0.0..50.0f64, dx in 1e-6..5.0f64) {
        prop_assert!(cdf(&p, x) <= cdf(&p, x + dx));
        prop_assert!(pdf(&p, x) >= 0.0);
        let g = cdf(&p, x);
        prop_assert!((0.0..=1.0).contains(&g));
    }

    #[test]
    fn continuous_in_alpha(beta in 1.01..10.0f64, theta in 0.05..10.0f64, x in 0.0..20.0f64, d in 1e-7..1e-5f64) {
        let near = PlAptParams::new(1.0 + d, beta, theta).unwrap();
        let one = PlAptParams::pseudo_lindley(beta, theta).unwrap();
        prop_assert!((cdf(&near, x) - cdf(&one, x)).abs() <= 1e-4);
        prop_assert!((pdf(&near, x) - pdf(&one, x)).abs() <= 1e-4 * pdf(&one, x).max(1.0));
    }

    #[test]
    fn lambert_lower_branch_identity(e in -300.0..0.0f64) {
        let z = -INV_E * 10f64.powf(e);
        let w = lambert_w(LambertBranch::NegativeOne, z).unwrap();
        prop_assert!(w <= -1.0);
        prop_assert!((w * w.exp() - z).abs() <= 1e-13 * z.abs());
    }

    #[test]
    fn c_alpha_beta_negative(alpha in alpha_not_one(), beta in 1.0001..50.0f64) {
        prop_assert!(c_alpha_beta(alpha, beta).unwrap() < 0.0);
    }

    #[test]
    fn a_function_in_open_interval(alpha in alpha_not_one(), beta in 1.0001..20.0f64, u in 1e-12..0.999_999f64) {
        let p = PlAptParams::new(alpha, beta, 1.0).unwrap();
        let a = a_function(&p, u).unwrap();
        prop_assert!(a > -INV_E && a < 0.0);
    }

    #[test]
    fn expansion_terms_are_ordered(alpha in alpha_not_one(), beta in 1.01..10.0f64, theta in 0.1..10.0f64, e in 4.5..12.0f64) {
        let p = PlAptParams::new(alpha, beta, theta).unwrap();
        let t = extremal_quantile(&p, 10f64.powf(-e)).unwrap();
        prop_assert!(t.log_term > t.log_log_term);
        prop_assert!(t.log_log_term > t.inverse_log_term.abs());
    }

    #[test]
    fn estimate_as_target_gives_zero_statistic(
        values in prop::collection::vec(0.01..1e3f64, 10..200),
        tau in -0.5..2.0f64,
        s in 0.5..3.0f64,
        frac in 0.05..0.95f64,
    ) {
        let data = Sample::new(values).unwrap();
        let k = ((data.len() - 1) as f64 * frac).max(1.0) as usize;
        let w = WeightSpec { weight: Weight::Power { tau }, s };
        if let Ok(r) = double_hill_components(&data, &w, k) {
            let t = evi_asymptotic_test(&data, &w, k, r.m_n).unwrap();
            prop_assert!(t.z_stat.abs() <= 1e-10);
            prop_assert!(t.ci_low <= r.m_n && r.m_n <= t.ci_high);
        }
    }
}
