mod common;

use common::{integrate, params, reference_triples};
use plapt::distribution::{
    cdf, hazard, lindley_cdf, median_order_stat_pdf, order_stat_pdf, pdf, pseudo_lindley_pdf, quantile, reliability,
    sample, sample_unsorted, OrderStatSpec,
};
use statrs::distribution::{Beta, ContinuousCDF};

#[test]
fn pdf_integrates_to_cdf() {
    for p in reference_triples() {
        for u in [0.1, 0.5, 0.9, 0.999] {
            let x = quantile(&p, u).unwrap();
            let area = integrate(|t| pdf(&p, t), 0.0, x, 1e-13);
            assert!((area - u).abs() < 1e-9, "{p:?} u = {u}: {area}");
        }
    }
}

#[test]
fn pdf_has_unit_mass() {
    for p in reference_triples() {
        let upper = quantile(&p, 1.0 - 1e-15).unwrap();
        let mass = integrate(|t| pdf(&p, t), 0.0, upper, 1e-13);
        assert!((mass - 1.0).abs() < 1e-9, "{p:?}: {mass}");
    }
}

#[test]
fn lindley_mean_by_quadrature() {
    // Lindley mean is (theta + 2) / (theta (theta + 1)).
    let theta = 1.7;
    let p = plapt::PlAptParams::lindley(theta).unwrap();
    let upper = quantile(&p, 1.0 - 1e-16).unwrap();
    let mean = integrate(|t| t * pdf(&p, t), 0.0, upper, 1e-13);
    assert!((mean - (theta + 2.0) / (theta * (theta + 1.0))).abs() < 1e-9);
    assert!((cdf(&p, 1.3) - lindley_cdf(theta, 1.3)).abs() < 1e-15);
}

#[test]
fn alpha_one_reduces_to_pseudo_lindley() {
    let p = params(1.0, 2.2, 0.8);
    for x in [0.0, 0.3, 1.0, 4.0] {
        assert!((pdf(&p, x) - pseudo_lindley_pdf(2.2, 0.8, x)).abs() < 1e-15);
    }
}

#[test]
fn cdf_example_value() {
    // alpha = 2, beta = 2, theta = 1, x = 1: S = 1.5/e, F = 1 - S, G = 2^F - 1.
    let p = params(2.0, 2.0, 1.0);
    let f = 1.0 - 1.5 * (-1.0_f64).exp();
    assert!((cdf(&p, 1.0) - (2f64.powf(f) - 1.0)).abs() < 1e-15);
    assert!((reliability(&p, 1.0) - (2.0 - 2f64.powf(f))).abs() < 1e-15);
}

#[test]
fn hazard_is_pdf_over_reliability() {
    for p in reference_triples() {
        for u in [0.05, 0.5, 0.95] {
            let x = quantile(&p, u).unwrap();
            let direct = pdf(&p, x) / reliability(&p, x);
            assert!((hazard(&p, x).unwrap() / direct - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn hazard_stays_finite_far_in_the_tail() {
    let p = params(2.0, 2.5, 0.6);
    // Reliability underflows long before the hazard approaches theta.
    let h = hazard(&p, 2000.0).unwrap();
    assert!((h - 0.6).abs() < 1e-2);
}

fn ks_uniform(mut u: Vec<f64>) -> f64 {
    u.sort_by(f64::total_cmp);
    let m = u.len() as f64;
    u.iter().enumerate().fold(0.0_f64, |d, (i, &v)| {
        d.max((i as f64 + 1.0) / m - v).max(v - i as f64 / m)
    })
}

#[test]
fn samples_pass_kolmogorov_smirnov() {
    // 1% critical value of the KS statistic is about 1.628 / sqrt(m).
    let m = 20_000;
    for (i, p) in reference_triples().iter().enumerate() {
        let data = sample_unsorted(p, m, 100 + i as u64, 0).unwrap();
        let d = ks_uniform(data.iter().map(|&x| cdf(p, x)).collect());
        assert!(d < 1.628 / (m as f64).sqrt(), "{p:?}: D = {d}");
    }
}

#[test]
fn order_statistic_pdf_integrates_to_beta_cdf() {
    let p = params(0.5, 1.1, 0.6);
    for (n, k) in [(5, 1), (5, 3), (9, 9), (40, 12)] {
        let spec = OrderStatSpec::new(n, k).unwrap();
        let beta = Beta::new(k as f64, (n - k + 1) as f64).unwrap();
        for u in [0.2, 0.6, 0.95] {
            let x = quantile(&p, u).unwrap();
            let area = integrate(|t| order_stat_pdf(&p, spec, t), 0.0, x, 1e-13);
            assert!((area - beta.cdf(u)).abs() < 1e-8, "n = {n}, k = {k}, u = {u}");
        }
    }
}

#[test]
fn median_density_matches_order_statistic() {
    let p = params(2.0, 2.5, 0.6);
    let spec = OrderStatSpec::new(7, 4).unwrap();
    for x in [0.5, 1.0, 3.0] {
        assert_eq!(median_order_stat_pdf(&p, 3, x).unwrap(), order_stat_pdf(&p, spec, x));
    }
    assert!(median_order_stat_pdf(&p, 0, 1.0).is_err());
}

#[test]
fn simulated_order_statistics_pass_chi_square() {
    // P(X_(k) <= x) = I_G(x)(k, n - k + 1); the transformed draws are uniform.
    let p = params(1.5, 1.5, 3.0);
    let (n, k) = (7usize, 3usize);
    let beta = Beta::new(k as f64, (n - k + 1) as f64).unwrap();
    let reps = 10_000;
    let bins = 10;
    let mut counts = vec![0usize; bins];
    for r in 0..reps {
        let mut draws = sample_unsorted(&p, n, 77, r as u64).unwrap();
        draws.sort_by(f64::total_cmp);
        let v = beta.cdf(cdf(&p, draws[k - 1]));
        counts[((v * bins as f64) as usize).min(bins - 1)] += 1;
    }
    let expected = reps as f64 / bins as f64;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    // 99th percentile of chi-square with 9 degrees of freedom.
    assert!(chi2 < 21.666, "chi2 = {chi2}, counts {counts:?}");
}

#[test]
fn sorted_sample_matches_unsorted_stream() {
    let p = params(0.5, 1.1, 0.6);
    let mut raw = sample_unsorted(&p, 100, 9, 0).unwrap();
    raw.sort_by(f64::total_cmp);
    assert_eq!(sample(&p, 100, 9).unwrap().values(), raw.as_slice());
}
