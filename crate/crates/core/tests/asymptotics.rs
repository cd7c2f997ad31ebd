use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use tandemcount::asymptotics::mc::{
    exact_survival, mc_estimate, p_step_probability, p_step_support, s_aggregated_masses, sample_p_step,
    sample_s_aggregated,
};
use tandemcount::asymptotics::spectral::{delta, gamma_minus, gamma_plus};
use tandemcount::asymptotics::{
    check_upper_bounds, conjectured_exponent, exponent_fit, minimize_step_series, step_series, step_series_exact,
    ModelSpec,
};
use tandemcount::counts::{count_p_series, count_s_series};
use tandemcount::walk::Parity;
use tandemcount::Model;

const DRAWS: usize = 1_000_000;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Compares empirical frequencies with an exact law: every atom within five
/// standard errors, and total variation below `sum of standard errors + tail`,
/// which is about 2.5 times its expected value under pure sampling noise.
fn check_law(counts: &BTreeMap<(i64, i64), u64>, law: &BTreeMap<(i64, i64), f64>) {
    let n = DRAWS as f64;
    let tail = 1.0 - law.values().sum::<f64>();
    assert!((-1e-12..1e-6).contains(&tail), "{tail}");
    let mut tv = tail;
    let mut noise = 0.0;
    for (atom, &p) in law {
        let f = counts.get(atom).copied().unwrap_or(0) as f64 / n;
        let se = (p * (1.0 - p) / n).sqrt();
        assert!((f - p).abs() <= 5.0 * se + 1.0 / n, "{atom:?}: {f} vs {p}");
        tv += (f - p).abs();
        noise += se;
    }
    for (atom, &c) in counts {
        if !law.contains_key(atom) {
            let f = c as f64 / n;
            assert!(f < 1e-4, "unexpected atom {atom:?} at frequency {f}");
            tv += f;
        }
    }
    assert!(tv / 2.0 <= noise + tail, "TV {} vs bound {}", tv / 2.0, noise + tail);
}

#[test]
fn p_step_law_matches_sampler() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for parity in [Parity::Even, Parity::Odd] {
        let law: BTreeMap<_, _> = p_step_support(parity, 1e-12).into_iter().collect();
        let mut counts = BTreeMap::new();
        for _ in 0..DRAWS {
            *counts.entry(sample_p_step(parity, &mut rng)).or_insert(0u64) += 1;
        }
        check_law(&counts, &law);
    }
}

#[test]
fn s_aggregated_law_matches_sampler() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for (y, parity) in [(2, Parity::Even), (1, Parity::Odd)] {
        let law = s_aggregated_masses(parity, 1e-11);
        let mut counts = BTreeMap::new();
        for _ in 0..DRAWS {
            *counts.entry(sample_s_aggregated(y, &mut rng)).or_insert(0u64) += 1;
        }
        check_law(&counts, &law);
    }
}

#[test]
fn p_se_probability_is_two_thirds() {
    for parity in [Parity::Even, Parity::Odd] {
        assert!((p_step_probability(parity, 1, -1) - 2.0 / 3.0).abs() < 1e-15);
    }
    assert_eq!(p_step_probability(Parity::Even, -2, 0), 0.0);
    assert_eq!(p_step_probability(Parity::Odd, 0, 2), 0.0);
}

#[test]
fn path_probability_uses_half_exponent() {
    // the unique length-3 axis walk (0,2),SE,SE ends at (2,0); the product of
    // step weights is z0^((0-2)/2) / S(z0)^3 = 8/243
    let exact = p_step_probability(Parity::Even, 0, 2)
        * p_step_probability(Parity::Even, 1, -1)
        * p_step_probability(Parity::Odd, 1, -1);
    assert!((exact - 8.0 / 243.0).abs() < 1e-15);
    assert!((exact - 3.0 / 4.5f64.powi(3)).abs() < 1e-15);

    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut hits = 0u64;
    for _ in 0..DRAWS {
        let a = sample_p_step(Parity::Even, &mut rng);
        if a != (0, 2) {
            continue;
        }
        let b = sample_p_step(Parity::Even, &mut rng);
        let c = sample_p_step(Parity::Odd, &mut rng);
        hits += u64::from(b == (1, -1) && c == (1, -1));
    }
    let f = hits as f64 / DRAWS as f64;
    let se = (exact * (1.0 - exact) / DRAWS as f64).sqrt();
    assert!((f - exact).abs() < 3.0 * se, "{f} vs {exact}");
}

#[test]
fn step_series_examples() {
    assert_eq!(step_series_exact(Model::P, &q(1, 3)).unwrap(), q(9, 2));
    assert_eq!(step_series_exact(Model::S, &q(1, 4)).unwrap(), q(16, 3));
    for k in 1..100 {
        let z = k as f64 / 100.0;
        assert!(step_series(Model::P, z).unwrap() >= 4.5 - 1e-12);
        if let Ok(v) = step_series(Model::S, z) {
            assert!(v >= 16.0 / 3.0 - 1e-12, "{z}");
        }
    }
    assert!(step_series(Model::S, 0.5).is_err());
    assert!(step_series(Model::P, 0.0).is_err());
}

#[test]
fn minimisers() {
    for (model, z0, value) in [(Model::P, q(1, 3), q(9, 2)), (Model::S, q(1, 4), q(16, 3))] {
        let m = minimize_step_series(model).unwrap();
        assert_eq!(m.z0, z0.to_string());
        assert_eq!(m.value, value.to_string());
        assert!(m.derivative_at_z0.abs() < 1e-12);
        assert!(m.second_derivative_at_z0 > 0.0);
    }
}

#[test]
fn model_constants() {
    let p = ModelSpec::of(Model::P);
    assert_eq!((p.z0.clone(), p.growth.clone(), p.xi.clone()), (q(1, 3), q(9, 2), q(9, 16)));
    let s = ModelSpec::of(Model::S);
    assert_eq!((s.z0.clone(), s.growth.clone(), s.xi.clone()), (q(1, 4), q(16, 3), q(22, 27)));
    assert!((p.alpha - conjectured_exponent(9.0 / 16.0)).abs() < 1e-15);
    assert!((p.alpha - 4.2277).abs() < 5e-3);
    assert!((s.alpha - 6.0798).abs() < 5e-3);
}

#[test]
fn spectral_values_at_one() {
    assert!((delta(Model::P, 1.0, 1.0) - 100.0).abs() < 1e-9);
    assert!((delta(Model::S, 1.0, 1.0) - 196.0).abs() < 1e-9);
    for model in [Model::P, Model::S] {
        assert!(gamma_minus(model, 1.0, 1.0).abs() < gamma_plus(model, 1.0, 1.0));
    }
}

#[test]
fn bounds_hold_to_40() {
    assert!(check_upper_bounds(Model::P, &count_p_series(40).unwrap()).unwrap());
    assert!(check_upper_bounds(Model::S, &count_s_series(40).unwrap()).unwrap());
}

#[test]
fn exponent_fit_reports() {
    let fit = exponent_fit(&count_p_series(80).unwrap(), &q(9, 2)).unwrap();
    assert!(fit.alpha_hat.is_finite());
    assert_eq!(fit.last_n, 80);
}

#[test]
fn exact_survival_agrees_with_frequency() {
    let exact = exact_survival(Model::P, 10).unwrap().to_f64().unwrap();
    let r = mc_estimate(Model::P, 10, 40_000, 3).unwrap();
    assert_eq!(r.survival_exact, Some(exact));
    let se = (exact * (1.0 - exact) / 40_000.0).sqrt();
    assert!((r.survival_frequency - exact).abs() < 5.0 * se + 1.0 / 40_000.0);
}

#[test]
fn report_is_reproducible_and_well_formed() {
    let a = mc_estimate(Model::S, 20, 6000, 99).unwrap();
    let b = mc_estimate(Model::S, 20, 6000, 99).unwrap();
    assert_eq!(a, b);
    assert!((0.0..=1.0).contains(&a.survival_frequency));
    assert!((0.0..=1.0).contains(&a.box_exit_frequency));
    let c = a.endpoint_covariance_over_n;
    assert_eq!(c[0][1], c[1][0]);
    assert!(mc_estimate(Model::P, 0, 10, 1).is_err());
}
