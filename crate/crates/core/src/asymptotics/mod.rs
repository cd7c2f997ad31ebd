//! Growth constants, step series, spectral checks, exponent diagnostics and
//! Monte Carlo validation.

pub mod mc;
pub mod spectral;

use crate::series::SeriesPoly;
use crate::{Error, Model, Result};
use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact constants of a model.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelSpec {
    pub model: Model,
    /// Minimiser of the step series on its domain.
    pub z0: BigRational,
    /// Growth rate `S(z0)`.
    pub growth: BigRational,
    /// Correlation coefficient `-b/a` of the endpoint covariance.
    pub xi: BigRational,
    /// Conjectured exponent `1 + π / arccos(xi)`.
    pub alpha: f64,
    /// Reference covariance entries `(a, b)`.
    pub covariance: (BigRational, BigRational),
}

impl ModelSpec {
    pub fn of(model: Model) -> ModelSpec {
        let (z0, growth, covariance) = match model {
            Model::P => (ratio(1, 3), ratio(9, 2), (ratio(72, 5), ratio(-81, 10))),
            Model::S => (ratio(1, 4), ratio(16, 3), (ratio(192, 7), ratio(-1408, 63))),
        };
        let xi = -&covariance.1 / &covariance.0;
        let alpha = conjectured_exponent(xi.to_f64().expect("finite"));
        ModelSpec { model, z0, growth, xi, alpha, covariance }
    }
}

/// `1 + π / arccos(xi)`.
pub fn conjectured_exponent(xi: f64) -> f64 {
    1.0 + std::f64::consts::PI / xi.acos()
}

fn check_domain(model: Model, z: f64) -> Result<()> {
    let ok = match model {
        Model::P => z > 0.0 && z < 1.0,
        Model::S => z > 0.0 && 1.0 - 2.0 * z - 2.0 * z * z > 0.0,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("z = {z} outside the domain of the {model} step series")))
    }
}

/// `S_P(z) = 1/z + 2z/(1-z)^2` and `S_S(z) = (1/z) / (1 - 2z^2/(1-2z))`.
pub fn step_series(model: Model, z: f64) -> Result<f64> {
    check_domain(model, z)?;
    Ok(match model {
        Model::P => 1.0 / z + 2.0 * z / ((1.0 - z) * (1.0 - z)),
        Model::S => (1.0 / z) / (1.0 - 2.0 * z * z / (1.0 - 2.0 * z)),
    })
}

pub fn step_series_exact(model: Model, z: &BigRational) -> Result<BigRational> {
    check_domain(model, z.to_f64().unwrap_or(f64::NAN))?;
    let one = BigRational::one();
    let two = ratio(2, 1);
    Ok(match model {
        Model::P => z.recip() + &two * z / ((&one - z) * (&one - z)),
        Model::S => z.recip() / (&one - &two * z * z / (&one - &two * z)),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Minimization {
    pub z0: String,
    pub value: String,
    /// Richardson central-difference estimate of `S'(z0)`, exact arithmetic.
    pub derivative_at_z0: f64,
    pub second_derivative_at_z0: f64,
    /// Golden-section minimiser in floating point.
    pub numeric_z0: f64,
    pub numeric_value: f64,
}

/// Exact minimiser and minimum of the step series, with a numeric
/// confirmation that the derivative vanishes there.
pub fn minimize_step_series(model: Model) -> Result<Minimization> {
    let spec = ModelSpec::of(model);
    let z0 = &spec.z0;
    let value = step_series_exact(model, z0)?;
    let s = |h: &BigRational| step_series_exact(model, &(z0 + h));
    let central = |h: &BigRational| -> Result<BigRational> { Ok((s(h)? - s(&-h)?) / (ratio(2, 1) * h)) };
    let h = ratio(1, 100_000);
    let half = &h / ratio(2, 1);
    let d1 = (ratio(4, 1) * central(&half)? - central(&h)?) / ratio(3, 1);
    let second = |h: &BigRational| -> Result<BigRational> { Ok((s(h)? - ratio(2, 1) * &value + s(&-h)?) / (h * h)) };
    let d2 = (ratio(4, 1) * second(&half)? - second(&h)?) / ratio(3, 1);

    let f = |z: f64| step_series(model, z).unwrap_or(f64::INFINITY);
    let (mut lo, mut hi) = match model {
        Model::P => (0.05, 0.9),
        Model::S => (0.05, 0.35),
    };
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    while hi - lo > 1e-12 {
        let a = hi - phi * (hi - lo);
        let b = lo + phi * (hi - lo);
        if f(a) < f(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    let numeric_z0 = (lo + hi) / 2.0;
    Ok(Minimization {
        z0: z0.to_string(),
        value: value.to_string(),
        derivative_at_z0: d1.to_f64().unwrap_or(f64::NAN),
        second_derivative_at_z0: d2.to_f64().unwrap_or(f64::NAN),
        numeric_z0,
        numeric_value: f(numeric_z0),
    })
}

/// Whether every coefficient obeys `p_n <= (9/2)^n` (P) or
/// `s_n <= 2 (16/3)^n` (S), compared exactly. Returns the first violating
/// index, if any.
pub fn first_bound_violation(model: Model, series: &SeriesPoly) -> Result<Option<u32>> {
    let (num, den, factor) = match model {
        Model::P => (9u32, 2u32, 1u32),
        Model::S => (16, 3, 2),
    };
    for (n, c) in series.univariate_coeffs()? {
        let lhs = c * num_traits::pow(BigInt::from(den), n as usize);
        let rhs = BigInt::from(factor) * num_traits::pow(BigInt::from(num), n as usize);
        if lhs > rhs {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

pub fn check_upper_bounds(model: Model, series: &SeriesPoly) -> Result<bool> {
    Ok(first_bound_violation(model, series)?.is_none())
}

/// Natural logarithm of a positive big integer.
pub fn ln_big(c: &BigInt) -> Option<f64> {
    if c.sign() != Sign::Plus {
        return None;
    }
    let bits = c.bits();
    let shift = bits.saturating_sub(60);
    let top = (c >> shift).to_f64()?;
    Some(top.ln() + shift as f64 * std::f64::consts::LN_2)
}

#[derive(Clone, Debug, Serialize)]
pub struct ExponentFit {
    /// Least-squares slope of `log(c_n / growth^n)` against `log n`.
    pub slope: f64,
    /// `-slope`, the estimated polynomial exponent.
    pub alpha_hat: f64,
    pub first_n: u32,
    pub last_n: u32,
    pub points: usize,
}

/// Report-only regression over the top half of the nonzero coefficients.
pub fn exponent_fit(series: &SeriesPoly, growth: &BigRational) -> Result<ExponentFit> {
    let coeffs: Vec<(u32, BigInt)> = series.univariate_coeffs()?.into_iter().filter(|(n, c)| *n >= 1 && c.is_positive()).collect();
    if coeffs.len() < 4 {
        return Err(Error::InvalidArgument("exponent_fit needs at least four positive coefficients".into()));
    }
    let ln_growth = ln_big(growth.numer()).zip(ln_big(growth.denom())).map(|(a, b)| a - b).ok_or_else(|| {
        Error::InvalidArgument("growth must be positive".into())
    })?;
    let tail = &coeffs[coeffs.len() / 2..];
    let pts: Vec<(f64, f64)> = tail
        .iter()
        .map(|(n, c)| ((*n as f64).ln(), ln_big(c).expect("positive") - *n as f64 * ln_growth))
        .collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = if sxx.is_zero() { 0.0 } else { sxy / sxx };
    Ok(ExponentFit {
        slope,
        alpha_hat: -slope,
        first_n: tail[0].0,
        last_n: tail[tail.len() - 1].0,
        points: pts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_series_values() {
        assert!((step_series(Model::P, 1.0 / 3.0).unwrap() - 4.5).abs() < 1e-12);
        assert!((step_series(Model::S, 0.25).unwrap() - 16.0 / 3.0).abs() < 1e-12);
        assert_eq!(step_series_exact(Model::P, &ratio(1, 3)).unwrap(), ratio(9, 2));
        assert_eq!(step_series_exact(Model::S, &ratio(1, 4)).unwrap(), ratio(16, 3));
        assert!(step_series(Model::S, 0.4).is_err());
        assert!(step_series(Model::P, 1.0).is_err());
    }

    #[test]
    fn minimisation() {
        for model in [Model::P, Model::S] {
            let m = minimize_step_series(model).unwrap();
            assert!(m.derivative_at_z0.abs() < 1e-12, "{model}: {}", m.derivative_at_z0);
            assert!(m.second_derivative_at_z0 > 0.0);
            assert!((m.numeric_z0 - ModelSpec::of(model).z0.to_f64().unwrap()).abs() < 1e-6);
        }
    }

    #[test]
    fn xi_is_exact() {
        assert_eq!(ModelSpec::of(Model::P).xi, ratio(9, 16));
        assert_eq!(ModelSpec::of(Model::S).xi, ratio(22, 27));
    }

    #[test]
    fn fit_of_a_constant_series() {
        let s = SeriesPoly::univariate("t", (0..20u32).map(|n| (n, BigInt::from(5))));
        let fit = exponent_fit(&s, &ratio(1, 1)).unwrap();
        assert!(fit.slope.abs() < 1e-12);
    }

    #[test]
    fn bounds_on_empty_series() {
        assert!(check_upper_bounds(Model::P, &SeriesPoly::new(&["t"])).unwrap());
    }

    #[test]
    fn big_logarithm() {
        let c = BigInt::from(10).pow(400);
        assert!((ln_big(&c).unwrap() - 400.0 * 10f64.ln()).abs() < 1e-9);
    }
}
