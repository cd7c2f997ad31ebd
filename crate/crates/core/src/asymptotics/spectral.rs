//! Closed forms for the dominant root `γ₊(x,y)` of the endpoint generating
//! function denominator `b₂t² + b₁t + b₀`, and the derived drift and
//! covariance checks.

use crate::Model;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

/// Coefficients of `b₀`, `b₁`, `b₂` as `(coeff, x-exp, y-exp)` lists.
fn b_terms(model: Model) -> [&'static [(i64, u32, u32)]; 3] {
    match model {
        Model::P => [
            &[(-3, 2, 4), (9, 2, 2), (1, 0, 4), (-3, 0, 2)],
            &[(-3, 2, 4), (-3, 0, 2)],
            &[(27, 4, 2), (-81, 4, 0), (-27, 2, 2), (27, 2, 0)],
        ],
        Model::S => [
            &[(8, 2, 2), (-2, 2, 4), (-1, 0, 4), (-2, 0, 2)],
            &[(-2, 2, 4), (-2, 0, 2)],
            &[(32, 4, 2), (-128, 4, 0), (32, 2, 0)],
        ],
    }
}

fn delta_terms(model: Model) -> &'static [(i64, u32, u32)] {
    match model {
        Model::P => &[
            (36, 6, 6),
            (1, 4, 8),
            (-216, 6, 4),
            (-48, 4, 6),
            (324, 6, 2),
            (216, 4, 4),
            (14, 2, 6),
            (-216, 4, 2),
            (-48, 2, 4),
            (36, 2, 2),
            (1, 0, 4),
        ],
        Model::S => &[
            (64, 6, 6),
            (1, 4, 8),
            (-512, 6, 4),
            (32, 4, 6),
            (1024, 6, 2),
            (2, 2, 6),
            (-512, 4, 2),
            (32, 2, 4),
            (64, 2, 2),
            (1, 0, 4),
        ],
    }
}

/// Ratio `(b₁² − 4b₀b₂) / Δ`.
fn discriminant_scale(model: Model) -> i64 {
    match model {
        Model::P => 9,
        Model::S => 4,
    }
}

fn eval(terms: &[(i64, u32, u32)], x: f64, y: f64) -> f64 {
    terms.iter().map(|&(c, a, b)| c as f64 * x.powi(a as i32) * y.powi(b as i32)).sum()
}

fn eval_exact(terms: &[(i64, u32, u32)], x: &BigRational, y: &BigRational) -> BigRational {
    terms.iter().fold(BigRational::zero(), |acc, &(c, a, b)| {
        acc + BigRational::from_integer(BigInt::from(c)) * num_traits::pow(x.clone(), a as usize) * num_traits::pow(y.clone(), b as usize)
    })
}

pub fn b_coefficients(model: Model, x: f64, y: f64) -> [f64; 3] {
    b_terms(model).map(|t| eval(t, x, y))
}

pub fn b_coefficients_exact(model: Model, x: &BigRational, y: &BigRational) -> [BigRational; 3] {
    b_terms(model).map(|t| eval_exact(t, x, y))
}

pub fn delta(model: Model, x: f64, y: f64) -> f64 {
    eval(delta_terms(model), x, y)
}

pub fn delta_exact(model: Model, x: &BigRational, y: &BigRational) -> BigRational {
    eval_exact(delta_terms(model), x, y)
}

fn denominator(model: Model, x: f64, y: f64) -> f64 {
    let (x2, y2) = (x * x, y * y);
    match model {
        Model::P => 18.0 * x2 * (1.0 - 3.0 * x2 + x2 * y2 - y2),
        Model::S => 32.0 * x2 * (x2 * y2 - 4.0 * x2 + 1.0),
    }
}

fn inverse_root(model: Model, x: f64, y: f64, sign: f64) -> f64 {
    let d = delta(model, x, y);
    let (x2, y2) = (x * x, y * y);
    (x2 * y2 * y2 + y2 - sign * d.sqrt()) / denominator(model, x, y)
}

pub fn gamma_plus(model: Model, x: f64, y: f64) -> f64 {
    1.0 / inverse_root(model, x, y, 1.0)
}

pub fn gamma_minus(model: Model, x: f64, y: f64) -> f64 {
    1.0 / inverse_root(model, x, y, -1.0)
}

/// `g(x,y) = γ₊(x,y) / γ₊(1,1)`.
pub fn g(model: Model, x: f64, y: f64) -> f64 {
    gamma_plus(model, x, y) / gamma_plus(model, 1.0, 1.0)
}

/// Exact square root of a nonnegative rational that is a perfect square.
fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer().sqrt(), q.denom().sqrt());
    let r = BigRational::new(n, d);
    (&r * &r == *q).then_some(r)
}

/// `γ₊(1,1)`, `γ₋(1,1)` and `Δ(1,1)` in exact arithmetic.
pub fn exact_at_one(model: Model) -> (BigRational, BigRational, BigRational) {
    let one = BigRational::one();
    let d = delta_exact(model, &one, &one);
    let root = rational_sqrt(&d).expect("Δ(1,1) is a perfect square");
    let den = BigRational::from_integer(BigInt::from(denominator(model, 1.0, 1.0) as i64));
    let two = BigRational::from_integer(BigInt::from(2));
    let inv_plus = (&two - &root) / &den;
    let inv_minus = (&two + &root) / &den;
    (inv_plus.recip(), inv_minus.recip(), d)
}

#[derive(Clone, Debug, Serialize)]
pub struct RootCoefficientCheck {
    /// `1/γ₊ + 1/γ₋` against `−b₁/b₂`.
    pub sum_ok: bool,
    /// `1/γ₊ · 1/γ₋` against `b₀/b₂`.
    pub product_ok: bool,
    /// `b₁² − 4b₀b₂` against the scaled printed `Δ`.
    pub discriminant_ok: bool,
}

impl RootCoefficientCheck {
    pub fn all(&self) -> bool {
        self.sum_ok && self.product_ok && self.discriminant_ok
    }
}

/// Root/coefficient consistency of the printed closed forms at `(1,1)`, exact.
pub fn root_coefficient_check(model: Model) -> RootCoefficientCheck {
    let one = BigRational::one();
    let [b0, b1, b2] = b_coefficients_exact(model, &one, &one);
    let (gp, gm, d) = exact_at_one(model);
    let (ip, im) = (gp.recip(), gm.recip());
    let four = BigRational::from_integer(BigInt::from(4));
    let scale = BigRational::from_integer(BigInt::from(discriminant_scale(model)));
    RootCoefficientCheck {
        sum_ok: &ip + &im == -&b1 / &b2,
        product_ok: &ip * &im == &b0 / &b2,
        discriminant_ok: &b1 * &b1 - four * &b0 * &b2 == scale * d,
    }
}

/// Richardson-extrapolated second differences of `f` at the origin, with
/// steps `1e-2` and `1e-3`: returns `(f_rr, f_rs, f_ss)`.
pub fn hessian_at_origin<F: Fn(f64, f64) -> f64>(f: F) -> (f64, f64, f64) {
    let f0 = f(0.0, 0.0);
    let second = |h: f64| {
        let rr = (f(h, 0.0) - 2.0 * f0 + f(-h, 0.0)) / (h * h);
        let ss = (f(0.0, h) - 2.0 * f0 + f(0.0, -h)) / (h * h);
        let rs = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4.0 * h * h);
        (rr, rs, ss)
    };
    let (a1, b1, c1) = second(1e-2);
    let (a2, b2, c2) = second(1e-3);
    let rich = |coarse: f64, fine: f64| (100.0 * fine - coarse) / 99.0;
    (rich(a1, a2), rich(b1, b2), rich(c1, c2))
}

/// Central-difference gradient of `g` at `(1,1)`.
pub fn gradient_g(model: Model) -> (f64, f64) {
    let h = 1e-5;
    let gx = (g(model, 1.0 + h, 1.0) - g(model, 1.0 - h, 1.0)) / (2.0 * h);
    let gy = (g(model, 1.0, 1.0 + h) - g(model, 1.0, 1.0 - h)) / (2.0 * h);
    (gx, gy)
}

/// Hessian `(H₁₁, H₁₂, H₂₂)` of `log g(e^r, e^s)` at `(0,0)`: the endpoint
/// covariance per step of the free walk.
pub fn covariance_from_gamma(model: Model) -> (f64, f64, f64) {
    hessian_at_origin(|r, s| g(model, r.exp(), s.exp()).ln())
}

/// Hessian of the unnormalised `γ₊(e^r, e^s)` at `(0,0)`.
pub fn gamma_hessian(model: Model) -> (f64, f64, f64) {
    hessian_at_origin(|r, s| gamma_plus(model, r.exp(), s.exp()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_one() {
        assert!((delta(Model::P, 1.0, 1.0) - 100.0).abs() < 1e-12);
        assert!((gamma_plus(Model::P, 1.0, 1.0) - 4.5).abs() < 1e-12);
        assert!((gamma_minus(Model::S, 1.0, 1.0) + 4.0).abs() < 1e-12);
        let (gp, gm, d) = exact_at_one(Model::S);
        assert_eq!(gp, BigRational::new(16.into(), 3.into()));
        assert_eq!(gm, BigRational::from_integer((-4).into()));
        assert_eq!(d, BigRational::from_integer(196.into()));
    }

    #[test]
    fn root_coefficients_consistent() {
        assert!(root_coefficient_check(Model::P).all());
        assert!(root_coefficient_check(Model::S).all());
    }

    #[test]
    fn hessian_of_a_quadratic() {
        let (a, b, c) = hessian_at_origin(|r, s| 3.0 * r * r + 2.0 * r * s - s * s + r);
        assert!((a - 6.0).abs() < 1e-6 && (b - 2.0).abs() < 1e-6 && (c + 2.0).abs() < 1e-6);
    }
}
