//! Counting series assembled from the layered recurrences.
//!
//! Indexing: `p_n` counts P walks of length `n` from the origin to the
//! x-axis, read off layer `n` of the P table; `s'_m` is the weight of S walks
//! from `(0,2)` to `(2,0)` with `m + 2` SE steps, read off layer `m + 2` of
//! the S table.

use crate::dp::{sweep, Bounds, Count, DpTable, Layer, Tally, UvCount, DEFAULT_HEADROOM, SE};
use crate::series::SeriesPoly;
use crate::walk::{LatticePoint, S_END};
use crate::{Error, Model, Result};
use num_bigint::{BigInt, BigUint};
use std::collections::BTreeMap;

/// `s_2`, outside the range of the `s'` relation.
pub const S2: u32 = 3;

/// Low-order terms of the bivariate Schnyder series that are not given by
/// the `s'` relation: `(a, b, coefficient)` of `u^a v^b t^(a+b-2)`.
pub const S_REFINED_SEEDS: [(u32, u32, u32); 3] = [(2, 2, 3), (3, 2, 1), (2, 3, 1)];

fn axis_sum<T: Count>(layer: &Layer<T>) -> T {
    let mut acc = T::zero();
    for i in 0..=layer.n() as i64 {
        if let Some(v) = layer.entry(SE, i, 0) {
            acc.add_assign_ref(&v);
        }
    }
    acc
}

/// `p_n` for `0 <= n <= n_max`, plus the addition tally of the run.
pub fn p_numbers(n_max: usize) -> Result<(Vec<BigUint>, Tally)> {
    let mut out = Vec::with_capacity(n_max + 1);
    let tally = sweep(Model::P, Bounds::new(n_max, DEFAULT_HEADROOM), |l: &Layer<BigUint>| {
        out.push(axis_sum(l))
    })?;
    Ok((out, tally))
}

/// `s'_m` for `0 <= m <= m_max`, plus the addition tally. `s'_0` is the
/// face-free walk `SE,SE`, which is not an S walk; it is reported as 0.
pub fn s_prime_numbers(m_max: usize) -> Result<(Vec<BigUint>, Tally)> {
    let mut out = Vec::with_capacity(m_max + 1);
    let tally = sweep(Model::S, Bounds::new(m_max + 2, DEFAULT_HEADROOM), |l: &Layer<BigUint>| {
        if l.n() >= 3 {
            out.push(l.entry(SE, S_END.x, S_END.y).unwrap_or_default());
        }
    })?;
    let mut all = vec![BigUint::default(); 1];
    all.extend(out);
    all.truncate(m_max + 1);
    Ok((all, tally))
}

fn univariate(lo: usize, coeffs: &[BigUint]) -> SeriesPoly {
    let mut s = SeriesPoly::new(&["t"]);
    for (n, c) in coeffs.iter().enumerate().skip(lo) {
        s.add_term(vec![n as u32], BigInt::from(c.clone()));
    }
    s
}

/// `Σ p_n t^n` for `3 <= n <= n_max`.
pub fn count_p_series(n_max: usize) -> Result<SeriesPoly> {
    let (p, _) = p_numbers(n_max)?;
    Ok(univariate(3, &p))
}

/// `Σ s'_m t^m` for `1 <= m <= m_max`.
pub fn count_s_prime_series(m_max: usize) -> Result<SeriesPoly> {
    let (sp, _) = s_prime_numbers(m_max)?;
    Ok(univariate(1, &sp))
}

/// `s_n` for `0 <= n <= n_max` (zero below 2).
pub fn s_numbers(n_max: usize) -> Result<Vec<BigUint>> {
    if n_max < 2 {
        return Err(Error::InvalidArgument(format!("the s series starts at n = 2, got n_max = {n_max}")));
    }
    let (sp, _) = s_prime_numbers(n_max)?;
    let mut s = vec![BigUint::default(); n_max + 1];
    s[2] = BigUint::from(S2);
    for n in 3..=n_max {
        s[n] = &sp[n] + &sp[n - 1] * 2u32 + &sp[n - 2];
    }
    Ok(s)
}

/// `Σ s_n t^n` for `2 <= n <= n_max`.
pub fn count_s_series(n_max: usize) -> Result<SeriesPoly> {
    Ok(univariate(2, &s_numbers(n_max)?))
}

fn cube_of_one_plus(vars: &[&str], monomial: Vec<u32>) -> Result<SeriesPoly> {
    let mut base = SeriesPoly::one(vars);
    base.add_term(monomial, BigInt::from(1));
    base.pow_truncated(3, None)
}

/// `(1 + 3t + Σ s_n t^n) / (1+t)^3 - 1`, truncated at `n_max`.
pub fn count_s_tilde(n_max: usize) -> Result<SeriesPoly> {
    let mut num = count_s_series(n_max)?;
    num.add_term(vec![0], BigInt::from(1));
    num.add_term(vec![1], BigInt::from(3));
    let q = num.div_unit(&cube_of_one_plus(&["t"], vec![1])?, n_max as u32)?;
    let mut minus_one = SeriesPoly::new(&["t"]);
    minus_one.add_term(vec![0], BigInt::from(1));
    q.sub(&minus_one)
}

/// Refined `s'_{a,b}` keyed by `(a, b)`, for `a + b <= m_max + 2`.
pub fn s_prime_refined(m_max: usize) -> Result<BTreeMap<(u32, u32), BigUint>> {
    let mut out = BTreeMap::new();
    sweep(Model::S, Bounds::new(m_max + 2, DEFAULT_HEADROOM), |l: &Layer<UvCount>| {
        if l.n() >= 3 {
            if let Some(c) = l.entry(SE, S_END.x, S_END.y) {
                for ((a, b), v) in c.terms() {
                    out.insert((a, b), v.clone());
                }
            }
        }
    })?;
    Ok(out)
}

/// A refined series together with the exponents of paper-seeded terms.
#[derive(Clone, Debug)]
pub struct RefinedSeries {
    pub series: SeriesPoly,
    pub seeded_terms: Vec<Vec<u32>>,
}

/// `Σ s_{a,b} u^a v^b t^(a+b-2)` for `a + b - 2 <= n_max`.
pub fn count_s_refined(n_max: usize) -> Result<RefinedSeries> {
    if n_max < 2 {
        return Err(Error::InvalidArgument(format!("the s series starts at n = 2, got n_max = {n_max}")));
    }
    let sp = s_prime_refined(n_max)?;
    let get = |a: u32, b: u32| sp.get(&(a, b)).cloned().unwrap_or_default();
    let mut series = SeriesPoly::new(&["u", "v", "t"]);
    let mut seeded_terms = Vec::new();
    for (a, b, c) in S_REFINED_SEEDS {
        if a + b - 2 <= n_max as u32 {
            series.add_term(vec![a, b, a + b - 2], BigInt::from(c));
            seeded_terms.push(vec![a, b, a + b - 2]);
        }
    }
    let top = n_max as u32 + 2;
    for a in 3..=top {
        for b in 3..=top - a {
            let c = get(a, b) + get(a, b - 1) + get(a - 1, b) + get(a - 1, b - 1);
            series.add_term(vec![a, b, a + b - 2], BigInt::from(c));
        }
    }
    Ok(RefinedSeries { series, seeded_terms })
}

/// `(u^2 (1 + 3vt) + Σ s_{a,b} u^a v^b t^(a+b-2)) / (1+vt)^3 - u^2`.
pub fn count_s_tilde_refined(n_max: usize) -> Result<SeriesPoly> {
    let vars = ["u", "v", "t"];
    let mut num = count_s_refined(n_max)?.series;
    num.add_term(vec![2, 0, 0], BigInt::from(1));
    num.add_term(vec![2, 1, 1], BigInt::from(3));
    let q = num.div_unit(&cube_of_one_plus(&vars, vec![0, 1, 1])?, n_max as u32)?;
    let mut u2 = SeriesPoly::new(&vars);
    u2.add_term(vec![2, 0, 0], BigInt::from(1));
    q.sub(&u2)
}

/// `Σ p_{a,b,c} u^a v^b w^c t^n` with `c = n - a - b` the number of
/// face-steps, for `n <= n_max`.
pub fn count_p_refined(n_max: usize) -> Result<SeriesPoly> {
    let mut series = SeriesPoly::new(&["u", "v", "w", "t"]);
    sweep(Model::P, Bounds::new(n_max, DEFAULT_HEADROOM), |l: &Layer<UvCount>| {
        let n = l.n() as u32;
        for ((a, b), c) in axis_sum(l).terms() {
            series.add_term(vec![a, b, n - a - b, n], BigInt::from(c.clone()));
        }
    })?;
    Ok(series)
}

fn count_to(model: Model, n: usize, target: LatticePoint) -> Result<BigUint> {
    if target.y < 0 || target.x < 0 {
        return Ok(BigUint::default());
    }
    let table: DpTable<BigUint> = DpTable::build(model, Bounds::new(n, (target.y as usize).max(2)))?;
    table.count_to(n, target)
}

/// Number of quadrant P walks of length `n` from the origin to `target`.
pub fn count_p_to(n: usize, target: LatticePoint) -> Result<BigUint> {
    count_to(Model::P, n, target)
}

/// Weight of quadrant S walks from `(0,2)` with `n` SE steps ending at
/// `target`.
pub fn count_s_to(n: usize, target: LatticePoint) -> Result<BigUint> {
    count_to(Model::S, n, target)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nums(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn low_order_values() {
        let (p, _) = p_numbers(9).unwrap();
        assert_eq!(p, nums(&[1, 0, 0, 1, 0, 3, 4, 15, 39, 122]));
        let (sp, _) = s_prime_numbers(11).unwrap();
        assert_eq!(sp, nums(&[0, 0, 1, 0, 2, 2, 8, 18, 58, 172, 570, 1904]));
        assert_eq!(count_s_series(2).unwrap().to_string(), "3*t^2");
    }

    #[test]
    fn refined_specializes_to_univariate() {
        let n = 14;
        let s = count_s_series(n).unwrap();
        let r = count_s_refined(n).unwrap().series.specialize_to_one("u").unwrap().specialize_to_one("v").unwrap();
        assert_eq!(r, s);
        let p = count_p_series(n).unwrap();
        let mut pr = count_p_refined(n).unwrap();
        for v in ["u", "v", "w"] {
            pr = pr.specialize_to_one(v).unwrap();
        }
        assert_eq!(pr.truncate(n as u32), p.add(&SeriesPoly::univariate("t", [(0u32, BigInt::from(1))])).unwrap());
        let st = count_s_tilde(n).unwrap();
        let str_ = count_s_tilde_refined(n).unwrap().specialize_to_one("u").unwrap().specialize_to_one("v").unwrap();
        assert_eq!(str_, st);
    }

    #[test]
    fn refined_sum_rule() {
        let m = 12;
        let (sp, _) = s_prime_numbers(m).unwrap();
        let r = s_prime_refined(m).unwrap();
        for (k, expect) in sp.iter().enumerate().skip(1) {
            let total: BigUint = r.iter().filter(|((a, b), _)| (a + b) as usize == k + 2).map(|(_, c)| c).sum();
            assert_eq!(&total, expect, "m = {k}");
        }
    }

    #[test]
    fn s_refined_symmetric() {
        let r = count_s_refined(16).unwrap().series;
        for (e, c) in r.terms() {
            assert_eq!(r.coeff(&[e[1], e[0], e[2]]), *c, "u^{} v^{}", e[0], e[1]);
        }
    }

    #[test]
    fn p_refined_symmetric() {
        let r = count_p_refined(18).unwrap();
        for (e, c) in r.terms() {
            let (a, b, cc, n) = (e[0], e[1], e[2], e[3]);
            for perm in [[b, a, cc], [a, cc, b], [cc, b, a], [b, cc, a], [cc, a, b]] {
                assert_eq!(r.coeff(&[perm[0], perm[1], perm[2], n]), *c);
            }
        }
    }

    #[test]
    fn counts_to_points() {
        assert_eq!(count_p_to(0, LatticePoint::ORIGIN).unwrap(), BigUint::from(1u32));
        assert_eq!(count_s_to(2, LatticePoint::new(2, 0)).unwrap(), BigUint::from(1u32));
        assert_eq!(count_s_to(4, S_END).unwrap(), BigUint::from(1u32));
        assert_eq!(count_p_to(3, LatticePoint::new(-1, 0)).unwrap(), BigUint::default());
    }
}
