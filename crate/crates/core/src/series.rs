//! Exact multivariate series with arbitrary-precision integer coefficients.
//!
//! The last variable is the size variable (`t`); truncated operations cut on
//! its degree. Terms with a zero coefficient are never stored.
//!
//! Output formats:
//!
//! * JSON: `{"schema":"tandemcount/1","model":...,"variables":[...],
//!   "terms":[{"exp":[...],"coeff":"<decimal>"}]}` plus an optional
//!   `seeded_terms` list of exponent tuples that were not produced by the
//!   recurrence.
//! * CSV: a header naming the variables followed by `coeff`, one row per term.
//! * b-file: `index value` lines for univariate series.

use crate::{Error, Result, SCHEMA};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesPoly {
    variables: Vec<String>,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl SeriesPoly {
    pub fn new<S: AsRef<str>>(variables: &[S]) -> Self {
        SeriesPoly {
            variables: variables.iter().map(|v| v.as_ref().to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    /// Univariate series in `var` from `(exponent, coefficient)` pairs.
    pub fn univariate<I, C>(var: &str, coeffs: I) -> Self
    where
        I: IntoIterator<Item = (u32, C)>,
        C: Into<BigInt>,
    {
        let mut s = SeriesPoly::new(&[var]);
        for (e, c) in coeffs {
            s.add_term(vec![e], c.into());
        }
        s
    }

    pub fn one<S: AsRef<str>>(variables: &[S]) -> Self {
        let mut s = SeriesPoly::new(variables);
        s.add_term(vec![0; variables.len()], BigInt::one());
        s
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigInt)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    /// Terms ordered by size degree first, then by the remaining exponents.
    pub fn terms_by_degree(&self) -> Vec<(&[u32], &BigInt)> {
        let mut v: Vec<_> = self.terms().collect();
        v.sort_by(|a, b| (a.0.last(), a.0).cmp(&(b.0.last(), b.0)));
        v
    }

    pub fn add_term(&mut self, exp: Vec<u32>, coeff: BigInt) {
        assert_eq!(exp.len(), self.variables.len(), "exponent arity");
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += coeff;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn coeff(&self, exp: &[u32]) -> BigInt {
        self.terms.get(exp).cloned().unwrap_or_default()
    }

    pub fn var_index(&self, var: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v == var)
            .ok_or_else(|| Error::InvalidArgument(format!("no variable `{var}` in {:?}", self.variables)))
    }

    fn same_vars(&self, other: &SeriesPoly) -> Result<()> {
        if self.variables != other.variables {
            return Err(Error::InvalidArgument(format!(
                "variable mismatch: {:?} vs {:?}",
                self.variables, other.variables
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &SeriesPoly) -> Result<SeriesPoly> {
        self.same_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SeriesPoly) -> Result<SeriesPoly> {
        self.same_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, k: &BigInt) -> SeriesPoly {
        let mut out = SeriesPoly::new(&self.variables);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * k);
        }
        out
    }

    /// Product, keeping only terms of size degree at most `max_degree` when
    /// given.
    pub fn mul_truncated(&self, other: &SeriesPoly, max_degree: Option<u32>) -> Result<SeriesPoly> {
        self.same_vars(other)?;
        let mut out = SeriesPoly::new(&self.variables);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                if max_degree.is_some_and(|m| *e.last().unwrap() > m) {
                    continue;
                }
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &SeriesPoly) -> Result<SeriesPoly> {
        self.mul_truncated(other, None)
    }

    pub fn pow_truncated(&self, k: u32, max_degree: Option<u32>) -> Result<SeriesPoly> {
        let mut acc = SeriesPoly::one(&self.variables);
        for _ in 0..k {
            acc = acc.mul_truncated(self, max_degree)?;
        }
        Ok(acc)
    }

    pub fn truncate(&self, max_degree: u32) -> SeriesPoly {
        SeriesPoly {
            variables: self.variables.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| *e.last().unwrap() <= max_degree)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Slice of terms with size degree exactly `d`, as a map over the other
    /// exponents.
    fn slice(&self, d: u32) -> Vec<(Vec<u32>, BigInt)> {
        self.terms
            .iter()
            .filter(|(e, _)| *e.last().unwrap() == d)
            .map(|(e, c)| (e[..e.len() - 1].to_vec(), c.clone()))
            .collect()
    }

    /// Exact truncated quotient `self / divisor` up to size degree
    /// `max_degree`. The divisor's size-degree-0 part must be exactly 1.
    pub fn div_unit(&self, divisor: &SeriesPoly, max_degree: u32) -> Result<SeriesPoly> {
        self.same_vars(divisor)?;
        let nvars = self.variables.len();
        let zero_rest = vec![0u32; nvars - 1];
        let d0 = divisor.slice(0);
        if d0 != vec![(zero_rest, BigInt::one())] {
            return Err(Error::InvalidArgument("divisor is not a unit series (constant term must be 1)".into()));
        }
        let mut quotient = SeriesPoly::new(&self.variables);
        for d in 0..=max_degree {
            // q_d = n_d - sum_{k>=1} div_k * q_{d-k}
            let mut slice = SeriesPoly::new(&self.variables);
            for (rest, c) in self.slice(d) {
                let mut e = rest;
                e.push(d);
                slice.add_term(e, c);
            }
            for k in 1..=d {
                for (dr, dc) in divisor.slice(k) {
                    for (qr, qc) in quotient.slice(d - k) {
                        let mut e: Vec<u32> = dr.iter().zip(&qr).map(|(a, b)| a + b).collect();
                        e.push(d);
                        slice.add_term(e, -(&dc * &qc));
                    }
                }
            }
            for (e, c) in slice.terms {
                quotient.add_term(e, c);
            }
        }
        Ok(quotient)
    }

    /// Substitutes 1 for `var` and drops it.
    pub fn specialize_to_one(&self, var: &str) -> Result<SeriesPoly> {
        let k = self.var_index(var)?;
        if k + 1 == self.variables.len() {
            return Err(Error::InvalidArgument("cannot specialize the size variable".into()));
        }
        let vars: Vec<String> = self.variables.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, v)| v.clone()).collect();
        let mut out = SeriesPoly::new(&vars);
        for (e, c) in &self.terms {
            let mut e = e.clone();
            e.remove(k);
            out.add_term(e, c.clone());
        }
        Ok(out)
    }

    /// Coefficients of a univariate series as `(exponent, coefficient)`.
    pub fn univariate_coeffs(&self) -> Result<Vec<(u32, BigInt)>> {
        if self.variables.len() != 1 {
            return Err(Error::InvalidArgument("series is not univariate".into()));
        }
        Ok(self.terms.iter().map(|(e, c)| (e[0], c.clone())).collect())
    }

    /// Dense coefficient vector `[c_lo, ..., c_hi]` of a univariate series.
    pub fn dense(&self, lo: u32, hi: u32) -> Result<Vec<BigInt>> {
        if self.variables.len() != 1 {
            return Err(Error::InvalidArgument("series is not univariate".into()));
        }
        Ok((lo..=hi).map(|n| self.coeff(&[n])).collect())
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| *e.last().unwrap()).max()
    }

    pub fn to_document(&self, model: &str, seeded_terms: &[Vec<u32>]) -> SeriesDocument {
        SeriesDocument {
            schema: SCHEMA.to_string(),
            model: model.to_string(),
            variables: self.variables.clone(),
            terms: self
                .terms_by_degree()
                .into_iter()
                .map(|(e, c)| TermRecord { exp: e.to_vec(), coeff: c.to_string() })
                .collect(),
            seeded_terms: seeded_terms.to_vec(),
        }
    }

    pub fn to_json(&self, model: &str, seeded_terms: &[Vec<u32>]) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_document(model, seeded_terms))?)
    }

    pub fn to_csv(&self) -> String {
        let vars: Vec<&str> = self.variables.iter().map(String::as_str).map(|v| if v == "t" { "n" } else { v }).collect();
        let mut out = format!("{},coeff\n", vars.join(","));
        for (e, c) in self.terms_by_degree() {
            let cols: Vec<String> = e.iter().map(u32::to_string).collect();
            let _ = writeln!(out, "{},{c}", cols.join(","));
        }
        out
    }

    /// b-file lines `n c_n` for `offset <= n <= last`, zeros included.
    pub fn to_bfile(&self, offset: u32, last: u32) -> Result<String> {
        let mut out = String::new();
        for (k, c) in self.dense(offset, last)?.into_iter().enumerate() {
            let _ = writeln!(out, "{} {c}", offset + k as u32);
        }
        Ok(out)
    }
}

impl fmt::Display for SeriesPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms_by_degree().into_iter().enumerate() {
            if k > 0 {
                f.write_str(if c.sign() == num_bigint::Sign::Minus { " - " } else { " + " })?;
            } else if c.sign() == num_bigint::Sign::Minus {
                f.write_str("-")?;
            }
            let mag = c.magnitude();
            let mono: Vec<String> = self
                .variables
                .iter()
                .zip(e)
                .filter(|(_, &p)| p > 0)
                .map(|(v, &p)| if p == 1 { v.clone() } else { format!("{v}^{p}") })
                .collect();
            match (mono.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => f.write_str(&mono.join("*"))?,
                (false, false) => write!(f, "{mag}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub exp: Vec<u32>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesDocument {
    pub schema: String,
    pub model: String,
    pub variables: Vec<String>,
    pub terms: Vec<TermRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub seeded_terms: Vec<Vec<u32>>,
}

impl SeriesDocument {
    pub fn from_json(text: &str) -> Result<SeriesDocument> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_series(&self) -> Result<SeriesPoly> {
        if self.schema != SCHEMA {
            return Err(Error::Parse(format!("unsupported schema `{}`", self.schema)));
        }
        let mut s = SeriesPoly::new(&self.variables);
        for t in &self.terms {
            if t.exp.len() != self.variables.len() {
                return Err(Error::Parse(format!("exponent {:?} has wrong arity", t.exp)));
            }
            let c: BigInt = t.coeff.parse().map_err(|_| Error::Parse(format!("bad coefficient `{}`", t.coeff)))?;
            s.add_term(t.exp.clone(), c);
        }
        Ok(s)
    }
}
