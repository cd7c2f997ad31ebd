//! Oracle-versus-recurrence comparison and the bijection checks.

use super::dyck::{
    bij_s_lift, bij_s_project, enumerate_dyck_pairs, enumerate_one_aligned, noncrossing_formula, phi, phi_inverse,
};
use super::enumerate::{enumerate_p_walks_capped, enumerate_s_walks_capped, p_census, s_census};
use crate::dp::{Bounds, DpTable, DEFAULT_HEADROOM, NW, SE, UP};
use crate::walk::{validate_s_walk, S_END};
use crate::{Error, Model, Result, SCHEMA};
use num_bigint::BigUint;
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Mismatch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellMismatch {
    pub n: usize,
    pub i: i64,
    pub j: i64,
    pub family: &'static str,
    pub oracle: String,
    pub dp: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesRow {
    pub n: usize,
    pub oracle: String,
    pub dp: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrosscheckReport {
    pub schema: &'static str,
    pub model: Model,
    pub n_max: usize,
    pub status: Status,
    pub cells_checked: usize,
    /// `p_n` per walk length (P) or `s'_{n-2}` per SE count (S).
    pub series: Vec<SeriesRow>,
    pub first_mismatch: Option<CellMismatch>,
}

impl CrosscheckReport {
    pub fn is_ok(&self) -> bool {
        self.status == Status::Ok
    }
}

fn family_name(f: usize) -> &'static str {
    match f {
        SE => "searrow",
        NW => "nwarrow",
        UP => "uparrow",
        _ => unreachable!(),
    }
}

/// Compares every cell of the recurrence table in layers `0..=n_max`
/// against exhaustive enumeration, plus the extracted counts.
pub fn crosscheck(model: Model, n_max: usize, cap: usize) -> Result<CrosscheckReport> {
    if n_max > cap {
        return Err(Error::CapExceeded { requested: n_max, cap });
    }
    let bounds = Bounds::new(n_max, DEFAULT_HEADROOM);
    let table: DpTable<BigUint> = DpTable::build(model, bounds)?;
    let families: &[usize] = match model {
        Model::P => &[SE, NW, UP],
        Model::S => &[SE, NW],
    };
    let mut first_mismatch = None;
    let mut cells_checked = 0;
    let mut series = Vec::new();
    for n in 0..=n_max {
        let height = bounds.height(n);
        let census = match model {
            Model::P => p_census(n, height, cap)?,
            Model::S => s_census(n, height, cap)?,
        };
        let layer = table.layer(n).expect("layer in range");
        let mut seen = BTreeSet::new();
        for i in 0..=n as i64 {
            for j in 0..=height {
                for &f in families {
                    let dp = layer.entry(f, i, j).expect("cell in range");
                    let oracle = census.get(&(f, i, j)).cloned().unwrap_or_default();
                    seen.insert((f, i, j));
                    cells_checked += 1;
                    if dp != oracle && first_mismatch.is_none() {
                        first_mismatch = Some(CellMismatch {
                            n,
                            i,
                            j,
                            family: family_name(f),
                            oracle: oracle.to_string(),
                            dp: dp.to_string(),
                        });
                    }
                }
            }
        }
        if first_mismatch.is_none() {
            if let Some((&(f, i, j), c)) = census.iter().find(|(k, _)| !seen.contains(*k)) {
                first_mismatch =
                    Some(CellMismatch { n, i, j, family: family_name(f), oracle: c.to_string(), dp: "0".into() });
            }
        }
        let row = match model {
            Model::P if n >= 1 => {
                let oracle = BigUint::from(enumerate_p_walks_capped(n, cap)?.count);
                let dp: BigUint = (0..=n as i64).map(|i| layer.entry(SE, i, 0).unwrap_or_default()).sum();
                Some((oracle, dp))
            }
            Model::S if n >= 3 => {
                let oracle = enumerate_s_walks_capped(n, cap)?.total_weight;
                Some((oracle, layer.entry(SE, S_END.x, S_END.y).unwrap_or_default()))
            }
            _ => None,
        };
        if let Some((oracle, dp)) = row {
            if oracle != dp && first_mismatch.is_none() {
                first_mismatch = Some(CellMismatch {
                    n,
                    i: -1,
                    j: 0,
                    family: "total",
                    oracle: oracle.to_string(),
                    dp: dp.to_string(),
                });
            }
            series.push(SeriesRow { n, oracle: oracle.to_string(), dp: dp.to_string() });
        }
    }
    let status = if first_mismatch.is_none() { Status::Ok } else { Status::Mismatch };
    Ok(CrosscheckReport { schema: SCHEMA, model, n_max, status, cells_checked, series, first_mismatch })
}

#[derive(Clone, Debug, Serialize)]
pub struct BijectionRow {
    pub n: usize,
    pub dyck_pairs: usize,
    pub formula: String,
    pub one_aligned: usize,
    pub phi_image_matches: bool,
    pub phi_round_trip: bool,
    pub lift_valid: bool,
    pub lift_round_trip: bool,
}

impl BijectionRow {
    pub fn is_ok(&self) -> bool {
        self.formula == self.dyck_pairs.to_string()
            && self.dyck_pairs == self.one_aligned
            && self.phi_image_matches
            && self.phi_round_trip
            && self.lift_valid
            && self.lift_round_trip
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BijectionReport {
    pub schema: &'static str,
    pub n_max: usize,
    pub status: Status,
    pub rows: Vec<BijectionRow>,
}

/// Runs the Dyck-pair and lift checks for every `n <= n_max`.
pub fn check_bijections(n_max: usize) -> Result<BijectionReport> {
    let mut rows = Vec::new();
    for n in 0..=n_max {
        let pairs = enumerate_dyck_pairs(n);
        let aligned = enumerate_one_aligned(n);
        let mut images: Vec<_> = pairs.iter().map(phi).collect();
        images.sort();
        let phi_image_matches = images == aligned;
        let phi_round_trip = pairs.iter().all(|p| phi_inverse(&phi(p)).is_ok_and(|q| q == *p))
            && aligned.iter().all(|w| phi_inverse(w).is_ok_and(|p| phi(&p) == *w));
        let lifts: Vec<_> = aligned.iter().map(bij_s_lift).collect();
        let lift_valid = lifts.iter().all(|w| validate_s_walk(w).is_some_and(|wt| wt.is_one()));
        let lift_round_trip = lifts.iter().zip(&aligned).all(|(l, w)| bij_s_project(l).is_ok_and(|b| b == *w));
        rows.push(BijectionRow {
            n,
            dyck_pairs: pairs.len(),
            formula: noncrossing_formula(n + 1)?.to_string(),
            one_aligned: aligned.len(),
            phi_image_matches,
            phi_round_trip,
            lift_valid,
            lift_round_trip,
        });
    }
    let status = if rows.iter().all(BijectionRow::is_ok) { Status::Ok } else { Status::Mismatch };
    Ok(BijectionReport { schema: SCHEMA, n_max, status, rows })
}
