//! Layered recurrences for the two models.
//!
//! Layer `n` of the S table holds, for every end point `(i,j)`, the weighted
//! number of S walks from `(0,2)` with `n` SE steps whose Σ-encoding ends with
//! an SE step (`searrow`) or with a face-step piece (`nwarrow`).
//!
//! Layer `n` of the P table holds P walks from the origin of length `n`,
//! split by the last step of their E-encoding: SE (`searrow`), a marked step
//! or an unmarked `(-2,0)` (`nwarrow`), or an unmarked `(0,2)` (`uparrow`).
//!
//! Both recurrences read same-layer entries at `(i+2,j)` and at lower
//! ordinates, so each layer is filled with `j` ascending and, for fixed `j`,
//! `i` descending. Face-step chains are unbounded in `j`; a run targeting
//! layer `n_max` keeps only `j <= n_max - n + headroom` in layer `n`, which
//! is exact for every kept cell because an entry never depends on cells of
//! larger ordinate in its own layer nor on cells more than one unit higher
//! in the previous layer.

use crate::walk::{LatticePoint, Parity};
use crate::{Error, Model, Result};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Coefficient ring of a table.
pub trait Count: Clone + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign_ref(&mut self, other: &Self);
    /// Applies the marker of an SE step that ends at ordinate parity `end`.
    fn mark_se(&mut self, end: Parity);
}

impl Count for BigUint {
    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }

    fn mark_se(&mut self, _end: Parity) {}
}

/// Polynomial in `u, v`: SE steps ending at odd ordinate contribute `u`,
/// those ending at even ordinate contribute `v`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UvCount(pub BTreeMap<(u32, u32), BigUint>);

impl UvCount {
    pub fn coeff(&self, a: u32, b: u32) -> BigUint {
        self.0.get(&(a, b)).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &BigUint)> {
        self.0.iter().map(|(k, v)| (*k, v))
    }

    /// Value at `u = v = 1`.
    pub fn total(&self) -> BigUint {
        self.0.values().sum()
    }
}

impl Count for UvCount {
    fn zero() -> Self {
        UvCount::default()
    }

    fn one() -> Self {
        UvCount(BTreeMap::from([((0, 0), <BigUint as One>::one())]))
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn add_assign_ref(&mut self, other: &Self) {
        for (k, v) in &other.0 {
            *self.0.entry(*k).or_default() += v;
        }
    }

    fn mark_se(&mut self, end: Parity) {
        let shift = match end {
            Parity::Odd => (1, 0),
            Parity::Even => (0, 1),
        };
        self.0 = std::mem::take(&mut self.0)
            .into_iter()
            .map(|((a, b), c)| ((a + shift.0, b + shift.1), c))
            .collect();
    }
}

/// Dense `(i,j)` grid, `0 <= i <= imax`, `0 <= j <= jmax`.
#[derive(Clone, Debug)]
struct Grid<T> {
    imax: i64,
    jmax: i64,
    cells: Vec<T>,
}

impl<T: Count> Grid<T> {
    fn new(imax: i64, jmax: i64) -> Self {
        let size = ((imax + 1) * (jmax + 1)).max(0) as usize;
        Grid { imax, jmax, cells: vec![T::zero(); size] }
    }

    fn index(&self, i: i64, j: i64) -> Option<usize> {
        (0..=self.imax)
            .contains(&i)
            .then_some(())
            .filter(|_| (0..=self.jmax).contains(&j))
            .map(|_| (j * (self.imax + 1) + i) as usize)
    }

    fn get(&self, i: i64, j: i64) -> Option<&T> {
        self.index(i, j).map(|k| &self.cells[k])
    }

    fn set(&mut self, i: i64, j: i64, v: T) {
        let k = self.index(i, j).expect("cell inside grid");
        self.cells[k] = v;
    }
}

/// One layer: one grid per family.
#[derive(Clone, Debug)]
pub struct Layer<T> {
    n: usize,
    families: Vec<Grid<T>>,
}

impl<T: Count> Layer<T> {
    fn new(n: usize, families: usize, jmax: i64) -> Self {
        Layer { n, families: (0..families).map(|_| Grid::new(n as i64, jmax)).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Highest ordinate held by this layer.
    pub fn height(&self) -> i64 {
        self.families[0].jmax
    }

    /// Entry of `family` at `(i,j)`: zero outside `0 <= i <= n`, `j >= 0`;
    /// `None` above the height bound.
    pub fn entry(&self, family: usize, i: i64, j: i64) -> Option<T> {
        if i < 0 || j < 0 || i > self.n as i64 {
            return Some(T::zero());
        }
        self.families[family].get(i, j).cloned()
    }

    /// Sum over all families at a cell.
    pub fn total(&self, i: i64, j: i64) -> Option<T> {
        let mut acc = T::zero();
        for f in 0..self.families.len() {
            acc.add_assign_ref(&self.entry(f, i, j)?);
        }
        Some(acc)
    }

    fn peek(&self, family: usize, i: i64, j: i64) -> Option<&T> {
        self.families[family].get(i, j)
    }
}

/// Running tally of nontrivial coefficient additions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub additions: u64,
}

impl Tally {
    fn acc<T: Count>(&mut self, dst: &mut T, src: Option<&T>) {
        if let Some(s) = src {
            if !s.is_zero() {
                dst.add_assign_ref(s);
                self.additions += 1;
            }
        }
    }
}

pub const SE: usize = 0;
pub const NW: usize = 1;
pub const UP: usize = 2;

/// Height budget of a run: layer `n` keeps `j <= n_max - n + headroom`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub n_max: usize,
    pub headroom: usize,
}

impl Bounds {
    pub fn new(n_max: usize, headroom: usize) -> Self {
        Bounds { n_max, headroom }
    }

    pub fn height(&self, n: usize) -> i64 {
        (self.n_max - n + self.headroom) as i64
    }
}

/// Default headroom: targets on the axis or at ordinate 1 or 2.
pub const DEFAULT_HEADROOM: usize = 2;

fn s_seed<T: Count>(bounds: Bounds) -> Result<Layer<T>> {
    let h = bounds.height(0);
    if h < 2 {
        return Err(Error::InvalidArgument("S tables need height at least 2 in layer 0".into()));
    }
    let mut layer = Layer::new(0, 2, h);
    layer.families[SE].set(0, 2, T::one());
    Ok(layer)
}

fn s_advance<T: Count>(prev: &Layer<T>, bounds: Bounds, tally: &mut Tally) -> Layer<T> {
    let n = prev.n + 1;
    let h = bounds.height(n);
    let mut cur = Layer::new(n, 2, h);
    for j in 0..=h {
        for i in 0..=n as i64 {
            let mut v = T::zero();
            tally.acc(&mut v, prev.peek(SE, i - 1, j + 1));
            tally.acc(&mut v, prev.peek(NW, i - 1, j + 1));
            if !v.is_zero() {
                v.mark_se(Parity::of(j));
                cur.families[SE].set(i, j, v);
            }
        }
    }
    for j in 0..=h {
        for i in (0..=n as i64).rev() {
            let mut v = T::zero();
            // heads (-2,2), then (-1,3) from even or (-3,1) from odd ordinate
            let (hi, hj) = if j % 2 == 1 { (i + 1, j - 3) } else { (i + 3, j - 1) };
            for f in [SE, NW] {
                tally.acc(&mut v, cur.peek(f, i + 2, j - 2));
                tally.acc(&mut v, cur.peek(f, hi, hj));
            }
            // continuations (-2,0) and (0,2)
            tally.acc(&mut v, cur.peek(NW, i + 2, j));
            tally.acc(&mut v, cur.peek(NW, i, j - 2));
            if !v.is_zero() {
                cur.families[NW].set(i, j, v);
            }
        }
    }
    cur
}

fn p_seed<T: Count>(bounds: Bounds) -> Layer<T> {
    let mut layer = Layer::new(0, 3, bounds.height(0));
    layer.families[SE].set(0, 0, T::one());
    layer
}

fn p_advance<T: Count>(prev: &Layer<T>, bounds: Bounds, tally: &mut Tally) -> Layer<T> {
    let n = prev.n + 1;
    let h = bounds.height(n);
    let mut cur = Layer::new(n, 3, h);
    let all = [SE, NW, UP];
    for j in 0..=h {
        for i in 0..=n as i64 {
            let mut v = T::zero();
            for f in all {
                tally.acc(&mut v, prev.peek(f, i - 1, j + 1));
            }
            if !v.is_zero() {
                v.mark_se(Parity::of(j));
                cur.families[SE].set(i, j, v);
            }
        }
    }
    for j in 0..=h {
        for i in (0..=n as i64).rev() {
            let mut v = T::zero();
            // marked (-1,1); marked (-2,0) from odd or marked (0,2) from even ordinate
            let (mi, mj) = if j % 2 == 1 { (i + 2, j) } else { (i, j - 2) };
            for f in all {
                tally.acc(&mut v, prev.peek(f, i + 1, j - 1));
                tally.acc(&mut v, prev.peek(f, mi, mj));
            }
            // unmarked (-2,0)
            tally.acc(&mut v, cur.peek(NW, i + 2, j));
            if !v.is_zero() {
                cur.families[NW].set(i, j, v);
            }
        }
        for i in 0..=n as i64 {
            // unmarked (0,2)
            let mut v = T::zero();
            tally.acc(&mut v, cur.peek(NW, i, j - 2));
            tally.acc(&mut v, cur.peek(UP, i, j - 2));
            if !v.is_zero() {
                cur.families[UP].set(i, j, v);
            }
        }
    }
    cur
}

/// Runs the recurrence of `model` layer by layer, keeping only the previous
/// layer, and hands every layer (including layer 0) to `visit`.
pub fn sweep<T, F>(model: Model, bounds: Bounds, mut visit: F) -> Result<Tally>
where
    T: Count,
    F: FnMut(&Layer<T>),
{
    let mut tally = Tally::default();
    let mut layer = match model {
        Model::S => s_seed(bounds)?,
        Model::P => p_seed(bounds),
    };
    visit(&layer);
    for _ in 0..bounds.n_max {
        layer = match model {
            Model::S => s_advance(&layer, bounds, &mut tally),
            Model::P => p_advance(&layer, bounds, &mut tally),
        };
        visit(&layer);
    }
    Ok(tally)
}

/// A fully retained table: every layer `0..=n_max`.
#[derive(Clone, Debug)]
pub struct DpTable<T> {
    model: Model,
    bounds: Bounds,
    layers: Vec<Layer<T>>,
    tally: Tally,
}

pub type DpTableS<T = BigUint> = DpTable<T>;
pub type DpTableP<T = BigUint> = DpTable<T>;

impl<T: Count> DpTable<T> {
    pub fn build(model: Model, bounds: Bounds) -> Result<Self> {
        let mut layers = Vec::with_capacity(bounds.n_max + 1);
        let tally = sweep(model, bounds, |l: &Layer<T>| layers.push(l.clone()))?;
        Ok(DpTable { model, bounds, layers, tally })
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn n_max(&self) -> usize {
        self.bounds.n_max
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn tally(&self) -> Tally {
        self.tally
    }

    pub fn layer(&self, n: usize) -> Option<&Layer<T>> {
        self.layers.get(n)
    }

    fn cell(&self, family: usize, n: usize, i: i64, j: i64) -> Result<T> {
        let layer = self
            .layer(n)
            .ok_or_else(|| Error::InvalidArgument(format!("layer {n} beyond n_max {}", self.n_max())))?;
        layer
            .entry(family, i, j)
            .ok_or(Error::OutOfTable { n, i, j, bound: layer.height() })
    }

    pub fn searrow(&self, n: usize, i: i64, j: i64) -> Result<T> {
        self.cell(SE, n, i, j)
    }

    pub fn nwarrow(&self, n: usize, i: i64, j: i64) -> Result<T> {
        self.cell(NW, n, i, j)
    }

    /// The P table's `uparrow` family; fails on an S table.
    pub fn uparrow(&self, n: usize, i: i64, j: i64) -> Result<T> {
        if self.model != Model::P {
            return Err(Error::InvalidArgument("the S table has no uparrow family".into()));
        }
        self.cell(UP, n, i, j)
    }

    /// Number (weight) of walks of the model with layer index `n` ending at
    /// `target`: the sum over all families.
    pub fn count_to(&self, n: usize, target: LatticePoint) -> Result<T> {
        let layer = self
            .layer(n)
            .ok_or_else(|| Error::InvalidArgument(format!("layer {n} beyond n_max {}", self.n_max())))?;
        layer.total(target.x, target.y).ok_or(Error::OutOfTable {
            n,
            i: target.x,
            j: target.y,
            bound: layer.height(),
        })
    }
}

/// S table over layers `0..=n_max` with the default headroom.
pub fn run_s_dp(n_max: usize) -> Result<DpTableS> {
    DpTable::build(Model::S, Bounds::new(n_max, DEFAULT_HEADROOM))
}

/// S table with SE steps marked by `u` (ending at odd ordinate) or `v`.
pub fn run_s_dp_refined(n_max: usize) -> Result<DpTableS<UvCount>> {
    DpTable::build(Model::S, Bounds::new(n_max, DEFAULT_HEADROOM))
}

pub fn run_p_dp(n_max: usize) -> Result<DpTableP> {
    DpTable::build(Model::P, Bounds::new(n_max, DEFAULT_HEADROOM))
}

pub fn run_p_dp_refined(n_max: usize) -> Result<DpTableP<UvCount>> {
    DpTable::build(Model::P, Bounds::new(n_max, DEFAULT_HEADROOM))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_layers() {
        let s = run_s_dp(0).unwrap();
        let l0 = s.layer(0).unwrap();
        for j in 0..=2 {
            for i in 0..=0 {
                let expect = u32::from((i, j) == (0, 2));
                assert_eq!(s.searrow(0, i, j).unwrap(), BigUint::from(expect));
                assert!(Count::is_zero(&l0.entry(NW, i, j).unwrap()));
            }
        }
        let p = run_p_dp(0).unwrap();
        assert_eq!(p.searrow(0, 0, 0).unwrap(), <BigUint as One>::one());
        assert!(Count::is_zero(&p.searrow(0, 0, 2).unwrap()));
    }

    #[test]
    fn s_table_small_values() {
        let s = run_s_dp(4).unwrap();
        assert_eq!(s.searrow(4, 2, 0).unwrap(), BigUint::from(1u32));
        assert_eq!(s.searrow(3, 2, 0).unwrap(), BigUint::from(0u32));
        assert!(s.searrow(0, 0, 7).is_err());
        assert!(s.uparrow(1, 0, 0).is_err());
    }

    #[test]
    fn p_axis_sums() {
        let p = run_p_dp(5).unwrap();
        let axis = |n: usize| -> BigUint { (0..=n as i64).map(|i| p.searrow(n, i, 0).unwrap()).sum() };
        assert_eq!(axis(3), BigUint::from(1u32));
        assert_eq!(axis(4), BigUint::from(0u32));
        assert_eq!(axis(5), BigUint::from(3u32));
        assert_eq!(p.count_to(0, LatticePoint::ORIGIN).unwrap(), <BigUint as One>::one());
    }

    #[test]
    fn refined_marks_split_by_parity() {
        let mut c = UvCount::one();
        c.mark_se(Parity::Odd);
        c.mark_se(Parity::Even);
        c.mark_se(Parity::Odd);
        assert_eq!(c.coeff(2, 1), <BigUint as One>::one());
        assert_eq!(c.total(), <BigUint as One>::one());
    }

    #[test]
    fn layers_are_deterministic() {
        let a = run_s_dp(12).unwrap();
        let b = run_s_dp(12).unwrap();
        for n in 0..=12 {
            for j in 0..=a.layer(n).unwrap().height() {
                for i in 0..=n as i64 {
                    assert_eq!(a.searrow(n, i, j).unwrap(), b.searrow(n, i, j).unwrap());
                }
            }
        }
        assert_eq!(a.tally(), b.tally());
    }
}
