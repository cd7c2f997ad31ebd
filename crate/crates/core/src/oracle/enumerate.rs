//! Exhaustive depth-first enumeration of P and S walks.
//!
//! Candidate steps are tried in `Step` order (faces by `dx` then `dy`, SE
//! last), so listings come out in lexicographic order of their step
//! sequences.

use crate::dp::{NW, SE, UP};
use crate::walk::{
    p_step_admissible, s_face_shape, validate_p_walk, validate_s_walk, LatticePoint, Parity, Step,
    TandemWalk, WalkWeight, S_END, S_START,
};
use crate::{Error, Result};
use num_bigint::BigUint;
use std::collections::BTreeMap;

/// Largest walk length (P) or SE count (S) enumerated without an override.
pub const DEFAULT_CAP: usize = 9;

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::CapExceeded { requested: n, cap });
    }
    Ok(())
}

/// Walks ending on the x-axis, in canonical order.
#[derive(Clone, Debug)]
pub struct PEnumeration {
    pub walks: Vec<TandemWalk>,
    pub count: usize,
}

/// Weighted S walks from `(0,2)` to `(2,0)`, in canonical order.
#[derive(Clone, Debug)]
pub struct SEnumeration {
    pub walks: Vec<(TandemWalk, WalkWeight)>,
    pub total_weight: BigUint,
}

/// Walk counts keyed by `(family, x, y)` of the end point. Families follow
/// the recurrence tables: `SE` when the last step is SE, otherwise `NW` or
/// (P only) `UP` according to the last small step of the last face-step.
pub type Census = BTreeMap<(usize, i64, i64), BigUint>;

/// Face-step candidates from `pos` whose end ordinate is at most `y_max`.
fn face_candidates(pos: LatticePoint, y_max: i64) -> impl Iterator<Item = Step> {
    (-pos.x..=0).flat_map(move |dx| (0..=(y_max - pos.y)).map(move |dy| (dx, dy))).filter_map(|(dx, dy)| Step::new(dx, dy).ok())
}

/// Family of a P walk whose last step is `step`, taken from `pos`.
fn p_family(pos: LatticePoint, step: Step) -> usize {
    if step.is_se() {
        return SE;
    }
    let (i, j) = (-step.dx(), step.dy());
    // number of trailing unmarked (0,2) steps in the small-step encoding
    let r = if i % 2 == 1 {
        (j - 1) / 2
    } else {
        match pos.parity() {
            Parity::Even => j / 2 - 1,
            Parity::Odd => j / 2,
        }
    };
    if r >= 1 {
        UP
    } else {
        NW
    }
}

struct PSearch<F> {
    length: usize,
    height: i64,
    visit: F,
}

impl<F: FnMut(&[Step], LatticePoint, usize)> PSearch<F> {
    fn run(&mut self, pos: LatticePoint, path: &mut Vec<Step>, family: usize) {
        if path.len() == self.length {
            (self.visit)(path, pos, family);
            return;
        }
        let left_after = (self.length - path.len() - 1) as i64;
        let y_max = self.height + left_after;
        for step in face_candidates(pos, y_max) {
            if p_step_admissible(pos, step) {
                path.push(step);
                self.run(pos + step, path, p_family(pos, step));
                path.pop();
            }
        }
        if pos.y >= 1 && pos.y - 1 <= y_max {
            path.push(Step::SE);
            self.run(pos + Step::SE, path, SE);
            path.pop();
        }
    }
}

fn p_search<F: FnMut(&[Step], LatticePoint, usize)>(length: usize, height: i64, visit: F) {
    let mut s = PSearch { length, height, visit };
    s.run(LatticePoint::ORIGIN, &mut Vec::with_capacity(length), SE);
}

/// All nonempty P walks of the given length from the origin to the x-axis.
pub fn enumerate_p_walks(length: usize) -> Result<PEnumeration> {
    enumerate_p_walks_capped(length, DEFAULT_CAP)
}

pub fn enumerate_p_walks_capped(length: usize, cap: usize) -> Result<PEnumeration> {
    check_cap(length, cap)?;
    let mut walks = Vec::new();
    if length > 0 {
        p_search(length, 0, |steps, end, _| {
            if end.y == 0 {
                walks.push(TandemWalk::new(LatticePoint::ORIGIN, steps.to_vec()));
            }
        });
    }
    debug_assert!(walks.iter().all(|w| validate_p_walk(w, true)));
    let count = walks.len();
    Ok(PEnumeration { walks, count })
}

/// End points of all quadrant P walks of the given length with final
/// ordinate at most `height`.
pub fn p_census(length: usize, height: i64, cap: usize) -> Result<Census> {
    check_cap(length, cap)?;
    let mut census = Census::new();
    p_search(length, height, |_, end, family| {
        if end.y <= height {
            *census.entry((family, end.x, end.y)).or_default() += 1u32;
        }
    });
    Ok(census)
}

struct SSearch<F> {
    se_count: usize,
    height: i64,
    visit: F,
}

impl<F: FnMut(&[Step], LatticePoint, usize, &BigUint)> SSearch<F> {
    fn run(&mut self, pos: LatticePoint, path: &mut Vec<Step>, used: usize, weight: &BigUint, family: usize) {
        if used == self.se_count {
            (self.visit)(path, pos, family, weight);
        }
        let left = (self.se_count - used) as i64;
        let y_max = self.height + left;
        for step in face_candidates(pos, y_max) {
            if let Some(shape) = s_face_shape(pos, step) {
                let w = weight * shape.weight().0;
                path.push(step);
                self.run(pos + step, path, used, &w, NW);
                path.pop();
            }
        }
        if left > 0 && pos.y >= 1 && pos.y - 1 < self.height + left {
            path.push(Step::SE);
            self.run(pos + Step::SE, path, used + 1, weight, SE);
            path.pop();
        }
    }
}

fn s_search<F: FnMut(&[Step], LatticePoint, usize, &BigUint)>(se_count: usize, height: i64, visit: F) {
    let mut s = SSearch { se_count, height, visit };
    s.run(S_START, &mut Vec::new(), 0, &BigUint::from(1u32), SE);
}

/// All S walks with `se_count` SE steps, with their weights.
pub fn enumerate_s_walks(se_count: usize) -> Result<SEnumeration> {
    enumerate_s_walks_capped(se_count, DEFAULT_CAP)
}

pub fn enumerate_s_walks_capped(se_count: usize, cap: usize) -> Result<SEnumeration> {
    check_cap(se_count, cap)?;
    let mut walks = Vec::new();
    let mut total_weight = BigUint::default();
    s_search(se_count, 0, |steps, end, _, w| {
        if end == S_END && steps.iter().any(|s| !s.is_se()) {
            walks.push((TandemWalk::new(S_START, steps.to_vec()), WalkWeight(w.clone())));
            total_weight += w;
        }
    });
    debug_assert!(walks.iter().all(|(w, wt)| validate_s_walk(w).as_ref() == Some(wt)));
    Ok(SEnumeration { walks, total_weight })
}

/// Weighted end points of all quadrant S walks from `(0,2)` with `se_count`
/// SE steps and final ordinate at most `height`, face-free walks included.
pub fn s_census(se_count: usize, height: i64, cap: usize) -> Result<Census> {
    check_cap(se_count, cap)?;
    let mut census = Census::new();
    s_search(se_count, height, |_, end, family, w| {
        if end.y <= height {
            *census.entry((family, end.x, end.y)).or_default() += w;
        }
    });
    Ok(census)
}
