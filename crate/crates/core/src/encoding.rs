//! Small-step encodings of aggregated face-steps.
//!
//! P walks are rewritten over `E = {(1,-1), (-2,0), (0,2), (-1,1)}` where each
//! face-step becomes one marked head followed by `l` steps `(-2,0)` and then
//! `r` steps `(0,2)`. S walks are rewritten over
//! `Σ = {(1,-1), (-2,2), (-3,1), (-1,3), (-2,0), (0,2)}`: a face-step of weight
//! `C(l+r, r)` expands to exactly that many sequences, one per interleaving of
//! its continuation steps.
//!
//! Heads are flagged `marked`; continuation steps and SE steps are not.

use crate::walk::{s_face_shape, FaceShape, LatticePoint, Parity, Step, TandemWalk};
use crate::{Error, Result};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SmallStep {
    pub dx: i64,
    pub dy: i64,
    pub marked: bool,
}

impl SmallStep {
    pub const SE: SmallStep = SmallStep { dx: 1, dy: -1, marked: false };
    pub const WEST: SmallStep = SmallStep { dx: -2, dy: 0, marked: false };
    pub const NORTH: SmallStep = SmallStep { dx: 0, dy: 2, marked: false };

    pub const fn head(dx: i64, dy: i64) -> SmallStep {
        SmallStep { dx, dy, marked: true }
    }

    fn is_continuation(self) -> bool {
        !self.marked && (self == SmallStep::WEST || self == SmallStep::NORTH)
    }
}

impl fmt::Display for SmallStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{}){}", self.dx, self.dy, if self.marked { "*" } else { "" })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SmallStepWalk {
    pub start: LatticePoint,
    pub steps: Vec<SmallStep>,
}

impl SmallStepWalk {
    pub fn end(&self) -> LatticePoint {
        self.steps.iter().fold(self.start, |p, s| LatticePoint::new(p.x + s.dx, p.y + s.dy))
    }
}

fn continuation(l: u64, r: u64) -> impl Iterator<Item = SmallStep> {
    std::iter::repeat_n(SmallStep::WEST, l as usize).chain(std::iter::repeat_n(SmallStep::NORTH, r as usize))
}

/// E-encoding of one P face-step taken from `pos`.
pub fn p_encode_face(pos: LatticePoint, step: Step) -> Result<Vec<SmallStep>> {
    let (i, j) = (-step.dx(), step.dy());
    let reject = || Error::Rejected(format!("{step} is not a P face-step from {pos}"));
    if step.is_se() || (i + j) % 2 != 0 {
        return Err(reject());
    }
    let (head, l, r) = if i % 2 == 1 {
        (SmallStep::head(-1, 1), (i - 1) / 2, (j - 1) / 2)
    } else {
        match pos.parity() {
            Parity::Even if j >= 2 => (SmallStep::head(0, 2), i / 2, (j - 2) / 2),
            Parity::Odd if i >= 2 => (SmallStep::head(-2, 0), (i - 2) / 2, j / 2),
            _ => return Err(reject()),
        }
    };
    Ok(std::iter::once(head).chain(continuation(l as u64, r as u64)).collect())
}

/// Rewrites a P-admissible walk over the marked small-step set E.
pub fn p_encode_small_steps(w: &TandemWalk) -> Result<SmallStepWalk> {
    let mut steps = Vec::new();
    for (pos, s) in w.steps_with_origin() {
        if s.is_se() {
            steps.push(SmallStep::SE);
        } else {
            steps.extend(p_encode_face(pos, s)?);
        }
    }
    Ok(SmallStepWalk { start: w.start, steps })
}

/// Inverse of [`p_encode_small_steps`]. Enforces the local succession rules:
/// unmarked `(-2,0)` only after a marked step or another unmarked `(-2,0)`;
/// unmarked `(0,2)` only after a marked step or an unmarked continuation;
/// marked `(0,2)` only from an even ordinate and marked `(-2,0)` only from an
/// odd one.
pub fn p_decode_small_steps(w: &SmallStepWalk) -> Result<TandemWalk> {
    #[derive(PartialEq)]
    enum Prev {
        Start,
        Se,
        Marked,
        West,
        North,
    }
    let mut out = Vec::new();
    let mut block: Option<(i64, i64)> = None;
    let mut prev = Prev::Start;
    let mut pos = w.start;
    let flush = |block: &mut Option<(i64, i64)>, out: &mut Vec<Step>| -> Result<()> {
        if let Some((dx, dy)) = block.take() {
            out.push(Step::new(dx, dy)?);
        }
        Ok(())
    };
    for (k, &s) in w.steps.iter().enumerate() {
        let fail = |why: &str| Error::Rejected(format!("small step {k} {s}: {why}"));
        if s == SmallStep::SE {
            flush(&mut block, &mut out)?;
            out.push(Step::SE);
            prev = Prev::Se;
        } else if s.marked {
            match (s.dx, s.dy) {
                (-1, 1) => {}
                (0, 2) if pos.parity() == Parity::Even => {}
                (-2, 0) if pos.parity() == Parity::Odd => {}
                (0, 2) | (-2, 0) => return Err(fail("marked head at wrong ordinate parity")),
                _ => return Err(fail("not a marked step of E")),
            }
            flush(&mut block, &mut out)?;
            block = Some((s.dx, s.dy));
            prev = Prev::Marked;
        } else if s == SmallStep::WEST {
            if !matches!(prev, Prev::Marked | Prev::West) {
                return Err(fail("(-2,0) must follow a marked step or (-2,0)"));
            }
            let b = block.as_mut().ok_or_else(|| fail("continuation outside a face block"))?;
            b.0 -= 2;
            prev = Prev::West;
        } else if s == SmallStep::NORTH {
            if !matches!(prev, Prev::Marked | Prev::West | Prev::North) {
                return Err(fail("(0,2) must follow a marked step or a continuation"));
            }
            let b = block.as_mut().ok_or_else(|| fail("continuation outside a face block"))?;
            b.1 += 2;
            prev = Prev::North;
        } else {
            return Err(fail("not a step of E"));
        }
        pos = LatticePoint::new(pos.x + s.dx, pos.y + s.dy);
    }
    flush(&mut block, &mut out)?;
    Ok(TandemWalk::new(w.start, out))
}

fn s_head(shape: FaceShape) -> SmallStep {
    match shape {
        FaceShape::EvenEntries { .. } => SmallStep::head(-2, 2),
        FaceShape::OddFromEven { .. } => SmallStep::head(-1, 3),
        FaceShape::OddFromOdd { .. } => SmallStep::head(-3, 1),
    }
}

fn binom(n: u64, k: u64) -> Option<u128> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for t in 0..k {
        acc = acc.checked_mul(u128::from(n - t))? / u128::from(t + 1);
    }
    Some(acc)
}

/// The `index`-th Σ-sequence of an S face-step (interleavings in
/// lexicographic order with `(-2,0)` before `(0,2)`), or `None` if the step
/// is not admissible from `pos` or `index` is out of range.
pub fn s_encode_face(pos: LatticePoint, step: Step, index: u128) -> Option<Vec<SmallStep>> {
    let shape = s_face_shape(pos, step)?;
    let (mut l, mut r) = shape.lr();
    if index >= binom(l + r, r)? {
        return None;
    }
    let mut k = index;
    let mut seq = vec![s_head(shape)];
    while l + r > 0 {
        let west_first = if l > 0 { binom(l - 1 + r, r)? } else { 0 };
        if k < west_first {
            seq.push(SmallStep::WEST);
            l -= 1;
        } else {
            k -= west_first;
            seq.push(SmallStep::NORTH);
            r -= 1;
        }
    }
    Some(seq)
}

/// All Σ-sequences of an S face-step.
pub fn s_face_interleavings(pos: LatticePoint, step: Step) -> Option<Vec<Vec<SmallStep>>> {
    let (l, r) = s_face_shape(pos, step)?.lr();
    let count = binom(l + r, r)?;
    (0..count).map(|k| s_encode_face(pos, step, k)).collect()
}

/// All Σ-encodings of an S walk; their number is the walk's weight. Fails if
/// some face-step is not S-admissible.
pub fn s_encode_small_steps(w: &TandemWalk) -> Result<Vec<SmallStepWalk>> {
    let mut partial: Vec<Vec<SmallStep>> = vec![Vec::new()];
    for (pos, s) in w.steps_with_origin() {
        if s.is_se() {
            partial.iter_mut().for_each(|p| p.push(SmallStep::SE));
            continue;
        }
        let options = s_face_interleavings(pos, s)
            .ok_or_else(|| Error::Rejected(format!("{s} is not an S face-step from {pos}")))?;
        partial = partial
            .into_iter()
            .flat_map(|p| {
                options.iter().map(move |o| {
                    let mut q = p.clone();
                    q.extend_from_slice(o);
                    q
                })
            })
            .collect();
    }
    Ok(partial
        .into_iter()
        .map(|steps| SmallStepWalk { start: w.start, steps })
        .collect())
}

/// Aggregates maximal head+continuation blocks back into face-steps.
/// Rejects a continuation directly after an SE step or at the start, and
/// heads `(-1,3)` / `(-3,1)` from the wrong ordinate parity.
pub fn s_decode_small_steps(w: &SmallStepWalk) -> Result<TandemWalk> {
    let mut out = Vec::new();
    let mut block: Option<(i64, i64)> = None;
    let mut pos = w.start;
    for (k, &s) in w.steps.iter().enumerate() {
        let fail = |why: &str| Error::Rejected(format!("small step {k} {s}: {why}"));
        if s == SmallStep::SE {
            if let Some((dx, dy)) = block.take() {
                out.push(Step::new(dx, dy)?);
            }
            out.push(Step::SE);
        } else if s.marked {
            match (s.dx, s.dy, pos.parity()) {
                (-2, 2, _) | (-1, 3, Parity::Even) | (-3, 1, Parity::Odd) => {}
                (-1, 3, _) | (-3, 1, _) => return Err(fail("head at wrong ordinate parity")),
                _ => return Err(fail("not a head of Σ")),
            }
            if let Some((dx, dy)) = block.replace((s.dx, s.dy)) {
                out.push(Step::new(dx, dy)?);
            }
        } else if s.is_continuation() {
            let b = block
                .as_mut()
                .ok_or_else(|| fail("(-2,0)/(0,2) may not follow an SE step"))?;
            b.0 += s.dx;
            b.1 += s.dy;
        } else {
            return Err(fail("not a step of Σ"));
        }
        pos = LatticePoint::new(pos.x + s.dx, pos.y + s.dy);
    }
    if let Some((dx, dy)) = block {
        out.push(Step::new(dx, dy)?);
    }
    Ok(TandemWalk::new(w.start, out))
}
