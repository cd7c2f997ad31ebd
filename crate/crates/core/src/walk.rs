//! Steps, walks and the admissibility rules of the two models.
//!
//! A tandem walk uses the SE step `(1,-1)` and face-steps `(-i,j)` with
//! `i, j >= 0`. Which face-steps are allowed depends only on the parity of
//! the ordinate the step starts from.
//!
//! # Text form
//!
//! Walks print as
//!
//! ```text
//! start=(x,y); steps=[(dx,dy)w,(dx,dy),...]
//! ```
//!
//! where the optional decimal `w` after a step is its weight (omitted when the
//! weight is 1). An empty walk prints as `steps=[]`. Whitespace around
//! separators is accepted when parsing.

use crate::{Error, Result};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const ORIGIN: LatticePoint = LatticePoint { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        LatticePoint { x, y }
    }

    pub fn parity(self) -> Parity {
        Parity::of(self.y)
    }

    pub fn in_quadrant(self) -> bool {
        self.x >= 0 && self.y >= 0
    }
}

impl Add<Step> for LatticePoint {
    type Output = LatticePoint;

    fn add(self, s: Step) -> LatticePoint {
        LatticePoint::new(self.x + s.dx, self.y + s.dy)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Parity of an ordinate.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Ord, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(y: i64) -> Parity {
        if y.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepKind {
    Se,
    Face,
}

/// A step of a tandem walk: either `(1,-1)` or a face-step `(-i,j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    dx: i64,
    dy: i64,
}

impl Step {
    pub const SE: Step = Step { dx: 1, dy: -1 };

    pub fn new(dx: i64, dy: i64) -> Result<Step> {
        if (dx, dy) == (1, -1) || (dx <= 0 && dy >= 0) {
            Ok(Step { dx, dy })
        } else {
            Err(Error::InvalidStep { dx, dy })
        }
    }

    /// The face-step `(-i, j)`.
    pub fn face(i: i64, j: i64) -> Result<Step> {
        if i < 0 || j < 0 {
            return Err(Error::InvalidStep { dx: -i, dy: j });
        }
        Ok(Step { dx: -i, dy: j })
    }

    pub fn dx(self) -> i64 {
        self.dx
    }

    pub fn dy(self) -> i64 {
        self.dy
    }

    pub fn kind(self) -> StepKind {
        if self == Step::SE {
            StepKind::Se
        } else {
            StepKind::Face
        }
    }

    pub fn is_se(self) -> bool {
        self == Step::SE
    }
}

impl Ord for Step {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.dx, self.dy).cmp(&(other.dx, other.dy))
    }
}

impl PartialOrd for Step {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.dx, self.dy)
    }
}

/// Multiplicative walk weight; SE steps and P-model face-steps weigh 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WalkWeight(pub BigUint);

impl WalkWeight {
    pub fn one() -> Self {
        WalkWeight(BigUint::one())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }
}

impl Mul for WalkWeight {
    type Output = WalkWeight;

    fn mul(self, rhs: WalkWeight) -> WalkWeight {
        WalkWeight(self.0 * rhs.0)
    }
}

impl From<u64> for WalkWeight {
    fn from(v: u64) -> Self {
        WalkWeight(BigUint::from(v))
    }
}

impl fmt::Display for WalkWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A start point together with a step sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TandemWalk {
    pub start: LatticePoint,
    pub steps: Vec<Step>,
}

impl TandemWalk {
    pub fn new(start: LatticePoint, steps: Vec<Step>) -> Self {
        TandemWalk { start, steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// All visited points, starting with `start`.
    pub fn points(&self) -> impl Iterator<Item = LatticePoint> + '_ {
        std::iter::once(self.start).chain(self.steps.iter().scan(self.start, |p, &s| {
            *p = *p + s;
            Some(*p)
        }))
    }

    /// Each step paired with the point it starts from.
    pub fn steps_with_origin(&self) -> impl Iterator<Item = (LatticePoint, Step)> + '_ {
        self.points().zip(self.steps.iter().copied())
    }

    pub fn end(&self) -> LatticePoint {
        self.points().last().unwrap_or(self.start)
    }

    pub fn se_count(&self) -> usize {
        self.steps.iter().filter(|s| s.is_se()).count()
    }

    pub fn face_count(&self) -> usize {
        self.steps.len() - self.se_count()
    }

    pub fn in_quadrant(&self) -> bool {
        self.points().all(LatticePoint::in_quadrant)
    }

    /// Every face-step `(-i,j)` has `i + j` even.
    pub fn is_even(&self) -> bool {
        self.steps
            .iter()
            .filter(|s| !s.is_se())
            .all(|s| (s.dy - s.dx) % 2 == 0)
    }

    /// SE steps split by the parity of their start ordinate: `(even, odd)`.
    pub fn se_parity_counts(&self) -> (usize, usize) {
        self.steps_with_origin()
            .filter(|(_, s)| s.is_se())
            .fold((0, 0), |(e, o), (p, _)| match p.parity() {
                Parity::Even => (e + 1, o),
                Parity::Odd => (e, o + 1),
            })
    }

    /// Text form with per-step weights given by `weight`.
    pub fn to_text_with<F>(&self, mut weight: F) -> String
    where
        F: FnMut(LatticePoint, Step) -> Option<BigUint>,
    {
        let mut out = format!("start={}; steps=[", self.start);
        for (k, (p, s)) in self.steps_with_origin().enumerate() {
            if k > 0 {
                out.push(',');
            }
            out.push_str(&s.to_string());
            if let Some(w) = weight(p, s) {
                if !w.is_one() {
                    out.push_str(&w.to_string());
                }
            }
        }
        out.push(']');
        out
    }

    /// Parses the text form, returning the walk and the per-step weights
    /// (1 where none is written).
    pub fn parse_text(text: &str) -> Result<(TandemWalk, Vec<BigUint>)> {
        let bad = |why: &str| Error::Parse(format!("{why} in `{text}`"));
        let body = text.trim();
        let rest = body.strip_prefix("start=").ok_or_else(|| bad("missing `start=`"))?;
        let (start_txt, rest) = rest.split_once(';').ok_or_else(|| bad("missing `;`"))?;
        let start = parse_pair(start_txt.trim()).ok_or_else(|| bad("bad start point"))?;
        let rest = rest.trim();
        let list = rest
            .strip_prefix("steps=")
            .and_then(|r| r.trim().strip_prefix('['))
            .and_then(|r| r.trim_end().strip_suffix(']'))
            .ok_or_else(|| bad("missing `steps=[...]`"))?;

        let mut steps = Vec::new();
        let mut weights = Vec::new();
        let mut cursor = list.trim();
        while !cursor.is_empty() {
            let open = cursor.strip_prefix('(').ok_or_else(|| bad("expected `(`"))?;
            let close = open.find(')').ok_or_else(|| bad("unclosed step"))?;
            let (dx, dy) = parse_pair(&format!("({})", &open[..close]))
                .map(|p| (p.x, p.y))
                .ok_or_else(|| bad("bad step"))?;
            steps.push(Step::new(dx, dy)?);
            let after = &open[close + 1..];
            let (wtxt, tail) = match after.find(',') {
                Some(k) => (&after[..k], &after[k + 1..]),
                None => (after, ""),
            };
            let wtxt = wtxt.trim();
            weights.push(if wtxt.is_empty() {
                BigUint::one()
            } else {
                wtxt.parse::<BigUint>().map_err(|_| bad("bad weight"))?
            });
            cursor = tail.trim();
            if cursor.is_empty() && after.contains(',') {
                return Err(bad("trailing `,`"));
            }
        }
        if weights.iter().any(Zero::is_zero) {
            return Err(bad("zero weight"));
        }
        Ok((TandemWalk::new(start, steps), weights))
    }
}

impl fmt::Display for TandemWalk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text_with(|_, _| None))
    }
}

fn parse_pair(s: &str) -> Option<LatticePoint> {
    let inner = s.trim().strip_prefix('(')?.strip_suffix(')')?;
    let (a, b) = inner.split_once(',')?;
    Some(LatticePoint::new(a.trim().parse().ok()?, b.trim().parse().ok()?))
}

/// Whether `step` may be taken from `pos` in the P model.
///
/// SE is always allowed; a face-step `(-i,j)` needs `i + j` even, `j >= 1`
/// from an even ordinate and `i >= 1` from an odd one.
pub fn p_step_admissible(pos: LatticePoint, step: Step) -> bool {
    if step.is_se() {
        return true;
    }
    let (i, j) = (-step.dx, step.dy);
    if (i + j) % 2 != 0 {
        return false;
    }
    match pos.parity() {
        Parity::Even => j >= 1,
        Parity::Odd => i >= 1,
    }
}

/// Shape of an S-admissible face-step `(-i,j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FaceShape {
    /// `i = 2l+2, j = 2r+2`, any start parity.
    EvenEntries { l: u64, r: u64 },
    /// `i = 2l+1, j = 2r+3`, start ordinate even.
    OddFromEven { l: u64, r: u64 },
    /// `i = 2l+3, j = 2r+1`, start ordinate odd.
    OddFromOdd { l: u64, r: u64 },
}

impl FaceShape {
    pub fn lr(self) -> (u64, u64) {
        match self {
            FaceShape::EvenEntries { l, r }
            | FaceShape::OddFromEven { l, r }
            | FaceShape::OddFromOdd { l, r } => (l, r),
        }
    }

    pub fn weight(self) -> WalkWeight {
        let (l, r) = self.lr();
        WalkWeight(num_integer::binomial(BigUint::from(l + r), BigUint::from(r)))
    }

    pub fn step(self) -> Step {
        let (l, r) = self.lr();
        let (l, r) = (l as i64, r as i64);
        let (i, j) = match self {
            FaceShape::EvenEntries { .. } => (2 * l + 2, 2 * r + 2),
            FaceShape::OddFromEven { .. } => (2 * l + 1, 2 * r + 3),
            FaceShape::OddFromOdd { .. } => (2 * l + 3, 2 * r + 1),
        };
        Step { dx: -i, dy: j }
    }
}

/// Classifies a face-step taken from `pos` in the S model; `None` if the step
/// is SE or not admissible there.
pub fn s_face_shape(pos: LatticePoint, step: Step) -> Option<FaceShape> {
    if step.is_se() {
        return None;
    }
    let (i, j) = (-step.dx, step.dy);
    if (i + j) % 2 != 0 {
        return None;
    }
    let half = |v: i64| u64::try_from(v / 2).ok();
    if i % 2 == 0 {
        if i >= 2 && j >= 2 {
            return Some(FaceShape::EvenEntries { l: half(i - 2)?, r: half(j - 2)? });
        }
        return None;
    }
    match pos.parity() {
        Parity::Even if j >= 3 => Some(FaceShape::OddFromEven { l: half(i - 1)?, r: half(j - 3)? }),
        Parity::Odd if i >= 3 => Some(FaceShape::OddFromOdd { l: half(i - 3)?, r: half(j - 1)? }),
        _ => None,
    }
}

/// Binomial weight of an S-admissible face-step, or `None` when the step is
/// not admissible from `pos`.
pub fn s_face_weight(pos: LatticePoint, step: Step) -> Option<WalkWeight> {
    s_face_shape(pos, step).map(FaceShape::weight)
}

/// Checks a walk against the P rules: quadrant confinement, per-step
/// admissibility and optionally a final ordinate of 0.
pub fn validate_p_walk(w: &TandemWalk, require_axis_end: bool) -> bool {
    w.in_quadrant()
        && w.steps_with_origin().all(|(p, s)| p_step_admissible(p, s))
        && (!require_axis_end || w.end().y == 0)
}

pub const S_START: LatticePoint = LatticePoint::new(0, 2);
pub const S_END: LatticePoint = LatticePoint::new(2, 0);

/// Weight of a walk counted by the S model: from `(0,2)` to `(2,0)` in the
/// quadrant with at least one face-step, all face-steps admissible.
pub fn validate_s_walk(w: &TandemWalk) -> Option<WalkWeight> {
    if w.start != S_START || w.end() != S_END || !w.in_quadrant() || w.face_count() == 0 {
        return None;
    }
    s_walk_weight(w)
}

/// Product of the face-step weights, `None` if some face-step is not
/// S-admissible. No endpoint or quadrant condition.
pub fn s_walk_weight(w: &TandemWalk) -> Option<WalkWeight> {
    w.steps_with_origin()
        .filter(|(_, s)| !s.is_se())
        .try_fold(WalkWeight::one(), |acc, (p, s)| s_face_weight(p, s).map(|wt| acc * wt))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64) -> LatticePoint {
        LatticePoint::new(x, y)
    }

    fn f(dx: i64, dy: i64) -> Step {
        Step::new(dx, dy).unwrap()
    }

    const SE: Step = Step::SE;

    #[test]
    fn step_constructor_rejects_mixed_signs() {
        assert!(Step::new(1, 1).is_err());
        assert!(Step::new(-1, -1).is_err());
        assert!(Step::new(2, -2).is_err());
        assert_eq!(Step::new(1, -1).unwrap().kind(), StepKind::Se);
        assert_eq!(Step::new(0, 0).unwrap().kind(), StepKind::Face);
    }

    #[test]
    fn p_admissibility_examples() {
        assert!(p_step_admissible(pt(0, 0), f(0, 2)));
        assert!(!p_step_admissible(pt(0, 0), f(-2, 0)));
        assert!(!p_step_admissible(pt(1, 1), f(0, 2)));
        assert!(p_step_admissible(pt(1, 1), f(-2, 0)));
        assert!(!p_step_admissible(pt(3, 0), f(-1, 2)));
        assert!(p_step_admissible(pt(3, 1), SE));
    }

    #[test]
    fn s_weight_examples() {
        assert_eq!(s_face_weight(pt(2, 0), f(-2, 2)), Some(WalkWeight::from(1)));
        assert_eq!(s_face_weight(pt(4, 0), f(-3, 5)), Some(WalkWeight::from(2)));
        assert_eq!(s_face_weight(pt(1, 1), f(-1, 3)), None);
        assert_eq!(s_face_weight(pt(3, 1), f(-3, 1)), Some(WalkWeight::from(1)));
        assert_eq!(s_face_weight(pt(3, 0), f(-3, 1)), None);
        assert_eq!(s_face_weight(pt(6, 1), f(-6, 6)), Some(WalkWeight::from(6)));
        assert_eq!(s_face_weight(pt(2, 0), SE), None);
        assert_eq!(s_face_weight(pt(2, 0), f(0, 2)), None);
    }

    #[test]
    fn weight_is_one_iff_shape_is_thin() {
        for l in 0..5u64 {
            for r in 0..5u64 {
                for shape in [
                    FaceShape::EvenEntries { l, r },
                    FaceShape::OddFromEven { l, r },
                    FaceShape::OddFromOdd { l, r },
                ] {
                    let w = shape.weight();
                    assert!(w.value() >= &BigUint::one());
                    assert_eq!(w.is_one(), l * r == 0);
                    let start = match shape {
                        FaceShape::OddFromOdd { .. } => pt(20, 1),
                        _ => pt(20, 0),
                    };
                    assert_eq!(s_face_shape(start, shape.step()), Some(shape));
                }
            }
        }
    }

    #[test]
    fn p_walk_validation() {
        let w = TandemWalk::new(LatticePoint::ORIGIN, vec![f(0, 2), SE, SE]);
        assert!(validate_p_walk(&w, true));
        assert!(!validate_p_walk(&TandemWalk::new(LatticePoint::ORIGIN, vec![SE]), false));
        let w = TandemWalk::new(LatticePoint::ORIGIN, vec![f(0, 2), f(-2, 0)]);
        assert!(!validate_p_walk(&w, false));
        let w = TandemWalk::new(LatticePoint::ORIGIN, vec![f(0, 2), SE]);
        assert!(validate_p_walk(&w, false));
        assert!(!validate_p_walk(&w, true));
    }

    #[test]
    fn s_walk_validation() {
        let w = TandemWalk::new(S_START, vec![SE, SE, f(-2, 2), SE, SE]);
        assert_eq!(validate_s_walk(&w), Some(WalkWeight::one()));
        assert_eq!(validate_s_walk(&TandemWalk::new(S_START, vec![SE, SE])), None);
        let w = TandemWalk::new(S_START, vec![SE, SE, f(-1, 3), SE, SE, SE]);
        assert_eq!(validate_s_walk(&w), None);
    }

    #[test]
    fn text_form_examples() {
        let w = TandemWalk::new(pt(0, 2), vec![SE, SE, f(-3, 5)]);
        assert_eq!(w.to_string(), "start=(0,2); steps=[(1,-1),(1,-1),(-3,5)]");
        let weighted = w.to_text_with(|p, s| s_face_weight(p, s).map(|x| x.0));
        assert_eq!(weighted, "start=(0,2); steps=[(1,-1),(1,-1),(-3,5)2]");
        let (back, ws) = TandemWalk::parse_text(&weighted).unwrap();
        assert_eq!(back, w);
        assert_eq!(ws, vec![1u32.into(), 1u32.into(), 2u32.into()]);
        let (empty, ws) = TandemWalk::parse_text("start=(0,0); steps=[]").unwrap();
        assert!(empty.is_empty() && ws.is_empty());
        assert!(TandemWalk::parse_text("start=(0,0); steps=[(1,1)]").is_err());
        assert!(TandemWalk::parse_text("start=(0,0); steps=[(1,-1),]").is_err());
        assert!(TandemWalk::parse_text("steps=[]").is_err());
    }

    #[test]
    fn se_parity_split() {
        let w = TandemWalk::new(S_START, vec![SE, SE, f(-2, 2), SE, SE]);
        assert_eq!(w.se_parity_counts(), (2, 2));
    }
}
