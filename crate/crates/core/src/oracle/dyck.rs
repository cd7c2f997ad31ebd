//! Non-crossing Dyck pairs, 1-aligned walks and the bijections between them
//! and the extremal S walks.

use crate::walk::{validate_s_walk, LatticePoint, Step, TandemWalk, S_START};
use crate::{Error, Result};
use num_bigint::BigUint;
use serde::Serialize;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum DyckStep {
    E,
    N,
}

/// A pair `(D, D')` of Dyck walks of length `2n` where every N step of `D'`
/// is weakly left of the N step of `D` at the same height.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DyckPair {
    pub d: Vec<DyckStep>,
    pub d_prime: Vec<DyckStep>,
    pub n: usize,
}

fn is_dyck(p: &[DyckStep], n: usize) -> bool {
    if p.len() != 2 * n {
        return false;
    }
    let mut h = 0i64;
    for s in p {
        h += if *s == DyckStep::N { 1 } else { -1 };
        if h < 0 {
            return false;
        }
    }
    h == 0
}

/// Abscissa of the N step leaving height `y`, for every `y`.
fn north_abscissas(p: &[DyckStep]) -> Vec<i64> {
    let mut x = 0;
    let mut out = Vec::new();
    for s in p {
        match s {
            DyckStep::E => x += 1,
            DyckStep::N => out.push(x),
        }
    }
    out
}

impl DyckPair {
    pub fn new(d: Vec<DyckStep>, d_prime: Vec<DyckStep>) -> Result<Self> {
        let n = d.len() / 2;
        if !is_dyck(&d, n) || !is_dyck(&d_prime, n) {
            return Err(Error::Rejected("not a Dyck walk".into()));
        }
        let pair = DyckPair { d, d_prime, n };
        if !pair.is_noncrossing() {
            return Err(Error::Rejected("pair is crossing".into()));
        }
        Ok(pair)
    }

    pub fn is_noncrossing(&self) -> bool {
        north_abscissas(&self.d_prime).iter().zip(north_abscissas(&self.d)).all(|(a, b)| *a <= b)
    }
}

impl fmt::Display for DyckPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = |p: &[DyckStep]| p.iter().map(|s| if *s == DyckStep::N { 'N' } else { 'E' }).collect::<String>();
        write!(f, "({}, {})", word(&self.d), word(&self.d_prime))
    }
}

/// All Dyck walks of length `2n`, lexicographic with `E < N`.
pub fn dyck_paths(n: usize) -> Vec<Vec<DyckStep>> {
    fn go(n: usize, norths: usize, easts: usize, cur: &mut Vec<DyckStep>, out: &mut Vec<Vec<DyckStep>>) {
        if cur.len() == 2 * n {
            out.push(cur.clone());
            return;
        }
        if easts < norths {
            cur.push(DyckStep::E);
            go(n, norths, easts + 1, cur, out);
            cur.pop();
        }
        if norths < n {
            cur.push(DyckStep::N);
            go(n, norths + 1, easts, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, 0, 0, &mut Vec::new(), &mut out);
    out
}

/// All non-crossing pairs of Dyck walks of length `2n`.
pub fn enumerate_dyck_pairs(n: usize) -> Vec<DyckPair> {
    let paths = dyck_paths(n);
    let xs: Vec<Vec<i64>> = paths.iter().map(|p| north_abscissas(p)).collect();
    let mut out = Vec::new();
    for (d, xd) in paths.iter().zip(&xs) {
        for (dp, xdp) in paths.iter().zip(&xs) {
            if xdp.iter().zip(xd).all(|(a, b)| a <= b) {
                out.push(DyckPair { d: d.clone(), d_prime: dp.clone(), n });
            }
        }
    }
    out
}

pub fn catalan(n: usize) -> BigUint {
    let mut c = BigUint::from(1u32);
    for k in 0..n as u64 {
        c = c * (2 * (2 * k + 1)) / (k + 2);
    }
    c
}

/// `Cat(a+1) Cat(a-1) - Cat(a)^2`, the number of non-crossing Dyck pairs of
/// length `2a - 2`.
pub fn noncrossing_formula(a: usize) -> Result<BigUint> {
    if a == 0 {
        return Err(Error::InvalidArgument("noncrossing_formula needs a >= 1".into()));
    }
    let ca = catalan(a);
    Ok(catalan(a + 1) * catalan(a - 1) - &ca * &ca)
}

/// A quadrant walk from the origin to the x-axis whose face-steps all have
/// `dy = 1`; it has as many face-steps as SE steps.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OneAlignedWalk(TandemWalk);

impl OneAlignedWalk {
    pub fn new(w: TandemWalk) -> Result<Self> {
        let reject = |why: &str| Err(Error::Rejected(format!("{why}: {w}")));
        if w.start != LatticePoint::ORIGIN {
            return reject("1-aligned walks start at the origin");
        }
        if w.steps.iter().any(|s| !s.is_se() && s.dy() != 1) {
            return reject("face-step with dy != 1");
        }
        if !w.in_quadrant() || w.end().y != 0 {
            return reject("not a quadrant walk ending on the x-axis");
        }
        Ok(OneAlignedWalk(w))
    }

    pub fn walk(&self) -> &TandemWalk {
        &self.0
    }

    /// Number of SE steps.
    pub fn n(&self) -> usize {
        self.0.se_count()
    }
}

/// All walks of the family with `n` SE steps, lexicographic by steps.
pub fn enumerate_one_aligned(n: usize) -> Vec<OneAlignedWalk> {
    fn go(n: usize, pos: LatticePoint, se: usize, faces: usize, cur: &mut Vec<Step>, out: &mut Vec<OneAlignedWalk>) {
        if se == n && faces == n {
            out.push(OneAlignedWalk(TandemWalk::new(LatticePoint::ORIGIN, cur.clone())));
            return;
        }
        let se_left = (n - se) as i64;
        if faces < n && pos.y < se_left {
            for i in (0..=pos.x).rev() {
                let s = Step::face(i, 1).expect("face-step");
                cur.push(s);
                go(n, pos + s, se, faces + 1, cur, out);
                cur.pop();
            }
        }
        if se < n && pos.y >= 1 {
            cur.push(Step::SE);
            go(n, pos + Step::SE, se + 1, faces, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, LatticePoint::ORIGIN, 0, 0, &mut Vec::new(), &mut out);
    out
}

/// The walk visiting `(alpha(p), beta(p))` for the points `p` of `D` after
/// the origin: `alpha` is the horizontal distance from `p` to the N step of
/// `D'` arriving at the height of `p`, `beta` the height of `p` above the
/// diagonal.
pub fn phi(pair: &DyckPair) -> OneAlignedWalk {
    let xdp = north_abscissas(&pair.d_prime);
    let (mut x, mut y) = (0i64, 0i64);
    let mut prev = LatticePoint::ORIGIN;
    let mut steps = Vec::with_capacity(2 * pair.n);
    for s in &pair.d {
        match s {
            DyckStep::E => x += 1,
            DyckStep::N => y += 1,
        }
        let p = LatticePoint::new(x - xdp[(y - 1) as usize], y - x);
        steps.push(Step::new(p.x - prev.x, p.y - prev.y).expect("phi produces tandem steps"));
        prev = p;
    }
    OneAlignedWalk(TandemWalk::new(LatticePoint::ORIGIN, steps))
}

pub fn phi_inverse(w: &OneAlignedWalk) -> Result<DyckPair> {
    let steps = &w.walk().steps;
    let n = w.n();
    if steps.len() != 2 * n {
        return Err(Error::Rejected(format!("face-step count differs from SE count: {}", w.walk())));
    }
    let d: Vec<DyckStep> = steps.iter().map(|s| if s.is_se() { DyckStep::E } else { DyckStep::N }).collect();
    let mut arrival: Vec<Option<i64>> = vec![None; n];
    let (mut x, mut y) = (0i64, 0i64);
    for (s, p) in d.iter().zip(w.walk().points().skip(1)) {
        match s {
            DyckStep::E => x += 1,
            DyckStep::N => y += 1,
        }
        if y == 0 {
            return Err(Error::Rejected("walk starts with a SE step".into()));
        }
        let xprime = x - p.x;
        match arrival[(y - 1) as usize] {
            Some(v) if v != xprime => return Err(Error::Rejected("inconsistent second Dyck walk".into())),
            _ => arrival[(y - 1) as usize] = Some(xprime),
        }
    }
    let mut d_prime = Vec::with_capacity(2 * n);
    let mut cx = 0i64;
    for a in arrival {
        let a = a.ok_or_else(|| Error::Rejected("missing height".into()))?;
        if a < cx {
            return Err(Error::Rejected("second Dyck walk is not monotone".into()));
        }
        d_prime.extend(std::iter::repeat_n(DyckStep::E, (a - cx) as usize));
        d_prime.push(DyckStep::N);
        cx = a;
    }
    d_prime.extend(std::iter::repeat_n(DyckStep::E, (n as i64 - cx).max(0) as usize));
    let pair = DyckPair::new(d, d_prime)?;
    if phi(&pair) != *w {
        return Err(Error::Rejected("walk is not in the image of phi".into()));
    }
    Ok(pair)
}

/// Lifts a 1-aligned walk to an S walk from `(0,2)` with unit weight.
pub fn bij_s_lift(w: &OneAlignedWalk) -> TandemWalk {
    let mut steps = vec![Step::SE, Step::SE];
    for s in &w.walk().steps {
        if s.is_se() {
            steps.extend([Step::SE, Step::SE]);
        } else {
            steps.extend([Step::face(2 * -s.dx() + 1, 3).expect("face-step"), Step::SE]);
        }
    }
    let d = w.walk().end().x;
    steps.extend([Step::face(2 * d + 2, 2).expect("face-step"), Step::SE, Step::SE]);
    TandemWalk::new(S_START, steps)
}

/// Inverse of [`bij_s_lift`]; rejects every S walk outside its image.
pub fn bij_s_project(w: &TandemWalk) -> Result<OneAlignedWalk> {
    let reject = |why: &str| Error::Rejected(format!("{why}: {w}"));
    if validate_s_walk(w).is_none() {
        return Err(reject("not an S walk"));
    }
    let s = &w.steps;
    if s.len() < 5 || s[0] != Step::SE || s[1] != Step::SE {
        return Err(reject("does not start with two SE steps"));
    }
    let tail = &s[s.len() - 3..];
    if tail[1] != Step::SE || tail[2] != Step::SE || tail[0].is_se() || tail[0].dy() != 2 {
        return Err(reject("does not end with a (-2d-2,2) step and two SE steps"));
    }
    let body = &s[2..s.len() - 3];
    if !body.len().is_multiple_of(2) {
        return Err(reject("odd body length"));
    }
    let mut steps = Vec::with_capacity(body.len() / 2);
    for pair in body.chunks(2) {
        match (pair[0], pair[1]) {
            (a, b) if a.is_se() && b.is_se() => steps.push(Step::SE),
            (f, b) if b.is_se() && f.dy() == 3 && (-f.dx()) % 2 == 1 => {
                steps.push(Step::face((-f.dx() - 1) / 2, 1).expect("face-step"))
            }
            _ => return Err(reject("body is not made of SE,SE and (-2i-1,3),SE blocks")),
        }
    }
    let base = OneAlignedWalk::new(TandemWalk::new(LatticePoint::ORIGIN, steps)).map_err(|_| reject("projection is not 1-aligned"))?;
    if base.walk().se_count() != base.walk().face_count() || bij_s_lift(&base) != *w {
        return Err(reject("not in the image of the lift"));
    }
    Ok(base)
}
