//! Monte Carlo simulation of the free P and S random walks.
//!
//! P walk: from ordinate parity `e`/`o`, a step `(dx,dy)` has probability
//! `z0^((dy-dx)/2) / S(z0)` with `z0 = 1/3`. S walk: one aggregated step is
//! an SE step followed by a geometric number of face-steps, each weighted by
//! its binomial coefficient times `z0^((i+j)/2)` with `z0 = 1/4`.
//!
//! Samples are drawn in fixed chunks; chunk `c` uses the ChaCha8 stream `c`
//! of the seed, so results do not depend on the number of worker threads.

use crate::counts::{count_p_to, count_s_to};
use crate::walk::{p_step_admissible, LatticePoint, Parity, Step, S_START};
use crate::{Error, Model, Result, SCHEMA};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Geometric};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::OnceLock;

/// Samples per RNG stream.
pub const CHUNK: usize = 4096;

/// Largest `n` for which the exact survival probability is computed.
pub const EXACT_SURVIVAL_MAX_N: usize = 400;

const P_SE_PROBABILITY: f64 = 2.0 / 3.0;

struct Samplers {
    /// Failures before success, success probability `1 - 1/3`.
    p_geom: Geometric,
    /// Number of face-steps in an S aggregated step.
    s_faces: Geometric,
    /// Size `m = l + r` of an S face-step.
    s_size: Geometric,
}

fn samplers() -> &'static Samplers {
    static S: OnceLock<Samplers> = OnceLock::new();
    S.get_or_init(|| Samplers {
        p_geom: Geometric::new(2.0 / 3.0).expect("valid probability"),
        s_faces: Geometric::new(0.75).expect("valid probability"),
        s_size: Geometric::new(0.5).expect("valid probability"),
    })
}

/// Draws one P step from a point of the given ordinate parity.
pub fn sample_p_step<R: Rng + ?Sized>(parity: Parity, rng: &mut R) -> (i64, i64) {
    if rng.random::<f64>() < P_SE_PROBABILITY {
        return (1, -1);
    }
    let g = &samplers().p_geom;
    let odd_family = rng.random::<bool>();
    let mut geo = || g.sample(rng) as i64;
    if odd_family {
        let (i, j) = (geo(), geo());
        (-2 * i - 1, 2 * j + 1)
    } else {
        match parity {
            Parity::Even => {
                let (i, j) = (geo(), 1 + geo());
                (-2 * i, 2 * j)
            }
            Parity::Odd => {
                let (i, j) = (1 + geo(), geo());
                (-2 * i, 2 * j)
            }
        }
    }
}

/// Draws one S face-step from a point of the given ordinate parity.
pub fn sample_s_face<R: Rng + ?Sized>(parity: Parity, rng: &mut R) -> (i64, i64) {
    let same_parity = rng.random::<bool>();
    let m = samplers().s_size.sample(rng);
    let l = Binomial::new(m, 0.5).expect("valid binomial").sample(rng) as i64;
    let r = m as i64 - l;
    match (parity, same_parity) {
        (_, true) => (-(2 * l + 2), 2 * r + 2),
        (Parity::Even, false) => (-(2 * l + 1), 2 * r + 3),
        (Parity::Odd, false) => (-(2 * l + 3), 2 * r + 1),
    }
}

/// Draws one aggregated S step (SE then face-steps) from ordinate `y`.
pub fn sample_s_aggregated<R: Rng + ?Sized>(y: i64, rng: &mut R) -> (i64, i64) {
    let (mut dx, mut dy) = (1, -1);
    let k = samplers().s_faces.sample(rng);
    for _ in 0..k {
        let (fx, fy) = sample_s_face(Parity::of(y + dy), rng);
        dx += fx;
        dy += fy;
    }
    (dx, dy)
}

/// Exact probability of a P step from the given parity.
pub fn p_step_probability(parity: Parity, dx: i64, dy: i64) -> f64 {
    let pos = LatticePoint::new(0, if parity == Parity::Even { 0 } else { 1 });
    match Step::new(dx, dy) {
        Ok(s) if p_step_admissible(pos, s) => (1.0f64 / 3.0).powi(((dy - dx) / 2) as i32) / 4.5,
        _ => 0.0,
    }
}

/// Exact P step law from the given parity, restricted to atoms of
/// probability at least `cutoff`.
pub fn p_step_support(parity: Parity, cutoff: f64) -> Vec<((i64, i64), f64)> {
    let mut out = vec![((1, -1), P_SE_PROBABILITY)];
    // probability z0^e / S(z0) of a face-step with (i + j) / 2 = e
    let mut e = 0;
    while (1.0f64 / 3.0).powi(e) / 4.5 >= cutoff {
        for i in 0..=2 * e {
            let j = 2 * e - i;
            let p = p_step_probability(parity, -i as i64, j as i64);
            if p > 0.0 {
                out.push(((-i as i64, j as i64), p));
            }
        }
        e += 1;
    }
    out
}

/// Exact law of an aggregated S step from ordinate parity `parity`, with
/// atoms below `cutoff` dropped along the way.
pub fn s_aggregated_masses(parity: Parity, cutoff: f64) -> BTreeMap<(i64, i64), f64> {
    let flip = |p: Parity| if p == Parity::Even { Parity::Odd } else { Parity::Even };
    let mut out: BTreeMap<(i64, i64), f64> = BTreeMap::new();
    let mut cur: BTreeMap<(i64, i64, Parity), f64> = BTreeMap::from([((1, -1, flip(parity)), 1.0)]);
    while !cur.is_empty() {
        let mut next: BTreeMap<(i64, i64, Parity), f64> = BTreeMap::new();
        for (&(dx, dy, par), &p) in &cur {
            *out.entry((dx, dy)).or_default() += 0.75 * p;
            let go = 0.25 * p;
            let mut m = 0u32;
            // probability of a face of size m with given (l, parity bit)
            while go * 0.5f64.powi(2 * m as i32 + 2) * binom_max(m) >= cutoff {
                for l in 0..=m as i64 {
                    let r = m as i64 - l;
                    let pf = go * 0.5f64.powi(2 * m as i32 + 2) * binom(m as i64, l);
                    if pf < cutoff {
                        continue;
                    }
                    let shapes = match par {
                        Parity::Even => [((-(2 * l + 2), 2 * r + 2), par), ((-(2 * l + 1), 2 * r + 3), Parity::Odd)],
                        Parity::Odd => [((-(2 * l + 2), 2 * r + 2), par), ((-(2 * l + 3), 2 * r + 1), Parity::Even)],
                    };
                    for ((fx, fy), np) in shapes {
                        *next.entry((dx + fx, dy + fy, np)).or_default() += pf;
                    }
                }
                m += 1;
            }
        }
        cur = next;
    }
    out
}

fn binom(m: i64, k: i64) -> f64 {
    (0..k).fold(1.0, |acc, t| acc * (m - t) as f64 / (t + 1) as f64)
}

fn binom_max(m: u32) -> f64 {
    binom(m as i64, m as i64 / 2)
}

/// Outcome of one simulated walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct McSample {
    /// Displacement of the free walk after `n` (aggregated) steps.
    pub endpoint: LatticePoint,
    /// The constrained walk never left its domain and ended at `(1,1)`.
    pub survived_to_11: bool,
    /// The free walk left `[-n^(2/3), n^(2/3)]^2`.
    pub box_exited: bool,
}

/// Simulates one walk of `n` steps (P) or `n` aggregated steps (S).
pub fn mc_sample<R: Rng + ?Sized>(model: Model, n: usize, rng: &mut R) -> McSample {
    let half = (n as f64).powf(2.0 / 3.0);
    let start = match model {
        Model::P => LatticePoint::ORIGIN,
        Model::S => S_START,
    };
    let (mut x, mut y) = (start.x, start.y);
    let mut alive = true;
    let mut exited = false;
    for _ in 0..n {
        let (dx, dy) = match model {
            Model::P => sample_p_step(Parity::of(y), rng),
            Model::S => sample_s_aggregated(y, rng),
        };
        x += dx;
        y += dy;
        alive &= match model {
            Model::P => x >= 0 && y >= 0,
            Model::S => x >= 0 && y >= 1,
        };
        exited |= ((x - start.x) as f64).abs() > half || ((y - start.y) as f64).abs() > half;
    }
    McSample {
        endpoint: LatticePoint::new(x - start.x, y - start.y),
        survived_to_11: alive && (x, y) == (1, 1),
        box_exited: exited,
    }
}

/// Exact survival probability to `(1,1)`: `count_p_to(n,(1,1)) (2/9)^n` for
/// P, `4 count_s_to(n,(1,1)) (3/16)^n` for S.
pub fn exact_survival(model: Model, n: usize) -> Result<BigRational> {
    let target = LatticePoint::new(1, 1);
    let pow = |a: i64, b: i64| BigRational::new(BigInt::from(a).pow(n as u32), BigInt::from(b).pow(n as u32));
    Ok(match model {
        Model::P => BigRational::from_integer(count_p_to(n, target)?.into()) * pow(2, 9),
        Model::S => BigRational::from_integer(BigInt::from(count_s_to(n, target)?) * 4) * pow(3, 16),
    })
}

#[derive(Clone, Copy, Debug, Default)]
struct Sums {
    count: u64,
    survived: u64,
    exited: u64,
    sx: i128,
    sy: i128,
    sxx: i128,
    syy: i128,
    sxy: i128,
}

impl Sums {
    fn push(&mut self, s: &McSample) {
        let (x, y) = (s.endpoint.x as i128, s.endpoint.y as i128);
        self.count += 1;
        self.survived += s.survived_to_11 as u64;
        self.exited += s.box_exited as u64;
        self.sx += x;
        self.sy += y;
        self.sxx += x * x;
        self.syy += y * y;
        self.sxy += x * y;
    }

    fn merge(mut self, o: Sums) -> Sums {
        self.count += o.count;
        self.survived += o.survived;
        self.exited += o.exited;
        self.sx += o.sx;
        self.sy += o.sy;
        self.sxx += o.sxx;
        self.syy += o.syy;
        self.sxy += o.sxy;
        self
    }
}

/// Aggregated Monte Carlo estimates. Radii are three standard errors.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct McReport {
    pub schema: &'static str,
    pub model: Model,
    pub seed: u64,
    pub n: usize,
    pub samples: usize,
    pub survival_frequency: f64,
    pub survival_radius: f64,
    /// Exact survival probability when `n` is small enough to compute it.
    pub survival_exact: Option<f64>,
    /// Three standard errors of the frequency under the exact probability.
    pub survival_exact_radius: Option<f64>,
    pub endpoint_mean: [f64; 2],
    pub endpoint_mean_radius: [f64; 2],
    pub endpoint_covariance_over_n: [[f64; 2]; 2],
    pub box_half_width: f64,
    pub box_exit_frequency: f64,
    pub box_exit_radius: f64,
}

/// Worker count: `TANDEMCOUNT_THREADS` if set, else the machine's.
pub fn thread_cap() -> Result<usize> {
    match std::env::var("TANDEMCOUNT_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(k) if k >= 1 => Ok(k),
            _ => Err(Error::InvalidArgument(format!("TANDEMCOUNT_THREADS must be a positive integer, got `{v}`"))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map(|k| k.get()).unwrap_or(1)),
    }
}

fn run_chunk(model: Model, n: usize, seed: u64, chunk: usize, size: usize) -> Sums {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    let mut sums = Sums::default();
    for _ in 0..size {
        sums.push(&mc_sample(model, n, &mut rng));
    }
    sums
}

/// Runs `samples` walks of length `n` under `seed`.
pub fn mc_estimate(model: Model, n: usize, samples: usize, seed: u64) -> Result<McReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("Monte Carlo walks need n >= 1".into()));
    }
    if samples < 2 {
        return Err(Error::InvalidArgument("Monte Carlo needs at least two samples".into()));
    }
    let chunks: Vec<(usize, usize)> =
        (0..samples.div_ceil(CHUNK)).map(|c| (c, CHUNK.min(samples - c * CHUNK))).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_cap()?)
        .build()
        .map_err(|e| Error::ThreadPool(e.to_string()))?;
    let parts: Vec<Sums> =
        pool.install(|| chunks.par_iter().map(|&(c, size)| run_chunk(model, n, seed, c, size)).collect());
    let s = parts.into_iter().fold(Sums::default(), Sums::merge);

    let big_n = s.count as f64;
    let freq = |k: u64| k as f64 / big_n;
    let radius = |p: f64| 3.0 * (p * (1.0 - p) / big_n).sqrt();
    let n_n = s.count as i128;
    // unbiased covariance from exact integer sums
    let cov = |sab: i128, sa: i128, sb: i128| (n_n * sab - sa * sb) as f64 / (big_n * (big_n - 1.0));
    let (vxx, vyy, vxy) = (cov(s.sxx, s.sx, s.sx), cov(s.syy, s.sy, s.sy), cov(s.sxy, s.sx, s.sy));
    let survival_exact = if n <= EXACT_SURVIVAL_MAX_N { exact_survival(model, n)?.to_f64() } else { None };
    let survival_frequency = freq(s.survived);
    let box_exit_frequency = freq(s.exited);
    let nf = n as f64;
    Ok(McReport {
        schema: SCHEMA,
        model,
        seed,
        n,
        samples,
        survival_frequency,
        survival_radius: radius(survival_frequency),
        survival_exact,
        survival_exact_radius: survival_exact.map(radius),
        endpoint_mean: [s.sx as f64 / big_n, s.sy as f64 / big_n],
        endpoint_mean_radius: [3.0 * (vxx / big_n).sqrt(), 3.0 * (vyy / big_n).sqrt()],
        endpoint_covariance_over_n: [[vxx / nf, vxy / nf], [vxy / nf, vyy / nf]],
        box_half_width: nf.powf(2.0 / 3.0),
        box_exit_frequency,
        box_exit_radius: radius(box_exit_frequency),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_law_is_normalised() {
        for parity in [Parity::Even, Parity::Odd] {
            let total: f64 = p_step_support(parity, 1e-12).iter().map(|a| a.1).sum();
            assert!((1.0 - 1e-9..=1.0 + 1e-12).contains(&total), "{total}");
        }
    }

    #[test]
    fn s_law_is_normalised() {
        for parity in [Parity::Even, Parity::Odd] {
            let total: f64 = s_aggregated_masses(parity, 1e-11).values().sum();
            assert!((1.0 - 1e-6..=1.0 + 1e-12).contains(&total), "{total}");
        }
    }

    #[test]
    fn deterministic_for_a_seed() {
        let a = mc_estimate(Model::P, 10, 5000, 7).unwrap();
        let b = mc_estimate(Model::P, 10, 5000, 7).unwrap();
        assert_eq!(a, b);
        let c = mc_estimate(Model::P, 10, 5000, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn exact_survival_small_n() {
        // the single length-3 walk (0,2),SE,SE passes (1,1) only at n = 2
        let p2 = exact_survival(Model::P, 2).unwrap();
        assert_eq!(p2, BigRational::new(4.into(), 81.into()));
    }
}
