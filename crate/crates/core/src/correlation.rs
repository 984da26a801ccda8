//! Exact verification of the up-set correlation inequality: for a filter `F`
//! generated by defining sets of size at most `u` on a ground set of size
//! `m`, and probabilities `0 < p~ <= p <= 1`,
//! `weight(p~) / weight(p) >= (p~/p)^u`, where `weight(p)` is the chance a
//! `p`-Bernoulli subset lands in `F`. Everything here is rational
//! arithmetic; there is no tolerance.

use crate::algebra::{rat, Rat};
use num::{BigInt, One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt;

pub const MAX_GROUND: u32 = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CorrelationError {
    GroundSetTooLarge { m: u32 },
    /// No defining sets: the filter is empty and the ratio is 0/0.
    EmptyFilter,
    InvalidProbability,
}

impl fmt::Display for CorrelationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorrelationError::GroundSetTooLarge { m } => {
                write!(f, "ground set of size {m} exceeds the exhaustive limit {MAX_GROUND}")
            }
            CorrelationError::EmptyFilter => write!(f, "empty filter: no defining sets"),
            CorrelationError::InvalidProbability => {
                write!(f, "probabilities must satisfy 0 < p~ <= p <= 1")
            }
        }
    }
}

impl std::error::Error for CorrelationError {}

/// Ground set `{0, .., m-1}` with defining subsets as bit masks; the filter
/// is everything containing some defining set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpSetSystem {
    m: u32,
    defining: Vec<u32>,
}

impl UpSetSystem {
    pub fn new(m: u32, defining: Vec<u32>) -> Result<UpSetSystem, CorrelationError> {
        if m > MAX_GROUND {
            return Err(CorrelationError::GroundSetTooLarge { m });
        }
        let mask = if m == 32 { u32::MAX } else { (1u32 << m) - 1 };
        let defining = defining.into_iter().map(|d| d & mask).collect();
        Ok(UpSetSystem { m, defining })
    }

    pub fn from_sets(m: u32, sets: &[Vec<u32>]) -> Result<UpSetSystem, CorrelationError> {
        let mut defining = Vec::with_capacity(sets.len());
        for s in sets {
            let mut mask = 0u32;
            for &e in s {
                if e >= m {
                    return Err(CorrelationError::GroundSetTooLarge { m: e + 1 });
                }
                mask |= 1 << e;
            }
            defining.push(mask);
        }
        UpSetSystem::new(m, defining)
    }

    pub fn ground_size(&self) -> u32 {
        self.m
    }

    pub fn defining(&self) -> &[u32] {
        &self.defining
    }

    /// The tightest valid size bound: `u = max |D_i|`.
    pub fn u_bound(&self) -> u32 {
        self.defining.iter().map(|d| d.count_ones()).max().unwrap_or(0)
    }

    pub fn contains(&self, x: u32) -> bool {
        self.defining.iter().any(|&d| d & x == d)
    }

    /// Filter members per cardinality: `hist[k]` counts members of size `k`.
    fn size_histogram(&self) -> Vec<u64> {
        let mut hist = vec![0u64; self.m as usize + 1];
        for x in 0..(1u64 << self.m) {
            let x = x as u32;
            if self.contains(x) {
                hist[x.count_ones() as usize] += 1;
            }
        }
        hist
    }
}

fn rat_pow(x: &Rat, e: u32) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// Exact probability that a `p`-Bernoulli subset of the ground set lies in
/// the filter: the sum of `p^|X| (1-p)^(m-|X|)` over members `X`.
pub fn filter_weight(sys: &UpSetSystem, p: &Rat) -> Result<Rat, CorrelationError> {
    if p < &Rat::zero() || p > &Rat::one() {
        return Err(CorrelationError::InvalidProbability);
    }
    let hist = sys.size_histogram();
    let q = Rat::one() - p;
    let mut total = Rat::zero();
    for (k, count) in hist.iter().enumerate() {
        if *count == 0 {
            continue;
        }
        let term = rat_pow(p, k as u32) * rat_pow(&q, sys.m - k as u32);
        total += Rat::from_integer(BigInt::from(*count)) * term;
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationCheck {
    pub ratio: Rat,
    pub bound: Rat,
    pub holds: bool,
}

/// Exact check of `weight(p~)/weight(p) >= (p~/p)^u`.
pub fn correlation_check(
    sys: &UpSetSystem,
    p: &Rat,
    p_tilde: &Rat,
) -> Result<CorrelationCheck, CorrelationError> {
    if sys.defining.is_empty() {
        return Err(CorrelationError::EmptyFilter);
    }
    if !(p_tilde > &Rat::zero() && p_tilde <= p && p <= &Rat::one()) {
        return Err(CorrelationError::InvalidProbability);
    }
    let w = filter_weight(sys, p)?;
    let w_tilde = filter_weight(sys, p_tilde)?;
    debug_assert!(w > Rat::zero(), "nonempty filter has positive weight at p > 0");
    let ratio = w_tilde / w;
    let bound = rat_pow(&(p_tilde / p), sys.u_bound());
    let holds = ratio >= bound;
    Ok(CorrelationCheck { ratio, bound, holds })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzViolation {
    pub m: u32,
    pub defining: Vec<u32>,
    pub p: Rat,
    pub p_tilde: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FuzzReport {
    pub cases: u64,
    pub violations: Vec<FuzzViolation>,
}

/// All antichains of nonempty..: every family of pairwise incomparable
/// subsets of `{0..m-1}` (including the one-element family `{{}}`), except
/// the empty family. Minimal generating families of filters are antichains,
/// so this sweeps every filter once.
pub fn antichains(m: u32) -> Vec<Vec<u32>> {
    assert!(m <= 4, "exhaustive antichain sweep limited to m <= 4");
    let subsets: Vec<u32> = (0..(1u32 << m)).collect();
    let mut out: Vec<Vec<u32>> = Vec::new();
    let mut stack: Vec<u32> = Vec::new();
    fn comparable(a: u32, b: u32) -> bool {
        a & b == a || a & b == b
    }
    fn recurse(idx: usize, subsets: &[u32], stack: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if idx == subsets.len() {
            if !stack.is_empty() {
                out.push(stack.clone());
            }
            return;
        }
        recurse(idx + 1, subsets, stack, out);
        let cand = subsets[idx];
        if stack.iter().all(|&s| !comparable(s, cand)) {
            stack.push(cand);
            recurse(idx + 1, subsets, stack, out);
            stack.pop();
        }
    }
    recurse(0, &subsets, &mut stack, &mut out);
    out
}

/// The probability grid `{1/8, .., 7/8}` paired as `p~ <= p`.
pub fn probability_grid() -> Vec<(Rat, Rat)> {
    let mut out = Vec::new();
    for j in 1..=7i64 {
        for i in 1..=j {
            out.push((rat(j, 8), rat(i, 8)));
        }
    }
    out
}

/// Exhaustive sweep over all antichain families on `m <= 4` plus randomized
/// systems up to `m_max`, each against the probability grid. Returns every
/// violating instance (expected: none).
pub fn correlation_fuzz(
    m_max: u32,
    q_max: u32,
    u_max: u32,
    trials: u64,
    seed: u64,
) -> Result<FuzzReport, CorrelationError> {
    if m_max > 12 {
        return Err(CorrelationError::GroundSetTooLarge { m: m_max });
    }
    let mut report = FuzzReport::default();
    let grid = probability_grid();

    for m in 1..=4u32.min(m_max.max(1)) {
        for family in antichains(m) {
            let sys = UpSetSystem::new(m, family.clone())?;
            for (p, pt) in &grid {
                report.cases += 1;
                let check = correlation_check(&sys, p, pt)?;
                if !check.holds {
                    report.violations.push(FuzzViolation {
                        m,
                        defining: family.clone(),
                        p: p.clone(),
                        p_tilde: pt.clone(),
                    });
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let m = rng.random_range(1..=m_max.max(1));
        let q = rng.random_range(1..=q_max.max(1));
        let defining: Vec<u32> = (0..q)
            .map(|_| {
                let size = rng.random_range(0..=u_max.min(m));
                let mut mask = 0u32;
                while mask.count_ones() < size {
                    mask |= 1 << rng.random_range(0..m);
                }
                mask
            })
            .collect();
        let sys = UpSetSystem::new(m, defining.clone())?;
        let (p, pt) = &grid[rng.random_range(0..grid.len())];
        report.cases += 1;
        let check = correlation_check(&sys, p, pt)?;
        if !check.holds {
            report.violations.push(FuzzViolation {
                m,
                defining,
                p: p.clone(),
                p_tilde: pt.clone(),
            });
        }
    }
    Ok(report)
}
