//! Seeded instance generators for experiments and tests. Deterministic for a
//! fixed seed; "general position" here means distinct slopes (every pair of
//! lines meets exactly once), nothing stronger — the algorithms themselves
//! never assume it.

use crate::algebra::{rat, Rat};
use crate::families::{CurveFamily, CurveParam};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

/// `n` lines with pairwise distinct slopes and integer coefficients.
pub fn random_general_lines(n: usize, seed: u64) -> Vec<CurveParam> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span = (8 * n as i64).max(64);
    let mut slopes = HashSet::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let a = rng.random_range(-span..=span);
        if !slopes.insert(a) {
            continue;
        }
        let b = rng.random_range(-span..=span);
        out.push(CurveParam::line(rat(a, 1), rat(b, 1)));
    }
    out
}

/// `n` distinct parallel lines (slope 1).
pub fn parallel_lines(n: usize) -> Vec<CurveParam> {
    (0..n as i64)
        .map(|i| CurveParam::line(rat(1, 1), rat(i, 1)))
        .collect()
}

/// `n` distinct random parabolas with nonzero leading coefficient.
pub fn random_parabolas(n: usize, seed: u64) -> Vec<CurveParam> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let mut a = 0i64;
        while a == 0 {
            a = rng.random_range(-9..=9);
        }
        let b = rng.random_range(-30..=30);
        let c = rng.random_range(-30..=30);
        if !seen.insert((a, b, c)) {
            continue;
        }
        out.push(CurveParam::parabola(rat(a, 1), rat(b, 1), rat(c, 1)));
    }
    out
}

pub fn random_params(family: CurveFamily, n: usize, seed: u64) -> Vec<CurveParam> {
    match family {
        CurveFamily::Lines => random_general_lines(n, seed),
        CurveFamily::Parabolas => random_parabolas(n, seed),
    }
}

/// Random rational query points in `[-span, span]^2` with small denominators.
pub fn random_query_points(count: usize, span: i64, seed: u64) -> Vec<(Rat, Rat)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let d1 = rng.random_range(1..=16);
            let d2 = rng.random_range(1..=16);
            (
                rat(rng.random_range(-span * d1..=span * d1), d1),
                rat(rng.random_range(-span * d2..=span * d2), d2),
            )
        })
        .collect()
}

/// Stable derived seed for the `k`-th sub-experiment of `seed`.
pub fn derive_seed(seed: u64, k: u64) -> u64 {
    // splitmix64 step
    let mut z = seed ^ k.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic_and_distinct() {
        let a = random_general_lines(40, 7);
        let b = random_general_lines(40, 7);
        assert_eq!(a, b);
        let mut slopes = HashSet::new();
        for p in &a {
            if let CurveParam::Line { slope, .. } = p {
                assert!(slopes.insert(slope.clone()));
            }
        }
        let c = random_parabolas(25, 7);
        let dedup: HashSet<_> = c.iter().cloned().collect();
        assert_eq!(dedup.len(), 25);
    }

    #[test]
    fn derive_seed_spreads() {
        let s: HashSet<u64> = (0..1000).map(|k| derive_seed(42, k)).collect();
        assert_eq!(s.len(), 1000);
    }
}
