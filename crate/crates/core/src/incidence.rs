//! Incidence counting between points and curves, `K_{k,k}`-freeness, shatter
//! functions, and the Zarankiewicz-style bound formulas, plus the grid
//! generator used to stress the point/line incidence exponent.

use crate::algebra::{rat_int, Rat};
use crate::families::{CurveFamily, CurveParam};
use crate::stats::fit_loglog;
use std::collections::HashMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IncidenceError {
    NotACube { n: u64 },
    CombinatorialBudgetExceeded { visited: u64, budget: u64 },
    GroundSetTooLarge { size: usize, max: usize },
}

impl fmt::Display for IncidenceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IncidenceError::NotACube { n } => write!(f, "{n} is not a perfect cube >= 8"),
            IncidenceError::CombinatorialBudgetExceeded { visited, budget } => {
                write!(f, "subset search visited {visited} nodes, budget {budget}")
            }
            IncidenceError::GroundSetTooLarge { size, max } => {
                write!(f, "ground set of size {size} exceeds the exhaustive limit {max}")
            }
        }
    }
}

impl std::error::Error for IncidenceError {}

/// Finite bipartite incidence instance: points `(x1, x2)` against curves,
/// with the on-curve relation, or an explicit edge list.
#[derive(Debug, Clone)]
pub struct IncidenceInstance {
    pub family: CurveFamily,
    pub points: Vec<(Rat, Rat)>,
    pub curves: Vec<CurveParam>,
    pub explicit_edges: Option<Vec<(u32, u32)>>,
}

impl IncidenceInstance {
    pub fn new(
        family: CurveFamily,
        mut points: Vec<(Rat, Rat)>,
        mut curves: Vec<CurveParam>,
    ) -> IncidenceInstance {
        points.sort();
        points.dedup();
        curves.sort_by(|a, b| a.canonical_cmp(b));
        curves.dedup();
        IncidenceInstance { family, points, curves, explicit_edges: None }
    }

    pub fn m(&self) -> usize {
        self.points.len()
    }

    pub fn n(&self) -> usize {
        self.curves.len()
    }
}

/// Exact incidence edges `(point, curve)`, point on curve.
///
/// Curves are grouped by their leading coefficients; a point then determines
/// the one matching trailing coefficient per group, so the join costs
/// `O(m * groups)` instead of `O(m * n)`.
pub fn count_incidences(inst: &IncidenceInstance) -> (usize, Vec<(u32, u32)>) {
    if let Some(edges) = &inst.explicit_edges {
        let mut e = edges.clone();
        e.sort_unstable();
        e.dedup();
        return (e.len(), e);
    }
    // group key: all coefficients except the constant term
    let mut groups: HashMap<Vec<Rat>, HashMap<Rat, Vec<u32>>> = HashMap::new();
    for (ci, curve) in inst.curves.iter().enumerate() {
        let coeffs: Vec<Rat> = curve.coeffs().into_iter().cloned().collect();
        let (lead, last) = coeffs.split_at(coeffs.len() - 1);
        groups
            .entry(lead.to_vec())
            .or_default()
            .entry(last[0].clone())
            .or_default()
            .push(ci as u32);
    }
    let mut edges = Vec::new();
    for (pi, (x1, x2)) in inst.points.iter().enumerate() {
        for (lead, by_last) in &groups {
            // constant term that would put this point on a curve of the group
            let needed = match lead.len() {
                1 => x1 - &lead[0] * x2,                       // line: b = x1 - a*x2
                2 => x1 - &lead[0] * x2 * x2 - &lead[1] * x2,  // parabola: c = ...
                _ => unreachable!("families have 2 or 3 coefficients"),
            };
            if let Some(curves) = by_last.get(&needed) {
                for &ci in curves {
                    edges.push((pi as u32, ci));
                }
            }
        }
    }
    edges.sort_unstable();
    (edges.len(), edges)
}

/// Witness for a `K_{k,k}`: `k` points and `k` curves, completely joined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KkkWitness {
    pub left: Vec<u32>,
    pub right: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KkkResult {
    pub free: bool,
    pub witness: Option<KkkWitness>,
}

pub const DEFAULT_KKK_BUDGET: u64 = 20_000_000;

/// Is the bipartite edge list free of `K_{k,k}`? Vertices of degree below
/// `k` are peeled off first; the survivors get a pruned subset search over
/// the smaller side.
pub fn is_kkk_free(
    edges: &[(u32, u32)],
    k: usize,
    budget: u64,
) -> Result<KkkResult, IncidenceError> {
    assert!(k >= 1);
    if edges.is_empty() {
        return Ok(KkkResult { free: true, witness: None });
    }
    // adjacency with degree peeling
    let mut left_adj: HashMap<u32, Vec<u32>> = HashMap::new();
    let mut right_adj: HashMap<u32, Vec<u32>> = HashMap::new();
    for &(p, q) in edges {
        left_adj.entry(p).or_default().push(q);
        right_adj.entry(q).or_default().push(p);
    }
    for adj in [&mut left_adj, &mut right_adj] {
        for v in adj.values_mut() {
            v.sort_unstable();
            v.dedup();
        }
    }
    loop {
        let weak_left: Vec<u32> = left_adj
            .iter()
            .filter(|(_, n)| n.len() < k)
            .map(|(&v, _)| v)
            .collect();
        let weak_right: Vec<u32> = right_adj
            .iter()
            .filter(|(_, n)| n.len() < k)
            .map(|(&v, _)| v)
            .collect();
        if weak_left.is_empty() && weak_right.is_empty() {
            break;
        }
        for v in weak_left {
            if let Some(ns) = left_adj.remove(&v) {
                for n in ns {
                    if let Some(back) = right_adj.get_mut(&n) {
                        back.retain(|&x| x != v);
                    }
                }
            }
        }
        for v in weak_right {
            if let Some(ns) = right_adj.remove(&v) {
                for n in ns {
                    if let Some(back) = left_adj.get_mut(&n) {
                        back.retain(|&x| x != v);
                    }
                }
            }
        }
    }
    if left_adj.is_empty() || right_adj.is_empty() {
        return Ok(KkkResult { free: true, witness: None });
    }
    // search over the smaller surviving side
    let swap = right_adj.len() < left_adj.len();
    let (side, _other) = if swap { (&right_adj, &left_adj) } else { (&left_adj, &right_adj) };
    let mut verts: Vec<u32> = side.keys().copied().collect();
    verts.sort_unstable();

    let mut visited = 0u64;
    // DFS over k-subsets, carrying the running neighborhood intersection.
    struct Search<'a> {
        verts: &'a [u32],
        adj: &'a HashMap<u32, Vec<u32>>,
        k: usize,
        budget: u64,
    }
    fn intersect(a: &[u32], b: &[u32]) -> Vec<u32> {
        let mut out = Vec::with_capacity(a.len().min(b.len()));
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out
    }
    fn dfs(
        s: &Search,
        start: usize,
        chosen: &mut Vec<u32>,
        common: &[u32],
        visited: &mut u64,
    ) -> Result<Option<KkkWitness>, IncidenceError> {
        if chosen.len() == s.k {
            return Ok(Some(KkkWitness {
                left: chosen.clone(),
                right: common[..s.k].to_vec(),
            }));
        }
        for i in start..s.verts.len() {
            *visited += 1;
            if *visited > s.budget {
                return Err(IncidenceError::CombinatorialBudgetExceeded {
                    visited: *visited,
                    budget: s.budget,
                });
            }
            let v = s.verts[i];
            let next = if chosen.is_empty() {
                s.adj[&v].clone()
            } else {
                intersect(common, &s.adj[&v])
            };
            if next.len() < s.k {
                continue;
            }
            chosen.push(v);
            if let Some(w) = dfs(s, i + 1, chosen, &next, visited)? {
                return Ok(Some(w));
            }
            chosen.pop();
        }
        Ok(None)
    }
    let search = Search { verts: &verts, adj: side, k, budget };
    let mut chosen = Vec::new();
    match dfs(&search, 0, &mut chosen, &[], &mut visited)? {
        Some(w) => {
            let w = if swap { KkkWitness { left: w.right, right: w.left } } else { w };
            Ok(KkkResult { free: false, witness: Some(w) })
        }
        None => Ok(KkkResult { free: true, witness: None }),
    }
}

/// `c * (m^(d/(2d-1)) * n^((2d-2)/(2d-1)) + m + n)`.
pub fn zarankiewicz_bound(m: u64, n: u64, d: u32, c: f64) -> f64 {
    assert!(d >= 2);
    let dd = d as f64;
    let e1 = dd / (2.0 * dd - 1.0);
    let e2 = (2.0 * dd - 2.0) / (2.0 * dd - 1.0);
    c * ((m as f64).powf(e1) * (n as f64).powf(e2) + m as f64 + n as f64)
}

/// `c1 * (m * n^(1 - 1/d) + n)`.
pub fn kst_bound(m: u64, n: u64, d: u32, c1: f64) -> f64 {
    assert!(d >= 1);
    c1 * (m as f64 * (n as f64).powf(1.0 - 1.0 / d as f64) + n as f64)
}

pub const MAX_SHATTER_GROUND: usize = 20;

/// Exact shatter profile of a finite set system, by exhaustive enumeration
/// of all trace ground subsets up to size `z_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShatterProfile {
    /// `values[z-1]` is `pi(z)` for `z = 1..=z_max`.
    pub values: Vec<u64>,
    /// Fitted slope of `log pi(z)` vs `log z` over the upper half of `z`.
    pub slope: f64,
}

pub fn shatter_function(
    sets: &[u32],
    ground: usize,
    z_max: usize,
) -> Result<ShatterProfile, IncidenceError> {
    if ground > MAX_SHATTER_GROUND {
        return Err(IncidenceError::GroundSetTooLarge { size: ground, max: MAX_SHATTER_GROUND });
    }
    let z_max = z_max.min(ground).max(1);
    let mut dedup_sets = sets.to_vec();
    let mask_all: u32 = if ground == 32 { u32::MAX } else { (1u32 << ground) - 1 };
    for s in &mut dedup_sets {
        *s &= mask_all;
    }
    dedup_sets.sort_unstable();
    dedup_sets.dedup();

    let mut values = vec![0u64; z_max];
    // generation-stamped table over trace masks avoids reallocating per A
    let mut stamp: Vec<u32> = vec![0; 1usize << ground];
    let mut generation = 0u32;
    for a in 0..=mask_all {
        let z = a.count_ones() as usize;
        if z == 0 || z > z_max {
            continue;
        }
        generation += 1;
        let mut distinct = 0u64;
        for &s in &dedup_sets {
            let trace = (s & a) as usize;
            if stamp[trace] != generation {
                stamp[trace] = generation;
                distinct += 1;
            }
        }
        if distinct > values[z - 1] {
            values[z - 1] = distinct;
        }
    }
    // pi is attained by some A per z; nondecreasing by monotonicity.
    let lo = z_max / 2;
    let xs: Vec<f64> = (lo + 1..=z_max).map(|z| (z as f64).ln()).collect();
    let ys: Vec<f64> = (lo + 1..=z_max)
        .map(|z| (values[z - 1].max(1) as f64).ln())
        .collect();
    let slope = if xs.len() >= 2 { fit_loglog(&xs, &ys).0 } else { 0.0 };
    Ok(ShatterProfile { values, slope })
}

/// The dual system of a line arrangement: ground set = the lines; one set
/// per realizable point neighborhood {lines through p}, plus the singletons
/// and the empty trace realized by generic points.
pub fn line_neighborhood_system(lines: &[CurveParam]) -> Vec<u32> {
    use crate::families::{proper_intersections, Intersections};
    let z = lines.len();
    assert!(z <= 32);
    let mut sets: Vec<u32> = vec![0];
    for i in 0..z {
        sets.push(1 << i);
    }
    // group intersection points, exactly, to catch concurrences
    let mut points: Vec<(crate::families::PointQE, u32)> = Vec::new();
    for i in 0..z {
        for j in (i + 1)..z {
            if let Intersections::Points(ps) = proper_intersections(&lines[i], &lines[j]) {
                for p in ps {
                    points.push((p, (1 << i) | (1 << j)));
                }
            }
        }
    }
    points.sort_by(|a, b| a.0.sweep_cmp(&b.0));
    let mut i = 0;
    while i < points.len() {
        let mut mask = points[i].1;
        let mut j = i + 1;
        while j < points.len() && points[j].0 == points[i].0 {
            mask |= points[j].1;
            j += 1;
        }
        sets.push(mask);
        i = j;
    }
    sets.sort_unstable();
    sets.dedup();
    sets
}

/// The extremal grid instance: points `[g] x [2g^2]`, lines `x1 = a*x2 + b`
/// with `a in [g]`, `b in [g^2]`, where `g = N^(1/3)`. Every line meets
/// exactly `g` grid points, giving `N^(4/3)` incidences across `N` lines.
pub fn generate_grid_st(n: u64) -> Result<IncidenceInstance, IncidenceError> {
    let g = (n as f64).cbrt().round() as u64;
    if n < 8 || g * g * g != n {
        return Err(IncidenceError::NotACube { n });
    }
    let mut points = Vec::with_capacity((2 * g * g * g) as usize);
    for x2 in 1..=g {
        for x1 in 1..=(2 * g * g) {
            points.push((rat_int(x1 as i64), rat_int(x2 as i64)));
        }
    }
    let mut curves = Vec::with_capacity(n as usize);
    for a in 1..=g {
        for b in 1..=(g * g) {
            curves.push(CurveParam::line(rat_int(a as i64), rat_int(b as i64)));
        }
    }
    Ok(IncidenceInstance::new(CurveFamily::Lines, points, curves))
}

/// Least-squares slope of `log count` against `log n`.
pub fn exponent_fit(instances: &[(u64, u64, u64)]) -> f64 {
    assert!(instances.len() >= 3, "need at least three instances");
    for w in instances.windows(2) {
        assert!(w[0].1 < w[1].1, "n must be strictly increasing");
    }
    let xs: Vec<f64> = instances.iter().map(|&(_, n, _)| (n as f64).ln()).collect();
    let ys: Vec<f64> = instances
        .iter()
        .map(|&(_, _, c)| (c.max(1) as f64).ln())
        .collect();
    fit_loglog(&xs, &ys).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn line(a: i64, b: i64) -> CurveParam {
        CurveParam::line(rat_int(a), rat_int(b))
    }

    fn brute_count(inst: &IncidenceInstance) -> usize {
        let mut count = 0;
        for (x1, x2) in &inst.points {
            for c in &inst.curves {
                if c.eval_rat(x2) == *x1 {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn count_examples() {
        let inst = IncidenceInstance::new(
            CurveFamily::Lines,
            vec![(rat_int(0), rat_int(0))],
            vec![line(0, 0)],
        );
        assert_eq!(count_incidences(&inst).0, 1);

        // 3x3 grid against 6 lines; frozen from the brute-force oracle.
        let mut pts = Vec::new();
        for x2 in 0..3 {
            for x1 in 0..3 {
                pts.push((rat_int(x1), rat_int(x2)));
            }
        }
        let mut ls = Vec::new();
        for a in 0..2 {
            for b in 0..3 {
                ls.push(line(a, b));
            }
        }
        let inst = IncidenceInstance::new(CurveFamily::Lines, pts, ls);
        let (count, edges) = count_incidences(&inst);
        assert_eq!(count, brute_count(&inst));
        assert_eq!(count, 15); // 3 horizontals x3 + diagonals 3+2+1
        assert_eq!(edges.len(), count);

        // all points on one line
        let pts: Vec<_> = (0..7).map(|i| (rat_int(i), rat_int(i))).collect();
        let inst = IncidenceInstance::new(CurveFamily::Lines, pts, vec![line(1, 0)]);
        assert_eq!(count_incidences(&inst).0, 7);
    }

    #[test]
    fn parabola_incidences_match_brute_force() {
        let mut pts = Vec::new();
        for i in -4..=4 {
            for j in -4..=4 {
                pts.push((rat_int(i), rat(j, 2)));
            }
        }
        let curves = vec![
            CurveParam::parabola(rat_int(1), rat_int(0), rat_int(0)),
            CurveParam::parabola(rat_int(1), rat_int(0), rat_int(-2)),
            CurveParam::parabola(rat_int(-2), rat_int(1), rat_int(3)),
        ];
        let inst = IncidenceInstance::new(CurveFamily::Parabolas, pts, curves);
        assert_eq!(count_incidences(&inst).0, brute_count(&inst));
    }

    #[test]
    fn kkk_examples() {
        assert!(is_kkk_free(&[], 1, 1000).unwrap().free);

        // Point/line incidences are K_{2,2}-free.
        let inst = generate_grid_st(27).unwrap();
        let (_, edges) = count_incidences(&inst);
        assert!(is_kkk_free(&edges, 2, DEFAULT_KKK_BUDGET).unwrap().free);

        // Complete bipartite 3x3 is its own witness.
        let mut edges = Vec::new();
        for p in 0..3 {
            for q in 0..3 {
                edges.push((p, q));
            }
        }
        let res = is_kkk_free(&edges, 3, 1000).unwrap();
        assert!(!res.free);
        let w = res.witness.unwrap();
        assert_eq!(w.left.len(), 3);
        assert_eq!(w.right.len(), 3);

        let err = is_kkk_free(&edges, 2, 1).unwrap_err();
        assert!(matches!(err, IncidenceError::CombinatorialBudgetExceeded { .. }));
    }

    #[test]
    fn bound_formulas() {
        // m=n=64, d=2, c=1: 64^(2/3)=16, 16*16+128 = 384.
        assert!((zarankiewicz_bound(64, 64, 2, 1.0) - 384.0).abs() < 1e-9);
        let d3 = zarankiewicz_bound(64, 64, 3, 1.0);
        let expected = 64f64.powf(7.0 / 5.0) + 128.0;
        assert!((d3 - expected).abs() < 1e-9);
        assert!((kst_bound(10, 1, 2, 1.0) - 11.0).abs() < 1e-9);
        assert!((kst_bound(5, 4, 1, 2.0) - 2.0 * (5.0 * 4f64.powf(0.0) + 4.0)).abs() < 1e-9);
    }

    #[test]
    fn shatter_examples() {
        // One set: traces are the empty set and A∩S.
        let prof = shatter_function(&[0b0110], 4, 4).unwrap();
        assert!(prof.values.iter().all(|&v| v <= 2));
        // All singletons of a 5-set: pi(z) = z + 1.
        let singletons: Vec<u32> = (0..5).map(|i| 1 << i).collect();
        let prof = shatter_function(&singletons, 5, 5).unwrap();
        assert_eq!(prof.values, vec![2, 3, 4, 5, 6]);
        // pi is monotone and bounded by 2^z.
        for (z, &v) in prof.values.iter().enumerate() {
            assert!(v <= 1 << (z + 1));
        }
        assert!(shatter_function(&[1], 30, 5).is_err());
    }

    #[test]
    fn grid_examples() {
        let inst = generate_grid_st(8).unwrap();
        assert_eq!(inst.n(), 8);
        assert_eq!(inst.m(), 16);
        let (count, edges) = count_incidences(&inst);
        assert!(count >= 16, "count = {count}");
        // every line meets exactly g = 2 points
        let mut per_line = vec![0; 8];
        for (_, c) in &edges {
            per_line[*c as usize] += 1;
        }
        assert!(per_line.iter().all(|&d| d == 2));
        assert!(is_kkk_free(&edges, 2, DEFAULT_KKK_BUDGET).unwrap().free);

        let inst = generate_grid_st(27).unwrap();
        let (count, _) = count_incidences(&inst);
        assert!(count >= 81);

        assert!(matches!(generate_grid_st(10), Err(IncidenceError::NotACube { .. })));
    }

    #[test]
    fn exponent_fit_basics() {
        let flat = [(10, 10, 7), (20, 20, 7), (40, 40, 7)];
        assert!(exponent_fit(&flat).abs() < 1e-9);
        let linear = [(10, 10, 10), (20, 20, 20), (40, 40, 40)];
        assert!((exponent_fit(&linear) - 1.0).abs() < 1e-9);
    }
}
