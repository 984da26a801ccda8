//! 1/r-cuttings for a finite curve set `H`: cover the plane by pieces, each
//! crossed by at most `n/r` curves of `H`.
//!
//! The existence proofs are averaging arguments over Bernoulli samples; here
//! they run as Las Vegas loops with a retry budget and a recorded trail. A
//! first-level sample yields a decomposition whose heavy cells (excess
//! `t > 1`) are refined by a second sample drawn from their own crossing
//! sets; final pieces are cells or intersections of two cells, with exact
//! crossing sets throughout.

use crate::algebra::{qe_cmp, Ext, QuadExt, Rat};
use crate::decomposition::{build_decomposition, Cell, CellComplex, DecompositionError, VerticalDir};
use crate::families::{
    crosses_cell, exists_all_positive, roots_in_span, sign_set, signs_on, component_samples,
    CurveFamily, CurveParam, Poly,
};
use crate::instances::{derive_seed, random_params};
use num::{BigInt, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleConfig {
    /// Bernoulli success probability; the cutting constructions override it.
    pub p: f64,
    pub seed: u64,
    pub max_retries: u32,
}

impl SampleConfig {
    pub fn new(p: f64, seed: u64) -> SampleConfig {
        SampleConfig { p, seed, max_retries: 100 }
    }

    pub fn seeded(seed: u64) -> SampleConfig {
        SampleConfig::new(0.0, seed)
    }
}

#[derive(Debug, Clone)]
pub enum CuttingError {
    PreconditionViolated { r: f64, n: usize },
    RetryBudgetExhausted { trail: Trail },
    Decomposition(DecompositionError),
}

impl fmt::Display for CuttingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CuttingError::PreconditionViolated { r, n } => {
                write!(f, "need 1 < r < n, got r = {r} with n = {n}")
            }
            CuttingError::RetryBudgetExhausted { trail } => {
                write!(f, "retry budget exhausted after {} attempts", trail.attempts.len())
            }
            CuttingError::Decomposition(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CuttingError {}

impl From<DecompositionError> for CuttingError {
    fn from(e: DecompositionError) -> Self {
        CuttingError::Decomposition(e)
    }
}

/// One sampling attempt, kept for reproducibility diagnostics.
#[derive(Debug, Clone)]
pub struct Attempt {
    pub level: u8,
    pub seed: u64,
    pub sample_size: usize,
    pub cells: usize,
    pub accepted: bool,
    pub reason: &'static str,
}

#[derive(Debug, Clone, Default)]
pub struct Trail {
    pub attempts: Vec<Attempt>,
}

impl Trail {
    fn push(&mut self, a: Attempt) {
        self.attempts.push(a);
    }
    pub fn retries(&self) -> usize {
        self.attempts.iter().filter(|a| a.level == 1).count()
    }
}

#[derive(Debug, Clone)]
pub enum PieceGeom {
    Cell(Cell),
    /// Intersection of a first-level cell with a refinement cell.
    Pair { outer: Cell, inner: Cell },
}

#[derive(Debug, Clone)]
pub struct Piece {
    pub geom: PieceGeom,
    /// Indices into the cutting's `h` of the curves crossing this piece.
    pub crossing: Vec<u32>,
}

/// Second-level structure attached to a heavy first-level cell.
#[derive(Debug, Clone)]
pub struct Refinement {
    /// Indices into `h` of the curves crossing the outer cell.
    pub ground: Vec<u32>,
    pub complex: CellComplex,
}

#[derive(Debug, Clone)]
pub struct Cutting {
    pub family: CurveFamily,
    pub h: Vec<CurveParam>,
    pub r: f64,
    /// `floor(n/r)`, computed in exact rational arithmetic.
    pub budget: usize,
    pub pieces: Vec<Piece>,
    pub level1: CellComplex,
    /// Per-level1-cell crossing sets (exact `I_H`).
    pub level1_crossing: Vec<Vec<u32>>,
    /// Per-level1-cell excess `t = |I_H| * r / n`.
    pub excess: Vec<Rat>,
    pub refinements: Vec<Option<Refinement>>,
    pub trail: Trail,
}

impl Cutting {
    pub fn max_piece_crossing(&self) -> usize {
        self.pieces.iter().map(|p| p.crossing.len()).max().unwrap_or(0)
    }

    /// Exact per-piece budget check.
    pub fn verify_budget(&self) -> bool {
        self.max_piece_crossing() <= self.budget
    }

    /// Probabilistic cover check: every query point must fall in some piece.
    /// Resolution goes through the level-1 index and, for refined cells,
    /// the inner index.
    pub fn verify_cover(&self, points: &[(Rat, Rat)]) -> Result<(), DecompositionError> {
        for (x1, x2) in points {
            let hits = self.level1.locate(x1, x2)?;
            for idx in hits {
                if let Some(refinement) = &self.refinements[idx] {
                    let inner = refinement.complex.locate(x1, x2)?;
                    if inner.is_empty() {
                        return Err(DecompositionError::CoverageGap {
                            x1: x1.clone(),
                            x2: x2.clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Recomputes every piece's crossing count from scratch.
    pub fn recount_crossings(&self) -> usize {
        let mut worst = 0;
        for piece in &self.pieces {
            let count = match &piece.geom {
                PieceGeom::Cell(c) => self
                    .h
                    .iter()
                    .filter(|p| crosses_cell(p, c))
                    .count(),
                PieceGeom::Pair { outer, inner } => self
                    .h
                    .iter()
                    .filter(|p| crosses_pair(p, outer, inner))
                    .count(),
            };
            worst = worst.max(count);
        }
        worst
    }
}

/// Bernoulli subset of `0..len` with success probability `cfg.p`.
pub fn bernoulli_sample(len: usize, cfg: &SampleConfig) -> Vec<u32> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();
    for i in 0..len {
        if rng.random::<f64>() < cfg.p {
            out.push(i as u32);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Calibrated constants.
// ---------------------------------------------------------------------------

/// Constants driving the sampling thresholds: the census constant `C`
/// (max |CT(S)| / |S|^2 over a fixed calibration run) and the `A` solving
/// `3 * 2^(2d) * C * A^d = 2^A` for `d = 2`.
#[derive(Debug, Clone, Copy)]
pub struct CuttingParams {
    pub c_census: f64,
    pub a_const: f64,
}

const CALIBRATION_SEED: u64 = 0xCA11_B8A7;

pub fn calibrate(family: CurveFamily) -> CuttingParams {
    let mut c: f64 = 0.0;
    for n in 4..=16usize {
        let params = random_params(family, n, derive_seed(CALIBRATION_SEED, n as u64));
        let complex = build_decomposition(family, &params).expect("calibration build");
        c = c.max(complex.census().total() as f64 / (n * n) as f64);
    }
    let a_const = solve_a_constant(c, 2);
    CuttingParams { c_census: c, a_const }
}

/// Largest root of `A*ln2 - ln(3 * 4^d * C) - d*ln A = 0`, by bisection.
fn solve_a_constant(c: f64, d: u32) -> f64 {
    let rhs = (3.0 * 4f64.powi(d as i32) * c).ln();
    let f = |a: f64| a * std::f64::consts::LN_2 - rhs - d as f64 * a.ln();
    let mut lo = d as f64 / std::f64::consts::LN_2; // the minimum of f
    if f(lo) > 0.0 {
        return lo;
    }
    let mut hi = 64.0;
    debug_assert!(f(hi) > 0.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if f(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn cached_params(family: CurveFamily) -> CuttingParams {
    static LINES: OnceLock<CuttingParams> = OnceLock::new();
    static PARABOLAS: OnceLock<CuttingParams> = OnceLock::new();
    match family {
        CurveFamily::Lines => *LINES.get_or_init(|| calibrate(family)),
        CurveFamily::Parabolas => *PARABOLAS.get_or_init(|| calibrate(family)),
    }
}

// ---------------------------------------------------------------------------
// Shared plumbing.
// ---------------------------------------------------------------------------

fn dedup_params(family: CurveFamily, h: &[CurveParam]) -> Result<Vec<CurveParam>, CuttingError> {
    for p in h {
        if !family.param_matches(p) {
            return Err(CuttingError::Decomposition(
                crate::families::FamilyError::ParamKindMismatch.into(),
            ));
        }
    }
    let mut hs = h.to_vec();
    hs.sort_by(|a, b| a.canonical_cmp(b));
    hs.dedup();
    Ok(hs)
}

fn rat_from_f64(x: f64) -> Rat {
    Rat::from_float(x).expect("finite float")
}

fn floor_div(n: usize, r: &Rat) -> usize {
    let q = (Rat::from_integer(BigInt::from(n)) / r).floor();
    q.numer().to_usize().unwrap_or(0)
}

fn crossing_sets(h: &[CurveParam], complex: &CellComplex) -> Vec<Vec<u32>> {
    complex
        .cells()
        .iter()
        .map(|cell| {
            h.iter()
                .enumerate()
                .filter(|(_, p)| crosses_cell(p, cell))
                .map(|(i, _)| i as u32)
                .collect()
        })
        .collect()
}

fn whole_decomposition_cutting(
    family: CurveFamily,
    h: Vec<CurveParam>,
    r: f64,
    budget: usize,
    reason: &'static str,
) -> Result<Cutting, CuttingError> {
    let complex = build_decomposition(family, &h)?;
    // Cells of CT(H) are crossed by no member of H.
    let pieces = complex
        .cells()
        .iter()
        .map(|c| Piece { geom: PieceGeom::Cell(c.clone()), crossing: vec![] })
        .collect::<Vec<_>>();
    let cells = complex.cells().len();
    let crossing = vec![Vec::new(); cells];
    let excess = vec![Rat::zero(); cells];
    let mut trail = Trail::default();
    trail.push(Attempt {
        level: 1,
        seed: 0,
        sample_size: h.len(),
        cells,
        accepted: true,
        reason,
    });
    Ok(Cutting {
        family,
        h,
        r,
        budget,
        pieces,
        refinements: vec![None; cells],
        level1: complex,
        level1_crossing: crossing,
        excess,
        trail,
    })
}

// ---------------------------------------------------------------------------
// Suboptimal cutting: one sampling level, size O(r^d log^d r).
// ---------------------------------------------------------------------------

pub fn suboptimal_cutting(
    family: CurveFamily,
    h: &[CurveParam],
    r: f64,
    cfg: &SampleConfig,
) -> Result<Cutting, CuttingError> {
    suboptimal_cutting_with_params(family, h, r, cfg, &cached_params(family))
}

pub fn suboptimal_cutting_with_params(
    family: CurveFamily,
    h: &[CurveParam],
    r: f64,
    cfg: &SampleConfig,
    params: &CuttingParams,
) -> Result<Cutting, CuttingError> {
    let hs = dedup_params(family, h)?;
    let n = hs.len();
    if !(r > 1.0 && (r as f64) < n as f64) {
        return Err(CuttingError::PreconditionViolated { r, n });
    }
    let rn = rat_from_f64(r);
    let budget = floor_div(n, &rn);
    let a = params.a_const;
    let c = params.c_census;
    let log2r1 = (r + 1.0).log2();

    if 2.0 * a * r * log2r1 >= n as f64 {
        // The full decomposition is already small enough to serve.
        return whole_decomposition_cutting(family, hs, r, budget, "whole decomposition");
    }

    let r_prime = a * r * log2r1;
    let p = r_prime / n as f64;
    let size_cap = 3.0 * c * a * a * r * r * log2r1 * log2r1;
    let n_big = Rat::from_integer(BigInt::from(n));
    let mut trail = Trail::default();

    for attempt in 0..cfg.max_retries {
        let seed = derive_seed(cfg.seed, attempt as u64);
        let sample = bernoulli_sample(n, &SampleConfig { p, ..*cfg }.with_seed(seed));
        let sub: Vec<CurveParam> = sample.iter().map(|&i| hs[i as usize].clone()).collect();
        let complex = build_decomposition(family, &sub)?;
        let cells = complex.cells().len();
        if (cells as f64) > size_cap {
            trail.push(Attempt {
                level: 1,
                seed,
                sample_size: sample.len(),
                cells,
                accepted: false,
                reason: "size cap exceeded",
            });
            continue;
        }
        let crossing = crossing_sets(&hs, &complex);
        // Reject as soon as some cell reaches the crossing threshold n/r.
        let over = crossing.iter().any(|set| {
            Rat::from_integer(BigInt::from(set.len())) * &rn >= n_big
        });
        if over {
            trail.push(Attempt {
                level: 1,
                seed,
                sample_size: sample.len(),
                cells,
                accepted: false,
                reason: "crossing threshold exceeded",
            });
            continue;
        }
        trail.push(Attempt {
            level: 1,
            seed,
            sample_size: sample.len(),
            cells,
            accepted: true,
            reason: "accepted",
        });
        let excess: Vec<Rat> = crossing
            .iter()
            .map(|set| Rat::from_integer(BigInt::from(set.len())) * &rn / &n_big)
            .collect();
        let pieces = complex
            .cells()
            .iter()
            .zip(crossing.iter())
            .map(|(cell, set)| Piece {
                geom: PieceGeom::Cell(cell.clone()),
                crossing: set.clone(),
            })
            .collect();
        return Ok(Cutting {
            family,
            h: hs,
            r,
            budget,
            pieces,
            refinements: vec![None; cells],
            level1: complex,
            level1_crossing: crossing,
            excess,
            trail,
        });
    }
    Err(CuttingError::RetryBudgetExhausted { trail })
}

impl SampleConfig {
    fn with_seed(mut self, seed: u64) -> SampleConfig {
        self.seed = seed;
        self
    }
}

// ---------------------------------------------------------------------------
// Optimal cutting: two sampling levels, size O(r^d).
// ---------------------------------------------------------------------------

pub fn optimal_cutting(
    family: CurveFamily,
    h: &[CurveParam],
    r: f64,
    cfg: &SampleConfig,
) -> Result<Cutting, CuttingError> {
    optimal_cutting_with_params(family, h, r, cfg, &cached_params(family))
}

pub fn optimal_cutting_with_params(
    family: CurveFamily,
    h: &[CurveParam],
    r: f64,
    cfg: &SampleConfig,
    params: &CuttingParams,
) -> Result<Cutting, CuttingError> {
    let hs = dedup_params(family, h)?;
    let n = hs.len();
    if !(r > 1.0 && r < n as f64) {
        return Err(CuttingError::PreconditionViolated { r, n });
    }
    let rn = rat_from_f64(r);
    let budget = floor_div(n, &rn);
    if budget >= n.saturating_sub(1) {
        // Any single-curve decomposition is a valid cutting at this budget.
        let complex = build_decomposition(family, &hs[..1])?;
        let crossing = crossing_sets(&hs, &complex);
        debug_assert!(crossing.iter().all(|s| s.len() <= budget));
        let excess: Vec<Rat> = crossing
            .iter()
            .map(|s| Rat::from_integer(BigInt::from(s.len())) * &rn / Rat::from_integer(BigInt::from(n)))
            .collect();
        let pieces = complex
            .cells()
            .iter()
            .zip(crossing.iter())
            .map(|(cell, set)| Piece { geom: PieceGeom::Cell(cell.clone()), crossing: set.clone() })
            .collect();
        let cells = complex.cells().len();
        let mut trail = Trail::default();
        trail.push(Attempt {
            level: 1,
            seed: cfg.seed,
            sample_size: 1,
            cells,
            accepted: true,
            reason: "single sample suffices",
        });
        return Ok(Cutting {
            family,
            h: hs,
            r,
            budget,
            pieces,
            refinements: vec![None; cells],
            level1: complex,
            level1_crossing: crossing,
            excess,
            trail,
        });
    }
    if r > n as f64 / 2.0 {
        return whole_decomposition_cutting(family, hs, r, budget, "r > n/2, whole decomposition");
    }

    let n_big = Rat::from_integer(BigInt::from(n));
    let p = r / n as f64;
    // Level-1 acceptance: the refinement-size functional must stay within a
    // fixed quadratic budget; its expectation is O(r^2).
    let functional_budget = 10.0 * (r + 2.0) * (r + 2.0);
    let mut trail = Trail::default();

    for attempt in 0..cfg.max_retries {
        let seed = derive_seed(cfg.seed, attempt as u64);
        let sample = bernoulli_sample(n, &SampleConfig { p, ..*cfg }.with_seed(seed));
        let sub: Vec<CurveParam> = sample.iter().map(|&i| hs[i as usize].clone()).collect();
        let complex = build_decomposition(family, &sub)?;
        let cells = complex.cells().len();
        let crossing = crossing_sets(&hs, &complex);
        let excess: Vec<Rat> = crossing
            .iter()
            .map(|set| Rat::from_integer(BigInt::from(set.len())) * &rn / &n_big)
            .collect();
        let functional: f64 = excess
            .iter()
            .map(|t| {
                let tf = t.to_f64().unwrap_or(f64::MAX);
                if tf <= 1.0 {
                    1.0
                } else {
                    let l = (tf + 1.0).log2();
                    tf * tf * l * l
                }
            })
            .sum();
        if functional > functional_budget {
            trail.push(Attempt {
                level: 1,
                seed,
                sample_size: sample.len(),
                cells,
                accepted: false,
                reason: "size functional over budget",
            });
            continue;
        }
        trail.push(Attempt {
            level: 1,
            seed,
            sample_size: sample.len(),
            cells,
            accepted: true,
            reason: "accepted",
        });

        // Refine heavy cells inside their own crossing sets.
        let mut pieces: Vec<Piece> = Vec::new();
        let mut refinements: Vec<Option<Refinement>> = vec![None; cells];
        for (idx, cell) in complex.cells().iter().enumerate() {
            let set = &crossing[idx];
            if set.len() <= budget {
                pieces.push(Piece { geom: PieceGeom::Cell(cell.clone()), crossing: set.clone() });
                continue;
            }
            let refinement = refine_cell(
                family,
                &hs,
                set,
                budget,
                params,
                derive_seed(cfg.seed, (attempt as u64) << 32 | idx as u64),
                cfg.max_retries,
                &mut trail,
            )?;
            for inner_cell in refinement.complex.cells() {
                if !cell_intersection_nonempty(cell, inner_cell) {
                    continue;
                }
                let members: Vec<u32> = set
                    .iter()
                    .copied()
                    .filter(|&i| crosses_pair(&hs[i as usize], cell, inner_cell))
                    .collect();
                debug_assert!(members.len() <= budget);
                pieces.push(Piece {
                    geom: PieceGeom::Pair { outer: cell.clone(), inner: inner_cell.clone() },
                    crossing: members,
                });
            }
            refinements[idx] = Some(refinement);
        }
        return Ok(Cutting {
            family,
            h: hs,
            r,
            budget,
            pieces,
            refinements,
            level1: complex,
            level1_crossing: crossing,
            excess,
            trail,
        });
    }
    Err(CuttingError::RetryBudgetExhausted { trail })
}

/// Second-level sampler: Bernoulli sample inside the outer cell's crossing
/// set at rate ~ t*log(t+1)/n', escalating gently until every inner cell is
/// crossed by at most `budget` ground curves.
#[allow(clippy::too_many_arguments)]
fn refine_cell(
    family: CurveFamily,
    hs: &[CurveParam],
    ground: &[u32],
    budget: usize,
    params: &CuttingParams,
    seed: u64,
    max_retries: u32,
    trail: &mut Trail,
) -> Result<Refinement, CuttingError> {
    let n_prime = ground.len();
    let t = n_prime as f64 / budget.max(1) as f64;
    let mut q = (1.3 * t * (t + 1.0).log2() / n_prime as f64).min(0.9);
    let inner_cap = (8.0 * params.c_census * (t + 2.0) * (t + 2.0)
        * (t + 2.0).log2() * (t + 2.0).log2())
    .max(64.0);

    for attempt in 0..max_retries {
        let sub_seed = derive_seed(seed, attempt as u64);
        let sample = bernoulli_sample(n_prime, &SampleConfig::new(q, sub_seed));
        let sub: Vec<CurveParam> = sample
            .iter()
            .map(|&i| hs[ground[i as usize] as usize].clone())
            .collect();
        let complex = build_decomposition(family, &sub)?;
        let cells = complex.cells().len();
        let size_ok = (cells as f64) <= inner_cap;
        let budget_ok = size_ok
            && complex.cells().iter().all(|cell| {
                let mut count = 0usize;
                for &g in ground {
                    if crosses_cell(&hs[g as usize], cell) {
                        count += 1;
                        if count > budget {
                            return false;
                        }
                    }
                }
                true
            });
        trail.push(Attempt {
            level: 2,
            seed: sub_seed,
            sample_size: sample.len(),
            cells,
            accepted: budget_ok,
            reason: if budget_ok {
                "accepted"
            } else if size_ok {
                "crossing budget exceeded"
            } else {
                "size cap exceeded"
            },
        });
        if budget_ok {
            return Ok(Refinement { ground: ground.to_vec(), complex });
        }
        if attempt % 3 == 2 {
            q = (q * 1.35).min(0.9);
        }
    }
    if n_prime <= 24 {
        // Tiny ground: its own decomposition is crossed by none of it.
        let sub: Vec<CurveParam> = ground.iter().map(|&i| hs[i as usize].clone()).collect();
        let complex = build_decomposition(family, &sub)?;
        trail.push(Attempt {
            level: 2,
            seed,
            sample_size: n_prime,
            cells: complex.cells().len(),
            accepted: true,
            reason: "full ground fallback",
        });
        return Ok(Refinement { ground: ground.to_vec(), complex });
    }
    Err(CuttingError::RetryBudgetExhausted { trail: std::mem::take(trail) })
}

// ---------------------------------------------------------------------------
// Geometry of piece intersections.
// ---------------------------------------------------------------------------

enum FiberSpan {
    At(QuadExt),
    Open(Ext, Ext),
}

enum FiberKind {
    OnCurve(Poly),
    Region { lo: Option<Poly>, hi: Option<Poly> },
}

fn cell_fiber(cell: &Cell) -> (FiberSpan, FiberKind) {
    match cell {
        Cell::Point(p) => (
            FiberSpan::At(p.x2.clone()),
            FiberKind::Region { lo: None, hi: None }, // refined below via at-eval
        ),
        Cell::VerticalOnBreakLine { x2, .. } | Cell::VerticalExtra { x2, .. } => (
            FiberSpan::At(x2.clone()),
            FiberKind::Region { lo: None, hi: None },
        ),
        Cell::Arc { carrier, c1, c2 } => (
            FiberSpan::Open(c1.clone(), c2.clone()),
            FiberKind::OnCurve(carrier.param.poly()),
        ),
        Cell::TwoDim { bottom, top, c1, c2, .. } => (
            FiberSpan::Open(c1.clone(), c2.clone()),
            FiberKind::Region {
                lo: bottom.as_ref().map(|b| b.param.poly()),
                hi: top.as_ref().map(|t| t.param.poly()),
            },
        ),
    }
}

/// The cell's set of `x1` values over the single abscissa `v`: an exact
/// value, an open interval, or nothing.
enum AtFiber {
    Empty,
    Value(QuadExt),
    Interval(Ext, Ext),
}

fn at_fiber(cell: &Cell, v: &QuadExt) -> AtFiber {
    let inside = |lo: &Ext, hi: &Ext, x: &QuadExt| {
        lo.cmp_qe(x) == Ordering::Less && hi.cmp_qe(x) == Ordering::Greater
    };
    match cell {
        Cell::Point(p) => {
            if qe_cmp(&p.x2, v) == Ordering::Equal {
                AtFiber::Value(p.x1.clone())
            } else {
                AtFiber::Empty
            }
        }
        Cell::VerticalOnBreakLine { x2, lower, upper } => {
            if qe_cmp(x2, v) == Ordering::Equal {
                AtFiber::Interval(lower.clone(), upper.clone())
            } else {
                AtFiber::Empty
            }
        }
        Cell::VerticalExtra { x2, anchor, dir, far } => {
            if qe_cmp(x2, v) != Ordering::Equal {
                return AtFiber::Empty;
            }
            let (lo, hi) = match dir {
                VerticalDir::Up => (Ext::Finite(anchor.x1.clone()), far.clone()),
                VerticalDir::Down => (far.clone(), Ext::Finite(anchor.x1.clone())),
            };
            AtFiber::Interval(lo, hi)
        }
        Cell::Arc { carrier, c1, c2 } => {
            if inside(c1, c2, v) {
                AtFiber::Value(carrier.param.poly().eval(v))
            } else {
                AtFiber::Empty
            }
        }
        Cell::TwoDim { bottom, top, c1, c2, .. } => {
            if !inside(c1, c2, v) {
                return AtFiber::Empty;
            }
            let lo = bottom
                .as_ref()
                .map(|b| Ext::Finite(b.param.poly().eval(v)))
                .unwrap_or(Ext::NegInf);
            let hi = top
                .as_ref()
                .map(|t| Ext::Finite(t.param.poly().eval(v)))
                .unwrap_or(Ext::PosInf);
            AtFiber::Interval(lo, hi)
        }
    }
}

fn at_fiber_intersection(a: AtFiber, b: AtFiber) -> AtFiber {
    match (a, b) {
        (AtFiber::Empty, _) | (_, AtFiber::Empty) => AtFiber::Empty,
        (AtFiber::Value(x), AtFiber::Value(y)) => {
            if qe_cmp(&x, &y) == Ordering::Equal {
                AtFiber::Value(x)
            } else {
                AtFiber::Empty
            }
        }
        (AtFiber::Value(x), AtFiber::Interval(lo, hi))
        | (AtFiber::Interval(lo, hi), AtFiber::Value(x)) => {
            if lo.cmp_qe(&x) == Ordering::Less && hi.cmp_qe(&x) == Ordering::Greater {
                AtFiber::Value(x)
            } else {
                AtFiber::Empty
            }
        }
        (AtFiber::Interval(l1, h1), AtFiber::Interval(l2, h2)) => {
            let lo = l1.max(l2);
            let hi = h1.min(h2);
            if lo < hi {
                AtFiber::Interval(lo, hi)
            } else {
                AtFiber::Empty
            }
        }
    }
}

fn span_abscissa(cell: &Cell) -> Option<QuadExt> {
    match cell_fiber(cell).0 {
        FiberSpan::At(v) => Some(v),
        FiberSpan::Open(_, _) => None,
    }
}

fn open_span(cell: &Cell) -> Option<(Ext, Ext)> {
    match cell_fiber(cell).0 {
        FiberSpan::At(_) => None,
        FiberSpan::Open(l, h) => Some((l, h)),
    }
}

fn span_overlap(a: &Cell, b: &Cell) -> Option<(Ext, Ext)> {
    let (l1, h1) = open_span(a)?;
    let (l2, h2) = open_span(b)?;
    let lo = l1.max(l2);
    let hi = h1.min(h2);
    (lo < hi).then_some((lo, hi))
}

/// Exact emptiness test for the intersection of two cells.
pub fn cell_intersection_nonempty(a: &Cell, b: &Cell) -> bool {
    // Single-abscissa cases reduce to interval arithmetic at that abscissa.
    if let Some(v) = span_abscissa(a) {
        return !matches!(
            at_fiber_intersection(at_fiber(a, &v), at_fiber(b, &v)),
            AtFiber::Empty
        );
    }
    if let Some(v) = span_abscissa(b) {
        return !matches!(
            at_fiber_intersection(at_fiber(a, &v), at_fiber(b, &v)),
            AtFiber::Empty
        );
    }
    let Some((lo, hi)) = span_overlap(a, b) else {
        return false;
    };
    match (cell_fiber(a).1, cell_fiber(b).1) {
        (FiberKind::OnCurve(p), FiberKind::OnCurve(q)) => {
            let diff = p.sub(&q);
            if diff.is_zero() {
                return true;
            }
            !roots_in_span(&diff, &lo, &hi).is_empty()
        }
        (FiberKind::OnCurve(p), FiberKind::Region { lo: rl, hi: rh })
        | (FiberKind::Region { lo: rl, hi: rh }, FiberKind::OnCurve(p)) => {
            let mut polys: Vec<Poly> = Vec::new();
            if let Some(b) = rl {
                polys.push(p.sub(&b));
            }
            if let Some(t) = rh {
                polys.push(t.sub(&p));
            }
            let refs: Vec<&Poly> = polys.iter().collect();
            exists_all_positive(&refs, &lo, &hi)
        }
        (
            FiberKind::Region { lo: l1, hi: h1 },
            FiberKind::Region { lo: l2, hi: h2 },
        ) => {
            let mut polys: Vec<Poly> = Vec::new();
            for l in [&l1, &l2].into_iter().flatten() {
                for h in [&h1, &h2].into_iter().flatten() {
                    polys.push(h.sub(l));
                }
            }
            let refs: Vec<&Poly> = polys.iter().collect();
            exists_all_positive(&refs, &lo, &hi)
        }
    }
}

/// Exact crossing of the intersection piece `a ∩ b` by the curve `s`:
/// does `sign(x1 - h(x2, s))` take two or more values on it?
pub fn crosses_pair(s: &CurveParam, a: &Cell, b: &Cell) -> bool {
    let g = s.poly();
    if let Some(v) = span_abscissa(a).or_else(|| span_abscissa(b)) {
        return match at_fiber_intersection(at_fiber(a, &v), at_fiber(b, &v)) {
            AtFiber::Empty | AtFiber::Value(_) => false,
            AtFiber::Interval(lo, hi) => {
                let gv = g.eval(&v);
                lo.cmp_qe(&gv) == Ordering::Less && hi.cmp_qe(&gv) == Ordering::Greater
            }
        };
    }
    let Some((lo, hi)) = span_overlap(a, b) else {
        return false;
    };
    match (cell_fiber(a).1, cell_fiber(b).1) {
        (FiberKind::OnCurve(p), FiberKind::OnCurve(q)) => {
            let diff = p.sub(&q);
            let sig = p.sub(&g);
            if diff.is_zero() {
                return sign_set::count(signs_on(&sig, &lo, &hi)) >= 2;
            }
            // Finitely many common points; collect the signs there.
            let mut seen = 0u8;
            for root in roots_in_span(&diff, &lo, &hi) {
                seen |= sign_set::of_ordering(sig.eval(&root).sign());
            }
            sign_set::count(seen) >= 2
        }
        (FiberKind::OnCurve(p), FiberKind::Region { lo: rl, hi: rh })
        | (FiberKind::Region { lo: rl, hi: rh }, FiberKind::OnCurve(p)) => {
            // Signs of p - g over { t : region constraints hold on curve p }.
            let sig = p.sub(&g);
            let mut constraints: Vec<Poly> = Vec::new();
            if let Some(b) = &rl {
                constraints.push(p.sub(b));
            }
            if let Some(t) = &rh {
                constraints.push(t.sub(&p));
            }
            let mut cuts: Vec<QuadExt> = Vec::new();
            for c in &constraints {
                cuts.extend(roots_in_span(c, &lo, &hi));
            }
            cuts.extend(roots_in_span(&sig, &lo, &hi));
            cuts.sort();
            cuts.dedup();
            let zero = Rat::zero();
            let mut seen = 0u8;
            for t in component_samples(&lo, &hi, &cuts) {
                if constraints.iter().all(|c| c.eval_rat(&t) > zero) {
                    seen |= sign_set::of_ordering(sig.eval_rat(&t).cmp(&zero));
                }
            }
            if !sig.is_zero() {
                for root in roots_in_span(&sig, &lo, &hi) {
                    if constraints
                        .iter()
                        .all(|c| c.eval(&root).sign() == Ordering::Greater)
                    {
                        seen |= sign_set::ZERO;
                    }
                }
            }
            sign_set::count(seen) >= 2
        }
        (
            FiberKind::Region { lo: l1, hi: h1 },
            FiberKind::Region { lo: l2, hi: h2 },
        ) => {
            let mut overlap: Vec<Poly> = Vec::new();
            for l in [&l1, &l2].into_iter().flatten() {
                for h in [&h1, &h2].into_iter().flatten() {
                    overlap.push(h.sub(l));
                }
            }
            // Above: a fiber point strictly above the curve exists.
            let mut above = overlap.clone();
            for h in [&h1, &h2].into_iter().flatten() {
                above.push(h.sub(&g));
            }
            let refs: Vec<&Poly> = above.iter().collect();
            if !exists_all_positive(&refs, &lo, &hi) {
                return false;
            }
            // Below, symmetrically.
            let mut below = overlap;
            for l in [&l1, &l2].into_iter().flatten() {
                below.push(g.sub(l));
            }
            let refs: Vec<&Poly> = below.iter().collect();
            exists_all_positive(&refs, &lo, &hi)
        }
    }
}

// ---------------------------------------------------------------------------
// Tail-bound Monte Carlo estimator.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailRow {
    pub t: f64,
    pub mean: f64,
    pub stderr: f64,
}

/// Monte Carlo means of `|T(S)_{>=t}|`, the number of sample-decomposition
/// cells crossed by at least `t*n/r` of the curves, over Bernoulli samples
/// at rate `r/n`.
pub fn tail_estimate(
    family: CurveFamily,
    h: &[CurveParam],
    r: f64,
    t_values: &[f64],
    trials: usize,
    seed: u64,
) -> Result<Vec<TailRow>, CuttingError> {
    let hs = dedup_params(family, h)?;
    let n = hs.len();
    // epsilon fixed to 1/2: require 1 <= r <= n/2.
    if !(1.0 <= r && r <= n as f64 / 2.0) {
        return Err(CuttingError::PreconditionViolated { r, n });
    }
    let rn = rat_from_f64(r);
    let n_big = Rat::from_integer(BigInt::from(n));
    let p = r / n as f64;
    let mut counts: Vec<Vec<f64>> = vec![Vec::with_capacity(trials); t_values.len()];
    for trial in 0..trials {
        let sample = bernoulli_sample(n, &SampleConfig::new(p, derive_seed(seed, trial as u64)));
        let sub: Vec<CurveParam> = sample.iter().map(|&i| hs[i as usize].clone()).collect();
        let complex = build_decomposition(family, &sub)?;
        let sizes: Vec<Rat> = complex
            .cells()
            .iter()
            .map(|cell| {
                let k = hs.iter().filter(|p| crosses_cell(p, cell)).count();
                Rat::from_integer(BigInt::from(k))
            })
            .collect();
        for (ti, t) in t_values.iter().enumerate() {
            let t_rat = rat_from_f64(*t);
            // |I| >= t*n/r  <=>  |I| * r >= t * n
            let c = sizes
                .iter()
                .filter(|k| *k * &rn >= &t_rat * &n_big)
                .count();
            counts[ti].push(c as f64);
        }
    }
    Ok(t_values
        .iter()
        .zip(counts.iter())
        .map(|(t, cs)| TailRow {
            t: *t,
            mean: crate::stats::mean(cs),
            stderr: crate::stats::stderr(cs),
        })
        .collect())
}

// ---------------------------------------------------------------------------
// Exact binomial moment check.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct MomentCheck {
    pub exact: Rat,
    pub bound: Rat,
    pub holds: bool,
}

fn rat_pow(x: &Rat, e: u32) -> Rat {
    let mut acc = Rat::from_integer(BigInt::from(1));
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// Exact `E[|S|^d]` for `|S| ~ Binomial(n, p)` against the bound `(np+d)^d`,
/// both as rationals.
pub fn moment_check(n: u32, p: &Rat, d: u32) -> MomentCheck {
    let one = Rat::from_integer(BigInt::from(1));
    let q = &one - p;
    // Walk C(n,k) * p^k * (1-p)^(n-k) incrementally.
    let mut exact = Rat::from_integer(BigInt::from(0));
    let mut binom = BigInt::from(1);
    let mut pk = rat_pow(&q, n); // k = 0 term
    if !p.is_zero() {
        let ratio = p / &q; // q == 0 only when p == 1, handled below
        let _ = ratio;
    }
    for k in 0..=n {
        if k > 0 {
            binom = binom * BigInt::from(n - k + 1) / BigInt::from(k);
            // p^k (1-p)^(n-k), recomputed exactly to stay well-defined at p in {0,1}
            pk = rat_pow(p, k) * rat_pow(&q, n - k);
        }
        let kd = rat_pow(&Rat::from_integer(BigInt::from(k)), d);
        exact += Rat::from_integer(binom.clone()) * &pk * kd;
    }
    let bound = rat_pow(&(Rat::from_integer(BigInt::from(n)) * p + Rat::from_integer(BigInt::from(d))), d);
    let holds = exact <= bound;
    MomentCheck { exact, bound, holds }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, rat_int};
    use crate::families::PointQE;
    use crate::instances::{parallel_lines, random_general_lines, random_query_points};

    fn line(a: i64, b: i64) -> CurveParam {
        CurveParam::line(rat_int(a), rat_int(b))
    }

    #[test]
    fn bernoulli_edge_probabilities() {
        let all = bernoulli_sample(100, &SampleConfig::new(1.0, 3));
        assert_eq!(all.len(), 100);
        let none = bernoulli_sample(100, &SampleConfig::new(0.0, 3));
        assert!(none.is_empty());
    }

    #[test]
    fn bernoulli_concentration() {
        // |S| within 3 sigma of n*p on average over seeds.
        let n = 10_000;
        let p = 0.3;
        let sigma = (n as f64 * p * (1.0 - p)).sqrt();
        let mut within = 0;
        for seed in 0..100 {
            let s = bernoulli_sample(n, &SampleConfig::new(p, seed)).len() as f64;
            if (s - n as f64 * p).abs() <= 3.0 * sigma {
                within += 1;
            }
        }
        assert!(within >= 99, "only {within}/100 samples within 3 sigma");
    }

    #[test]
    fn suboptimal_parallel_lines() {
        let h = parallel_lines(4);
        let cfg = SampleConfig::seeded(1);
        let cut = suboptimal_cutting(CurveFamily::Lines, &h, 2.0, &cfg).unwrap();
        assert!(cut.verify_budget());
        assert_eq!(cut.recount_crossings(), cut.max_piece_crossing());
        assert!(cut.max_piece_crossing() <= 2);
    }

    #[test]
    fn degenerate_duplicates_violate_precondition() {
        let h = vec![line(1, 0); 8];
        let cfg = SampleConfig::seeded(1);
        let err = suboptimal_cutting(CurveFamily::Lines, &h, 1.5, &cfg).unwrap_err();
        assert!(matches!(err, CuttingError::PreconditionViolated { n: 1, .. }));
    }

    #[test]
    fn suboptimal_succeeds_quickly_across_seeds() {
        let h = random_general_lines(50, 77);
        let mut ok = 0;
        for seed in 0..100 {
            let cfg = SampleConfig::seeded(seed);
            match suboptimal_cutting(CurveFamily::Lines, &h, 5.0, &cfg) {
                Ok(cut) => {
                    assert!(cut.verify_budget());
                    if cut.trail.retries() <= 10 {
                        ok += 1;
                    }
                }
                Err(_) => {}
            }
        }
        assert!(ok >= 95, "succeeded quickly in only {ok}/100 seeds");
    }

    #[test]
    fn optimal_trivial_budget() {
        // floor(n/r) >= n-1: a single-curve decomposition is a valid cutting.
        let h = random_general_lines(10, 5);
        let cfg = SampleConfig::seeded(9);
        let cut = optimal_cutting(CurveFamily::Lines, &h, 10.0 / 9.5, &cfg).unwrap();
        assert!(cut.verify_budget());
        assert_eq!(cut.trail.attempts[0].reason, "single sample suffices");
    }

    #[test]
    fn optimal_concurrent_lines() {
        let h: Vec<CurveParam> = (1..=10).map(|i| line(i, 0)).collect();
        let cfg = SampleConfig::seeded(4);
        let cut = optimal_cutting(CurveFamily::Lines, &h, 3.0, &cfg).unwrap();
        assert!(cut.verify_budget());
        assert_eq!(cut.recount_crossings(), cut.max_piece_crossing());
        // The common point lies in some piece crossed by nothing.
        let pieces_with_origin: Vec<&Piece> = cut
            .pieces
            .iter()
            .filter(|p| match &p.geom {
                PieceGeom::Cell(Cell::Point(q)) => {
                    q.x1 == QuadExt::from_int(0) && q.x2 == QuadExt::from_int(0)
                }
                _ => false,
            })
            .collect();
        for p in &pieces_with_origin {
            assert!(p.crossing.is_empty());
        }
        let cover = random_query_points(300, 40, 8);
        cut.verify_cover(&cover).unwrap();
    }

    #[test]
    fn optimal_mid_range() {
        let h = random_general_lines(60, 13);
        let cfg = SampleConfig::seeded(21);
        let cut = optimal_cutting(CurveFamily::Lines, &h, 6.0, &cfg).unwrap();
        assert!(cut.verify_budget());
        assert_eq!(cut.budget, 10);
        let cover = random_query_points(500, 600, 3);
        cut.verify_cover(&cover).unwrap();
        assert!(cut.recount_crossings() <= cut.budget);
    }

    #[test]
    fn cutting_reproducible() {
        let h = random_general_lines(30, 2);
        let cfg = SampleConfig::seeded(5);
        let a = optimal_cutting(CurveFamily::Lines, &h, 4.0, &cfg).unwrap();
        let b = optimal_cutting(CurveFamily::Lines, &h, 4.0, &cfg).unwrap();
        assert_eq!(a.pieces.len(), b.pieces.len());
        for (x, y) in a.pieces.iter().zip(b.pieces.iter()) {
            assert_eq!(x.crossing, y.crossing);
        }
    }

    #[test]
    fn tail_estimate_basics() {
        let h = random_general_lines(30, 9);
        let rows =
            tail_estimate(CurveFamily::Lines, &h, 3.0, &[0.0, 1.0, 2.0, 4.0], 60, 11).unwrap();
        for w in rows.windows(2) {
            assert!(
                w[1].mean <= w[0].mean + 2.0 * (w[0].stderr + w[1].stderr) + 1e-9,
                "tail means must be nonincreasing up to noise"
            );
        }
        // t > r is impossible: |I| <= n < t*n/r.
        let rows = tail_estimate(CurveFamily::Lines, &h, 3.0, &[4.0], 40, 11).unwrap();
        assert_eq!(rows[0].mean, 0.0);
        let err = tail_estimate(CurveFamily::Lines, &h, 20.0, &[0.0], 5, 1).unwrap_err();
        assert!(matches!(err, CuttingError::PreconditionViolated { .. }));
    }

    #[test]
    fn moment_examples() {
        let m = moment_check(10, &rat(1, 2), 2);
        assert_eq!(m.exact, rat(55, 2));
        assert_eq!(m.bound, rat_int(49));
        assert!(m.holds);

        let m = moment_check(12, &rat_int(0), 3);
        assert_eq!(m.exact, rat_int(0));
        assert!(m.holds);

        let m = moment_check(7, &rat_int(1), 1);
        assert_eq!(m.exact, rat_int(7));
        assert_eq!(m.bound, rat_int(8));
        assert!(m.holds);
    }

    #[test]
    fn moment_closed_form_d2() {
        // E[X^2] = np + n(n-1)p^2 exactly.
        for n in [1u32, 2, 5, 9, 17] {
            for p in [rat(1, 4), rat(1, 2), rat(3, 4), rat(1, 3)] {
                let m = moment_check(n, &p, 2);
                let nb = rat_int(n as i64);
                let expected = &nb * &p + &nb * (&nb - rat_int(1)) * &p * &p;
                assert_eq!(m.exact, expected, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn pair_geometry() {
        let outer = Cell::TwoDim {
            bottom: None,
            top: None,
            c1: Ext::NegInf,
            c2: Ext::PosInf,
            fclass: None,
        };
        let inner = Cell::TwoDim {
            bottom: Some(crate::decomposition::CurveRef { branch: 1, param: line(0, 0) }),
            top: Some(crate::decomposition::CurveRef { branch: 1, param: line(0, 2) }),
            c1: Ext::Finite(QuadExt::from_int(-1)),
            c2: Ext::Finite(QuadExt::from_int(1)),
            fclass: None,
        };
        assert!(cell_intersection_nonempty(&outer, &inner));
        // Horizontal line through the middle of the band crosses the piece.
        assert!(crosses_pair(&line(0, 1), &outer, &inner));
        // A line above the band does not.
        assert!(!crosses_pair(&line(0, 5), &outer, &inner));
        // Disjoint bands.
        let high = Cell::TwoDim {
            bottom: Some(crate::decomposition::CurveRef { branch: 1, param: line(0, 10) }),
            top: Some(crate::decomposition::CurveRef { branch: 1, param: line(0, 12) }),
            c1: Ext::NegInf,
            c2: Ext::PosInf,
            fclass: None,
        };
        assert!(!cell_intersection_nonempty(&inner, &high));
        // Point inside / outside a band.
        let pt_in = Cell::Point(PointQE::new(QuadExt::from_int(1), QuadExt::from_int(0)));
        let pt_out = Cell::Point(PointQE::new(QuadExt::from_int(5), QuadExt::from_int(0)));
        assert!(cell_intersection_nonempty(&pt_in, &inner));
        assert!(!cell_intersection_nonempty(&pt_out, &inner));
        assert!(!crosses_pair(&line(0, 1), &pt_in, &inner));
    }

    #[test]
    fn calibration_constants_sane() {
        let p = calibrate(CurveFamily::Lines);
        assert!(p.c_census > 1.0 && p.c_census < 10.0, "C = {}", p.c_census);
        assert!(p.a_const > 4.0 && p.a_const < 32.0, "A = {}", p.a_const);
        // A solves 48*C*A^2 = 2^A up to bisection tolerance.
        let lhs = 48.0 * p.c_census * p.a_const * p.a_const;
        let rhs = 2f64.powf(p.a_const);
        assert!((lhs / rhs - 1.0).abs() < 1e-6);
    }
}
