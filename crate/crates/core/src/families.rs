//! Curve families in branch normal form: each curve is the graph of a
//! polynomial branch `x1 = h(x2, s)` of degree at most two, sorted branches
//! (`k = 1` for both shipped families), no breakpoint functions (`l = 0`).
//!
//! The coordinate convention is fixed: `x1` vertical, `x2` horizontal. All
//! geometric queries reduce to exact sign analysis of difference polynomials
//! over open `x2`-intervals.

use crate::algebra::{
    qe_cmp, rational_between, solve_quadratic, Ext, QuadExt, QuadraticRoots, Rat,
};
use crate::decomposition::{Cell, VerticalDir};
use num::Zero;
use std::cmp::Ordering;
use std::fmt;

/// A family of plane curves with one branch and a uniform bound `N_l` on the
/// number of proper intersections of two distinct members.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurveFamily {
    /// Non-vertical lines `x1 = a*x2 + b`; two distinct lines meet at most once.
    Lines,
    /// Parabolas `x1 = a*x2^2 + b*x2 + c`; two distinct ones meet at most twice.
    Parabolas,
}

impl CurveFamily {
    /// Number of branch functions `k`.
    pub fn branch_count(&self) -> usize {
        1
    }

    /// Number of breakpoint functions `l`.
    pub fn breakpoint_count(&self) -> usize {
        0
    }

    /// Maximal number of proper intersections of two non-coincident members.
    pub fn max_proper_intersections(&self) -> usize {
        match self {
            CurveFamily::Lines => 1,
            CurveFamily::Parabolas => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CurveFamily::Lines => "lines",
            CurveFamily::Parabolas => "parabolas",
        }
    }

    pub fn from_name(s: &str) -> Option<CurveFamily> {
        match s {
            "lines" => Some(CurveFamily::Lines),
            "parabolas" => Some(CurveFamily::Parabolas),
            _ => None,
        }
    }

    pub fn param_matches(&self, p: &CurveParam) -> bool {
        matches!(
            (self, p),
            (CurveFamily::Lines, CurveParam::Line { .. })
                | (CurveFamily::Parabolas, CurveParam::Parabola { .. })
        )
    }
}

impl fmt::Display for CurveFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameter tuple of one curve.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CurveParam {
    Line { slope: Rat, intercept: Rat },
    Parabola { a: Rat, b: Rat, c: Rat },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyError {
    /// The requested line has no slope-intercept form.
    VerticalLineUnsupported,
    BranchIndexOutOfRange { j: usize, k: usize },
    ParamKindMismatch,
}

impl fmt::Display for FamilyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyError::VerticalLineUnsupported => {
                write!(f, "vertical lines have no branch normal form; rotate the input")
            }
            FamilyError::BranchIndexOutOfRange { j, k } => {
                write!(f, "branch index {j} out of range 1..={k}")
            }
            FamilyError::ParamKindMismatch => write!(f, "parameter kind does not match family"),
        }
    }
}

impl std::error::Error for FamilyError {}

impl CurveParam {
    pub fn line(slope: Rat, intercept: Rat) -> CurveParam {
        CurveParam::Line { slope, intercept }
    }

    pub fn parabola(a: Rat, b: Rat, c: Rat) -> CurveParam {
        CurveParam::Parabola { a, b, c }
    }

    /// Line through two points `(x1, x2)`; vertical pairs are rejected.
    pub fn line_through(p: &(Rat, Rat), q: &(Rat, Rat)) -> Result<CurveParam, FamilyError> {
        if p.1 == q.1 {
            return Err(FamilyError::VerticalLineUnsupported);
        }
        let slope = (&p.0 - &q.0) / (&p.1 - &q.1);
        let intercept = &p.0 - &slope * &p.1;
        Ok(CurveParam::Line { slope, intercept })
    }

    pub fn poly(&self) -> Poly {
        match self {
            CurveParam::Line { slope, intercept } => Poly {
                c2: Rat::from_integer(0.into()),
                c1: slope.clone(),
                c0: intercept.clone(),
            },
            CurveParam::Parabola { a, b, c } => Poly {
                c2: a.clone(),
                c1: b.clone(),
                c0: c.clone(),
            },
        }
    }

    pub fn eval_rat(&self, t: &Rat) -> Rat {
        self.poly().eval_rat(t)
    }

    pub fn eval(&self, t: &QuadExt) -> QuadExt {
        self.poly().eval(t)
    }

    /// Canonical total order used for deduplication and deterministic output.
    pub fn canonical_cmp(&self, other: &CurveParam) -> Ordering {
        use CurveParam::*;
        match (self, other) {
            (Line { slope: a1, intercept: b1 }, Line { slope: a2, intercept: b2 }) => {
                a1.cmp(a2).then_with(|| b1.cmp(b2))
            }
            (Parabola { a: a1, b: b1, c: c1 }, Parabola { a: a2, b: b2, c: c2 }) => a1
                .cmp(a2)
                .then_with(|| b1.cmp(b2))
                .then_with(|| c1.cmp(c2)),
            (Line { .. }, Parabola { .. }) => Ordering::Less,
            (Parabola { .. }, Line { .. }) => Ordering::Greater,
        }
    }

    pub fn coeffs(&self) -> Vec<&Rat> {
        match self {
            CurveParam::Line { slope, intercept } => vec![slope, intercept],
            CurveParam::Parabola { a, b, c } => vec![a, b, c],
        }
    }
}

/// Branch evaluation `h_j(t, s)`; `j` is 1-based and must be within `k`.
pub fn eval_branch(
    family: CurveFamily,
    j: usize,
    t: &QuadExt,
    s: &CurveParam,
) -> Result<QuadExt, FamilyError> {
    let k = family.branch_count();
    if j == 0 || j > k {
        return Err(FamilyError::BranchIndexOutOfRange { j, k });
    }
    if !family.param_matches(s) {
        return Err(FamilyError::ParamKindMismatch);
    }
    Ok(s.eval(t))
}

/// A point with quadratic-extension coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointQE {
    pub x1: QuadExt,
    pub x2: QuadExt,
}

impl PointQE {
    pub fn new(x1: QuadExt, x2: QuadExt) -> PointQE {
        PointQE { x1, x2 }
    }

    /// Lexicographic by `(x2, x1)`, the sweep order.
    pub fn sweep_cmp(&self, other: &PointQE) -> Ordering {
        qe_cmp(&self.x2, &other.x2).then_with(|| qe_cmp(&self.x1, &other.x1))
    }
}

/// Outcome of intersecting two curves of one family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Intersections {
    /// The two parameter tuples describe the same point set.
    Coincident,
    /// Proper intersection points, ascending by `x2`. Distinct polynomial
    /// graphs have different germs at every common point, so every common
    /// point is proper (tangential touching included).
    Points(Vec<PointQE>),
}

impl Intersections {
    pub fn points(&self) -> &[PointQE] {
        match self {
            Intersections::Coincident => &[],
            Intersections::Points(p) => p,
        }
    }

    pub fn is_coincident(&self) -> bool {
        matches!(self, Intersections::Coincident)
    }
}

/// All proper intersections of the curves `s1` and `s2`.
pub fn proper_intersections(s1: &CurveParam, s2: &CurveParam) -> Intersections {
    let diff = s1.poly().sub(&s2.poly());
    match diff.roots() {
        QuadraticRoots::AllReals => Intersections::Coincident,
        QuadraticRoots::Roots(roots) => Intersections::Points(
            roots
                .into_iter()
                .map(|t| PointQE::new(s1.eval(&t), t))
                .collect(),
        ),
    }
}

// ---------------------------------------------------------------------------
// Polynomials of degree <= 2 and exact sign analysis on open intervals.
// ---------------------------------------------------------------------------

/// `c2*t^2 + c1*t + c0` with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    pub c2: Rat,
    pub c1: Rat,
    pub c0: Rat,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly {
            c2: Rat::from_integer(0.into()),
            c1: Rat::from_integer(0.into()),
            c0: Rat::from_integer(0.into()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c2.is_zero() && self.c1.is_zero() && self.c0.is_zero()
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        Poly {
            c2: &self.c2 - &other.c2,
            c1: &self.c1 - &other.c1,
            c0: &self.c0 - &other.c0,
        }
    }

    pub fn eval_rat(&self, t: &Rat) -> Rat {
        (&self.c2 * t + &self.c1) * t + &self.c0
    }

    /// Evaluation stays inside the field of `t`, so it never mixes radicals.
    pub fn eval(&self, t: &QuadExt) -> QuadExt {
            if let Some(r) = t.as_rat() {
            return QuadExt::from_rat(self.eval_rat(r));
        }
        let mut acc = t.mul_rat(&self.c1).add_rat(&self.c0);
        if !self.c2.is_zero() {
            acc = acc
                .try_add(&t.square().mul_rat(&self.c2))
                .expect("same field");
        }
        acc
    }

    pub fn roots(&self) -> QuadraticRoots {
        solve_quadratic(&self.c2, &self.c1, &self.c0)
    }
}

/// Set of signs a function attains, as a bit set.
pub mod sign_set {
    pub const NEG: u8 = 1;
    pub const ZERO: u8 = 2;
    pub const POS: u8 = 4;

    pub fn of_ordering(o: std::cmp::Ordering) -> u8 {
        match o {
            std::cmp::Ordering::Less => NEG,
            std::cmp::Ordering::Equal => ZERO,
            std::cmp::Ordering::Greater => POS,
        }
    }

    pub fn count(set: u8) -> u32 {
        set.count_ones()
    }
}

fn strictly_inside(x: &QuadExt, lo: &Ext, hi: &Ext) -> bool {
    lo.cmp_qe(x) == Ordering::Less && hi.cmp_qe(x) == Ordering::Greater
}

/// Exact set of signs of `p` on the open interval `(lo, hi)`, `lo < hi`.
///
/// The sign of a degree-<=2 polynomial is constant between consecutive real
/// roots, so the answer follows from the root positions alone.
pub fn signs_on(p: &Poly, lo: &Ext, hi: &Ext) -> u8 {
    debug_assert!(lo < hi);
    if p.is_zero() {
        return sign_set::ZERO;
    }
    let zero = Rat::from_integer(0.into());
    if p.c2.is_zero() && p.c1.is_zero() {
        return sign_set::of_ordering(p.c0.cmp(&zero));
    }
    let mut set = 0u8;
    match p.roots() {
        QuadraticRoots::AllReals => unreachable!("nonzero polynomial"),
        QuadraticRoots::Roots(roots) => match roots.len() {
            0 => {
                // No real roots: definite sign of the leading coefficient.
                set |= sign_set::of_ordering(p.c2.cmp(&zero));
            }
            1 => {
                let r = &roots[0];
                if p.c2.is_zero() {
                    // Linear: -sign(c1) left of the root, +sign(c1) right.
                    let s = sign_set::of_ordering(p.c1.cmp(&zero));
                    let s_neg = sign_set::of_ordering(p.c1.cmp(&zero).reverse());
                    if lo.cmp_qe(r) == Ordering::Less {
                        set |= s_neg;
                    }
                    if hi.cmp_qe(r) == Ordering::Greater {
                        set |= s;
                    }
                } else {
                    // Double root: sign(c2) off the root.
                    set |= sign_set::of_ordering(p.c2.cmp(&zero));
                }
                if strictly_inside(r, lo, hi) {
                    set |= sign_set::ZERO;
                }
            }
            2 => {
                let (r1, r2) = (&roots[0], &roots[1]);
                let outer = sign_set::of_ordering(p.c2.cmp(&zero));
                let inner = sign_set::of_ordering(p.c2.cmp(&zero).reverse());
                if lo.cmp_qe(r1) == Ordering::Less || hi.cmp_qe(r2) == Ordering::Greater {
                    set |= outer;
                }
                // (lo,hi) meets (r1,r2) iff max(lo,r1) < min(hi,r2).
                let lo_in = match lo {
                    Ext::Finite(l) if qe_cmp(l, r1) == Ordering::Greater => lo.clone(),
                    _ => Ext::Finite(r1.clone()),
                };
                let hi_in = match hi {
                    Ext::Finite(h) if qe_cmp(h, r2) == Ordering::Less => hi.clone(),
                    _ => Ext::Finite(r2.clone()),
                };
                if lo_in < hi_in {
                    set |= inner;
                }
                if strictly_inside(r1, lo, hi) {
                    set |= sign_set::ZERO;
                }
                if strictly_inside(r2, lo, hi) {
                    set |= sign_set::ZERO;
                }
            }
            _ => unreachable!(),
        },
    }
    set
}

/// Roots of `p` strictly inside `(lo, hi)`, ascending. The zero polynomial
/// reports no isolated roots.
pub fn roots_in_span(p: &Poly, lo: &Ext, hi: &Ext) -> Vec<QuadExt> {
    match p.roots() {
        QuadraticRoots::AllReals => vec![],
        QuadraticRoots::Roots(rs) => rs
            .into_iter()
            .filter(|r| strictly_inside(r, lo, hi))
            .collect(),
    }
}

/// Rational sample points, one per connected component of `(lo, hi)` minus
/// the given breakpoints. `cuts` must be sorted ascending and lie inside.
pub fn component_samples(lo: &Ext, hi: &Ext, cuts: &[QuadExt]) -> Vec<Rat> {
    let mut samples = Vec::with_capacity(cuts.len() + 1);
    let mut prev = lo.clone();
    for c in cuts {
        let next = Ext::Finite(c.clone());
        samples.push(rational_between(&prev, &next));
        prev = next;
    }
    samples.push(rational_between(&prev, hi));
    samples
}

/// Does some `t` in the open interval make every polynomial strictly
/// positive? Exact: signs are constant between the collected roots.
pub fn exists_all_positive(polys: &[&Poly], lo: &Ext, hi: &Ext) -> bool {
    let zero = Rat::from_integer(0.into());
    if polys.iter().any(|p| p.is_zero()) {
        return false;
    }
    let mut cuts: Vec<QuadExt> = Vec::new();
    for p in polys {
        cuts.extend(roots_in_span(p, lo, hi));
    }
    cuts.sort();
    cuts.dedup();
    for t in component_samples(lo, hi, &cuts) {
        if polys.iter().all(|p| p.eval_rat(&t) > zero) {
            return true;
        }
    }
    false
}

// ---------------------------------------------------------------------------
// The crossing predicate.
// ---------------------------------------------------------------------------

/// Does some sign condition of the curve `s` (on-curve, strictly above,
/// strictly below) cross the cell? Equivalently: does
/// `sign(x1 - h(x2, s))` take two or more values on the cell?
pub fn crosses_cell(s: &CurveParam, cell: &Cell) -> bool {
    match cell {
        // A singleton meets a set or its complement, never both.
        Cell::Point(_) => false,
        Cell::VerticalOnBreakLine { x2, lower, upper } => {
            let g = s.eval(x2);
            strictly_inside(&g, lower, upper)
        }
        Cell::VerticalExtra { x2, anchor, dir, far } => {
            let g = s.eval(x2);
            let (lo, hi) = match dir {
                VerticalDir::Up => (Ext::Finite(anchor.x1.clone()), far.clone()),
                VerticalDir::Down => (far.clone(), Ext::Finite(anchor.x1.clone())),
            };
            strictly_inside(&g, &lo, &hi)
        }
        Cell::Arc { carrier, c1, c2 } => {
            let diff = carrier.param.poly().sub(&s.poly());
            sign_set::count(signs_on(&diff, c1, c2)) >= 2
        }
        Cell::TwoDim { bottom, top, c1, c2, .. } => {
            // Crossed iff the cell has points strictly above the curve and
            // points strictly below it (a zero between them comes free).
            let g = s.poly();
            let above = match top {
                None => true,
                Some(t) => signs_on(&t.param.poly().sub(&g), c1, c2) & sign_set::POS != 0,
            };
            if !above {
                return false;
            }
            let below = match bottom {
                None => true,
                Some(b) => signs_on(&g.sub(&b.param.poly()), c1, c2) & sign_set::POS != 0,
            };
            below
        }
    }
}
