//! Distal cell decomposition of the plane for a finite set `S` of curves:
//! intersection points, vertical wall segments hung off every intersection,
//! open arcs between consecutive cuts on each curve, and the open
//! two-dimensional regions in between. No cell is crossed by any curve of
//! `S`, the cells cover the plane, and the census is quadratic in `|S|`.
//!
//! Construction sweeps the critical abscissae left to right. Inside a slab
//! the curves are totally ordered (all crossings happen on slab boundaries),
//! so regions are gaps between consecutive curves; a region survives a
//! boundary exactly when neither of its bounding curves passes through an
//! intersection point there (otherwise the wall segments hung off that point
//! seal the gap).

use crate::algebra::{qe_cmp, rational_between, Ext, QuadExt, Rat};
use crate::families::{
    crosses_cell, proper_intersections, CurveFamily, CurveParam, FamilyError, Intersections,
    PointQE,
};
use crate::instances;
use crate::stats::fit_loglog;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerticalDir {
    Up,
    Down,
}

/// Reference to one branch of one curve (all shipped families have `k = 1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveRef {
    pub branch: usize,
    pub param: CurveParam,
}

/// Which of the four two-dimensional sub-families a region cell belongs to,
/// keyed by what its left wall is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FClass {
    /// Unbounded to the left.
    F1,
    /// Left wall on a breakpoint line (empty while `l = 0`).
    F2,
    /// Left wall at a proper intersection on the cell's bottom curve.
    F3,
    /// Left wall along a vertical extra segment.
    F4,
}

/// One cell of the decomposition. All inequalities are strict: cells are
/// open in the stated dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    Point(PointQE),
    /// Vertical segment on a breakpoint line (unused while `l = 0`).
    VerticalOnBreakLine {
        x2: QuadExt,
        lower: Ext,
        upper: Ext,
    },
    /// Vertical segment hung off an intersection point, to the first curve
    /// strictly above/below it or to infinity.
    VerticalExtra {
        x2: QuadExt,
        anchor: PointQE,
        dir: VerticalDir,
        far: Ext,
    },
    /// Open piece of one curve between consecutive cut abscissae.
    Arc {
        carrier: CurveRef,
        c1: Ext,
        c2: Ext,
    },
    /// Open region strictly between a bottom and a top curve (or infinity)
    /// over an open abscissa interval.
    TwoDim {
        bottom: Option<CurveRef>,
        top: Option<CurveRef>,
        c1: Ext,
        c2: Ext,
        fclass: Option<FClass>,
    },
}

impl Cell {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Cell::Point(_) => "point",
            Cell::VerticalOnBreakLine { .. } => "vertical_u",
            Cell::VerticalExtra { .. } => "vertical_extra",
            Cell::Arc { .. } => "arc",
            Cell::TwoDim { .. } => "two_dim",
        }
    }

    fn kind_rank(&self) -> u8 {
        match self {
            Cell::Point(_) => 0,
            Cell::VerticalOnBreakLine { .. } => 1,
            Cell::VerticalExtra { .. } => 2,
            Cell::Arc { .. } => 3,
            Cell::TwoDim { .. } => 4,
        }
    }

    /// Deterministic total order; ties never occur between distinct cells of
    /// one decomposition.
    pub fn canonical_cmp(&self, other: &Cell) -> Ordering {
        fn opt_ref_cmp(a: &Option<CurveRef>, b: &Option<CurveRef>) -> Ordering {
            match (a, b) {
                (None, None) => Ordering::Equal,
                (None, Some(_)) => Ordering::Less,
                (Some(_), None) => Ordering::Greater,
                (Some(x), Some(y)) => x
                    .param
                    .canonical_cmp(&y.param)
                    .then(x.branch.cmp(&y.branch)),
            }
        }
        self.kind_rank().cmp(&other.kind_rank()).then_with(|| match (self, other) {
            (Cell::Point(p), Cell::Point(q)) => p.sweep_cmp(q),
            (
                Cell::VerticalOnBreakLine { x2: a, lower: l1, upper: u1 },
                Cell::VerticalOnBreakLine { x2: b, lower: l2, upper: u2 },
            ) => qe_cmp(a, b).then_with(|| l1.cmp(l2)).then_with(|| u1.cmp(u2)),
            (
                Cell::VerticalExtra { x2: a, anchor: p, dir: d1, .. },
                Cell::VerticalExtra { x2: b, anchor: q, dir: d2, .. },
            ) => qe_cmp(a, b)
                .then_with(|| qe_cmp(&p.x1, &q.x1))
                .then_with(|| (*d1 == VerticalDir::Down).cmp(&(*d2 == VerticalDir::Down))),
            (
                Cell::Arc { carrier: c, c1: a1, .. },
                Cell::Arc { carrier: d, c1: a2, .. },
            ) => c.param.canonical_cmp(&d.param).then_with(|| a1.cmp(a2)),
            (
                Cell::TwoDim { bottom: b1, top: t1, c1: a1, c2: e1, .. },
                Cell::TwoDim { bottom: b2, top: t2, c1: a2, c2: e2, .. },
            ) => a1
                .cmp(a2)
                .then_with(|| opt_ref_cmp(b1, b2))
                .then_with(|| opt_ref_cmp(t1, t2))
                .then_with(|| e1.cmp(e2)),
            _ => unreachable!("kind ranks equal"),
        })
    }

    /// Exact membership of a rational point.
    pub fn contains(&self, x1: &Rat, x2: &Rat) -> bool {
        let qx1 = QuadExt::from_rat(x1.clone());
        let qx2 = QuadExt::from_rat(x2.clone());
        let inside = |v: &QuadExt, lo: &Ext, hi: &Ext| {
            lo.cmp_qe(v) == Ordering::Less && hi.cmp_qe(v) == Ordering::Greater
        };
        match self {
            Cell::Point(p) => p.x1 == qx1 && p.x2 == qx2,
            Cell::VerticalOnBreakLine { x2, lower, upper } => {
                *x2 == qx2 && inside(&qx1, lower, upper)
            }
            Cell::VerticalExtra { x2, anchor, dir, far } => {
                if *x2 != qx2 {
                    return false;
                }
                let (lo, hi) = match dir {
                    VerticalDir::Up => (Ext::Finite(anchor.x1.clone()), far.clone()),
                    VerticalDir::Down => (far.clone(), Ext::Finite(anchor.x1.clone())),
                };
                inside(&qx1, &lo, &hi)
            }
            Cell::Arc { carrier, c1, c2 } => {
                inside(&qx2, c1, c2) && carrier.param.eval_rat(x2) == *x1
            }
            Cell::TwoDim { bottom, top, c1, c2, .. } => {
                if !inside(&qx2, c1, c2) {
                    return false;
                }
                let above_bottom = match bottom {
                    None => true,
                    Some(b) => b.param.eval_rat(x2) < *x1,
                };
                let below_top = match top {
                    None => true,
                    Some(t) => *x1 < t.param.eval_rat(x2),
                };
                above_bottom && below_top
            }
        }
    }
}

/// Cell counts of a decomposition, by kind and by region sub-family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Census {
    pub point: usize,
    pub vertical_u: usize,
    pub vertical_extra: usize,
    pub arc: usize,
    pub two_dim: usize,
    pub f1: usize,
    pub f2: usize,
    pub f3: usize,
    pub f4: usize,
}

impl Census {
    pub fn total(&self) -> usize {
        self.point + self.vertical_u + self.vertical_extra + self.arc + self.two_dim
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecompositionError {
    /// A point no cell contains: a correctness failure, surfaced loudly.
    CoverageGap { x1: Rat, x2: Rat },
    Family(FamilyError),
}

impl fmt::Display for DecompositionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecompositionError::CoverageGap { x1, x2 } => {
                write!(f, "coverage gap: no cell contains ({x1}, {x2})")
            }
            DecompositionError::Family(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for DecompositionError {}

impl From<FamilyError> for DecompositionError {
    fn from(e: FamilyError) -> Self {
        DecompositionError::Family(e)
    }
}

/// A crossing violation found by [`CellComplex::verify_no_crossing`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub param_idx: usize,
    pub cell_idx: usize,
}

#[derive(Debug, Clone)]
enum CellMeta {
    At { abscissa: u32 },
    Arc { curve: u32, s1: u32, s2: u32 },
    Region { bot: u32, top: u32, s1: u32, s2: u32 },
}

const BOT_INF: u32 = 0; // encoded bottom sentinel; curve i encodes as i+1
const TOP_INF: u32 = u32::MAX;

/// The decomposition of the plane induced by a finite curve set, with an
/// exact point-location index.
#[derive(Debug, Clone)]
pub struct CellComplex {
    family: CurveFamily,
    params: Vec<CurveParam>,
    cells: Vec<Cell>,
    meta: Vec<CellMeta>,
    abscissae: Vec<QuadExt>,
    /// Curve indices ordered by value, one list per slab (`abscissae.len()+1`).
    orders: Vec<Vec<u32>>,
    gap_cells: HashMap<(u32, u32), Vec<(u32, u32, u32)>>,
    arc_cells: Vec<Vec<(u32, u32, u32)>>,
    at_cells: Vec<Vec<u32>>,
    census: Census,
}

impl CellComplex {
    pub fn family(&self) -> CurveFamily {
        self.family
    }

    pub fn params(&self) -> &[CurveParam] {
        &self.params
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn census(&self) -> &Census {
        &self.census
    }

    pub fn abscissae(&self) -> &[QuadExt] {
        &self.abscissae
    }

    /// Every cell containing the rational point, by index. Interiors are
    /// disjoint and boundary points belong to lower-dimensional cells only,
    /// so the list has exactly one entry for a covering complex.
    pub fn locate(&self, x1: &Rat, x2: &Rat) -> Result<Vec<usize>, DecompositionError> {
        let gap = || DecompositionError::CoverageGap { x1: x1.clone(), x2: x2.clone() };
        let qx2 = QuadExt::from_rat(x2.clone());
        match self.abscissae.binary_search_by(|a| qe_cmp(a, &qx2)) {
            Ok(j) => {
                // On a slab boundary: scan wall cells there plus every cell
                // spanning strictly across it. Rare for random queries.
                let j = j as u32;
                let mut found: Vec<usize> = Vec::new();
                for &ci in &self.at_cells[j as usize] {
                    if self.cells[ci as usize].contains(x1, x2) {
                        found.push(ci as usize);
                    }
                }
                for (ci, meta) in self.meta.iter().enumerate() {
                    let spans = match meta {
                        CellMeta::Arc { s1, s2, .. } | CellMeta::Region { s1, s2, .. } => {
                            *s1 <= j && *s2 >= j + 1
                        }
                        CellMeta::At { .. } => false,
                    };
                    if spans && self.cells[ci].contains(x1, x2) {
                        found.push(ci);
                    }
                }
                found.sort_unstable();
                if found.is_empty() {
                    Err(gap())
                } else {
                    Ok(found)
                }
            }
            Err(slab) => {
                let order = &self.orders[slab];
                let slab = slab as u32;
                // Binary search the vertical position among the slab's curves.
                let pos = order.partition_point(|&c| {
                    self.params[c as usize].eval_rat(x2) < *x1
                });
                if pos < order.len() {
                    let c = order[pos];
                    if self.params[c as usize].eval_rat(x2) == *x1 {
                        let arcs = &self.arc_cells[c as usize];
                        let k = arcs.partition_point(|&(s1, _, _)| s1 <= slab);
                        if k > 0 && arcs[k - 1].1 >= slab {
                            return Ok(vec![arcs[k - 1].2 as usize]);
                        }
                        return Err(gap());
                    }
                }
                let bot = if pos > 0 { order[pos - 1] + 1 } else { BOT_INF };
                let top = if pos < order.len() { order[pos] + 1 } else { TOP_INF };
                let spans = self.gap_cells.get(&(bot, top)).ok_or_else(gap)?;
                let k = spans.partition_point(|&(s1, _, _)| s1 <= slab);
                if k > 0 && spans[k - 1].1 >= slab {
                    Ok(vec![spans[k - 1].2 as usize])
                } else {
                    Err(gap())
                }
            }
        }
    }

    /// Checks every (curve, cell) pair; a correct decomposition returns an
    /// empty list.
    pub fn verify_no_crossing(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (pi, p) in self.params.iter().enumerate() {
            for (ci, cell) in self.cells.iter().enumerate() {
                if crosses_cell(p, cell) {
                    out.push(Violation { param_idx: pi, cell_idx: ci });
                }
            }
        }
        out
    }
}

struct RegionState {
    c1: Ext,
    start_slab: u32,
    fclass: FClass,
}

/// Builds the decomposition for the (deduplicated) parameter set.
pub fn build_decomposition(
    family: CurveFamily,
    params: &[CurveParam],
) -> Result<CellComplex, DecompositionError> {
    for p in params {
        if !family.param_matches(p) {
            return Err(FamilyError::ParamKindMismatch.into());
        }
    }
    let mut s: Vec<CurveParam> = params.to_vec();
    s.sort_by(|a, b| a.canonical_cmp(b));
    s.dedup();
    let n = s.len();

    // Intersection events, grouped by abscissa and point.
    let mut raw: Vec<(PointQE, u32, u32)> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if let Intersections::Points(pts) = proper_intersections(&s[i], &s[j]) {
                for p in pts {
                    raw.push((p, i as u32, j as u32));
                }
            }
        }
    }
    raw.sort_by(|a, b| a.0.sweep_cmp(&b.0));

    struct EventPoint {
        x1: QuadExt,
        curves: Vec<u32>,
    }
    let mut abscissae: Vec<QuadExt> = Vec::new();
    let mut events: Vec<Vec<EventPoint>> = Vec::new();
    for (p, i, j) in raw {
        let same_abscissa = abscissae
            .last()
            .is_some_and(|t| qe_cmp(t, &p.x2) == Ordering::Equal);
        if !same_abscissa {
            abscissae.push(p.x2.clone());
            events.push(Vec::new());
        }
        let col = events.last_mut().unwrap();
        let same_point = col
            .last()
            .is_some_and(|e| qe_cmp(&e.x1, &p.x1) == Ordering::Equal);
        if !same_point {
            col.push(EventPoint { x1: p.x1.clone(), curves: Vec::new() });
        }
        let ev = col.last_mut().unwrap();
        for c in [i, j] {
            if !ev.curves.contains(&c) {
                ev.curves.push(c);
            }
        }
    }
    for col in &mut events {
        for ev in col.iter_mut() {
            ev.curves.sort_unstable();
        }
    }
    let m = abscissae.len();

    // Sweep state.
    let mut built: Vec<(Cell, CellMeta)> = Vec::new();
    let first_hi = abscissae
        .first()
        .map(|t| Ext::Finite(t.clone()))
        .unwrap_or(Ext::PosInf);
    let sample0 = rational_between(&Ext::NegInf, &first_hi);
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by(|&a, &b| {
        s[a as usize]
            .eval_rat(&sample0)
            .cmp(&s[b as usize].eval_rat(&sample0))
    });
    let mut pos: Vec<usize> = vec![0; n];
    for (idx, &c) in order.iter().enumerate() {
        pos[c as usize] = idx;
    }
    let mut orders: Vec<Vec<u32>> = vec![order.clone()];
    let mut regions: Vec<RegionState> = (0..=n)
        .map(|_| RegionState { c1: Ext::NegInf, start_slab: 0, fclass: FClass::F1 })
        .collect();
    let mut arc_start: Vec<(Ext, u32)> = vec![(Ext::NegInf, 0); n];
    let mut pinned = vec![false; n];

    for jj in 0..m {
        let t = &abscissae[jj];
        let t_ext = Ext::Finite(t.clone());
        let column: Vec<QuadExt> = s.iter().map(|p| p.eval(t)).collect();

        pinned.iter_mut().for_each(|b| *b = false);
        for ev in &events[jj] {
            for &c in &ev.curves {
                pinned[c as usize] = true;
            }
            // Point cell plus the two wall segments hung off it.
            let anchor = PointQE::new(ev.x1.clone(), t.clone());
            built.push((Cell::Point(anchor.clone()), CellMeta::At { abscissa: jj as u32 }));
            let mut above: Option<&QuadExt> = None;
            let mut below: Option<&QuadExt> = None;
            for v in &column {
                match qe_cmp(v, &ev.x1) {
                    Ordering::Greater => {
                        if above.is_none_or(|a| qe_cmp(v, a) == Ordering::Less) {
                            above = Some(v);
                        }
                    }
                    Ordering::Less => {
                        if below.is_none_or(|b| qe_cmp(v, b) == Ordering::Greater) {
                            below = Some(v);
                        }
                    }
                    Ordering::Equal => {}
                }
            }
            let far_up = above.map(|v| Ext::Finite(v.clone())).unwrap_or(Ext::PosInf);
            let far_down = below.map(|v| Ext::Finite(v.clone())).unwrap_or(Ext::NegInf);
            built.push((
                Cell::VerticalExtra {
                    x2: t.clone(),
                    anchor: anchor.clone(),
                    dir: VerticalDir::Up,
                    far: far_up,
                },
                CellMeta::At { abscissa: jj as u32 },
            ));
            built.push((
                Cell::VerticalExtra {
                    x2: t.clone(),
                    anchor,
                    dir: VerticalDir::Down,
                    far: far_down,
                },
                CellMeta::At { abscissa: jj as u32 },
            ));
        }

        // Arcs of pinned curves end here.
        for (c, is_pinned) in pinned.iter().enumerate() {
            if *is_pinned {
                let (start, s1) = std::mem::replace(
                    &mut arc_start[c],
                    (t_ext.clone(), jj as u32 + 1),
                );
                built.push((
                    Cell::Arc {
                        carrier: CurveRef { branch: 1, param: s[c].clone() },
                        c1: start,
                        c2: t_ext.clone(),
                    },
                    CellMeta::Arc { curve: c as u32, s1, s2: jj as u32 },
                ));
            }
        }

        // Reorder each event block by its values just right of the boundary.
        let next_hi = abscissae
            .get(jj + 1)
            .map(|t| Ext::Finite(t.clone()))
            .unwrap_or(Ext::PosInf);
        let next_sample = rational_between(&t_ext, &next_hi);
        let old_order = order.clone();
        for ev in &events[jj] {
            let mut positions: Vec<usize> =
                ev.curves.iter().map(|&c| pos[c as usize]).collect();
            positions.sort_unstable();
            debug_assert!(
                positions.windows(2).all(|w| w[1] == w[0] + 1),
                "curves through one point occupy consecutive slots"
            );
            let mut block: Vec<u32> = positions.iter().map(|&p| order[p]).collect();
            block.sort_by(|&a, &b| {
                s[a as usize]
                    .eval_rat(&next_sample)
                    .cmp(&s[b as usize].eval_rat(&next_sample))
            });
            for (&p, &c) in positions.iter().zip(block.iter()) {
                order[p] = c;
                pos[c as usize] = p;
            }
        }

        // Regions: a gap survives the boundary iff neither bounding curve is
        // pinned here; otherwise the walls at the pinned point seal it.
        for g in 0..=n {
            let old_bot = (g > 0).then(|| old_order[g - 1]);
            let old_top = (g < n).then(|| old_order[g]);
            let bot_pinned = old_bot.is_some_and(|c| pinned[c as usize]);
            let top_pinned = old_top.is_some_and(|c| pinned[c as usize]);
            if !bot_pinned && !top_pinned {
                debug_assert_eq!(old_bot, (g > 0).then(|| order[g - 1]));
                debug_assert_eq!(old_top, (g < n).then(|| order[g]));
                continue;
            }
            let state = std::mem::replace(
                &mut regions[g],
                RegionState {
                    c1: t_ext.clone(),
                    start_slab: jj as u32 + 1,
                    fclass: FClass::F4,
                },
            );
            built.push((
                Cell::TwoDim {
                    bottom: old_bot.map(|c| CurveRef { branch: 1, param: s[c as usize].clone() }),
                    top: old_top.map(|c| CurveRef { branch: 1, param: s[c as usize].clone() }),
                    c1: state.c1,
                    c2: t_ext.clone(),
                    fclass: Some(state.fclass),
                },
                CellMeta::Region {
                    bot: old_bot.map(|c| c + 1).unwrap_or(BOT_INF),
                    top: old_top.map(|c| c + 1).unwrap_or(TOP_INF),
                    s1: state.start_slab,
                    s2: jj as u32,
                },
            ));
            let new_bot = (g > 0).then(|| order[g - 1]);
            if new_bot.is_some_and(|c| pinned[c as usize]) {
                regions[g].fclass = FClass::F3;
            }
        }

        orders.push(order.clone());
    }

    // Close everything at +inf.
    for (c, (start, s1)) in arc_start.into_iter().enumerate() {
        built.push((
            Cell::Arc {
                carrier: CurveRef { branch: 1, param: s[c].clone() },
                c1: start,
                c2: Ext::PosInf,
            },
            CellMeta::Arc { curve: c as u32, s1, s2: m as u32 },
        ));
    }
    for (g, state) in regions.into_iter().enumerate() {
        let bot = (g > 0).then(|| order[g - 1]);
        let top = (g < n).then(|| order[g]);
        built.push((
            Cell::TwoDim {
                bottom: bot.map(|c| CurveRef { branch: 1, param: s[c as usize].clone() }),
                top: top.map(|c| CurveRef { branch: 1, param: s[c as usize].clone() }),
                c1: state.c1,
                c2: Ext::PosInf,
                fclass: Some(state.fclass),
            },
            CellMeta::Region {
                bot: bot.map(|c| c + 1).unwrap_or(BOT_INF),
                top: top.map(|c| c + 1).unwrap_or(TOP_INF),
                s1: state.start_slab,
                s2: m as u32,
            },
        ));
    }

    built.sort_by(|a, b| a.0.canonical_cmp(&b.0));

    let mut census = Census::default();
    for (cell, _) in &built {
        match cell {
            Cell::Point(_) => census.point += 1,
            Cell::VerticalOnBreakLine { .. } => census.vertical_u += 1,
            Cell::VerticalExtra { .. } => census.vertical_extra += 1,
            Cell::Arc { .. } => census.arc += 1,
            Cell::TwoDim { fclass, .. } => {
                census.two_dim += 1;
                match fclass {
                    Some(FClass::F1) => census.f1 += 1,
                    Some(FClass::F2) => census.f2 += 1,
                    Some(FClass::F3) => census.f3 += 1,
                    Some(FClass::F4) => census.f4 += 1,
                    None => {}
                }
            }
        }
    }

    let mut gap_cells: HashMap<(u32, u32), Vec<(u32, u32, u32)>> = HashMap::new();
    let mut arc_cells: Vec<Vec<(u32, u32, u32)>> = vec![Vec::new(); n];
    let mut at_cells: Vec<Vec<u32>> = vec![Vec::new(); m];
    let mut cells = Vec::with_capacity(built.len());
    let mut meta = Vec::with_capacity(built.len());
    for (idx, (cell, cm)) in built.into_iter().enumerate() {
        match &cm {
            CellMeta::At { abscissa } => at_cells[*abscissa as usize].push(idx as u32),
            CellMeta::Arc { curve, s1, s2 } => {
                arc_cells[*curve as usize].push((*s1, *s2, idx as u32))
            }
            CellMeta::Region { bot, top, s1, s2 } => gap_cells
                .entry((*bot, *top))
                .or_default()
                .push((*s1, *s2, idx as u32)),
        }
        cells.push(cell);
        meta.push(cm);
    }
    for v in arc_cells.iter_mut() {
        v.sort_unstable();
    }
    for v in gap_cells.values_mut() {
        v.sort_unstable();
    }

    Ok(CellComplex {
        family,
        params: s,
        cells,
        meta,
        abscissae,
        orders,
        gap_cells,
        arc_cells,
        at_cells,
        census,
    })
}

/// Log-log regression of the decomposition size against `|S|` over random
/// general-position instances.
pub struct CensusFit {
    pub slope: f64,
    pub intercept: f64,
    pub rows: Vec<(usize, Census)>,
}

pub fn census_fit(
    family: CurveFamily,
    sizes: &[usize],
    trials: usize,
    seed: u64,
) -> Result<CensusFit, DecompositionError> {
    let mut rows = Vec::new();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (si, &size) in sizes.iter().enumerate() {
        for trial in 0..trials.max(1) {
            let inst_seed = seed
                .wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul((si * 31 + trial) as u64 + 1));
            let params = instances::random_params(family, size, inst_seed);
            let complex = build_decomposition(family, &params)?;
            xs.push((size as f64).ln());
            ys.push((complex.census().total() as f64).ln());
            rows.push((size, *complex.census()));
        }
    }
    let (slope, intercept) = fit_loglog(&xs, &ys);
    Ok(CensusFit { slope, intercept, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, rat_int};

    fn line(a: i64, b: i64) -> CurveParam {
        CurveParam::line(rat_int(a), rat_int(b))
    }

    fn lines_complex(ps: &[(i64, i64)]) -> CellComplex {
        let params: Vec<_> = ps.iter().map(|&(a, b)| line(a, b)).collect();
        build_decomposition(CurveFamily::Lines, &params).unwrap()
    }

    #[test]
    fn empty_set_single_cell() {
        let c = build_decomposition(CurveFamily::Lines, &[]).unwrap();
        assert_eq!(c.census().total(), 1);
        assert_eq!(c.census().two_dim, 1);
        assert_eq!(c.cells().len(), 1);
        assert!(c.verify_no_crossing().is_empty());
        let hit = c.locate(&rat_int(17), &rat_int(-4)).unwrap();
        assert_eq!(hit.len(), 1);
    }

    #[test]
    fn single_line_census() {
        let c = lines_complex(&[(0, 0)]);
        let census = c.census();
        assert_eq!(census.point, 0);
        assert_eq!(census.vertical_extra, 0);
        assert_eq!(census.arc, 1);
        assert_eq!(census.two_dim, 2);
        assert_eq!(census.total(), 3);
        assert!(c.verify_no_crossing().is_empty());
    }

    /// Independent region count for the two-line arrangement with wall rays:
    /// exact flood fill over a rational grid, merging axis-neighbour samples
    /// whenever the open segment between them meets no curve, point or wall.
    fn two_line_region_oracle() -> usize {
        let l1 = line(1, 0);
        let l2 = line(-1, 0);
        let step = rat(1, 4);
        let range = 16i64; // grid [-4, 4]^2 at pitch 1/4
        let idx = |i: i64, j: i64| ((i + range) * (2 * range + 1) + (j + range)) as usize;
        let total = ((2 * range + 1) * (2 * range + 1)) as usize;
        let mut parent: Vec<usize> = (0..total).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            let mut x = x;
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let on_anything = |x1: &Rat, x2: &Rat| -> bool {
            let zero = rat_int(0);
            // on a line
            if *x1 == l1.eval_rat(x2) || *x1 == l2.eval_rat(x2) {
                return true;
            }
            // on a vertical wall ray through the origin
            *x2 == zero
        };
        // segment between two adjacent samples crosses something iff a line
        // or the wall line x2 = 0 passes strictly between them
        let blocked = |a1: &Rat, a2: &Rat, b1: &Rat, b2: &Rat| -> bool {
            for l in [&l1, &l2] {
                let d1 = a1 - l.eval_rat(a2);
                let d2 = b1 - l.eval_rat(b2);
                if d1.clone() * d2 <= rat_int(0) {
                    return true;
                }
            }
            let z = rat_int(0);
            if (a2 - &z) * (b2 - &z) <= rat_int(0) {
                return true;
            }
            false
        };
        for i in -range..=range {
            for j in -range..=range {
                let x1 = rat(i, 1) * step.clone();
                let x2 = rat(j, 1) * step.clone();
                if on_anything(&x1, &x2) {
                    continue;
                }
                for (di, dj) in [(1i64, 0i64), (0, 1)] {
                    let (ni, nj) = (i + di, j + dj);
                    if ni > range || nj > range {
                        continue;
                    }
                    let y1 = rat(ni, 1) * step.clone();
                    let y2 = rat(nj, 1) * step.clone();
                    if on_anything(&y1, &y2) || blocked(&x1, &x2, &y1, &y2) {
                        continue;
                    }
                    let (ra, rb) = (find(&mut parent, idx(i, j)), find(&mut parent, idx(ni, nj)));
                    parent[ra] = rb;
                }
            }
        }
        let mut roots = std::collections::HashSet::new();
        for i in -range..=range {
            for j in -range..=range {
                let x1 = rat(i, 1) * step.clone();
                let x2 = rat(j, 1) * step.clone();
                if !on_anything(&x1, &x2) {
                    roots.insert(find(&mut parent, idx(i, j)));
                }
            }
        }
        roots.len()
    }

    #[test]
    fn two_crossing_lines_census() {
        let c = lines_complex(&[(1, 0), (-1, 0)]);
        let census = c.census();
        // Region count checked against the exact flood-fill oracle; the
        // 1-dimensional counts follow from the single cut at the origin.
        assert_eq!(two_line_region_oracle(), 6);
        assert_eq!(census.point, 1);
        assert_eq!(census.vertical_extra, 2);
        assert_eq!(census.arc, 4);
        assert_eq!(census.two_dim, 6);
        assert_eq!(census.total(), 13);
        assert!(c.verify_no_crossing().is_empty());
    }

    #[test]
    fn locate_examples() {
        let c = lines_complex(&[(0, 0)]);
        let hit = c.locate(&rat_int(5), &rat_int(0)).unwrap();
        assert_eq!(hit.len(), 1);
        match &c.cells()[hit[0]] {
            Cell::TwoDim { bottom: Some(b), top: None, .. } => {
                assert_eq!(b.param, line(0, 0));
            }
            other => panic!("expected upper region, got {other:?}"),
        }

        let c = lines_complex(&[(1, 0), (-1, 0)]);
        let hit = c.locate(&rat_int(0), &rat_int(0)).unwrap();
        assert_eq!(hit.len(), 1);
        assert!(matches!(c.cells()[hit[0]], Cell::Point(_)));

        let hit = c.locate(&rat(1, 2), &rat_int(0)).unwrap();
        assert_eq!(hit.len(), 1);
        match &c.cells()[hit[0]] {
            Cell::VerticalExtra { dir: VerticalDir::Up, .. } => {}
            other => panic!("expected the up ray, got {other:?}"),
        }

        // A point on a curve away from the origin lies on an arc.
        let hit = c.locate(&rat_int(2), &rat_int(2)).unwrap();
        assert_eq!(hit.len(), 1);
        assert!(matches!(c.cells()[hit[0]], Cell::Arc { .. }));
    }

    #[test]
    fn locate_agrees_with_brute_force() {
        let c = lines_complex(&[(1, 0), (-1, 0), (0, 2), (2, -3)]);
        let mut queries = Vec::new();
        for i in -8..=8 {
            for j in -8..=8 {
                queries.push((rat(i, 2), rat(j, 2)));
            }
        }
        for (x1, x2) in queries {
            let brute: Vec<usize> = (0..c.cells().len())
                .filter(|&i| c.cells()[i].contains(&x1, &x2))
                .collect();
            let fast = c.locate(&x1, &x2).unwrap();
            assert_eq!(fast, brute, "at ({x1}, {x2})");
            assert_eq!(fast.len(), 1, "cover with disjoint interiors at ({x1}, {x2})");
        }
    }

    #[test]
    fn corrupted_complex_is_caught() {
        let mut c = lines_complex(&[(1, 0), (-1, 0)]);
        // Merge two regions: stretch one two-dim cell across the boundary.
        let idx = c
            .cells
            .iter()
            .position(|cell| {
                matches!(cell, Cell::TwoDim { c2: Ext::Finite(t), .. } if t.as_rat() == Some(&rat_int(0)))
            })
            .unwrap();
        if let Cell::TwoDim { c2, .. } = &mut c.cells[idx] {
            *c2 = Ext::PosInf;
        }
        assert!(!c.verify_no_crossing().is_empty());
    }

    #[test]
    fn parallel_lines_have_linear_census() {
        let c = lines_complex(&[(1, 0), (1, 1), (1, 2), (1, 3)]);
        let census = c.census();
        assert_eq!(census.point, 0);
        assert_eq!(census.arc, 4);
        assert_eq!(census.two_dim, 5);
        assert_eq!(census.total(), 9);
        assert!(c.verify_no_crossing().is_empty());
    }

    #[test]
    fn concurrent_lines() {
        // Three lines through the origin: one intersection point, six arcs.
        let c = lines_complex(&[(1, 0), (-1, 0), (2, 0)]);
        let census = c.census();
        assert_eq!(census.point, 1);
        assert_eq!(census.vertical_extra, 2);
        assert_eq!(census.arc, 6);
        assert!(c.verify_no_crossing().is_empty());
        // Cover around the common point.
        for (x1, x2) in [
            (rat_int(0), rat_int(0)),
            (rat(1, 7), rat_int(0)),
            (rat(-1, 7), rat_int(0)),
            (rat(1, 7), rat(1, 9)),
        ] {
            assert_eq!(c.locate(&x1, &x2).unwrap().len(), 1);
        }
    }

    #[test]
    fn parabola_decomposition_verifies() {
        let params = vec![
            CurveParam::parabola(rat_int(1), rat_int(0), rat_int(0)),
            CurveParam::parabola(rat_int(-1), rat_int(0), rat_int(2)),
            CurveParam::parabola(rat_int(1), rat_int(-3), rat_int(1)),
            CurveParam::parabola(rat_int(2), rat_int(1), rat_int(-2)),
        ];
        let c = build_decomposition(CurveFamily::Parabolas, &params).unwrap();
        assert!(c.verify_no_crossing().is_empty());
        // The critical abscissae here include irrational values from several
        // distinct quadratic resolvents; locate must stay exact around them.
        for i in -12..=12 {
            for j in -12..=12 {
                let x1 = rat(i, 3);
                let x2 = rat(j, 4);
                let hit = c.locate(&x1, &x2).unwrap();
                assert!(!hit.is_empty());
            }
        }
    }

    #[test]
    fn determinism_census_and_order() {
        let params = vec![line(1, 0), line(-1, 0), line(0, 2), line(3, -1)];
        let a = build_decomposition(CurveFamily::Lines, &params).unwrap();
        let mut shuffled = params.clone();
        shuffled.reverse();
        let b = build_decomposition(CurveFamily::Lines, &shuffled).unwrap();
        assert_eq!(a.cells().len(), b.cells().len());
        for (x, y) in a.cells().iter().zip(b.cells().iter()) {
            assert_eq!(x, y);
        }
    }

    #[test]
    fn duplicate_params_are_dropped() {
        let c = lines_complex(&[(1, 0), (1, 0), (1, 0)]);
        assert_eq!(c.params().len(), 1);
        assert_eq!(c.census().total(), 3);
    }
}
