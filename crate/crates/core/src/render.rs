//! Deterministic SVG pictures of complexes and cuttings: curves solid,
//! wall segments dashed, optional region shading, per-piece crossing counts
//! as tooltips. The only floating point in the crate outside regression
//! fitting lives here.

use crate::algebra::Ext;
use num::ToPrimitive;
use crate::decomposition::{Cell, VerticalDir};
use crate::families::{CurveParam, PointQE};
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viewport {
    pub x2_min: f64,
    pub x2_max: f64,
    pub x1_min: f64,
    pub x1_max: f64,
}

impl Viewport {
    /// Parses `x2min:x2max:x1min:x1max`.
    pub fn parse(s: &str) -> Option<Viewport> {
        let parts: Vec<f64> = s.split(':').map(|p| p.trim().parse().ok()).collect::<Option<_>>()?;
        if parts.len() != 4 || parts[0] >= parts[1] || parts[2] >= parts[3] {
            return None;
        }
        Some(Viewport { x2_min: parts[0], x2_max: parts[1], x1_min: parts[2], x1_max: parts[3] })
    }
}

const W: f64 = 800.0;
const H: f64 = 600.0;

struct Mapper {
    vp: Viewport,
}

impl Mapper {
    fn x(&self, x2: f64) -> f64 {
        (x2 - self.vp.x2_min) / (self.vp.x2_max - self.vp.x2_min) * W
    }
    // larger x1 is up
    fn y(&self, x1: f64) -> f64 {
        H - (x1 - self.vp.x1_min) / (self.vp.x1_max - self.vp.x1_min) * H
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.3}")
}

fn ext_to_clipped(e: &Ext, lo: f64, hi: f64) -> f64 {
    match e {
        Ext::NegInf => lo,
        Ext::PosInf => hi,
        Ext::Finite(q) => q.to_f64().clamp(lo, hi),
    }
}

fn curve_path(m: &Mapper, p: &CurveParam, samples: usize) -> String {
    let mut d = String::new();
    for i in 0..=samples {
        let x2 = m.vp.x2_min + (m.vp.x2_max - m.vp.x2_min) * i as f64 / samples as f64;
        let x1 = match p {
            CurveParam::Line { slope, intercept } => {
                slope.to_f64().unwrap_or(0.0) * x2 + intercept.to_f64().unwrap_or(0.0)
            }
            CurveParam::Parabola { a, b, c } => {
                a.to_f64().unwrap_or(0.0) * x2 * x2
                    + b.to_f64().unwrap_or(0.0) * x2
                    + c.to_f64().unwrap_or(0.0)
            }
        };
        let cmd = if i == 0 { 'M' } else { 'L' };
        let _ = write!(d, "{}{} {} ", cmd, fmt(m.x(x2)), fmt(m.y(x1)));
    }
    d.trim_end().to_string()
}

fn segment_samples(p: &CurveParam) -> usize {
    match p {
        CurveParam::Line { .. } => 1,
        CurveParam::Parabola { .. } => 96,
    }
}

fn push_vertical(svg: &mut String, m: &Mapper, x2: f64, lo: f64, hi: f64, dashed: bool) {
    let dash = if dashed { " stroke-dasharray=\"6 4\"" } else { "" };
    let _ = writeln!(
        svg,
        "  <line x1=\"{x}\" y1=\"{y1}\" x2=\"{x}\" y2=\"{y2}\" stroke=\"#444\" stroke-width=\"1\"{dash}/>",
        x = fmt(m.x(x2)),
        y1 = fmt(m.y(lo)),
        y2 = fmt(m.y(hi)),
    );
}

fn push_point(svg: &mut String, m: &Mapper, p: &PointQE) {
    let _ = writeln!(
        svg,
        "  <circle cx=\"{}\" cy=\"{}\" r=\"2.5\" fill=\"#000\"/>",
        fmt(m.x(p.x2.to_f64())),
        fmt(m.y(p.x1.to_f64())),
    );
}

fn region_path(m: &Mapper, bottom: &Option<CurveParam>, top: &Option<CurveParam>, c1: f64, c2: f64) -> String {
    let eval = |p: &Option<CurveParam>, x2: f64, def: f64| -> f64 {
        match p {
            None => def,
            Some(CurveParam::Line { slope, intercept }) => {
                slope.to_f64().unwrap_or(0.0) * x2 + intercept.to_f64().unwrap_or(0.0)
            }
            Some(CurveParam::Parabola { a, b, c }) => {
                a.to_f64().unwrap_or(0.0) * x2 * x2
                    + b.to_f64().unwrap_or(0.0) * x2
                    + c.to_f64().unwrap_or(0.0)
            }
        }
    };
    let steps = 32;
    let mut d = String::new();
    for i in 0..=steps {
        let x2 = c1 + (c2 - c1) * i as f64 / steps as f64;
        let x1 = eval(bottom, x2, m.vp.x1_min).clamp(m.vp.x1_min, m.vp.x1_max);
        let cmd = if i == 0 { 'M' } else { 'L' };
        let _ = write!(d, "{}{} {} ", cmd, fmt(m.x(x2)), fmt(m.y(x1)));
    }
    for i in (0..=steps).rev() {
        let x2 = c1 + (c2 - c1) * i as f64 / steps as f64;
        let x1 = eval(top, x2, m.vp.x1_max).clamp(m.vp.x1_min, m.vp.x1_max);
        let _ = write!(d, "L{} {} ", fmt(m.x(x2)), fmt(m.y(x1)));
    }
    d.push('Z');
    d
}

fn svg_header(svg: &mut String) {
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">"
    );
    let _ = writeln!(
        svg,
        "  <rect x=\"0\" y=\"0\" width=\"{W}\" height=\"{H}\" fill=\"white\" stroke=\"black\"/>"
    );
}

/// Renders a decomposition: curves solid, vertical walls dashed, regions
/// optionally shaded.
pub fn svg_complex(
    params: &[CurveParam],
    cells: &[Cell],
    vp: Viewport,
    shade: bool,
) -> String {
    let m = Mapper { vp };
    let mut svg = String::new();
    svg_header(&mut svg);
    if shade {
        for cell in cells {
            if let Cell::TwoDim { bottom, top, c1, c2, .. } = cell {
                let c1 = ext_to_clipped(c1, vp.x2_min, vp.x2_max);
                let c2 = ext_to_clipped(c2, vp.x2_min, vp.x2_max);
                if c2 <= c1 {
                    continue;
                }
                let d = region_path(
                    &m,
                    &bottom.as_ref().map(|b| b.param.clone()),
                    &top.as_ref().map(|t| t.param.clone()),
                    c1,
                    c2,
                );
                let _ = writeln!(
                    svg,
                    "  <path d=\"{d}\" fill=\"#4a90d9\" fill-opacity=\"0.08\" stroke=\"none\"/>"
                );
            }
        }
    }
    for p in params {
        let d = curve_path(&m, p, segment_samples(p));
        let _ = writeln!(svg, "  <path d=\"{d}\" fill=\"none\" stroke=\"#000\" stroke-width=\"1.5\"/>");
    }
    for cell in cells {
        match cell {
            Cell::VerticalExtra { x2, anchor, dir, far } => {
                let x2f = x2.to_f64();
                if x2f < vp.x2_min || x2f > vp.x2_max {
                    continue;
                }
                let a = anchor.x1.to_f64();
                let (lo, hi) = match dir {
                    VerticalDir::Up => (a, ext_to_clipped(far, vp.x1_min, vp.x1_max)),
                    VerticalDir::Down => (ext_to_clipped(far, vp.x1_min, vp.x1_max), a),
                };
                push_vertical(&mut svg, &m, x2f, lo.clamp(vp.x1_min, vp.x1_max), hi.clamp(vp.x1_min, vp.x1_max), true);
            }
            Cell::VerticalOnBreakLine { x2, lower, upper } => {
                let x2f = x2.to_f64();
                if x2f < vp.x2_min || x2f > vp.x2_max {
                    continue;
                }
                let lo = ext_to_clipped(lower, vp.x1_min, vp.x1_max);
                let hi = ext_to_clipped(upper, vp.x1_min, vp.x1_max);
                push_vertical(&mut svg, &m, x2f, lo, hi, true);
            }
            Cell::Point(p) => {
                let (x1, x2) = (p.x1.to_f64(), p.x2.to_f64());
                if x1 >= vp.x1_min && x1 <= vp.x1_max && x2 >= vp.x2_min && x2 <= vp.x2_max {
                    push_point(&mut svg, &m, p);
                }
            }
            _ => {}
        }
    }
    svg.push_str("</svg>\n");
    svg
}

/// Renders a cutting: every piece outlined with its crossing count as a
/// tooltip.
pub fn svg_cutting(
    params: &[CurveParam],
    pieces: &[(Vec<Cell>, usize)],
    vp: Viewport,
) -> String {
    let m = Mapper { vp };
    let mut svg = String::new();
    svg_header(&mut svg);
    for p in params {
        let d = curve_path(&m, p, segment_samples(p));
        let _ = writeln!(
            svg,
            "  <path d=\"{d}\" fill=\"none\" stroke=\"#bbb\" stroke-width=\"0.7\"/>"
        );
    }
    for (cells, crossing) in pieces {
        let _ = writeln!(svg, "  <g>");
        let _ = writeln!(svg, "    <title>crossed by {crossing}</title>");
        for cell in cells {
            match cell {
                Cell::TwoDim { bottom, top, c1, c2, .. } => {
                    let c1 = ext_to_clipped(c1, vp.x2_min, vp.x2_max);
                    let c2 = ext_to_clipped(c2, vp.x2_min, vp.x2_max);
                    if c2 <= c1 {
                        continue;
                    }
                    let d = region_path(
                        &m,
                        &bottom.as_ref().map(|b| b.param.clone()),
                        &top.as_ref().map(|t| t.param.clone()),
                        c1,
                        c2,
                    );
                    let _ = writeln!(
                        svg,
                        "    <path d=\"{d}\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"0.8\"/>"
                    );
                }
                Cell::Arc { carrier, .. } => {
                    let d = curve_path(&m, &carrier.param, segment_samples(&carrier.param));
                    let _ = writeln!(
                        svg,
                        "    <path d=\"{d}\" fill=\"none\" stroke=\"#27ae60\" stroke-width=\"0.8\"/>"
                    );
                }
                Cell::VerticalExtra { x2, anchor, dir, far } => {
                    let x2f = x2.to_f64();
                    if x2f < vp.x2_min || x2f > vp.x2_max {
                        continue;
                    }
                    let a = anchor.x1.to_f64();
                    let (lo, hi) = match dir {
                        VerticalDir::Up => (a, ext_to_clipped(far, vp.x1_min, vp.x1_max)),
                        VerticalDir::Down => (ext_to_clipped(far, vp.x1_min, vp.x1_max), a),
                    };
                    push_vertical(
                        &mut svg,
                        &m,
                        x2f,
                        lo.clamp(vp.x1_min, vp.x1_max),
                        hi.clamp(vp.x1_min, vp.x1_max),
                        false,
                    );
                }
                Cell::VerticalOnBreakLine { x2, lower, upper } => {
                    let x2f = x2.to_f64();
                    if x2f < vp.x2_min || x2f > vp.x2_max {
                        continue;
                    }
                    push_vertical(
                        &mut svg,
                        &m,
                        x2f,
                        ext_to_clipped(lower, vp.x1_min, vp.x1_max),
                        ext_to_clipped(upper, vp.x1_min, vp.x1_max),
                        false,
                    );
                }
                Cell::Point(p) => push_point(&mut svg, &m, p),
            }
        }
        let _ = writeln!(svg, "  </g>");
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat_int;
    use crate::decomposition::build_decomposition;
    use crate::families::CurveFamily;

    #[test]
    fn viewport_parse() {
        let vp = Viewport::parse("-2:2:-3:3").unwrap();
        assert_eq!(vp.x2_min, -2.0);
        assert_eq!(vp.x1_max, 3.0);
        assert!(Viewport::parse("1:0:0:1").is_none());
        assert!(Viewport::parse("1:2:3").is_none());
    }

    #[test]
    fn two_line_scene_structure() {
        let params = vec![
            CurveParam::line(rat_int(1), rat_int(0)),
            CurveParam::line(rat_int(-1), rat_int(0)),
        ];
        let complex = build_decomposition(CurveFamily::Lines, &params).unwrap();
        let vp = Viewport::parse("-2:2:-2:2").unwrap();
        let svg = svg_complex(complex.params(), complex.cells(), vp, false);
        // Two solid curves, two dashed rays, one marked point.
        assert_eq!(svg.matches("stroke-width=\"1.5\"").count(), 2);
        assert_eq!(svg.matches("stroke-dasharray").count(), 2);
        assert_eq!(svg.matches("<circle").count(), 1);
        let again = svg_complex(complex.params(), complex.cells(), vp, false);
        assert_eq!(svg, again);
    }

    #[test]
    fn empty_scene_has_frame_only() {
        let vp = Viewport::parse("-1:1:-1:1").unwrap();
        let svg = svg_complex(&[], &[], vp, false);
        assert!(svg.contains("<rect"));
        assert_eq!(svg.matches("<path").count(), 0);
    }
}
