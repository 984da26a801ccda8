//! Wire formats: JSON for structured data, CSV for sweep tables. Rationals
//! travel as `"p/q"` strings so nothing is lost in transit. serde_json maps
//! are ordered, so equal inputs serialize to identical bytes.

use crate::algebra::{rat_from_str, rat_to_string, Ext, QuadExt, Rat};
use crate::correlation::{CorrelationCheck, FuzzReport};
use crate::cutting::{Cutting, MomentCheck, Piece, PieceGeom, TailRow};
use crate::decomposition::{Cell, CellComplex, Census, CurveRef, FClass, VerticalDir};
use crate::families::{CurveFamily, CurveParam, PointQE};
use crate::incidence::{IncidenceInstance, KkkResult, ShatterProfile};
use num::bigint::BigInt;
use num::ToPrimitive;
use serde_json::{json, Map, Value};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatError(pub String);

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "format error: {}", self.0)
    }
}

impl std::error::Error for FormatError {}

fn err(msg: impl Into<String>) -> FormatError {
    FormatError(msg.into())
}

// ---------------------------------------------------------------------------
// Scalars.
// ---------------------------------------------------------------------------

pub fn rat_json(r: &Rat) -> Value {
    Value::String(rat_to_string(r))
}

pub fn rat_from_json(v: &Value) -> Result<Rat, FormatError> {
    match v {
        Value::String(s) => rat_from_str(s).map_err(|e| err(e.to_string())),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rat::from_integer(BigInt::from(i)))
            } else {
                Err(err(format!("non-integer numeric rational {n}")))
            }
        }
        other => Err(err(format!("expected rational string, got {other}"))),
    }
}

pub fn quadext_json(q: &QuadExt) -> Value {
    let d = q.radicand();
    let d_val = d
        .to_u64()
        .map(Value::from)
        .unwrap_or_else(|| Value::String(d.to_string()));
    json!({
        "a": rat_to_string(q.rational_part()),
        "b": rat_to_string(q.radical_coeff()),
        "d": d_val,
    })
}

pub fn quadext_from_json(v: &Value) -> Result<QuadExt, FormatError> {
    let obj = v.as_object().ok_or_else(|| err("expected quadext object"))?;
    let a = rat_from_json(obj.get("a").ok_or_else(|| err("quadext missing a"))?)?;
    let b = rat_from_json(obj.get("b").ok_or_else(|| err("quadext missing b"))?)?;
    let d = match obj.get("d").ok_or_else(|| err("quadext missing d"))? {
        Value::Number(n) => BigInt::from(n.as_u64().ok_or_else(|| err("bad radicand"))?),
        Value::String(s) => s.parse::<BigInt>().map_err(|_| err("bad radicand"))?,
        other => return Err(err(format!("bad radicand {other}"))),
    };
    Ok(QuadExt::new(a, b, d))
}

pub fn ext_json(e: &Ext) -> Value {
    match e {
        Ext::NegInf => Value::String("-inf".into()),
        Ext::PosInf => Value::String("+inf".into()),
        Ext::Finite(q) => quadext_json(q),
    }
}

pub fn ext_from_json(v: &Value) -> Result<Ext, FormatError> {
    match v {
        Value::String(s) if s == "-inf" => Ok(Ext::NegInf),
        Value::String(s) if s == "+inf" => Ok(Ext::PosInf),
        other => Ok(Ext::Finite(quadext_from_json(other)?)),
    }
}

fn point_json(p: &PointQE) -> Value {
    json!({ "x1": quadext_json(&p.x1), "x2": quadext_json(&p.x2) })
}

fn point_from_json(v: &Value) -> Result<PointQE, FormatError> {
    let obj = v.as_object().ok_or_else(|| err("expected point object"))?;
    Ok(PointQE::new(
        quadext_from_json(obj.get("x1").ok_or_else(|| err("point missing x1"))?)?,
        quadext_from_json(obj.get("x2").ok_or_else(|| err("point missing x2"))?)?,
    ))
}

// ---------------------------------------------------------------------------
// Families.
// ---------------------------------------------------------------------------

pub fn param_json(p: &CurveParam) -> Value {
    Value::Array(p.coeffs().iter().map(|r| rat_json(r)).collect())
}

pub fn family_to_json(family: CurveFamily, params: &[CurveParam]) -> Value {
    json!({
        "family": family.name(),
        "params": params.iter().map(param_json).collect::<Vec<_>>(),
    })
}

pub fn family_from_json(v: &Value) -> Result<(CurveFamily, Vec<CurveParam>), FormatError> {
    let obj = v.as_object().ok_or_else(|| err("expected top-level object"))?;
    let name = obj
        .get("family")
        .and_then(Value::as_str)
        .ok_or_else(|| err("missing field: family"))?;
    let family = CurveFamily::from_name(name)
        .ok_or_else(|| err(format!("unknown family {name:?} (expected lines|parabolas)")))?;
    let raw = obj
        .get("params")
        .and_then(Value::as_array)
        .ok_or_else(|| err("missing field: params"))?;
    let mut params = Vec::with_capacity(raw.len());
    for entry in raw {
        let tuple = entry.as_array().ok_or_else(|| err("param must be an array"))?;
        let coeffs: Vec<Rat> = tuple
            .iter()
            .map(rat_from_json)
            .collect::<Result<_, _>>()?;
        let param = match (family, coeffs.as_slice()) {
            (CurveFamily::Lines, [a, b]) => CurveParam::line(a.clone(), b.clone()),
            (CurveFamily::Parabolas, [a, b, c]) => {
                CurveParam::parabola(a.clone(), b.clone(), c.clone())
            }
            _ => {
                return Err(err(format!(
                    "wrong arity for {name}: got {} coefficients",
                    coeffs.len()
                )))
            }
        };
        params.push(param);
    }
    Ok((family, params))
}

// ---------------------------------------------------------------------------
// Cells and complexes.
// ---------------------------------------------------------------------------

fn curve_ref_json(c: &CurveRef) -> Value {
    json!({ "branch": c.branch, "param": param_json(&c.param) })
}

fn curve_ref_from_json(family: CurveFamily, v: &Value) -> Result<CurveRef, FormatError> {
    let obj = v.as_object().ok_or_else(|| err("expected curve ref"))?;
    let branch = obj
        .get("branch")
        .and_then(Value::as_u64)
        .ok_or_else(|| err("curve ref missing branch"))? as usize;
    let param_val = obj.get("param").ok_or_else(|| err("curve ref missing param"))?;
    let shim = json!({ "family": family.name(), "params": [param_val] });
    let (_, params) = family_from_json(&shim)?;
    Ok(CurveRef { branch, param: params.into_iter().next().unwrap() })
}

pub fn cell_json(cell: &Cell) -> Value {
    match cell {
        Cell::Point(p) => json!({ "kind": "point", "p": point_json(p) }),
        Cell::VerticalOnBreakLine { x2, lower, upper } => json!({
            "kind": "vertical_u",
            "x2": quadext_json(x2),
            "lower": ext_json(lower),
            "upper": ext_json(upper),
        }),
        Cell::VerticalExtra { x2, anchor, dir, far } => json!({
            "kind": "vertical_extra",
            "x2": quadext_json(x2),
            "anchor": point_json(anchor),
            "dir": match dir { VerticalDir::Up => "up", VerticalDir::Down => "down" },
            "far": ext_json(far),
        }),
        Cell::Arc { carrier, c1, c2 } => json!({
            "kind": "arc",
            "carrier": curve_ref_json(carrier),
            "span": [ext_json(c1), ext_json(c2)],
        }),
        Cell::TwoDim { bottom, top, c1, c2, fclass } => json!({
            "kind": "two_dim",
            "bottom": bottom.as_ref().map(curve_ref_json).unwrap_or(Value::Null),
            "top": top.as_ref().map(curve_ref_json).unwrap_or(Value::Null),
            "span": [ext_json(c1), ext_json(c2)],
            "fclass": fclass.map(|f| match f {
                FClass::F1 => 1, FClass::F2 => 2, FClass::F3 => 3, FClass::F4 => 4,
            }),
        }),
    }
}

pub fn cell_from_json(family: CurveFamily, v: &Value) -> Result<Cell, FormatError> {
    let obj = v.as_object().ok_or_else(|| err("expected cell object"))?;
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| err("cell missing kind"))?;
    let span = |obj: &Map<String, Value>| -> Result<(Ext, Ext), FormatError> {
        let arr = obj
            .get("span")
            .and_then(Value::as_array)
            .ok_or_else(|| err("cell missing span"))?;
        if arr.len() != 2 {
            return Err(err("span must have two entries"));
        }
        Ok((ext_from_json(&arr[0])?, ext_from_json(&arr[1])?))
    };
    match kind {
        "point" => Ok(Cell::Point(point_from_json(
            obj.get("p").ok_or_else(|| err("point cell missing p"))?,
        )?)),
        "vertical_u" => Ok(Cell::VerticalOnBreakLine {
            x2: quadext_from_json(obj.get("x2").ok_or_else(|| err("missing x2"))?)?,
            lower: ext_from_json(obj.get("lower").ok_or_else(|| err("missing lower"))?)?,
            upper: ext_from_json(obj.get("upper").ok_or_else(|| err("missing upper"))?)?,
        }),
        "vertical_extra" => Ok(Cell::VerticalExtra {
            x2: quadext_from_json(obj.get("x2").ok_or_else(|| err("missing x2"))?)?,
            anchor: point_from_json(obj.get("anchor").ok_or_else(|| err("missing anchor"))?)?,
            dir: match obj.get("dir").and_then(Value::as_str) {
                Some("up") => VerticalDir::Up,
                Some("down") => VerticalDir::Down,
                other => return Err(err(format!("bad dir {other:?}"))),
            },
            far: ext_from_json(obj.get("far").ok_or_else(|| err("missing far"))?)?,
        }),
        "arc" => {
            let (c1, c2) = span(obj)?;
            Ok(Cell::Arc {
                carrier: curve_ref_from_json(
                    family,
                    obj.get("carrier").ok_or_else(|| err("missing carrier"))?,
                )?,
                c1,
                c2,
            })
        }
        "two_dim" => {
            let (c1, c2) = span(obj)?;
            let opt_ref = |key: &str| -> Result<Option<CurveRef>, FormatError> {
                match obj.get(key) {
                    None | Some(Value::Null) => Ok(None),
                    Some(v) => Ok(Some(curve_ref_from_json(family, v)?)),
                }
            };
            let fclass = match obj.get("fclass") {
                None | Some(Value::Null) => None,
                Some(v) => match v.as_u64() {
                    Some(1) => Some(FClass::F1),
                    Some(2) => Some(FClass::F2),
                    Some(3) => Some(FClass::F3),
                    Some(4) => Some(FClass::F4),
                    _ => return Err(err("bad fclass")),
                },
            };
            Ok(Cell::TwoDim { bottom: opt_ref("bottom")?, top: opt_ref("top")?, c1, c2, fclass })
        }
        other => Err(err(format!("unknown cell kind {other:?}"))),
    }
}

pub fn census_json(c: &Census) -> Value {
    json!({
        "point": c.point,
        "vertical_u": c.vertical_u,
        "vertical_extra": c.vertical_extra,
        "arc": c.arc,
        "two_dim": c.two_dim,
        "f1": c.f1,
        "f2": c.f2,
        "f3": c.f3,
        "f4": c.f4,
        "total": c.total(),
    })
}

pub fn complex_to_json(complex: &CellComplex) -> Value {
    json!({
        "family": complex.family().name(),
        "params": complex.params().iter().map(param_json).collect::<Vec<_>>(),
        "census": census_json(complex.census()),
        "cells": complex.cells().iter().map(cell_json).collect::<Vec<_>>(),
    })
}

/// A complex as parsed back from JSON: enough to render or inspect, without
/// the point-location index.
pub struct ParsedComplex {
    pub family: CurveFamily,
    pub params: Vec<CurveParam>,
    pub cells: Vec<Cell>,
}

pub fn complex_from_json(v: &Value) -> Result<ParsedComplex, FormatError> {
    let (family, params) = family_from_json(v)?;
    let cells_raw = v
        .get("cells")
        .and_then(Value::as_array)
        .ok_or_else(|| err("missing field: cells"))?;
    let cells = cells_raw
        .iter()
        .map(|c| cell_from_json(family, c))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ParsedComplex { family, params, cells })
}

pub const CENSUS_CSV_HEADER: &str = "n,point,vert_u,vert_e,arc,twodim,total";

pub fn census_csv_row(n: usize, c: &Census) -> String {
    format!(
        "{},{},{},{},{},{},{}",
        n,
        c.point,
        c.vertical_u,
        c.vertical_extra,
        c.arc,
        c.two_dim,
        c.total()
    )
}

pub fn census_csv(rows: &[(usize, Census)]) -> String {
    let mut out = String::from(CENSUS_CSV_HEADER);
    out.push('\n');
    for (n, c) in rows {
        out.push_str(&census_csv_row(*n, c));
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------------------
// Cuttings.
// ---------------------------------------------------------------------------

fn piece_json(piece: &Piece) -> Value {
    let cells: Vec<Value> = match &piece.geom {
        PieceGeom::Cell(c) => vec![cell_json(c)],
        PieceGeom::Pair { outer, inner } => vec![cell_json(outer), cell_json(inner)],
    };
    json!({
        "cells": cells,
        "crossing": piece.crossing,
    })
}

pub fn cutting_to_json(cut: &Cutting) -> Value {
    json!({
        "family": cut.family.name(),
        "h": cut.h.iter().map(param_json).collect::<Vec<_>>(),
        "n": cut.h.len(),
        "r": cut.r,
        "budget": cut.budget,
        "piece_count": cut.pieces.len(),
        "max_crossing": cut.max_piece_crossing(),
        "pieces": cut.pieces.iter().map(piece_json).collect::<Vec<_>>(),
        "excess": cut.excess.iter().map(rat_json).collect::<Vec<_>>(),
        "trail": {
            "attempts": cut.trail.attempts.iter().map(|a| json!({
                "level": a.level,
                "seed": a.seed,
                "sample_size": a.sample_size,
                "cells": a.cells,
                "accepted": a.accepted,
                "reason": a.reason,
            })).collect::<Vec<_>>(),
        },
    })
}

pub struct ParsedCutting {
    pub family: CurveFamily,
    pub params: Vec<CurveParam>,
    pub budget: usize,
    /// Piece cells with their crossing count.
    pub pieces: Vec<(Vec<Cell>, usize)>,
}

pub fn cutting_from_json(v: &Value) -> Result<ParsedCutting, FormatError> {
    let obj = v.as_object().ok_or_else(|| err("expected cutting object"))?;
    let name = obj
        .get("family")
        .and_then(Value::as_str)
        .ok_or_else(|| err("missing family"))?;
    let family =
        CurveFamily::from_name(name).ok_or_else(|| err(format!("unknown family {name:?}")))?;
    let shim = json!({
        "family": name,
        "params": obj.get("h").cloned().unwrap_or(Value::Array(vec![])),
    });
    let (_, params) = family_from_json(&shim)?;
    let budget = obj.get("budget").and_then(Value::as_u64).unwrap_or(0) as usize;
    let mut pieces = Vec::new();
    for p in obj
        .get("pieces")
        .and_then(Value::as_array)
        .ok_or_else(|| err("missing pieces"))?
    {
        let cells_raw = p
            .get("cells")
            .and_then(Value::as_array)
            .ok_or_else(|| err("piece missing cells"))?;
        let cells = cells_raw
            .iter()
            .map(|c| cell_from_json(family, c))
            .collect::<Result<Vec<_>, _>>()?;
        let crossing = p
            .get("crossing")
            .and_then(Value::as_array)
            .map(|a| a.len())
            .unwrap_or(0);
        pieces.push((cells, crossing));
    }
    Ok(ParsedCutting { family, params, budget, pieces })
}

pub fn cutting_stats_csv(cut: &Cutting) -> String {
    let singles = cut
        .pieces
        .iter()
        .filter(|p| matches!(p.geom, PieceGeom::Cell(_)))
        .count();
    let mut out = String::from("metric,value\n");
    out.push_str(&format!("n,{}\n", cut.h.len()));
    out.push_str(&format!("r,{}\n", cut.r));
    out.push_str(&format!("budget,{}\n", cut.budget));
    out.push_str(&format!("pieces,{}\n", cut.pieces.len()));
    out.push_str(&format!("single_pieces,{singles}\n"));
    out.push_str(&format!("pair_pieces,{}\n", cut.pieces.len() - singles));
    out.push_str(&format!("max_crossing,{}\n", cut.max_piece_crossing()));
    out.push_str(&format!("level1_cells,{}\n", cut.level1.cells().len()));
    out.push_str(&format!("attempts,{}\n", cut.trail.attempts.len()));
    out
}

// ---------------------------------------------------------------------------
// Tail, moment, correlation, incidence, shatter.
// ---------------------------------------------------------------------------

pub const TAIL_CSV_HEADER: &str = "t,mean,stderr";

pub fn tail_csv(rows: &[TailRow]) -> String {
    let mut out = String::from(TAIL_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!("{},{},{}\n", r.t, r.mean, r.stderr));
    }
    out
}

pub fn moment_json(n: u32, p: &Rat, d: u32, m: &MomentCheck) -> Value {
    json!({
        "n": n,
        "p": rat_to_string(p),
        "d": d,
        "exact": rat_to_string(&m.exact),
        "bound": rat_to_string(&m.bound),
        "holds": m.holds,
    })
}

pub fn correlation_json(c: &CorrelationCheck) -> Value {
    json!({
        "ratio": rat_to_string(&c.ratio),
        "bound": rat_to_string(&c.bound),
        "holds": c.holds,
    })
}

pub fn fuzz_json(r: &FuzzReport) -> Value {
    json!({
        "cases": r.cases,
        "violations": r.violations.iter().map(|v| json!({
            "m": v.m,
            "defining": v.defining,
            "p": rat_to_string(&v.p),
            "ptilde": rat_to_string(&v.p_tilde),
        })).collect::<Vec<_>>(),
    })
}

pub fn incidence_instance_from_json(v: &Value) -> Result<IncidenceInstance, FormatError> {
    let obj = v.as_object().ok_or_else(|| err("expected instance object"))?;
    if let Some(edges_raw) = obj.get("edges") {
        let arr = edges_raw.as_array().ok_or_else(|| err("edges must be an array"))?;
        let mut edges = Vec::with_capacity(arr.len());
        for e in arr {
            let pair = e.as_array().ok_or_else(|| err("edge must be a pair"))?;
            if pair.len() != 2 {
                return Err(err("edge must be a pair"));
            }
            let p = pair[0].as_u64().ok_or_else(|| err("bad edge endpoint"))? as u32;
            let q = pair[1].as_u64().ok_or_else(|| err("bad edge endpoint"))? as u32;
            edges.push((p, q));
        }
        let mut inst = IncidenceInstance::new(CurveFamily::Lines, vec![], vec![]);
        inst.explicit_edges = Some(edges);
        return Ok(inst);
    }
    let (family, params) = family_from_json(v)?;
    let pts_raw = obj
        .get("points")
        .and_then(Value::as_array)
        .ok_or_else(|| err("missing field: points"))?;
    let mut points = Vec::with_capacity(pts_raw.len());
    for p in pts_raw {
        let pair = p.as_array().ok_or_else(|| err("point must be [x1, x2]"))?;
        if pair.len() != 2 {
            return Err(err("point must be [x1, x2]"));
        }
        points.push((rat_from_json(&pair[0])?, rat_from_json(&pair[1])?));
    }
    Ok(IncidenceInstance::new(family, points, params))
}

pub fn incidence_instance_to_json(inst: &IncidenceInstance) -> Value {
    json!({
        "family": inst.family.name(),
        "params": inst.curves.iter().map(param_json).collect::<Vec<_>>(),
        "points": inst.points.iter().map(|(x1, x2)| {
            json!([rat_to_string(x1), rat_to_string(x2)])
        }).collect::<Vec<_>>(),
    })
}

pub fn incidence_report_json(
    count: usize,
    bound: f64,
    kkk: &KkkResult,
    k: usize,
) -> Value {
    json!({
        "count": count,
        "bound": bound,
        "ratio": count as f64 / bound.max(f64::MIN_POSITIVE),
        "k": k,
        "kkk_free": kkk.free,
        "witness": kkk.witness.as_ref().map(|w| json!({
            "points": w.left,
            "curves": w.right,
        })),
    })
}

/// `{"ground": z, "sets": [[0,2],[1],...]}`
pub fn set_system_from_json(v: &Value) -> Result<(usize, Vec<u32>), FormatError> {
    let obj = v.as_object().ok_or_else(|| err("expected set system object"))?;
    let ground = obj
        .get("ground")
        .and_then(Value::as_u64)
        .ok_or_else(|| err("missing field: ground"))? as usize;
    let sets_raw = obj
        .get("sets")
        .and_then(Value::as_array)
        .ok_or_else(|| err("missing field: sets"))?;
    let mut sets = Vec::with_capacity(sets_raw.len());
    for s in sets_raw {
        let arr = s.as_array().ok_or_else(|| err("set must be an array"))?;
        let mut mask = 0u32;
        for e in arr {
            let e = e.as_u64().ok_or_else(|| err("set element must be an index"))?;
            if e as usize >= ground {
                return Err(err(format!("element {e} outside ground set of size {ground}")));
            }
            mask |= 1 << e;
        }
        sets.push(mask);
    }
    Ok((ground, sets))
}

pub const SHATTER_CSV_HEADER: &str = "z,pi";

pub fn shatter_csv(profile: &ShatterProfile) -> String {
    let mut out = String::from(SHATTER_CSV_HEADER);
    out.push('\n');
    for (z, v) in profile.values.iter().enumerate() {
        out.push_str(&format!("{},{}\n", z + 1, v));
    }
    out
}

/// Pretty JSON with a trailing newline; ordered maps make this byte-stable.
pub fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, rat_int};
    use crate::decomposition::build_decomposition;

    #[test]
    fn family_round_trip() {
        let input = json!({
            "family": "lines",
            "params": [["1/1", "0/1"], ["-1/2", "3/1"]],
        });
        let (family, params) = family_from_json(&input).unwrap();
        assert_eq!(family, CurveFamily::Lines);
        assert_eq!(params[1], CurveParam::line(rat(-1, 2), rat_int(3)));
        let back = family_to_json(family, &params);
        let (f2, p2) = family_from_json(&back).unwrap();
        assert_eq!(f2, family);
        assert_eq!(p2, params);
        assert!(family_from_json(&json!({"family": "circles", "params": []})).is_err());
        assert!(family_from_json(&json!({"family": "lines", "params": [["1/1"]]})).is_err());
    }

    #[test]
    fn complex_json_round_trip_and_determinism() {
        let params = vec![
            CurveParam::line(rat_int(1), rat_int(0)),
            CurveParam::line(rat_int(-1), rat_int(0)),
        ];
        let complex = build_decomposition(CurveFamily::Lines, &params).unwrap();
        let v = complex_to_json(&complex);
        let s1 = to_json_string(&v);
        let s2 = to_json_string(&complex_to_json(&complex));
        assert_eq!(s1, s2);
        let parsed = complex_from_json(&v).unwrap();
        assert_eq!(parsed.cells.len(), complex.cells().len());
        for (a, b) in parsed.cells.iter().zip(complex.cells()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn ext_json_forms() {
        assert_eq!(ext_json(&Ext::NegInf), json!("-inf"));
        assert_eq!(ext_json(&Ext::PosInf), json!("+inf"));
        let q = QuadExt::new(rat_int(1), rat(1, 2), 2.into());
        let v = ext_json(&Ext::Finite(q.clone()));
        assert_eq!(ext_from_json(&v).unwrap(), Ext::Finite(q));
    }

    #[test]
    fn set_system_parses() {
        let v = json!({"ground": 4, "sets": [[0, 2], [1], []]});
        let (ground, sets) = set_system_from_json(&v).unwrap();
        assert_eq!(ground, 4);
        assert_eq!(sets, vec![0b101, 0b10, 0]);
        assert!(set_system_from_json(&json!({"ground": 2, "sets": [[5]]})).is_err());
    }

    #[test]
    fn census_csv_shape() {
        let params = vec![CurveParam::line(rat_int(0), rat_int(0))];
        let complex = build_decomposition(CurveFamily::Lines, &params).unwrap();
        let csv = census_csv(&[(1, *complex.census())]);
        assert_eq!(csv, "n,point,vert_u,vert_e,arc,twodim,total\n1,0,0,0,1,2,3\n");
    }
}
