//! Exact planar machinery for curve families: cell decompositions whose
//! cells no input curve crosses, 1/r-cuttings built by two-level random
//! sampling with exact crossing sets, the up-set correlation inequality
//! verified in rational arithmetic, and the incidence/Zarankiewicz layer on
//! top (grid instances, K_{k,k} detection, shatter profiles, exponent fits).
//!
//! Decision paths are exact end to end: rationals, quadratic extension
//! numbers `a + b*sqrt(d)`, and `±inf` sentinels. Floats appear only in SVG
//! output and in log-log regressions.

pub mod algebra;
pub mod correlation;
pub mod cutting;
pub mod decomposition;
pub mod families;
pub mod formats;
pub mod incidence;
pub mod instances;
pub mod render;
pub mod stats;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use algebra::{qe_cmp, rational_between, solve_quadratic, Ext, QuadExt, Rat};
pub use cutting::{optimal_cutting, suboptimal_cutting, Cutting, SampleConfig};
pub use decomposition::{build_decomposition, Cell, CellComplex, Census};
pub use families::{
    crosses_cell, eval_branch, proper_intersections, CurveFamily, CurveParam, PointQE,
};
