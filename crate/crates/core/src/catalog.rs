//! Named model and conjugation builders used by the reproduction routines
//! and the test corpus.

use crate::conjugation::ShearMap;
use crate::model::{LowerBoundary, SemigroupModel};
use crate::piecewise::{Interval, PieceExpr, PiecewiseFn};

fn non_elliptic(domain: Interval, breakpoints: Vec<f64>, pieces: Vec<PieceExpr>) -> SemigroupModel {
    let beta = PiecewiseFn::new(domain, breakpoints, pieces).expect("catalog model is valid");
    SemigroupModel::NonElliptic { lower: LowerBoundary::new(beta).expect("catalog model is valid") }
}

/// The hyperbolic group with model domain the full strip `(0,1)×ℝ`.
pub fn strip_group() -> SemigroupModel {
    SemigroupModel::HyperbolicGroup { width: 1.0 }
}

/// `Q = {z ∈ 𝕊 : Im z > 0}` — the upper half-strip.
pub fn upper_half_strip() -> SemigroupModel {
    non_elliptic(Interval::bounded(0.0, 1.0), vec![], vec![PieceExpr::Const(0.0)])
}

/// `Q = {z ∈ 𝕊 : Im z · Re z > 1}` — above the hyperbola branch `y = 1/x`.
pub fn hyperbola_above() -> SemigroupModel {
    non_elliptic(
        Interval::bounded(0.0, 1.0),
        vec![],
        vec![PieceExpr::Recip { a: 0.0, b: 1.0, x0: 0.0 }],
    )
}

/// `Q = {z ∈ 𝕊 : Im z · Re z > -1}` — above `y = -1/x`.
pub fn hyperbola_below() -> SemigroupModel {
    non_elliptic(
        Interval::bounded(0.0, 1.0),
        vec![],
        vec![PieceExpr::Recip { a: 0.0, b: -1.0, x0: 0.0 }],
    )
}

/// A two-level domain over `(0,2)`: `β = 0` left of `x = 1`, `β = -3`
/// right of it, producing an interior contact arc of height 3.
pub fn step_model() -> SemigroupModel {
    non_elliptic(
        Interval::bounded(0.0, 2.0),
        vec![1.0],
        vec![PieceExpr::Const(0.0), PieceExpr::Const(-3.0)],
    )
}

/// Vertical shear of the strip, `τ(z) = Re z + i(Im z + b/Re z)`.
pub fn recip_shear(b: f64) -> ShearMap {
    let v = PiecewiseFn::new(
        Interval::bounded(0.0, 1.0),
        vec![],
        vec![PieceExpr::Recip { a: 0.0, b, x0: 0.0 }],
    )
    .expect("catalog shear is valid");
    ShearMap::vertical(v).expect("catalog shear is valid")
}
