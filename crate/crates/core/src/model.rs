//! Model domains and flows.
//!
//! A non-elliptic semigroup is represented by its planar model: a base
//! interval `I`, a lower boundary `β : I → [-inf, +inf)` carving the domain
//! `Q = {x+iy : x ∈ I, y > β(x)}` out of `Ω = I×ℝ`, and the vertical
//! translation flow `w ↦ w + it`. Elliptic semigroups are stored in
//! normalized form: a starlike domain `Q = {r e^{iθ} : r < ρ(θ)}` with the
//! radial contraction flow `w ↦ e^{-t} w`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::extreal::ExtReal;
use crate::piecewise::{BreakpointRule, Interval, PieceExpr, PiecewiseFn};

pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Lower boundary of a translation-invariant model domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundary {
    beta: PiecewiseFn,
}

impl LowerBoundary {
    pub fn new(beta: PiecewiseFn) -> Result<Self, ModelError> {
        let lb = LowerBoundary { beta };
        let violations = lb.check();
        if let Some(v) = violations.into_iter().next() {
            return Err(ModelError::DegenerateDomain(v.to_string()));
        }
        Ok(lb)
    }

    /// Convenience: constant-β boundary over `domain`.
    pub fn constant(domain: Interval, value: ExtReal) -> Self {
        let expr = match value {
            ExtReal::NegInf => PieceExpr::NegInf,
            ExtReal::Finite(c) => PieceExpr::Const(c),
            ExtReal::PosInf => panic!("+inf boundary"),
        };
        LowerBoundary::new(PiecewiseFn::constant(domain, expr)).expect("constant boundary")
    }

    pub fn domain(&self) -> Interval {
        self.beta.domain()
    }

    pub fn beta(&self) -> &PiecewiseFn {
        &self.beta
    }

    /// Invariant check used by `validate_model`.
    pub fn check(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (i, p) in self.beta.pieces().iter().enumerate() {
            if matches!(p, PieceExpr::PosInf) {
                let (lo, hi) = self.beta.subinterval(i);
                out.push(Violation {
                    invariant: "beta finite (< +inf) on every fiber".into(),
                    witness: Some(crate::piecewise::midpoint(lo, hi)),
                });
            }
        }
        // A one-sided limit of +inf at an interior abscissa pinches the
        // domain into two components.
        for k in 0..self.beta.breakpoints().len() {
            if self.beta.limit_left_at(k).is_pos_inf() || self.beta.limit_right_at(k).is_pos_inf() {
                out.push(Violation {
                    invariant: "domain connected: no interior +inf limit of beta".into(),
                    witness: Some(self.beta.breakpoints()[k]),
                });
            }
        }
        out
    }

    /// True when β ≡ -inf, i.e. `Q = Ω`.
    pub fn is_full(&self) -> bool {
        self.beta.pieces().iter().all(|p| matches!(p, PieceExpr::NegInf))
    }
}

/// Radial boundary `ρ : [0,2π) → (0,+inf]` of a starlike domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialBoundary {
    rho: PiecewiseFn,
}

impl RadialBoundary {
    /// `rho` must live on the angle interval `(0, 2π)` (the seam θ=0 is
    /// handled periodically) and use the lower-envelope breakpoint rule.
    pub fn new(rho: PiecewiseFn) -> Result<Self, ModelError> {
        let dom = rho.domain();
        if dom.lo != ExtReal::Finite(0.0) || dom.hi != ExtReal::Finite(TWO_PI) {
            return Err(ModelError::BadRadialBound(format!(
                "angle domain must be (0, 2π), got ({}, {})",
                dom.lo, dom.hi
            )));
        }
        if rho.rule() != BreakpointRule::LowerEnvelope {
            return Err(ModelError::BadRadialBound(
                "radial boundary must use the lower-envelope breakpoint rule".into(),
            ));
        }
        let rb = RadialBoundary { rho };
        if let Some(v) = rb.check().into_iter().next() {
            return Err(ModelError::BadRadialBound(v.to_string()));
        }
        Ok(rb)
    }

    pub fn constant(value: f64) -> Self {
        let dom = Interval::bounded(0.0, TWO_PI);
        RadialBoundary::new(
            PiecewiseFn::with_rule(
                dom,
                vec![],
                vec![PieceExpr::Const(value)],
                BreakpointRule::LowerEnvelope,
            )
            .unwrap(),
        )
        .expect("constant radial boundary")
    }

    pub fn rho(&self) -> &PiecewiseFn {
        &self.rho
    }

    pub fn check(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (i, p) in self.rho.pieces().iter().enumerate() {
            let (lo, hi) = self.rho.subinterval(i);
            if matches!(p, PieceExpr::NegInf) {
                out.push(Violation {
                    invariant: "rho positive".into(),
                    witness: Some(crate::piecewise::midpoint(lo, hi)),
                });
                continue;
            }
            // each closed-form piece is monotone on its subinterval, so its
            // infimum is one of the one-sided limits
            let inf = p.limit_from_right(lo).min_ext(p.limit_from_left(hi));
            if inf.lt_f(0.0) || (inf == ExtReal::Finite(0.0) && p.monotonicity() == Some(0)) {
                out.push(Violation {
                    invariant: "rho positive".into(),
                    witness: Some(crate::piecewise::midpoint(lo, hi)),
                });
            }
        }
        out
    }

    /// Periodic evaluation with the seam at θ = 0 treated like a breakpoint.
    pub fn eval(&self, theta: f64) -> ExtReal {
        let t = theta.rem_euclid(TWO_PI);
        if t == 0.0 {
            let left = self.rho.limit_at_hi();
            let right = self.rho.limit_at_lo();
            return BreakpointRule::LowerEnvelope.combine(left, right);
        }
        self.rho.eval(t)
    }

    /// True when ρ ≡ +inf, i.e. `Q = ℂ`.
    pub fn is_full(&self) -> bool {
        self.rho.pieces().iter().all(|p| matches!(p, PieceExpr::PosInf))
    }
}

/// One invariant violation with a witness abscissa where applicable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub invariant: String,
    pub witness: Option<f64>,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.witness {
            Some(x) => write!(f, "{} (witness x = {x})", self.invariant),
            None => write!(f, "{}", self.invariant),
        }
    }
}

/// Planar model of a one-parameter semigroup.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SemigroupModel {
    /// Translation model: `Q ⊆ I×ℝ`, flow `w ↦ w + it`.
    NonElliptic { lower: LowerBoundary },
    /// Normalized elliptic model: starlike `Q`, flow `w ↦ e^{-t} w`.
    EllipticStarlike { radial: RadialBoundary },
    /// Spiral-like elliptic model stored in θ_λ-normalized coordinates;
    /// `lambda` records the original rate, the flow on the stored domain is
    /// still `w ↦ e^{-t} w`.
    EllipticSpiral { lambda: Complex64, radial: RadialBoundary },
    /// Group of elliptic rotations, `Q = 𝔻`, flow `w ↦ e^{iθt} w`.
    EllipticGroup { theta: f64 },
    /// Hyperbolic group: `Q = Ω = (0, width)×ℝ`.
    HyperbolicGroup { width: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SemigroupType {
    EllipticGroup,
    Elliptic,
    Hyperbolic,
    ParabolicZeroStep,
    ParabolicPositiveStep,
    HyperbolicGroup,
    ParabolicGroup,
}

impl std::fmt::Display for SemigroupType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SemigroupType::EllipticGroup => "elliptic-group",
            SemigroupType::Elliptic => "elliptic",
            SemigroupType::Hyperbolic => "hyperbolic",
            SemigroupType::ParabolicZeroStep => "parabolic-zero-step",
            SemigroupType::ParabolicPositiveStep => "parabolic-positive-step",
            SemigroupType::HyperbolicGroup => "hyperbolic-group",
            SemigroupType::ParabolicGroup => "parabolic-group",
        };
        f.write_str(s)
    }
}

/// Where a point sits relative to the model domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    Interior,
    Boundary,
    Exterior,
}

pub fn validate_model(model: &SemigroupModel) -> Vec<Violation> {
    match model {
        SemigroupModel::NonElliptic { lower } => lower.check(),
        SemigroupModel::EllipticStarlike { radial } => radial.check(),
        SemigroupModel::EllipticSpiral { lambda, radial } => {
            let mut out = radial.check();
            if lambda.re >= 0.0 {
                out.push(Violation {
                    invariant: "elliptic rate has negative real part".into(),
                    witness: None,
                });
            }
            out
        }
        SemigroupModel::EllipticGroup { theta } => {
            let mut out = Vec::new();
            if *theta == 0.0 || !(*theta > -std::f64::consts::PI)
                || !(*theta <= std::f64::consts::PI)
            {
                out.push(Violation {
                    invariant: "rotation number in (-π, π] \\ {0}".into(),
                    witness: Some(*theta),
                });
            }
            out
        }
        SemigroupModel::HyperbolicGroup { width } => {
            let mut out = Vec::new();
            if !(*width > 0.0) {
                out.push(Violation { invariant: "strip width positive".into(), witness: None });
            }
            out
        }
    }
}

pub fn classify_type(model: &SemigroupModel) -> SemigroupType {
    match model {
        SemigroupModel::EllipticGroup { .. } => SemigroupType::EllipticGroup,
        SemigroupModel::EllipticStarlike { .. } | SemigroupModel::EllipticSpiral { .. } => {
            SemigroupType::Elliptic
        }
        SemigroupModel::HyperbolicGroup { .. } => SemigroupType::HyperbolicGroup,
        SemigroupModel::NonElliptic { lower } => {
            let i = lower.domain();
            if lower.is_full() {
                if i.is_bounded() {
                    SemigroupType::HyperbolicGroup
                } else {
                    SemigroupType::ParabolicGroup
                }
            } else if i.is_bounded() {
                SemigroupType::Hyperbolic
            } else if i.is_real_line() {
                SemigroupType::ParabolicZeroStep
            } else {
                SemigroupType::ParabolicPositiveStep
            }
        }
    }
}

pub fn flow(model: &SemigroupModel, w: Complex64, t: f64) -> Result<Complex64, ModelError> {
    assert!(t >= 0.0, "flow requires t >= 0");
    if membership(model, w) != Membership::Interior {
        return Err(ModelError::DegenerateDomain(format!(
            "flow starting point {w} is not in the open model domain"
        )));
    }
    Ok(flow_unchecked(model, w, t))
}

/// The flow formula without the domain membership check; usable on boundary
/// points when tracing trajectories.
pub fn flow_unchecked(model: &SemigroupModel, w: Complex64, t: f64) -> Complex64 {
    match model {
        SemigroupModel::NonElliptic { .. } | SemigroupModel::HyperbolicGroup { .. } => {
            w + Complex64::new(0.0, t)
        }
        SemigroupModel::EllipticStarlike { .. } | SemigroupModel::EllipticSpiral { .. } => {
            w * (-t).exp()
        }
        SemigroupModel::EllipticGroup { theta } => w * Complex64::new(0.0, theta * t).exp(),
    }
}

pub fn membership(model: &SemigroupModel, w: Complex64) -> Membership {
    match model {
        SemigroupModel::NonElliptic { lower } => lower_membership(lower, w),
        SemigroupModel::HyperbolicGroup { width } => {
            let lb = LowerBoundary::constant(Interval::bounded(0.0, *width), ExtReal::NegInf);
            lower_membership(&lb, w)
        }
        SemigroupModel::EllipticStarlike { radial } | SemigroupModel::EllipticSpiral { radial, .. } => {
            radial_membership(radial, w)
        }
        SemigroupModel::EllipticGroup { .. } => {
            let r = w.norm();
            if r < 1.0 {
                Membership::Interior
            } else if r == 1.0 {
                Membership::Boundary
            } else {
                Membership::Exterior
            }
        }
    }
}

fn lower_membership(lower: &LowerBoundary, w: Complex64) -> Membership {
    let (x, y) = (w.re, w.im);
    let i = lower.domain();
    let beta = lower.beta();

    if i.contains(x) {
        let (l, r) = if let Some(k) = beta.breakpoints().iter().position(|&b| b == x) {
            (beta.limit_left_at(k), beta.limit_right_at(k))
        } else {
            let v = beta.eval(x);
            (v, v)
        };
        let hi = l.max_ext(r);
        let lo = l.min_ext(r);
        return if hi.lt_f(y) {
            Membership::Interior
        } else if lo.gt_f(y) {
            Membership::Exterior
        } else {
            Membership::Boundary
        };
    }

    // endpoint lines of I belong to the closure of Q above the limit of β
    let on_lo = i.lo == ExtReal::Finite(x);
    let on_hi = i.hi == ExtReal::Finite(x);
    if on_lo || on_hi {
        let d = if on_lo { beta.limit_at_lo() } else { beta.limit_at_hi() };
        if !d.gt_f(y) {
            return Membership::Boundary;
        }
    }
    Membership::Exterior
}

fn radial_membership(radial: &RadialBoundary, w: Complex64) -> Membership {
    let r = w.norm();
    if r == 0.0 {
        return Membership::Interior;
    }
    let theta = w.arg().rem_euclid(TWO_PI);
    let rho = radial.rho();
    let seam = theta == 0.0;
    let (l, rr) = if seam {
        (rho.limit_at_hi(), rho.limit_at_lo())
    } else if let Some(k) = rho.breakpoints().iter().position(|&b| b == theta) {
        (rho.limit_left_at(k), rho.limit_right_at(k))
    } else {
        let v = rho.eval(theta);
        (v, v)
    };
    let lo = l.min_ext(rr);
    let hi = l.max_ext(rr);
    if lo.gt_f(r) {
        Membership::Interior
    } else if hi.lt_f(r) {
        Membership::Exterior
    } else {
        Membership::Boundary
    }
}
