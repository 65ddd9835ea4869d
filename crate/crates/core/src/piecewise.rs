//! Piecewise closed-form functions on an interval.
//!
//! The expression family is deliberately small: constants, affine maps,
//! shifted reciprocals, shifted logarithms, the logistic map and the symbolic
//! constants `-inf` / `+inf`. One-sided limits at every breakpoint and at the
//! interval endpoints are then available in closed form, which keeps all of
//! the boundary analysis exact.

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::extreal::ExtReal;

/// Open interval of the extended real line, `lo < hi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: ExtReal,
    pub hi: ExtReal,
}

impl Interval {
    pub fn new(lo: ExtReal, hi: ExtReal) -> Result<Self, ModelError> {
        if lo.cmp_ext(hi) != std::cmp::Ordering::Less || lo.is_pos_inf() || hi.is_neg_inf() {
            return Err(ModelError::BadInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    pub fn bounded(lo: f64, hi: f64) -> Self {
        Interval::new(ExtReal::Finite(lo), ExtReal::Finite(hi)).expect("lo < hi")
    }

    pub fn real_line() -> Self {
        Interval { lo: ExtReal::NegInf, hi: ExtReal::PosInf }
    }

    pub fn half_line_up(lo: f64) -> Self {
        Interval { lo: ExtReal::Finite(lo), hi: ExtReal::PosInf }
    }

    pub fn half_line_down(hi: f64) -> Self {
        Interval { lo: ExtReal::NegInf, hi: ExtReal::Finite(hi) }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo.lt_f(x) && self.hi.gt_f(x)
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn is_real_line(&self) -> bool {
        self.lo.is_neg_inf() && self.hi.is_pos_inf()
    }

    pub fn is_half_line(&self) -> bool {
        self.lo.is_finite() != self.hi.is_finite()
    }

    /// Width for bounded intervals.
    pub fn width(&self) -> Option<f64> {
        Some(self.hi.finite()? - self.lo.finite()?)
    }
}

/// One closed-form branch.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum PieceExpr {
    NegInf,
    PosInf,
    Const(f64),
    /// `a + b*x`
    Affine { a: f64, b: f64 },
    /// `a + b/(x - x0)`
    Recip { a: f64, b: f64, x0: f64 },
    /// `a + b*ln(x - x0)`, defined for `x > x0`
    Log { a: f64, b: f64, x0: f64 },
    /// `1/(1 + e^{-x})`
    Logistic,
}

impl PieceExpr {
    pub fn eval(&self, x: f64) -> ExtReal {
        match *self {
            PieceExpr::NegInf => ExtReal::NegInf,
            PieceExpr::PosInf => ExtReal::PosInf,
            PieceExpr::Const(c) => ExtReal::Finite(c),
            PieceExpr::Affine { a, b } => ExtReal::Finite(a + b * x),
            PieceExpr::Recip { a, b, x0 } => ExtReal::Finite(a + b / (x - x0)),
            PieceExpr::Log { a, b, x0 } => ExtReal::Finite(a + b * (x - x0).ln()),
            PieceExpr::Logistic => ExtReal::Finite(1.0 / (1.0 + (-x).exp())),
        }
    }

    /// Whether the branch is defined (finite or identically infinite) on the
    /// whole open interval `(lo, hi)`.
    pub fn defined_on(&self, lo: ExtReal, hi: ExtReal) -> bool {
        match *self {
            PieceExpr::Recip { x0, .. } => !(lo.lt_f(x0) && hi.gt_f(x0)),
            PieceExpr::Log { x0, .. } => !lo.lt_f(x0) || lo == ExtReal::Finite(x0),
            _ => true,
        }
    }

    /// Limit as `x -> p` from the right, where `p` is the left endpoint of
    /// the branch's subinterval (possibly `-inf`).
    pub fn limit_from_right(&self, p: ExtReal) -> ExtReal {
        match *self {
            PieceExpr::NegInf => ExtReal::NegInf,
            PieceExpr::PosInf => ExtReal::PosInf,
            PieceExpr::Const(c) => ExtReal::Finite(c),
            PieceExpr::Affine { a, b } => match p {
                ExtReal::Finite(x) => ExtReal::Finite(a + b * x),
                ExtReal::NegInf => signed_inf(-b, a),
                ExtReal::PosInf => unreachable!("right limit at +inf"),
            },
            PieceExpr::Recip { a, b, x0 } => match p {
                ExtReal::Finite(x) if x == x0 => signed_inf(b, f64::NAN),
                ExtReal::Finite(x) => ExtReal::Finite(a + b / (x - x0)),
                ExtReal::NegInf => ExtReal::Finite(a),
                ExtReal::PosInf => unreachable!("right limit at +inf"),
            },
            PieceExpr::Log { a, b, x0 } => match p {
                ExtReal::Finite(x) if x == x0 => signed_inf(-b, a),
                ExtReal::Finite(x) => ExtReal::Finite(a + b * (x - x0).ln()),
                ExtReal::NegInf => unreachable!("log undefined near -inf"),
                ExtReal::PosInf => unreachable!("right limit at +inf"),
            },
            PieceExpr::Logistic => match p {
                ExtReal::Finite(x) => ExtReal::Finite(1.0 / (1.0 + (-x).exp())),
                ExtReal::NegInf => ExtReal::Finite(0.0),
                ExtReal::PosInf => unreachable!("right limit at +inf"),
            },
        }
    }

    /// Limit as `x -> p` from the left, where `p` is the right endpoint of
    /// the branch's subinterval (possibly `+inf`).
    pub fn limit_from_left(&self, p: ExtReal) -> ExtReal {
        match *self {
            PieceExpr::NegInf => ExtReal::NegInf,
            PieceExpr::PosInf => ExtReal::PosInf,
            PieceExpr::Const(c) => ExtReal::Finite(c),
            PieceExpr::Affine { a, b } => match p {
                ExtReal::Finite(x) => ExtReal::Finite(a + b * x),
                ExtReal::PosInf => signed_inf(b, a),
                ExtReal::NegInf => unreachable!("left limit at -inf"),
            },
            PieceExpr::Recip { a, b, x0 } => match p {
                ExtReal::Finite(x) if x == x0 => signed_inf(-b, f64::NAN),
                ExtReal::Finite(x) => ExtReal::Finite(a + b / (x - x0)),
                ExtReal::PosInf => ExtReal::Finite(a),
                ExtReal::NegInf => unreachable!("left limit at -inf"),
            },
            PieceExpr::Log { a, b, x0 } => match p {
                ExtReal::Finite(x) if x == x0 => signed_inf(-b, a),
                ExtReal::Finite(x) => ExtReal::Finite(a + b * (x - x0).ln()),
                ExtReal::PosInf => signed_inf(b, a),
                ExtReal::NegInf => unreachable!("left limit at -inf"),
            },
            PieceExpr::Logistic => match p {
                ExtReal::Finite(x) => ExtReal::Finite(1.0 / (1.0 + (-x).exp())),
                ExtReal::PosInf => ExtReal::Finite(1.0),
                ExtReal::NegInf => unreachable!("left limit at -inf"),
            },
        }
    }

    /// Sign of the derivative on an interval where the branch is defined:
    /// `1` strictly increasing, `-1` strictly decreasing, `0` constant.
    /// `None` for the infinite branches.
    pub fn monotonicity(&self) -> Option<i8> {
        match *self {
            PieceExpr::NegInf | PieceExpr::PosInf => None,
            PieceExpr::Const(_) => Some(0),
            PieceExpr::Affine { b, .. } => Some(sign(b)),
            PieceExpr::Recip { b, .. } => Some(-sign(b)),
            PieceExpr::Log { b, .. } => Some(sign(b)),
            PieceExpr::Logistic => Some(1),
        }
    }

    /// Collapse degenerate coefficients so that structural equality detects
    /// identical branches.
    pub fn normalized(self) -> PieceExpr {
        match self {
            PieceExpr::Affine { a, b } if b == 0.0 => PieceExpr::Const(a),
            PieceExpr::Recip { a, b, .. } if b == 0.0 => PieceExpr::Const(a),
            PieceExpr::Log { a, b, .. } if b == 0.0 => PieceExpr::Const(a),
            other => other,
        }
    }

    /// Symbolic sum, when the result stays in the family.
    pub fn add(&self, other: &PieceExpr) -> Option<PieceExpr> {
        use PieceExpr::*;
        let (s, t) = (self.normalized(), other.normalized());
        let r = match (s, t) {
            (NegInf, PosInf) | (PosInf, NegInf) => return None,
            (NegInf, _) | (_, NegInf) => NegInf,
            (PosInf, _) | (_, PosInf) => PosInf,
            (Const(c), Const(d)) => Const(c + d),
            (Const(c), Affine { a, b }) | (Affine { a, b }, Const(c)) => Affine { a: a + c, b },
            (Const(c), Recip { a, b, x0 }) | (Recip { a, b, x0 }, Const(c)) => {
                Recip { a: a + c, b, x0 }
            }
            (Const(c), Log { a, b, x0 }) | (Log { a, b, x0 }, Const(c)) => Log { a: a + c, b, x0 },
            (Affine { a, b }, Affine { a: c, b: d }) => Affine { a: a + c, b: b + d },
            (Recip { a, b, x0 }, Recip { a: c, b: d, x0: y0 }) if x0 == y0 => {
                Recip { a: a + c, b: b + d, x0 }
            }
            (Log { a, b, x0 }, Log { a: c, b: d, x0: y0 }) if x0 == y0 => {
                Log { a: a + c, b: b + d, x0 }
            }
            _ => return None,
        };
        Some(r.normalized())
    }

    /// `self ∘ u⁻¹` where `u` is a strictly increasing branch, when the
    /// composite stays in the family.
    pub fn compose_with_inverse(&self, u: &PieceExpr) -> Option<PieceExpr> {
        use PieceExpr::*;
        let s = self.normalized();
        if matches!(s, NegInf | PosInf | Const(_)) {
            return Some(s);
        }
        match u.normalized() {
            Affine { a: c, b: d } if d != 0.0 => {
                // u⁻¹(y) = (y - c)/d
                let r = match s {
                    Affine { a, b } => Affine { a: a - b * c / d, b: b / d },
                    Recip { a, b, x0 } => Recip { a, b: b * d, x0: c + d * x0 },
                    Log { a, b, x0 } if d > 0.0 => {
                        Log { a: a - b * d.ln(), b, x0: c + d * x0 }
                    }
                    _ => return None,
                };
                Some(r.normalized())
            }
            Recip { a: c, b: d, x0: y0 } if d != 0.0 => {
                // u⁻¹(y) = y0 + d/(y - c), again a Recip branch
                let r = match s {
                    Affine { a, b } => Recip { a: a + b * y0, b: b * d, x0: c },
                    Recip { a, b, x0 } => {
                        let delta = y0 - x0;
                        if delta == 0.0 {
                            Affine { a: a - b * c / d, b: b / d }
                        } else {
                            Recip {
                                a: a + b / delta,
                                b: -b * d / (delta * delta),
                                x0: c - d / delta,
                            }
                        }
                    }
                    _ => return None,
                };
                Some(r.normalized())
            }
            _ => None,
        }
    }
}

fn sign(b: f64) -> i8 {
    if b > 0.0 {
        1
    } else if b < 0.0 {
        -1
    } else {
        0
    }
}

fn signed_inf(b: f64, at_zero: f64) -> ExtReal {
    if b > 0.0 {
        ExtReal::PosInf
    } else if b < 0.0 {
        ExtReal::NegInf
    } else {
        ExtReal::Finite(at_zero)
    }
}

/// How the value at a breakpoint is derived from the two one-sided limits.
///
/// `UpperEnvelope` is the canonical convention for lower boundaries (keeps
/// the region above the graph open); `LowerEnvelope` is its mirror for
/// radial boundaries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BreakpointRule {
    UpperEnvelope,
    LowerEnvelope,
}

impl BreakpointRule {
    pub fn combine(self, left: ExtReal, right: ExtReal) -> ExtReal {
        match (left.finite(), right.finite()) {
            (Some(l), Some(r)) => ExtReal::Finite(match self {
                BreakpointRule::UpperEnvelope => l.max(r),
                BreakpointRule::LowerEnvelope => l.min(r),
            }),
            (Some(l), None) => ExtReal::Finite(l),
            (None, Some(r)) => ExtReal::Finite(r),
            (None, None) => match self {
                BreakpointRule::UpperEnvelope => {
                    if left.is_neg_inf() || right.is_neg_inf() {
                        ExtReal::NegInf
                    } else {
                        ExtReal::PosInf
                    }
                }
                BreakpointRule::LowerEnvelope => {
                    if left.is_pos_inf() || right.is_pos_inf() {
                        ExtReal::PosInf
                    } else {
                        ExtReal::NegInf
                    }
                }
            },
        }
    }
}

/// Piecewise closed-form function over an open interval.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseFn {
    domain: Interval,
    /// Strictly increasing, strictly inside the domain.
    breakpoints: Vec<f64>,
    /// `pieces.len() == breakpoints.len() + 1`
    pieces: Vec<PieceExpr>,
    rule: BreakpointRule,
}

impl PiecewiseFn {
    pub fn new(
        domain: Interval,
        breakpoints: Vec<f64>,
        pieces: Vec<PieceExpr>,
    ) -> Result<Self, ModelError> {
        Self::with_rule(domain, breakpoints, pieces, BreakpointRule::UpperEnvelope)
    }

    pub fn with_rule(
        domain: Interval,
        breakpoints: Vec<f64>,
        pieces: Vec<PieceExpr>,
        rule: BreakpointRule,
    ) -> Result<Self, ModelError> {
        if pieces.len() != breakpoints.len() + 1 {
            return Err(ModelError::PieceCountMismatch {
                breakpoints: breakpoints.len(),
                pieces: pieces.len(),
            });
        }
        for w in breakpoints.windows(2) {
            if !(w[0] < w[1]) {
                return Err(ModelError::BreakpointsNotIncreasing(w[1]));
            }
        }
        for &b in &breakpoints {
            if !domain.contains(b) {
                return Err(ModelError::BreakpointOutsideDomain(b));
            }
        }
        let f = PiecewiseFn { domain, breakpoints, pieces, rule };
        for (i, piece) in f.pieces.iter().enumerate() {
            let (lo, hi) = f.subinterval(i);
            if !piece.defined_on(lo, hi) {
                return Err(ModelError::PieceUndefined { index: i });
            }
        }
        Ok(f)
    }

    pub fn constant(domain: Interval, expr: PieceExpr) -> Self {
        PiecewiseFn::new(domain, vec![], vec![expr]).expect("single piece is always valid")
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[PieceExpr] {
        &self.pieces
    }

    pub fn rule(&self) -> BreakpointRule {
        self.rule
    }

    /// Endpoints of the `i`-th open subinterval.
    pub fn subinterval(&self, i: usize) -> (ExtReal, ExtReal) {
        let lo = if i == 0 { self.domain.lo } else { ExtReal::Finite(self.breakpoints[i - 1]) };
        let hi = if i == self.breakpoints.len() {
            self.domain.hi
        } else {
            ExtReal::Finite(self.breakpoints[i])
        };
        (lo, hi)
    }

    fn piece_index(&self, x: f64) -> usize {
        self.breakpoints.partition_point(|&b| b < x)
    }

    /// Value at `x` in the open domain; breakpoints take the canonical
    /// envelope value derived from the two one-sided limits.
    pub fn eval(&self, x: f64) -> ExtReal {
        debug_assert!(self.domain.contains(x), "eval outside domain");
        if let Some(k) = self.breakpoints.iter().position(|&b| b == x) {
            let left = self.pieces[k].limit_from_left(ExtReal::Finite(x));
            let right = self.pieces[k + 1].limit_from_right(ExtReal::Finite(x));
            return self.rule.combine(left, right);
        }
        self.pieces[self.piece_index(x)].eval(x)
    }

    /// Left-sided limit at breakpoint index `k`.
    pub fn limit_left_at(&self, k: usize) -> ExtReal {
        self.pieces[k].limit_from_left(ExtReal::Finite(self.breakpoints[k]))
    }

    /// Right-sided limit at breakpoint index `k`.
    pub fn limit_right_at(&self, k: usize) -> ExtReal {
        self.pieces[k + 1].limit_from_right(ExtReal::Finite(self.breakpoints[k]))
    }

    /// Limit toward the lower endpoint of the domain.
    pub fn limit_at_lo(&self) -> ExtReal {
        self.pieces[0].limit_from_right(self.domain.lo)
    }

    /// Limit toward the upper endpoint of the domain.
    pub fn limit_at_hi(&self) -> ExtReal {
        self.pieces[self.pieces.len() - 1].limit_from_left(self.domain.hi)
    }

    /// True when the one-sided limits agree and are finite at every
    /// breakpoint.
    pub fn is_continuous(&self) -> bool {
        (0..self.breakpoints.len()).all(|k| {
            let l = self.limit_left_at(k);
            let r = self.limit_right_at(k);
            l.is_finite() && l == r
        }) && self.pieces.iter().all(|p| !matches!(p, PieceExpr::NegInf | PieceExpr::PosInf))
    }

    /// Strict monotonicity of the whole function: `Some(1)` increasing,
    /// `Some(-1)` decreasing, `None` otherwise. Requires continuity.
    pub fn strict_monotonicity(&self) -> Option<i8> {
        if !self.is_continuous() {
            return None;
        }
        let mut dir = 0i8;
        for p in &self.pieces {
            match p.monotonicity() {
                Some(0) | None => return None,
                Some(s) => {
                    if dir == 0 {
                        dir = s;
                    } else if dir != s {
                        return None;
                    }
                }
            }
        }
        if dir == 0 {
            None
        } else {
            Some(dir)
        }
    }

    /// Same function with extra breakpoints inserted (pieces duplicated).
    pub fn refined(&self, extra: &[f64]) -> PiecewiseFn {
        let mut bps = self.breakpoints.clone();
        for &x in extra {
            if self.domain.contains(x) && !bps.contains(&x) {
                bps.push(x);
            }
        }
        bps.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut new_pieces = Vec::with_capacity(bps.len() + 1);
        for i in 0..=bps.len() {
            // representative point of the i-th refined subinterval
            let lo = if i == 0 { self.domain.lo } else { ExtReal::Finite(bps[i - 1]) };
            let hi = if i == bps.len() { self.domain.hi } else { ExtReal::Finite(bps[i]) };
            let x = midpoint(lo, hi);
            new_pieces.push(self.pieces[self.piece_index_open(x)]);
        }
        PiecewiseFn { domain: self.domain, breakpoints: bps, pieces: new_pieces, rule: self.rule }
    }

    fn piece_index_open(&self, x: f64) -> usize {
        // like piece_index but x is never exactly a breakpoint
        self.breakpoints.partition_point(|&b| b < x)
    }

    /// Merge adjacent structurally identical pieces.
    pub fn simplified(&self) -> PiecewiseFn {
        let mut bps: Vec<f64> = Vec::new();
        let mut pieces: Vec<PieceExpr> = vec![self.pieces[0].normalized()];
        for (k, &b) in self.breakpoints.iter().enumerate() {
            let next = self.pieces[k + 1].normalized();
            let prev = *pieces.last().unwrap();
            let left = self.limit_left_at(k);
            let right = self.limit_right_at(k);
            if prev == next && left == right {
                continue;
            }
            bps.push(b);
            pieces.push(next);
        }
        PiecewiseFn { domain: self.domain, breakpoints: bps, pieces, rule: self.rule }
    }
}

/// A representative interior point of a (possibly unbounded) subinterval.
pub fn midpoint(lo: ExtReal, hi: ExtReal) -> f64 {
    match (lo, hi) {
        (ExtReal::Finite(a), ExtReal::Finite(b)) => 0.5 * (a + b),
        (ExtReal::Finite(a), ExtReal::PosInf) => a + 1.0,
        (ExtReal::NegInf, ExtReal::Finite(b)) => b - 1.0,
        (ExtReal::NegInf, ExtReal::PosInf) => 0.0,
        _ => unreachable!("empty subinterval"),
    }
}
