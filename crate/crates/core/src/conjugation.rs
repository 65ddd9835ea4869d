//! Topological conjugations between models.
//!
//! Non-elliptic models are conjugated by shear maps
//! `τ(z) = u(Re z) + i(Im z + v(Re z))`, which commute with the vertical
//! translation flow exactly. Elliptic models use the spiral-to-radial
//! normalizations and circle shears commuting with the radial contraction.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::boundary::{
    BoundaryPointClass, BoundaryReport, ContactArc, InitialPointClass, StripComponent,
};
use crate::error::ConjugationError;
use crate::extreal::ExtReal;
use crate::model::{flow_unchecked, LowerBoundary, SemigroupModel, TWO_PI};
use crate::piecewise::{Interval, PieceExpr, PiecewiseFn};

/// Shear homeomorphism between two translation models.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShearMap {
    u: PiecewiseFn,
    v: PiecewiseFn,
}

impl ShearMap {
    pub fn new(u: PiecewiseFn, v: PiecewiseFn) -> Result<Self, ConjugationError> {
        if u.strict_monotonicity() != Some(1) {
            return Err(ConjugationError::NotIncreasing(format!(
                "monotonicity {:?}",
                u.strict_monotonicity()
            )));
        }
        if u.domain() != v.domain() {
            return Err(ConjugationError::IntervalMismatch);
        }
        if !v.is_continuous() {
            return Err(ConjugationError::BadDisplacement);
        }
        Ok(ShearMap { u, v })
    }

    pub fn identity(domain: Interval) -> Self {
        ShearMap {
            u: PiecewiseFn::constant(domain, PieceExpr::Affine { a: 0.0, b: 1.0 }),
            v: PiecewiseFn::constant(domain, PieceExpr::Const(0.0)),
        }
    }

    /// Vertical shear `(u = id, v)`.
    pub fn vertical(v: PiecewiseFn) -> Result<Self, ConjugationError> {
        let u = PiecewiseFn::constant(v.domain(), PieceExpr::Affine { a: 0.0, b: 1.0 });
        ShearMap::new(u, v)
    }

    pub fn u(&self) -> &PiecewiseFn {
        &self.u
    }

    pub fn v(&self) -> &PiecewiseFn {
        &self.v
    }

    pub fn source(&self) -> Interval {
        self.u.domain()
    }

    /// The image interval of `u`.
    pub fn target(&self) -> Interval {
        Interval::new(self.u.limit_at_lo(), self.u.limit_at_hi()).expect("u strictly increasing")
    }

    /// `u` extended to the closed source interval by limits.
    pub fn u_at(&self, x: ExtReal) -> ExtReal {
        let dom = self.source();
        if x == dom.lo {
            self.u.limit_at_lo()
        } else if x == dom.hi {
            self.u.limit_at_hi()
        } else {
            self.u.eval(x.finite().expect("abscissa inside the closed source interval"))
        }
    }

    /// `v` extended to the closed source interval by limits; may be ±inf at
    /// the endpoints.
    pub fn v_at(&self, x: ExtReal) -> ExtReal {
        let dom = self.source();
        if x == dom.lo {
            self.v.limit_at_lo()
        } else if x == dom.hi {
            self.v.limit_at_hi()
        } else {
            self.v.eval(x.finite().expect("abscissa inside the closed source interval"))
        }
    }
}

/// `τ(w) = u(Re w) + i(Im w + v(Re w))`.
pub fn apply_shear(tau: &ShearMap, w: Complex64) -> Result<Complex64, ConjugationError> {
    if !tau.source().contains(w.re) {
        return Err(ConjugationError::IntervalMismatch);
    }
    let u = tau.u.eval(w.re).finite().expect("u finite on the open interval");
    let v = tau.v.eval(w.re).finite().expect("v finite on the open interval");
    Ok(Complex64::new(u, w.im + v))
}

/// Image boundary `β̃` with `β̃(u(x)) = β(x) + v(x)`, re-expressed in the
/// closed-form family over the target interval.
pub fn pushforward_boundary(
    lower: &LowerBoundary,
    tau: &ShearMap,
) -> Result<LowerBoundary, ConjugationError> {
    if lower.domain() != tau.source() {
        return Err(ConjugationError::IntervalMismatch);
    }
    let mut cuts: Vec<f64> = Vec::new();
    for f in [lower.beta(), &tau.u, &tau.v] {
        cuts.extend_from_slice(f.breakpoints());
    }
    let beta = lower.beta().refined(&cuts);
    let u = tau.u.refined(&cuts);
    let v = tau.v.refined(&cuts);

    let mut pieces = Vec::with_capacity(beta.pieces().len());
    for i in 0..beta.pieces().len() {
        let shifted = beta.pieces()[i]
            .add(&v.pieces()[i])
            .ok_or(ConjugationError::PushforwardNotClosed { index: i })?;
        let composed = shifted
            .compose_with_inverse(&u.pieces()[i])
            .ok_or(ConjugationError::PushforwardNotClosed { index: i })?;
        pieces.push(composed);
    }
    let bps: Vec<f64> = beta
        .breakpoints()
        .iter()
        .map(|&b| u.eval(b).finite().expect("u finite"))
        .collect();
    let pw = PiecewiseFn::new(tau.target(), bps, pieces).map_err(ConjugationError::Model)?;
    LowerBoundary::new(pw.simplified()).map_err(ConjugationError::Model)
}

/// Canonical shear taking any non-elliptic model to one over `I = (0,1)`.
pub fn normalize_to_strip(
    model: &SemigroupModel,
) -> Result<(ShearMap, SemigroupModel), ConjugationError> {
    let lower = match model {
        SemigroupModel::NonElliptic { lower } => lower.clone(),
        SemigroupModel::HyperbolicGroup { width } => {
            LowerBoundary::constant(Interval::bounded(0.0, *width), ExtReal::NegInf)
        }
        _ => {
            return Err(ConjugationError::IntervalMismatch);
        }
    };
    let dom = lower.domain();
    let u_expr = match (dom.lo, dom.hi) {
        (ExtReal::Finite(lo), ExtReal::Finite(hi)) => {
            PieceExpr::Affine { a: -lo / (hi - lo), b: 1.0 / (hi - lo) }
        }
        (ExtReal::NegInf, ExtReal::PosInf) => PieceExpr::Logistic,
        // (lo, +inf) → 1 - 1/(x - lo + 1)
        (ExtReal::Finite(lo), ExtReal::PosInf) => PieceExpr::Recip { a: 1.0, b: -1.0, x0: lo - 1.0 },
        // (-inf, hi) → 1/(hi + 1 - x) = -1/(x - (hi+1))
        (ExtReal::NegInf, ExtReal::Finite(hi)) => PieceExpr::Recip { a: 0.0, b: -1.0, x0: hi + 1.0 },
        _ => unreachable!("valid interval"),
    };
    let tau = ShearMap::new(
        PiecewiseFn::constant(dom, u_expr),
        PiecewiseFn::constant(dom, PieceExpr::Const(0.0)),
    )?;
    let pushed = pushforward_boundary(&lower, &tau)?;
    Ok((tau, SemigroupModel::NonElliptic { lower: pushed }))
}

/// Starlike normalization of the spiral flow: `φ(ρ e^{iθ}) =
/// exp(-(1/a + i b/a) log ρ) e^{iθ}` for `λ = a + ib`, `a < 0`.
pub fn elliptic_normalize(lambda: Complex64, w: Complex64) -> Complex64 {
    assert!(lambda.re < 0.0, "elliptic rate must have Re < 0");
    if w == Complex64::new(0.0, 0.0) {
        return w;
    }
    let (rho, theta) = w.to_polar();
    let (a, b) = (lambda.re, lambda.im);
    let exponent = -Complex64::new(1.0 / a, b / a) * rho.ln();
    exponent.exp() * Complex64::from_polar(1.0, theta)
}

/// `θ_λ(z) = z |z|^{-(1+1/a)} exp(-i (b/a) log|z|)`, `θ_λ(0) = 0`;
/// conjugates `e^{λt}` to `e^{-t}`.
pub fn theta_lambda(lambda: Complex64, z: Complex64) -> Complex64 {
    assert!(lambda.re < 0.0, "elliptic rate must have Re < 0");
    if z == Complex64::new(0.0, 0.0) {
        return z;
    }
    let (a, b) = (lambda.re, lambda.im);
    let r = z.norm();
    z * r.powf(-(1.0 + 1.0 / a)) * Complex64::new(0.0, -(b / a) * r.ln()).exp()
}

/// Circle shear commuting with the radial flow: `τ₀(z) = |z| u(z/|z|) v(z/|z|)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EllipticShear {
    /// Lift of the circle homeomorphism: strictly monotone on `(0, 2π)`
    /// with total variation `2π` (degree `+1`) or `-2π` (degree `-1`).
    u_lift: PiecewiseFn,
    /// Radial scaling, continuous and positive on the circle.
    v: PiecewiseFn,
}

impl EllipticShear {
    pub fn new(u_lift: PiecewiseFn, v: PiecewiseFn) -> Result<Self, ConjugationError> {
        let dom = Interval::bounded(0.0, TWO_PI);
        if u_lift.domain() != dom || v.domain() != dom {
            return Err(ConjugationError::IntervalMismatch);
        }
        let mono = u_lift.strict_monotonicity();
        if mono != Some(1) && mono != Some(-1) {
            return Err(ConjugationError::NotIncreasing(
                "circle lift must be strictly monotone".into(),
            ));
        }
        let span = match (u_lift.limit_at_lo().finite(), u_lift.limit_at_hi().finite()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => return Err(ConjugationError::NotIncreasing("circle lift must be finite".into())),
        };
        if (span.abs() - TWO_PI).abs() > 1e-9 {
            return Err(ConjugationError::NotIncreasing(format!(
                "circle lift must have degree ±1 (span {span})"
            )));
        }
        if !v.is_continuous() {
            return Err(ConjugationError::BadDisplacement);
        }
        let positive = v.pieces().iter().enumerate().all(|(i, p)| {
            let (lo, hi) = v.subinterval(i);
            let inf = p.limit_from_right(lo).min_ext(p.limit_from_left(hi));
            !inf.lt_f(0.0) && inf != ExtReal::Finite(0.0)
        });
        if !positive {
            return Err(ConjugationError::BadDisplacement);
        }
        Ok(EllipticShear { u_lift, v })
    }

    pub fn identity() -> Self {
        let dom = Interval::bounded(0.0, TWO_PI);
        EllipticShear {
            u_lift: PiecewiseFn::constant(dom, PieceExpr::Affine { a: 0.0, b: 1.0 }),
            v: PiecewiseFn::constant(dom, PieceExpr::Const(1.0)),
        }
    }

    /// Rotation by `alpha` (degree `+1`, `v ≡ 1`).
    pub fn rotation(alpha: f64) -> Self {
        let dom = Interval::bounded(0.0, TWO_PI);
        EllipticShear {
            u_lift: PiecewiseFn::constant(dom, PieceExpr::Affine { a: alpha, b: 1.0 }),
            v: PiecewiseFn::constant(dom, PieceExpr::Const(1.0)),
        }
    }

    /// Complex conjugation `z ↦ z̄` (degree `-1`), intertwining the elliptic
    /// group rotations `θ` and `-θ`.
    pub fn reflection() -> Self {
        let dom = Interval::bounded(0.0, TWO_PI);
        EllipticShear {
            u_lift: PiecewiseFn::constant(dom, PieceExpr::Affine { a: 0.0, b: -1.0 }),
            v: PiecewiseFn::constant(dom, PieceExpr::Const(1.0)),
        }
    }

    pub fn degree(&self) -> i8 {
        self.u_lift.strict_monotonicity().expect("validated lift")
    }
}

/// Evaluate the circle shear; `τ₀(0) = 0`.
pub fn apply_tau0(es: &EllipticShear, z: Complex64) -> Complex64 {
    if z == Complex64::new(0.0, 0.0) {
        return z;
    }
    let (r, theta) = z.to_polar();
    let t = theta.rem_euclid(TWO_PI);
    let (angle, scale) = if t == 0.0 {
        (
            es.u_lift.limit_at_lo().finite().expect("finite lift"),
            es.v.limit_at_lo().finite().expect("finite v"),
        )
    } else {
        (
            es.u_lift.eval(t).finite().expect("finite lift"),
            es.v.eval(t).finite().expect("finite v"),
        )
    };
    Complex64::from_polar(r * scale, angle)
}

/// Two elliptic rotation groups are topologically conjugated iff the
/// rotation numbers agree up to sign.
pub fn elliptic_group_conjugacy(theta1: f64, theta2: f64) -> bool {
    theta1.abs() == theta2.abs()
}

/// Either kind of conjugating homeomorphism.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Conjugator {
    Shear(ShearMap),
    Elliptic(EllipticShear),
}

impl Conjugator {
    fn apply(&self, w: Complex64) -> Result<Complex64, ConjugationError> {
        match self {
            Conjugator::Shear(tau) => apply_shear(tau, w),
            Conjugator::Elliptic(es) => Ok(apply_tau0(es, w)),
        }
    }
}

/// Residuals of a claimed conjugation `τ ∘ Φ¹_t = Φ²_t ∘ τ`,
/// `τ(Q₁) = Q₂`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjugacyReport {
    pub equivariance_residual: f64,
    pub fiber_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub fn verify_conjugacy(
    m1: &SemigroupModel,
    m2: &SemigroupModel,
    tau: &Conjugator,
    samples: usize,
    times: &[f64],
    tolerance: f64,
) -> Result<ConjugacyReport, ConjugationError> {
    let mut equi: f64 = 0.0;
    for w in sample_interior(m1, samples) {
        let tw = tau.apply(w)?;
        for &t in times {
            let lhs = tau.apply(flow_unchecked(m1, w, t))?;
            let rhs = flow_unchecked(m2, tw, t);
            equi = equi.max((lhs - rhs).norm());
        }
    }

    let fiber = fiber_residual(m1, m2, tau)?;
    let pass = equi <= tolerance && fiber <= tolerance;
    Ok(ConjugacyReport { equivariance_residual: equi, fiber_residual: fiber, tolerance, pass })
}

fn sample_interior(model: &SemigroupModel, samples: usize) -> Vec<Complex64> {
    let n = samples.max(1);
    match model {
        SemigroupModel::NonElliptic { lower } => {
            let dom = lower.domain();
            let (lo, hi) = clamp_interval(dom);
            (0..n)
                .map(|i| {
                    let x = lo + (hi - lo) * (i as f64 + 0.5) / n as f64;
                    let b = lower.beta().eval(x).clamped(1e3);
                    Complex64::new(x, b + 1.0 + (i % 3) as f64)
                })
                .collect()
        }
        SemigroupModel::HyperbolicGroup { width } => (0..n)
            .map(|i| Complex64::new(width * (i as f64 + 0.5) / n as f64, (i % 5) as f64 - 2.0))
            .collect(),
        SemigroupModel::EllipticStarlike { radial }
        | SemigroupModel::EllipticSpiral { radial, .. } => (0..n)
            .map(|i| {
                let theta = TWO_PI * (i as f64 + 0.5) / n as f64;
                let r = 0.5 * radial.eval(theta).clamped(10.0);
                Complex64::from_polar(r, theta)
            })
            .collect(),
        SemigroupModel::EllipticGroup { .. } => (0..n)
            .map(|i| Complex64::from_polar(0.9 * (i as f64 + 0.5) / n as f64, 2.4 * i as f64))
            .collect(),
    }
}

fn clamp_interval(dom: Interval) -> (f64, f64) {
    (dom.lo.clamped(10.0), dom.hi.clamped(10.0))
}

fn fiber_residual(
    m1: &SemigroupModel,
    m2: &SemigroupModel,
    tau: &Conjugator,
) -> Result<f64, ConjugationError> {
    const CAP: f64 = 1e6;
    match (m1, m2, tau) {
        (
            SemigroupModel::NonElliptic { lower: l1 },
            SemigroupModel::NonElliptic { lower: l2 },
            Conjugator::Shear(tau),
        ) => {
            let pushed = pushforward_boundary(l1, tau)?;
            if pushed.domain() != l2.domain() {
                return Err(ConjugationError::IntervalMismatch);
            }
            let (lo, hi) = clamp_interval(l2.domain());
            let n = 512;
            let mut worst: f64 = 0.0;
            for i in 0..n {
                let x = lo + (hi - lo) * (i as f64 + 0.5) / n as f64;
                let a = pushed.beta().eval(x).clamped(CAP);
                let b = l2.beta().eval(x).clamped(CAP);
                worst = worst.max((a - b).abs());
            }
            Ok(worst)
        }
        (
            SemigroupModel::EllipticStarlike { radial: r1 },
            SemigroupModel::EllipticStarlike { radial: r2 },
            Conjugator::Elliptic(es),
        ) => {
            let n = 512;
            let mut worst: f64 = 0.0;
            for i in 0..n {
                let theta = TWO_PI * (i as f64 + 0.5) / n as f64;
                let rho = r1.eval(theta).clamped(CAP);
                let image = apply_tau0(es, Complex64::from_polar(rho, theta));
                let target = r2.eval(image.arg()).clamped(CAP);
                worst = worst.max((image.norm() - target).abs());
            }
            Ok(worst)
        }
        (SemigroupModel::EllipticGroup { .. }, SemigroupModel::EllipticGroup { .. }, _) => Ok(0.0),
        _ => Err(ConjugationError::IntervalMismatch),
    }
}

/// Boundary report predicted for the image model; exceptional data is not a
/// topological invariant and is listed as undetermined instead.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransportedReport {
    pub report: BoundaryReport,
    pub undetermined: Vec<String>,
}

pub fn transport_boundary_report(report1: &BoundaryReport, tau: &ShearMap) -> TransportedReport {
    let mut undetermined = vec![
        "denjoy-wolff end: not transported (recompute on the image model)".to_string(),
    ];

    let components: Vec<StripComponent> = report1
        .components
        .iter()
        .map(|c| StripComponent { a: tau.u_at(c.a), b: tau.u_at(c.b) })
        .collect();

    let mut arcs: Vec<ContactArc> = Vec::new();
    for arc in &report1.arcs {
        if arc.exceptional {
            undetermined.push(format!(
                "exceptional arc at Re = {}: not transported (recompute on the image model)",
                arc.c
            ));
            continue;
        }
        let vl = tau.v_at(ExtReal::Finite(arc.c));
        let shift = match vl.finite() {
            Some(s) => s,
            None => {
                undetermined.push(format!(
                    "arc at Re = {}: displacement limit is infinite, image arc undetermined",
                    arc.c
                ));
                continue;
            }
        };
        let c2 = tau.u_at(ExtReal::Finite(arc.c)).finite().expect("interior abscissa");
        let add = |e: ExtReal| match e {
            ExtReal::Finite(x) => ExtReal::Finite(x + shift),
            inf => inf,
        };
        arcs.push(ContactArc {
            c: c2,
            d: add(arc.d),
            r: add(arc.r),
            side: arc.side,
            exceptional: false,
            initial_point_class: arc.initial_point_class,
        });
    }

    let mut fixed_points: Vec<(String, BoundaryPointClass)> = Vec::new();
    for comp in &components {
        if comp.is_half_infinite() {
            fixed_points.push((
                format!("half-infinite component [{}, {}]", comp.a, comp.b),
                BoundaryPointClass::Plain,
            ));
        } else if comp.is_line() {
            fixed_points.push((
                format!("line component at Re = {}", comp.a),
                BoundaryPointClass::SuperRepelling1,
            ));
        } else {
            fixed_points.push((
                format!("strip component [{}, {}]", comp.a, comp.b),
                BoundaryPointClass::RegularBfp,
            ));
        }
    }
    for arc in &arcs {
        if arc.initial_point_class == InitialPointClass::FixedSuperRepelling {
            fixed_points.push((
                format!("initial point of arc at Re = {}", arc.c),
                BoundaryPointClass::SuperRepelling2,
            ));
        }
    }

    TransportedReport {
        report: BoundaryReport {
            components,
            arcs,
            fixed_points,
            exceptional_set_nonempty: false,
        },
        undetermined,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::boundary_report;

    fn recip(a: f64, b: f64, x0: f64) -> PieceExpr {
        PieceExpr::Recip { a, b, x0 }
    }

    fn lower(domain: Interval, pieces: Vec<PieceExpr>, bps: Vec<f64>) -> LowerBoundary {
        LowerBoundary::new(PiecewiseFn::new(domain, bps, pieces).unwrap()).unwrap()
    }

    #[test]
    fn apply_shear_examples() {
        let dom = Interval::bounded(0.0, 1.0);
        let id = ShearMap::identity(dom);
        let w = Complex64::new(0.7, 2.0);
        assert_eq!(apply_shear(&id, w).unwrap(), w);

        // v(x) = -1/x
        let tau =
            ShearMap::vertical(PiecewiseFn::constant(dom, recip(0.0, -1.0, 0.0))).unwrap();
        let got = apply_shear(&tau, Complex64::new(0.5, 2.5)).unwrap();
        assert!((got - Complex64::new(0.5, 0.5)).norm() < 1e-15);

        // v(x) = 1/x
        let tau = ShearMap::vertical(PiecewiseFn::constant(dom, recip(0.0, 1.0, 0.0))).unwrap();
        let got = apply_shear(&tau, Complex64::new(0.25, 0.0)).unwrap();
        assert!((got - Complex64::new(0.25, 4.0)).norm() < 1e-15);

        assert!(apply_shear(&id, Complex64::new(2.0, 0.0)).is_err());
    }

    #[test]
    fn shear_commutes_with_translation() {
        let dom = Interval::bounded(0.0, 1.0);
        let tau =
            ShearMap::vertical(PiecewiseFn::constant(dom, recip(0.0, -1.0, 0.0))).unwrap();
        for i in 1..20 {
            let w = Complex64::new(i as f64 / 20.0, (i as f64) * 0.3 - 2.0);
            for t in [0.0, 0.5, 2.0, 11.25] {
                let a = apply_shear(&tau, w + Complex64::new(0.0, t)).unwrap();
                let b = apply_shear(&tau, w).unwrap() + Complex64::new(0.0, t);
                // exact up to float addition reordering; with dyadic inputs
                // (as in the acceptance corpus) the residual is exactly 0
                assert!((a - b).norm() <= 4.0 * f64::EPSILON * b.norm(), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn pushforward_flattens_recip() {
        // β = 1/x, v = -1/x → β̃ ≡ 0
        let dom = Interval::bounded(0.0, 1.0);
        let lb = lower(dom, vec![recip(0.0, 1.0, 0.0)], vec![]);
        let tau =
            ShearMap::vertical(PiecewiseFn::constant(dom, recip(0.0, -1.0, 0.0))).unwrap();
        let pushed = pushforward_boundary(&lb, &tau).unwrap();
        assert_eq!(pushed.beta().pieces(), &[PieceExpr::Const(0.0)]);

        // β ≡ 0, v = -1/x → β̃ = -1/x
        let lb = lower(dom, vec![PieceExpr::Const(0.0)], vec![]);
        let pushed = pushforward_boundary(&lb, &tau).unwrap();
        assert_eq!(pushed.beta().pieces(), &[recip(0.0, -1.0, 0.0)]);

        // -inf absorbs any shear
        let lb = LowerBoundary::constant(dom, ExtReal::NegInf);
        let pushed = pushforward_boundary(&lb, &tau).unwrap();
        assert!(pushed.is_full());
    }

    #[test]
    fn pushforward_with_scaling_base_map() {
        // β = 1/x on (0,1), u(x) = x/2 → β̃(y) = 1/(2y) on (0,1/2)
        let dom = Interval::bounded(0.0, 1.0);
        let lb = lower(dom, vec![recip(0.0, 1.0, 0.0)], vec![]);
        let tau = ShearMap::new(
            PiecewiseFn::constant(dom, PieceExpr::Affine { a: 0.0, b: 0.5 }),
            PiecewiseFn::constant(dom, PieceExpr::Const(0.0)),
        )
        .unwrap();
        let pushed = pushforward_boundary(&lb, &tau).unwrap();
        assert_eq!(pushed.domain(), Interval::bounded(0.0, 0.5));
        let got = pushed.beta().eval(0.25).finite().unwrap();
        assert!((got - 2.0).abs() < 1e-12);
    }

    #[test]
    fn pushforward_closure_failure_is_hard_error() {
        // β = ln x cannot pass through a Möbius base map
        let dom = Interval::bounded(0.0, 1.0);
        let lb = lower(dom, vec![PieceExpr::Log { a: 0.0, b: 1.0, x0: 0.0 }], vec![]);
        let tau = ShearMap::new(
            PiecewiseFn::constant(dom, recip(0.0, -1.0, 1.0)),
            PiecewiseFn::constant(dom, PieceExpr::Const(0.0)),
        )
        .unwrap();
        assert!(matches!(
            pushforward_boundary(&lb, &tau),
            Err(ConjugationError::PushforwardNotClosed { .. })
        ));
    }

    #[test]
    fn normalize_canonical_base_maps() {
        let m = SemigroupModel::NonElliptic {
            lower: LowerBoundary::constant(Interval::bounded(0.0, 2.0), ExtReal::Finite(0.0)),
        };
        let (tau, norm) = normalize_to_strip(&m).unwrap();
        assert_eq!(tau.target(), Interval::bounded(0.0, 1.0));
        assert_eq!(crate::model::classify_type(&norm), crate::model::SemigroupType::Hyperbolic);
        assert_eq!(tau.u().eval(1.0), ExtReal::Finite(0.5));

        let m = SemigroupModel::NonElliptic {
            lower: LowerBoundary::constant(Interval::real_line(), ExtReal::Finite(0.0)),
        };
        let (tau, _) = normalize_to_strip(&m).unwrap();
        assert_eq!(tau.u().eval(0.0), ExtReal::Finite(0.5));

        let m = SemigroupModel::NonElliptic {
            lower: LowerBoundary::constant(Interval::half_line_up(0.0), ExtReal::Finite(0.0)),
        };
        let (tau, _) = normalize_to_strip(&m).unwrap();
        let got = tau.u().eval(1.0).finite().unwrap();
        assert!((got - 0.5).abs() < 1e-12, "x/(1+x) at 1");
    }

    #[test]
    fn elliptic_normalize_conjugates() {
        let lambda = Complex64::new(-2.0, 0.0);
        let w = Complex64::new(4.0, 0.0);
        let got = elliptic_normalize(lambda, w);
        assert!((got - Complex64::new(2.0, 0.0)).norm() < 1e-12);
        // λ = -1 is the fixed point of the normalization
        let got = elliptic_normalize(Complex64::new(-1.0, 0.0), Complex64::new(0.3, -0.7));
        assert!((got - Complex64::new(0.3, -0.7)).norm() < 1e-12);
    }

    #[test]
    fn theta_lambda_examples() {
        let z = Complex64::new(0.3, 0.4);
        assert_eq!(theta_lambda(Complex64::new(-1.0, 0.0), z), z);
        assert_eq!(
            theta_lambda(Complex64::new(-1.0, 2.0), Complex64::new(0.0, 0.0)),
            Complex64::new(0.0, 0.0)
        );
        let e = Complex64::new(std::f64::consts::E, 0.0);
        let got = theta_lambda(Complex64::new(-1.0, 1.0), e);
        let want = e * Complex64::new(0.0, 1.0).exp();
        assert!((got - want).norm() < 1e-12);
    }

    #[test]
    fn tau0_basics() {
        let id = EllipticShear::identity();
        let z = Complex64::new(0.3, -0.2);
        assert!((apply_tau0(&id, z) - z).norm() < 1e-15);
        assert_eq!(apply_tau0(&id, Complex64::new(0.0, 0.0)), Complex64::new(0.0, 0.0));

        let rot = EllipticShear::rotation(std::f64::consts::FRAC_PI_2);
        let got = apply_tau0(&rot, Complex64::new(3.0, 0.0));
        assert!((got - Complex64::new(0.0, 3.0)).norm() < 1e-12);

        // commutation with the radial flow is exact in modulus and angle
        let es = EllipticShear::rotation(1.0);
        for i in 1..30 {
            let z = Complex64::from_polar(0.1 * i as f64, 0.7 * i as f64);
            for t in [0.0, 0.3, 2.0] {
                let a = apply_tau0(&es, z * (-t as f64).exp());
                let b = apply_tau0(&es, z) * (-t as f64).exp();
                assert!((a - b).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn group_conjugacy_rule() {
        let p = std::f64::consts::FRAC_PI_3;
        assert!(elliptic_group_conjugacy(p, -p));
        assert!(!elliptic_group_conjugacy(0.0, std::f64::consts::FRAC_PI_4));
        assert!(elliptic_group_conjugacy(1.0, 1.0));
        // the reflection z̄ realizes the θ ↔ -θ conjugacy
        let es = EllipticShear::reflection();
        assert_eq!(es.degree(), -1);
        let z = Complex64::new(0.3, 0.4);
        let got = apply_tau0(&es, z);
        assert!((got - z.conj()).norm() < 1e-12);
    }

    #[test]
    fn verify_conjugacy_reports() {
        let dom = Interval::bounded(0.0, 1.0);
        let m = SemigroupModel::NonElliptic {
            lower: lower(dom, vec![recip(0.0, 1.0, 0.0)], vec![]),
        };
        let flat = SemigroupModel::NonElliptic {
            lower: LowerBoundary::constant(dom, ExtReal::Finite(0.0)),
        };
        let tau = Conjugator::Shear(
            ShearMap::vertical(PiecewiseFn::constant(dom, recip(0.0, -1.0, 0.0))).unwrap(),
        );
        let rep = verify_conjugacy(&m, &flat, &tau, 25, &[0.0, 0.5, 1.0, 3.0], 1e-9).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert!(rep.equivariance_residual <= 1e-12);

        // identity shear between offset boundaries must fail with residual 1
        let raised = SemigroupModel::NonElliptic {
            lower: LowerBoundary::constant(dom, ExtReal::Finite(1.0)),
        };
        let id = Conjugator::Shear(ShearMap::identity(dom));
        let rep = verify_conjugacy(&flat, &raised, &id, 10, &[0.0, 1.0], 1e-9).unwrap();
        assert!(!rep.pass);
        assert!((rep.fiber_residual - 1.0).abs() < 1e-12);
    }

    #[test]
    fn transport_matches_recomputation() {
        // β = -inf on (1,2) inside (0,3); u(x) = x/3 onto (0,1)
        let dom = Interval::bounded(0.0, 3.0);
        let lb = lower(
            dom,
            vec![PieceExpr::Const(0.0), PieceExpr::NegInf, PieceExpr::Const(0.0)],
            vec![1.0, 2.0],
        );
        let m = SemigroupModel::NonElliptic { lower: lb.clone() };
        let tau = ShearMap::new(
            PiecewiseFn::constant(dom, PieceExpr::Affine { a: 0.0, b: 1.0 / 3.0 }),
            PiecewiseFn::constant(dom, PieceExpr::Const(0.0)),
        )
        .unwrap();
        let transported = transport_boundary_report(&boundary_report(&m), &tau);
        let comp = transported.report.components[0];
        assert!((comp.a.finite().unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert!((comp.b.finite().unwrap() - 2.0 / 3.0).abs() < 1e-12);

        // direct recomputation on the pushforward agrees on the component
        let pushed = pushforward_boundary(&lb, &tau).unwrap();
        let direct = boundary_report(&SemigroupModel::NonElliptic { lower: pushed });
        assert_eq!(direct.components.len(), 1);
        assert!((direct.components[0].a.finite().unwrap() - comp.a.finite().unwrap()).abs() < 1e-12);
        // classes also agree
        let t_classes: Vec<_> = transported
            .report
            .fixed_points
            .iter()
            .map(|(_, c)| *c)
            .collect();
        assert!(t_classes.contains(&BoundaryPointClass::RegularBfp));
    }

    #[test]
    fn transport_leaves_exceptional_undetermined() {
        let dom = Interval::bounded(0.0, 1.0);
        let lb = lower(dom, vec![recip(0.0, -1.0, 0.0)], vec![]);
        let rep = boundary_report(&SemigroupModel::NonElliptic { lower: lb });
        let tau = ShearMap::identity(dom);
        let transported = transport_boundary_report(&rep, &tau);
        assert!(transported.report.arcs.is_empty());
        assert!(transported.undetermined.len() >= 2);
    }

    #[test]
    fn pushforward_composes() {
        // τ₂∘τ₁ with vertical shears adds displacements
        let dom = Interval::bounded(0.0, 1.0);
        let lb = lower(dom, vec![PieceExpr::Const(0.0)], vec![]);
        let t1 = ShearMap::vertical(PiecewiseFn::constant(dom, recip(0.0, 1.0, 0.0))).unwrap();
        let t2 = ShearMap::vertical(PiecewiseFn::constant(dom, recip(0.0, 1.0, 0.0))).unwrap();
        let via_steps =
            pushforward_boundary(&pushforward_boundary(&lb, &t1).unwrap(), &t2).unwrap();
        let combined =
            ShearMap::vertical(PiecewiseFn::constant(dom, recip(0.0, 2.0, 0.0))).unwrap();
        let direct = pushforward_boundary(&lb, &combined).unwrap();
        assert_eq!(via_steps.beta().pieces(), direct.beta().pieces());
    }
}
