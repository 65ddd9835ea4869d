//! Boundary dynamics of a model domain.
//!
//! From the piecewise boundary data this module extracts the vertical
//! strips and lines surviving the flow for all times, the maximal contact
//! arcs of the boundary with their life-times, and the classification of
//! boundary fixed points.

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::extreal::ExtReal;
use crate::model::{LowerBoundary, RadialBoundary, SemigroupModel, TWO_PI};
use crate::piecewise::{Interval, PieceExpr};

/// A connected component of the set surviving the upward flow for all
/// times: a vertical line (`a = b`) or closed strip (`a < b`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StripComponent {
    pub a: ExtReal,
    pub b: ExtReal,
}

impl StripComponent {
    pub fn is_line(&self) -> bool {
        self.a == self.b
    }

    pub fn is_nondegenerate_strip(&self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.a.cmp_ext(self.b).is_lt()
    }

    pub fn is_half_infinite(&self) -> bool {
        !self.a.is_finite() || !self.b.is_finite()
    }

    pub fn touches(&self, c: f64) -> bool {
        self.a == ExtReal::Finite(c) || self.b == ExtReal::Finite(c)
    }
}

/// Which side of a vertical boundary segment the domain lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// Classification of the initial (bottom) point of a contact arc.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InitialPointClass {
    FixedRegular,
    FixedSuperRepelling,
    ContactNotFixed,
}

/// A maximal vertical segment `{c + iy : y ∈ (d, r)}` of the domain
/// boundary crossed by the flow.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContactArc {
    pub c: f64,
    /// Initial height; `-inf` exactly when the initial point is fixed.
    pub d: ExtReal,
    /// Final height; `+inf` exactly for exceptional arcs.
    pub r: ExtReal,
    /// Side of the segment on which the domain lies.
    pub side: Side,
    pub exceptional: bool,
    pub initial_point_class: InitialPointClass,
}

/// Classes of boundary points of the disc seen through the model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryPointClass {
    DenjoyWolff,
    RegularBfp,
    SuperRepelling1,
    SuperRepelling2,
    SuperRepelling3,
    ContactPoint,
    Plain,
}

impl std::fmt::Display for BoundaryPointClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            BoundaryPointClass::DenjoyWolff => "denjoy-wolff",
            BoundaryPointClass::RegularBfp => "regular-bfp",
            BoundaryPointClass::SuperRepelling1 => "super-repelling-1",
            BoundaryPointClass::SuperRepelling2 => "super-repelling-2",
            BoundaryPointClass::SuperRepelling3 => "super-repelling-3",
            BoundaryPointClass::ContactPoint => "contact-point",
            BoundaryPointClass::Plain => "plain",
        };
        f.write_str(s)
    }
}

/// A prime-end descriptor in model coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum BoundaryDescriptor {
    /// The attracting end `Im → +inf` (interior fixed point for elliptic).
    DenjoyWolff,
    /// The prime end at abscissa `x` reached going down a line/strip
    /// component (`Im → -inf`).
    ComponentEnd { x: f64 },
    /// A point on a contact arc.
    ArcPoint { c: f64, y: f64 },
    /// The boundary point above abscissa `x` (graph point `x + iβ(x)`).
    Graph { x: f64 },
}

impl std::fmt::Display for BoundaryDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundaryDescriptor::DenjoyWolff => write!(f, "denjoy-wolff end"),
            BoundaryDescriptor::ComponentEnd { x } => write!(f, "component end at Re = {x}"),
            BoundaryDescriptor::ArcPoint { c, y } => write!(f, "arc point {c} + {y}i"),
            BoundaryDescriptor::Graph { x } => write!(f, "graph point above x = {x}"),
        }
    }
}

/// Aggregate boundary-dynamical data of one model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryReport {
    pub components: Vec<StripComponent>,
    pub arcs: Vec<ContactArc>,
    pub fixed_points: Vec<(String, BoundaryPointClass)>,
    pub exceptional_set_nonempty: bool,
}

/// Maximal closed vertical lines/strips surviving the upward flow for all
/// times, ordered by abscissa.
pub fn strip_components(lower: &LowerBoundary) -> Vec<StripComponent> {
    let beta = lower.beta();
    let mut out: Vec<StripComponent> = Vec::new();
    let mut cur: Option<(ExtReal, ExtReal)> = None;
    let flush = |cur: &mut Option<(ExtReal, ExtReal)>, out: &mut Vec<StripComponent>| {
        if let Some((a, b)) = cur.take() {
            out.push(StripComponent { a, b });
        }
    };

    for i in 0..beta.pieces().len() {
        if i > 0 {
            let k = i - 1;
            let bp = beta.breakpoints()[k];
            let in_set =
                beta.limit_left_at(k).is_neg_inf() && beta.limit_right_at(k).is_neg_inf();
            if in_set {
                match &mut cur {
                    Some((_, b)) => *b = ExtReal::Finite(bp),
                    None => cur = Some((ExtReal::Finite(bp), ExtReal::Finite(bp))),
                }
            } else {
                flush(&mut cur, &mut out);
            }
        }
        if matches!(beta.pieces()[i], PieceExpr::NegInf) {
            let (lo, hi) = beta.subinterval(i);
            match &mut cur {
                Some((_, b)) if *b == lo => *b = hi,
                Some(_) => {
                    flush(&mut cur, &mut out);
                    cur = Some((lo, hi));
                }
                None => cur = Some((lo, hi)),
            }
        } else {
            // finite piece: whatever run is open ends here
            flush(&mut cur, &mut out);
        }
    }
    flush(&mut cur, &mut out);
    out
}

/// Maximal vertical contact segments of the domain boundary.
pub fn detect_contact_arcs(lower: &LowerBoundary) -> Vec<ContactArc> {
    let beta = lower.beta();
    let i = lower.domain();
    let comps = strip_components(lower);
    let mut out = Vec::new();

    // lower endpoint of I
    if let Some(c) = i.lo.finite() {
        let d = beta.limit_at_lo();
        if !d.is_pos_inf() {
            out.push(make_arc(c, d, ExtReal::PosInf, Side::Right, &comps));
        }
    }

    // interior jumps
    for k in 0..beta.breakpoints().len() {
        let c = beta.breakpoints()[k];
        let l = beta.limit_left_at(k);
        let r = beta.limit_right_at(k);
        if l == r {
            continue;
        }
        let (d, top) = (l.min_ext(r), l.max_ext(r));
        let side = if l.cmp_ext(r).is_lt() { Side::Left } else { Side::Right };
        out.push(make_arc(c, d, top, side, &comps));
    }

    // upper endpoint of I
    if let Some(c) = i.hi.finite() {
        let d = beta.limit_at_hi();
        if !d.is_pos_inf() {
            out.push(make_arc(c, d, ExtReal::PosInf, Side::Left, &comps));
        }
    }

    debug_assert!(out.iter().filter(|a| a.exceptional).count() <= 2);
    out
}

fn make_arc(
    c: f64,
    d: ExtReal,
    r: ExtReal,
    side: Side,
    comps: &[StripComponent],
) -> ContactArc {
    let adjacent_strip = comps.iter().any(|s| s.is_nondegenerate_strip() && s.touches(c));
    let initial_point_class = if adjacent_strip {
        InitialPointClass::FixedRegular
    } else if d.is_neg_inf() {
        InitialPointClass::FixedSuperRepelling
    } else {
        InitialPointClass::ContactNotFixed
    };
    ContactArc { c, d, r, side, exceptional: r.is_pos_inf(), initial_point_class }
}

/// Remaining time on the boundary for the arc point at height `y`.
pub fn life_time(arc: &ContactArc, y: f64) -> Result<ExtReal, ModelError> {
    if !arc.d.lt_f(y) || !arc.r.gt_f(y) {
        return Err(ModelError::DegenerateDomain(format!(
            "height {y} outside the arc interval ({}, {})",
            arc.d, arc.r
        )));
    }
    Ok(match arc.r {
        ExtReal::PosInf => ExtReal::PosInf,
        ExtReal::Finite(r) => ExtReal::Finite(r - y),
        ExtReal::NegInf => unreachable!("arc top above its bottom"),
    })
}

/// All boundary fixed points of the semigroup with their classes.
pub fn classify_fixed_points(model: &SemigroupModel) -> Vec<(String, BoundaryPointClass)> {
    match model {
        SemigroupModel::NonElliptic { lower } => classify_non_elliptic(lower),
        SemigroupModel::HyperbolicGroup { width } => {
            let lb = LowerBoundary::constant(Interval::bounded(0.0, *width), ExtReal::NegInf);
            classify_non_elliptic(&lb)
        }
        SemigroupModel::EllipticStarlike { radial }
        | SemigroupModel::EllipticSpiral { radial, .. } => {
            let mut out =
                vec![("interior fixed point at 0".to_string(), BoundaryPointClass::DenjoyWolff)];
            for comp in radial_components(radial) {
                let class = if comp.is_line() {
                    BoundaryPointClass::SuperRepelling1
                } else {
                    BoundaryPointClass::RegularBfp
                };
                out.push((format!("angular component [{}, {}]", comp.a, comp.b), class));
            }
            out
        }
        SemigroupModel::EllipticGroup { .. } => {
            vec![("interior fixed point at 0".to_string(), BoundaryPointClass::DenjoyWolff)]
        }
    }
}

fn classify_non_elliptic(lower: &LowerBoundary) -> Vec<(String, BoundaryPointClass)> {
    let mut out = vec![(
        "denjoy-wolff end (Im -> +inf)".to_string(),
        BoundaryPointClass::DenjoyWolff,
    )];
    for comp in strip_components(lower) {
        let (desc, class) = if comp.is_half_infinite() {
            (format!("half-infinite component [{}, {}]", comp.a, comp.b), BoundaryPointClass::Plain)
        } else if comp.is_line() {
            (format!("line component at Re = {}", comp.a), BoundaryPointClass::SuperRepelling1)
        } else {
            (format!("strip component [{}, {}]", comp.a, comp.b), BoundaryPointClass::RegularBfp)
        };
        out.push((desc, class));
    }
    for arc in detect_contact_arcs(lower) {
        if arc.initial_point_class != InitialPointClass::FixedSuperRepelling {
            continue;
        }
        let class = if arc.exceptional {
            BoundaryPointClass::SuperRepelling3
        } else {
            BoundaryPointClass::SuperRepelling2
        };
        out.push((format!("initial point of arc at Re = {}", arc.c), class));
    }
    out
}

/// Whether the prime end named by `descriptor` lies in the closure of the
/// union of exceptional arcs (points for which no crosscut null chain stays
/// inside a compact sub-strip).
pub fn exceptional_closure_membership(
    model: &SemigroupModel,
    descriptor: &BoundaryDescriptor,
) -> bool {
    let arcs = match model {
        SemigroupModel::NonElliptic { lower } => detect_contact_arcs(lower),
        SemigroupModel::HyperbolicGroup { width } => {
            let lb = LowerBoundary::constant(Interval::bounded(0.0, *width), ExtReal::NegInf);
            detect_contact_arcs(&lb)
        }
        // elliptic models have no exceptional arcs
        _ => return false,
    };
    let c = match descriptor {
        BoundaryDescriptor::DenjoyWolff => return false,
        BoundaryDescriptor::ArcPoint { c, .. } => *c,
        BoundaryDescriptor::ComponentEnd { x } => *x,
        BoundaryDescriptor::Graph { x } => *x,
    };
    arcs.iter().any(|a| a.exceptional && a.c == c)
}

/// Maximal angular sectors/rays surviving the contraction flow for all
/// times (mirror of `strip_components` with ρ ≡ +inf in place of β ≡ -inf).
pub fn radial_components(radial: &RadialBoundary) -> Vec<StripComponent> {
    let rho = radial.rho();
    let mut out: Vec<StripComponent> = Vec::new();
    let mut cur: Option<(ExtReal, ExtReal)> = None;
    let flush = |cur: &mut Option<(ExtReal, ExtReal)>, out: &mut Vec<StripComponent>| {
        if let Some((a, b)) = cur.take() {
            out.push(StripComponent { a, b });
        }
    };

    for i in 0..rho.pieces().len() {
        if i > 0 {
            let k = i - 1;
            let bp = rho.breakpoints()[k];
            let in_set = rho.limit_left_at(k).is_pos_inf() && rho.limit_right_at(k).is_pos_inf();
            if in_set {
                match &mut cur {
                    Some((_, b)) => *b = ExtReal::Finite(bp),
                    None => cur = Some((ExtReal::Finite(bp), ExtReal::Finite(bp))),
                }
            } else {
                flush(&mut cur, &mut out);
            }
        }
        if matches!(rho.pieces()[i], PieceExpr::PosInf) {
            let (lo, hi) = rho.subinterval(i);
            match &mut cur {
                Some((_, b)) if *b == lo => *b = hi,
                Some(_) => {
                    flush(&mut cur, &mut out);
                    cur = Some((lo, hi));
                }
                None => cur = Some((lo, hi)),
            }
        } else {
            flush(&mut cur, &mut out);
        }
    }
    flush(&mut cur, &mut out);

    // merge across the seam θ = 0 ≡ 2π
    if out.len() >= 2 {
        let first_at_seam = out.first().is_some_and(|s| s.a == ExtReal::Finite(0.0));
        let last_at_seam = out.last().is_some_and(|s| s.b == ExtReal::Finite(TWO_PI));
        let seam_in_set = rho.limit_at_lo().is_pos_inf() && rho.limit_at_hi().is_pos_inf();
        if first_at_seam && last_at_seam && seam_in_set {
            let first = out.remove(0);
            let last = out.last_mut().unwrap();
            // wrapped component expressed with b beyond 2π
            last.b = ExtReal::Finite(first.b.finite().unwrap() + TWO_PI);
        }
    }
    out
}

/// Full boundary report for one model.
pub fn boundary_report(model: &SemigroupModel) -> BoundaryReport {
    let (components, arcs) = match model {
        SemigroupModel::NonElliptic { lower } => {
            (strip_components(lower), detect_contact_arcs(lower))
        }
        SemigroupModel::HyperbolicGroup { width } => {
            let lb = LowerBoundary::constant(Interval::bounded(0.0, *width), ExtReal::NegInf);
            (strip_components(&lb), detect_contact_arcs(&lb))
        }
        SemigroupModel::EllipticStarlike { radial }
        | SemigroupModel::EllipticSpiral { radial, .. } => (radial_components(radial), Vec::new()),
        SemigroupModel::EllipticGroup { .. } => (Vec::new(), Vec::new()),
    };
    let fixed_points = classify_fixed_points(model);
    let exceptional_set_nonempty = arcs.iter().any(|a| a.exceptional);
    BoundaryReport { components, arcs, fixed_points, exceptional_set_nonempty }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::piecewise::PiecewiseFn;

    fn lower(domain: Interval, bps: Vec<f64>, pieces: Vec<PieceExpr>) -> LowerBoundary {
        LowerBoundary::new(PiecewiseFn::new(domain, bps, pieces).unwrap()).unwrap()
    }

    #[test]
    fn strip_component_basic() {
        let lb = lower(
            Interval::bounded(0.0, 3.0),
            vec![1.0, 2.0],
            vec![PieceExpr::Const(0.0), PieceExpr::NegInf, PieceExpr::Const(0.0)],
        );
        let comps = strip_components(&lb);
        assert_eq!(
            comps,
            vec![StripComponent { a: ExtReal::Finite(1.0), b: ExtReal::Finite(2.0) }]
        );
        assert!(comps[0].is_nondegenerate_strip());
    }

    #[test]
    fn strip_components_empty_for_finite_beta() {
        let lb = LowerBoundary::constant(Interval::bounded(0.0, 1.0), ExtReal::Finite(0.0));
        assert!(strip_components(&lb).is_empty());
    }

    #[test]
    fn strip_component_line_from_log_cusp() {
        // β = ln(1-x)·1 on (0,1) [limit -inf at 1⁻] and ln(x-1) on (1,2)
        // [limit -inf at 1⁺]: degenerate line component {1}
        let lb = lower(
            Interval::bounded(0.0, 2.0),
            vec![1.0],
            vec![
                // ln(-(x-1)) is outside the family; use b/(x-x0) with sign
                // giving -inf: 1/(x-1) has left limit -inf at 1
                PieceExpr::Recip { a: 0.0, b: 1.0, x0: 1.0 },
                PieceExpr::Log { a: 0.0, b: 1.0, x0: 1.0 },
            ],
        );
        let comps = strip_components(&lb);
        assert_eq!(comps, vec![StripComponent { a: ExtReal::Finite(1.0), b: ExtReal::Finite(1.0) }]);
        assert!(comps[0].is_line());
    }

    #[test]
    fn full_strip_group_components() {
        let lb = LowerBoundary::constant(Interval::bounded(0.0, 1.0), ExtReal::NegInf);
        let comps = strip_components(&lb);
        assert_eq!(comps, vec![StripComponent { a: ExtReal::Finite(0.0), b: ExtReal::Finite(1.0) }]);
    }

    #[test]
    fn arcs_interior_jump() {
        let lb = lower(
            Interval::bounded(0.0, 2.0),
            vec![1.0],
            vec![PieceExpr::Const(0.0), PieceExpr::Const(-3.0)],
        );
        let arcs = detect_contact_arcs(&lb);
        // endpoint arcs at 0 and 2 plus the jump at 1
        let jump: Vec<_> = arcs.iter().filter(|a| a.c == 1.0).collect();
        assert_eq!(jump.len(), 1);
        let a = jump[0];
        assert_eq!(a.d, ExtReal::Finite(-3.0));
        assert_eq!(a.r, ExtReal::Finite(0.0));
        assert_eq!(a.side, Side::Right);
        assert!(!a.exceptional);
        assert_eq!(a.initial_point_class, InitialPointClass::ContactNotFixed);
    }

    #[test]
    fn arc_exceptional_third_type() {
        // β(x) = -1/x on (0,1)
        let lb = lower(
            Interval::bounded(0.0, 1.0),
            vec![],
            vec![PieceExpr::Recip { a: 0.0, b: -1.0, x0: 0.0 }],
        );
        let arcs = detect_contact_arcs(&lb);
        let at0: Vec<_> = arcs.iter().filter(|a| a.c == 0.0).collect();
        assert_eq!(at0.len(), 1);
        assert!(at0[0].exceptional);
        assert_eq!(at0[0].d, ExtReal::NegInf);
        assert_eq!(at0[0].initial_point_class, InitialPointClass::FixedSuperRepelling);
        // at the other endpoint β → -1: contact-not-fixed exceptional arc
        let at1: Vec<_> = arcs.iter().filter(|a| a.c == 1.0).collect();
        assert_eq!(at1.len(), 1);
        assert_eq!(at1[0].d, ExtReal::Finite(-1.0));
        assert_eq!(at1[0].initial_point_class, InitialPointClass::ContactNotFixed);
    }

    #[test]
    fn arc_endpoint_suppressed_when_beta_blows_up() {
        // β(x) = 1/x on (0,1): limit +inf at 0, no arc there
        let lb = lower(
            Interval::bounded(0.0, 1.0),
            vec![],
            vec![PieceExpr::Recip { a: 0.0, b: 1.0, x0: 0.0 }],
        );
        let arcs = detect_contact_arcs(&lb);
        assert!(arcs.iter().all(|a| a.c != 0.0));
        // at 1: limit 1, exceptional arc with contact-not-fixed initial point
        assert!(arcs.iter().any(|a| a.c == 1.0 && a.exceptional));
    }

    #[test]
    fn hyperbolic_group_arcs_regular() {
        let lb = LowerBoundary::constant(Interval::bounded(0.0, 1.0), ExtReal::NegInf);
        let arcs = detect_contact_arcs(&lb);
        assert_eq!(arcs.len(), 2);
        for a in &arcs {
            assert!(a.exceptional);
            assert_eq!(a.initial_point_class, InitialPointClass::FixedRegular);
        }
    }

    #[test]
    fn life_time_values() {
        let arc = ContactArc {
            c: 1.0,
            d: ExtReal::Finite(-3.0),
            r: ExtReal::Finite(0.0),
            side: Side::Right,
            exceptional: false,
            initial_point_class: InitialPointClass::ContactNotFixed,
        };
        assert_eq!(life_time(&arc, -1.0).unwrap(), ExtReal::Finite(1.0));
        assert!(life_time(&arc, 0.5).is_err());
        let exc = ContactArc { r: ExtReal::PosInf, exceptional: true, ..arc };
        assert_eq!(life_time(&exc, 100.0).unwrap(), ExtReal::PosInf);
    }

    #[test]
    fn life_time_monotone_from_data() {
        let arc = ContactArc {
            c: 1.0,
            d: ExtReal::Finite(-5.0),
            r: ExtReal::Finite(2.0),
            side: Side::Left,
            exceptional: false,
            initial_point_class: InitialPointClass::ContactNotFixed,
        };
        let mut prev = f64::INFINITY;
        for i in 1..40 {
            let y = -5.0 + 7.0 * i as f64 / 40.0;
            let t = life_time(&arc, y).unwrap().finite().unwrap();
            assert!(t < prev);
            prev = t;
        }
    }

    #[test]
    fn classify_paper_examples() {
        // β = 1/x on (0,1): only the attracting end
        let lb = lower(
            Interval::bounded(0.0, 1.0),
            vec![],
            vec![PieceExpr::Recip { a: 0.0, b: 1.0, x0: 0.0 }],
        );
        let fps = classify_fixed_points(&SemigroupModel::NonElliptic { lower: lb });
        assert_eq!(fps.len(), 1);
        assert_eq!(fps[0].1, BoundaryPointClass::DenjoyWolff);

        // full strip: attracting end + one regular bfp
        let m = SemigroupModel::HyperbolicGroup { width: 1.0 };
        let fps = classify_fixed_points(&m);
        assert_eq!(fps.len(), 2);
        assert_eq!(fps[1].1, BoundaryPointClass::RegularBfp);

        // β = -1/x on (0,1): attracting end + one third-type point
        let lb = lower(
            Interval::bounded(0.0, 1.0),
            vec![],
            vec![PieceExpr::Recip { a: 0.0, b: -1.0, x0: 0.0 }],
        );
        let fps = classify_fixed_points(&SemigroupModel::NonElliptic { lower: lb });
        assert_eq!(fps.len(), 2);
        assert_eq!(fps[1].1, BoundaryPointClass::SuperRepelling3);
    }

    #[test]
    fn exceptional_membership() {
        let lb = lower(
            Interval::bounded(0.0, 1.0),
            vec![0.5],
            vec![
                PieceExpr::Recip { a: 0.0, b: -1.0, x0: 0.0 },
                PieceExpr::Recip { a: 0.0, b: -1.0, x0: 0.0 },
            ],
        );
        let m = SemigroupModel::NonElliptic { lower: lb };
        assert!(exceptional_closure_membership(
            &m,
            &BoundaryDescriptor::ArcPoint { c: 0.0, y: -3.0 }
        ));
        assert!(!exceptional_closure_membership(&m, &BoundaryDescriptor::Graph { x: 0.5 }));
        assert!(!exceptional_closure_membership(&m, &BoundaryDescriptor::DenjoyWolff));

        let flat = SemigroupModel::NonElliptic {
            lower: LowerBoundary::constant(Interval::real_line(), ExtReal::Finite(0.0)),
        };
        assert!(!exceptional_closure_membership(&flat, &BoundaryDescriptor::Graph { x: 3.0 }));
    }

    #[test]
    fn radial_components_sector_and_ray() {
        use crate::piecewise::BreakpointRule;
        let dom = Interval::bounded(0.0, TWO_PI);
        let rho = PiecewiseFn::with_rule(
            dom,
            vec![std::f64::consts::FRAC_PI_2],
            vec![PieceExpr::PosInf, PieceExpr::Const(1.0)],
            BreakpointRule::LowerEnvelope,
        )
        .unwrap();
        let comps = radial_components(&RadialBoundary::new(rho).unwrap());
        assert_eq!(
            comps,
            vec![StripComponent {
                a: ExtReal::Finite(0.0),
                b: ExtReal::Finite(std::f64::consts::FRAC_PI_2)
            }]
        );

        let rho = PiecewiseFn::with_rule(
            Interval::bounded(0.0, TWO_PI),
            vec![],
            vec![PieceExpr::Const(1.0)],
            BreakpointRule::LowerEnvelope,
        )
        .unwrap();
        assert!(radial_components(&RadialBoundary::new(rho).unwrap()).is_empty());
    }

    /// Brute-force oracle: grid membership of the surviving set.
    #[test]
    fn strip_components_grid_oracle() {
        use crate::model::membership;
        use crate::model::Membership;
        use num_complex::Complex64;

        let cases: Vec<LowerBoundary> = vec![
            lower(
                Interval::bounded(0.0, 3.0),
                vec![1.0, 2.0],
                vec![PieceExpr::Const(0.0), PieceExpr::NegInf, PieceExpr::Const(0.0)],
            ),
            LowerBoundary::constant(Interval::bounded(0.0, 1.0), ExtReal::NegInf),
            LowerBoundary::constant(Interval::bounded(0.0, 1.0), ExtReal::Finite(0.0)),
            lower(
                Interval::bounded(0.0, 4.0),
                vec![1.0, 2.0, 3.0],
                vec![
                    PieceExpr::NegInf,
                    PieceExpr::Const(1.0),
                    PieceExpr::NegInf,
                    PieceExpr::Affine { a: 0.0, b: 1.0 },
                ],
            ),
        ];
        for lb in &cases {
            let comps = strip_components(lb);
            let m = SemigroupModel::NonElliptic { lower: lb.clone() };
            let dom = lb.domain();
            let (lo, hi) = (dom.lo.finite().unwrap(), dom.hi.finite().unwrap());
            let n = 400;
            let y0 = 5.0;
            for ix in 0..n {
                let x = lo + (hi - lo) * (ix as f64 + 0.5) / n as f64;
                // (x, y0) ∈ Q + it ⟺ (x, y0 - t) ∈ Q; sample t = 0..50
                let survives = (0..=50).all(|t| {
                    membership(&m, Complex64::new(x, y0 - t as f64)) == Membership::Interior
                });
                let predicted = comps
                    .iter()
                    .any(|c| c.a.lt_f(x) && c.b.gt_f(x));
                assert_eq!(survives, predicted, "mismatch at x = {x}");
            }
        }
    }

    #[test]
    fn report_counts_exceptional() {
        let lb = lower(
            Interval::bounded(0.0, 1.0),
            vec![],
            vec![PieceExpr::Recip { a: 0.0, b: -1.0, x0: 0.0 }],
        );
        let rep = boundary_report(&SemigroupModel::NonElliptic { lower: lb });
        assert!(rep.exceptional_set_nonempty);
        assert!(rep.arcs.iter().filter(|a| a.exceptional).count() <= 2);

        let rep = boundary_report(&SemigroupModel::EllipticGroup { theta: 1.0 });
        assert!(!rep.exceptional_set_nonempty);
    }
}
