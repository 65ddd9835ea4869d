//! Property-based invariants over randomized models and conjugations.

use num_complex::Complex64;
use proptest::prelude::*;

use semidisc::{
    apply_shear, detect_contact_arcs, flow, life_time, membership, pushforward_boundary,
    ExtReal, Interval, LowerBoundary, Membership, PieceExpr, PiecewiseFn, SemigroupModel,
    ShearMap,
};

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[derive(Clone, Debug)]
struct ModelCase {
    lower: LowerBoundary,
    width: f64,
}

fn arb_piece() -> impl Strategy<Value = PieceExpr> {
    prop_oneof![
        (-5.0..5.0f64).prop_map(PieceExpr::Const),
        (-4.0..4.0f64, -2.0..2.0f64).prop_map(|(a, b)| PieceExpr::Affine { a, b }),
        Just(PieceExpr::NegInf),
    ]
}

fn arb_model() -> impl Strategy<Value = ModelCase> {
    (1.0..4.0f64, proptest::collection::vec(arb_piece(), 1..=3), 0.2..0.8f64).prop_map(
        |(width, pieces, split)| {
            let n = pieces.len();
            let bps: Vec<f64> = match n {
                1 => vec![],
                2 => vec![width * split],
                _ => {
                    let a = width * split * 0.5;
                    let b = width * (0.5 + split * 0.5);
                    vec![a, b]
                }
            };
            let beta =
                PiecewiseFn::new(Interval::bounded(0.0, width), bps, pieces).unwrap();
            ModelCase { lower: LowerBoundary::new(beta).unwrap(), width }
        },
    )
}

/// An interior point of the model: above the boundary at the given abscissa
/// fraction.
fn interior_point(case: &ModelCase, fx: f64, lift: f64) -> Complex64 {
    let x = case.width * fx;
    let base = match case.lower.beta().eval(x) {
        ExtReal::Finite(b) => b,
        _ => -10.0,
    };
    c64(x, base + 0.1 + lift)
}

fn arb_shear() -> impl Strategy<Value = (f64, f64, f64)> {
    // slope of u (positive), intercept of u, constant displacement
    (0.25..4.0f64, -3.0..3.0f64, -5.0..5.0f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    /// The translation flow obeys the semigroup law exactly where defined.
    #[test]
    fn flow_semigroup_law(
        case in arb_model(),
        fx in 0.05..0.95f64,
        lift in 0.0..3.0f64,
        t in 0.0..2.0f64,
        s in 0.0..2.0f64,
    ) {
        let m = SemigroupModel::NonElliptic { lower: case.lower.clone() };
        let w = interior_point(&case, fx, lift);
        prop_assume!(membership(&m, w) == Membership::Interior);
        let one = flow(&m, w, t + s).unwrap();
        let mid = flow(&m, w, t).unwrap();
        let two = flow(&m, mid, s).unwrap();
        prop_assert!((one - two).norm() <= 1e-12);
    }

    /// Shears commute with vertical translation.
    #[test]
    fn shear_equivariance(
        case in arb_model(),
        (slope, intercept, disp) in arb_shear(),
        fx in 0.05..0.95f64,
        y in -5.0..5.0f64,
        t in 0.0..4.0f64,
    ) {
        let domain = case.lower.domain();
        let u = PiecewiseFn::constant(domain, PieceExpr::Affine { a: intercept, b: slope });
        let v = PiecewiseFn::constant(domain, PieceExpr::Const(disp));
        let tau = ShearMap::new(u, v).unwrap();
        let w = c64(case.width * fx, y);
        let lhs = apply_shear(&tau, w + c64(0.0, t)).unwrap();
        let rhs = apply_shear(&tau, w).unwrap() + c64(0.0, t);
        prop_assert!((lhs - rhs).norm() <= 1e-12);
    }

    /// Pushing the boundary forward by a vertical shear and then by its
    /// inverse restores the original boundary function.
    #[test]
    fn vertical_shear_round_trip(
        case in arb_model(),
        disp_a in -3.0..3.0f64,
        disp_b in -1.0..1.0f64,
        fx in 0.05..0.95f64,
    ) {
        let domain = case.lower.domain();
        let mk = |a: f64, b: f64| {
            ShearMap::vertical(PiecewiseFn::constant(domain, PieceExpr::Affine { a, b }))
                .unwrap()
        };
        let there = pushforward_boundary(&case.lower, &mk(disp_a, disp_b)).unwrap();
        let back = pushforward_boundary(&there, &mk(-disp_a, -disp_b)).unwrap();
        let x = case.width * fx;
        match (case.lower.beta().eval(x), back.beta().eval(x)) {
            (ExtReal::Finite(b1), ExtReal::Finite(b2)) => {
                prop_assert!((b1 - b2).abs() <= 1e-9, "{b1} vs {b2}");
            }
            (l, r) => prop_assert!(l == r),
        }
    }

    /// Life-time decreases along every arc and is infinite exactly on
    /// exceptional arcs.
    #[test]
    fn life_time_monotone(case in arb_model(), f1 in 0.1..0.45f64, f2 in 0.55..0.9f64) {
        for arc in detect_contact_arcs(&case.lower) {
            let lo = match arc.d {
                ExtReal::Finite(d) => d,
                _ => match arc.r {
                    ExtReal::Finite(r) => r - 10.0,
                    _ => -10.0,
                },
            };
            let hi = match arc.r {
                ExtReal::Finite(r) => r,
                _ => lo + 10.0,
            };
            let y1 = lo + (hi - lo) * f1;
            let y2 = lo + (hi - lo) * f2;
            let t1 = life_time(&arc, y1).unwrap();
            let t2 = life_time(&arc, y2).unwrap();
            if arc.exceptional {
                prop_assert!(t1 == ExtReal::PosInf && t2 == ExtReal::PosInf);
            } else {
                prop_assert!(t1.cmp_ext(t2) == std::cmp::Ordering::Greater);
            }
        }
    }
}
