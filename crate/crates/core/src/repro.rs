//! Reproductions of the counterexamples: each routine runs a hard-coded
//! scenario and asserts its distinguishing numerical fact.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::boundary::{boundary_report, BoundaryPointClass, InitialPointClass};
use crate::catalog;
use crate::conformal::{build_map, cluster_points, strip_map_oracle_inv};
use crate::conjugation::pushforward_boundary;
use crate::error::{ConformalError, ConjugationError, ModelError};
use crate::model::SemigroupModel;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExampleId {
    DwNoLimit,
    BrfpNoLimit,
    ExceptionalCollapse,
    OmegaLimit,
    EllipticGroupNoExtension,
}

pub const ALL_EXAMPLES: [ExampleId; 5] = [
    ExampleId::DwNoLimit,
    ExampleId::BrfpNoLimit,
    ExampleId::ExceptionalCollapse,
    ExampleId::OmegaLimit,
    ExampleId::EllipticGroupNoExtension,
];

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ExampleId::DwNoLimit => "dw-no-limit",
            ExampleId::BrfpNoLimit => "brfp-no-limit",
            ExampleId::ExceptionalCollapse => "exceptional-collapse",
            ExampleId::OmegaLimit => "omega-limit",
            ExampleId::EllipticGroupNoExtension => "elliptic-group-no-extension",
        };
        f.write_str(s)
    }
}

impl FromStr for ExampleId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dw-no-limit" => Ok(ExampleId::DwNoLimit),
            "brfp-no-limit" => Ok(ExampleId::BrfpNoLimit),
            "exceptional-collapse" => Ok(ExampleId::ExceptionalCollapse),
            "omega-limit" => Ok(ExampleId::OmegaLimit),
            "elliptic-group-no-extension" => Ok(ExampleId::EllipticGroupNoExtension),
            other => Err(format!(
                "unknown example id `{other}`; expected one of dw-no-limit, brfp-no-limit, \
                 exceptional-collapse, omega-limit, elliptic-group-no-extension"
            )),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ReproError {
    #[error(transparent)]
    Conformal(#[from] ConformalError),
    #[error(transparent)]
    Conjugation(#[from] ConjugationError),
    #[error("model error during reproduction: {0}")]
    Model(#[from] ModelError),
}

/// One checked numerical fact.
#[derive(Clone, Debug, Serialize)]
pub struct Finding {
    pub name: String,
    pub detail: String,
    pub pass: bool,
}

impl Finding {
    fn new(name: &str, detail: String, pass: bool) -> Self {
        Finding { name: name.to_string(), detail, pass }
    }
}

/// A labeled point sequence kept for plotting.
#[derive(Clone, Debug, Serialize)]
pub struct LabeledPoints {
    pub label: String,
    pub points: Vec<Complex64>,
}

impl LabeledPoints {
    fn new(label: &str, points: Vec<Complex64>) -> Self {
        LabeledPoints { label: label.to_string(), points }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReproOutcome {
    pub example: String,
    pub pass: bool,
    pub findings: Vec<Finding>,
    pub traces: Vec<LabeledPoints>,
}

impl ReproOutcome {
    fn collect(example: ExampleId, findings: Vec<Finding>, traces: Vec<LabeledPoints>) -> Self {
        let pass = findings.iter().all(|f| f.pass);
        ReproOutcome { example: example.to_string(), pass, findings, traces }
    }
}

/// Run one reproduction at the given boundary sampling resolution.
pub fn reproduce(id: ExampleId, resolution: usize) -> Result<ReproOutcome, ReproError> {
    match id {
        ExampleId::DwNoLimit => dw_no_limit(resolution),
        ExampleId::BrfpNoLimit => brfp_no_limit(),
        ExampleId::ExceptionalCollapse => exceptional_collapse(resolution),
        ExampleId::OmegaLimit => omega_limit(resolution),
        ExampleId::EllipticGroupNoExtension => elliptic_group_no_extension(),
    }
}

fn lower_of(model: &SemigroupModel) -> &crate::model::LowerBoundary {
    match model {
        SemigroupModel::NonElliptic { lower } => lower,
        _ => unreachable!("reproductions use translation models"),
    }
}

/// No unrestricted limit at the Denjoy–Wolff point: for `Q = {Im z·Re z > 1}`
/// sheared by `v(x) = -1/x` onto the upper half-strip, the conjugating
/// homeomorphism has two distinct cluster values at the Denjoy–Wolff point.
fn dw_no_limit(resolution: usize) -> Result<ReproOutcome, ReproError> {
    let m1 = catalog::hyperbola_above();
    let map1 = build_map(&m1, resolution)?;
    let tau = catalog::recip_shear(-1.0);
    let lower2 = pushforward_boundary(lower_of(&m1), &tau)?;
    let m2 = SemigroupModel::NonElliptic { lower: lower2 };
    let map2 = build_map(&m2, resolution)?;

    // Denjoy–Wolff point of the target semigroup, via the central ray
    let q = map2.invert(c64(0.5, 40.0))?;

    // z_n = h⁻¹(1/n + (1+n)i) converges to the source Denjoy–Wolff point;
    // its image under the conjugation is h̃⁻¹(1/n + i)
    let mut z_seq = Vec::new();
    let mut f_seq = Vec::new();
    for n in 2..=40 {
        let n = n as f64;
        if n <= 30.0 {
            z_seq.push(map1.invert(c64(1.0 / n, 1.0 + n))?);
        }
        f_seq.push(map2.invert(c64(1.0 / n, 1.0))?);
    }
    // a second approach sequence along the central ray, whose image tends
    // to the target Denjoy–Wolff point
    let mut central = Vec::new();
    for m in 3..=30 {
        central.push(map2.invert(c64(0.5, m as f64 - 1.0))?);
    }

    let a = *f_seq.last().unwrap();
    let sep = (a - q).norm();
    // interleave the settled tails of the two approach sequences so both
    // limit points survive the tail restriction of the clustering
    let combined: Vec<Complex64> = f_seq[f_seq.len() - 10..]
        .iter()
        .zip(&central[central.len() - 10..])
        .flat_map(|(&a, &b)| [a, b])
        .collect();
    let clusters = cluster_points(&combined, 0.05);

    let findings = vec![
        Finding::new(
            "cluster-separation",
            format!("|limit along the lateral sequence - Denjoy-Wolff point| = {sep:.4} > 0.1"),
            sep > 0.1,
        ),
        Finding::new(
            "two-clusters",
            format!("combined approach sequences split into {} clusters", clusters.len()),
            clusters.len() == 2,
        ),
    ];
    let traces = vec![
        LabeledPoints::new("source-sequence", z_seq),
        LabeledPoints::new("conjugated-sequence", f_seq),
        LabeledPoints::new("central-sequence", central),
        LabeledPoints::new("denjoy-wolff", vec![q]),
    ];
    Ok(ReproOutcome::collect(ExampleId::DwNoLimit, findings, traces))
}

/// No unrestricted limit at a boundary regular fixed point starting an
/// exceptional arc: for the strip group sheared by `v(x) = 1/x`, the
/// conjugation has radial limit `-1` at `-1` but tends to `h⁻¹(0) = i`
/// along a tangential curve.
fn brfp_no_limit() -> Result<ReproOutcome, ReproError> {
    // everything is closed-form through the strip map oracle:
    // f(h⁻¹(w)) = h⁻¹(w + i/Re w)
    let mut radial = Vec::new();
    for s in 1..=30 {
        let s = s as f64;
        radial.push(strip_map_oracle_inv(c64(0.5, 2.0 - s)));
    }
    let mut tangential = Vec::new();
    for k in 1..=8 {
        let s = 1.0 - 10f64.powi(-k);
        // γ(s) = (1-s) + i(s-1)⁻¹, and τ(γ(s)) = 1-s
        tangential.push(strip_map_oracle_inv(c64(1.0 - s, 0.0)));
    }
    let r_lim = *radial.last().unwrap();
    let t_lim = *tangential.last().unwrap();
    let sep = (r_lim - t_lim).norm();
    let findings = vec![
        Finding::new(
            "radial-limit",
            format!("radial limit {r_lim:.6} is the fixed point -1"),
            (r_lim - c64(-1.0, 0.0)).norm() < 1e-2,
        ),
        Finding::new(
            "tangential-limit",
            format!("tangential limit {t_lim:.6} equals the oracle preimage of 0 (= i)"),
            (t_lim - c64(0.0, 1.0)).norm() < 1e-2,
        ),
        Finding::new(
            "separation",
            format!("|radial limit - tangential limit| = {sep:.4} > 0.1"),
            sep > 0.1,
        ),
    ];
    let traces = vec![
        LabeledPoints::new("radial-approach", radial),
        LabeledPoints::new("tangential-approach", tangential),
    ];
    Ok(ReproOutcome::collect(ExampleId::BrfpNoLimit, findings, traces))
}

fn has_non_dw_fixed_point(report: &crate::boundary::BoundaryReport) -> bool {
    report.fixed_points.iter().any(|(_, class)| {
        !matches!(
            class,
            BoundaryPointClass::DenjoyWolff
                | BoundaryPointClass::ContactPoint
                | BoundaryPointClass::Plain
        )
    })
}

/// Exceptional arcs are not preserved within the hyperbolic class: shearing
/// `Q = {Im z·Re z > -1}` by `v(x) = 2/x` leaves no fixed point besides the
/// Denjoy–Wolff point (the exceptional arc collapses onto it), while
/// `v(x) = 1/x` produces an exceptional arc with a non-fixed initial point.
fn exceptional_collapse(resolution: usize) -> Result<ReproOutcome, ReproError> {
    let base = catalog::hyperbola_below();
    let report0 = boundary_report(&base);
    let sr3_present = report0
        .fixed_points
        .iter()
        .any(|(_, class)| matches!(class, BoundaryPointClass::SuperRepelling3));

    let lower_v2 = pushforward_boundary(lower_of(&base), &catalog::recip_shear(2.0))?;
    let m_v2 = SemigroupModel::NonElliptic { lower: lower_v2 };
    let report_v2 = boundary_report(&m_v2);

    let lower_v1 = pushforward_boundary(lower_of(&base), &catalog::recip_shear(1.0))?;
    let m_v1 = SemigroupModel::NonElliptic { lower: lower_v1 };
    let report_v1 = boundary_report(&m_v1);

    let v1_has_contact_not_fixed_exceptional = report_v1.arcs.iter().any(|arc| {
        arc.exceptional && arc.initial_point_class == InitialPointClass::ContactNotFixed
    });

    // numerical collapse under v = 2/x: the image of the exceptional arc
    // clusters at the target Denjoy–Wolff point
    let map_v2 = build_map(&m_v2, resolution)?;
    let q2 = map_v2.invert(c64(0.5, 30.0))?;
    let eps = 1e-2;
    let mut arc_images = Vec::new();
    for y in [1.0, 2.0, 3.0] {
        // τ(ε + iy) = ε + i(y + 1/ε) after the shear by 2/ε against β = -1/ε
        arc_images.push(map_v2.invert(c64(eps, y + 1.0 / eps))?);
    }
    let max_dist_to_dw =
        arc_images.iter().map(|z| (z - q2).norm()).fold(0.0f64, f64::max);

    let findings = vec![
        Finding::new(
            "base-sr3",
            "the base domain has a super-repelling fixed point of third type".to_string(),
            sr3_present,
        ),
        Finding::new(
            "v2-no-fixed-point",
            "after shearing by 2/x the only fixed point is the Denjoy-Wolff point".to_string(),
            !has_non_dw_fixed_point(&report_v2),
        ),
        Finding::new(
            "v2-arc-collapse",
            format!(
                "images of the exceptional arc lie within {max_dist_to_dw:.2e} of the \
                 Denjoy-Wolff point"
            ),
            max_dist_to_dw < 0.1,
        ),
        Finding::new(
            "v1-contact-not-fixed",
            "after shearing by 1/x an exceptional arc survives with a contact, non-fixed \
             initial point"
                .to_string(),
            v1_has_contact_not_fixed_exceptional && !has_non_dw_fixed_point(&report_v1),
        ),
    ];
    let traces = vec![
        LabeledPoints::new("arc-images", arc_images),
        LabeledPoints::new("denjoy-wolff", vec![q2]),
    ];
    Ok(ReproOutcome::collect(ExampleId::ExceptionalCollapse, findings, traces))
}

/// The ω-limit of the conjugation on an exceptional arc: shearing the upper
/// half-strip by `v(x) = -1/x` sends the whole lateral arc to the single
/// initial fixed point of the target's exceptional arc.
fn omega_limit(resolution: usize) -> Result<ReproOutcome, ReproError> {
    let m1 = catalog::upper_half_strip();
    let map1 = build_map(&m1, resolution)?;
    let tau = catalog::recip_shear(-1.0);
    let lower2 = pushforward_boundary(lower_of(&m1), &tau)?;
    let m2 = SemigroupModel::NonElliptic { lower: lower2 };
    let map2 = build_map(&m2, resolution)?;
    let report1 = boundary_report(&m1);
    let report2 = boundary_report(&m2);

    let source_arc_not_fixed = report1.arcs.iter().any(|arc| {
        arc.exceptional && arc.initial_point_class == InitialPointClass::ContactNotFixed
    });
    let target_arc_fixed = report2
        .fixed_points
        .iter()
        .any(|(_, class)| matches!(class, BoundaryPointClass::SuperRepelling3));

    let eps = 1e-2;
    // heights are kept small: arc points compress exponentially in the disc
    let heights = [0.2, 0.6, 1.4];
    let mut originals = Vec::new();
    let mut images = Vec::new();
    for y in heights {
        originals.push(map1.invert(c64(eps, y))?);
        // τ(ε + iy) = ε + i(y - 1/ε)
        images.push(map2.invert(c64(eps, y - 1.0 / eps))?);
    }
    // the initial point of the target's exceptional arc, approached along
    // a mid-hyperbola curve
    let s = 5e-3;
    let x0 = map2.invert(c64(s, -0.5 / s))?;

    let mut min_orig_sep = f64::INFINITY;
    let mut max_img_sep: f64 = 0.0;
    for i in 0..originals.len() {
        for j in (i + 1)..originals.len() {
            min_orig_sep = min_orig_sep.min((originals[i] - originals[j]).norm());
            max_img_sep = max_img_sep.max((images[i] - images[j]).norm());
        }
    }
    let max_dist_to_x0 = images.iter().map(|z| (z - x0).norm()).fold(0.0f64, f64::max);

    let findings = vec![
        Finding::new(
            "contrasting-initial-points",
            "the source arc starts at a contact non-fixed point; the target arc starts at a \
             super-repelling fixed point of third type"
                .to_string(),
            source_arc_not_fixed && target_arc_fixed,
        ),
        Finding::new(
            "arc-spread",
            format!("sampled source arc points are spread (min separation {min_orig_sep:.3})"),
            min_orig_sep > 0.1,
        ),
        Finding::new(
            "image-collapse",
            format!(
                "their conjugation images collapse (max separation {max_img_sep:.2e}, within \
                 {max_dist_to_x0:.2e} of the target initial point)"
            ),
            max_img_sep < 0.05 && max_dist_to_x0 < 0.05,
        ),
    ];
    let traces = vec![
        LabeledPoints::new("arc-points", originals),
        LabeledPoints::new("arc-images", images),
        LabeledPoints::new("target-initial-point", vec![x0]),
    ];
    Ok(ReproOutcome::collect(ExampleId::OmegaLimit, findings, traces))
}

/// The rotation group admits a conjugating homeomorphism
/// `f(z) = z·exp(i·ln(1-|z|))` with no continuous extension to any
/// boundary point: it commutes with every rotation exactly, yet its values
/// along a radius wind around the circle.
fn elliptic_group_no_extension() -> Result<ReproOutcome, ReproError> {
    let f = |z: Complex64| {
        if z.norm() == 0.0 {
            z
        } else {
            z * (c64(0.0, (1.0 - z.norm()).ln())).exp()
        }
    };

    // exact commutation with the rotation group on a sample grid
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let r = 0.95 * ((i % 14) as f64 + 0.5) / 14.0;
        let z = Complex64::from_polar(r, 0.37 * i as f64);
        let theta = 0.61 * i as f64;
        let rot = Complex64::from_polar(1.0, theta);
        let lhs = f(rot * z);
        let rhs = rot * f(z);
        worst = worst.max((lhs - rhs).norm());
    }

    // radial values wind: cluster the images of r_k = 1 - e^(-0.7k)
    let p = Complex64::from_polar(1.0, 0.3);
    let mut radial_images = Vec::new();
    for k in 1..=25 {
        let r = 1.0 - (-0.7 * k as f64).exp();
        radial_images.push(f(r * p));
    }
    let clusters = cluster_points(&radial_images, 0.3);

    let findings = vec![
        Finding::new(
            "rotation-commutation",
            format!("max |f(e^(it)z) - e^(it)f(z)| = {worst:.2e} over 200 samples"),
            worst <= 1e-12,
        ),
        Finding::new(
            "radial-winding",
            format!("radial images split into {} clusters (need at least 3)", clusters.len()),
            clusters.len() >= 3,
        ),
    ];
    let traces = vec![
        LabeledPoints::new("radial-images", radial_images),
        LabeledPoints::new("clusters", clusters),
    ];
    Ok(ReproOutcome::collect(ExampleId::EllipticGroupNoExtension, findings, traces))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_ids_round_trip() {
        for id in ALL_EXAMPLES {
            assert_eq!(id.to_string().parse::<ExampleId>().unwrap(), id);
        }
        assert!("no-such-example".parse::<ExampleId>().is_err());
    }

    #[test]
    fn all_examples_pass() {
        for id in ALL_EXAMPLES {
            let outcome = reproduce(id, 200).unwrap();
            assert!(
                outcome.pass,
                "{} failed: {:?}",
                outcome.example,
                outcome.findings.iter().filter(|f| !f.pass).collect::<Vec<_>>()
            );
        }
    }
}
