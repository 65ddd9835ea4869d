//! Scenario file format: TOML with expression strings for piecewise data.

use std::path::PathBuf;

use num_complex::Complex64;
use serde::Deserialize;

use semidisc::{
    BreakpointRule, ExampleId, ExtReal, Interval, LowerBoundary, PieceExpr, PiecewiseFn,
    RadialBoundary, SemigroupModel, ShearMap,
};

use crate::expr::{parse_interval, parse_piece};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub model: ModelSpec,
    pub conjugation: Option<ConjugationSpec>,
    #[serde(default)]
    pub tasks: Vec<String>,
    pub output: Option<OutputSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub kind: String,
    pub beta: Option<Vec<PieceSpec>>,
    pub rho: Option<Vec<PieceSpec>>,
    pub width: Option<f64>,
    pub theta: Option<f64>,
    /// Elliptic rate as `[re, im]`, `re < 0`.
    pub lambda: Option<[f64; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSpec {
    pub on: String,
    pub expr: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConjugationSpec {
    pub u: Option<Vec<PieceSpec>>,
    pub v: Option<Vec<PieceSpec>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: Option<PathBuf>,
    pub formats: Option<Vec<String>>,
}

/// A task from the fixed vocabulary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Task {
    Classify,
    Arcs,
    Lifetimes,
    Conjugate,
    Verify,
    Trace,
    Cluster,
    Reproduce(ExampleId),
}

impl Task {
    pub fn parse(s: &str) -> Result<Task, String> {
        let mut words = s.split_whitespace();
        let head = words.next().unwrap_or("");
        let rest: Vec<&str> = words.collect();
        let simple = |t: Task| {
            if rest.is_empty() {
                Ok(t)
            } else {
                Err(format!("task `{head}` takes no argument"))
            }
        };
        match head {
            "classify" => simple(Task::Classify),
            "arcs" => simple(Task::Arcs),
            "lifetimes" => simple(Task::Lifetimes),
            "conjugate" => simple(Task::Conjugate),
            "verify" => simple(Task::Verify),
            "trace" => simple(Task::Trace),
            "cluster" => simple(Task::Cluster),
            "reproduce" => match rest.as_slice() {
                [id] => Ok(Task::Reproduce(id.parse()?)),
                _ => Err("task `reproduce` needs exactly one example id".to_string()),
            },
            other => Err(format!(
                "unknown task `{other}`; expected classify, arcs, lifetimes, conjugate, \
                 verify, trace, cluster, or reproduce <example-id>"
            )),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Task::Classify => "classify".into(),
            Task::Arcs => "arcs".into(),
            Task::Lifetimes => "lifetimes".into(),
            Task::Conjugate => "conjugate".into(),
            Task::Verify => "verify".into(),
            Task::Trace => "trace".into(),
            Task::Cluster => "cluster".into(),
            Task::Reproduce(id) => format!("reproduce-{id}"),
        }
    }
}

/// Assemble a piecewise function from piece tables; the pieces must tile a
/// contiguous interval.
pub fn build_piecewise(
    what: &str,
    specs: &[PieceSpec],
    rule: BreakpointRule,
) -> Result<PiecewiseFn, String> {
    if specs.is_empty() {
        return Err(format!("{what}: at least one piece is required"));
    }
    let mut parsed: Vec<(ExtReal, ExtReal, PieceExpr)> = Vec::new();
    for spec in specs {
        let (lo, hi) = parse_interval(&spec.on).map_err(|e| format!("{what}: {e}"))?;
        let expr = parse_piece(&spec.expr)
            .map_err(|e| format!("{what}: in `{}`: {e}", spec.expr))?;
        parsed.push((lo, hi, expr));
    }
    parsed.sort_by(|a, b| a.0.cmp_ext(b.0));
    let mut breakpoints = Vec::new();
    for pair in parsed.windows(2) {
        let (end, start) = (pair[0].1, pair[1].0);
        if end != start {
            return Err(format!(
                "{what}: pieces must be contiguous, found a gap or overlap between {end} and \
                 {start}"
            ));
        }
        match end {
            ExtReal::Finite(x) => breakpoints.push(x),
            _ => return Err(format!("{what}: interior breakpoint must be finite")),
        }
    }
    let domain = Interval::new(parsed[0].0, parsed[parsed.len() - 1].1)
        .map_err(|e| format!("{what}: {e}"))?;
    let pieces = parsed.into_iter().map(|(_, _, e)| e).collect();
    PiecewiseFn::with_rule(domain, breakpoints, pieces, rule).map_err(|e| format!("{what}: {e}"))
}

pub fn build_model(spec: &ModelSpec) -> Result<SemigroupModel, String> {
    match spec.kind.as_str() {
        "non-elliptic" => {
            let specs = spec
                .beta
                .as_deref()
                .ok_or("kind `non-elliptic` requires a [[model.beta]] table")?;
            let beta = build_piecewise("beta", specs, BreakpointRule::UpperEnvelope)?;
            let lower = LowerBoundary::new(beta).map_err(|e| e.to_string())?;
            Ok(SemigroupModel::NonElliptic { lower })
        }
        "hyperbolic-group" => {
            let width = spec.width.ok_or("kind `hyperbolic-group` requires `width`")?;
            if !(width > 0.0) {
                return Err("`width` must be positive".into());
            }
            Ok(SemigroupModel::HyperbolicGroup { width })
        }
        "elliptic-group" => {
            let theta = spec.theta.ok_or("kind `elliptic-group` requires `theta`")?;
            if theta == 0.0 {
                return Err("`theta` must be nonzero".into());
            }
            Ok(SemigroupModel::EllipticGroup { theta })
        }
        "elliptic-starlike" => {
            let specs = spec
                .rho
                .as_deref()
                .ok_or("kind `elliptic-starlike` requires a [[model.rho]] table")?;
            let rho = build_piecewise("rho", specs, BreakpointRule::LowerEnvelope)?;
            let radial = RadialBoundary::new(rho).map_err(|e| e.to_string())?;
            Ok(SemigroupModel::EllipticStarlike { radial })
        }
        "elliptic-spiral" => {
            let [re, im] = spec.lambda.ok_or("kind `elliptic-spiral` requires `lambda`")?;
            let specs = spec
                .rho
                .as_deref()
                .ok_or("kind `elliptic-spiral` requires a [[model.rho]] table")?;
            let rho = build_piecewise("rho", specs, BreakpointRule::LowerEnvelope)?;
            let radial = RadialBoundary::new(rho).map_err(|e| e.to_string())?;
            Ok(SemigroupModel::EllipticSpiral { lambda: Complex64::new(re, im), radial })
        }
        other => Err(format!(
            "unknown model kind `{other}`; expected non-elliptic, hyperbolic-group, \
             elliptic-group, elliptic-starlike, or elliptic-spiral"
        )),
    }
}

pub fn build_shear(spec: &ConjugationSpec) -> Result<ShearMap, String> {
    let v = spec
        .v
        .as_deref()
        .map(|s| build_piecewise("v", s, BreakpointRule::UpperEnvelope))
        .transpose()?;
    let u = spec
        .u
        .as_deref()
        .map(|s| build_piecewise("u", s, BreakpointRule::UpperEnvelope))
        .transpose()?;
    match (u, v) {
        (Some(u), Some(v)) => ShearMap::new(u, v).map_err(|e| e.to_string()),
        (None, Some(v)) => ShearMap::vertical(v).map_err(|e| e.to_string()),
        (Some(u), None) => {
            let v = PiecewiseFn::constant(u.domain(), PieceExpr::Const(0.0));
            ShearMap::new(u, v).map_err(|e| e.to_string())
        }
        (None, None) => Err("[conjugation] needs `u` pieces, `v` pieces, or both".into()),
    }
}
