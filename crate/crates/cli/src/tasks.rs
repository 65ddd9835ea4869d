//! Orchestration of scenario tasks and artifact emission.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use semidisc::{
    boundary_report, boundary_trajectory, build_map, classify_fixed_points, cluster_points,
    disc_semigroup, life_time, pushforward_boundary, reproduce, verify_conjugacy, apply_shear,
    ConformalError, Conjugator, ContactArc, ExampleId, ExtReal, LowerBoundary, ReproError,
    RiemannMap, SemigroupModel, ShearMap, Trajectory,
};

use crate::artifacts::{
    curve_plot, disc_plot, fmt_f, write_csv, write_report, RunReport, TaskReport,
};
use crate::scenario::{build_model, build_shear, ScenarioFile, Task};

#[derive(Debug)]
pub enum CliError {
    /// Bad input: scenario syntax, expressions, model invariants. Exit 2.
    Validation(String),
    /// Numeric non-convergence or failed verification. Exit 3.
    Numeric(String),
    Io(io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "validation: {m}"),
            CliError::Numeric(m) => write!(f, "numeric: {m}"),
            CliError::Io(e) => write!(f, "io: {e}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 2,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

fn conformal_err(e: ConformalError) -> CliError {
    match e {
        ConformalError::NoConvergence(_)
        | ConformalError::OutsideDisc(_)
        | ConformalError::InversionFailed(_) => CliError::Numeric(e.to_string()),
        other => CliError::Validation(other.to_string()),
    }
}

fn repro_err(e: ReproError) -> CliError {
    match e {
        ReproError::Conformal(c) => conformal_err(c),
        other => CliError::Validation(other.to_string()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Svg,
    All,
    /// Only the machine-readable report, no CSV/SVG; selectable from a
    /// scenario's `output.formats = ["json-report"]`.
    #[value(skip)]
    ReportOnly,
}

impl Format {
    fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::All)
    }

    fn svg(self) -> bool {
        matches!(self, Format::Svg | Format::All)
    }

    fn from_names(names: &[String]) -> Result<Format, String> {
        let mut csv = false;
        let mut svg = false;
        for name in names {
            match name.as_str() {
                "csv" => csv = true,
                "svg" => svg = true,
                "json-report" => {}
                other => return Err(format!("unknown output format `{other}`")),
            }
        }
        Ok(match (csv, svg) {
            (true, true) => Format::All,
            (true, false) => Format::Csv,
            (false, true) => Format::Svg,
            (false, false) => Format::ReportOnly,
        })
    }
}

pub struct Settings {
    pub out: PathBuf,
    pub resolution: usize,
    pub tolerance: f64,
    /// Effective format after defaulting.
    pub format: Format,
    /// Format given on the command line, which overrides the scenario's
    /// `output.formats`.
    pub explicit_format: Option<Format>,
}

fn load_scenario(path: &Path) -> Result<ScenarioFile, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

fn prepared(
    file: &ScenarioFile,
) -> Result<(SemigroupModel, Option<ShearMap>, Vec<Task>), CliError> {
    let model = build_model(&file.model).map_err(CliError::Validation)?;
    let violations = semidisc::validate_model(&model);
    if !violations.is_empty() {
        let lines: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        return Err(CliError::Validation(lines.join("; ")));
    }
    let shear = file
        .conjugation
        .as_ref()
        .map(build_shear)
        .transpose()
        .map_err(CliError::Validation)?;
    let tasks = file
        .tasks
        .iter()
        .map(|t| Task::parse(t))
        .collect::<Result<Vec<_>, _>>()
        .map_err(CliError::Validation)?;
    Ok((model, shear, tasks))
}

/// `validate <file>`: parse and check invariants, no artifacts.
pub fn run_validate(path: &Path) -> Result<(), CliError> {
    let file = load_scenario(path)?;
    prepared(&file)?;
    println!("{}: ok", path.display());
    Ok(())
}

/// `run <file>`: execute every task, emit artifacts and report.json.
pub fn run_scenario(path: &Path, settings: &Settings) -> Result<(), CliError> {
    let file = load_scenario(path)?;
    let (model, shear, tasks) = prepared(&file)?;
    if tasks.is_empty() {
        return Err(CliError::Validation("scenario lists no tasks".into()));
    }
    let out = file
        .output
        .as_ref()
        .and_then(|o| o.dir.clone())
        .unwrap_or_else(|| settings.out.clone());
    let format = match (settings.explicit_format, &file.output) {
        (Some(f), _) => f,
        (None, Some(o)) => match &o.formats {
            Some(names) => Format::from_names(names).map_err(CliError::Validation)?,
            None => settings.format,
        },
        (None, None) => settings.format,
    };
    let settings = Settings {
        out: out.clone(),
        resolution: settings.resolution,
        tolerance: settings.tolerance,
        format,
        explicit_format: settings.explicit_format,
    };
    let settings = &settings;
    fs::create_dir_all(&out)?;

    let mut reports = Vec::new();
    let mut numeric_failure = false;
    for task in &tasks {
        let report = run_task(task, &model, shear.as_ref(), &out, settings)?;
        if !report.pass {
            numeric_failure = true;
        }
        println!("task {}: {}", report.task, if report.pass { "pass" } else { "fail" });
        reports.push(report);
    }
    let run = RunReport {
        scenario: path.display().to_string(),
        resolution: settings.resolution,
        tolerance: settings.tolerance,
        pass: !numeric_failure,
        tasks: reports,
    };
    let report_path = write_report(&out, &run)?;
    println!("report: {}", report_path.display());
    if numeric_failure {
        return Err(CliError::Numeric("one or more tasks failed; see report.json".into()));
    }
    Ok(())
}

fn run_task(
    task: &Task,
    model: &SemigroupModel,
    shear: Option<&ShearMap>,
    out: &Path,
    settings: &Settings,
) -> Result<TaskReport, CliError> {
    match task {
        Task::Classify => classify_task(model, out, settings),
        Task::Arcs => arcs_task(model, out, settings),
        Task::Lifetimes => lifetimes_task(model, out, settings),
        Task::Conjugate => conjugate_task(model, shear, out, settings),
        Task::Verify => verify_task(model, shear, out, settings),
        Task::Trace => trace_task(model, out, settings),
        Task::Cluster => cluster_task(model, shear, out, settings),
        Task::Reproduce(id) => reproduce_task(*id, out, settings),
    }
}

/// Artifact name relative to the output directory, keeping the report
/// byte-identical across output locations.
fn rel_name(p: &Path) -> String {
    p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
}

fn ok_report(task: &Task, details: Vec<String>, artifacts: Vec<PathBuf>) -> TaskReport {
    TaskReport {
        task: task.label(),
        pass: true,
        details,
        artifacts: artifacts.iter().map(|p| rel_name(p)).collect(),
    }
}

fn classify_task(
    model: &SemigroupModel,
    out: &Path,
    settings: &Settings,
) -> Result<TaskReport, CliError> {
    let classes = classify_fixed_points(model);
    let mut artifacts = Vec::new();
    if settings.format.csv() {
        let rows: Vec<Vec<String>> = classes
            .iter()
            .map(|(desc, class)| vec![desc.clone(), class.to_string()])
            .collect();
        artifacts.push(write_csv(
            out,
            "classification.csv",
            "point [model coordinates; dimensionless],class",
            &rows,
        )?);
    }
    let details = vec![format!("{} classified boundary points", classes.len())];
    Ok(ok_report(&Task::Classify, details, artifacts))
}

fn arc_rows(arcs: &[ContactArc]) -> Vec<Vec<String>> {
    arcs.iter()
        .map(|arc| {
            vec![
                fmt_f(arc.c),
                arc.d.to_string(),
                arc.r.to_string(),
                format!("{:?}", arc.side).to_lowercase(),
                arc.exceptional.to_string(),
                format!("{:?}", arc.initial_point_class),
            ]
        })
        .collect()
}

const ARC_HEADER: &str = "c [dimensionless],d [dimensionless],r [dimensionless],side,exceptional,initial_point_class";

fn arcs_task(
    model: &SemigroupModel,
    out: &Path,
    settings: &Settings,
) -> Result<TaskReport, CliError> {
    let report = boundary_report(model);
    let mut artifacts = Vec::new();
    if settings.format.csv() {
        artifacts.push(write_csv(out, "arcs.csv", ARC_HEADER, &arc_rows(&report.arcs))?);
        let comp_rows: Vec<Vec<String>> = report
            .components
            .iter()
            .map(|c| vec![c.a.to_string(), c.b.to_string()])
            .collect();
        artifacts.push(write_csv(
            out,
            "components.csv",
            "a [dimensionless],b [dimensionless]",
            &comp_rows,
        )?);
    }
    let details = vec![
        format!("{} contact arcs, {} strip components", report.arcs.len(), report.components.len()),
        format!("exceptional set nonempty: {}", report.exceptional_set_nonempty),
    ];
    Ok(ok_report(&Task::Arcs, details, artifacts))
}

/// Sampling heights for one arc, strictly inside `(d, r)`.
fn arc_heights(arc: &ContactArc, n: usize) -> Vec<f64> {
    let lo = match arc.d {
        ExtReal::Finite(d) => d,
        _ => match arc.r {
            ExtReal::Finite(r) => r - 6.0,
            _ => -3.0,
        },
    };
    let hi = match arc.r {
        ExtReal::Finite(r) => r,
        _ => lo + 6.0,
    };
    (1..n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect()
}

fn lifetimes_task(
    model: &SemigroupModel,
    out: &Path,
    settings: &Settings,
) -> Result<TaskReport, CliError> {
    let report = boundary_report(model);
    let mut rows = Vec::new();
    let mut series = Vec::new();
    for (i, arc) in report.arcs.iter().enumerate() {
        let mut curve = Vec::new();
        for y in arc_heights(arc, 40) {
            let t = life_time(arc, y).map_err(|e| CliError::Validation(e.to_string()))?;
            rows.push(vec![i.to_string(), fmt_f(arc.c), fmt_f(y), t.to_string()]);
            if let ExtReal::Finite(tf) = t {
                curve.push((y, tf));
            }
        }
        series.push((format!("arc {} at Re = {}", i, fmt_f(arc.c)), curve));
    }
    let mut artifacts = Vec::new();
    if settings.format.csv() {
        artifacts.push(write_csv(
            out,
            "lifetimes.csv",
            "arc,c [dimensionless],y [dimensionless],T [flow-time units]",
            &rows,
        )?);
    }
    if settings.format.svg() {
        artifacts.push(curve_plot(
            out,
            "lifetimes.svg",
            "life-time T(y) per contact arc",
            "y [dimensionless]",
            "T [flow-time units]",
            &series,
        )?);
    }
    let details = vec![format!("{} arcs sampled", report.arcs.len())];
    Ok(ok_report(&Task::Lifetimes, details, artifacts))
}

fn translation_lower(model: &SemigroupModel) -> Result<&LowerBoundary, CliError> {
    match model {
        SemigroupModel::NonElliptic { lower } => Ok(lower),
        _ => Err(CliError::Validation(
            "this task needs a translation model (kind `non-elliptic`)".into(),
        )),
    }
}

fn require_shear<'a>(shear: Option<&'a ShearMap>) -> Result<&'a ShearMap, CliError> {
    shear.ok_or_else(|| {
        CliError::Validation("this task needs a [conjugation] section in the scenario".into())
    })
}

fn conjugate_task(
    model: &SemigroupModel,
    shear: Option<&ShearMap>,
    out: &Path,
    settings: &Settings,
) -> Result<TaskReport, CliError> {
    let lower = translation_lower(model)?;
    let tau = require_shear(shear)?;
    let image = pushforward_boundary(lower, tau).map_err(|e| CliError::Validation(e.to_string()))?;
    let image_model = SemigroupModel::NonElliptic { lower: image.clone() };
    let image_report = boundary_report(&image_model);

    let mut artifacts = Vec::new();
    if settings.format.csv() {
        // sampled graph of the shear and of both boundary functions
        let dom = lower.domain();
        let (a, b) = match (dom.lo, dom.hi) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => (a, b),
            _ => (semidisc::piecewise::midpoint(dom.lo, dom.hi) - 3.0,
                  semidisc::piecewise::midpoint(dom.lo, dom.hi) + 3.0),
        };
        let n = settings.resolution.max(2);
        let mut rows = Vec::new();
        for k in 1..n {
            let x = a + (b - a) * k as f64 / n as f64;
            let u = tau.u_at(ExtReal::Finite(x));
            let v = tau.v_at(ExtReal::Finite(x));
            let beta1 = lower.beta().eval(x);
            let beta2 = match u {
                ExtReal::Finite(ux) => image.beta().eval(ux).to_string(),
                _ => "".into(),
            };
            rows.push(vec![
                fmt_f(x),
                u.to_string(),
                v.to_string(),
                beta1.to_string(),
                beta2,
            ]);
        }
        artifacts.push(write_csv(
            out,
            "conjugate.csv",
            "x [dimensionless],u(x),v(x),beta(x),beta_image(u(x))",
            &rows,
        )?);
        artifacts.push(write_csv(
            out,
            "target_arcs.csv",
            ARC_HEADER,
            &arc_rows(&image_report.arcs),
        )?);
    }
    let source_report = boundary_report(model);
    let details = vec![
        format!(
            "source: {} arcs; image: {} arcs",
            source_report.arcs.len(),
            image_report.arcs.len()
        ),
        format!("image exceptional set nonempty: {}", image_report.exceptional_set_nonempty),
    ];
    Ok(ok_report(&Task::Conjugate, details, artifacts))
}

fn verify_task(
    model: &SemigroupModel,
    shear: Option<&ShearMap>,
    out: &Path,
    settings: &Settings,
) -> Result<TaskReport, CliError> {
    let lower = translation_lower(model)?;
    let tau = require_shear(shear)?;
    let image = pushforward_boundary(lower, tau).map_err(|e| CliError::Validation(e.to_string()))?;
    let image_model = SemigroupModel::NonElliptic { lower: image };
    let report = verify_conjugacy(
        model,
        &image_model,
        &Conjugator::Shear(tau.clone()),
        200,
        &[0.25, 1.0, 2.0],
        settings.tolerance,
    )
    .map_err(|e| CliError::Validation(e.to_string()))?;

    let text = format!(
        "conjugacy verification\n\
         equivariance_residual = {}\n\
         fiber_residual = {}\n\
         tolerance = {}\n\
         pass = {}\n",
        fmt_f(report.equivariance_residual),
        fmt_f(report.fiber_residual),
        fmt_f(report.tolerance),
        report.pass
    );
    let path = out.join("verify.txt");
    fs::write(&path, text)?;
    Ok(TaskReport {
        task: Task::Verify.label(),
        pass: report.pass,
        details: vec![
            format!("equivariance residual {}", fmt_f(report.equivariance_residual)),
            format!("fiber residual {}", fmt_f(report.fiber_residual)),
            format!("tolerance {}", fmt_f(report.tolerance)),
        ],
        artifacts: vec![rel_name(&path)],
    })
}

fn subsample(tr: &Trajectory, every: usize) -> Vec<Complex64> {
    tr.samples.iter().step_by(every.max(1)).map(|&(_, z)| z).collect()
}

fn trace_task(
    model: &SemigroupModel,
    out: &Path,
    settings: &Settings,
) -> Result<TaskReport, CliError> {
    let map = build_map(model, settings.resolution).map_err(conformal_err)?;
    let w0 = map.w0();
    let mut series = Vec::new();
    let mut rows = Vec::new();

    // interior orbits started above the anchor (always inside the domain)
    for (j, lift) in [0.0, 0.6, 1.4].iter().enumerate() {
        let z0 = map.invert(w0 + Complex64::new(0.0, *lift)).map_err(conformal_err)?;
        let mut orbit = Vec::new();
        let mut t = 0.0;
        while t <= 6.0 + 1e-12 {
            let z = disc_semigroup(&map, z0, t).map_err(conformal_err)?;
            orbit.push(z);
            rows.push(vec![
                format!("orbit-{j}"),
                fmt_f(t),
                fmt_f(z.re),
                fmt_f(z.im),
            ]);
            t += 0.05;
        }
        series.push((format!("orbit {j}"), orbit, true));
    }

    // boundary trajectories along each contact arc
    let report = boundary_report(model);
    for (i, arc) in report.arcs.iter().enumerate() {
        let y0 = arc_heights(arc, 4)[0];
        let tr = boundary_trajectory(&map, arc, y0, 6.0, 1e-2).map_err(conformal_err)?;
        for &(t, z) in tr.samples.iter().step_by(10) {
            rows.push(vec![format!("arc-{i}"), fmt_f(t), fmt_f(z.re), fmt_f(z.im)]);
        }
        series.push((
            format!("arc {} (lands at t = {})", i, tr.landing_time),
            subsample(&tr, 10),
            true,
        ));
    }

    let mut artifacts = Vec::new();
    if settings.format.csv() {
        artifacts.push(write_csv(
            out,
            "trace.csv",
            "series,t [flow-time units],re [dimensionless],im [dimensionless]",
            &rows,
        )?);
    }
    if settings.format.svg() {
        artifacts.push(disc_plot(
            out,
            "trace.svg",
            "disc-side orbits and boundary trajectories",
            &series,
        )?);
    }
    let details = vec![format!("{} traced curves", series.len())];
    Ok(ok_report(&Task::Trace, details, artifacts))
}

fn cluster_task(
    model: &SemigroupModel,
    shear: Option<&ShearMap>,
    out: &Path,
    settings: &Settings,
) -> Result<TaskReport, CliError> {
    let lower = translation_lower(model)?;
    let tau = require_shear(shear)?;
    let image = pushforward_boundary(lower, tau).map_err(|e| CliError::Validation(e.to_string()))?;
    let image_model = SemigroupModel::NonElliptic { lower: image };
    let map2 = build_map(&image_model, settings.resolution).map_err(conformal_err)?;

    let dom = lower.domain();
    let (lo, hi) = match (dom.lo, dom.hi) {
        (ExtReal::Finite(a), ExtReal::Finite(b)) => (a, b),
        _ => {
            return Err(CliError::Validation(
                "cluster task needs a bounded base interval".into(),
            ))
        }
    };
    let mid = 0.5 * (lo + hi);

    // two sequences approaching the attracting end: one up the central
    // abscissa, one hugging the left edge of the interval
    let mut central = Vec::new();
    let mut lateral = Vec::new();
    for n in 1..=24 {
        let nf = n as f64;
        let base = match lower.beta().eval(mid) {
            ExtReal::Finite(b) => b,
            _ => 0.0,
        };
        let wc = Complex64::new(mid, base + 1.0 + nf);
        central.push(conjugated_preimage(&map2, tau, wc)?);

        // the lateral sequence hugs the boundary graph at fixed height so
        // that its conjugated images can converge elsewhere than the
        // Denjoy-Wolff point
        let x = lo + (mid - lo) / nf;
        let bx = match lower.beta().eval(x) {
            ExtReal::Finite(b) => b,
            _ => 0.0,
        };
        let wl = Complex64::new(x, bx + 1.0);
        lateral.push(conjugated_preimage(&map2, tau, wl)?);
    }
    let combined: Vec<Complex64> = central[central.len() - 8..]
        .iter()
        .zip(&lateral[lateral.len() - 8..])
        .flat_map(|(&a, &b)| [a, b])
        .collect();
    let clusters = cluster_points(&combined, 0.05);

    let mut artifacts = Vec::new();
    if settings.format.csv() {
        let rows: Vec<Vec<String>> =
            clusters.iter().map(|z| vec![fmt_f(z.re), fmt_f(z.im)]).collect();
        artifacts.push(write_csv(
            out,
            "cluster.csv",
            "re [dimensionless],im [dimensionless]",
            &rows,
        )?);
    }
    if settings.format.svg() {
        artifacts.push(disc_plot(
            out,
            "cluster.svg",
            "cluster set of the conjugation at the attracting end",
            &[
                ("central approach".to_string(), central, true),
                ("lateral approach".to_string(), lateral, true),
                ("cluster centers".to_string(), clusters.clone(), false),
            ],
        )?);
    }
    let details = vec![format!("{} cluster centers at radius 0.05", clusters.len())];
    Ok(ok_report(&Task::Cluster, details, artifacts))
}

fn conjugated_preimage(
    map2: &RiemannMap,
    tau: &ShearMap,
    w: Complex64,
) -> Result<Complex64, CliError> {
    let image = apply_shear(tau, w).map_err(|e| CliError::Validation(e.to_string()))?;
    map2.invert(image).map_err(conformal_err)
}

fn reproduce_task(
    id: ExampleId,
    out: &Path,
    settings: &Settings,
) -> Result<TaskReport, CliError> {
    let outcome = reproduce(id, settings.resolution).map_err(repro_err)?;
    let mut artifacts = Vec::new();
    if settings.format.csv() {
        let rows: Vec<Vec<String>> = outcome
            .findings
            .iter()
            .map(|f| vec![f.name.clone(), f.pass.to_string(), f.detail.clone()])
            .collect();
        artifacts.push(write_csv(
            out,
            &format!("{}.csv", outcome.example),
            "finding,pass,detail",
            &rows,
        )?);
    }
    if settings.format.svg() {
        let series: Vec<(String, Vec<Complex64>, bool)> = outcome
            .traces
            .iter()
            .map(|t| (t.label.clone(), t.points.clone(), t.points.len() > 1))
            .collect();
        artifacts.push(disc_plot(
            out,
            &format!("{}.svg", outcome.example),
            &format!("reproduction: {}", outcome.example),
            &series,
        )?);
    }
    Ok(TaskReport {
        task: Task::Reproduce(id).label(),
        pass: outcome.pass,
        details: outcome
            .findings
            .iter()
            .map(|f| format!("{}: {} ({})", f.name, if f.pass { "pass" } else { "fail" }, f.detail))
            .collect(),
        artifacts: artifacts.iter().map(|p| rel_name(p)).collect(),
    })
}

/// `reproduce <example-id>`: standalone reproduction with artifacts.
pub fn run_reproduce(id: ExampleId, settings: &Settings) -> Result<(), CliError> {
    fs::create_dir_all(&settings.out)?;
    let report = reproduce_task(id, &settings.out, settings)?;
    for line in &report.details {
        println!("{line}");
    }
    for artifact in &report.artifacts {
        println!("artifact: {}", settings.out.join(artifact).display());
    }
    if !report.pass {
        return Err(CliError::Numeric(format!("reproduction {id} failed its assertions")));
    }
    println!("{id}: pass");
    Ok(())
}
