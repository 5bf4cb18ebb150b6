//! One function per subcommand. Each parses its input, calls the core
//! library and returns the envelope payload.

use std::path::Path;

use hypflat_core::connections::{gauge_transform, holonomy, lifted_shift, LiftedHolonomy};
use hypflat_core::cr::{
    beta_form, cylinder_bound, cylinder_feasibility_experiment, energy_top, extremal_ratio, schwarz_integral,
    schwarz_integral_extrapolated, schwarz_pick_ratio, solve_cr, BoundaryCondition, CylinderOptions, Disc, GridConnection,
    GridMap, HalfPlane, Mesh, ModelTag, Outcome, SampledFunction, SolveReport, SolverOptions, TargetModel,
};
use hypflat_core::hyperbolic::{LiftedPoint, MoebiusMap};
use hypflat_core::moduli::config::check_c_tau_with;
use hypflat_core::moduli::{
    check_c, check_c_aff, check_p_interval, check_paff_interval, check_ptau_circle, construct_c_tau_point,
    construct_interval_datum, construct_ptau_loop, sheet_index, DiscBoundaryConfig, IntervalDatumAff, IntervalDatumLifted,
    LoopDatum,
};
use hypflat_core::Execution;
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::args::{
    CheckSpaceArgs, ClassifyArgs, Command, ConstructArgs, CylBoundArgs, CylExperimentArgs, SolverArgs, Space, Target,
};
use crate::error::{CliError, CliResult};
use crate::input::{
    AffConnectionSpec, BuiltConnection, ConnectionSpec, DomainInput, ElementSpec, GaugeSpec, GeneratorSpec, GermSpec,
    ProblemSpec, PuncturedSpec,
};

/// What a subcommand produced.
pub struct Output {
    pub outputs: Value,
    pub diagnostics: Value,
    /// Rows `(s, t, re, im)` to be written as CSV.
    pub grid: Option<Vec<[f64; 4]>>,
    /// Set when a solver stopped short of convergence.
    pub nonconverged: Option<String>,
}

impl Output {
    fn new(outputs: Value, diagnostics: Value) -> Self {
        Self { outputs, diagnostics, grid: None, nonconverged: None }
    }
}

pub fn parse<T: DeserializeOwned>(input: &Option<Value>) -> CliResult<T> {
    let v = input.clone().ok_or_else(|| CliError::Schema("this command needs a JSON input (--input or --json)".into()))?;
    serde_json::from_value(v).map_err(|e| CliError::Schema(e.to_string()))
}

pub fn dispatch(command: &Command, input: &Option<Value>) -> CliResult<Output> {
    match command {
        Command::Classify(a) => classify(a, input),
        Command::Transport(_) => transport(input),
        Command::Holonomy(_) => holonomy_cmd(input),
        Command::Rotnum(_) => rotnum(input),
        Command::Gauge(_) => gauge(input),
        Command::CheckSpace(a) => check_space(a, input),
        Command::Construct(a) => construct(a),
        Command::SheetIndex(_) => sheet(input),
        Command::SchwarzIntegral(a) => schwarz(a.tol, input),
        Command::SolveCr(a) => solve(a, input),
        Command::Energy(a) => energy(a, input),
        Command::BetaForm(_) => beta(input),
        Command::SchwarzPick(_) => pick(input),
        Command::CylBound(a) => cyl_bound(a),
        Command::CylExperiment(a) => cyl_experiment(a),
        Command::Plot(_) => unreachable!("plot is handled before dispatch"),
    }
}

fn fixed_points(g: &MoebiusMap) -> Value {
    match g.fixed_points() {
        Ok((small, big)) => json!({ "l_small": small.angle(), "l_big": big.angle() }),
        Err(_) => Value::Null,
    }
}

fn element_summary(g: &MoebiusMap, tol: f64) -> Value {
    json!({
        "element": g,
        "class": g.classify(tol),
        "trace_abs": g.trace().abs(),
        "fixed_points": fixed_points(g),
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementInput {
    element: ElementSpec,
}

fn classify(a: &ClassifyArgs, input: &Option<Value>) -> CliResult<Output> {
    let x: ElementInput = parse(input)?;
    Ok(Output::new(element_summary(&x.element.build()?, a.tol), json!({})))
}

fn default_t1() -> f64 {
    1.0
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TransportInput {
    connection: ConnectionSpec,
    #[serde(default)]
    t0: f64,
    #[serde(default = "default_t1")]
    t1: f64,
}

fn transport(input: &Option<Value>) -> CliResult<Output> {
    let x: TransportInput = parse(input)?;
    let a = x.connection.build()?;
    let (g, estimate) = a.transport_with_estimate(x.t0, x.t1)?;
    Ok(Output::new(
        element_summary(&g, hypflat_core::hyperbolic::CLASSIFY_TOL),
        json!({ "error_estimate": estimate, "nodes": a.len() }),
    ))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LoopInput {
    connection: ConnectionSpec,
    #[serde(default)]
    points: Vec<f64>,
}

fn loop_holonomy(x: &LoopInput) -> CliResult<LiftedHolonomy> {
    Ok(holonomy(&x.connection.build()?)?)
}

fn holonomy_cmd(input: &Option<Value>) -> CliResult<Output> {
    let x: LoopInput = parse(input)?;
    if !x.points.is_empty() {
        return Err(CliError::Schema("`points` belongs to rotnum".into()));
    }
    let h = loop_holonomy(&x)?;
    let mut out = element_summary(&h.element(), hypflat_core::hyperbolic::CLASSIFY_TOL);
    out["rotation_number"] = json!(h.rotation_number());
    Ok(Output::new(out, json!({})))
}

fn rotnum(input: &Option<Value>) -> CliResult<Output> {
    let x: LoopInput = parse(input)?;
    let h = loop_holonomy(&x)?;
    let (small, big) = h.element().fixed_points()?;
    let shifts: Vec<Value> = x.points.iter().map(|&p| json!({ "x": p, "shift": lifted_shift(&h, LiftedPoint(p)) })).collect();
    let fixed = |p: f64| lifted_shift(&h, LiftedPoint(p));
    Ok(Output::new(
        json!({
            "rotation_number": h.rotation_number(),
            "trace_abs": h.trace_abs(),
            "fixed_points": { "l_small": small.angle(), "l_big": big.angle() },
            "fixed_point_shifts": { "l_small": fixed(small.angle()), "l_big": fixed(big.angle()) },
            "shifts": shifts,
            "trajectory": h.lift_trace(),
        }),
        json!({ "tracked_point": h.tracked_point().angle() }),
    ))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GaugeInput {
    connection: ConnectionSpec,
    gauge: GaugeSpec,
}

fn gauge(input: &Option<Value>) -> CliResult<Output> {
    let x: GaugeInput = parse(input)?;
    let a = x.connection.build()?;
    let phi = x.gauge.build()?;
    let b = gauge_transform(&phi, &a)?;
    let expected = phi.last().compose(&a.full_transport()).compose(&phi.first().inverse());
    let after = b.full_transport();
    Ok(Output::new(
        json!({
            "connection": b,
            "transport_before": a.full_transport(),
            "transport_after": after,
        }),
        json!({ "covariance_defect": after.distance(&expected) }),
    ))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AffIntervalInput {
    connection: AffConnectionSpec,
    lambda0: f64,
    lambda1: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IntervalInput {
    connection: ConnectionSpec,
    lambda0: f64,
    lambda1: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PtauInput {
    connection: ConnectionSpec,
    tau: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LabelsInput {
    labels: Vec<f64>,
}

fn check_space(a: &CheckSpaceArgs, input: &Option<Value>) -> CliResult<Output> {
    let (member, details) = match a.space {
        Space::PaffInterval => {
            let x: AffIntervalInput = parse(input)?;
            let datum = IntervalDatumAff { connection: x.connection.build()?, lambda0: x.lambda0, lambda1: x.lambda1 };
            (check_paff_interval(&datum), json!({ "margin": datum.margin() }))
        }
        Space::PInterval => {
            let x: IntervalInput = parse(input)?;
            let datum = IntervalDatumLifted {
                connection: x.connection.build()?,
                lambda0: LiftedPoint(x.lambda0),
                lambda1: LiftedPoint(x.lambda1),
            };
            (check_p_interval(&datum)?, json!({ "gap": datum.gap()?, "margin": datum.margin()? }))
        }
        Space::PtauCircle => {
            let x: PtauInput = parse(input)?;
            let datum = LoopDatum { connection: x.connection.build()?, tau: x.tau };
            let member = check_ptau_circle(&datum, a.trace_tol)?;
            let details = match holonomy(&datum.connection) {
                Ok(h) => json!({ "trace_abs": h.trace_abs(), "rotation_number": h.rotation_number() }),
                Err(_) => json!({ "class": datum.connection.full_transport().classify(hypflat_core::hyperbolic::CLASSIFY_TOL) }),
            };
            (member, details)
        }
        Space::CAff => {
            let x: LabelsInput = parse(input)?;
            (check_c_aff(&x.labels)?, json!({}))
        }
        Space::C => {
            let x: LabelsInput = parse(input)?;
            let config = DiscBoundaryConfig { labels: x.labels.iter().map(|&l| LiftedPoint(l)).collect() };
            (check_c(&config)?, json!({ "margin": config.margin() }))
        }
        Space::CTau => {
            let x: PuncturedSpec = parse(input)?;
            let config = x.build()?;
            let report = config.evaluate(a.trace_tol)?;
            (check_c_tau_with(&config, a.trace_tol)?, json!(report))
        }
    };
    Ok(Output::new(json!({ "space": a.space, "member": member }), details))
}

fn need_tau(a: &ConstructArgs) -> CliResult<f64> {
    a.tau.ok_or_else(|| CliError::Schema("--tau is required for this target".into()))
}

fn construct(a: &ConstructArgs) -> CliResult<Output> {
    Ok(match a.target {
        Target::Interval => {
            let datum = construct_interval_datum(a.lambda0, a.lambda1, a.seed, a.n)?;
            Output::new(json!({ "datum": datum, "member": check_paff_interval(&datum) }), json!({ "margin": datum.margin() }))
        }
        Target::Ptau => {
            let datum = construct_ptau_loop(need_tau(a)?, a.seed, a.n)?;
            let h = holonomy(&datum.connection)?;
            Output::new(
                json!({ "datum": datum, "member": check_ptau_circle(&datum, a.trace_tol)? }),
                json!({ "trace_abs": h.trace_abs(), "rotation_number": h.rotation_number() }),
            )
        }
        Target::CTau => {
            let config = construct_c_tau_point(a.d, need_tau(a)?, a.seed)?;
            let g = config.holonomy.element();
            Output::new(
                json!({
                    "labels": config.labels.iter().map(|l| l.value()).collect::<Vec<_>>(),
                    "tau": config.tau,
                    "holonomy": g,
                    "fixed_points": fixed_points(&g),
                    "sheet_index": sheet_index(&config, None)?,
                }),
                json!(config.evaluate(a.trace_tol)?),
            )
        }
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SheetInput {
    config: PuncturedSpec,
    #[serde(default)]
    anchor: Option<f64>,
}

fn sheet(input: &Option<Value>) -> CliResult<Output> {
    let x: SheetInput = parse(input)?;
    let config = x.config.build()?;
    let k = sheet_index(&config, x.anchor.map(LiftedPoint))?;
    Ok(Output::new(json!({ "sheet_index": k }), json!({})))
}

fn default_radius() -> f64 {
    100.0
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum DensitySpec {
    /// Piecewise linear through the samples, zero outside.
    Samples { x: Vec<f64>, y: Vec<f64> },
    /// `exp(-1/(1-x²))` on `(-1, 1)`.
    Bump,
    /// `1/(1+x²)`, integrated over `[-r, r]` with Richardson extrapolation
    /// of the tails.
    Lorentzian {
        #[serde(default = "default_radius")]
        radius: f64,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SchwarzInput {
    density: DensitySpec,
    points: Vec<Complex64>,
}

fn bump(x: f64) -> f64 {
    if x.abs() < 1.0 {
        (-1.0 / (1.0 - x * x)).exp()
    } else {
        0.0
    }
}

fn schwarz(tol: f64, input: &Option<Value>) -> CliResult<Output> {
    let x: SchwarzInput = parse(input)?;
    let values = match &x.density {
        DensitySpec::Samples { x: xs, y } => {
            let g = SampledFunction::new(xs.clone(), y.clone())?;
            x.points.iter().map(|&z| schwarz_integral(|s| g.eval(s), g.support(), z, tol)).collect::<Result<Vec<_>, _>>()?
        }
        DensitySpec::Bump => {
            x.points.iter().map(|&z| schwarz_integral(bump, (-1.0, 1.0), z, tol)).collect::<Result<Vec<_>, _>>()?
        }
        DensitySpec::Lorentzian { radius } => x
            .points
            .iter()
            .map(|&z| schwarz_integral_extrapolated(|s| 1.0 / (1.0 + s * s), z, *radius, tol))
            .collect::<Result<Vec<_>, _>>()?,
    };
    Ok(Output::new(json!({ "points": x.points, "values": values }), json!({})))
}

fn grid_rows(mesh: &Mesh, u: &GridMap) -> Vec<[f64; 4]> {
    mesh.nodes().iter().zip(&u.values).map(|(p, w)| [p.z.re, p.z.im, w.re, w.im]).collect()
}

/// Reads a grid written by `solve-cr` and checks it against the mesh.
fn read_grid(path: &Path, mesh: &Mesh, model: ModelTag) -> CliResult<GridMap> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| CliError::Precondition(format!("{}: {e}", path.display())))?;
    let header = reader.headers().map_err(|e| CliError::Schema(e.to_string()))?.clone();
    if header.iter().collect::<Vec<_>>() != ["s", "t", "re", "im"] {
        return Err(CliError::Schema(format!("{}: expected header s,t,re,im", path.display())));
    }
    let mut values = Vec::with_capacity(mesh.len());
    for (k, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Schema(e.to_string()))?;
        let row: Vec<f64> = record
            .iter()
            .map(|f| f.trim().parse::<f64>().map_err(|e| CliError::Schema(format!("row {}: {e}", k + 1))))
            .collect::<CliResult<_>>()?;
        if row.len() != 4 {
            return Err(CliError::Schema(format!("row {} has {} fields", k + 1, row.len())));
        }
        let node = mesh
            .nodes()
            .get(k)
            .ok_or_else(|| CliError::Precondition(format!("grid has more rows than the mesh's {} nodes", mesh.len())))?;
        if (node.z - Complex64::new(row[0], row[1])).norm() > 1e-9 {
            return Err(CliError::Precondition(format!(
                "row {} is at ({}, {}), the mesh node at {}",
                k + 1,
                row[0],
                row[1],
                node.z
            )));
        }
        values.push(Complex64::new(row[2], row[3]));
    }
    if values.len() != mesh.len() {
        return Err(CliError::Precondition(format!("grid has {} rows, the mesh {} nodes", values.len(), mesh.len())));
    }
    let u = GridMap::new(model, values);
    match model {
        ModelTag::Disc => u.check::<Disc>(mesh)?,
        ModelTag::HalfPlane => u.check::<HalfPlane>(mesh)?,
    }
    Ok(u)
}

fn run_solver<M: TargetModel>(
    mesh: &Mesh,
    conn: &GridConnection<M::Algebra>,
    bc: &BoundaryCondition,
    guess: Complex64,
    opts: &SolverOptions,
) -> CliResult<SolveReport> {
    Ok(solve_cr::<M>(mesh, conn, bc, &GridMap::constant::<M>(mesh, guess), opts)?)
}

fn solve_problem(p: &ProblemSpec, mesh: &Mesh, bc: &BoundaryCondition, opts: &SolverOptions) -> CliResult<SolveReport> {
    match p.connection.build(mesh, p.model)? {
        BuiltConnection::Disc(c) => run_solver::<Disc>(mesh, &c, bc, p.guess, opts),
        BuiltConnection::HalfPlane(c) => run_solver::<HalfPlane>(mesh, &c, bc, p.guess, opts),
    }
}

fn nonconverged(rep: &SolveReport) -> Option<String> {
    (rep.outcome != Outcome::ConvergedInterior)
        .then(|| format!("{:?} after {} iterations, residual {:e}", rep.outcome, rep.iterations, rep.residual))
}

fn solve(a: &SolverArgs, input: &Option<Value>) -> CliResult<Output> {
    let p: ProblemSpec = parse(input)?;
    if p.map_csv.is_some() {
        return Err(CliError::Schema("`map_csv` is read by energy, not solve-cr".into()));
    }
    let mesh = p.domain.mesh()?;
    let bc = p.boundary_condition(&mesh)?;
    let rep = solve_problem(&p, &mesh, &bc, &a.options())?;
    let rows = grid_rows(&mesh, &rep.map);
    Ok(Output {
        outputs: json!({
            "outcome": rep.outcome,
            "residual": rep.residual,
            "iterations": rep.iterations,
            "stayed_inside": rep.stayed_inside,
            "h": mesh.h(),
            "grid": { "model": rep.map.model, "columns": ["s", "t", "re", "im"], "rows": rows },
        }),
        diagnostics: json!({ "history": rep.history, "nodes": mesh.len() }),
        grid: Some(rows),
        nonconverged: nonconverged(&rep),
    })
}

fn energy(a: &SolverArgs, input: &Option<Value>) -> CliResult<Output> {
    let p: ProblemSpec = parse(input)?;
    let mesh = p.domain.mesh()?;
    let bc = p.boundary_condition(&mesh)?;
    let (u, status) = match &p.map_csv {
        Some(path) => (read_grid(path, &mesh, p.model)?, None),
        None => {
            let rep = solve_problem(&p, &mesh, &bc, &a.options())?;
            let status = nonconverged(&rep);
            (rep.map, status)
        }
    };
    let report = match p.connection.build(&mesh, p.model)? {
        BuiltConnection::Disc(c) => energy_top::<Disc>(&mesh, &u, &c, &bc)?,
        BuiltConnection::HalfPlane(c) => energy_top::<HalfPlane>(&mesh, &u, &c, &bc)?,
    };
    let mut out = Output::new(
        json!({
            "geom": report.geom,
            "top": report.top,
            "boundary_term": report.boundary_term,
        }),
        json!({ "closure": report.closure(), "solved": p.map_csv.is_none() }),
    );
    out.nonconverged = status;
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BetaInput {
    a_xi: GeneratorSpec,
    germ: GermSpec,
    endpoint_rate: f64,
    opposite_rate: f64,
    #[serde(default)]
    alpha_shift: f64,
    distances: Vec<f64>,
}

fn beta(input: &Option<Value>) -> CliResult<Output> {
    let x: BetaInput = parse(input)?;
    let values = beta_form(&x.a_xi.build(), &x.germ.build()?, x.endpoint_rate, x.opposite_rate, x.alpha_shift, &x.distances);
    Ok(Output::new(json!({ "distances": x.distances, "values": values }), json!({})))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PickInput {
    #[serde(default)]
    domain: Option<DomainInput>,
    #[serde(default)]
    map_csv: Option<std::path::PathBuf>,
    #[serde(default)]
    extremal_points: Vec<Complex64>,
}

fn pick(input: &Option<Value>) -> CliResult<Output> {
    let x: PickInput = parse(input)?;
    let mut outputs = json!({});
    match (&x.domain, &x.map_csv) {
        (Some(d), Some(path)) => {
            let mesh = d.mesh()?;
            let u = read_grid(path, &mesh, ModelTag::HalfPlane)?;
            let ratio = schwarz_pick_ratio(&mesh, &u)?;
            let bound = 1.0 + 5.0 * mesh.h();
            outputs["ratio"] = json!(ratio);
            outputs["bound"] = json!(bound);
            outputs["within_bound"] = json!(ratio <= bound);
        }
        (None, None) => {}
        _ => return Err(CliError::Schema("`domain` and `map_csv` go together".into())),
    }
    let extremal: Vec<f64> = x
        .extremal_points
        .iter()
        .map(|&z| {
            if z.norm() < 1.0 {
                Ok(extremal_ratio(z))
            } else {
                Err(CliError::Precondition(format!("extremal point {z} is not in the unit disc")))
            }
        })
        .collect::<CliResult<_>>()?;
    outputs["extremal"] = json!(extremal);
    Ok(Output::new(outputs, json!({})))
}

fn cyl_bound(a: &CylBoundArgs) -> CliResult<Output> {
    let mut outputs = json!({});
    if let Some(tau) = a.tau {
        outputs["tau"] = json!(tau);
        outputs["bound"] = json!(cylinder_bound(tau)?);
    }
    if let Some(c) = &a.curve {
        let (from, to, count) = (c[0], c[1], c[2]);
        if count < 2.0 || count.fract() != 0.0 {
            return Err(CliError::Precondition(format!("curve needs an integer count of at least 2, got {count}")));
        }
        let n = count as usize;
        let curve = (0..n)
            .map(|k| {
                let tau = from + (to - from) * k as f64 / (n - 1) as f64;
                Ok([tau, cylinder_bound(tau)?])
            })
            .collect::<CliResult<Vec<_>>>()?;
        outputs["curve"] = json!(curve);
    }
    if a.tau.is_none() && a.curve.is_none() {
        return Err(CliError::Schema("cyl-bound needs --tau or --curve".into()));
    }
    Ok(Output::new(outputs, json!({})))
}

fn cyl_experiment(a: &CylExperimentArgs) -> CliResult<Output> {
    let bound = cylinder_bound(a.tau)?;
    let length = a.length.unwrap_or(a.factor * bound);
    let opts = CylinderOptions {
        cells_per_unit: a.cells_per_unit,
        connection_seed: a.connection_seed,
        conjugation_reach: a.conjugation_reach,
        loop_nodes: a.loop_nodes,
        jitter: a.jitter,
        solver: a.solver.options(),
    };
    let seeds: Vec<u64> = (0..a.seeds).collect();
    let exec = if a.sequential { Execution::Sequential } else { Execution::Parallel };
    let report = cylinder_feasibility_experiment(a.tau, length, &seeds, &opts, exec)?;
    let counts = json!({
        "converged-interior": report.count(Outcome::ConvergedInterior),
        "escape": report.count(Outcome::Escape),
        "plateau": report.count(Outcome::Plateau),
    });
    Ok(Output::new(
        json!({
            "tau": report.tau,
            "length": report.length,
            "bound": report.bound,
            "interior_convergences": report.interior_convergences(),
            "counts": counts,
        }),
        json!({ "resolution": report.resolution, "runs": report.runs }),
    ))
}
