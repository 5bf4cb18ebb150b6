use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hypflat_core::cr::{CylinderOptions, SolverOptions, DEFAULT_TOL};
use hypflat_core::hyperbolic::CLASSIFY_TOL;
use hypflat_core::moduli::config::TRACE_TOL;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "hypflat", version, about = "Flat hyperbolic connections, rotation numbers and CR boundary value problems")]
pub struct Cli {
    #[command(flatten)]
    pub io: IoArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Input and output locations. These are not part of the job, so they are
/// left out of the envelope and its hash.
#[derive(Debug, Args)]
pub struct IoArgs {
    /// JSON input file, `-` for standard input. For `plot`, an envelope.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Inline JSON input.
    #[arg(long, global = true, conflicts_with = "input")]
    pub json: Option<String>,
    /// Output file: the envelope, or the SVG for `plot`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Directory for outputs when `--out` is not given, as `<command>.json`.
    #[arg(long, global = true, env = "HYPFLAT_OUT_DIR")]
    pub out_dir: Option<PathBuf>,
    /// CSV file for grid outputs; defaults to the envelope path with a
    /// `.csv` extension.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    /// Treat solver nonconvergence as an error (exit status 4).
    #[arg(long, global = true)]
    pub strict: bool,
    /// Do not print the envelope.
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Conjugacy class, trace and fixed points of a PU(1,1) element.
    Classify(ClassifyArgs),
    /// Parallel transport of a path connection between two times.
    Transport(NoArgs),
    /// Holonomy of a loop connection with its rotation number.
    Holonomy(NoArgs),
    /// Rotation number and lifted shifts of a loop's holonomy.
    Rotnum(NoArgs),
    /// Gauge transformation of a path connection.
    Gauge(NoArgs),
    /// Membership in one of the configuration spaces.
    CheckSpace(CheckSpaceArgs),
    /// Seeded construction of a member of a configuration space.
    Construct(ConstructArgs),
    /// Sheet of the leading label of a punctured configuration.
    SheetIndex(NoArgs),
    /// Schwarz integral of a density on the real line.
    SchwarzIntegral(SchwarzIntegralArgs),
    /// Solves the CR boundary value problem.
    SolveCr(SolverArgs),
    /// Geometric and topological energy of a map.
    Energy(SolverArgs),
    /// The boundary primitive along a geodesic germ.
    BetaForm(NoArgs),
    /// Schwarz–Pick ratio of a half-plane valued map on a disc grid.
    SchwarzPick(NoArgs),
    /// The cylinder length bound L(τ).
    CylBound(CylBoundArgs),
    /// Multi-seed feasibility experiment on a cylinder.
    CylExperiment(CylExperimentArgs),
    /// Renders an envelope as SVG.
    Plot(PlotArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify(_) => "classify",
            Command::Transport(_) => "transport",
            Command::Holonomy(_) => "holonomy",
            Command::Rotnum(_) => "rotnum",
            Command::Gauge(_) => "gauge",
            Command::CheckSpace(_) => "check-space",
            Command::Construct(_) => "construct",
            Command::SheetIndex(_) => "sheet-index",
            Command::SchwarzIntegral(_) => "schwarz-integral",
            Command::SolveCr(_) => "solve-cr",
            Command::Energy(_) => "energy",
            Command::BetaForm(_) => "beta-form",
            Command::SchwarzPick(_) => "schwarz-pick",
            Command::CylBound(_) => "cyl-bound",
            Command::CylExperiment(_) => "cyl-experiment",
            Command::Plot(_) => "plot",
        }
    }

    /// The subcommand's own flags, echoed into the envelope.
    pub fn flags(&self) -> serde_json::Value {
        let v = serde_json::to_value(self).expect("flags serialize");
        match v {
            serde_json::Value::Object(mut m) => m.remove(self.name()).unwrap_or(serde_json::Value::Null),
            other => other,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct NoArgs {}

#[derive(Debug, Args, Serialize)]
pub struct ClassifyArgs {
    /// Band around |tr| = 2 treated as parabolic.
    #[arg(long, default_value_t = CLASSIFY_TOL)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Space {
    PaffInterval,
    PInterval,
    PtauCircle,
    CAff,
    C,
    CTau,
}

#[derive(Debug, Args, Serialize)]
pub struct CheckSpaceArgs {
    #[arg(long, value_enum)]
    pub space: Space,
    /// Tolerance on ||tr| - τ|.
    #[arg(long, default_value_t = TRACE_TOL)]
    pub trace_tol: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    Interval,
    Ptau,
    CTau,
}

#[derive(Debug, Args, Serialize)]
pub struct ConstructArgs {
    #[arg(long, value_enum)]
    pub target: Target,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Trace of the holonomy, for `ptau` and `c-tau`.
    #[arg(long)]
    pub tau: Option<f64>,
    /// Number of labels minus one, for `c-tau`.
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub lambda0: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub lambda1: f64,
    /// Samples of the constructed connection.
    #[arg(long, default_value_t = 2048)]
    pub n: usize,
    /// Tolerance on ||tr| - τ| for the membership check of `ptau`.
    #[arg(long, default_value_t = TRACE_TOL)]
    pub trace_tol: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct SchwarzIntegralArgs {
    /// Absolute tolerance of the adaptive quadrature.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct SolverArgs {
    /// Target for the area-weighted L² residual.
    #[arg(long, default_value_t = SolverOptions::default().tol)]
    pub tol: f64,
    #[arg(long, default_value_t = SolverOptions::default().max_iter)]
    pub max_iter: usize,
    /// Escape margin factor `f` in `c = min(f·h, 1/2)`.
    #[arg(long, default_value_t = SolverOptions::default().escape_factor)]
    pub escape_factor: f64,
    #[arg(long, default_value_t = SolverOptions::default().linear_tol)]
    pub linear_tol: f64,
    #[arg(long, default_value_t = SolverOptions::default().linear_max_iter)]
    pub linear_max_iter: usize,
}

impl SolverArgs {
    pub fn options(&self) -> SolverOptions {
        SolverOptions {
            tol: self.tol,
            max_iter: self.max_iter,
            escape_factor: self.escape_factor,
            linear_tol: self.linear_tol,
            linear_max_iter: self.linear_max_iter,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct CylBoundArgs {
    #[arg(long)]
    pub tau: Option<f64>,
    /// Samples L on an even τ-grid: FROM TO COUNT.
    #[arg(long, num_args = 3, value_names = ["FROM", "TO", "COUNT"])]
    pub curve: Option<Vec<f64>>,
}

#[derive(Debug, Args, Serialize)]
pub struct CylExperimentArgs {
    #[arg(long)]
    pub tau: f64,
    /// Cylinder length; defaults to `factor · L(τ)`.
    #[arg(long)]
    pub length: Option<f64>,
    #[arg(long, default_value_t = 1.2, conflicts_with = "length")]
    pub factor: f64,
    /// Runs seeds `0..seeds`.
    #[arg(long, default_value_t = 20)]
    pub seeds: u64,
    /// Runs the seeds one after another.
    #[arg(long)]
    pub sequential: bool,
    #[arg(long, default_value_t = CylinderOptions::default().cells_per_unit)]
    pub cells_per_unit: usize,
    #[arg(long, default_value_t = CylinderOptions::default().connection_seed)]
    pub connection_seed: u64,
    #[arg(long, default_value_t = CylinderOptions::default().conjugation_reach)]
    pub conjugation_reach: f64,
    #[arg(long, default_value_t = CylinderOptions::default().loop_nodes)]
    pub loop_nodes: usize,
    #[arg(long, default_value_t = CylinderOptions::default().jitter)]
    pub jitter: f64,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Style {
    /// Chooses by payload.
    Auto,
    /// Poincaré disc with points, geodesics and grid images.
    Disc,
    /// Line chart of a sampled curve.
    Curve,
}

#[derive(Debug, Args, Serialize)]
pub struct PlotArgs {
    #[arg(long, value_enum, default_value_t = Style::Auto)]
    pub style: Style,
    /// Width and height in pixels.
    #[arg(long, default_value_t = 480)]
    pub size: u32,
}
