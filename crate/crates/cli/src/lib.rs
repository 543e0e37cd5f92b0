//! Command-line front end for the Sol geometry toolkit: manifest parsing,
//! dispatch into `solgeo-core`, and CSV/JSON report emission.

use clap::{Args, Parser, Subcommand};
use solgeo_core::SolError;

pub mod commands;
pub mod manifest;
pub mod output;

use output::Format;

/// Errors surfaced to the user; validation problems exit with code 2,
/// numerical failures with code 3.
#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Numerical(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) | CliError::Numerical(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<SolError> for CliError {
    fn from(e: SolError) -> CliError {
        if e.is_validation() {
            CliError::Validation(e.to_string())
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "solgeo",
    version,
    about = "Sol geometry toolkit: torus-bundle invariants, geodesic flow, censuses, and symplectic indices"
)]
pub struct Cli {
    /// Output format (default json; the SOLGEO_FORMAT environment variable
    /// overrides the default).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ManifoldArgs {
    /// Row-major integer matrix `a,b,c,d`.
    #[arg(long, conflicts_with = "manifest")]
    pub matrix: Option<String>,
    /// Lattice scale ε.
    #[arg(long)]
    pub scale: Option<f64>,
    /// `suspension` (default) or `sapphire`.
    #[arg(long)]
    pub kind: Option<String>,
    /// JSON manifest file.
    #[arg(long)]
    pub manifest: Option<String>,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// Initial position `x,y,z`.
    #[arg(long, conflicts_with = "manifest")]
    pub position: Option<String>,
    /// Initial momentum `p_x,p_y,p_z`.
    #[arg(long, conflicts_with = "manifest")]
    pub momentum: Option<String>,
    /// Integration time.
    #[arg(long, allow_hyphen_values = true)]
    pub time: Option<f64>,
    /// Integrator tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Rescale the momentum to unit speed first.
    #[arg(long)]
    pub normalize: bool,
    /// JSON manifest file.
    #[arg(long)]
    pub manifest: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Homology of the torus bundle with the given hyperbolic monodromy.
    Homology(ManifoldArgs),
    /// Closed-geodesic census of a suspension.
    Census {
        #[command(flatten)]
        manifold: ManifoldArgs,
        /// Length cutoff for type-A records.
        #[arg(long)]
        cutoff: Option<f64>,
        /// Also list type-B records up to this period.
        #[arg(long)]
        periods: Option<u32>,
        /// Parallelize the enumeration over this many threads.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Periodic points of the monodromy at a given period.
    Periodic {
        #[command(flatten)]
        manifold: ManifoldArgs,
        /// Period.
        #[arg(long)]
        n: Option<u32>,
    },
    /// Integrate the geodesic flow and print the trajectory.
    Flow {
        #[command(flatten)]
        state: StateArgs,
        /// Number of uniform output samples.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Monodromy of the linearized flow (matrix, eigenvalues, trace).
    Monodromy {
        #[command(flatten)]
        state: StateArgs,
    },
    /// Conley-Zehnder index of a symplectic path.
    Index {
        /// Rotation path at this angular speed.
        #[arg(long, conflicts_with_all = ["hyperbolic", "bott", "type_a_length"])]
        rotation_speed: Option<f64>,
        /// Hyperbolic path diag(e^t, e^{-t}).
        #[arg(long, conflicts_with_all = ["bott", "type_a_length"])]
        hyperbolic: bool,
        /// Bott δ-recipe for the symmetric generator `s11,s12,s21,s22`.
        #[arg(long, conflicts_with = "type_a_length")]
        bott: Option<String>,
        /// Perturbation size for the Bott recipe.
        #[arg(long)]
        delta: Option<f64>,
        /// Composite Morse-Bott index of a closed type-A geodesic.
        #[arg(long)]
        type_a_length: Option<f64>,
        /// Path duration (rotation/hyperbolic/Bott).
        #[arg(long)]
        time: Option<f64>,
        /// Samples along the path.
        #[arg(long, default_value_t = 4096)]
        samples: usize,
    },
    /// Scan the elliptic length bound on a k-grid.
    VerifyBound {
        /// Number of grid points on [0, 1].
        #[arg(long, default_value_t = 100_001)]
        grid: usize,
        /// Quadrature target for the elliptic integrals.
        #[arg(long, default_value_t = 1e-10)]
        quad_tol: f64,
    },
    /// Index budget of a punctured nodal curve tree.
    Curve {
        /// JSON tree manifest.
        #[arg(long)]
        manifest: String,
        /// Leaf budget for the Euler bound (defaults to the leaf count).
        #[arg(long)]
        n0: Option<u32>,
    },
    /// Largest lattice scale keeping the listed classes below the 4 - π
    /// length floor.
    ChooseScale {
        #[command(flatten)]
        manifold: ManifoldArgs,
        /// Classes `m:n,m:n,...`.
        #[arg(long)]
        classes: Option<String>,
    },
}

/// Resolve the output format: flag, then SOLGEO_FORMAT, then json.
pub fn resolve_format(flag: Option<Format>) -> Result<Format, CliError> {
    if let Some(f) = flag {
        return Ok(f);
    }
    match std::env::var("SOLGEO_FORMAT") {
        Ok(v) => match v.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(CliError::Validation(format!(
                "SOLGEO_FORMAT must be json or csv, not `{other}`"
            ))),
        },
        Err(_) => Ok(Format::Json),
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let format = resolve_format(cli.format)?;
    match cli.command {
        Command::Homology(args) => commands::homology(format, &args),
        Command::Census { manifold, cutoff, periods, jobs } => {
            commands::census(format, &manifold, cutoff, periods, jobs)
        }
        Command::Periodic { manifold, n } => commands::periodic(format, &manifold, n),
        Command::Flow { state, samples } => commands::flow(format, &state, samples),
        Command::Monodromy { state } => commands::monodromy(format, &state),
        Command::Index { rotation_speed, hyperbolic, bott, delta, type_a_length, time, samples } => {
            commands::index(format, rotation_speed, hyperbolic, bott, delta, type_a_length, time, samples)
        }
        Command::VerifyBound { grid, quad_tol } => commands::verify_bound(format, grid, quad_tol),
        Command::Curve { manifest, n0 } => commands::curve(format, &manifest, n0),
        Command::ChooseScale { manifold, classes } => {
            commands::choose_scale(format, &manifold, classes.as_deref())
        }
    }
}
