//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "pottsmf",
    version,
    about = "Potts/Ising models on weighted graphs: exact oracles, mean-field solvers, spectral diagnostics, and closed-form limits",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Emit the run report as JSON on stdout (the default output)
    #[arg(long, global = true)]
    pub json: bool,

    /// Also write command-specific CSV rows to this path
    #[arg(long, global = true, value_name = "PATH")]
    pub csv: Option<PathBuf>,

    /// Seed for ensemble generation and solver restarts
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Enumeration budget in configurations
    #[arg(long, global = true, default_value_t = 1 << 24)]
    pub cap: u128,

    /// Convergence tolerance for coordinate ascent
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,

    /// Sweep cap for coordinate ascent
    #[arg(long, global = true, default_value_t = 500)]
    pub max_sweeps: usize,

    /// Restart count for coordinate ascent (default q + 3)
    #[arg(long, global = true)]
    pub restarts: Option<usize>,

    /// Damping in [0, 1); positive values forfeit monotone ascent
    #[arg(long, global = true, default_value_t = 0.0)]
    pub damping: f64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a coupling matrix and write it in the matrix file format
    Gen {
        #[command(flatten)]
        source: SourceArgs,
        /// Output path for the matrix file
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
    /// Spectral, row-sum, and L1 diagnostics for a coupling matrix
    Diagnose {
        #[command(flatten)]
        source: SourceArgs,
        /// Spectral resolution: counts eigenvalues above eps/2
        #[arg(long, default_value_t = 1.0)]
        eps: f64,
        /// Row-sum deviation threshold
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        /// Trace threshold for the finite-n mean-field heuristic flag
        #[arg(long, default_value_t = 0.1)]
        mf_threshold: f64,
        /// Vertex-enumeration cap for the exact L1 supremum
        #[arg(long, default_value_t = 16)]
        l1_cap: usize,
    },
    /// Exact log partition function by full enumeration
    Exact {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Mean-field variational solve by multistart coordinate ascent
    Mf {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Exact vs mean-field gap, optionally swept over n
    Compare {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Closed-form limits
    Limit {
        #[command(subcommand)]
        which: LimitCommand,
    },
    /// Exact magnetization law against the predicted concentration points
    Concentration {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        model: ModelArgs,
        /// Half-width of the window around each predicted location
        #[arg(long, default_value_t = 0.15)]
        window: f64,
    },
    /// Step-graphon operations
    Graphon {
        #[command(subcommand)]
        which: GraphonCommand,
    },
}

#[derive(Subcommand, Debug)]
pub enum LimitCommand {
    /// One-dimensional variational limit on asymptotically regular graphs
    Cw {
        #[arg(long, default_value_t = 2)]
        q: usize,
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        #[command(flatten)]
        field: FieldArgs,
        /// Sweep beta over `start:stop:points` and emit one row per value
        #[arg(long, value_name = "START:STOP:POINTS")]
        beta_sweep: Option<String>,
    },
    /// Ising limit on bi-regular bipartite graphs with side fraction p
    Bipartite {
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long)]
        p: f64,
        #[arg(long, value_name = "START:STOP:POINTS")]
        beta_sweep: Option<String>,
    },
    /// Rate-function minimizers of the empirical color measure
    Ldp {
        #[arg(long, default_value_t = 2)]
        q: usize,
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_name = "START:STOP:POINTS")]
        beta_sweep: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum GraphonCommand {
    /// Exact cut norm and infinity-to-one norm
    Cutnorm {
        #[command(flatten)]
        source: GraphonSourceArgs,
    },
    /// Maximize the block functional over fractional partitions
    Fsup {
        #[command(flatten)]
        source: GraphonSourceArgs,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Permutation upper bound on the cut distance of two step graphons
    Dist {
        /// First step-graphon file
        first: PathBuf,
        /// Second step-graphon file
        second: PathBuf,
    },
}

/// Where the coupling matrix comes from: a named ensemble or a file.
#[derive(Args, Debug, Clone)]
pub struct SourceArgs {
    /// Ensemble: complete | regular-circulant | hypercube | erdos-renyi |
    /// complete-bipartite | bipartite-circulant | star | sk | hopfield
    #[arg(long, conflicts_with = "matrix")]
    pub ensemble: Option<String>,

    /// Matrix file in the dense or sparse format
    #[arg(long, value_name = "PATH")]
    pub matrix: Option<PathBuf>,

    /// Vertex count; `compare` accepts a comma-separated sweep list
    #[arg(long, value_name = "N[,N...]", allow_hyphen_values = false)]
    pub n: Option<String>,

    /// Degree (regular-circulant) or dimension (hypercube)
    #[arg(long)]
    pub d: Option<usize>,

    /// Edge probability (erdos-renyi)
    #[arg(long)]
    pub p: Option<f64>,

    /// Left side size (bipartite ensembles)
    #[arg(long)]
    pub a: Option<usize>,

    /// Right side size (bipartite ensembles)
    #[arg(long)]
    pub b: Option<usize>,

    /// Left degree (bipartite-circulant)
    #[arg(long)]
    pub c: Option<usize>,

    /// Pattern count (hopfield)
    #[arg(long)]
    pub m: Option<usize>,

    /// Keep the star graph unscaled
    #[arg(long)]
    pub raw: bool,
}

/// Color coupling and field.
#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    /// Number of colors
    #[arg(long, default_value_t = 2)]
    pub q: usize,

    /// Coupling strength: J = beta * I_q
    #[arg(long, conflicts_with = "j_file", allow_hyphen_values = true)]
    pub beta: Option<f64>,

    /// q x q color coupling matrix file (dense matrix format)
    #[arg(long = "J", value_name = "PATH")]
    pub j_file: Option<PathBuf>,

    #[command(flatten)]
    pub field: FieldArgs,
}

/// Where a step graphon comes from: a graphon file or a matrix file.
#[derive(Args, Debug, Clone)]
pub struct GraphonSourceArgs {
    /// Step-graphon file
    #[arg(long, value_name = "PATH", conflicts_with = "matrix")]
    pub graphon: Option<PathBuf>,

    /// Matrix file; blocks get mass 1/n
    #[arg(long, value_name = "PATH")]
    pub matrix: Option<PathBuf>,

    /// Multiply matrix entries by n when building the graphon
    #[arg(long)]
    pub times_n: bool,
}

/// External field, either as a scalar on the first color or a full vector.
#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    /// Field on color 1: expands to h = (B, 0, ..., 0)
    #[arg(long = "B", conflicts_with = "h", allow_hyphen_values = true)]
    pub b_field: Option<f64>,

    /// Comma-separated field vector h
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<String>,
}
