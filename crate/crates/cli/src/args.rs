use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "nrange",
    version,
    about = "Higher-rank numerical ranges, C-numerical ranges and unitary dilations",
    long_about = "Higher-rank numerical ranges, C-numerical ranges and unitary dilations.\n\n\
Input files are JSON: a matrix {\"rows\": n, \"cols\": m, \"entries\": [[re, im], ...]} \
(row-major), a spectral model {\"atoms\": [{\"re\": x, \"im\": y, \"mult\": 2 | \"inf\"}]}, \
or the shorthand {\"shift\": n} for the n x n unilateral shift.\n\n\
Errors are reported as one JSON object on stderr. Exit status: 0 success (or passed \
report), 1 failed report, 2 error."
)]
pub struct Cli {
    /// Worker threads for the data-parallel loops (1 runs sequentially).
    #[arg(long, global = true, env = "NRANGE_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Svg,
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Path prefix for artifacts; without it the result goes to stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,

    /// Artifact format. `range` and `oracle` write SVG and CSV by default.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// JSON input file.
    #[arg(long, short)]
    pub input: Option<PathBuf>,

    /// Use the n x n unilateral shift instead of an input file.
    #[arg(long, conflicts_with = "input")]
    pub shift: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank-k numerical range of a matrix or spectral model.
    ///
    /// `--k inf` is accepted for spectral models (intersection over all k)
    /// and for matrices, where it equals the rank-n range.
    Range {
        #[command(flatten)]
        input: InputArgs,
        /// Rank index: a positive integer or "inf".
        #[arg(long, default_value = "1")]
        k: String,
        #[arg(long, default_value_t = 720)]
        grid: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// C-numerical range: interval, region or Monte-Carlo cloud.
    ///
    /// Hermitian input with real descending weights gives an interval; real
    /// descending weights give a convex region; anything else a point cloud.
    Cnum {
        #[command(flatten)]
        input: InputArgs,
        /// Comma-separated weights; complex weights as re:im (e.g. "1,0.5:1").
        #[arg(long, allow_hyphen_values = true)]
        weights: String,
        #[arg(long, default_value_t = 720)]
        grid: usize,
        /// Sample count for point clouds.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Force a point cloud even for real sorted weights.
        #[arg(long)]
        cloud: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Build a unitary (or contractive) dilation and print its JSON descriptor.
    Dilate {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = DilationChoice::Halmos)]
        kind: DilationChoice,
        #[arg(long, default_value = "1")]
        k: String,
        /// Direction for extremal dilations, in radians.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta: f64,
        /// Prescribed unimodular eigenvalue "re,im" (multiplicity = defect number).
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Optimizer restarts.
        #[arg(long, default_value_t = 16)]
        budget: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run a verification harness and emit its report.
    Verify {
        #[arg(value_enum)]
        check: Check,
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value = "1")]
        k: String,
        #[arg(long, default_value_t = 720)]
        grid: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Optimizer restarts per direction.
        #[arg(long, default_value_t = 16)]
        budget: usize,
        /// Sampled dilations (cnum-gap: 1000, inf-example: 16).
        #[arg(long)]
        samples: Option<usize>,
        /// Largest section size (trunc).
        #[arg(long, default_value_t = 64)]
        n_max: usize,
        /// Number of directions (trunc).
        #[arg(long, default_value_t = 8)]
        directions: usize,
        /// Section generator (trunc).
        #[arg(long, value_enum, default_value_t = Generator::Shift)]
        generator: Generator,
        /// Rank indices (inf-example), comma-separated.
        #[arg(long, default_value = "1,2,3")]
        k_list: String,
        /// Truncation level of the spectral model (inf-example).
        #[arg(long, default_value_t = 40)]
        n_trunc: usize,
        /// Keep wall-clock runtime in the report (makes output nondeterministic).
        #[arg(long)]
        timing: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Closed-form reference regions.
    Oracle {
        #[command(subcommand)]
        which: Oracle,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DilationChoice {
    /// [[A, -D_{A*}], [D_A, A*]].
    Halmos,
    /// [[A, -D_{A*} Uo], [D_A, A* Uo]] with a seeded Haar Uo.
    Family,
    /// Minimal (n + d)-dilation with seeded Haar V, W.
    Minimal,
    /// Minimal dilation keeping lambda_k of Re(e^{i theta} A).
    Extremal,
    /// Minimal dilation with a prescribed eigenvalue of multiplicity d.
    Prescribed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Glw,
    Bt,
    Trunc,
    Normal,
    CnumGap,
    InfExample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Generator {
    /// diag(1 - 1/m).
    Diagonal,
    /// Unilateral shift with unit weights.
    Shift,
    /// Blocks diag(-1/m, e^{i pi/m}/m), m = 2, 3, ...
    Blocks,
}

#[derive(Debug, Subcommand)]
pub enum Oracle {
    /// Disk of radius cos(k pi / (n + 1)) for the n x n shift (empty for large k).
    Shift {
        n: usize,
        k: usize,
        #[arg(long, default_value_t = 720)]
        grid: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
}
