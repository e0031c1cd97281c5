//! `sparsecode`: build codes and measurement matrices, certify their
//! properties exhaustively, and run the end-to-end pipelines.
//!
//! Machine-readable JSON goes to stdout, a one-line human summary to stderr.
//! Exit status: 0 pass, 1 property violated or recovery failed, 2 error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "sparsecode", version, about = "Codes, measurement matrices and exhaustive certifiers")]
struct Cli {
    /// Worker threads for subset enumeration (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Construct a code or matrix file (plus `<out>.provenance.json`).
    Build {
        #[command(subcommand)]
        kind: BuildKind,
    },
    /// Certify a property of a code or matrix file.
    Verify(VerifyArgs),
    /// Evaluate every closed-form bound applicable to the given parameters.
    Bounds(BoundsArgs),
    /// Group-testing encode/decode round trip over sparse Boolean inputs.
    GtRoundtrip(GtRoundtripArgs),
    /// Compressed-sensing encode/decode round trip over all small supports.
    CsRoundtrip(CsRoundtripArgs),
    /// Build, certify and compare measured constants against predicted bounds.
    Pipeline {
        #[command(subcommand)]
        name: PipelineName,
    },
}

#[derive(Subcommand, Debug)]
enum BuildKind {
    /// Random linear code at the Gilbert-Varshamov rate.
    GvCode {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        seed: u64,
        /// Rate given up below the GV rate.
        #[arg(long, default_value_t = 0.0)]
        slack: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Reed-Solomon code over GF(q), evaluated at every field element.
    RsCode {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Spherical embedding of a code file.
    Sph {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Boolean embedding of a code file.
    Bool {
        #[arg(long)]
        input: PathBuf,
        /// Scale columns by 1/sqrt(n) and write a complex matrix.
        #[arg(long)]
        normalize: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Kautz-Singleton group-testing matrix from Reed-Solomon.
    KautzSingleton {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Vandermonde matrix, unit-circle nodes unless `--nodes` is given.
    Vandermonde {
        /// Rows.
        #[arg(long)]
        n: usize,
        /// Columns.
        #[arg(long = "N")]
        big_n: Option<usize>,
        /// Comma-separated real nodes.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        nodes: Option<Vec<f64>>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Property {
    Rip2,
    FlatRip,
    Coherence,
    Disjunct,
    Design,
    ListDecode,
    LwiseDistance,
    LwiseBias,
    Kernel,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Embedding {
    Sph,
    Bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Lemma {
    Johnson,
    Converse,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    property: Property,
    /// Code file or matrix JSON.
    #[arg(long)]
    input: PathBuf,
    /// Order (sparsity, subset size, flat order, or list size).
    #[arg(long = "L")]
    order: Option<usize>,
    /// Bound the measured constant is compared against.
    #[arg(long)]
    threshold: Option<f64>,
    /// How a code file is turned into a matrix.
    #[arg(long, value_enum, default_value_t = Embedding::Sph)]
    embedding: Embedding,
    /// Relative radius for list-decode.
    #[arg(long)]
    rho: Option<f64>,
    /// Check a list-decoding lemma instead of a single radius.
    #[arg(long, value_enum)]
    lemma: Option<Lemma>,
    #[arg(long)]
    epsilon: Option<f64>,
}

#[derive(Args, Debug, Default)]
struct BoundsArgs {
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    n: Option<f64>,
    #[arg(long = "N")]
    big_n: Option<u64>,
    #[arg(long = "L")]
    sparsity: Option<u64>,
    #[arg(long)]
    r: Option<u64>,
    #[arg(long = "n-prime")]
    n_prime: Option<u64>,
    #[arg(long)]
    alpha: Option<f64>,
}

#[derive(Args, Debug)]
struct GtRoundtripArgs {
    /// Binary matrix JSON.
    #[arg(long)]
    input: PathBuf,
    /// Maximum input weight.
    #[arg(long = "L")]
    weight: usize,
    /// Used only when the inputs are too many to enumerate.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct CsRoundtripArgs {
    /// Complex matrix JSON.
    #[arg(long)]
    input: PathBuf,
    #[arg(long = "L")]
    sparsity: usize,
    #[arg(long)]
    seed: u64,
    /// Value draws per support.
    #[arg(long, default_value_t = 10)]
    trials: usize,
}

#[derive(Subcommand, Debug)]
enum PipelineName {
    /// Balanced random linear code through the bias, coherence and RIP-2 chain.
    GvRip {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: f64,
        #[arg(long = "L")]
        order: usize,
        #[arg(long)]
        seed: u64,
        /// Random generator rows besides the all-ones row.
        #[arg(long)]
        rows: Option<usize>,
    },
    /// Kautz-Singleton matrix through design, disjunctness and round trip.
    KsGt {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        k: usize,
        #[arg(long = "L", default_value_t = 2)]
        sparsity: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// RIP-2 to list decoding on a +-1/sqrt(n) matrix.
    RipLd {
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "L")]
        order: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        epsilon: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = || commands::run(cli.command);
    let result = match cli.workers {
        Some(0) => Err(anyhow::anyhow!("--workers must be positive")),
        Some(w) => match rayon::ThreadPoolBuilder::new().num_threads(w).build() {
            Ok(pool) => pool.install(run),
            Err(e) => Err(e.into()),
        },
        None => run(),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
