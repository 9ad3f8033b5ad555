mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use kruskal_cert::generators::{DEFAULT_ATTEMPTS, DEFAULT_SEED};

/// Exact certificates for uniqueness of tensor decompositions.
///
/// Exit codes: 0 certified, 1 hypothesis fails, 2 not applicable, 3 input or
/// parameter error, 4 oracle budget exceeded, 5 generation failed.
#[derive(Parser, Debug)]
#[command(name = "kruskal-cert", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one criterion; FILE may be a directory of family files.
    Check(CheckArgs),
    /// Tensor and Waring rank lower bounds.
    Bounds(BoundsArgs),
    /// Separator of the assembled tensors, if they split.
    Split(FileArgs),
    /// Connected components of the assembled tensors.
    Components(FileArgs),
    /// Ear decomposition of a connected family.
    Ears(FileArgs),
    /// Per-mode k-ranks and span dimensions.
    Kranks(FileArgs),
    /// Per-mode span dimensions, optionally for every subset.
    Dims(DimsArgs),
    /// Exhaustive searches over a small prime field.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Write generated or catalog families.
    #[command(subcommand)]
    Generate(GenerateCommand),
    /// Recompute a certificate's status from its witness.
    Revalidate(RevalidateArgs),
}

#[derive(Args, Debug)]
struct Out {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FileArgs {
    file: PathBuf,
    #[command(flatten)]
    out: Out,
}

#[derive(Args, Debug)]
struct CheckArgs {
    criterion: String,
    file: PathBuf,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    /// 1-based pivot mode.
    #[arg(long)]
    pivot: Option<usize>,
    /// Side condition number for dls-side.
    #[arg(long)]
    which: Option<u8>,
    /// Comma-separated 1-based order, e.g. 2,1,3.
    #[arg(long)]
    tau: Option<String>,
    /// Mode partition such as "1|2,3"; repeat for several.
    #[arg(long = "partition")]
    partitions: Vec<String>,
    #[arg(long)]
    exhaustive: bool,
    #[arg(long)]
    entry_budget: Option<u64>,
    /// Overrides the subset enumeration cap.
    #[arg(long)]
    max_subset_n: Option<usize>,
    /// Certificate path, or a directory in batch mode.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Subset,
    Mu,
    Waring,
    Flattening,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    file: PathBuf,
    /// Methods to run; all applicable ones by default.
    #[arg(long = "method", value_delimiter = ',')]
    methods: Vec<Method>,
    #[arg(long)]
    max_subset_n: Option<usize>,
    #[command(flatten)]
    out: Out,
}

#[derive(Args, Debug)]
struct DimsArgs {
    file: PathBuf,
    /// Dump the dimensions of every subset.
    #[arg(long)]
    subsets: bool,
    #[arg(long)]
    max_subset_n: Option<usize>,
    #[command(flatten)]
    out: Out,
}

#[derive(Args, Debug, Clone)]
struct BudgetArgs {
    /// Prime to reduce a rational family by.
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    max_candidates: Option<u64>,
    #[arg(long)]
    max_rank: Option<usize>,
    #[arg(long)]
    time_limit_ms: Option<u64>,
}

#[derive(Args, Debug)]
struct OracleFile {
    file: PathBuf,
    #[command(flatten)]
    budget: BudgetArgs,
    #[command(flatten)]
    out: Out,
}

#[derive(Args, Debug)]
struct OraclePivot {
    file: PathBuf,
    /// 1-based pivot mode.
    #[arg(long, default_value_t = 1)]
    pivot: usize,
    #[command(flatten)]
    budget: BudgetArgs,
    #[command(flatten)]
    out: Out,
}

#[derive(Args, Debug)]
struct OraclePair {
    first: PathBuf,
    second: PathBuf,
    #[command(flatten)]
    budget: BudgetArgs,
    #[command(flatten)]
    out: Out,
}

#[derive(Subcommand, Debug)]
enum OracleCommand {
    /// Tensor rank of the sum.
    Rank(OracleFile),
    /// Every decomposition of the sum into R distinct terms.
    Decomps {
        #[command(flatten)]
        inner: OracleFile,
        #[arg(long)]
        r: usize,
    },
    /// Whether the family is the only decomposition with at most RMAX terms.
    Unique {
        #[command(flatten)]
        inner: OracleFile,
        #[arg(long)]
        rmax: usize,
    },
    ConditionU(OraclePivot),
    #[command(name = "condition-2")]
    ConditionTwo(OraclePivot),
    #[command(name = "condition-3")]
    ConditionThree(OraclePivot),
    #[command(name = "condition-6")]
    ConditionSix(OraclePivot),
    /// An (s, l)-subpartition of two decompositions of the same tensor.
    Subpartition {
        #[command(flatten)]
        inner: OraclePair,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        l: usize,
    },
    /// Blocks with more terms on the first side and equal sums.
    Reducible(OraclePair),
    /// A subset whose sum has rank below R_TILDE.
    Deficient {
        #[command(flatten)]
        inner: OracleFile,
        #[arg(long)]
        r_tilde: usize,
    },
}

#[derive(Args, Debug, Clone)]
struct GenCommon {
    /// Prime field; the rationals when omitted.
    #[arg(long)]
    p: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_ATTEMPTS)]
    attempts: usize,
}

#[derive(Subcommand, Debug)]
enum GenerateCommand {
    /// A verified circuit with n = sum (d_j - 1) + 2.
    Circuit {
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        #[arg(long)]
        symmetric: bool,
        #[command(flatten)]
        common: GenCommon,
        #[command(flatten)]
        out: Out,
    },
    /// A pair meeting the mu bound with equality.
    SharpTensor {
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        kranks: Vec<usize>,
        /// 1-based mode with mu = 2(d_i - k_i).
        #[arg(long)]
        mode: usize,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: GenCommon,
        /// Write e.json, f.json and instance.json here.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// A symmetric pair with n + r = m + 2d - 2, or the k-rank variant with --k.
    SharpSymmetric {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        common: GenCommon,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// A two-mode family whose matrix rank is 2d - n.
    Sylvester {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: GenCommon,
        #[command(flatten)]
        out: Out,
    },
    /// A catalog entry, or "identity" / "symmetric-identity" with --n and --m.
    Fixture {
        name: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        p: Option<u64>,
        #[command(flatten)]
        out: Out,
    },
    /// Every catalog entry with its expectations.
    Fixtures {
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Args, Debug)]
struct RevalidateArgs {
    certificate: PathBuf,
    /// Also rerun the criterion on this family after checking its hash.
    #[arg(long)]
    family: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match commands::run(cli.command) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    };
    ExitCode::from(code)
}
