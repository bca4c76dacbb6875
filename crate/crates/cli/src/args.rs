use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spgallai::corpus::Family;
use spgallai::gallai::Algorithm;
use spgallai::oracle::DEFAULT_CAP;

#[derive(Parser, Debug)]
#[command(
    name = "spgallai",
    version,
    about = "Longest paths and Gallai vertices of series-parallel graphs",
    long_about = "Longest paths and Gallai vertices of series-parallel graphs.\n\n\
        Graphs are read in the edge-list format: a header line `n m` followed by m lines `u v` \
        with 0-based vertex ids. Lines starting with `#` are comments.\n\n\
        Exit codes: 0 success, 1 usage error, 2 input error, 3 verification failure."
)]
pub struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Args, Debug)]
pub struct Input {
    /// Edge-list file; standard input when omitted or `-`
    pub input: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether the graph is a partial 2-tree; rejections carry a K4-minor certificate
    Recognize(Input),
    /// Complete a connected partial 2-tree to a spanning 2-tree with real/virtual edge flags
    Embed(Input),
    /// Nice tree decomposition of width at most two
    Decompose(Input),
    /// Longest path length through the tree-decomposition dynamic program
    Lp {
        #[command(flatten)]
        input: Input,
        /// Also print one longest path
        #[arg(long)]
        path: bool,
        /// Include the number of configurations stored at every decomposition node
        #[arg(long)]
        dump_tables: bool,
    },
    /// Gallai vertices: the vertices shared by all longest paths
    Gallai {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = AlgoArg::Fast)]
        algo: AlgoArg,
        /// Exit with status 3 when the Gallai set is empty
        #[arg(long)]
        verify_theorem: bool,
    },
    /// Exhaustive queries for small graphs
    Oracle {
        #[command(subcommand)]
        query: OracleQuery,
    },
    /// Run the constructive search for a Gallai vertex and print every step
    Trace {
        #[command(flatten)]
        input: Input,
        /// Re-check every step against the enumerated longest paths; exit 3 on failure
        #[arg(long)]
        verify: bool,
        /// Largest graph accepted by the longest-path enumeration
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Generate a graph of a family, or a named graph
    Gen(GenArgs),
    /// Check the algorithms against each other and the oracle on random graphs
    Verify(VerifyArgs),
    /// Time the naive and fast Gallai algorithms and check near-linear growth of the fast one
    Bench(BenchArgs),
}

#[derive(Subcommand, Debug)]
pub enum OracleQuery {
    /// Length and number of longest paths
    Longest(OracleOpts),
    /// Gallai set by intersecting all longest paths
    Gallai(OracleOpts),
    /// Split the longest paths by which of u, v, w they contain
    Classify {
        #[command(flatten)]
        opts: OracleOpts,
        #[arg(long)]
        u: usize,
        #[arg(long)]
        v: usize,
        #[arg(long)]
        w: usize,
    },
    /// Whether any two longest paths meet
    Pairwise(Input),
    /// Whether every p longest paths share a vertex
    Pwise {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        p: usize,
    },
    /// Whether a Hamiltonian path and a Hamiltonian cycle exist
    Hamiltonian(Input),
    /// Exact treewidth
    Treewidth(Input),
}

#[derive(Args, Debug)]
pub struct OracleOpts {
    #[command(flatten)]
    pub input: Input,
    /// List every longest path
    #[arg(long)]
    pub dump_paths: bool,
    /// Largest graph accepted by the enumeration
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, value_enum, required_unless_present = "name", conflicts_with = "name", requires = "n")]
    pub family: Option<FamilyArg>,
    /// Number of vertices
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Family-specific density knob (edge deletion probability for series_parallel and outerplanar)
    #[arg(long)]
    pub density: Option<f64>,
    /// Named graph: petersen, wvz, k4, triangle, path:K or star:K
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Number of graphs
    #[arg(long, default_value_t = 500)]
    pub count: usize,
    /// Graphs have between 1 and this many vertices
    #[arg(long, default_value_t = 12)]
    pub max_n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = FamilyArg::SeriesParallel)]
    pub family: FamilyArg,
    /// Worker threads; defaults to the available parallelism
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Where the first failing graph is written
    #[arg(long, default_value = "spgallai-verify-failure.txt")]
    pub dump: PathBuf,
    /// Largest graph checked against the oracle and the proof trace
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Ascending graph sizes
    #[arg(long, value_delimiter = ',', default_values_t = [1_000usize, 10_000, 100_000])]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// The naive algorithm is only timed up to this size
    #[arg(long, default_value_t = 1_000)]
    pub naive_max: usize,
    /// Timed repetitions per measurement; the fastest is reported
    #[arg(long, default_value_t = 3)]
    pub reps: usize,
    /// A single run slower than this many seconds fails the benchmark
    #[arg(long, default_value_t = 120.0)]
    pub budget_secs: f64,
    /// Threads used to generate the inputs; timing itself is sequential
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgoArg {
    Naive,
    Fast,
    Oracle,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Algorithm {
        match a {
            AlgoArg::Naive => Algorithm::Naive,
            AlgoArg::Fast => Algorithm::Fast,
            AlgoArg::Oracle => Algorithm::Oracle,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
#[value(rename_all = "snake_case")]
pub enum FamilyArg {
    Tree,
    Cactus,
    Outerplanar,
    TwoTree,
    SeriesParallel,
    RandomConnected,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Tree => Family::Tree,
            FamilyArg::Cactus => Family::Cactus,
            FamilyArg::Outerplanar => Family::Outerplanar,
            FamilyArg::TwoTree => Family::TwoTree,
            FamilyArg::SeriesParallel => Family::SeriesParallel,
            FamilyArg::RandomConnected => Family::RandomConnected,
        }
    }
}
