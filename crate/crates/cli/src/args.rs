use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "pwldepth", version, about = "Exact depth bounds for ReLU networks and neural network polytopes")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Input file; stdin when omitted or `-`.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Output file; stdout when omitted or `-`.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Emit reports as JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long, global = true, env = "PWLDEPTH_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Number of sample points or random directions used by checks.
    #[arg(long, global = true, default_value_t = 1000)]
    pub samples: usize,
    /// Treat the depth of every CPWL function on ℝⁿ as exactly ⌈log₂(n+1)⌉.
    #[arg(long, global = true)]
    pub assume_conjecture: bool,
    /// Suppress explanatory notes on stderr.
    #[arg(long, short, global = true)]
    pub quiet: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// CPWL expressions.
    #[command(subcommand)]
    Cpwl(CpwlCmd),
    /// ReLU networks.
    #[command(subcommand)]
    Net(NetCmd),
    /// Depth interval rule engine.
    #[command(subcommand)]
    Depth(DepthCmd),
    /// Polytope families and function examples.
    #[command(subcommand)]
    Gen(GenCmd),
    /// Polytope operations and depth bounds.
    #[command(subcommand)]
    Poly(PolyCmd),
    /// Support functions and Newton polytopes.
    #[command(subcommand)]
    Bridge(BridgeCmd),
    /// Acceptance suite.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Args, Debug, Clone, Default)]
pub struct Points {
    /// Evaluation point as comma-separated rationals, e.g. `1,-2/3`. Repeatable.
    #[arg(long = "at", value_name = "POINT")]
    pub at: Vec<String>,
}

#[derive(Subcommand, Debug)]
pub enum CpwlCmd {
    /// Evaluate an expression at given or sampled points.
    Eval(Points),
    /// Compile an expression into a ReLU network.
    Compile,
}

#[derive(Subcommand, Debug)]
pub enum NetCmd {
    /// Evaluate a network at given or sampled points.
    Eval(Points),
    /// Report dimensions, depth and widths.
    Info,
}

#[derive(Subcommand, Debug)]
pub enum DepthCmd {
    /// Interval of f₁ + f₂.
    Sum {
        #[arg(long, value_name = "LO,HI")]
        i1: String,
        #[arg(long, value_name = "LO,HI")]
        i2: String,
    },
    /// Interval of max(f₁, f₂) on ℝⁿ.
    Max {
        #[arg(long, value_name = "LO,HI")]
        i1: String,
        #[arg(long, value_name = "LO,HI")]
        i2: String,
        #[arg(long, alias = "dim")]
        n: usize,
    },
    /// Interval of a max of p affine functions on ℝⁿ.
    AffineMax {
        #[arg(long)]
        p: usize,
        #[arg(long, alias = "dim")]
        n: usize,
        /// The arguments are not known to be affinely independent.
        #[arg(long)]
        dependent: bool,
    },
    /// Replay a certificate, or bound an expression read from the input.
    Interval,
}

#[derive(Subcommand, Debug)]
pub enum GenCmd {
    /// Standard simplex conv{0, e₁, …, eₙ}.
    Simplex {
        #[arg(long, alias = "dim")]
        n: usize,
    },
    /// Cyclic polytope on the moment curve.
    Cyclic {
        #[arg(long, alias = "dim")]
        n: usize,
        #[arg(long, required_unless_present = "params")]
        p: Option<usize>,
        /// Explicit curve parameters, comma-separated.
        #[arg(long)]
        params: Option<String>,
    },
    /// Zonotope from explicit or seeded generic generators.
    Zonotope {
        #[arg(long, alias = "dim")]
        n: usize,
        #[arg(long, required_unless_present = "generators")]
        p: Option<usize>,
        /// Generators separated by `;`, coordinates by `,`.
        #[arg(long)]
        generators: Option<String>,
    },
    /// Bipyramid over a base read from the input, or a built-in solid.
    Bipyramid {
        /// Built-in base when no input is given.
        #[arg(long, value_enum, default_value_t = BuiltinBase::Square)]
        base: BuiltinBase,
        #[arg(long, value_name = "POINT")]
        apex1: Option<String>,
        #[arg(long, value_name = "POINT")]
        apex2: Option<String>,
    },
    /// Prism over a base read from the input, or over a simplex.
    Prism {
        #[arg(long, alias = "dim")]
        n: Option<usize>,
        #[arg(long, value_name = "POINT")]
        direction: Option<String>,
    },
    /// Pyramid over a base read from the input, or over a simplex.
    Pyramid {
        #[arg(long, alias = "dim")]
        n: Option<usize>,
        #[arg(long, value_name = "POINT")]
        apex: Option<String>,
    },
    /// Functions f₁, f₂ of given depths whose max has a given depth.
    MaxExample {
        #[arg(long, alias = "dim")]
        n: usize,
        #[arg(long)]
        m1: usize,
        #[arg(long)]
        m2: usize,
        #[arg(long = "m-star")]
        m_star: usize,
    },
}

#[derive(clap::ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinBase {
    Square,
    Triangle,
}

#[derive(Subcommand, Debug)]
pub enum PolyCmd {
    /// Convex hull of a point set.
    Hull,
    /// Minkowski sum of the input with a second polytope.
    Minksum {
        #[arg(long = "with", value_name = "FILE")]
        other: std::path::PathBuf,
    },
    /// Face lattice, optionally restricted to one dimension.
    Faces {
        #[arg(long)]
        k: Option<usize>,
    },
    /// Vertex-edge graph and a maximum clique.
    Graph,
    /// Zonotope recognition.
    IsZonotope,
    /// Depth interval with certificate.
    Bounds {
        /// Ignore the table of known exact depths.
        #[arg(long)]
        no_known: bool,
        /// Also compare with the support function interval.
        #[arg(long)]
        consistency: bool,
    },
    /// Polygon decomposition, or a vertex split tree in higher dimensions.
    Decompose {
        /// Always use the vertex split tree.
        #[arg(long)]
        split: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum BridgeCmd {
    /// Support function of a polytope as a max of linear functions.
    Support,
    /// Newton polytope of a max of linear functions.
    Newton,
    /// Exact check that support functions turn sums and hulls into + and max.
    CheckHomomorphism {
        #[arg(long = "with", value_name = "FILE")]
        other: std::path::PathBuf,
    },
    /// Compile a construction tree, or a polytope's vertex split, to a network.
    Compile,
}

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    /// Run the acceptance criteria.
    All {
        /// Restrict to the given criterion numbers.
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
}
