use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "flatcurve",
    version,
    about = "Flat geometry of infinite hyperelliptic curves w^m = f(z)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

/// Flags shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Built-in sequence family.
    #[arg(long, global = true, conflicts_with = "input")]
    pub sequence: Option<String>,
    /// Window JSON file written by `gen`.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Sequence parameter `key=value`; repeatable.
    #[arg(
        long = "param",
        global = true,
        value_name = "K=V",
        allow_hyphen_values = true
    )]
    pub params: Vec<String>,
    /// Window radius R.
    #[arg(long, global = true)]
    pub radius: Option<f64>,
    /// Inner radius r (default R/3).
    #[arg(long, global = true)]
    pub inner: Option<f64>,
    /// Curve degree m in w^m = f(z).
    #[arg(long, global = true, default_value_t = 2)]
    pub m: u32,
    #[arg(
        long,
        global = true,
        value_enum,
        env = "FLATCURVE_MODE",
        default_value = "exact"
    )]
    pub mode: ModeArg,
    /// Tolerance for float mode.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub eps: f64,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Output file (default stdout).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Exact,
    Float,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotKind {
    /// Zeros and saddle connections.
    Saddles,
    /// Unit ticks along holonomy directions.
    Hol,
    /// Both layers.
    All,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a window and print it as JSON.
    Gen,
    /// Check window invariants.
    Validate,
    /// Evaluate the truncated product f at a point.
    Eval {
        /// Evaluation point `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[command(flatten)]
        product: ProductArgs,
    },
    /// Refine each inner zero by Newton's method and check its winding number.
    VerifyZeros {
        /// Also count zeros inside the rectangle `x0,y0,x1,y1`.
        #[arg(long, allow_hyphen_values = true)]
        rect: Option<String>,
        /// Boundary samples for the rectangle count.
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[command(flatten)]
        product: ProductArgs,
    },
    /// List saddle connections.
    Saddles,
    /// List holonomy vectors.
    Hol,
    /// Directions of the holonomy vectors.
    Directions,
    /// Lift a polyline or a saddle connection to the cover.
    Lift {
        /// Polyline `x0,y0;x1,y1;…`.
        #[arg(
            long,
            conflicts_with = "saddle",
            required_unless_present = "saddle",
            allow_hyphen_values = true
        )]
        path: Option<String>,
        /// Start sheet for `--path`.
        #[arg(long, default_value_t = 0)]
        sheet: u32,
        /// Saddle connection given by window indices `i,j`.
        #[arg(long)]
        saddle: Option<String>,
    },
    /// Cone angle at a window zero.
    ConeAngle {
        /// Index of the zero in the window.
        #[arg(long, default_value_t = 0)]
        zero: usize,
        /// Radius of the lifted circle.
        #[arg(long)]
        circle: Option<f64>,
    },
    /// Classify the Veech group.
    Classify {
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Lower and upper stabilizer bounds.
    Sandwich {
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Translation equivalence with a second window, or affine automorphisms.
    Equiv {
        /// Second window JSON file.
        #[arg(long, conflicts_with_all = ["with_sequence", "affine"])]
        with: Option<PathBuf>,
        /// Second window from a sequence family, sharing --radius.
        #[arg(long)]
        with_sequence: Option<String>,
        /// Parameter for the second sequence; repeatable.
        #[arg(long = "with-param", value_name = "K=V", allow_hyphen_values = true)]
        with_params: Vec<String>,
        /// List affine automorphisms of the window instead.
        #[arg(long, conflicts_with = "with_sequence")]
        affine: bool,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Translation-normalized and reciprocal coordinates.
    Moduli {
        /// Apply the translation action by `re,im` to the reciprocal coordinates.
        #[arg(long, allow_hyphen_values = true)]
        action: Option<String>,
    },
    /// Write an SVG picture.
    Plot {
        #[arg(long, value_enum, default_value = "all")]
        kind: PlotKind,
    },
}

#[derive(Args, Debug, Clone)]
pub struct ProductArgs {
    /// `linear` (d(n) = n), `auto`, or a uniform degree.
    #[arg(long, default_value = "linear")]
    pub degrees: String,
    /// Number of factors N (default: all window zeros).
    #[arg(long)]
    pub factors: Option<usize>,
    /// Use untranslated sequence coordinates.
    #[arg(long)]
    pub raw: bool,
}

#[derive(Args, Debug, Clone)]
pub struct SearchArgs {
    /// Bound on matrix entries (default R/r).
    #[arg(long)]
    pub entry_bound: Option<f64>,
    /// Admit contracting matrices.
    #[arg(long)]
    pub allow_contracting: bool,
}
