use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "regfac",
    version,
    about = "Continued fractions of square roots, the principal cycle of reduced forms, and regulator-assisted factoring"
)]
pub struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// `key = value` file; flags override its entries.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(flatten)]
    pub overrides: Overrides,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default)]
pub struct Overrides {
    /// Continued-fraction steps allowed while looking for the period.
    #[arg(long, global = true, value_name = "K")]
    pub step_cap: Option<u64>,

    /// Trial-division bound used by `classify`.
    #[arg(long, global = true, value_name = "B")]
    pub trial_bound: Option<u64>,

    /// Largest input size for computing the regulator by traversal.
    #[arg(long, global = true, value_name = "BITS")]
    pub max_traversal_bits: Option<u32>,

    /// Longest traversal that is cross-checked against the Pell solution.
    #[arg(long, global = true, value_name = "STEPS")]
    pub cross_check_limit: Option<u64>,

    /// Mantissa bits for distances; only 53 is available.
    #[arg(long, global = true, value_name = "BITS")]
    pub precision_bits: Option<u32>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Continued fraction of √N: a₀, one period, its length.
    Expand { n: String },
    /// Convergents p/q of √N with their norms p² − Nq².
    Convergents {
        n: String,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// N = a² + b² from an odd-period expansion.
    Sum2sq { n: String },
    /// Period parity and central-term predictions with the rule used.
    Classify {
        n: String,
        #[arg(long, requires = "q", value_name = "P")]
        p: Option<String>,
        #[arg(long, requires = "p", value_name = "Q")]
        q: Option<String>,
        /// Compare the predictions with the actual expansion.
        #[arg(long)]
        verify: bool,
    },
    /// The principal cycle of reduced forms with cumulative distances.
    Cycle { n: String },
    /// R⁺(N) by walking the principal cycle.
    ///
    /// Traversal is the only built-in regulator source and its cost grows
    /// like √N. Subexponential factoring times assume a subexponential
    /// regulator algorithm, which is not provided here; a value computed
    /// elsewhere can be passed to `factor --regulator`.
    #[command(verbatim_doc_comment)]
    Regulator { n: String },
    /// Factor N with the regulator from traversal or from the command line.
    Factor {
        n: String,
        /// R⁺(N) as a decimal string.
        #[arg(long, value_name = "R", conflicts_with = "regulator_multiple")]
        regulator: Option<String>,
        /// A positive integer multiple of R⁺(N) as a decimal string.
        #[arg(long, value_name = "R")]
        regulator_multiple: Option<String>,
        /// Replaces the scan length or the two-sided walk budget.
        #[arg(long, value_name = "K")]
        imax_override: Option<u64>,
    },
    /// Factor every member of a class in a range and summarize.
    Bench {
        /// Half-open range `A..B`.
        #[arg(long, value_name = "A..B")]
        range: String,
        #[arg(long, value_enum, default_value_t = BenchClass::Odd)]
        class: BenchClass,
        #[arg(long, value_name = "W")]
        workers: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenchClass {
    /// pq with p ≡ q ≡ 3 (mod 4).
    #[value(name = "3x3mod4")]
    ThreeByThree,
    /// pq with p ≡ 5 (mod 8), q ≡ 3 (mod 4).
    #[value(name = "5mod8x3mod4")]
    FiveByThree,
    /// N ≡ 1 (mod 4) with a prime factor ≡ 3 (mod 4).
    #[value(name = "f")]
    OneModFourWithThree,
    /// Every odd composite non-square.
    #[value(name = "odd")]
    Odd,
}
