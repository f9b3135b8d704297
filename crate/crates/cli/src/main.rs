//! `ogs`: constructions, statistics, verifications and searches over `G(r,p,n)`.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "ogs", version, about = "Ordered generating systems of colored permutation groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Largest group order that will be enumerated.
    #[arg(long, default_value_t = 1_000_000, global = true)]
    pub max_order: u64,

    /// Wall-clock limit for `search`, in seconds.
    #[arg(long, default_value_t = 60, global = true)]
    pub time_limit: u64,

    /// Worker threads for `search` (0 = all cores, 1 = sequential).
    #[arg(long, default_value_t = 0, global = true)]
    pub workers: usize,

    /// Include timings in the output.
    #[arg(long, short, global = true)]
    pub verbose: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "verbatim")]
pub enum Family {
    #[value(alias = "a")]
    A,
    #[value(alias = "b")]
    B,
    #[value(alias = "d")]
    D,
    #[value(alias = "bplus", alias = "B+")]
    Bplus,
    /// The τ-basis of `G(r,n)`; needs `--r`.
    #[value(alias = "tau")]
    Tau,
}

#[derive(Args, Debug, Clone, Default)]
pub struct GroupArgs {
    #[arg(long)]
    pub r: Option<u32>,
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Classical family instead of `--r/--p`.
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    /// Override the α of the u-basis.
    #[arg(long)]
    pub alpha: Option<u32>,
    /// Use `βp - 1` as the last color of `u_{n-1}`.
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<i64>,
    /// Use the zero last generator (needs `r = p`).
    #[arg(long)]
    pub zero: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Table,
    Peel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SeriesKind {
    Fmaj,
    Poincare,
    Hilbert,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Property {
    Mahonian,
    Hilbertian,
    PsiTheta,
    Parity,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ThetaArg {
    Prose,
    Display,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a basis and check that its products cover the group exactly once.
    Basis {
        #[command(flatten)]
        group: GroupArgs,
    },
    /// Exponent vector and fmaj of one element.
    Decompose {
        element: String,
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_enum, default_value_t = MethodArg::Table)]
        method: MethodArg,
    },
    /// fmaj of one element.
    Fmaj {
        element: String,
        #[command(flatten)]
        group: GroupArgs,
    },
    /// Generating functions.
    Series {
        #[arg(value_enum)]
        kind: SeriesKind,
        #[command(flatten)]
        group: GroupArgs,
    },
    /// Exhaustive identity checks; exits 1 if any fails.
    Verify {
        #[arg(value_enum)]
        property: Property,
        #[command(flatten)]
        group: GroupArgs,
        /// Branch condition used by θ.
        #[arg(long, value_enum, default_value_t = ThetaArg::Prose)]
        theta: ThetaArg,
    },
    /// Search for a perfect Hilbertian basis.
    Search {
        #[command(flatten)]
        group: GroupArgs,
        /// Stop after this many candidates.
        #[arg(long)]
        max_candidates: Option<u64>,
    },
    /// Admissible α over a range of parameters.
    AlphaScan {
        #[arg(long, default_value_t = 12)]
        r_max: u32,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.rendered);
            ExitCode::from(out.exit)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
