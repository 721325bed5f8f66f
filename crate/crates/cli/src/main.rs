//! `nlab`: batch front end for the noetherian-lab library.
//!
//! Every command prints one JSON document. Exit codes: 0 when the command's
//! verdict is positive, 1 on a property failure, 2 on usage or input errors.

mod commands;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "nlab",
    version,
    about = "Exact finite-sample laboratory for closed Noetherian graphs"
)]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Trials per campaign suite.
    #[arg(long, global = true, default_value_t = 100)]
    trials: usize,
    /// Bound parameter, written `--bound.NAME VALUE` or `--bound NAME=VALUE`.
    #[arg(long = "bound", global = true, value_name = "NAME=VALUE", value_parser = parse_bound)]
    bounds: Vec<(String, u64)>,
    /// Run everything on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate an instance file.
    Gen(GenArgs),
    /// Adjacency queries.
    Adj {
        instance: PathBuf,
        /// Two universe indices; without it all edges are listed.
        #[arg(long, num_args = 2, value_names = ["I", "J"])]
        pair: Option<Vec<usize>>,
    },
    /// Pattern, clique and K_{2,n} detection.
    #[command(subcommand)]
    Detect(DetectCmd),
    /// Neighborhood lattice report.
    Lattice {
        instance: PathBuf,
        /// Comma-separated universe indices to examine in detail.
        #[arg(long, value_delimiter = ',')]
        set: Option<Vec<usize>>,
        #[arg(long, default_value_t = 2)]
        max_arity: usize,
    },
    /// Box colorings: greedy, extension of a condition, stitching, verification.
    Color {
        instance: PathBuf,
        /// P-condition file to extend.
        #[arg(long)]
        condition: Option<PathBuf>,
        /// Stage chain file to stitch (needs --condition, or uses the empty condition).
        #[arg(long)]
        stages: Option<PathBuf>,
        /// Only verify this coloring file.
        #[arg(long, conflicts_with_all = ["condition", "stages"])]
        verify: Option<PathBuf>,
    },
    /// Coloring and control poset operations.
    #[command(subcommand)]
    Poset(PosetCmd),
    /// Hamming truncations and embeddings.
    #[command(subcommand)]
    Hamming(HammingCmd),
    /// Randomized property campaign.
    Campaign {
        /// Suite to run (repeatable); default is every suite but the mutation self-test.
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// List the suites and exit.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum GenKind {
    Line,
    Plane,
    Hamming,
    Explicit,
    Diagonal,
    Uniform,
}

#[derive(Args, Debug)]
struct GenArgs {
    kind: GenKind,
    #[arg(long, default_value_t = 12)]
    max_points: usize,
    #[arg(long, default_value_t = 30)]
    edge_percent: u64,
    /// Breadth of a Hamming truncation.
    #[arg(long, default_value_t = 3)]
    breadth: usize,
    #[arg(long, default_value_t = 2)]
    alphabet: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Half,
    ThreeQuarter,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Clique,
    Anticlique,
}

#[derive(Subcommand, Debug)]
enum DetectCmd {
    /// Induced prefix of a half or three-quarter graph variation.
    Pattern {
        instance: PathBuf,
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, value_enum)]
        left: SideArg,
        #[arg(long, value_enum)]
        right: SideArg,
        #[arg(long)]
        depth: usize,
    },
    Clique {
        instance: PathBuf,
        #[arg(long)]
        size: usize,
    },
    K2n {
        instance: PathBuf,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand, Debug)]
enum PosetCmd {
    /// Compatibility of two conditions.
    Compat {
        instance: PathBuf,
        first: PathBuf,
        second: PathBuf,
        /// Read control conditions instead of box conditions.
        #[arg(long)]
        control: bool,
    },
    /// Common lower bound of a JSON array of box conditions.
    LowerBound {
        instance: PathBuf,
        conditions: PathBuf,
        #[arg(long)]
        point: Option<usize>,
    },
    /// Pairwise compatible subset of control conditions at a location.
    Ramsey {
        instance: PathBuf,
        conditions: PathBuf,
        location: PathBuf,
        #[arg(long, default_value_t = 3)]
        size: usize,
    },
    /// Liminf thinning of control conditions at a location.
    Liminf {
        instance: PathBuf,
        conditions: PathBuf,
        location: PathBuf,
        /// Comma-separated test points.
        #[arg(long, value_delimiter = ',')]
        test: Vec<usize>,
    },
    /// Predensity of a family of control conditions.
    Predense {
        instance: PathBuf,
        family: PathBuf,
        /// Colors below this bound are tried; default is a sufficient budget.
        #[arg(long)]
        budget: Option<u64>,
        /// Reduce this incompatible condition instead (needs --location).
        #[arg(long, requires = "location")]
        reduce: Option<PathBuf>,
        #[arg(long)]
        location: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum HammingCmd {
    Gen {
        #[arg(long)]
        breadth: usize,
        /// Uniform alphabet size; the diagonal truncation when absent.
        #[arg(long)]
        alphabet: Option<u64>,
    },
    Chi {
        #[arg(long)]
        breadth: usize,
    },
    Vitali {
        #[arg(long)]
        breadth: usize,
        #[arg(long)]
        alphabet: usize,
    },
    Embed {
        #[arg(long)]
        breadth: usize,
    },
    /// Piecewise chromatic check; pieces file: [{"n": 1, "points": [0, 2]}, ...].
    Sigma {
        #[arg(long)]
        breadth: usize,
        pieces: PathBuf,
    },
}

fn parse_bound(s: &str) -> Result<(String, u64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, got `{s}`"))?;
    let value = value
        .parse()
        .map_err(|_| format!("bound `{name}` needs a natural number, got `{value}`"))?;
    Ok((name.to_string(), value))
}

/// Rewrites `--bound.NAME=V` and `--bound.NAME V` into `--bound NAME=V`.
fn normalize_bounds(args: impl IntoIterator<Item = String>) -> Vec<String> {
    let mut out = Vec::new();
    let mut it = args.into_iter();
    while let Some(arg) = it.next() {
        match arg.strip_prefix("--bound.") {
            Some(rest) => {
                out.push("--bound".to_string());
                match rest.split_once('=') {
                    Some(_) => out.push(rest.to_string()),
                    None => out.push(format!("{rest}={}", it.next().unwrap_or_default())),
                }
            }
            None => out.push(arg),
        }
    }
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse_from(normalize_bounds(std::env::args()));
    let bounds: BTreeMap<String, u64> = cli.bounds.iter().cloned().collect();
    match commands::run(&cli, &bounds) {
        Ok(outcome) => {
            let text = noetherian_lab::io::to_json(&outcome.report);
            let written = match &cli.output {
                Some(path) => noetherian_lab::io::write(path, &text).map_err(anyhow::Error::from),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
