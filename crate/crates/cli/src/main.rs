//! `sharktail`: Sharkovskii tails, tent cycles, Conley indices and random
//! periodic orbits from the command line.
//!
//! Exit codes: 0 when every verdict passes, 2 when a verdict fails, 3 on bad
//! input or a failed precondition.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sharktail_core::Rational;

#[derive(Debug, Parser)]
#[command(name = "sharktail", version, about = "Random Sharkovskii forcing at desk scale")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The Sharkovskii order and its tails.
    #[command(subcommand)]
    Shark(SharkCommand),
    /// Exact cycles and heights of the tent family.
    #[command(subcommand)]
    Cycles(CyclesCommand),
    /// Isolating neighbourhoods, Conley index matrices and the ε budget for
    /// the k-cycles of a truncated tent map.
    Conley(ConleyArgs),
    /// Random dynamical systems: simulation, (δ, k) detection and the
    /// random isolating neighbourhood of the asymmetric tent family.
    #[command(subcommand)]
    Rds(RdsCommand),
    /// End-to-end realization of a Sharkovskii tail under random noise.
    Realize(RealizeArgs),
}

#[derive(Debug, Subcommand)]
pub enum SharkCommand {
    /// List 1..=bound sorted by ≺, from the head 3 to the tail end 1.
    Order {
        #[arg(long, default_value_t = 20)]
        bound: u64,
    },
    /// The tail T(n) ∩ [1, bound].
    Tail {
        n: u64,
        #[arg(long, default_value_t = 12)]
        bound: u64,
    },
    /// Compare two periods under ≺.
    Compare { a: u64, b: u64 },
    /// Decide whether a set of periods is a finite tail and report its head.
    Check {
        /// Comma-separated periods, e.g. 1,2,4.
        #[arg(value_delimiter = ',', required = true)]
        periods: Vec<u64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum CyclesCommand {
    /// All cycles of the full tent map with minimal period k, as a certificate.
    Tent {
        #[arg(long)]
        k: u32,
    },
    /// Critical height h(m): the least height at which T_h has an m-cycle.
    Critical {
        #[arg(long)]
        m: u32,
    },
    /// Realization height h̃(m) whose minimal periods form the tail of m.
    Height {
        #[arg(long)]
        m: u64,
        #[arg(long, value_enum, default_value_t = PolicyArg::Auto)]
        policy: PolicyArg,
        /// Return-time bound used to call a point non-periodic.
        #[arg(long, default_value_t = 20)]
        periodic_test_bound: u32,
    },
    /// Minimal periods of the truncated tent map T_h up to max-period.
    Periods {
        #[arg(long, value_parser = parse_rational)]
        height: Rational,
        #[arg(long, default_value_t = 12)]
        max_period: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Strict,
    CornerSafe,
    /// Strict, falling back to corner-safe when no strict height exists.
    Auto,
}

#[derive(Debug, Args)]
pub struct ConleyArgs {
    /// Height of the truncated tent map; defaults to h̃(3).
    #[arg(long, value_parser = parse_rational)]
    pub height: Option<Rational>,
    /// Period of the cycles to certify.
    #[arg(long)]
    pub k: u32,
    /// Upper bound on the neighbourhood radius.
    #[arg(long, value_parser = parse_rational)]
    pub max_radius: Option<Rational>,
}

#[derive(Debug, Subcommand)]
pub enum RdsCommand {
    /// Iterate the random cocycle and write a CSV trajectory.
    Simulate(SimulateArgs),
    /// (δ, k) and minimal-period verdicts for the random orbit continuing a
    /// k-cycle of T_h.
    Detect(DetectArgs),
    /// Certify N = [2/3 − ε, 2/3 + ε] as a random isolating neighbourhood of
    /// the asymmetric tent family.
    Isolate {
        #[arg(long, value_parser = parse_rational, default_value = "1/20")]
        epsilon: Rational,
        #[arg(long, value_parser = parse_rational, default_value = "1/80")]
        xi: Rational,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Tent,
    Logistic,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value_t = Family::Tent)]
    pub family: Family,
    /// Noise amplitude of the asymmetric tent family.
    #[arg(long, value_parser = parse_rational, default_value = "1/80")]
    pub xi: Rational,
    /// Truncation height of the tent family.
    #[arg(long, value_parser = parse_rational, default_value = "1")]
    pub height: Rational,
    /// Parameter range of the logistic family.
    #[arg(long, default_value_t = 3.15)]
    pub c_lo: f64,
    #[arg(long, default_value_t = 3.25)]
    pub c_hi: f64,
    #[arg(long, env = "SHARKTAIL_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    /// Scale of the noise amplitude, in [0, 1].
    #[arg(long, value_parser = parse_rational, default_value = "1")]
    pub lambda: Rational,
    /// Initial state; defaults to 2/3 for the tent family and 1/2 otherwise.
    #[arg(long, value_parser = parse_rational)]
    pub x0: Option<Rational>,
    /// Label each row with its fibre index mod k.
    #[arg(long)]
    pub k: Option<u64>,
    /// Iterate in exact rationals (tent family only); states print as p/q.
    #[arg(long)]
    pub exact: bool,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[arg(long)]
    pub k: u32,
    /// Separation threshold; defaults to δ of the certified budget.
    #[arg(long, value_parser = parse_rational)]
    pub delta: Option<Rational>,
    #[arg(long, default_value_t = 300)]
    pub window: usize,
    /// Height of the base map; defaults to h̃(3).
    #[arg(long, value_parser = parse_rational)]
    pub height: Option<Rational>,
    /// Noise amplitude; defaults to the largest amplitude of the form 2^-j/4
    /// inside the budget.
    #[arg(long, value_parser = parse_rational)]
    pub xi: Option<Rational>,
    #[arg(long, env = "SHARKTAIL_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Scale of the noise amplitude, in [0, 1].
    #[arg(long, value_parser = parse_rational, default_value = "1")]
    pub lambda: Rational,
    /// Blocks of k steps used to shrink the fibre enclosures.
    #[arg(long, default_value_t = 24)]
    pub pad_blocks: u32,
    /// Also write trajectory and fibre CSVs into this directory.
    #[arg(long)]
    pub plot_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RealizeArgs {
    /// Head m of the tail, 2..=8.
    #[arg(long, required_unless_present = "reproduce")]
    pub m: Option<u64>,
    /// Bound K of the finite tail, at most 12.
    #[arg(long, default_value_t = 8)]
    pub bound: u64,
    #[arg(long, value_parser = parse_rational, default_value = "1/100")]
    pub xi: Rational,
    /// Scale of the noise amplitude, in [0, 1].
    #[arg(long, value_parser = parse_rational, default_value = "1")]
    pub lambda: Rational,
    /// Explicit seeds, comma-separated; overrides --seed and --num-seeds.
    #[arg(long, value_delimiter = ',')]
    pub seeds: Vec<u64>,
    /// First seed of the default seed range.
    #[arg(long, env = "SHARKTAIL_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 8)]
    pub num_seeds: u64,
    #[arg(long, default_value_t = 300)]
    pub window: usize,
    #[arg(long, default_value_t = 24)]
    pub pad_blocks: u32,
    /// Negative control: use this multiple of the noise budget.
    #[arg(long, value_parser = parse_rational)]
    pub force_xi_factor: Option<Rational>,
    /// Write the certificate here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write trajectory and fibre CSVs for the first seed into this directory.
    #[arg(long)]
    pub plot_dir: Option<PathBuf>,
    /// Re-run a certificate from its provenance and compare byte for byte.
    #[arg(long, conflicts_with = "m")]
    pub reproduce: Option<PathBuf>,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.parse::<Rational>().map_err(|e| e.to_string())
}

/// Result of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(2),
        // a closed pipe (e.g. `| head`) is not an error of the tool
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        let io = match c.downcast_ref::<sharktail_core::certify::CertifyError>() {
            Some(sharktail_core::certify::CertifyError::Io(io)) => Some(io),
            _ => c.downcast_ref::<std::io::Error>(),
        };
        io.is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
    })
}
