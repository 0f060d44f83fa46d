//! Command-line front end. Every command prints JSON (or CSV on request) to
//! stdout and encodes its outcome in the exit status: 0 for success or a
//! passing check, 1 when a counterexample or theorem violation turned up,
//! 2 for usage and precondition problems.

use boxorbits::correspondence::check_equivariance;
use boxorbits::error::{Error, Result};
use boxorbits::grid::IncreasingTableau;
use boxorbits::macmahon_count;
use boxorbits::orbits::{decompose, orbit_of, EngineOptions, DEFAULT_STATE_BUDGET};
use boxorbits::promotion::{demote, promote, promote_with_trace, PromotionTrace};
use boxorbits::verify::{
    h_statistics, verify_frame_periodicity, verify_gcd_theorem, verify_prime_divisibility,
    verify_sameframe_rigidity,
};
use clap::{Parser, Subcommand};
use serde::Serialize;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "boxorbits",
    about = "Orbit dynamics of increasing tableaux and box-poset order ideals"
)]
struct Cli {
    /// Refuse any command whose full state space exceeds this many states
    #[arg(long, global = true, default_value_t = DEFAULT_STATE_BUDGET, value_name = "N")]
    budget: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Apply one promotion step to the tableau in FILE
    Promote {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Also emit the stage-by-stage trace
        #[arg(long)]
        trace: bool,
    },
    /// Apply one inverse promotion step to the tableau in FILE
    Demote {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
    },
    /// Print the promotion orbit (size and canonical representative) of the tableau in FILE
    Orbit {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
    },
    /// Decompose all a-by-b tableaux with ceiling Q into promotion orbits
    Decompose {
        a: usize,
        b: usize,
        q: u8,
        /// Full orbit listing as JSON (the default)
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        /// Orbit-size histogram as CSV instead
        #[arg(long)]
        csv: bool,
        #[arg(long, default_value_t = 1, value_name = "N")]
        workers: usize,
    },
    /// Exhaustive structural checks; exit 1 on any counterexample
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Orbit statistics
    #[command(subcommand)]
    Stats(StatsCmd),
    /// Number of plane partitions in an a-by-b-by-c box
    Count { a: u64, b: u64, c: u64 },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Every orbit size shares a factor with the ceiling, for ceilings a+b through QMAX
    Gcd { a: usize, b: usize, q_max: u8 },
    /// p = a+b+c-1, when prime, divides every orbit size
    Prime { a: usize, b: usize, c: usize },
    /// Border labels return after exactly q promotion steps
    Frame { a: usize, b: usize, q: u8 },
    /// Only the minimal filling at the minimum ceiling keeps its frame fixed
    Rigidity { a: usize, b: usize, q: u8 },
    /// The ideal-to-tableau transport turns rowmotion into promotion
    Equivariance { a: usize, b: usize, c: usize },
}

#[derive(Subcommand)]
enum StatsCmd {
    /// Histogram of orbit size divided by p over a prime-p box
    H { a: usize, b: usize, c: usize },
}

#[derive(Serialize)]
struct TraceOutput<'a> {
    tableau: &'a IncreasingTableau,
    trace: &'a PromotionTrace,
}

fn read_tableau(path: &Path) -> Result<IncreasingTableau> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(8)
}

fn run(cli: Cli) -> Result<bool> {
    let budget = cli.budget;
    match cli.cmd {
        Cmd::Promote { input, trace } => {
            let t = read_tableau(&input)?;
            if trace {
                let (next, tr) = promote_with_trace(&t)?;
                let out = TraceOutput {
                    tableau: &next,
                    trace: &tr,
                };
                println!("{}", serde_json::to_string(&out)?);
            } else {
                println!("{}", serde_json::to_string(&promote(&t)?)?);
            }
            Ok(true)
        }
        Cmd::Demote { input } => {
            let t = read_tableau(&input)?;
            println!("{}", serde_json::to_string(&demote(&t)?)?);
            Ok(true)
        }
        Cmd::Orbit { input } => {
            let t = read_tableau(&input)?;
            println!("{}", serde_json::to_string(&orbit_of(&t)?)?);
            Ok(true)
        }
        Cmd::Decompose {
            a,
            b,
            q,
            json: _,
            csv,
            workers,
        } => {
            let opts = EngineOptions {
                workers,
                budget,
                keep_members: false,
            };
            let dec = decompose(a, b, q, &opts)?;
            if csv {
                print!("{}", dec.csv_histogram());
            } else {
                println!("{}", serde_json::to_string(&dec)?);
            }
            Ok(true)
        }
        Cmd::Verify(v) => {
            let opts = EngineOptions {
                workers: default_workers(),
                budget,
                keep_members: false,
            };
            if let VerifyCmd::Equivariance { a, b, c } = v {
                let report = check_equivariance(a, b, c, budget)?;
                println!("{}", serde_json::to_string(&report)?);
                return Ok(report.pass);
            }
            let report = match v {
                VerifyCmd::Gcd { a, b, q_max } => verify_gcd_theorem(a, b, q_max, &opts)?,
                VerifyCmd::Prime { a, b, c } => verify_prime_divisibility(a, b, c, &opts)?,
                VerifyCmd::Frame { a, b, q } => verify_frame_periodicity(a, b, q, &opts)?,
                VerifyCmd::Rigidity { a, b, q } => verify_sameframe_rigidity(a, b, q, budget)?,
                VerifyCmd::Equivariance { .. } => unreachable!(),
            };
            println!("{}", serde_json::to_string(&report)?);
            Ok(report.pass)
        }
        Cmd::Stats(StatsCmd::H { a, b, c }) => {
            let opts = EngineOptions {
                workers: default_workers(),
                budget,
                keep_members: false,
            };
            let stats = h_statistics(a, b, c, &opts)?;
            println!("{}", serde_json::to_string(&stats)?);
            Ok(true)
        }
        Cmd::Count { a, b, c } => {
            println!("{}", macmahon_count(a, b, c)?);
            Ok(true)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(pass) => std::process::exit(if pass { 0 } else { 1 }),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::GcdAssertion { .. } | Error::InvariantViolation(_) => 1,
                _ => 2,
            };
            std::process::exit(code);
        }
    }
}
