//! `cpsim` — command-line driver for the contact-process simulator.
//!
//! Subcommands: `simulate` (one Harris construction, edge trajectory),
//! `interface` (replica experiment over the interface statistics),
//! `blocks` (renormalized block field on one construction),
//! `percolate` (oriented site percolation on Bernoulli fields),
//! `verify` (cross-implementation invariant suites),
//! `plot` (SVG + gnuplot files from a sample store).
//!
//! Parameters resolve as defaults < `--config` JSON file < flags. Every run
//! prints its resolved configuration and a SHA-256 hash of it. Exit codes:
//! 0 success, 1 usage or runtime error, 2 contamination abort.

mod commands;
mod plot;
mod resolve;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand};
use cpsim_core::SimError;

#[derive(Parser)]
#[command(
    name = "cpsim",
    version,
    about = "Simulator and verification harness for the one-dimensional contact process"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one Harris construction and report the right-edge trajectory
    Simulate(SimulateArgs),
    /// Monte-Carlo experiment over the interface (half-line vs full lattice)
    Interface(InterfaceArgs),
    /// Compute the renormalized block field on one construction
    Blocks(BlocksArgs),
    /// Oriented site percolation on Bernoulli block fields
    Percolate(PercolateArgs),
    /// Cross-implementation invariant suites (exit 0 iff zero violations)
    Verify(VerifyArgs),
    /// Render SVG + gnuplot plots from a sample-store directory
    Plot(PlotArgs),
}

#[derive(Args)]
pub struct SimulateArgs {
    /// Total arrow rate per occupied site
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Kernel range M (uniform weights unless --kernel is given)
    #[arg(long)]
    pub range: Option<i64>,
    /// CSV of relative weights for displacements 1..=M (mirrored, normalized)
    #[arg(long)]
    pub kernel: Option<String>,
    /// Time horizon
    #[arg(long = "T")]
    pub t: Option<f64>,
    /// Base RNG seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// Window half-width override (default: auto guard band)
    #[arg(long)]
    pub guard: Option<i64>,
    /// Report whether the construction is gamma-slow for this gamma
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Output directory (edge.csv, optionally events.txt)
    #[arg(long)]
    pub out: Option<String>,
    /// Also write the event list (events.txt) for replay
    #[arg(long)]
    pub dump_events: bool,
    /// Replay a previously dumped event file instead of sampling
    #[arg(long)]
    pub load_events: Option<String>,
    /// JSON config file mirroring the flags
    #[arg(long)]
    pub config: Option<String>,
}

#[derive(Args)]
pub struct InterfaceArgs {
    /// Total arrow rate per occupied site
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Kernel range M (uniform weights unless --kernel is given)
    #[arg(long)]
    pub range: Option<i64>,
    /// CSV of relative weights for displacements 1..=M (mirrored, normalized)
    #[arg(long)]
    pub kernel: Option<String>,
    /// Time horizon
    #[arg(long = "T")]
    pub t: Option<f64>,
    /// CSV of sampling times (default: quarter points of T)
    #[arg(long)]
    pub grid: Option<String>,
    /// Number of replicas
    #[arg(long)]
    pub replicas: Option<u64>,
    /// Base RNG seed (replica i uses seed XOR i)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Window half-width override (default: auto guard band)
    #[arg(long)]
    pub guard: Option<i64>,
    /// Output directory (config.json, samples.csv, summary.json)
    #[arg(long)]
    pub out: Option<String>,
    /// Worker threads (0 = machine parallelism)
    #[arg(long)]
    pub threads: Option<usize>,
    /// Keep contaminated replicas out of estimates but finish the run (default)
    #[arg(long, conflicts_with = "abort_contaminated")]
    pub discard_contaminated: bool,
    /// Abort with exit code 2 on the first contaminated replica
    #[arg(long)]
    pub abort_contaminated: bool,
    /// JSON config file mirroring the flags
    #[arg(long)]
    pub config: Option<String>,
}

#[derive(Args)]
pub struct BlocksArgs {
    /// Total arrow rate per occupied site
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Kernel range M (uniform weights unless --kernel is given)
    #[arg(long)]
    pub range: Option<i64>,
    /// CSV of relative weights for displacements 1..=M (mirrored, normalized)
    #[arg(long)]
    pub kernel: Option<String>,
    /// Block time factor K (slabs have height K*N)
    #[arg(long = "K")]
    pub k: Option<i64>,
    /// Block width N (intervals have N sites)
    #[arg(long = "N")]
    pub n: Option<i64>,
    /// Expansion slope beta
    #[arg(long)]
    pub beta: Option<f64>,
    /// Lattice height to compute (rows 0..=i)
    #[arg(long)]
    pub i: Option<i64>,
    /// Base RNG seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory (blocks.csv, field.csv)
    #[arg(long)]
    pub out: Option<String>,
    /// JSON config file mirroring the flags
    #[arg(long)]
    pub config: Option<String>,
}

#[derive(Args)]
pub struct PercolateArgs {
    /// Bernoulli open probability per cell
    #[arg(long)]
    pub p: Option<f64>,
    /// Percolation height checked from the origin cell
    #[arg(long)]
    pub height: Option<i64>,
    /// Level for the two-sided escape event Gamma(i)
    #[arg(long)]
    pub i: Option<i64>,
    /// Cone slope for the escape event
    #[arg(long)]
    pub gamma_beta: Option<f64>,
    /// Number of independent fields
    #[arg(long)]
    pub replicas: Option<u64>,
    /// Base RNG seed (field k uses seed XOR k)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory (percolate.csv, results.json)
    #[arg(long)]
    pub out: Option<String>,
    /// JSON config file mirroring the flags
    #[arg(long)]
    pub config: Option<String>,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Suite to run: oracle, coupling, chi, blocks
    #[arg(long)]
    pub suite: Option<String>,
    /// Number of cases (constructions or cells, suite-dependent)
    #[arg(long)]
    pub cases: Option<u64>,
    /// Base RNG seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// Rate override for the chi and blocks suites
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Block time factor for the blocks suite
    #[arg(long = "K")]
    pub k: Option<i64>,
    /// Block width for the blocks suite
    #[arg(long = "N")]
    pub n: Option<i64>,
    /// JSON config file mirroring the flags
    #[arg(long)]
    pub config: Option<String>,
}

#[derive(Args)]
pub struct PlotArgs {
    /// Sample-store directory to read and write plots into
    #[arg(long)]
    pub out: Option<String>,
    /// JSON config file mirroring the flags
    #[arg(long)]
    pub config: Option<String>,
}

/// On a usage error, print the offending message plus the full flag set of
/// the intended subcommand (or the top-level help) so the valid options are
/// always listed.
fn print_valid_flags() {
    let mut cmd = Cli::command();
    let wanted = std::env::args().nth(1).unwrap_or_default();
    let help = match cmd.find_subcommand_mut(&wanted) {
        Some(sub) => sub.render_long_help(),
        None => cmd.render_long_help(),
    };
    eprintln!("{help}");
}

fn run(cmd: Cmd) -> anyhow::Result<()> {
    match cmd {
        Cmd::Simulate(a) => commands::simulate(a),
        Cmd::Interface(a) => commands::interface(a),
        Cmd::Blocks(a) => commands::blocks(a),
        Cmd::Percolate(a) => commands::percolate(a),
        Cmd::Verify(a) => commands::verify(a),
        Cmd::Plot(a) => commands::plot(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = e.print();
                    ExitCode::SUCCESS
                }
                _ => {
                    let _ = e.print();
                    print_valid_flags();
                    ExitCode::from(1)
                }
            };
        }
    };
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if matches!(e.downcast_ref::<SimError>(), Some(SimError::ContaminatedRun(_))) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
