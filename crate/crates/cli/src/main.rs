//! `sfpa`: solve, cross-check, generate and benchmark static fault trees.

mod bench;
mod commands;
mod error;

use std::panic;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "sfpa", version, about = "Exact unreliability of static fault trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Sfpa,
    Sfpa2,
    Treelike,
    /// Brute-force enumeration; small trees only.
    Oracle,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Sfpa => "sfpa",
            Algo::Sfpa2 => "sfpa2",
            Algo::Treelike => "treelike",
            Algo::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute the unreliability of one tree and print a JSON report.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Algo::Sfpa2)]
        algo: Algo,
        /// Use exact rational arithmetic.
        #[arg(long)]
        exact: bool,
    },
    /// Compare sfpa, sfpa2 and the brute-force oracle on a file or a directory of `.dft` files.
    Check {
        path: PathBuf,
        /// Skip trees with more basic events than this.
        #[arg(long, default_value_t = sfpa_core::DEFAULT_ENUMERATION_CAP)]
        cap: usize,
    },
    /// Generate random fault trees.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 74)]
        bes: usize,
        #[arg(long, default_value_t = 50)]
        gates: usize,
        #[arg(long, default_value_t = 4)]
        multiparent: usize,
        #[arg(long, default_value_t = 4)]
        max_children: usize,
        #[arg(long, default_value_t = 0.3)]
        p_and: f64,
        /// Keep every shared node close to its dominator.
        #[arg(long)]
        local: bool,
        /// Corpus directory; without it a single tree goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Number of trees, seeded `seed`, `seed + 1`, ...
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Time the solvers over a generated corpus and write CSV.
    Bench {
        manifest: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Algo::Sfpa, Algo::Sfpa2])]
        algos: Vec<Algo>,
        /// Worker threads; defaults to one per core.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Print a minimal cut set found through the probability reduction.
    Mcs { file: PathBuf },
    /// Print the immediate dominator of every node.
    #[command(alias = "dominators")]
    Dom { file: PathBuf },
}

fn run(cli: Cli) -> error::CliResult<ExitCode> {
    match cli.command {
        Command::Solve { file, algo, exact } => commands::solve(&file, algo, exact),
        Command::Check { path, cap } => commands::check(&path, cap),
        Command::Gen { seed, bes, gates, multiparent, max_children, p_and, local, out, count } => {
            let cfg = sfpa_core::GenConfig {
                seed,
                n_be: bes,
                n_gates: gates,
                n_multiparent: multiparent,
                max_children,
                p_and,
                locality: if local { sfpa_core::Locality::Local } else { sfpa_core::Locality::Global },
                ..sfpa_core::GenConfig::default()
            };
            commands::gen(&cfg, out.as_deref(), count)
        }
        Command::Bench { manifest, out, repeats, algos, jobs } => {
            bench::run(&bench::Options { manifest, out, repeats, algos, jobs })
        }
        Command::Mcs { file } => commands::mcs(&file),
        Command::Dom { file } => commands::dom(&file),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome =
        panic::catch_unwind(|| run(cli)).unwrap_or_else(|_| Err(CliError::Internal("solver panicked".into())));
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("sfpa: {e}");
            e.exit_code()
        }
    }
}
