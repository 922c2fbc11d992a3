//! `netalign`: analyze, simulate, oracle-check and generate three-unicast
//! networks.
//!
//! Exit codes: 0 feasible or success, 1 infeasible or failure, 2 error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use netalign::generators::GenKind;
use netalign::PrimeField;

#[derive(Parser, Debug)]
#[command(
    name = "netalign",
    version,
    about = "Interference alignment feasibility on three-unicast networks"
)]
pub struct Cli {
    /// Machine-readable JSON report on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value = "61", value_parser = ["31", "61"])]
    pub field_bits: String,
    /// Worker threads for trial-level parallelism (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Also emit the network as Graphviz text.
    #[arg(long, global = true)]
    pub dot: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Cut sets, degeneracy and the seven graph conditions.
    Analyze {
        file: PathBuf,
        /// Cross-check with randomized identity tests.
        #[arg(long)]
        mc: bool,
        #[arg(long, default_value_t = netalign::algebra::DEFAULT_TRIALS)]
        trials: usize,
    },
    /// Runs the alignment scheme end to end.
    Simulate {
        file: PathBuf,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = netalign::scheme::DEFAULT_RETRIES)]
        retries: usize,
        #[arg(long, default_value_t = netalign::scheme::DEFAULT_MAX_N)]
        max_n: usize,
    },
    /// Exact symbolic checks of the gain identities.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = netalign::poly::DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Writes a generated network file.
    Gen {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, default_value_t = 4)]
        layers: usize,
        #[arg(long, default_value_t = 3)]
        width: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum KindArg {
    Degenerate,
    Feasible,
    RandomLayered,
}

impl From<KindArg> for GenKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Degenerate => GenKind::Degenerate,
            KindArg::Feasible => GenKind::Feasible,
            KindArg::RandomLayered => GenKind::RandomLayered,
        }
    }
}

impl Cli {
    pub fn field(&self) -> PrimeField {
        PrimeField::with_bits(self.field_bits.parse().expect("validated by clap"))
            .expect("tabulated prime")
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(ok) => ExitCode::from(if ok { 0 } else { 1 }),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
