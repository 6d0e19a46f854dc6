//! `bhsum`: constants tables, seeded inequality campaigns and mixed norms
//! of tensors stored as JSON.
//!
//! Exit codes: 0 on success, 1 on invalid input, 2 when a campaign finds a
//! hard violation (the report with its witness is written to disk).

mod commands;
mod error;
mod parse;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "bhsum", version, about = "Bohnenblust-Hille constants, mixed norms and inequality campaigns")]
struct Cli {
    /// Seed of every random stream.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Number of campaign trials.
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Relative slack before a campaign failure counts.
    #[arg(long, global = true, value_parser = parse::number)]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum)]
    field: Option<FieldArg>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FieldArg {
    Real,
    Complex,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CheckArg {
    Minkowski,
    Interpolation,
    Blei,
    Bh,
    Khinchine,
    Dps,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Table of C_{m,t} by recursion and closed form.
    Constants {
        /// Orders, e.g. `1..8` or `2,4,8`.
        #[arg(long, default_value = "1..8")]
        m: String,
        /// Comma-separated values of t in [1, 2).
        #[arg(long, default_value = "1")]
        t: String,
    },
    /// Run a seeded fuzz campaign, or replay a stored witness.
    Verify {
        #[arg(value_enum)]
        check: CheckArg,
        /// Order of the forms (bh).
        #[arg(long)]
        m: Option<usize>,
        /// Slot dimension (bh).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_parser = parse::number)]
        t: Option<f64>,
        /// Report or witness file to recompute instead of running trials.
        #[arg(long)]
        replay: Option<PathBuf>,
    },
    /// Mixed norm of a tensor file.
    Norm {
        #[arg(long)]
        input: PathBuf,
        /// Exponents, outermost first; rationals such as `4/3` are accepted.
        #[arg(long)]
        p: String,
        /// Ordered axis blocks such as `{2}{1}`, one exponent per block.
        #[arg(long)]
        blocks: Option<String>,
    },
    /// Compare the block-splitting exponent with r_N over a grid.
    CompareExponents {
        #[arg(long)]
        n: String,
        #[arg(long = "N")]
        big_n: String,
        #[arg(long, default_value = "2")]
        q: String,
        #[arg(long, default_value = "1")]
        r: String,
    },
    /// Running maximum of C_{m,t} / m^e up to m_max.
    Kappa {
        #[arg(long, default_value = "1,1.5")]
        t: String,
        #[arg(long, default_value_t = 10_000)]
        m_max: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bhsum: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

impl From<CheckArg> for bhsum_core::campaign::Check {
    fn from(c: CheckArg) -> Self {
        use bhsum_core::campaign::Check;
        match c {
            CheckArg::Minkowski => Check::Minkowski,
            CheckArg::Interpolation => Check::Interpolation,
            CheckArg::Blei => Check::Blei,
            CheckArg::Bh => Check::Bh,
            CheckArg::Khinchine => Check::Khinchine,
            CheckArg::Dps => Check::Dps,
        }
    }
}

impl FieldArg {
    fn fields(self) -> Vec<bhsum_core::Field> {
        use bhsum_core::Field;
        match self {
            FieldArg::Real => vec![Field::Real],
            FieldArg::Complex => vec![Field::Complex],
            FieldArg::Both => vec![Field::Real, Field::Complex],
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}
