//! `torus`: batch front end for the torus-core workbench.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use output::{emit, Failure};

#[derive(Parser, Debug)]
#[command(
    name = "torus",
    version,
    about = "Exact computations for sigma models on tori"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Sign s in the canonical bracket {p_i(s), x^j(s')} = s δ_ij δ(s - s').
    #[arg(long, global = true, value_enum, default_value_t = Sign::Minus)]
    pub sign_convention: Sign,
    /// Lattice model JSON file.
    #[arg(long, global = true)]
    pub model: Option<PathBuf>,
    /// Sector enumeration bound (L1 norm of lattice coordinates).
    #[arg(long, global = true, default_value_t = 2)]
    pub cutoff: u64,
    /// Oscillator level bound for state counts.
    #[arg(long, global = true, default_value_t = 3)]
    pub level: u32,
    /// Truncation order of q-series.
    #[arg(long, global = true, default_value_t = 4)]
    pub order: u32,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FmKind {
    Cdo,
    Tdo,
    Morphism,
    Linear,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Transform a class file by a nondegenerate class.
    Fm {
        #[arg(long, value_enum)]
        kind: FmKind,
        /// Nondegenerate class (matrix JSON); not used by `linear`.
        #[arg(long)]
        mu: Option<PathBuf>,
        /// Class file, or `-` for stdin.
        input: String,
    },
    /// Integral of motion of a symmetry.
    Noether {
        /// Lagrangian density; defaults to the free boson, or the sigma model of --model.
        lagrangian: Option<String>,
        /// `dt`, `ds`, `dx<k>`, `fdz`, `gdzb` or `;`-separated components.
        #[arg(long)]
        generator: String,
        /// Number of target coordinates (inferred when omitted).
        #[arg(long)]
        fields: Option<usize>,
        /// Restrict the integral to solutions.
        #[arg(long)]
        restrict: bool,
    },
    /// Bracket of two Fourier components.
    Bracket {
        a: String,
        b: String,
        #[arg(long)]
        fields: Option<usize>,
        /// Use the bracket with p slots instead of the sigma-model table.
        #[arg(long)]
        canonical: bool,
        /// Print the local delta expansion instead of the class.
        #[arg(long)]
        local: bool,
    },
    /// Cyclic Jacobi sum for a twisted bracket table.
    Jacobi {
        #[arg(long)]
        table: PathBuf,
        a: String,
        b: String,
        c: String,
    },
    /// Joint eigenvalues of the Hamiltonian-flow generators per sector.
    Spectrum,
    /// Sectors with conformal weights and state counts.
    States,
    /// Locality of vertex-operator exponents.
    Locality,
    /// T-dual model.
    Tdual {
        /// Circle of radius p/q (shorthand for a model file).
        #[arg(long)]
        radius_unit: Option<String>,
    },
    /// Sectors with trivial antiholomorphic weight.
    Chiral,
    /// Partition function, or the characters of one sector.
    Character {
        /// Sector coordinates `l1,..,ln;m1,..,mn`.
        #[arg(long)]
        sector: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli).and_then(|r| emit(&r, cli.out.as_deref())) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => report_failure(&f),
    }
}

fn report_failure(f: &Failure) -> ExitCode {
    eprintln!("error: {}", f.message());
    ExitCode::from(f.code() as u8)
}
