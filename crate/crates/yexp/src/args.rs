use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use yexp_core::Family;

#[derive(Parser, Debug)]
#[command(name = "yexp", version, about = "Level-2 Dynkin quiver Y-system verification lab")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the quiver, its vertex labels and the permutation ν.
    Quiver(CaseArgs),
    /// Print the level-2 Q-table.
    Qtable(CaseArgs),
    /// Print the level-2 Y-table.
    Ytable(CaseArgs),
    /// Print the fixed point η of the mutation loop.
    Eta(CaseArgs),
    /// Check μ_γ^P = id at random positive points.
    Periodicity(CaseArgs),
    /// Print the Jacobian exponents as a CSV row.
    Exponents(CaseArgs),
    /// Run every check for one case.
    Verify(CaseArgs),
    /// Compare det K, det L with the cosine products for type C.
    ConjectureC(CsolArgs),
    /// Run `verify` over a range of families and ranks.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CsolFormArg {
    Printed,
    Corrected,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Fixed-point residual tolerance.
    #[arg(long, default_value_t = yexp_core::tol::FIXED_POINT)]
    pub tol_fixed_point: f64,
    /// Periodicity residual tolerance.
    #[arg(long, default_value_t = yexp_core::tol::PERIODICITY)]
    pub tol_periodicity: f64,
    /// Characteristic polynomial tolerance.
    #[arg(long, default_value_t = yexp_core::tol::CHARPOLY)]
    pub tol_charpoly: f64,
    /// Finite-difference Jacobian tolerance.
    #[arg(long, default_value_t = yexp_core::tol::FD_JACOBIAN)]
    pub tol_fd_jacobian: f64,
    /// Unit-circle samples for the type C identities.
    #[arg(long, default_value_t = 32)]
    pub samples: usize,
    /// Seed for the random points.
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    /// Angle convention for the cosine products.
    #[arg(long, value_enum, default_value_t = CsolFormArg::Printed)]
    pub csol_form: CsolFormArg,
    /// Write a JSON report here.
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Write CSV output here.
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct CaseArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    #[arg(long)]
    pub rank: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct CsolArgs {
    /// Single rank; with --rank-max, the lower end of the range.
    #[arg(long, default_value_t = 3)]
    pub rank: usize,
    #[arg(long)]
    pub rank_max: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    /// Restrict to one family.
    #[arg(long, value_parser = parse_family)]
    pub family: Option<Family>,
    /// Lowest rank (clamped up to each family's minimum).
    #[arg(long, default_value_t = 1)]
    pub rank: usize,
    #[arg(long, default_value_t = 10)]
    pub rank_max: usize,
    #[command(flatten)]
    pub common: Common,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse::<Family>().map_err(|e| e.to_string())
}
