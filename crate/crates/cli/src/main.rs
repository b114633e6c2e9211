mod commands;
mod error;
mod matrix_io;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ndefect::commuting::PairKind;
use ndefect::complex::TableauMode;
use ndefect::Tolerance;

use crate::commands::{CommuteOptions, CompleteOptions, SepInput};
use crate::error::{CliError, EXIT_INPUT};

/// Normal defect one: detection, minimal normal completions, commuting
/// completions of matrix pairs and 2×n separability.
#[derive(Parser)]
#[command(name = "ndefect", version)]
struct Cli {
    /// Relative rank threshold. Overrides NDEFECT_TOL.
    #[arg(long, global = true, value_name = "RANK_TOL")]
    tol: Option<f64>,
    /// Threshold for verification residuals. Overrides NDEFECT_TOL.
    #[arg(long, global = true, value_name = "TOL")]
    residual_tol: Option<f64>,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ModeArgs {
    /// Use the (n−2)×4 system of the special basis.
    #[arg(long, conflicts_with = "standard")]
    refined: bool,
    /// Use the 2n×4 system.
    #[arg(long)]
    standard: bool,
}

impl ModeArgs {
    fn mode(&self) -> TableauMode {
        match (self.refined, self.standard) {
            (true, _) => TableauMode::Refined,
            (_, true) => TableauMode::Standard,
            _ => TableauMode::Auto,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Hermitian,
    Symmetric,
    Symantisym,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a matrix has normal defect one.
    /// Exit: 0 one, 1 normal, 2 more than one, 64 input error.
    Check {
        input: PathBuf,
        /// Decide the real normal defect of a real matrix.
        #[arg(long)]
        real: bool,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Sample minimal normal completions. Exit codes as for `check`.
    Complete {
        input: PathBuf,
        #[arg(long)]
        real: bool,
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long, default_value_t = 3)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Phase of μ = e^{i·phase}, in radians.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        mu: f64,
        /// Directory for completion_NNN.json files.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a random matrix with normal defect one.
    Generate {
        #[arg(long)]
        n: usize,
        /// Real output; requires even n.
        #[arg(long)]
        real: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Commuting completions of a pair (A1, A2).
    /// Exit: 0 one, 1 already commuting, 2 more than one.
    Commute {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, default_value_t = 3)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory for pair_NNN_b1.json / pair_NNN_b2.json files.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// 2×n separability of [[A, B*], [B, C]].
    /// Exit: 0 separable, 3 entangled, 4 inconclusive.
    Separability {
        /// The full 2n×2n state.
        #[arg(required_unless_present_all = ["b", "c"], conflicts_with_all = ["b", "c"])]
        input: Option<PathBuf>,
        /// Off-diagonal block B of a state with A = I.
        #[arg(long, requires = "c")]
        b: Option<PathBuf>,
        /// Bottom-right block C of a state with A = I.
        #[arg(long, requires = "b")]
        c: Option<PathBuf>,
        /// Directory for witness.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a matrix for normality. Exit: 0 normal, 1 not normal.
    Verify { input: PathBuf },
}

/// Tolerances from NDEFECT_TOL (`RANK_TOL` or `RANK_TOL,RESIDUAL_TOL`),
/// then the flags.
fn tolerance(cli: &Cli) -> Result<Tolerance, CliError> {
    let mut tol = Tolerance::default();
    if let Ok(raw) = std::env::var("NDEFECT_TOL") {
        let bad = || CliError::Input(format!("NDEFECT_TOL={raw:?}: expected RANK_TOL or RANK_TOL,RESIDUAL_TOL"));
        let mut parts = raw.split(',').map(|s| s.trim().parse::<f64>());
        tol.rank_tol = parts.next().ok_or_else(bad)?.map_err(|_| bad())?;
        if let Some(r) = parts.next() {
            tol.residual_tol = r.map_err(|_| bad())?;
        }
        if parts.next().is_some() {
            return Err(bad());
        }
    }
    if let Some(t) = cli.tol {
        tol.rank_tol = t;
    }
    if let Some(t) = cli.residual_tol {
        tol.residual_tol = t;
    }
    tol.validate().map_err(|e| CliError::Input(e.to_string()))?;
    Ok(tol)
}

fn run(cli: &Cli) -> Result<report::Report, CliError> {
    let tol = tolerance(cli)?;
    match &cli.command {
        Command::Check { input, real, mode } => commands::check(input, *real, mode.mode(), &tol),
        Command::Complete { input, real, mode, count, seed, mu, out } => {
            let opts = CompleteOptions {
                real: *real,
                mode: mode.mode(),
                count: *count,
                seed: *seed,
                phase: *mu,
                out: out.as_deref(),
            };
            commands::complete(input, &opts, &tol)
        }
        Command::Generate { n, real, seed, out } => commands::generate(*n, *real, *seed, out, &tol),
        Command::Commute { first, second, kind, count, seed, out } => {
            let kind = match kind {
                KindArg::Hermitian => PairKind::Hermitian,
                KindArg::Symmetric => PairKind::Symmetric,
                KindArg::Symantisym => PairKind::SymAntisym,
            };
            let opts = CommuteOptions { kind, count: *count, seed: *seed, out: out.as_deref() };
            commands::commute(first, second, &opts, &tol)
        }
        Command::Separability { input, b, c, out } => {
            let source = match (input, b, c) {
                (Some(m), _, _) => SepInput::State(m),
                (None, Some(b), Some(c)) => SepInput::Blocks(b, c),
                _ => return Err(CliError::Input("give a state file or both --b and --c".into())),
            };
            commands::separability(source, out.as_deref(), &tol)
        }
        Command::Verify { input } => commands::verify(input, &tol),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                print!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            ExitCode::from(report.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
