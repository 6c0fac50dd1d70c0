//! Command-line front end for the `wehrl` library.

mod commands;
mod output;
mod region;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;
use wehrl::functionals::Settings;
use wehrl::Error;

/// Output encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Master seed of all random streams.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo sample count.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Degree of the sphere product rule for non-polynomial integrands.
    #[arg(long, global = true)]
    rule_degree: Option<usize>,
    /// Multistart points for maximization.
    #[arg(long, global = true)]
    starts: Option<usize>,
    /// Output file (standard output if omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
}

impl Common {
    pub fn settings(&self) -> Settings {
        let base = Settings::default();
        Settings {
            samples: self.samples.unwrap_or(base.samples),
            seed: self.seed.unwrap_or(base.seed),
            rule_degree: self.rule_degree.or(base.rule_degree),
            starts: self.starts.unwrap_or(base.starts),
        }
    }
}

/// Polynomial input.
#[derive(Debug, Clone, Args)]
pub struct PolyArgs {
    /// Polynomial JSON file.
    #[arg(long)]
    poly: PathBuf,
    /// Rescale the polynomial to unit norm instead of rejecting it.
    #[arg(long)]
    normalize: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generalized Wehrl entropy of a polynomial.
    Entropy {
        #[command(flatten)]
        poly: PolyArgs,
        /// `linear`, `xlogx`, `power:P` or `hinge:T0`.
        #[arg(long, default_value = "xlogx")]
        phi: String,
    },
    /// Concentration of a polynomial on a region.
    Concentration {
        #[command(flatten)]
        poly: PolyArgs,
        /// `cap:T` (centered at a maximizer), `superlevel:OMEGA` or `file:PATH`.
        #[arg(long)]
        region: Option<String>,
        /// Shorthand for `--region superlevel:OMEGA`.
        #[arg(long)]
        omega: Option<f64>,
    },
    /// Distance to the reproducing kernels.
    Distance {
        #[command(flatten)]
        poly: PolyArgs,
    },
    /// Empirical level-set profile against the extremal profile.
    Profile {
        #[command(flatten)]
        poly: PolyArgs,
        /// Grid points of the exported profile.
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
    /// Concentration stability sweep.
    SweepConc {
        #[command(flatten)]
        sweep: commands::SweepArgs,
    },
    /// Wehrl-entropy stability sweep.
    SweepWehrl {
        #[command(flatten)]
        sweep: commands::SweepArgs,
    },
    /// Distance and deficit scaling along the one-parameter sharpness family.
    Sharpness {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(short = 'N', long = "degree", default_value_t = 6)]
        n: usize,
        /// Comma-separated perturbation sizes.
        #[arg(long, value_delimiter = ',', default_values_t = [0.025, 0.05, 0.1, 0.2])]
        eps: Vec<f64>,
        #[arg(long, default_value = "xlogx")]
        phi: String,
        /// Also report the concentration deficit at this measure.
        #[arg(long)]
        omega: Option<f64>,
    },
    /// Compares rescaled projective functionals with their Fock-space values.
    FockLimit {
        /// Polynomial file read as an affine polynomial in the last `d` variables.
        #[command(flatten)]
        poly: PolyArgs,
        /// Comma-separated increasing degrees.
        #[arg(long, value_delimiter = ',', default_values_t = [16, 64, 256])]
        degrees: Vec<usize>,
        /// Volume of the ball in `C^d`.
        #[arg(long, default_value_t = 1.0)]
        area: f64,
        #[arg(long, default_value = "xlogx")]
        phi: String,
    },
    /// Generalized Wehrl entropy of a density matrix.
    StateEntropy {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, default_value = "xlogx")]
        phi: String,
    },
    /// Concentration of a density matrix on a region.
    StateConcentration {
        #[arg(long)]
        state: PathBuf,
        /// `cap:T` (centered at a Husimi maximum), `superlevel:OMEGA` (pure states) or `file:PATH`.
        #[arg(long)]
        region: String,
    },
    /// Trace distance of a density matrix to the coherent projectors.
    StateDistance {
        #[arg(long)]
        state: PathBuf,
    },
}

#[derive(Debug, Parser)]
#[command(name = "wehrl", version, about = "Concentration, entropy and stability of polynomials on the complex sphere")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

/// Process exit code for a library error.
fn exit_code(err: &Error) -> u8 {
    match err {
        Error::NonConvergence { .. } | Error::Evaluation { .. } => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(cli.command, &cli.common) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numerical_failures_exit_with_code_three() {
        let e = Error::NonConvergence {
            message: "x".into(),
            best: 0.0,
        };
        assert_eq!(exit_code(&e), 3);
        assert_eq!(exit_code(&Error::Config("x".into())), 2);
        assert_eq!(
            exit_code(&Error::Parse {
                field: "d".into(),
                message: "x".into()
            }),
            2
        );
    }
}
