mod commands;
mod output;
mod problem;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

/// Exact Hilbert, Tor and e^T computations for modules over graded
/// quotient rings.
#[derive(Debug, Parser)]
#[command(name = "mcmlab", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Coefficient field: 0 for the rationals or a prime (overrides the file)
    #[arg(long, global = true)]
    pub field: Option<u64>,
    /// Highest filtration index used by checks
    #[arg(long, global = true)]
    pub level: Option<u32>,
    /// Index window `a..b`, both ends included
    #[arg(long, global = true)]
    pub window: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Human-readable output instead of JSON
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Largest truncation dimension allowed
    #[arg(long = "cap-dim", global = true)]
    pub cap_dim: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse the problem and check modules, filtrations and sequences
    Validate { file: PathBuf },
    /// Hilbert function and coefficients of a module
    Hilbert {
        #[arg(long, default_value = "A")]
        module: String,
        #[arg(long, default_value = "madic")]
        filtration: String,
        file: PathBuf,
    },
    /// Lengths of Tor_i(M, A/F_{n+1})
    Tor {
        #[arg(long, default_value = "A")]
        module: String,
        #[arg(long, default_value = "madic")]
        filtration: String,
        #[arg(long, default_value_t = 1)]
        i: usize,
        file: PathBuf,
    },
    /// The invariant e^T of a module
    Etor {
        #[arg(long)]
        module: String,
        #[arg(long, default_value = "madic")]
        filtration: String,
        /// limit, formula or both
        #[arg(long, default_value = "both")]
        method: String,
        file: PathBuf,
    },
    /// e^T of a short exact sequence and whether it is T-split
    Tsplit {
        #[arg(long)]
        sequence: String,
        #[arg(long, default_value = "madic")]
        filtration: String,
        file: PathBuf,
    },
    /// Betti numbers and a complexity estimate
    Betti {
        #[arg(long, default_value = "A")]
        module: String,
        /// Highest homological degree
        #[arg(long, default_value_t = 8)]
        max: usize,
        file: PathBuf,
    },
    /// Integral closures of powers of a monomial ideal
    Intclosure {
        #[arg(long)]
        filtration: String,
        file: PathBuf,
    },
    /// Check that an element is superficial on a window
    Superficial {
        #[arg(long)]
        element: String,
        #[arg(long, default_value = "A")]
        module: String,
        #[arg(long, default_value = "madic")]
        filtration: String,
        #[arg(long, default_value_t = 1)]
        c: u32,
        file: PathBuf,
    },
    /// Built-in scenarios
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    List,
    Run { name: String },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] mcmlab::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(mcmlab::Error::Invariant(_)) => 3,
            _ => 2,
        }
    }
}

/// Rendered output and whether every expectation held.
pub struct Outcome {
    pub value: serde_json::Value,
    pub ok: bool,
    pub table: Option<output::Table>,
}

fn configure_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("MCMLAB_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Input(format!("MCMLAB_THREADS must be a positive integer, got `{v}`")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Input(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|_| commands::run(&cli));
    match result {
        Ok(out) => match output::render(&cli, &out) {
            Ok(text) => {
                print!("{text}");
                if out.ok {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(e.exit_code())
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Input("x".into()).exit_code(), 2);
        assert_eq!(CliError::Core(mcmlab::Error::Invariant("negative".into())).exit_code(), 3);
        assert_eq!(CliError::Core(mcmlab::Error::RingMismatch).exit_code(), 2);
    }
}
