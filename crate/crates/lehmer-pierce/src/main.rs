//! Thin command-line front end; all logic lives in the library.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use lehmer_pierce::quadring::{named_unit, QuadInt};
use lehmer_pierce::report::{
    self, cmd_candidates, cmd_constants, cmd_delta, cmd_units, cmd_verify, cmd_zsigmondy,
    OutputFormat, RunConfig, VerifyTarget,
};
use lehmer_pierce::search::NormSign;
use lehmer_pierce::{Error, Result};

/// Environment variable overriding the factorization cache path.
const CACHE_ENV: &str = "LEHMER_PIERCE_CACHE";

#[derive(Parser)]
#[command(
    name = "lehmer-pierce",
    about = "Lehmer-Pierce sequences of real quadratic units: exact terms, \
             prime factors, primitive-divisor analysis, Zsigmondy certificates",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Table)]
    format: FormatArg,

    /// Factorization cache file (line-delimited JSON); LEHMER_PIERCE_CACHE
    /// overrides.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,

    /// Significant decimal digits for real-valued output.
    #[arg(long, global = true, default_value_t = 50)]
    digits: usize,

    /// Pollard-rho iteration budget per factorization.
    #[arg(long, global = true, default_value_t = lehmer_pierce::factorint::DEFAULT_RHO_BUDGET)]
    budget: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Table,
    Structured,
}

#[derive(Args)]
struct UnitArg {
    /// Unit literal, e.g. "2+1*sqrt(3)" or "(1+1*sqrt(5))/2".
    #[arg(long, conflicts_with = "named")]
    unit: Option<String>,

    /// Well-known unit by name: golden, silver.
    #[arg(long)]
    named: Option<String>,
}

impl UnitArg {
    fn resolve(&self) -> Result<QuadInt> {
        match (&self.unit, &self.named) {
            (Some(lit), _) => lit.parse(),
            (None, Some(name)) => named_unit(name).ok_or_else(|| Error::Parse {
                pos: 0,
                msg: format!("unknown named unit {:?} (try golden or silver)", name),
            }),
            (None, None) => Err(Error::Parse {
                pos: 0,
                msg: "a unit is required: pass --unit or --named".to_string(),
            }),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the sequence table n | delta_n | prime factors.
    Delta {
        #[command(flatten)]
        unit: UnitArg,
        /// Largest index to include.
        #[arg(long, default_value_t = 6)]
        max: u64,
        /// Omit indices n = 2 mod 4 (the delta' view for norm -1 units).
        #[arg(long = "skip-2mod4", default_value_t = false)]
        skip_2mod4: bool,
    },
    /// Enumerate all units of one norm sign in (1, max].
    Units {
        /// Norm sign: 1 or -1.
        #[arg(long, allow_hyphen_values = true)]
        norm: i8,
        /// Upper bound (integer or rational like "27/2").
        #[arg(long)]
        max: String,
    },
    /// The candidate indices surviving the analytic inequality.
    Candidates {
        #[command(flatten)]
        unit: UnitArg,
    },
    /// Full Zsigmondy certificate for a unit.
    Zsigmondy {
        #[command(flatten)]
        unit: UnitArg,
    },
    /// Re-run the classification verifications.
    Verify {
        /// all, norm1, norm-minus1, or combined.
        target: String,
    },
    /// Re-derive the analytic bound constants and show the agreement.
    Constants,
}

fn run(cli: &Cli) -> Result<String> {
    let cache_path = std::env::var_os(CACHE_ENV)
        .map(PathBuf::from)
        .or_else(|| cli.cache.clone());
    let config = RunConfig {
        format: match cli.format {
            FormatArg::Table => OutputFormat::Table,
            FormatArg::Structured => OutputFormat::Structured,
        },
        cache_path,
        digits: cli.digits,
        budget: cli.budget,
    };
    match &cli.command {
        Command::Delta {
            unit,
            max,
            skip_2mod4,
        } => cmd_delta(&unit.resolve()?, *max, *skip_2mod4, &config),
        Command::Units { norm, max } => {
            let sign = match norm {
                1 => NormSign::Plus,
                -1 => NormSign::Minus,
                other => {
                    return Err(Error::Parse {
                        pos: 0,
                        msg: format!("--norm must be 1 or -1, got {}", other),
                    })
                }
            };
            let bound = report::parse_rational(max)?;
            cmd_units(sign, &bound, &config)
        }
        Command::Candidates { unit } => cmd_candidates(&unit.resolve()?, &config),
        Command::Zsigmondy { unit } => cmd_zsigmondy(&unit.resolve()?, &config),
        Command::Verify { target } => {
            let target = match target.as_str() {
                "all" => VerifyTarget::All,
                "norm1" => VerifyTarget::NormOne,
                "norm-minus1" => VerifyTarget::NormMinusOne,
                "combined" => VerifyTarget::Combined,
                other => {
                    return Err(Error::Parse {
                        pos: 0,
                        msg: format!(
                            "unknown verify target {:?} (use all, norm1, norm-minus1, combined)",
                            other
                        ),
                    })
                }
            };
            cmd_verify(target, &config)
        }
        Command::Constants => cmd_constants(&config),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(output) => {
            print!("{}", output);
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {}", err);
            ExitCode::from(report::exit_code_for(&err) as u8)
        }
    }
}
