use std::fs;
use std::io::Write;
use std::num::NonZeroI64;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use circlefix::format::{load_dataset, validate_file, write_dataset};
use circlefix::localization::{c1_cn1_monomial, ChernMonomial};
use circlefix::report::Report;
use circlefix::selftest::run_selftest;
use circlefix::{gen_product, mutate, MutationKind};
use clap::{Parser, Subcommand, ValueEnum};

const EXIT_FAIL: u8 = 1;
const EXIT_MALFORMED: u8 = 2;

/// Checks and invariants for fixed-point data of Hamiltonian circle actions.
#[derive(Parser)]
#[command(name = "circlefix", version)]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Weight symmetry, Betti numbers and moment consistency.
    Validate { file: PathBuf },
    /// Localization integrals of Chern monomials.
    Analyze {
        file: PathBuf,
        /// Monomial such as `c1^2` or `c2*c1`; repeatable. Defaults to c1^n, c1*c_(n-1) and c_n.
        #[arg(long = "monomial")]
        monomials: Vec<String>,
    },
    /// Enumerate admissible toric 1-skeleton candidates.
    Skeleton {
        file: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        cap: usize,
        /// Require the moment map to increase along each edge.
        #[arg(long)]
        moment_filter: bool,
    },
    /// Pseudo-index bounds and the C-integer for every candidate.
    Bounds {
        file: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        cap: usize,
        #[arg(long)]
        moment_filter: bool,
    },
    /// Decide whether the data are those of a standard CP^n action.
    Rigidity { file: PathBuf },
    /// Write a dataset.
    Generate {
        #[command(subcommand)]
        kind: Generate,
        /// Output file; standard output when omitted.
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Run the built-in acceptance checks.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum Generate {
    /// Standard linear action on CP^n with distinct integers m_0, ..., m_n.
    StandardCpn {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        m: Vec<i64>,
        /// Attach synthetic moment values.
        #[arg(long)]
        moments: bool,
    },
    /// Diagonal action on the product of two datasets.
    Product { first: PathBuf, second: PathBuf },
    /// Deterministic defect for negative testing.
    Mutate {
        file: PathBuf,
        /// One of flip-weight-sign, perturb-weight, swap-weights, drop-fixed-point.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        seed: u64,
        /// Amount added by perturb-weight.
        #[arg(long, default_value_t = NonZeroI64::new(1).unwrap(), allow_negative_numbers = true)]
        delta: NonZeroI64,
    },
}

/// Input problems exit with 2, everything else that goes wrong is a FAIL.
struct Malformed(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for Malformed {
    fn from(e: E) -> Self {
        Malformed(e.into())
    }
}

fn load(path: &Path) -> Result<circlefix::FixedPointData, Malformed> {
    Ok(load_dataset(path).with_context(|| format!("reading {}", path.display()))?)
}

fn emit(report: &Report, format: Format) -> u8 {
    let text = match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    };
    print!("{text}");
    if report.passed {
        0
    } else {
        EXIT_FAIL
    }
}

fn default_monomials(n: usize) -> Vec<ChernMonomial> {
    let mut v = vec![ChernMonomial::c1_pow(n), c1_cn1_monomial(n)];
    v.push(ChernMonomial::new(vec![n], n).expect("c_n is in range"));
    v.dedup();
    v
}

fn run(cli: Cli) -> Result<u8, Malformed> {
    let format = cli.format;
    match cli.command {
        Command::Validate { file } => {
            let (summary, report) = validate_file(&file).with_context(|| format!("reading {}", file.display()))?;
            let zero_weights = !report.nonzero_ok;
            let code = emit(&Report::validation(summary, report), format);
            Ok(if zero_weights { EXIT_MALFORMED } else { code })
        }
        Command::Analyze { file, monomials } => {
            let data = load(&file)?;
            let monos = if monomials.is_empty() {
                default_monomials(data.n())
            } else {
                monomials.iter().map(|m| ChernMonomial::parse(m, data.n())).collect::<Result<Vec<_>, _>>()?
            };
            Ok(emit(&Report::analyze(&data, &monos)?, format))
        }
        Command::Skeleton { file, cap, moment_filter } => {
            Ok(emit(&Report::skeleton(&load(&file)?, cap, moment_filter), format))
        }
        Command::Bounds { file, cap, moment_filter } => {
            Ok(emit(&Report::bounds(&load(&file)?, cap, moment_filter), format))
        }
        Command::Rigidity { file } => Ok(emit(&Report::rigidity(&load(&file)?), format)),
        Command::Generate { kind, output } => {
            let data = match kind {
                Generate::StandardCpn { m, moments } => {
                    if moments {
                        circlefix::corpus::gen_standard_cpn_with_moments(&m)?
                    } else {
                        circlefix::gen_standard_cpn(&m)?
                    }
                }
                Generate::Product { first, second } => gen_product(&load(&first)?, &load(&second)?)?,
                Generate::Mutate { file, kind, seed, delta } => {
                    let kind = MutationKind::parse(&kind, delta)?;
                    mutate(&load(&file)?, kind, seed)
                }
            };
            let text = write_dataset(&data);
            match output {
                Some(path) => fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
            Ok(0)
        }
        Command::Selftest { seed } => {
            let report = run_selftest(seed);
            match format {
                Format::Text => print!("{}", report.to_text()),
                Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
            }
            Ok(if report.passed() { 0 } else { EXIT_FAIL })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let code = match run(cli) {
        Ok(code) => code,
        Err(Malformed(e)) => {
            eprintln!("error: {e:#}");
            EXIT_MALFORMED
        }
    };
    let _ = std::io::stdout().flush();
    ExitCode::from(code)
}
