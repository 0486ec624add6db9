//! `moran`: command-line front end to the `moran` library.
//!
//! Exit status is 0 on success, 1 on domain errors and failed `--expect`
//! assertions, 2 on usage and parse errors.

mod report;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use moran::fourier::{sample_ft, write_csv, FtOptions};
use moran::ortho::{
    classify, construct_lambda0, construct_lambda_star_with, is_bizero_family,
    BizeroVerdict, OrthogonalFamily, OrthogonalityGraph, Regime, StarOrder,
};
use moran::zeros::{enumerate_zeros, zero_witnesses};
use moran::{Frequency, MoranMeasure};

use report::{render, Format, Section};

const PRECISION_ENV: &str = "MORAN_MAX_PRECISION_BITS";

#[derive(Parser)]
#[command(name = "moran", version, about = "Exact zero sets and orthogonal exponentials of Moran measures")]
struct Cli {
    /// Report layout.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct MeasureArg {
    /// Measure configuration file.
    #[arg(short = 'm', long = "measure", value_name = "CONFIG")]
    measure: PathBuf,
}

#[derive(Args)]
struct Bounds {
    /// Largest level n.
    #[arg(long)]
    n_max: u64,
    /// Largest |a|.
    #[arg(long)]
    a_max: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Membership {
    Zero,
    Nonzero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Orthogonality {
    Orthogonal,
    NotOrthogonal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FamilyExpectation {
    Orthogonal,
    Size(usize),
}

fn parse_family_expectation(s: &str) -> Result<FamilyExpectation, String> {
    match s {
        "orthogonal" => Ok(FamilyExpectation::Orthogonal),
        _ => s
            .parse()
            .map(FamilyExpectation::Size)
            .map_err(|_| format!("expected `orthogonal` or a family size, got {s:?}")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OrderArg {
    Constant,
    Lcm,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the measure by the arithmetic of p, q and the digits.
    Classify {
        #[command(flatten)]
        measure: MeasureArg,
        #[arg(long, value_parser = |s: &str| s.parse::<Regime>())]
        expect: Option<Regime>,
    },
    /// List zeros a·ρ^-n/N_n with 1 <= n <= n-max and 0 < |a| <= a-max.
    Zeros {
        #[command(flatten)]
        measure: MeasureArg,
        #[command(flatten)]
        bounds: Bounds,
        /// Expected number of zeros.
        #[arg(long)]
        expect: Option<usize>,
    },
    /// Decide whether one frequency is a zero and list its witnesses.
    Member {
        #[command(flatten)]
        measure: MeasureArg,
        /// Frequency literal.
        #[arg(long, allow_hyphen_values = true)]
        freq: String,
        #[arg(long, value_enum)]
        expect: Option<Membership>,
    },
    /// Verify that a family is mutually orthogonal.
    Check {
        #[command(flatten)]
        measure: MeasureArg,
        /// Comma-separated frequency literals.
        #[arg(long, allow_hyphen_values = true)]
        family: String,
        #[arg(long, value_enum)]
        expect: Option<Orthogonality>,
    },
    /// Largest orthogonal family containing 0 among the enumerated zeros.
    SearchMax {
        #[command(flatten)]
        measure: MeasureArg,
        #[command(flatten)]
        bounds: Bounds,
        /// `orthogonal` or an exact family size.
        #[arg(long, value_parser = parse_family_expectation)]
        expect: Option<FamilyExpectation>,
    },
    /// The M-element family {0} ∪ {j·ρ^-t/M}.
    ConstructL0 {
        #[command(flatten)]
        measure: MeasureArg,
        #[arg(long, value_parser = parse_family_expectation)]
        expect: Option<FamilyExpectation>,
    },
    /// The alpha-element family built from the order of q modulo the digit.
    ConstructStar {
        #[command(flatten)]
        measure: MeasureArg,
        #[arg(long)]
        alpha: u64,
        /// Branch index in 1..=r.
        #[arg(long, default_value_t = 1)]
        branch: u32,
        /// How the exponent step is chosen for non-constant digits.
        #[arg(long, value_enum, default_value_t = OrderArg::Constant)]
        order: OrderArg,
        #[arg(long, value_parser = parse_family_expectation)]
        expect: Option<FamilyExpectation>,
    },
    /// Sample the Fourier transform on a uniform grid as CSV.
    SampleFt {
        #[command(flatten)]
        measure: MeasureArg,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Domain(_) => 1,
            Failure::Usage(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Domain(m) => m,
        }
    }
}

fn domain(e: moran::Error) -> Failure {
    Failure::Domain(e.to_string())
}

fn load_measure(path: &Path) -> Result<MoranMeasure, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    text.parse()
        .map_err(|e: moran::Error| Failure::Usage(format!("{}: {e}", path.display())))
}

fn parse_literal(measure: &MoranMeasure, literal: &str) -> Result<Frequency, Failure> {
    Frequency::parse(measure, literal.trim()).map_err(|e| Failure::Usage(e.to_string()))
}

fn ft_options() -> Result<FtOptions, Failure> {
    let mut options = FtOptions::default();
    if let Ok(raw) = std::env::var(PRECISION_ENV) {
        options.max_precision_bits = raw
            .trim()
            .parse()
            .ok()
            .filter(|&b: &u64| b >= 64)
            .ok_or_else(|| {
                Failure::Usage(format!("{PRECISION_ENV} must be an integer >= 64, got {raw:?}"))
            })?;
    }
    Ok(options)
}

/// Sections to print, plus why the run still counts as failed: an unmet
/// `--expect` or a sampled row that could not be evaluated.
struct Outcome {
    sections: Vec<Section>,
    unmet: Option<String>,
}

fn expect_eq<T: PartialEq + std::fmt::Display>(expected: Option<T>, actual: T) -> Option<String> {
    match expected {
        Some(e) if e != actual => Some(format!("expectation failed: expected {e}, got {actual}")),
        _ => None,
    }
}

fn family_outcome(
    mut sections: Vec<Section>,
    family: &OrthogonalFamily,
    expect: Option<FamilyExpectation>,
) -> Outcome {
    let members: Vec<_> = family.iter().cloned().collect();
    let size = members.len();
    sections.push(Section::Family(members));
    sections.push(Section::Verdict("orthogonal".into()));
    let unmet = match expect {
        Some(FamilyExpectation::Size(n)) if n != size => {
            Some(format!("expectation failed: expected a family of size {n}, got {size}"))
        }
        _ => None,
    };
    Outcome { sections, unmet }
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    match cli.command {
        Command::Classify { measure, expect } => {
            let m = load_measure(&measure.measure)?;
            let c = classify(&m);
            let unmet = expect_eq(expect, c.regime);
            Ok(Outcome {
                sections: vec![
                    Section::Regime {
                        regime: c.regime,
                        reasons: c.justification,
                    },
                    Section::GcdTable {
                        rows: c.digits,
                        exceptions: c.preperiod_exceptions,
                    },
                ],
                unmet,
            })
        }
        Command::Zeros {
            measure,
            bounds,
            expect,
        } => {
            let m = load_measure(&measure.measure)?;
            let zs: Vec<_> = enumerate_zeros(&m, bounds.n_max, bounds.a_max)
                .map_err(domain)?
                .into_iter()
                .collect();
            let unmet = expect_eq(expect, zs.len());
            Ok(Outcome {
                sections: vec![Section::Zeros(zs)],
                unmet,
            })
        }
        Command::Member {
            measure,
            freq,
            expect,
        } => {
            let m = load_measure(&measure.measure)?;
            let f = parse_literal(&m, &freq)?;
            let ws = zero_witnesses(&m, &f).map_err(domain)?;
            let verdict = if ws.is_empty() {
                Membership::Nonzero
            } else {
                Membership::Zero
            };
            let name = |v: Membership| v.to_possible_value().unwrap().get_name().to_string();
            let unmet = expect
                .filter(|&e| e != verdict)
                .map(|e| format!("expectation failed: expected {}, got {}", name(e), name(verdict)));
            Ok(Outcome {
                sections: vec![
                    Section::Frequency(f),
                    Section::Witnesses(ws),
                    Section::Verdict(name(verdict)),
                ],
                unmet,
            })
        }
        Command::Check {
            measure,
            family,
            expect,
        } => {
            let m = load_measure(&measure.measure)?;
            let members = family
                .split(',')
                .map(|lit| parse_literal(&m, lit))
                .collect::<Result<Vec<_>, _>>()?;
            let verdict = is_bizero_family(&m, &members).map_err(|e| match e {
                moran::Error::DuplicateMember(_) => Failure::Usage(e.to_string()),
                _ => domain(e),
            })?;
            let mut sorted = members;
            sorted.sort();
            let mut sections = vec![Section::Family(sorted)];
            let actual = match verdict {
                BizeroVerdict::Orthogonal => Orthogonality::Orthogonal,
                BizeroVerdict::Counterexample { first, second } => {
                    sections.push(Section::Counterexample(first, second));
                    Orthogonality::NotOrthogonal
                }
            };
            let name = |v: Orthogonality| v.to_possible_value().unwrap().get_name().to_string();
            sections.push(Section::Verdict(name(actual)));
            let unmet = expect
                .filter(|&e| e != actual)
                .map(|e| format!("expectation failed: expected {}, got {}", name(e), name(actual)));
            Ok(Outcome { sections, unmet })
        }
        Command::SearchMax {
            measure,
            bounds,
            expect,
        } => {
            let m = load_measure(&measure.measure)?;
            let zs = enumerate_zeros(&m, bounds.n_max, bounds.a_max).map_err(domain)?;
            let graph = OrthogonalityGraph::build(&m, zs).map_err(domain)?;
            let sections = vec![Section::Graph {
                vertices: graph.vertices().len(),
                edges: graph.edge_count(),
            }];
            Ok(family_outcome(sections, &graph.max_family(), expect))
        }
        Command::ConstructL0 { measure, expect } => {
            let m = load_measure(&measure.measure)?;
            let family = construct_lambda0(&m).map_err(domain)?;
            Ok(family_outcome(Vec::new(), &family, expect))
        }
        Command::ConstructStar {
            measure,
            alpha,
            branch,
            order,
            expect,
        } => {
            let m = load_measure(&measure.measure)?;
            let order = match order {
                OrderArg::Constant => StarOrder::Constant,
                OrderArg::Lcm => StarOrder::Lcm,
            };
            let family = construct_lambda_star_with(&m, alpha, branch, order).map_err(domain)?;
            Ok(family_outcome(Vec::new(), &family, expect))
        }
        Command::SampleFt {
            measure,
            from,
            to,
            count,
            tol,
            out,
        } => {
            let m = load_measure(&measure.measure)?;
            let options = ft_options()?;
            let rows = sample_ft(&m, from, to, count, tol, &options).map_err(domain)?;
            let written = match &out {
                Some(path) => fs::File::create(path)
                    .and_then(|f| write_csv(&rows, io::BufWriter::new(f))),
                None => write_csv(&rows, io::stdout().lock()),
            };
            written.map_err(|e| Failure::Domain(format!("writing CSV: {e}")))?;
            let failed: Vec<_> = rows
                .iter()
                .filter_map(|r| r.result.as_ref().err().map(|e| format!("xi = {:e}: {e}", r.xi)))
                .collect();
            let unmet = (!failed.is_empty()).then(|| {
                format!("{} of {count} rows failed\n{}", failed.len(), failed.join("\n"))
            });
            Ok(Outcome {
                sections: Vec::new(),
                unmet,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(outcome) => {
            let text = render(&outcome.sections, format);
            let mut stdout = io::stdout().lock();
            if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            match outcome.unmet {
                Some(reason) => {
                    eprintln!("error: {reason}");
                    ExitCode::from(1)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
