use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::model::MarketParams;
use crate::quantum_game::EntangleParams;
use crate::sweep::{Axis, DgammaSplit, FigureId, SweepSpec};
use crate::verify::VerifyConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Text,
}

/// A validated invocation.
#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Nash {
        params: EntangleParams,
        market: MarketParams,
        /// Also evaluate the as-printed closed form.
        as_printed: bool,
        format: OutputFormat,
    },
    Entropy {
        gamma12: f64,
        dgamma: f64,
        format: OutputFormat,
    },
    Sweep {
        spec: SweepSpec,
        out: Option<PathBuf>,
    },
    Figure {
        id: FigureId,
        k: f64,
        out: Option<PathBuf>,
    },
    EqualEntropy {
        entropy: f64,
        dgammas: Vec<f64>,
        k: f64,
        out: Option<PathBuf>,
    },
    Verify {
        config: VerifyConfig,
        format: OutputFormat,
    },
}

impl Command {
    pub fn format(&self) -> OutputFormat {
        match self {
            Command::Nash { format, .. } | Command::Entropy { format, .. } | Command::Verify { format, .. } => *format,
            Command::Sweep { .. } | Command::Figure { .. } | Command::EqualEntropy { .. } => OutputFormat::Csv,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    /// `--help` / `--version`: print and exit 0.
    Help(String),
    Usage(String),
}

#[derive(Debug, Parser)]
#[command(
    name = "qcournot",
    version,
    about = "Quantum Cournot duopoly with asymmetric entanglement"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Nash equilibrium by closed form and by linear solve.
    #[command(allow_negative_numbers = true)]
    Nash(NashArgs),
    /// Entanglement entropy for (gamma12, dgamma).
    #[command(allow_negative_numbers = true)]
    Entropy(EntropyArgs),
    /// One-dimensional parameter sweep written as CSV.
    #[command(allow_negative_numbers = true)]
    Sweep(SweepArgs),
    /// Data behind one of the figures, written as CSV.
    Figure(FigureArgs),
    /// Rows of equal entropy for several dgamma values.
    #[command(allow_negative_numbers = true, name = "equal-entropy")]
    EqualEntropy(EqualEntropyArgs),
    /// Run the full verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct NashArgs {
    #[arg(long, default_value_t = 0.0, value_parser = finite)]
    gamma1: f64,
    #[arg(long, default_value_t = 0.0, value_parser = finite)]
    gamma2: f64,
    #[arg(long, value_parser = gamma12)]
    gamma12: f64,
    #[arg(long, default_value_t = 1.0, value_parser = positive)]
    k: f64,
    /// Unit cost c; the demand intercept becomes a = k + c.
    #[arg(long, default_value_t = 0.0, value_parser = nonnegative)]
    cost: f64,
    /// Include the as-printed closed form and its deviation gain.
    #[arg(long)]
    as_printed: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

#[derive(Debug, Args)]
struct EntropyArgs {
    #[arg(long, value_parser = gamma12)]
    gamma12: f64,
    #[arg(long, default_value_t = 0.0, value_parser = finite)]
    dgamma: f64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AxisArg {
    Gamma12,
    Dgamma,
}

// same spelling as in JSON sweep specs
#[derive(Debug, Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum SplitArg {
    Symmetric,
    OnFirst,
    OnSecond,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// JSON sweep specification; overrides the individual flags.
    #[arg(long, conflicts_with_all = ["vary", "from", "to", "steps"])]
    spec: Option<PathBuf>,
    #[arg(long, value_enum, required_unless_present = "spec")]
    vary: Option<AxisArg>,
    #[arg(long, value_parser = finite, required_unless_present = "spec")]
    from: Option<f64>,
    #[arg(long, value_parser = finite, required_unless_present = "spec")]
    to: Option<f64>,
    #[arg(long, required_unless_present = "spec")]
    steps: Option<usize>,
    /// Fixed gamma12 when sweeping dgamma.
    #[arg(long, default_value_t = 0.0, value_parser = gamma12)]
    gamma12: f64,
    /// Fixed dgamma when sweeping gamma12.
    #[arg(long, default_value_t = 0.0, value_parser = finite)]
    dgamma: f64,
    #[arg(long, value_enum, default_value_t = SplitArg::Symmetric)]
    split: SplitArg,
    #[arg(long, default_value_t = 1.0, value_parser = positive)]
    k: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FigureArgs {
    /// 2, 3, 4, 5 or a full figure name such as fig5_profit_diff.
    #[arg(long, value_parser = figure_id)]
    id: FigureId,
    #[arg(long, default_value_t = 1.0, value_parser = positive)]
    k: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EqualEntropyArgs {
    #[arg(long, value_parser = positive)]
    entropy: f64,
    /// Comma-separated dgamma values.
    #[arg(long, value_delimiter = ',', value_parser = finite, required = true)]
    dgamma: Vec<f64>,
    #[arg(long, default_value_t = 1.0, value_parser = positive)]
    k: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Points per player in each deviation scan.
    #[arg(long, default_value_t = crate::solver::DEFAULT_GRID_POINTS)]
    grid: usize,
    /// Multiplier applied to every tolerance threshold.
    #[arg(long, default_value_t = 1.0, value_parser = positive)]
    tolerance_scale: f64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

fn finite(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err("value must be finite".into())
    }
}

fn nonnegative(s: &str) -> Result<f64, String> {
    let v = finite(s)?;
    if v >= 0.0 {
        Ok(v)
    } else {
        Err("value must be >= 0".into())
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let v = finite(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err("value must be > 0".into())
    }
}

fn gamma12(s: &str) -> Result<f64, String> {
    let v = finite(s)?;
    if v >= 0.0 {
        Ok(v)
    } else {
        Err("gamma12 must be >= 0".into())
    }
}

fn figure_id(s: &str) -> Result<FigureId, String> {
    FigureId::parse(s).ok_or_else(|| format!("unknown figure '{s}' (expected 2, 3, 4 or 5)"))
}

/// Parses `argv` (program name first).
pub fn parse_command<I, S>(argv: I) -> Result<Command, ParseError>
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| {
        use clap::error::ErrorKind;
        match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ParseError::Help(e.to_string()),
            _ => ParseError::Usage(e.to_string()),
        }
    })?;
    let usage = |e: crate::Error| ParseError::Usage(format!("error: {e}\n"));
    Ok(match cli.command {
        Sub::Nash(a) => Command::Nash {
            params: EntangleParams::new(a.gamma1, a.gamma2, a.gamma12).map_err(usage)?,
            market: MarketParams::new(a.k + a.cost, a.cost).map_err(usage)?,
            as_printed: a.as_printed,
            format: a.format,
        },
        Sub::Entropy(a) => Command::Entropy {
            gamma12: a.gamma12,
            dgamma: a.dgamma,
            format: a.format,
        },
        Sub::Sweep(a) => {
            let spec = match &a.spec {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| ParseError::Usage(format!("error: --spec {}: {e}\n", path.display())))?;
                    serde_json::from_str::<SweepSpec>(&text)
                        .map_err(|e| ParseError::Usage(format!("error: --spec {}: {e}\n", path.display())))?
                }
                None => SweepSpec {
                    axis: match a.vary.expect("required by clap") {
                        AxisArg::Gamma12 => Axis::Gamma12,
                        AxisArg::Dgamma => Axis::Dgamma,
                    },
                    from: a.from.expect("required by clap"),
                    to: a.to.expect("required by clap"),
                    steps: a.steps.expect("required by clap"),
                    gamma12: a.gamma12,
                    dgamma: a.dgamma,
                    split: match a.split {
                        SplitArg::Symmetric => DgammaSplit::Symmetric,
                        SplitArg::OnFirst => DgammaSplit::OnFirst,
                        SplitArg::OnSecond => DgammaSplit::OnSecond,
                    },
                    k: a.k,
                },
            };
            spec.validate().map_err(usage)?;
            Command::Sweep { spec, out: a.out }
        }
        Sub::Figure(a) => Command::Figure {
            id: a.id,
            k: a.k,
            out: a.out,
        },
        Sub::EqualEntropy(a) => Command::EqualEntropy {
            entropy: a.entropy,
            dgammas: a.dgamma,
            k: a.k,
            out: a.out,
        },
        Sub::Verify(a) => {
            if a.grid < 2 {
                return Err(ParseError::Usage("error: --grid must be >= 2\n".into()));
            }
            Command::Verify {
                config: VerifyConfig {
                    grid_points: a.grid,
                    tolerance_scale: a.tolerance_scale,
                },
                format: a.format,
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<Command, ParseError> {
        parse_command(std::iter::once("qcournot").chain(args.iter().copied()))
    }

    #[test]
    fn nash_defaults_k() {
        let cmd = parse(&["nash", "--gamma1", "1", "--gamma2", "0", "--gamma12", "0.5"]).unwrap();
        match cmd {
            Command::Nash {
                params,
                market,
                format,
                as_printed,
            } => {
                assert_eq!((params.gamma1(), params.gamma2(), params.gamma12()), (1.0, 0.0, 0.5));
                assert_eq!(market.k(), 1.0);
                assert_eq!(format, OutputFormat::Json);
                assert!(!as_printed);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn figure_by_number() {
        let cmd = parse(&["figure", "--id", "5", "--out", "fig5.csv"]).unwrap();
        assert_eq!(
            cmd,
            Command::Figure {
                id: FigureId::Fig5ProfitDiff,
                k: 1.0,
                out: Some(PathBuf::from("fig5.csv"))
            }
        );
    }

    #[test]
    fn negative_gamma12_names_flag() {
        match parse(&["nash", "--gamma12", "-1"]) {
            Err(ParseError::Usage(msg)) => {
                assert!(msg.contains("--gamma12"), "{msg}");
                assert!(msg.contains("gamma12 must be >= 0"), "{msg}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn negative_gammas_accepted() {
        let cmd = parse(&["nash", "--gamma1", "-1.5", "--gamma12", "0.2"]).unwrap();
        assert!(matches!(cmd, Command::Nash { params, .. } if params.gamma1() == -1.5));
        let cmd = parse(&[
            "sweep",
            "--vary",
            "dgamma",
            "--from",
            "-2",
            "--to",
            "2",
            "--steps",
            "5",
            "--gamma12",
            "0.5",
        ])
        .unwrap();
        assert!(matches!(cmd, Command::Sweep { spec, .. } if spec.from == -2.0 && spec.axis == Axis::Dgamma));
    }

    #[test]
    fn usage_errors() {
        for args in [
            &["nash"][..],
            &["nash", "--gamma12", "0.5", "--bogus", "1"],
            &["nash", "--gamma12", "abc"],
            &["nash", "--gamma12", "inf"],
            &["nash", "--gamma12", "0.5", "--k", "0"],
            &["figure", "--id", "7"],
            &["sweep", "--vary", "gamma12", "--from", "0", "--to", "1", "--steps", "1"],
            &[
                "sweep", "--vary", "gamma12", "--from", "-1", "--to", "1", "--steps", "3",
            ],
            &["verify", "--grid", "1"],
            &["frobnicate"],
        ] {
            assert!(matches!(parse(args), Err(ParseError::Usage(_))), "{args:?}");
        }
        assert!(matches!(parse(&["--help"]), Err(ParseError::Help(_))));
    }

    #[test]
    fn verify_defaults() {
        let cmd = parse(&["verify"]).unwrap();
        assert_eq!(
            cmd,
            Command::Verify {
                config: VerifyConfig::default(),
                format: OutputFormat::Json
            }
        );
    }

    #[test]
    fn equal_entropy_list() {
        let cmd = parse(&["equal-entropy", "--entropy", "0.5", "--dgamma", "0,-1.5,3"]).unwrap();
        assert!(matches!(cmd, Command::EqualEntropy { dgammas, .. } if dgammas == vec![0.0, -1.5, 3.0]));
    }
}
