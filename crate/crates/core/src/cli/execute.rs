use std::path::PathBuf;

use serde::Serialize;

use crate::error::Result;
use crate::fmt::{ser_sig, sig};
use crate::quantum_game::{
    eta_and_entropy, nash_with_formula, EntropyReport, EquilibriumReport, NashFormula, StrategyProfile,
};
use crate::solver::{closed_form_report, solve_nash_linear, verify_equilibrium, Player, DEFAULT_GRID_POINTS};
use crate::sweep::{
    csv_string, equal_entropy_comparison, figure_metadata, figure_series, run_sweep, sweep_metadata, Series,
    ROW_RESIDUAL_TOL,
};
use crate::verify::{run_all, VerifySummary};

use super::{Command, EXIT_OK, EXIT_VERIFY};

/// Output of `nash`: both solution routes and how far apart they are.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NashDocument {
    pub closed_form: EquilibriumReport,
    pub linear_solve: EquilibriumReport,
    /// Max-norm distance between the two strategy profiles.
    #[serde(serialize_with = "ser_sig")]
    pub agreement: f64,
    #[serde(serialize_with = "ser_sig")]
    pub agreement_threshold: f64,
    pub consistent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub as_printed: Option<PrintedPoint>,
}

/// The as-printed closed form, kept for comparison. It is not an
/// equilibrium whenever `gamma1 != gamma2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrintedPoint {
    pub x: StrategyProfile,
    #[serde(serialize_with = "ser_sig")]
    pub max_deviation_gain: f64,
    pub deviating_player: Player,
    #[serde(serialize_with = "ser_sig")]
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunReport {
    Nash(Box<NashDocument>),
    Entropy(EntropyReport),
    /// CSV text; written to `out` when given, otherwise printed.
    Table {
        csv: String,
        rows: usize,
        out: Option<PathBuf>,
    },
    Verify(VerifySummary),
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunReport::Nash(doc) if !doc.consistent => EXIT_VERIFY,
            RunReport::Verify(summary) if !summary.all_pass => EXIT_VERIFY,
            _ => EXIT_OK,
        }
    }

    /// Message for stderr, possibly empty.
    pub fn diagnostic(&self) -> String {
        match self {
            RunReport::Nash(doc) if !doc.consistent => format!(
                "error: closed form and linear solve disagree by {} (threshold {})\n",
                sig(doc.agreement),
                sig(doc.agreement_threshold)
            ),
            RunReport::Verify(s) if !s.all_pass => format!("error: {} of {} checks failed\n", s.failed, s.checks.len()),
            RunReport::Table {
                rows, out: Some(path), ..
            } => format!("wrote {rows} rows to {}\n", path.display()),
            _ => String::new(),
        }
    }
}

pub fn execute(cmd: &Command) -> Result<RunReport> {
    match cmd {
        Command::Nash {
            params,
            market,
            as_printed,
            ..
        } => {
            let closed_form = closed_form_report(params, market)?;
            let linear_solve = solve_nash_linear(params, market)?;
            let agreement = closed_form.x_star.distance(&linear_solve.x_star);
            let threshold = ROW_RESIDUAL_TOL * market.k();
            let as_printed = if *as_printed {
                let x = nash_with_formula(params, market, NashFormula::AsPrinted);
                let check = verify_equilibrium(params, market, &x, DEFAULT_GRID_POINTS)?;
                Some(PrintedPoint {
                    x,
                    max_deviation_gain: check.max_gain,
                    deviating_player: check.best_deviation.0,
                    deviation: check.best_deviation.1,
                })
            } else {
                None
            };
            Ok(RunReport::Nash(Box::new(NashDocument {
                closed_form,
                linear_solve,
                agreement,
                agreement_threshold: threshold,
                consistent: agreement <= threshold,
                as_printed,
            })))
        }
        Command::Entropy { gamma12, dgamma, .. } => Ok(RunReport::Entropy(eta_and_entropy(*gamma12, *dgamma)?)),
        Command::Sweep { spec, out } => {
            let rows = run_sweep(spec)?;
            let series = [Series {
                label: spec.axis.as_str().into(),
                spec: *spec,
                rows,
            }];
            table(csv_string(&sweep_metadata(spec), &series), &series, out)
        }
        Command::Figure { id, k, out } => {
            let series = figure_series(*id, *k)?;
            table(csv_string(&figure_metadata(*id, *k), &series), &series, out)
        }
        Command::EqualEntropy {
            entropy,
            dgammas,
            k,
            out,
        } => {
            let rows = equal_entropy_comparison(*entropy, dgammas, *k)?;
            let meta = vec![
                ("comparison".to_string(), "equal entropy".to_string()),
                ("entropy".to_string(), sig(*entropy)),
                ("dgamma_split".to_string(), "symmetric".to_string()),
                ("k".to_string(), sig(*k)),
                ("tool".to_string(), crate::TOOL_VERSION.to_string()),
            ];
            let spec = crate::sweep::SweepSpec::gamma12_sweep(0.0, 0.0, 2, 0.0, *k);
            let series = [Series {
                label: "equal entropy".into(),
                spec,
                rows,
            }];
            table(csv_string(&meta, &series), &series, out)
        }
        Command::Verify { config, .. } => Ok(RunReport::Verify(run_all(config))),
    }
}

fn table(csv: String, series: &[Series], out: &Option<PathBuf>) -> Result<RunReport> {
    if let Some(path) = out {
        std::fs::write(path, csv.as_bytes())?;
    }
    Ok(RunReport::Table {
        rows: series.iter().map(|s| s.rows.len()).sum(),
        csv,
        out: out.clone(),
    })
}
