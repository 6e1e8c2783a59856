//! Parameter grids over `(γ12, Δγ)` and their CSV encoding.

use std::fmt::Write as _;
use std::io::Write;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::fmt::sig;
use crate::model::MarketParams;
use crate::quantum_game::{
    asymmetry_closed_form, eta_and_entropy, gamma12_for_entropy, nash_closed_form, quantities, quantum_payoffs,
    EntangleParams, StrategyProfile,
};
use crate::solver::{foc_norm, linear_equilibrium, verify_equilibrium, DEFAULT_GRID_POINTS};

/// Exact CSV header.
pub const CSV_HEADER: &str = "gamma1,gamma2,gamma12,dgamma,x1,x2,q1,q2,price,u1,u2,u_total,eta,entropy,asymmetry";

/// Per-row agreement required between the closed form and the linear
/// solve, in units of `k`.
pub const ROW_RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Gamma12,
    Dgamma,
}

impl Axis {
    pub fn as_str(self) -> &'static str {
        match self {
            Axis::Gamma12 => "gamma12",
            Axis::Dgamma => "dgamma",
        }
    }
}

/// How a given Δγ is realized as `(γ1, γ2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DgammaSplit {
    /// `γ1 = Δγ/2`, `γ2 = −Δγ/2`.
    #[default]
    Symmetric,
    /// `γ1 = Δγ`, `γ2 = 0`.
    OnFirst,
    /// `γ1 = 0`, `γ2 = −Δγ`.
    OnSecond,
}

impl DgammaSplit {
    pub fn as_str(self) -> &'static str {
        match self {
            DgammaSplit::Symmetric => "symmetric",
            DgammaSplit::OnFirst => "on_first",
            DgammaSplit::OnSecond => "on_second",
        }
    }

    pub fn gammas(self, dgamma: f64) -> (f64, f64) {
        match self {
            DgammaSplit::Symmetric => (dgamma / 2.0, -dgamma / 2.0),
            DgammaSplit::OnFirst => (dgamma, 0.0),
            DgammaSplit::OnSecond => (0.0, -dgamma),
        }
    }

    pub fn params(self, gamma12: f64, dgamma: f64) -> Result<EntangleParams> {
        let (g1, g2) = self.gammas(dgamma);
        EntangleParams::new(g1, g2, gamma12)
    }
}

/// A one-dimensional grid. The parameter named by `axis` runs over
/// `steps` evenly spaced values in `[from, to]`; the other of
/// `gamma12`/`dgamma` is held fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub axis: Axis,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    #[serde(default)]
    pub gamma12: f64,
    #[serde(default)]
    pub dgamma: f64,
    #[serde(default)]
    pub split: DgammaSplit,
    #[serde(default = "unit_k")]
    pub k: f64,
}

fn unit_k() -> f64 {
    1.0
}

impl SweepSpec {
    pub fn gamma12_sweep(from: f64, to: f64, steps: usize, dgamma: f64, k: f64) -> Self {
        Self {
            axis: Axis::Gamma12,
            from,
            to,
            steps,
            gamma12: 0.0,
            dgamma,
            split: DgammaSplit::Symmetric,
            k,
        }
    }

    pub fn dgamma_sweep(from: f64, to: f64, steps: usize, gamma12: f64, k: f64) -> Self {
        Self {
            axis: Axis::Dgamma,
            from,
            to,
            steps,
            gamma12,
            dgamma: 0.0,
            split: DgammaSplit::Symmetric,
            k,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("from", self.from),
            ("to", self.to),
            ("gamma12", self.gamma12),
            ("dgamma", self.dgamma),
            ("k", self.k),
        ] {
            ensure_finite(name, v)?;
        }
        if self.steps < 2 {
            return Err(Error::domain(format!("steps must be >= 2, got {}", self.steps)));
        }
        if self.from > self.to {
            return Err(Error::domain(format!(
                "sweep range must satisfy from <= to, got {} > {}",
                self.from, self.to
            )));
        }
        if self.k <= 0.0 {
            return Err(Error::domain(format!("k must be > 0, got {}", self.k)));
        }
        let min_gamma12 = match self.axis {
            Axis::Gamma12 => self.from,
            Axis::Dgamma => self.gamma12,
        };
        if min_gamma12 < 0.0 {
            return Err(Error::domain(format!("gamma12 values must be >= 0, got {min_gamma12}")));
        }
        Ok(())
    }

    /// Grid values, endpoints exact.
    pub fn values(&self) -> Vec<f64> {
        let n = self.steps - 1;
        (0..=n)
            .map(|i| {
                if i == n {
                    self.to
                } else {
                    self.from + (self.to - self.from) * i as f64 / n as f64
                }
            })
            .collect()
    }

    /// `(γ12, Δγ)` at each grid point.
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.values()
            .into_iter()
            .map(|v| match self.axis {
                Axis::Gamma12 => (v, self.dgamma),
                Axis::Dgamma => (self.gamma12, v),
            })
            .collect()
    }

    /// `#`-comment metadata for CSV output.
    pub fn metadata(&self) -> Vec<(String, String)> {
        let fixed = match self.axis {
            Axis::Gamma12 => ("dgamma", self.dgamma),
            Axis::Dgamma => ("gamma12", self.gamma12),
        };
        vec![
            ("axis".into(), self.axis.as_str().into()),
            (
                "range".into(),
                format!("{}..{} ({} steps)", sig(self.from), sig(self.to), self.steps),
            ),
            (fixed.0.into(), sig(fixed.1)),
            ("dgamma_split".into(), self.split.as_str().into()),
            ("k".into(), sig(self.k)),
        ]
    }
}

/// One equilibrium on a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma12: f64,
    pub dgamma: f64,
    pub x1: f64,
    pub x2: f64,
    pub q1: f64,
    pub q2: f64,
    pub price: f64,
    pub u1: f64,
    pub u2: f64,
    pub u_total: f64,
    pub eta: f64,
    pub entropy: f64,
    pub asymmetry: f64,
}

impl SweepRow {
    pub fn params(&self) -> EntangleParams {
        EntangleParams::new(self.gamma1, self.gamma2, self.gamma12).expect("row parameters are valid")
    }

    pub fn strategy(&self) -> StrategyProfile {
        StrategyProfile::new(self.x1, self.x2).expect("row strategies are valid")
    }

    pub fn values(&self) -> [f64; 15] {
        [
            self.gamma1,
            self.gamma2,
            self.gamma12,
            self.dgamma,
            self.x1,
            self.x2,
            self.q1,
            self.q2,
            self.price,
            self.u1,
            self.u2,
            self.u_total,
            self.eta,
            self.entropy,
            self.asymmetry,
        ]
    }

    pub fn csv_line(&self) -> String {
        let mut line = String::with_capacity(200);
        for (i, v) in self.values().iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            line.push_str(&sig(*v));
        }
        line
    }
}

/// Closed-form equilibrium at `params`, checked against the linear solve.
pub fn equilibrium_row(params: &EntangleParams, market: &MarketParams) -> Result<SweepRow> {
    let k = market.k();
    let x = nash_closed_form(params, market);
    let oracle = linear_equilibrium(params, market)?;
    let disagreement = x.distance(&oracle);
    if !(disagreement <= ROW_RESIDUAL_TOL * k) {
        return Err(Error::Residual {
            what: "closed form vs linear solve",
            value: disagreement,
            threshold: ROW_RESIDUAL_TOL * k,
        });
    }
    let foc = foc_norm(params, market, &x);
    if !(foc <= ROW_RESIDUAL_TOL * k * k.max(1.0)) {
        return Err(Error::Residual {
            what: "first-order conditions",
            value: foc,
            threshold: ROW_RESIDUAL_TOL * k * k.max(1.0),
        });
    }
    let q = quantities(params, &x);
    let u = quantum_payoffs(params, market, &x);
    let entropy = eta_and_entropy(params.gamma12(), params.dgamma())?;
    let row = SweepRow {
        gamma1: params.gamma1(),
        gamma2: params.gamma2(),
        gamma12: params.gamma12(),
        dgamma: params.dgamma(),
        x1: x.x1(),
        x2: x.x2(),
        q1: q.q1,
        q2: q.q2,
        price: crate::model::clamped_price(market, q.total())?,
        u1: u.u1,
        u2: u.u2,
        u_total: u.total(),
        eta: entropy.eta,
        entropy: entropy.entropy,
        asymmetry: asymmetry_closed_form(params),
    };
    if row.values().iter().all(|v| v.is_finite()) {
        Ok(row)
    } else {
        Err(Error::NonFinite("sweep row"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    /// Falls back to serial evaluation without the `parallel` feature.
    #[default]
    Parallel,
}

pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    run_sweep_with(spec, Execution::default())
}

/// Rows come back in grid order regardless of `exec`.
pub fn run_sweep_with(spec: &SweepSpec, exec: Execution) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let market = MarketParams::from_margin(spec.k)?;
    let points = spec.points();
    let row = |&(g12, dg): &(f64, f64)| -> Result<SweepRow> { equilibrium_row(&spec.split.params(g12, dg)?, &market) };
    match exec {
        Execution::Serial => points.iter().map(row).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => points.par_iter().map(row).collect(),
        #[cfg(not(feature = "parallel"))]
        Execution::Parallel => points.iter().map(row).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FigureId {
    /// Total profit and entropy against γ12 at fixed Δγ.
    Fig2DrFixed,
    /// Total profit and entropy against Δγ at fixed γ12.
    Fig3R12Fixed,
    /// Entropy against total profit, parametrized by γ12.
    Fig4SVsU,
    /// Profit difference `u1 − u2` against Δγ.
    Fig5ProfitDiff,
}

impl FigureId {
    pub const ALL: [FigureId; 4] = [
        FigureId::Fig2DrFixed,
        FigureId::Fig3R12Fixed,
        FigureId::Fig4SVsU,
        FigureId::Fig5ProfitDiff,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FigureId::Fig2DrFixed => "fig2_dr_fixed",
            FigureId::Fig3R12Fixed => "fig3_r12_fixed",
            FigureId::Fig4SVsU => "fig4_s_vs_u",
            FigureId::Fig5ProfitDiff => "fig5_profit_diff",
        }
    }

    /// Accepts `2`, `fig2` or the full name.
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim().to_ascii_lowercase();
        Self::ALL.into_iter().find(|id| {
            let name = id.as_str();
            s == name || s == name[..4] || s == name[3..4]
        })
    }

    /// The series x-axis column.
    pub fn x_column(self) -> &'static str {
        match self {
            FigureId::Fig2DrFixed => "gamma12",
            FigureId::Fig3R12Fixed | FigureId::Fig5ProfitDiff => "dgamma",
            FigureId::Fig4SVsU => "entropy",
        }
    }
}

impl std::fmt::Display for FigureId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
}

/// Grid definitions for every figure.
pub fn figure_specs(id: FigureId, k: f64) -> Vec<(String, SweepSpec)> {
    match id {
        FigureId::Fig2DrFixed | FigureId::Fig4SVsU => [0.0, 1.0, 2.0]
            .iter()
            .map(|&dg| {
                (
                    format!("dgamma={}", sig(dg)),
                    SweepSpec::gamma12_sweep(0.0, 3.0, 301, dg, k),
                )
            })
            .collect(),
        FigureId::Fig3R12Fixed => [0.5, 1.0, 2.0]
            .iter()
            .map(|&g| {
                (
                    format!("gamma12={}", sig(g)),
                    SweepSpec::dgamma_sweep(0.0, 6.0, 301, g, k),
                )
            })
            .collect(),
        FigureId::Fig5ProfitDiff => [0.5, 1.0, 2.0]
            .iter()
            .map(|&g| {
                (
                    format!("gamma12={}", sig(g)),
                    SweepSpec::dgamma_sweep(-6.0, 6.0, 601, g, k),
                )
            })
            .collect(),
    }
}

pub fn figure_series(id: FigureId, k: f64) -> Result<Vec<Series>> {
    figure_series_with(id, k, Execution::default())
}

pub fn figure_series_with(id: FigureId, k: f64, exec: Execution) -> Result<Vec<Series>> {
    figure_specs(id, k)
        .into_iter()
        .map(|(label, spec)| {
            Ok(Series {
                rows: run_sweep_with(&spec, exec)?,
                label,
                spec,
            })
        })
        .collect()
}

/// Rows sharing one entropy value: for each Δγ, γ12 is chosen so that the
/// entangled state has entropy `entropy_target`.
pub fn equal_entropy_comparison(entropy_target: f64, dgamma_values: &[f64], k: f64) -> Result<Vec<SweepRow>> {
    ensure_finite("entropy target", entropy_target)?;
    if entropy_target <= 0.0 {
        return Err(Error::domain(format!(
            "entropy target must be > 0, got {entropy_target}"
        )));
    }
    let market = MarketParams::from_margin(k)?;
    dgamma_values
        .iter()
        .map(|&dg| {
            let g12 = gamma12_for_entropy(entropy_target, dg)?;
            equilibrium_row(&DgammaSplit::Symmetric.params(g12, dg)?, &market)
        })
        .collect()
}

/// Re-verifies a seeded random subsample of rows by deviation scan and
/// returns the largest gain found.
pub fn spot_check(rows: &[SweepRow], k: f64, fraction: f64, seed: u64) -> Result<f64> {
    if rows.is_empty() {
        return Ok(0.0);
    }
    let market = MarketParams::from_margin(k)?;
    let n = ((rows.len() as f64 * fraction).ceil() as usize).clamp(1, rows.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for i in sample(&mut rng, rows.len(), n).into_iter() {
        let row = &rows[i];
        let check = verify_equilibrium(&row.params(), &market, &row.strategy(), DEFAULT_GRID_POINTS)?;
        worst = worst.max(check.max_gain);
    }
    Ok(worst)
}

/// Writes `#` metadata, the header, then the rows of each series. With
/// more than one series each block is preceded by `# series: <label>`.
pub fn write_csv<W: Write>(mut out: W, metadata: &[(String, String)], series: &[Series]) -> Result<()> {
    out.write_all(csv_string(metadata, series).as_bytes())?;
    Ok(())
}

pub fn csv_string(metadata: &[(String, String)], series: &[Series]) -> String {
    let mut s = String::new();
    for (key, value) in metadata {
        let _ = writeln!(s, "# {key}: {value}");
    }
    s.push_str(CSV_HEADER);
    s.push('\n');
    for block in series {
        if series.len() > 1 {
            let _ = writeln!(s, "# series: {}", block.label);
        }
        for row in &block.rows {
            s.push_str(&row.csv_line());
            s.push('\n');
        }
    }
    s
}

/// Metadata block for a whole figure.
pub fn figure_metadata(id: FigureId, k: f64) -> Vec<(String, String)> {
    let (axis, fixed) = match id {
        FigureId::Fig2DrFixed => ("gamma12 in [0, 3], 301 points", "dgamma in {0, 1, 2}"),
        FigureId::Fig4SVsU => (
            "gamma12 in [0, 3], 301 points; plot entropy vs u_total",
            "dgamma in {0, 1, 2}",
        ),
        FigureId::Fig3R12Fixed => ("dgamma in [0, 6], 301 points", "gamma12 in {0.5, 1, 2}"),
        FigureId::Fig5ProfitDiff => ("dgamma in [-6, 6], 601 points; plot u1 - u2", "gamma12 in {0.5, 1, 2}"),
    };
    vec![
        ("figure".into(), id.as_str().into()),
        ("sweep".into(), axis.into()),
        ("series".into(), fixed.into()),
        ("dgamma_split".into(), DgammaSplit::Symmetric.as_str().into()),
        ("k".into(), sig(k)),
        ("tool".into(), crate::TOOL_VERSION.into()),
    ]
}

pub fn sweep_metadata(spec: &SweepSpec) -> Vec<(String, String)> {
    let mut meta = vec![("sweep".to_string(), spec.axis.as_str().to_string())];
    meta.extend(spec.metadata().into_iter().skip(1));
    meta.push(("tool".into(), crate::TOOL_VERSION.into()));
    meta
}
