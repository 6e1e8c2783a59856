//! Numerical equilibrium oracle, independent of the closed forms.
//!
//! Each payoff is a concave quadratic in the player's own strategy, so the
//! best response is the clamped root of a linear first-order condition:
//!
//! ```text
//! ∂u1/∂x1 = 0  ⇔  2cA·x1 + (cB + sA)·x2 = c·k
//! ∂u2/∂x2 = 0  ⇔  (cA + sB)·x1 + 2cB·x2 = c·k
//! ```

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{ensure_finite, Error, Result};
use crate::model::MarketParams;
use crate::quantum_game::{
    payoff_gradient, quantum_payoffs, EntangleParams, EquilibriumReport, PayoffCoefficients, SolveMethod,
    StrategyProfile,
};

/// Default grid for deviation scans.
pub const DEFAULT_GRID_POINTS: usize = 1001;

/// Payoff differences at or below this are ties.
const TIE_EPS: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub const BOTH: [Player; 2] = [Player::One, Player::Two];

    pub fn index(self) -> usize {
        match self {
            Player::One => 1,
            Player::Two => 2,
        }
    }
}

/// `BR(x_opp) = max(0, intercept + slope · x_opp)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BestResponseLine {
    pub intercept: f64,
    pub slope: f64,
}

impl BestResponseLine {
    pub fn eval(&self, x_opp: f64) -> f64 {
        (self.intercept + self.slope * x_opp).max(0.0)
    }
}

pub fn best_response_line(params: &EntangleParams, market: &MarketParams, player: Player) -> BestResponseLine {
    let p = PayoffCoefficients::new(params);
    let (c, s, k) = (p.cosh, p.sinh, market.k());
    match player {
        Player::One => BestResponseLine {
            intercept: k / (2.0 * p.a),
            slope: -(c * p.b + s * p.a) / (2.0 * c * p.a),
        },
        Player::Two => BestResponseLine {
            intercept: k / (2.0 * p.b),
            slope: -(c * p.a + s * p.b) / (2.0 * c * p.b),
        },
    }
}

/// The maximizer of `player`'s payoff over `x ≥ 0` with the opponent held
/// at `x_opp`.
pub fn best_response(params: &EntangleParams, market: &MarketParams, player: Player, x_opp: f64) -> Result<f64> {
    ensure_finite("opponent strategy", x_opp)?;
    if x_opp < 0.0 {
        return Err(Error::domain(format!("opponent strategy must be >= 0, got {x_opp}")));
    }
    Ok(best_response_line(params, market, player).eval(x_opp))
}

/// `slope1 · slope2`; below 1 for every valid parameter set.
pub fn contraction_factor(params: &EntangleParams) -> f64 {
    let unit = MarketParams::from_margin(1.0).expect("unit market");
    let l1 = best_response_line(params, &unit, Player::One);
    let l2 = best_response_line(params, &unit, Player::Two);
    l1.slope * l2.slope
}

/// `∂²u_j/∂x_j² = −2 e^{γ_j} cosh γ12 · A_j` (`A_1 = A`, `A_2 = B`).
pub fn own_curvature(params: &EntangleParams, player: Player) -> f64 {
    let p = PayoffCoefficients::new(params);
    match player {
        Player::One => -2.0 * p.e1 * p.cosh * p.a,
        Player::Two => -2.0 * p.e2 * p.cosh * p.b,
    }
}

/// Solves the joint first-order conditions as a 2×2 linear system.
pub fn solve_nash_linear(params: &EntangleParams, market: &MarketParams) -> Result<EquilibriumReport> {
    let x = linear_equilibrium(params, market)?;
    let gain = verify_equilibrium(params, market, &x, DEFAULT_GRID_POINTS)?.max_gain;
    EquilibriumReport::assemble(params, market, x, SolveMethod::LinearSolve, gain)
}

/// The strategy part of [`solve_nash_linear`], by Cramer's rule.
pub fn linear_equilibrium(params: &EntangleParams, market: &MarketParams) -> Result<StrategyProfile> {
    let p = PayoffCoefficients::new(params);
    let (c, s, k) = (p.cosh, p.sinh, market.k());
    let (m11, m12) = (2.0 * c * p.a, c * p.b + s * p.a);
    let (m21, m22) = (c * p.a + s * p.b, 2.0 * c * p.b);
    let det = m11 * m22 - m12 * m21;
    // relative to the size of the products so that uniform rescaling by
    // e^{γ1+γ2} does not trip the guard
    let scale = (m11 * m22).abs() + (m12 * m21).abs();
    if !det.is_finite() || !(scale > 0.0) || det / scale < 1e-12 {
        return Err(Error::Singular(det));
    }
    let rhs = c * k;
    let x1 = rhs * (m22 - m12) / det;
    let x2 = rhs * (m11 - m21) / det;
    if !(x1.is_finite() && x2.is_finite()) {
        return Err(Error::NonFinite("linear equilibrium"));
    }
    StrategyProfile::new(x1.max(0.0), x2.max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationConfig {
    /// Weight `d ∈ (0, 1]` of the new best response.
    pub damping: f64,
    /// Stop once successive iterates differ by less than this (max norm).
    pub tol: f64,
    pub max_iter: usize,
    pub start: StrategyProfile,
}

impl Default for IterationConfig {
    fn default() -> Self {
        Self {
            damping: 1.0,
            tol: 1e-12,
            max_iter: 10_000,
            start: StrategyProfile::origin(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    /// Every profile visited, starting point included.
    pub iterates: Vec<StrategyProfile>,
    pub converged: bool,
    pub iterations: usize,
}

impl IterationTrace {
    pub fn last(&self) -> StrategyProfile {
        *self.iterates.last().expect("trace holds the starting point")
    }
}

/// Simultaneous damped best-response dynamics
/// `x ← (1 − d)·x + d·(BR1(x2), BR2(x1))`.
pub fn iterate_best_response(
    params: &EntangleParams,
    market: &MarketParams,
    config: &IterationConfig,
) -> Result<IterationTrace> {
    let IterationConfig {
        damping,
        tol,
        max_iter,
        start,
    } = *config;
    if !(damping > 0.0 && damping <= 1.0) {
        return Err(Error::domain(format!("damping must lie in (0, 1], got {damping}")));
    }
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be > 0, got {tol}")));
    }
    let l1 = best_response_line(params, market, Player::One);
    let l2 = best_response_line(params, market, Player::Two);
    let mut trace = IterationTrace {
        iterates: vec![start],
        converged: false,
        iterations: 0,
    };
    let mut x = start;
    while trace.iterations < max_iter {
        let next = StrategyProfile::new(
            (1.0 - damping) * x.x1() + damping * l1.eval(x.x2()),
            (1.0 - damping) * x.x2() + damping * l2.eval(x.x1()),
        )?;
        trace.iterations += 1;
        trace.iterates.push(next);
        let step = next.distance(&x);
        x = next;
        if step < tol {
            trace.converged = true;
            return Ok(trace);
        }
    }
    Err(Error::NonConvergence(Box::new(trace)))
}

/// Result of a unilateral-deviation scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeviationCheck {
    /// Largest payoff improvement any single player can obtain; `0` when
    /// staying put is optimal.
    pub max_gain: f64,
    /// The deviating player and the strategy achieving `max_gain`.
    pub best_deviation: (Player, f64),
}

/// Scans each player's own strategy over a uniform grid on `[0, k]` plus
/// the analytic best response, holding the opponent at `candidate`.
pub fn verify_equilibrium(
    params: &EntangleParams,
    market: &MarketParams,
    candidate: &StrategyProfile,
    grid_points: usize,
) -> Result<DeviationCheck> {
    if grid_points < 2 {
        return Err(Error::domain(format!(
            "grid needs at least 2 points, got {grid_points}"
        )));
    }
    let k = market.k();
    let mut best = DeviationCheck {
        max_gain: 0.0,
        best_deviation: (Player::One, candidate.x1()),
    };
    for player in Player::BOTH {
        let (own, opp) = match player {
            Player::One => (candidate.x1(), candidate.x2()),
            Player::Two => (candidate.x2(), candidate.x1()),
        };
        let payoff = |x_own: f64| {
            let profile = match player {
                Player::One => StrategyProfile::new(x_own, opp),
                Player::Two => StrategyProfile::new(opp, x_own),
            }
            .expect("nonnegative grid point");
            let u = quantum_payoffs(params, market, &profile);
            match player {
                Player::One => u.u1,
                Player::Two => u.u2,
            }
        };
        let base = payoff(own);
        let br = best_response(params, market, player, opp)?;
        let mut trials: Vec<f64> = (0..grid_points)
            .map(|i| k * i as f64 / (grid_points - 1) as f64)
            .collect();
        trials.push(br);
        let gains = gains_over(&trials, |x| payoff(x) - base);
        for (x, gain) in trials.iter().zip(gains) {
            let better = gain > best.max_gain + TIE_EPS;
            let tie_smaller = (gain - best.max_gain).abs() <= TIE_EPS && gain > 0.0 && *x < best.best_deviation.1;
            if better || tie_smaller {
                best = DeviationCheck {
                    max_gain: gain,
                    best_deviation: (player, *x),
                };
            }
        }
    }
    Ok(best)
}

// Evaluated in parallel when enabled; the caller reduces in index order.
fn gains_over(trials: &[f64], gain: impl Fn(f64) -> f64 + Sync) -> Vec<f64> {
    #[cfg(feature = "parallel")]
    {
        trials.par_iter().with_min_len(2048).map(|&x| gain(x)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        trials.iter().map(|&x| gain(x)).collect()
    }
}

/// Closed-form equilibrium with residuals filled in by this module.
pub fn closed_form_report(params: &EntangleParams, market: &MarketParams) -> Result<EquilibriumReport> {
    let x = crate::quantum_game::nash_closed_form(params, market);
    let gain = verify_equilibrium(params, market, &x, DEFAULT_GRID_POINTS)?.max_gain;
    EquilibriumReport::assemble(params, market, x, SolveMethod::ClosedForm, gain)
}

/// Converged best-response iterate packaged as a report.
pub fn iteration_report(
    params: &EntangleParams,
    market: &MarketParams,
    config: &IterationConfig,
) -> Result<EquilibriumReport> {
    let x = iterate_best_response(params, market, config)?.last();
    let gain = verify_equilibrium(params, market, &x, DEFAULT_GRID_POINTS)?.max_gain;
    EquilibriumReport::assemble(params, market, x, SolveMethod::Iteration, gain)
}

/// Euclidean norm of the own-strategy gradient.
pub fn foc_norm(params: &EntangleParams, market: &MarketParams, x: &StrategyProfile) -> f64 {
    let [a, b] = payoff_gradient(params, market, x);
    a.hypot(b)
}
