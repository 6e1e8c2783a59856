//! Closed forms of the quantized duopoly.
//!
//! Player j picks a displacement `x_j ≥ 0`; measuring `X_j` on the final
//! state yields the quantity `q_j`. Everything here is algebraic; the
//! [`gaussian`](crate::gaussian) and [`solver`](crate::solver) modules
//! re-derive the same numbers by independent routes.

use serde::Serialize;

use crate::error::{ensure_finite, Error, Result};
use crate::fmt::ser_sig;
use crate::gaussian::vn_entropy_from_nu;
use crate::model::{clamped_price, MarketParams, PayoffPair, QuantityPair};

/// Below this η the entropy is evaluated through ν, where the η-form has a
/// removable `ln(η/2)` singularity.
pub const ETA_SMALL: f64 = 1e-6;

/// Squeezing parameters of `J = S12 · S1 · S2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntangleParams {
    gamma1: f64,
    gamma2: f64,
    gamma12: f64,
}

impl EntangleParams {
    pub fn new(gamma1: f64, gamma2: f64, gamma12: f64) -> Result<Self> {
        ensure_finite("gamma1", gamma1)?;
        ensure_finite("gamma2", gamma2)?;
        ensure_finite("gamma12", gamma12)?;
        if gamma12 < 0.0 {
            return Err(Error::domain(format!("gamma12 must be >= 0, got {gamma12}")));
        }
        Ok(Self {
            gamma1,
            gamma2,
            gamma12,
        })
    }

    pub fn gamma1(&self) -> f64 {
        self.gamma1
    }

    pub fn gamma2(&self) -> f64 {
        self.gamma2
    }

    pub fn gamma12(&self) -> f64 {
        self.gamma12
    }

    /// `Δγ = γ1 − γ2`.
    pub fn dgamma(&self) -> f64 {
        self.gamma1 - self.gamma2
    }

    /// The same scheme with the players' roles exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            gamma1: self.gamma2,
            gamma2: self.gamma1,
            gamma12: self.gamma12,
        }
    }
}

/// Displacements `(x1, x2)`, both nonnegative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StrategyProfile {
    #[serde(serialize_with = "ser_sig")]
    x1: f64,
    #[serde(serialize_with = "ser_sig")]
    x2: f64,
}

impl StrategyProfile {
    pub fn new(x1: f64, x2: f64) -> Result<Self> {
        for (name, x) in [("x1", x1), ("x2", x2)] {
            ensure_finite(name, x)?;
            if x < 0.0 {
                return Err(Error::domain(format!("{name} must be >= 0, got {x}")));
            }
        }
        Ok(Self { x1, x2 })
    }

    pub const ORIGIN: Self = Self { x1: 0.0, x2: 0.0 };

    pub fn origin() -> Self {
        Self::ORIGIN
    }

    pub fn x1(&self) -> f64 {
        self.x1
    }

    pub fn x2(&self) -> f64 {
        self.x2
    }

    pub fn swapped(&self) -> Self {
        Self {
            x1: self.x2,
            x2: self.x1,
        }
    }

    /// Largest coordinate difference.
    pub fn distance(&self, other: &Self) -> f64 {
        (self.x1 - other.x1).abs().max((self.x2 - other.x2).abs())
    }
}

/// Coefficients shared by the quantity map and the payoffs:
/// `q1 = e^{γ1}(c x1 + s x2)`, `q2 = e^{γ2}(c x2 + s x1)` and the margin
/// `k − A x1 − B x2` with `A = e^{γ1} c + e^{γ2} s`, `B = e^{γ2} c + e^{γ1} s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PayoffCoefficients {
    pub cosh: f64,
    pub sinh: f64,
    pub e1: f64,
    pub e2: f64,
    pub a: f64,
    pub b: f64,
}

impl PayoffCoefficients {
    pub fn new(params: &EntangleParams) -> Self {
        let (c, s) = (params.gamma12.cosh(), params.gamma12.sinh());
        let (e1, e2) = (params.gamma1.exp(), params.gamma2.exp());
        Self {
            cosh: c,
            sinh: s,
            e1,
            e2,
            a: e1 * c + e2 * s,
            b: e2 * c + e1 * s,
        }
    }
}

/// Measured quantities of the final state.
pub fn quantities(params: &EntangleParams, x: &StrategyProfile) -> QuantityPair {
    let p = PayoffCoefficients::new(params);
    QuantityPair {
        q1: p.e1 * (x.x1 * p.cosh + x.x2 * p.sinh),
        q2: p.e2 * (x.x2 * p.cosh + x.x1 * p.sinh),
    }
}

/// `k − A x1 − B x2`, the unclamped price minus cost.
pub fn margin(params: &EntangleParams, market: &MarketParams, x: &StrategyProfile) -> f64 {
    let p = PayoffCoefficients::new(params);
    market.k() - p.a * x.x1 - p.b * x.x2
}

pub fn quantum_payoffs(params: &EntangleParams, market: &MarketParams, x: &StrategyProfile) -> PayoffPair {
    let q = quantities(params, x);
    let m = margin(params, market, x);
    PayoffPair {
        u1: q.q1 * m,
        u2: q.q2 * m,
    }
}

/// Own-strategy derivatives `(∂u1/∂x1, ∂u2/∂x2)`.
pub fn payoff_gradient(params: &EntangleParams, market: &MarketParams, x: &StrategyProfile) -> [f64; 2] {
    let p = PayoffCoefficients::new(params);
    let q = quantities(params, x);
    let m = market.k() - p.a * x.x1 - p.b * x.x2;
    [p.e1 * p.cosh * m - p.a * q.q1, p.e2 * p.cosh * m - p.b * q.q2]
}

/// Which denominator to use for the closed-form equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NashFormula {
    /// `(e^{2γ1} + e^{2γ2}) sinh 2γ12 + e^{γ1+γ2}(2 cosh 2γ12 + 1)`, the
    /// solution of the first-order conditions.
    Corrected,
    /// `(e^{γ1} + e^{γ2}) sinh 2γ12 + e^{γ1+γ2}(2 cosh 2γ12 + 1)`. Agrees
    /// with the corrected form only when `γ1 = γ2`; kept to show that it is
    /// not an equilibrium otherwise.
    AsPrinted,
}

pub fn nash_closed_form(params: &EntangleParams, market: &MarketParams) -> StrategyProfile {
    nash_with_formula(params, market, NashFormula::Corrected)
}

pub fn nash_with_formula(params: &EntangleParams, market: &MarketParams, formula: NashFormula) -> StrategyProfile {
    let k = market.k();
    let (g1, g2, g12) = (params.gamma1, params.gamma2, params.gamma12);
    let c = g12.cosh();
    match formula {
        NashFormula::Corrected => {
            // divided through by e^{γ1+γ2} so large |γ_j| cannot overflow
            let den = 1.0 + 2.0 * (2.0 * g12).cosh() + 2.0 * params.dgamma().cosh() * (2.0 * g12).sinh();
            StrategyProfile {
                x1: k * c * (-g1).exp() / den,
                x2: k * c * (-g2).exp() / den,
            }
        }
        NashFormula::AsPrinted => {
            let den = (g1.exp() + g2.exp()) * (2.0 * g12).sinh() + (g1 + g2).exp() * (2.0 * (2.0 * g12).cosh() + 1.0);
            StrategyProfile {
                x1: k * g2.exp() * c / den,
                x2: k * g1.exp() * c / den,
            }
        }
    }
}

/// Equilibrium profits as functions of `(γ12, Δγ)` alone.
pub fn equilibrium_profits(gamma12: f64, dgamma: f64, k: f64) -> Result<PayoffPair> {
    ensure_finite("gamma12", gamma12)?;
    ensure_finite("dgamma", dgamma)?;
    ensure_finite("k", k)?;
    if gamma12 < 0.0 {
        return Err(Error::domain(format!("gamma12 must be >= 0, got {gamma12}")));
    }
    if k <= 0.0 {
        return Err(Error::domain(format!("k must be > 0, got {k}")));
    }
    let (c, s) = (gamma12.cosh(), gamma12.sinh());
    let up = c + dgamma.exp() * s;
    let down = c + (-dgamma).exp() * s;
    let den = 1.0 + 2.0 * (2.0 * gamma12).cosh() + 2.0 * dgamma.cosh() * (2.0 * gamma12).sinh();
    let den2 = den * den;
    let u1 = c * up * up * down / den2 * k * k;
    let u2 = c * down * down * up / den2 * k * k;
    if !(u1.is_finite() && u2.is_finite()) {
        return Err(Error::NonFinite("equilibrium profits"));
    }
    Ok(PayoffPair { u1, u2 })
}

/// `η = sinh 2γ12 · cosh Δγ`.
pub fn eta(gamma12: f64, dgamma: f64) -> f64 {
    (2.0 * gamma12).sinh() * dgamma.cosh()
}

/// Entropy in the η-form `ln(η/2) + ½√(η²+1) ln[(√(η²+1)+1)/(√(η²+1)−1)]`.
///
/// `√(η²+1) − 1` is evaluated as `η²/(√(η²+1)+1)`. Diverges as η → 0; use
/// [`eta_and_entropy`] for the regularized value.
pub fn entropy_eta_form(eta: f64) -> f64 {
    let r = eta.hypot(1.0);
    let r_minus_1 = eta * eta / (r + 1.0);
    (eta / 2.0).ln() + 0.5 * r * (2.0 / r_minus_1).ln_1p()
}

/// Entropy of the symmetric two-mode squeezed vacuum,
/// `cosh²γ ln cosh²γ − sinh²γ ln sinh²γ`.
pub fn two_mode_squeezed_entropy(gamma12: f64) -> f64 {
    let c2 = gamma12.cosh().powi(2);
    let s2 = gamma12.sinh().powi(2);
    let tail = if s2 > 0.0 { s2 * s2.ln() } else { 0.0 };
    c2 * c2.ln() - tail
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyReport {
    #[serde(serialize_with = "ser_sig")]
    pub eta: f64,
    #[serde(serialize_with = "ser_sig")]
    pub nu: f64,
    #[serde(serialize_with = "ser_sig")]
    pub entropy: f64,
}

/// Entanglement entropy (nats) of `J|vac⟩`.
pub fn eta_and_entropy(gamma12: f64, dgamma: f64) -> Result<EntropyReport> {
    ensure_finite("gamma12", gamma12)?;
    ensure_finite("dgamma", dgamma)?;
    if gamma12 < 0.0 {
        return Err(Error::domain(format!("gamma12 must be >= 0, got {gamma12}")));
    }
    let eta = eta(gamma12, dgamma);
    if !eta.is_finite() {
        return Err(Error::NonFinite("eta"));
    }
    Ok(entropy_report_for_eta(eta))
}

fn entropy_report_for_eta(eta: f64) -> EntropyReport {
    let nu = eta.hypot(1.0) / 2.0;
    let entropy = if eta < ETA_SMALL {
        vn_entropy_from_nu(nu).expect("nu >= 1/2 by construction")
    } else {
        entropy_eta_form(eta)
    };
    EntropyReport { eta, nu, entropy }
}

/// Relative difference of the position variances,
/// `(⟨ΔX1²⟩ − ⟨ΔX2²⟩)/(⟨ΔX1²⟩ + ⟨ΔX2²⟩) = −tanh Δγ / cosh 2γ12`.
pub fn asymmetry_closed_form(params: &EntangleParams) -> f64 {
    -params.dgamma().tanh() / (2.0 * params.gamma12).cosh()
}

/// Inverse of the entropy map at fixed Δγ: the `γ12 ≥ 0` whose state has
/// the requested entropy.
pub fn gamma12_for_entropy(entropy_target: f64, dgamma: f64) -> Result<f64> {
    ensure_finite("entropy target", entropy_target)?;
    ensure_finite("dgamma", dgamma)?;
    if entropy_target < 0.0 {
        return Err(Error::domain(format!(
            "entropy target must be >= 0, got {entropy_target}"
        )));
    }
    if entropy_target == 0.0 {
        return Ok(0.0);
    }
    let s = |eta: f64| entropy_report_for_eta(eta).entropy;
    let mut hi = 1.0;
    while s(hi) < entropy_target {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::NonFinite("entropy inversion bracket"));
        }
    }
    let mut lo = 0.0;
    // S is strictly increasing in η
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if s(mid) < entropy_target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let eta_target = 0.5 * (lo + hi);
    Ok(0.5 * (eta_target / dgamma.cosh()).asinh())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    ClosedForm,
    LinearSolve,
    Iteration,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residuals {
    /// Euclidean norm of the own-strategy gradient at the reported point.
    #[serde(serialize_with = "ser_sig")]
    pub foc_norm: f64,
    #[serde(serialize_with = "ser_sig")]
    pub max_deviation_gain: f64,
}

/// Everything known about one equilibrium. JSON key order follows field
/// order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquilibriumReport {
    #[serde(serialize_with = "ser_sig")]
    pub gamma1: f64,
    #[serde(serialize_with = "ser_sig")]
    pub gamma2: f64,
    #[serde(serialize_with = "ser_sig")]
    pub gamma12: f64,
    #[serde(serialize_with = "ser_sig")]
    pub dgamma: f64,
    #[serde(serialize_with = "ser_sig")]
    pub k: f64,
    pub x_star: StrategyProfile,
    pub q_star: QuantityPair,
    #[serde(serialize_with = "ser_sig")]
    pub price: f64,
    pub u_star: PayoffPair,
    #[serde(serialize_with = "ser_sig")]
    pub u_total: f64,
    #[serde(serialize_with = "ser_sig")]
    pub eta: f64,
    #[serde(serialize_with = "ser_sig")]
    pub entropy: f64,
    #[serde(serialize_with = "ser_sig")]
    pub asymmetry: f64,
    pub method: SolveMethod,
    pub residuals: Residuals,
}

impl EquilibriumReport {
    /// Evaluates every derived column at `x_star`.
    pub fn assemble(
        params: &EntangleParams,
        market: &MarketParams,
        x_star: StrategyProfile,
        method: SolveMethod,
        max_deviation_gain: f64,
    ) -> Result<Self> {
        let q_star = quantities(params, &x_star);
        let u_star = quantum_payoffs(params, market, &x_star);
        let price = clamped_price(market, q_star.total())?;
        let entropy = eta_and_entropy(params.gamma12, params.dgamma())?;
        let [g1, g2] = payoff_gradient(params, market, &x_star);
        let report = Self {
            gamma1: params.gamma1,
            gamma2: params.gamma2,
            gamma12: params.gamma12,
            dgamma: params.dgamma(),
            k: market.k(),
            x_star,
            q_star,
            price,
            u_star,
            u_total: u_star.total(),
            eta: entropy.eta,
            entropy: entropy.entropy,
            asymmetry: asymmetry_closed_form(params),
            method,
            residuals: Residuals {
                foc_norm: g1.hypot(g2),
                max_deviation_gain,
            },
        };
        if report.is_finite() {
            Ok(report)
        } else {
            Err(Error::NonFinite("equilibrium report"))
        }
    }

    pub fn is_finite(&self) -> bool {
        [
            self.x_star.x1,
            self.x_star.x2,
            self.q_star.q1,
            self.q_star.q2,
            self.price,
            self.u_star.u1,
            self.u_star.u2,
            self.eta,
            self.entropy,
            self.asymmetry,
            self.residuals.foc_norm,
            self.residuals.max_deviation_gain,
        ]
        .iter()
        .all(|v| v.is_finite())
    }
}
