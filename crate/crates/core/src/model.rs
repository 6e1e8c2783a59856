//! Classical Cournot duopoly with linear inverse demand.

use serde::Serialize;

use crate::error::{ensure_finite, Error, Result};
use crate::fmt::ser_sig;

/// Demand intercept `a`, unit cost `c` and margin `k = a - c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarketParams {
    a: f64,
    c: f64,
    k: f64,
}

impl MarketParams {
    pub fn new(a: f64, c: f64) -> Result<Self> {
        ensure_finite("a", a)?;
        ensure_finite("c", c)?;
        if a <= 0.0 {
            return Err(Error::domain(format!("demand intercept a must be > 0, got {a}")));
        }
        if c < 0.0 {
            return Err(Error::domain(format!("unit cost c must be >= 0, got {c}")));
        }
        let k = a - c;
        if k <= 0.0 {
            return Err(Error::domain(format!("margin k = a - c must be > 0, got {k}")));
        }
        Ok(Self { a, c, k })
    }

    /// Zero-cost market with margin `k` (so `a = k`).
    pub fn from_margin(k: f64) -> Result<Self> {
        ensure_finite("k", k)?;
        if k <= 0.0 {
            return Err(Error::domain(format!("k must be > 0, got {k}")));
        }
        Self::new(k, 0.0)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn k(&self) -> f64 {
        self.k
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantityPair {
    #[serde(serialize_with = "ser_sig")]
    pub q1: f64,
    #[serde(serialize_with = "ser_sig")]
    pub q2: f64,
}

impl QuantityPair {
    pub fn new(q1: f64, q2: f64) -> Result<Self> {
        for (name, q) in [("q1", q1), ("q2", q2)] {
            ensure_finite(name, q)?;
            if q < 0.0 {
                return Err(Error::domain(format!("{name} must be >= 0, got {q}")));
            }
        }
        Ok(Self { q1, q2 })
    }

    pub fn total(&self) -> f64 {
        self.q1 + self.q2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PayoffPair {
    #[serde(serialize_with = "ser_sig")]
    pub u1: f64,
    #[serde(serialize_with = "ser_sig")]
    pub u2: f64,
}

impl PayoffPair {
    pub fn total(&self) -> f64 {
        self.u1 + self.u2
    }

    pub fn swapped(&self) -> Self {
        Self {
            u1: self.u2,
            u2: self.u1,
        }
    }
}

/// Market price `a - Q`, clamped to zero once `Q >= a`.
pub fn clamped_price(params: &MarketParams, total_quantity: f64) -> Result<f64> {
    // quantities are computed, so a non-finite one is a numeric failure
    if !total_quantity.is_finite() {
        return Err(Error::NonFinite("total quantity"));
    }
    if total_quantity < 0.0 {
        return Err(Error::domain(format!(
            "total quantity must be >= 0, got {total_quantity}"
        )));
    }
    Ok(if total_quantity < params.a {
        params.a - total_quantity
    } else {
        0.0
    })
}

/// Profits `q_j (p - c)`. Past the clamp the price is zero and each firm
/// still pays its unit cost.
pub fn classical_payoffs(params: &MarketParams, q: &QuantityPair) -> Result<PayoffPair> {
    let q = QuantityPair::new(q.q1, q.q2)?;
    let margin = clamped_price(params, q.total())? - params.c;
    Ok(PayoffPair {
        u1: q.q1 * margin,
        u2: q.q2 * margin,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassicalBenchmarks {
    pub nash_q: QuantityPair,
    pub nash_u: PayoffPair,
    pub coop_q: QuantityPair,
    pub coop_u: PayoffPair,
    #[serde(serialize_with = "ser_sig")]
    pub max_total_profit: f64,
}

/// Classical Nash point, symmetric cooperative optimum and the monopoly
/// total profit.
pub fn classical_benchmarks(params: &MarketParams) -> ClassicalBenchmarks {
    let k = params.k;
    ClassicalBenchmarks {
        nash_q: QuantityPair {
            q1: k / 3.0,
            q2: k / 3.0,
        },
        nash_u: PayoffPair {
            u1: k * k / 9.0,
            u2: k * k / 9.0,
        },
        coop_q: QuantityPair {
            q1: k / 4.0,
            q2: k / 4.0,
        },
        coop_u: PayoffPair {
            u1: k * k / 8.0,
            u2: k * k / 8.0,
        },
        max_total_profit: k * k / 4.0,
    }
}
