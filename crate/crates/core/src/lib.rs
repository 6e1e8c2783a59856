//! Asymmetric continuous-variable quantization of the Cournot duopoly.
//!
//! Two firms act on the quadratures of two squeezed, entangled field modes.
//! The crate provides the classical market model, a two-mode Gaussian-state
//! engine, the closed-form quantum game, an independent best-response solver,
//! a deterministic parameter-sweep engine and the `qcournot` command line.

// `!(x <= t)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod fmt;
pub mod gaussian;
pub mod model;
pub mod quantum_game;
pub mod solver;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
pub use gaussian::{GaussianTwoModeState, Mode, SymplecticTransform};
pub use model::{MarketParams, PayoffPair, QuantityPair};
pub use quantum_game::{EntangleParams, EntropyReport, EquilibriumReport, StrategyProfile};
pub use solver::Player;

/// Version string embedded in CSV metadata and reports.
pub const TOOL_VERSION: &str = concat!("qcournot ", env!("CARGO_PKG_VERSION"));
