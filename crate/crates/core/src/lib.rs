//! Exact-arithmetic engines for cash-based break-even and operating cash
//! surplus analysis.
//!
//! - [`breakeven`]: liquidity and solvency thresholds, with an event-level
//!   cash replay and a seasonal monthly series as independent checks.
//! - [`leverage`]: elasticity of virtual treasury to volume and margin.
//! - [`surplus`]: productivity and inherited surplus between two periods.
//! - [`transfer`]: the same accounts in cash terms, rows I to VI.
//! - [`waterfall`]: free-cash-flow waterfall and financing identity.
//!
//! All amounts are exact rationals; rounding happens only when rendering.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod breakeven;
pub mod error;
pub mod ledger;
pub mod leverage;
pub mod model;
pub mod money;
pub mod surplus;
pub mod transfer;
pub mod waterfall;

pub use error::{Error, Result};
pub use ledger::{match_flows, validate_ledger, MatchedFlow, ValidatedLedger};
pub use model::{AnticipationCase, CashLagProfile, CostStructure, FlowKind, FlowLine, FlowStock, PeriodAccount};
pub use money::{Fraction, Money, ParseMoneyError, Quantity};
