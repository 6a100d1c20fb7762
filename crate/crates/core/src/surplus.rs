//! Surplus accounts between two consecutive production accounts.
//!
//! Quantity changes valued at base-period prices give the productivity
//! surplus. Price changes, weighted by next-period quantities, and the change
//! in result say who funded it and who received it. Every term is put on the
//! side its sign dictates, so the account balances as a literal equality:
//!
//! ```text
//! productivity + resources = uses
//! ```

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::ledger::{match_flows, MatchedFlow};
use crate::model::{FlowKind, PeriodAccount};
use crate::money::Money;

/// Who a surplus term is taken from or handed to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SurplusItem {
    /// Clients, through the selling price of a product.
    OutputPrice { flow_id: String },
    /// Providers of an input, through its unit cost.
    InputPrice { flow_id: String },
    /// Shareholders, the firm itself and the State, through the result.
    Result,
}

/// One side of the account. `amount` is always positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurplusEntry {
    pub item: SurplusItem,
    pub amount: Money,
}

/// Change in result before tax, split between the State and the rest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultSplit {
    pub before_tax: Money,
    pub tax: Money,
    pub after_tax: Money,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurplusReport {
    pub base_period: u32,
    pub next_period: u32,
    /// Productivity surplus; may be negative.
    pub productivity: Money,
    /// Inherited terms: output price rises, input cost falls, result decrease.
    pub resources: Vec<SurplusEntry>,
    /// Transferred terms: output price falls, input cost rises, result increase.
    pub uses: Vec<SurplusEntry>,
    pub result_change: ResultSplit,
    pub balance_ok: bool,
}

impl SurplusReport {
    pub fn total_resources(&self) -> Money {
        self.resources.iter().map(|e| &e.amount).sum()
    }

    pub fn total_uses(&self) -> Money {
        self.uses.iter().map(|e| &e.amount).sum()
    }

    /// Inherited surplus: every resource other than productivity.
    pub fn inherited(&self) -> Money {
        self.total_resources()
    }

    /// Global surplus `S + S'`, equal to the uses.
    pub fn global(&self) -> Money {
        &self.productivity + self.total_resources()
    }
}

pub(crate) fn productivity_of<'a>(flows: impl Iterator<Item = &'a MatchedFlow>) -> Money {
    let mut total = Money::zero();
    for flow in flows {
        let term = &flow.base_unit_value * flow.delta_quantity();
        match flow.kind {
            FlowKind::Product => total += term,
            FlowKind::Input => total -= term,
        }
    }
    total
}

/// `sum p_i dP_i - sum f_j dF_j`, over every flow.
pub fn productivity_surplus(base: &PeriodAccount, next: &PeriodAccount) -> Result<Money> {
    let flows = match_flows(base, next)?;
    Ok(productivity_of(flows.iter()))
}

pub fn surplus_accounts(base: &PeriodAccount, next: &PeriodAccount) -> Result<SurplusReport> {
    let flows = match_flows(base, next)?;
    let productivity = productivity_of(flows.iter());
    let mut resources = Vec::new();
    let mut uses = Vec::new();

    for flow in &flows {
        // price change weighted by next-period quantity
        let term = flow.delta_unit_value() * &flow.next_quantity;
        if term.is_zero() {
            continue;
        }
        let (item, gain_for_firm) = match flow.kind {
            FlowKind::Product => (
                SurplusItem::OutputPrice {
                    flow_id: flow.id.clone(),
                },
                term.clone(),
            ),
            FlowKind::Input => (
                SurplusItem::InputPrice {
                    flow_id: flow.id.clone(),
                },
                -term,
            ),
        };
        if gain_for_firm.is_positive() {
            resources.push(SurplusEntry {
                item,
                amount: gain_for_firm,
            });
        } else {
            uses.push(SurplusEntry {
                item,
                amount: -gain_for_firm,
            });
        }
    }

    let delta_result = &next.result_before_tax - &base.result_before_tax;
    if delta_result.is_positive() {
        uses.push(SurplusEntry {
            item: SurplusItem::Result,
            amount: delta_result.clone(),
        });
    } else if delta_result.is_negative() {
        resources.push(SurplusEntry {
            item: SurplusItem::Result,
            amount: -delta_result.clone(),
        });
    }
    let delta_tax = &next.tax - &base.tax;
    let result_change = ResultSplit {
        after_tax: &delta_result - &delta_tax,
        before_tax: delta_result,
        tax: delta_tax,
    };

    let mut report = SurplusReport {
        base_period: base.period,
        next_period: next.period,
        productivity,
        resources,
        uses,
        result_change,
        balance_ok: false,
    };
    let left = report.global();
    let right = report.total_uses();
    if left != right {
        return Err(Error::BalanceViolation {
            resources: Box::new(left),
            uses: Box::new(right),
        });
    }
    report.balance_ok = true;
    Ok(report)
}

/// Change in self-financing capacity (before tax) split into the
/// calculated-charge terms and the change in result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CafSurplusReport {
    /// `sum dF * f` over calculated charges.
    pub dap_quantity: Money,
    /// `sum df * F`.
    pub dap_price: Money,
    /// `sum dF * df`.
    pub dap_cross: Money,
    pub delta_result: Money,
    pub total: Money,
}

pub(crate) struct DapTerms {
    pub quantity: Money,
    pub price: Money,
    pub cross: Money,
}

/// Non-cash inputs count positively, non-cash products negatively.
pub(crate) fn dap_terms<'a>(flows: impl Iterator<Item = &'a MatchedFlow>) -> DapTerms {
    let mut terms = DapTerms {
        quantity: Money::zero(),
        price: Money::zero(),
        cross: Money::zero(),
    };
    for flow in flows.filter(|f| !f.cash_effective) {
        let dq = flow.delta_quantity();
        let dp = flow.delta_unit_value();
        let quantity = &dq * &flow.base_unit_value;
        let price = &dp * &flow.base_quantity;
        let cross = dq * dp;
        match flow.kind {
            FlowKind::Input => {
                terms.quantity += quantity;
                terms.price += price;
                terms.cross += cross;
            }
            FlowKind::Product => {
                terms.quantity -= quantity;
                terms.price -= price;
                terms.cross -= cross;
            }
        }
    }
    terms
}

pub fn caf_surplus(base: &PeriodAccount, next: &PeriodAccount) -> Result<CafSurplusReport> {
    let flows = match_flows(base, next)?;
    let terms = dap_terms(flows.iter());
    let delta_result = &next.result_before_tax - &base.result_before_tax;
    let total = &terms.quantity + &terms.price + &terms.cross + &delta_result;
    Ok(CafSurplusReport {
        dap_quantity: terms.quantity,
        dap_price: terms.price,
        dap_cross: terms.cross,
        delta_result,
        total,
    })
}
