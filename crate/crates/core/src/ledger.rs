//! Multi-period ledger validation and flow matching.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{FlowKind, FlowLine, FlowStock, PeriodAccount};
use crate::money::{Fraction, Money, Quantity};

/// One flow seen in two consecutive periods.
///
/// A flow present in only one period gets quantity zero on the other side and
/// keeps the unit value of the side where it exists, so entering and exiting
/// flows show up as pure quantity changes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchedFlow {
    pub id: String,
    pub kind: FlowKind,
    pub cash_effective: bool,
    pub base_quantity: Quantity,
    pub base_unit_value: Money,
    pub next_quantity: Quantity,
    pub next_unit_value: Money,
}

impl MatchedFlow {
    pub fn delta_quantity(&self) -> Quantity {
        &self.next_quantity - &self.base_quantity
    }

    pub fn delta_unit_value(&self) -> Money {
        &self.next_unit_value - &self.base_unit_value
    }

    pub fn base_value(&self) -> Money {
        &self.base_quantity * &self.base_unit_value
    }

    pub fn next_value(&self) -> Money {
        &self.next_quantity * &self.next_unit_value
    }
}

/// Pairs the lines of two accounts by id, in order of first appearance.
pub fn match_flows(base: &PeriodAccount, next: &PeriodAccount) -> Result<Vec<MatchedFlow>> {
    check_unique_ids(base)?;
    check_unique_ids(next)?;
    let mut matched = Vec::with_capacity(base.lines.len().max(next.lines.len()));
    for line in &base.lines {
        match next.line(&line.id) {
            Some(other) => {
                if other.kind != line.kind || other.cash_effective != line.cash_effective {
                    return Err(Error::UnmatchedFlow {
                        period: next.period,
                        flow_id: line.id.clone(),
                    });
                }
                matched.push(MatchedFlow {
                    id: line.id.clone(),
                    kind: line.kind,
                    cash_effective: line.cash_effective,
                    base_quantity: line.quantity.clone(),
                    base_unit_value: line.unit_value.clone(),
                    next_quantity: other.quantity.clone(),
                    next_unit_value: other.unit_value.clone(),
                });
            }
            None => matched.push(one_sided(line, true)),
        }
    }
    for line in next.lines.iter().filter(|l| base.line(&l.id).is_none()) {
        matched.push(one_sided(line, false));
    }
    Ok(matched)
}

fn one_sided(line: &FlowLine, in_base: bool) -> MatchedFlow {
    let (base_quantity, next_quantity) = if in_base {
        (line.quantity.clone(), Money::zero())
    } else {
        (Money::zero(), line.quantity.clone())
    };
    MatchedFlow {
        id: line.id.clone(),
        kind: line.kind,
        cash_effective: line.cash_effective,
        base_quantity,
        base_unit_value: line.unit_value.clone(),
        next_quantity,
        next_unit_value: line.unit_value.clone(),
    }
}

fn check_unique_ids(account: &PeriodAccount) -> Result<()> {
    let mut seen = BTreeSet::new();
    for line in &account.lines {
        if !seen.insert(line.id.as_str()) {
            return Err(Error::DuplicateFlow {
                period: account.period,
                flow_id: line.id.clone(),
            });
        }
    }
    Ok(())
}

/// A ledger whose accounts balance, whose periods are consecutive and whose
/// stocks all attach to cash flows with a coefficient in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidatedLedger {
    periods: Vec<PeriodAccount>,
    stocks: BTreeMap<(u32, String), Money>,
}

pub fn validate_ledger(accounts: &[PeriodAccount], stocks: &[FlowStock]) -> Result<ValidatedLedger> {
    if accounts.len() < 2 {
        return Err(Error::InsufficientPeriods {
            needed: 2,
            available: accounts.len(),
        });
    }
    let mut periods = accounts.to_vec();
    periods.sort_by_key(|a| a.period);
    for pair in periods.windows(2) {
        if pair[1].period != pair[0].period + 1 {
            return Err(Error::NonConsecutivePeriods {
                previous: pair[0].period,
                found: pair[1].period,
            });
        }
    }
    for account in &periods {
        check_unique_ids(account)?;
        if let Some(line) = account.lines.iter().find(|l| l.quantity.is_negative()) {
            return Err(Error::NegativeQuantity {
                period: account.period,
                flow_id: line.id.clone(),
            });
        }
        account.check_identity()?;
    }
    for pair in periods.windows(2) {
        match_flows(&pair[0], &pair[1])?;
    }

    let mut stock_map = BTreeMap::new();
    for stock in stocks {
        let account = periods
            .iter()
            .find(|a| a.period == stock.period)
            .ok_or(Error::UnknownPeriod(stock.period))?;
        let line = account.line(&stock.flow_id).ok_or_else(|| Error::UnmatchedFlow {
            period: stock.period,
            flow_id: stock.flow_id.clone(),
        })?;
        if !line.cash_effective && !stock.stock_end.is_zero() {
            return Err(Error::StockOnNonCashFlow {
                period: stock.period,
                flow_id: stock.flow_id.clone(),
            });
        }
        let out_of_range = |coefficient| Error::CoefficientOutOfRange {
            period: stock.period,
            flow_id: stock.flow_id.clone(),
            coefficient,
        };
        let value = line.value();
        if stock.stock_end.is_negative() || stock.stock_end > value {
            // an empty flow cannot carry a stock; report the raw stock then
            let coefficient = stock.stock_end.checked_div(&value).unwrap_or_else(|| stock.stock_end.clone());
            return Err(out_of_range(coefficient));
        }
        let key = (stock.period, stock.flow_id.clone());
        if stock_map.insert(key, stock.stock_end.clone()).is_some() {
            return Err(Error::DuplicateFlow {
                period: stock.period,
                flow_id: stock.flow_id.clone(),
            });
        }
    }
    Ok(ValidatedLedger {
        periods,
        stocks: stock_map,
    })
}

impl ValidatedLedger {
    pub fn periods(&self) -> &[PeriodAccount] {
        &self.periods
    }

    pub fn first_period(&self) -> u32 {
        self.periods[0].period
    }

    pub fn last_period(&self) -> u32 {
        self.periods[self.periods.len() - 1].period
    }

    pub fn account(&self, period: u32) -> Result<&PeriodAccount> {
        self.periods
            .iter()
            .find(|a| a.period == period)
            .ok_or(Error::UnknownPeriod(period))
    }

    /// Declared end-of-period stock for a flow, zero when none was declared.
    pub fn stock(&self, period: u32, flow_id: &str) -> Money {
        self.stocks
            .get(&(period, flow_id.to_string()))
            .cloned()
            .unwrap_or_else(Money::zero)
    }

    pub fn stocks(&self) -> Vec<FlowStock> {
        self.stocks
            .iter()
            .map(|((period, flow_id), stock_end)| FlowStock {
                period: *period,
                flow_id: flow_id.clone(),
                stock_end: stock_end.clone(),
            })
            .collect()
    }

    /// Immobilized share `stock / flow` of a flow at the end of `period`.
    /// Zero for flows that are absent, empty or without a declared stock.
    pub fn immobilized_share(&self, period: u32, flow_id: &str) -> Fraction {
        let Ok(account) = self.account(period) else {
            return Money::zero();
        };
        let Some(line) = account.line(flow_id) else {
            return Money::zero();
        };
        self.stock(period, flow_id)
            .checked_div(&line.value())
            .unwrap_or_else(Money::zero)
    }

    /// Working-capital requirement at period end: receivables on cash
    /// products less payables on cash inputs.
    pub fn working_capital(&self, period: u32) -> Result<Money> {
        let account = self.account(period)?;
        let mut total = Money::zero();
        for line in account.lines.iter().filter(|l| l.cash_effective) {
            let stock = self.stock(period, &line.id);
            match line.kind {
                FlowKind::Product => total += stock,
                FlowKind::Input => total -= stock,
            }
        }
        Ok(total)
    }

    /// Flows of `base` and `base + 1`, matched by id.
    pub fn matched(&self, base: u32) -> Result<Vec<MatchedFlow>> {
        match_flows(self.account(base)?, self.account(base + 1)?)
    }
}
