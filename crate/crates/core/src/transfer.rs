//! Surplus accounting in cash terms.
//!
//! A flow `k` of period `n` is partly settled in cash within the period and
//! partly immobilized in its end-of-period stock (receivable or payable):
//! `t = stock / flow`, `T = 1 - t`. Weighting cash flows by `T` turns the
//! surplus accounts into a decomposition of the change in cash-settled
//! self-financing capacity.
//!
//! Every row of the table holds its signed contribution to that change, so
//! transferred rows are never positive, inherited rows never negative, and
//! `IV = I + II + III` without sign juggling.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::ledger::{match_flows, MatchedFlow, ValidatedLedger};
use crate::model::{FlowKind, PeriodAccount};
use crate::money::{Fraction, Money};
use crate::surplus::dap_terms;

/// `t` and `T` of one flow in one period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coefficient {
    pub immobilized: Fraction,
    pub settled: Fraction,
}

impl Coefficient {
    pub fn from_immobilized(t: Fraction) -> Self {
        Coefficient {
            settled: Money::one() - &t,
            immobilized: t,
        }
    }

    pub fn fully_settled() -> Self {
        Self::from_immobilized(Money::zero())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowCoefficients {
    pub flow_id: String,
    pub kind: FlowKind,
    pub cash_effective: bool,
    pub previous: Coefficient,
    pub current: Coefficient,
}

impl FlowCoefficients {
    /// `T_n - T_{n-1}`.
    pub fn delta_settled(&self) -> Fraction {
        &self.current.settled - &self.previous.settled
    }
}

/// Coefficients of every flow present in period `n - 1` or `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferCoefficients {
    pub period: u32,
    pub flows: Vec<FlowCoefficients>,
}

impl TransferCoefficients {
    /// Coefficients that treat every flow as settled within its period.
    pub fn lag_free(base: &PeriodAccount, next: &PeriodAccount) -> Result<Self> {
        let flows = match_flows(base, next)?
            .into_iter()
            .map(|f| FlowCoefficients {
                flow_id: f.id,
                kind: f.kind,
                cash_effective: f.cash_effective,
                previous: Coefficient::fully_settled(),
                current: Coefficient::fully_settled(),
            })
            .collect();
        Ok(TransferCoefficients {
            period: next.period,
            flows,
        })
    }

    pub fn get(&self, flow_id: &str) -> Option<&FlowCoefficients> {
        self.flows.iter().find(|f| f.flow_id == flow_id)
    }

    fn settled(&self) -> BTreeMap<&str, (&Fraction, &Fraction)> {
        self.flows
            .iter()
            .map(|f| (f.flow_id.as_str(), (&f.previous.settled, &f.current.settled)))
            .collect()
    }
}

pub fn transfer_coefficients(ledger: &ValidatedLedger, period: u32) -> Result<TransferCoefficients> {
    if period <= ledger.first_period() {
        return Err(Error::InsufficientPeriods {
            needed: 2,
            available: ledger.periods().len(),
        });
    }
    let flows = ledger.matched(period - 1)?;
    let mut out = Vec::with_capacity(flows.len());
    for flow in flows {
        let previous = checked_share(ledger, period - 1, &flow.id)?;
        let current = checked_share(ledger, period, &flow.id)?;
        out.push(FlowCoefficients {
            flow_id: flow.id,
            kind: flow.kind,
            cash_effective: flow.cash_effective,
            previous: Coefficient::from_immobilized(previous),
            current: Coefficient::from_immobilized(current),
        });
    }
    Ok(TransferCoefficients { period, flows: out })
}

fn checked_share(ledger: &ValidatedLedger, period: u32, flow_id: &str) -> Result<Fraction> {
    let t = ledger.immobilized_share(period, flow_id);
    if t.is_negative() || t > Money::one() {
        return Err(Error::CoefficientOutOfRange {
            period,
            flow_id: flow_id.into(),
            coefficient: t,
        });
    }
    Ok(t)
}

/// Rows 1, 2 and I.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ProductivityCash {
    /// `sum dP * p * T` over cash products.
    pub products: Money,
    /// `sum dF * f * T` over cash inputs.
    pub inputs: Money,
}

impl ProductivityCash {
    pub fn total(&self) -> Money {
        &self.products - &self.inputs
    }
}

/// Rows II or III, as signed contributions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TransferRows {
    /// Output price changes (a / e).
    pub clients_price: Money,
    /// Customer credit changes (b / f).
    pub clients_terms: Money,
    /// Input cost changes (c / g).
    pub suppliers_price: Money,
    /// Supplier credit changes (d / h).
    pub suppliers_terms: Money,
    /// Tax change (5 / 8).
    pub state: Money,
}

impl TransferRows {
    pub fn clients(&self) -> Money {
        &self.clients_price + &self.clients_terms
    }

    pub fn suppliers(&self) -> Money {
        &self.suppliers_price + &self.suppliers_terms
    }

    pub fn total(&self) -> Money {
        self.clients() + self.suppliers() + &self.state
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TransferredAndInherited {
    pub transferred: TransferRows,
    pub inherited: TransferRows,
}

/// Row IV, by both routes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CafCashVariation {
    pub productivity: ProductivityCash,
    pub transferred: TransferRows,
    pub inherited: TransferRows,
    pub dap_quantity: Money,
    pub dap_price: Money,
    pub dap_cross: Money,
    /// Change in cash-settled result after tax (row 12).
    pub result_cash: Money,
    pub by_rows: Money,
    pub by_components: Money,
}

fn push_signed(negative: &mut Money, positive: &mut Money, term: Money) {
    if term.is_negative() {
        *negative += term;
    } else {
        *positive += term;
    }
}

fn weights<'a>(
    settled: &BTreeMap<&str, (&'a Fraction, &'a Fraction)>,
    flow: &MatchedFlow,
    one: &'a Fraction,
) -> (&'a Fraction, &'a Fraction) {
    settled.get(flow.id.as_str()).copied().unwrap_or((one, one))
}

fn decompose(
    base: &PeriodAccount,
    next: &PeriodAccount,
    coeffs: &TransferCoefficients,
) -> Result<(ProductivityCash, TransferredAndInherited)> {
    let flows = match_flows(base, next)?;
    let settled = coeffs.settled();
    let one = Money::one();
    let mut productivity = ProductivityCash::default();
    let mut rows = TransferredAndInherited::default();
    let (ii, iii) = (&mut rows.transferred, &mut rows.inherited);

    for flow in flows.iter().filter(|f| f.cash_effective) {
        let (t0, t1) = weights(&settled, flow, &one);
        let delta_t = t1 - t0;
        let quantity = flow.delta_quantity() * &flow.base_unit_value * t0;
        let price = flow.delta_unit_value() * &flow.next_quantity * t0;
        let timing = flow.next_value() * delta_t;
        match flow.kind {
            FlowKind::Product => {
                productivity.products += quantity;
                push_signed(&mut ii.clients_price, &mut iii.clients_price, price);
                push_signed(&mut ii.clients_terms, &mut iii.clients_terms, timing);
            }
            FlowKind::Input => {
                productivity.inputs += quantity;
                push_signed(&mut ii.suppliers_price, &mut iii.suppliers_price, -price);
                push_signed(&mut ii.suppliers_terms, &mut iii.suppliers_terms, -timing);
            }
        }
    }
    let tax = &base.tax - &next.tax;
    push_signed(&mut ii.state, &mut iii.state, tax);
    Ok((productivity, rows))
}

/// Row I: quantity changes valued at base prices, weighted by base `T`.
pub fn productivity_cash_flow(
    base: &PeriodAccount,
    next: &PeriodAccount,
    coeffs: &TransferCoefficients,
) -> Result<ProductivityCash> {
    decompose(base, next, coeffs).map(|(p, _)| p)
}

/// Rows II and III.
pub fn transferred_and_inherited_cash(
    base: &PeriodAccount,
    next: &PeriodAccount,
    coeffs: &TransferCoefficients,
) -> Result<TransferredAndInherited> {
    decompose(base, next, coeffs).map(|(_, rows)| rows)
}

/// Result after tax with every cash flow weighted by its settled share;
/// calculated charges and non-cash products enter at full value.
fn cash_result(account: &PeriodAccount, settled: impl Fn(&str) -> Fraction) -> Money {
    let mut total = -account.tax.clone();
    for line in &account.lines {
        let value = if line.cash_effective {
            line.value() * settled(&line.id)
        } else {
            line.value()
        };
        match line.kind {
            FlowKind::Product => total += value,
            FlowKind::Input => total -= value,
        }
    }
    total
}

fn cash_result_change(base: &PeriodAccount, next: &PeriodAccount, coeffs: &TransferCoefficients) -> Money {
    let settled = coeffs.settled();
    let previous = |id: &str| settled.get(id).map_or_else(Money::one, |(t0, _)| (*t0).clone());
    let current = |id: &str| settled.get(id).map_or_else(Money::one, |(_, t1)| (*t1).clone());
    cash_result(next, current) - cash_result(base, previous)
}

/// Row IV, computed as `I + II + III` and as `9 + 10 + 11 + 12`.
pub fn caf_cash_variation(
    base: &PeriodAccount,
    next: &PeriodAccount,
    coeffs: &TransferCoefficients,
) -> Result<CafCashVariation> {
    let (productivity, rows) = decompose(base, next, coeffs)?;
    let by_rows = productivity.total() + rows.transferred.total() + rows.inherited.total();

    let flows = match_flows(base, next)?;
    let dap = dap_terms(flows.iter());
    let result_cash = cash_result_change(base, next, coeffs);
    let by_components = &dap.quantity + &dap.price + &dap.cross + &result_cash;
    if by_rows != by_components {
        return Err(Error::DecompositionMismatch {
            by_rows: Box::new(by_rows),
            by_components: Box::new(by_components),
        });
    }
    Ok(CafCashVariation {
        productivity,
        transferred: rows.transferred,
        inherited: rows.inherited,
        dap_quantity: dap.quantity,
        dap_price: dap.price,
        dap_cross: dap.cross,
        result_cash,
        by_rows,
        by_components,
    })
}

/// Row V: change in accounting result after tax less change in its
/// cash-settled part. Positive when the period invests in working capital.
pub fn deferred_net_cash_flow(
    base: &PeriodAccount,
    next: &PeriodAccount,
    coeffs: &TransferCoefficients,
) -> Result<Money> {
    match_flows(base, next)?;
    let accounting = next.result_after_tax() - base.result_after_tax();
    Ok(accounting - cash_result_change(base, next, coeffs))
}

/// One line of the rendered table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub code: &'static str,
    pub label: &'static str,
    pub value: Money,
}

/// Rows I to VI for period `n`: rows I-IV describe the move from `n` to
/// `n + 1`, row V the move from `n - 1` to `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CashDecompositionTable {
    pub period: u32,
    pub variation: CafCashVariation,
    pub deferred: Money,
    pub operating_surplus: Money,
}

impl CashDecompositionTable {
    pub fn productivity(&self) -> Money {
        self.variation.productivity.total()
    }

    pub fn transferred(&self) -> Money {
        self.variation.transferred.total()
    }

    pub fn inherited(&self) -> Money {
        self.variation.inherited.total()
    }

    pub fn rows(&self) -> Vec<TableRow> {
        let v = &self.variation;
        let (ii, iii) = (&v.transferred, &v.inherited);
        let row = |code, label, value: &Money| TableRow {
            code,
            label,
            value: value.clone(),
        };
        alloc::vec![
            row("1", "Output quantity changes", &v.productivity.products),
            row("2", "Input quantity changes", &v.productivity.inputs),
            row("I", "Productivity cash flow (1 - 2)", &v.productivity.total()),
            row("3a", "Output price falls", &ii.clients_price),
            row("3b", "Longer customer credit", &ii.clients_terms),
            row("3", "Transferred to clients", &ii.clients()),
            row("4c", "Input cost rises", &ii.suppliers_price),
            row("4d", "Shorter supplier credit", &ii.suppliers_terms),
            row("4", "Transferred to suppliers", &ii.suppliers()),
            row("5", "Tax increase", &ii.state),
            row("II", "Transferred cash flow (3 + 4 + 5)", &ii.total()),
            row("6e", "Output price rises", &iii.clients_price),
            row("6f", "Shorter customer credit", &iii.clients_terms),
            row("6", "Inherited from clients", &iii.clients()),
            row("7g", "Input cost falls", &iii.suppliers_price),
            row("7h", "Longer supplier credit", &iii.suppliers_terms),
            row("7", "Inherited from suppliers", &iii.suppliers()),
            row("8", "Tax decrease", &iii.state),
            row("III", "Inherited cash flow (6 + 7 + 8)", &iii.total()),
            row("9", "Calculated charges (quantities)", &v.dap_quantity),
            row("10", "Calculated charges (prices)", &v.dap_price),
            row("11", "Calculated charges (cross)", &v.dap_cross),
            row("12", "Cash-settled result after tax", &v.result_cash),
            row("IV", "Change in cash-settled CAF (I + II + III)", &v.by_rows),
            row("V", "Deferred net cash flow", &self.deferred),
            row("VI", "Operating cash surplus (IV(n+1) + V(n))", &self.operating_surplus),
        ]
    }
}

pub fn operating_cash_surplus(ledger: &ValidatedLedger, period: u32) -> Result<CashDecompositionTable> {
    let available = ledger.periods().len();
    if period <= ledger.first_period() || period >= ledger.last_period() {
        return Err(Error::InsufficientPeriods { needed: 3, available });
    }
    let previous = ledger.account(period - 1)?;
    let current = ledger.account(period)?;
    let next = ledger.account(period + 1)?;

    let ahead = transfer_coefficients(ledger, period + 1)?;
    let behind = transfer_coefficients(ledger, period)?;
    let variation = caf_cash_variation(current, next, &ahead)?;
    let deferred = deferred_net_cash_flow(previous, current, &behind)?;
    let operating_surplus = &variation.by_rows + &deferred;
    Ok(CashDecompositionTable {
        period,
        variation,
        deferred,
        operating_surplus,
    })
}
