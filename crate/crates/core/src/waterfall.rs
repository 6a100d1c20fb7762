//! Free-cash-flow waterfall and the financing-table identity
//! `dFR - dBFR = dTreasury`.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::ledger::ValidatedLedger;
use crate::money::Money;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WaterfallInput {
    pub period: u32,
    pub caf_before_interest: Money,
    pub delta_bfr: Money,
    pub net_investment: Money,
    pub delta_debt: Money,
    /// Treasury change observed in the balance sheet, checked when present.
    pub observed_delta_treasury: Option<Money>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WaterfallReport {
    pub period: u32,
    pub caf_before_interest: Money,
    pub delta_bfr: Money,
    pub operating_cash: Money,
    pub net_investment: Money,
    pub free_cash: Money,
    pub delta_debt: Money,
    pub free_cash_after_financing: Money,
    /// Change in long-term funds net of fixed assets.
    pub delta_fr: Money,
    /// `delta_fr - delta_bfr`.
    pub delta_treasury: Money,
}

/// Period-to-period change of every waterfall line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WaterfallVariation {
    pub from: u32,
    pub to: u32,
    pub caf_before_interest: Money,
    pub delta_bfr: Money,
    pub operating_cash: Money,
    pub net_investment: Money,
    pub free_cash: Money,
    pub delta_debt: Money,
    pub free_cash_after_financing: Money,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Waterfall {
    pub reports: Vec<WaterfallReport>,
    pub variations: Vec<WaterfallVariation>,
}

impl Waterfall {
    pub fn report(&self, period: u32) -> Option<&WaterfallReport> {
        self.reports.iter().find(|r| r.period == period)
    }

    /// Variation from `period` to `period + 1`.
    pub fn variation(&self, period: u32) -> Option<&WaterfallVariation> {
        self.variations.iter().find(|v| v.from == period)
    }
}

pub fn waterfall_report(input: &WaterfallInput) -> Result<WaterfallReport> {
    let operating_cash = &input.caf_before_interest - &input.delta_bfr;
    let free_cash = &operating_cash - &input.net_investment;
    let free_cash_after_financing = &free_cash + &input.delta_debt;
    let delta_fr = &input.caf_before_interest - &input.net_investment + &input.delta_debt;
    let delta_treasury = &delta_fr - &input.delta_bfr;
    if let Some(observed) = &input.observed_delta_treasury {
        if observed != &delta_treasury {
            return Err(Error::ReconciliationFailure {
                expected: Box::new(delta_treasury),
                found: Box::new(observed.clone()),
            });
        }
    }
    Ok(WaterfallReport {
        period: input.period,
        caf_before_interest: input.caf_before_interest.clone(),
        delta_bfr: input.delta_bfr.clone(),
        operating_cash,
        net_investment: input.net_investment.clone(),
        free_cash,
        delta_debt: input.delta_debt.clone(),
        free_cash_after_financing,
        delta_fr,
        delta_treasury,
    })
}

/// Waterfall of each period, in period order, and the variation between
/// consecutive periods.
pub fn fcf_waterfall(inputs: &[WaterfallInput]) -> Result<Waterfall> {
    let mut sorted: Vec<&WaterfallInput> = inputs.iter().collect();
    sorted.sort_by_key(|i| i.period);
    for pair in sorted.windows(2) {
        if pair[1].period != pair[0].period + 1 {
            return Err(Error::NonConsecutivePeriods {
                previous: pair[0].period,
                found: pair[1].period,
            });
        }
    }
    let reports = sorted
        .into_iter()
        .map(waterfall_report)
        .collect::<Result<Vec<_>>>()?;
    let variations = reports
        .windows(2)
        .map(|w| {
            let (a, b) = (&w[0], &w[1]);
            WaterfallVariation {
                from: a.period,
                to: b.period,
                caf_before_interest: &b.caf_before_interest - &a.caf_before_interest,
                delta_bfr: &b.delta_bfr - &a.delta_bfr,
                operating_cash: &b.operating_cash - &a.operating_cash,
                net_investment: &b.net_investment - &a.net_investment,
                free_cash: &b.free_cash - &a.free_cash,
                delta_debt: &b.delta_debt - &a.delta_debt,
                free_cash_after_financing: &b.free_cash_after_financing - &a.free_cash_after_financing,
            }
        })
        .collect();
    Ok(Waterfall { reports, variations })
}

/// Investment and financing flows of a period, which the production
/// accounts do not carry.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FinancingFlows {
    pub period: u32,
    pub net_investment: Money,
    pub delta_debt: Money,
    pub observed_delta_treasury: Option<Money>,
}

/// Waterfall inputs for every period of the ledger but the first: CAF after
/// tax from the accounts, working-capital change from the declared stocks.
/// Periods without financing flows get zero investment and debt change.
pub fn waterfall_inputs(ledger: &ValidatedLedger, financing: &[FinancingFlows]) -> Result<Vec<WaterfallInput>> {
    if let Some(f) = financing
        .iter()
        .find(|f| f.period < ledger.first_period() || f.period > ledger.last_period())
    {
        return Err(Error::UnknownPeriod(f.period));
    }
    let mut inputs = Vec::new();
    for period in ledger.first_period() + 1..=ledger.last_period() {
        let delta_bfr = ledger.working_capital(period)? - ledger.working_capital(period - 1)?;
        let flows = financing.iter().find(|f| f.period == period);
        inputs.push(WaterfallInput {
            period,
            caf_before_interest: ledger.account(period)?.caf(),
            delta_bfr,
            net_investment: flows.map_or_else(Money::zero, |f| f.net_investment.clone()),
            delta_debt: flows.map_or_else(Money::zero, |f| f.delta_debt.clone()),
            observed_delta_treasury: flows.and_then(|f| f.observed_delta_treasury.clone()),
        });
    }
    Ok(inputs)
}
