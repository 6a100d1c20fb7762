//! Liquidity and solvency thresholds.
//!
//! The liquidity threshold is the volume at which cash fixed charges are
//! covered by margin, ignoring when anything is paid. The solvency threshold
//! is the volume at which cumulative cash actually turns non-negative and
//! stays there, once the timing of each flow is taken into account.
//!
//! Closed forms assume steady sales at `monthly_sales` units per month from
//! the start of the cycle. Seasonal activity goes through
//! [`seasonal_solvency`], and [`simulate_cash_days`] replays every flow event
//! by event as an independent check of both.

mod seasonal;
mod simulate;

pub use seasonal::{seasonal_solvency, MonthlyCash, SeasonalSolvency};
pub use simulate::{simulate_cash_days, CashCrossing, CashSimulation, DailyCash, SalesSchedule};

use crate::error::{Error, Result};
use crate::model::{CashLagProfile, CostStructure};
use crate::money::{Money, Quantity};

/// Which expression produced the solvency threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BindingFormula {
    /// `(CFD - MCFD + CVA - CVD + ED) / MUSCV`.
    Standard,
    /// Supplier payments only start after the crossing: the threshold is
    /// `(upfront cash charges + ED) / p`.
    AnticipatedCap,
    /// Every cash charge of the cycle is already paid when the crossing
    /// happens: the threshold is `(total cash charges + ED) / p`.
    TotalChargesCap,
}

/// Amounts entering the solvency threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdComponents {
    /// CFD, cash fixed charges.
    pub fixed_cash: Money,
    /// MCFD actually deducted (zero when the modulation does not take effect).
    pub modulated_fixed: Money,
    /// CVA, variable costs paid before the cycle.
    pub anticipated_variable: Money,
    /// CVD, variable costs deferred by supplier credit.
    pub deferred_variable: Money,
    /// ED, receipts deferred by customer credit.
    pub deferred_receipts: Money,
    /// MUSCV, the unit margin on the variable costs actually disbursed.
    pub unit_margin: Money,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdReport {
    pub liquidity_threshold: Quantity,
    pub solvency_threshold: Quantity,
    pub binding_formula: BindingFormula,
    pub components: ThresholdComponents,
    /// Threshold computed as if no fixed charge were modulated.
    pub pre_modulation_threshold: Quantity,
    pub modulation_applied: bool,
    /// Months from the cycle start to the crossing, when sales are non-zero.
    pub crossing_month: Option<Money>,
}

/// Cash fixed charges over unit margin.
pub fn liquidity_threshold(cs: &CostStructure) -> Result<Quantity> {
    let margin = cs.unit_margin();
    if !margin.is_positive() {
        return Err(Error::NonPositiveMargin { margin });
    }
    Ok(cs.fixed_cash() / &margin)
}

/// CVD: unit variable cost x supplier credit (months) x monthly sales.
pub fn supplier_credit_offset(profile: &CashLagProfile, cs: &CostStructure) -> Money {
    cs.unit_variable_cost() * &profile.supplier_credit_months * &profile.monthly_sales
}

/// ED: unit price x customer credit (months) x monthly sales.
pub fn customer_credit_delay(profile: &CashLagProfile, cs: &CostStructure) -> Money {
    cs.unit_price() * &profile.customer_credit_months * &profile.monthly_sales
}

pub fn solvency_threshold(cs: &CostStructure, profile: &CashLagProfile) -> Result<ThresholdReport> {
    profile.validate(cs)?;
    let liquidity = liquidity_threshold(cs)?;

    let price = cs.unit_price();
    let disbursed_cost = profile.disbursed_unit_variable_cost(cs);
    let margin = price - &disbursed_cost;
    if !margin.is_positive() {
        return Err(Error::NonPositiveMargin { margin });
    }
    let sales = &profile.monthly_sales;
    let deferred_variable = &disbursed_cost * &profile.supplier_credit_months * sales;
    let deferred_receipts = customer_credit_delay(profile, cs);

    let inputs = ClosedForm {
        price,
        disbursed_cost: &disbursed_cost,
        margin: &margin,
        profile,
        deferred_variable: &deferred_variable,
        deferred_receipts: &deferred_receipts,
    };

    // Outflows at time zero when nothing is modulated.
    let upfront = cs.fixed_cash() + &profile.anticipated_variable;
    let (pre_threshold, pre_binding) = inputs.threshold(&upfront)?;

    // The modulated charges only help if they are paid after the volume of
    // the unmodulated threshold has been sold.
    let modulation_applied = profile.modulated_fixed.is_positive()
        && match crossing_time(&pre_threshold, sales) {
            Some(t) => profile.modulation_month > t,
            None => false,
        };
    let (threshold, binding, modulated) = if modulation_applied {
        let upfront = &upfront - &profile.modulated_fixed;
        let (q, b) = inputs.threshold(&upfront)?;
        (q, b, profile.modulated_fixed.clone())
    } else {
        (pre_threshold.clone(), pre_binding, Money::zero())
    };

    Ok(ThresholdReport {
        liquidity_threshold: liquidity,
        crossing_month: crossing_time(&threshold, sales),
        solvency_threshold: threshold,
        binding_formula: binding,
        components: ThresholdComponents {
            fixed_cash: cs.fixed_cash().clone(),
            modulated_fixed: modulated,
            anticipated_variable: profile.anticipated_variable.clone(),
            deferred_variable,
            deferred_receipts,
            unit_margin: margin,
        },
        pre_modulation_threshold: pre_threshold,
        modulation_applied,
    })
}

fn crossing_time(volume: &Quantity, sales: &Quantity) -> Option<Money> {
    if volume.is_zero() {
        Some(Money::zero())
    } else {
        volume.checked_div(sales)
    }
}

struct ClosedForm<'a> {
    price: &'a Money,
    disbursed_cost: &'a Money,
    margin: &'a Money,
    profile: &'a CashLagProfile,
    deferred_variable: &'a Money,
    deferred_receipts: &'a Money,
}

impl ClosedForm<'_> {
    /// Threshold for a given amount paid out at time zero.
    fn threshold(&self, upfront: &Money) -> Result<(Quantity, BindingFormula)> {
        let standard = (upfront - self.deferred_variable + self.deferred_receipts) / self.margin;
        let anticipated = (upfront + self.deferred_receipts) / self.price;
        let (mut threshold, mut binding) = if anticipated > standard {
            (anticipated, BindingFormula::AnticipatedCap)
        } else {
            (standard, BindingFormula::Standard)
        };

        let Some(cycle) = &self.profile.cycle_months else {
            return Ok((threshold, binding));
        };
        let sales = &self.profile.monthly_sales;
        let cycle_volume = sales * cycle;
        let total_charges = upfront + self.disbursed_cost * &cycle_volume;
        // Cash left once every flow of the cycle is settled.
        if self.price * &cycle_volume < total_charges {
            return Err(Error::InfeasibleCycle);
        }
        let supplier = &self.profile.supplier_credit_months;
        let customer = &self.profile.customer_credit_months;
        if supplier <= customer {
            let plateau = cycle + supplier;
            if let Some(t) = crossing_time(&threshold, sales) {
                if t > plateau {
                    threshold = (total_charges + self.deferred_receipts) / self.price;
                    binding = BindingFormula::TotalChargesCap;
                }
            }
        }
        Ok((threshold, binding))
    }
}
