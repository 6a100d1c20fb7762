//! Monthly cash series for seasonal activity.
//!
//! Month 0 carries the upfront payments; sales of month `i` (1-based) are
//! booked at its end. Receipts and variable-cost payments are shifted by the
//! credit durations; a fractional shift splits the flow between the two
//! neighbouring months in proportion.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{CashLagProfile, CostStructure};
use crate::money::{Money, Quantity};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonthlyCash {
    pub month: u32,
    pub units: Quantity,
    pub inflow: Money,
    pub outflow: Money,
    pub cumulative: Money,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeasonalSolvency {
    /// First month of the final stretch over which cash stays non-negative.
    pub month: u32,
    /// Units sold through that month.
    pub cumulative_units: Quantity,
    /// First month with non-negative cash after a negative one.
    pub first_month: u32,
    pub series: Vec<MonthlyCash>,
}

pub fn seasonal_solvency(
    cs: &CostStructure,
    profile: &CashLagProfile,
    horizon_months: u32,
) -> Result<SeasonalSolvency> {
    profile.validate(cs)?;
    let weights = profile
        .normalized_weights()
        .ok_or(Error::InvalidArgument("seasonal weights are required"))?;
    if horizon_months < 12 {
        return Err(Error::InvalidArgument("horizon must cover at least 12 months"));
    }
    let months = horizon_months as usize + 1;
    let annual = &profile.monthly_sales * Money::from_int(12);
    let price = cs.unit_price();
    let unit_cost = profile.disbursed_unit_variable_cost(cs);

    let mut units = alloc::vec![Money::zero(); months];
    let mut inflow = alloc::vec![Money::zero(); months];
    let mut outflow = alloc::vec![Money::zero(); months];

    outflow[0] = cs.fixed_cash() - &profile.modulated_fixed + &profile.anticipated_variable;
    if profile.modulated_fixed.is_positive() {
        let month = profile.modulation_month.ceil().to_i64().unwrap_or(i64::MAX);
        if let Ok(month) = usize::try_from(month) {
            if month < months {
                outflow[month] += &profile.modulated_fixed;
            }
        }
    }

    for month in 1..months {
        let mut volume = &annual * &weights[(month - 1) % 12];
        if let Some(cycle) = &profile.cycle_months {
            // share of the month that falls inside the cycle
            let share = (cycle - Money::from_int(month as i64 - 1))
                .max_of(Money::zero())
                .min_of(Money::one());
            volume = volume * share;
        }
        if volume.is_zero() {
            continue;
        }
        spread(&mut inflow, month, &profile.customer_credit_months, price * &volume);
        spread(&mut outflow, month, &profile.supplier_credit_months, &unit_cost * &volume);
        units[month] = volume;
    }

    let mut cumulative = Money::zero();
    let mut sold = Money::zero();
    let mut series = Vec::with_capacity(months);
    for (month, ((units, inflow), outflow)) in units.into_iter().zip(inflow).zip(outflow).enumerate() {
        cumulative += &inflow;
        cumulative -= &outflow;
        sold += &units;
        series.push(MonthlyCash {
            month: month as u32,
            units: sold.clone(),
            inflow,
            outflow,
            cumulative: cumulative.clone(),
        });
    }

    if series[months - 1].cumulative.is_negative() {
        return Err(Error::NeverSolvent);
    }
    let month = series
        .iter()
        .rposition(|row| row.cumulative.is_negative())
        .map_or(0, |last_negative| last_negative + 1);
    let first_month = series
        .iter()
        .position(|row| row.cumulative.is_negative())
        .and_then(|neg| {
            series[neg..]
                .iter()
                .position(|row| !row.cumulative.is_negative())
                .map(|off| neg + off)
        })
        .unwrap_or(month);
    Ok(SeasonalSolvency {
        month: month as u32,
        cumulative_units: series[month].units.clone(),
        first_month: first_month as u32,
        series,
    })
}

/// Books `amount` at `month + lag`, splitting across months for fractional lags.
fn spread(target: &mut [Money], month: usize, lag: &Money, amount: Money) {
    let whole = lag.floor();
    let frac = lag - &whole;
    let Some(offset) = whole.to_i64().and_then(|w| usize::try_from(w).ok()) else {
        return;
    };
    let at = month + offset;
    if frac.is_zero() {
        if at < target.len() {
            target[at] += amount;
        }
        return;
    }
    let later = &amount * &frac;
    if at < target.len() {
        target[at] += amount - &later;
    }
    if at + 1 < target.len() {
        target[at + 1] += later;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::breakeven::liquidity_threshold;

    fn m(v: i64) -> Money {
        Money::from_int(v)
    }

    #[test]
    fn uniform_weights_reduce_to_liquidity_threshold() {
        let cs = CostStructure::from_parts(m(100_000), m(0), m(50), m(30)).unwrap();
        let mut p = CashLagProfile::steady(m(1000));
        p.seasonal_weights = Some(alloc::vec![m(1); 12]);
        let r = seasonal_solvency(&cs, &p, 24).unwrap();
        assert_eq!(r.month, 5);
        let q = liquidity_threshold(&cs).unwrap();
        assert!((r.cumulative_units - q).abs() <= p.monthly_sales);
    }

    #[test]
    fn all_sales_in_december() {
        let cs = CostStructure::from_parts(m(1000), m(0), m(10), m(5)).unwrap();
        let mut p = CashLagProfile::steady(m(100));
        let mut weights = alloc::vec![m(0); 12];
        weights[11] = m(1);
        p.seasonal_weights = Some(weights);
        let r = seasonal_solvency(&cs, &p, 12).unwrap();
        assert_eq!(r.month, 12);
        assert_eq!(r.cumulative_units, m(1200));
        assert_eq!(r.series[12].cumulative, m(1200 * 5 - 1000));
    }

    #[test]
    fn never_solvent() {
        let cs = CostStructure::from_parts(m(1_000_000), m(0), m(10), m(5)).unwrap();
        let mut p = CashLagProfile::steady(m(1));
        p.seasonal_weights = Some(alloc::vec![m(1); 12]);
        assert_eq!(seasonal_solvency(&cs, &p, 24), Err(Error::NeverSolvent));
    }

    #[test]
    fn requires_weights_and_a_year() {
        let cs = CostStructure::from_parts(m(10), m(0), m(10), m(5)).unwrap();
        let mut p = CashLagProfile::steady(m(1));
        assert!(seasonal_solvency(&cs, &p, 24).is_err());
        p.seasonal_weights = Some(alloc::vec![m(1); 12]);
        assert!(seasonal_solvency(&cs, &p, 11).is_err());
    }

    #[test]
    fn fractional_lag_splits_receipts() {
        let mut target = alloc::vec![Money::zero(); 4];
        spread(&mut target, 1, &Money::from_ratio(3, 2).unwrap(), m(100));
        assert_eq!(target, alloc::vec![m(0), m(0), m(50), m(50)]);
    }
}
