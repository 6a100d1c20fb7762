//! Event-level cash replay.
//!
//! Every unit sold is an event. Its receipt is booked one customer-credit
//! duration later and its variable cost one supplier-credit duration later.
//! Fixed cash charges and anticipated purchases are paid at time zero, except
//! the modulated part, paid at the modulation month. A month is 30 days.
//!
//! This path shares no arithmetic with the closed forms and serves as their
//! oracle.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{CashLagProfile, CostStructure};
use crate::money::{Money, Quantity};

const DAYS_PER_MONTH: i64 = 30;

/// When units are sold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SalesSchedule {
    /// Unit `u` (1-based) is sold at `u / monthly_sales` months.
    Steady { monthly_sales: Quantity },
    /// Units sold in each month (index 0 is the first month), spread evenly
    /// so that the last unit of a month sells at its end. Fractional monthly
    /// volumes are accumulated and floored.
    Monthly(Vec<Quantity>),
}

impl SalesSchedule {
    /// Steady sales, or twelve-month-periodic sales when the profile carries
    /// seasonal weights.
    pub fn from_profile(profile: &CashLagProfile, months: u32) -> Self {
        match profile.normalized_weights() {
            None => SalesSchedule::Steady {
                monthly_sales: profile.monthly_sales.clone(),
            },
            Some(weights) => {
                let annual = &profile.monthly_sales * Money::from_int(12);
                SalesSchedule::Monthly(
                    (0..months as usize)
                        .map(|i| &annual * &weights[i % 12])
                        .collect(),
                )
            }
        }
    }

    fn sale_times(&self, until: &Money) -> Vec<Money> {
        let mut times = Vec::new();
        match self {
            SalesSchedule::Steady { monthly_sales } => {
                if !monthly_sales.is_positive() {
                    return times;
                }
                let mut unit = 1i64;
                loop {
                    let t = Money::from_int(unit) / monthly_sales;
                    if &t > until {
                        break;
                    }
                    times.push(t);
                    unit += 1;
                }
            }
            SalesSchedule::Monthly(volumes) => {
                let mut cumulative = Money::zero();
                let mut sold = Money::zero();
                for (month, volume) in volumes.iter().enumerate() {
                    cumulative += volume;
                    let count = (&cumulative - &sold).floor();
                    let Some(count_i) = count.to_i64() else { continue };
                    sold += &count;
                    for r in 1..=count_i {
                        let t = Money::from_int(month as i64) + Money::from_ratio(r, count_i).unwrap();
                        if &t > until {
                            return times;
                        }
                        times.push(t);
                    }
                }
            }
        }
        times
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DailyCash {
    pub day: u32,
    pub inflow: Money,
    pub outflow: Money,
    pub cumulative: Money,
}

/// A point where cumulative cash turns non-negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CashCrossing {
    pub time_months: Money,
    pub day: u32,
    /// Units sold up to and including that instant.
    pub units_sold: Quantity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CashSimulation {
    pub days: Vec<DailyCash>,
    /// Start of the final stretch over which cash stays non-negative.
    pub solvency: Option<CashCrossing>,
    /// First time cash is non-negative after having been negative.
    pub first_crossing: Option<CashCrossing>,
}

enum Event {
    Sale,
    Cash(Money),
}

pub fn simulate_cash_days(
    cs: &CostStructure,
    profile: &CashLagProfile,
    schedule: &SalesSchedule,
    horizon_days: u32,
) -> Result<CashSimulation> {
    profile.validate(cs)?;
    let horizon = Money::from_ratio(horizon_days.into(), DAYS_PER_MONTH).unwrap();
    let mut sales_end = horizon.clone();
    if let Some(cycle) = &profile.cycle_months {
        if cycle > &horizon {
            return Err(Error::InvalidArgument("horizon is shorter than the cycle"));
        }
        sales_end = cycle.clone();
    }

    let price = cs.unit_price();
    let unit_cost = profile.disbursed_unit_variable_cost(cs);
    let receipt_lag = &profile.customer_credit_months;
    let payment_lag = &profile.supplier_credit_months;

    let mut events: Vec<(Money, Event)> = Vec::new();
    let upfront = cs.fixed_cash() - &profile.modulated_fixed + &profile.anticipated_variable;
    if !upfront.is_zero() {
        events.push((Money::zero(), Event::Cash(-upfront)));
    }
    if profile.modulated_fixed.is_positive() {
        events.push((
            profile.modulation_month.clone(),
            Event::Cash(-profile.modulated_fixed.clone()),
        ));
    }
    for t in schedule.sale_times(&sales_end) {
        events.push((&t + receipt_lag, Event::Cash(price.clone())));
        if !unit_cost.is_zero() {
            events.push((&t + payment_lag, Event::Cash(-unit_cost.clone())));
        }
        events.push((t, Event::Sale));
    }
    events.retain(|(t, _)| t <= &horizon);
    events.sort_by(|a, b| a.0.cmp(&b.0));

    let day_of = |t: &Money| -> u32 {
        (t * Money::from_int(DAYS_PER_MONTH))
            .ceil()
            .to_i64()
            .and_then(|d| u32::try_from(d).ok())
            .unwrap_or(horizon_days)
    };

    let n_days = horizon_days as usize + 1;
    let mut inflow = alloc::vec![Money::zero(); n_days];
    let mut outflow = alloc::vec![Money::zero(); n_days];

    let mut cash = Money::zero();
    let mut units = 0i64;
    let mut stretch = Some(CashCrossing {
        time_months: Money::zero(),
        day: 0,
        units_sold: Money::zero(),
    });
    let mut first_crossing = None;
    let mut went_negative = false;

    let mut i = 0;
    while i < events.len() {
        let time = events[i].0.clone();
        while i < events.len() && events[i].0 == time {
            match &events[i].1 {
                Event::Sale => units += 1,
                Event::Cash(delta) => {
                    let day = day_of(&time) as usize;
                    if delta.is_negative() {
                        outflow[day] -= delta;
                    } else {
                        inflow[day] += delta;
                    }
                    cash += delta;
                }
            }
            i += 1;
        }
        if cash.is_negative() {
            stretch = None;
            went_negative = true;
        } else if stretch.is_none() {
            let crossing = CashCrossing {
                day: day_of(&time),
                time_months: time,
                units_sold: Money::from_int(units),
            };
            if first_crossing.is_none() {
                first_crossing = Some(crossing.clone());
            }
            stretch = Some(crossing);
        }
    }
    if !went_negative {
        first_crossing = stretch.clone();
    }

    let mut cumulative = Money::zero();
    let days = inflow
        .into_iter()
        .zip(outflow)
        .enumerate()
        .map(|(day, (inflow, outflow))| {
            cumulative += &inflow;
            cumulative -= &outflow;
            DailyCash {
                day: day as u32,
                inflow,
                outflow,
                cumulative: cumulative.clone(),
            }
        })
        .collect();

    Ok(CashSimulation {
        days,
        solvency: stretch,
        first_crossing,
    })
}
