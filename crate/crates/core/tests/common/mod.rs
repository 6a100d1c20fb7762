//! Random instance generators shared by the integration tests.
#![allow(dead_code)]

use rand::Rng;
use tresor_core::breakeven::{simulate_cash_days, solvency_threshold, SalesSchedule};
use tresor_core::{
    AnticipationCase, CashLagProfile, CostStructure, Error, FlowKind, FlowLine, FlowStock, Money, PeriodAccount,
};

/// `k / denom` for `k` uniform in `lo..=hi`.
pub fn ratio<R: Rng>(rng: &mut R, lo: i64, hi: i64, denom: i64) -> Money {
    Money::from_ratio(rng.gen_range(lo..=hi), denom).unwrap()
}

struct FlowSpec {
    id: String,
    kind: FlowKind,
    cash: bool,
}

fn flow_specs<R: Rng>(rng: &mut R) -> Vec<FlowSpec> {
    let mut specs = Vec::new();
    let mut add = |prefix: &str, kind, cash, count| {
        for i in 0..count {
            specs.push(FlowSpec {
                id: format!("{prefix}{i}"),
                kind,
                cash,
            });
        }
    };
    add("sale", FlowKind::Product, true, rng.gen_range(1..=3));
    add("stored", FlowKind::Product, false, rng.gen_range(0..=1));
    add("buy", FlowKind::Input, true, rng.gen_range(1..=3));
    add("dap", FlowKind::Input, false, rng.gen_range(0..=2));
    specs
}

/// Balanced accounts over `periods` consecutive periods starting at 1. Flows
/// are occasionally absent from a period.
pub fn random_accounts<R: Rng>(rng: &mut R, periods: u32) -> Vec<PeriodAccount> {
    let specs = flow_specs(rng);
    (1..=periods)
        .map(|period| {
            let mut lines = Vec::new();
            for s in &specs {
                if rng.gen_bool(0.9) {
                    let quantity = ratio(rng, 0, 5000, 10);
                    let unit_value = ratio(rng, 1, 5000, 100);
                    lines.push(FlowLine::new(s.id.as_str(), s.kind, s.cash, quantity, unit_value));
                }
            }
            balanced(period, lines, ratio(rng, 0, 20_000, 100))
        })
        .collect()
}

pub fn balanced(period: u32, lines: Vec<FlowLine>, tax: Money) -> PeriodAccount {
    let mut result = Money::zero();
    for line in &lines {
        match line.kind {
            FlowKind::Product => result += line.value(),
            FlowKind::Input => result -= line.value(),
        }
    }
    PeriodAccount {
        period,
        lines,
        result_before_tax: result,
        tax,
    }
}

/// A stock on most cash flows, with `t` a multiple of 1/20.
pub fn random_stocks<R: Rng>(rng: &mut R, accounts: &[PeriodAccount]) -> Vec<FlowStock> {
    let mut stocks = Vec::new();
    for account in accounts {
        for line in account.lines.iter().filter(|l| l.cash_effective) {
            if rng.gen_bool(0.8) {
                stocks.push(FlowStock {
                    period: account.period,
                    flow_id: line.id.clone(),
                    stock_end: line.value() * ratio(rng, 0, 20, 20),
                });
            }
        }
    }
    stocks
}

/// Working capital straight from the stock list: product stocks less input
/// stocks.
pub fn working_capital(accounts: &[PeriodAccount], stocks: &[FlowStock], period: u32) -> Money {
    let account = accounts.iter().find(|a| a.period == period).unwrap();
    stocks
        .iter()
        .filter(|s| s.period == period)
        .map(|s| match account.line(&s.flow_id).unwrap().kind {
            FlowKind::Product => s.stock_end.clone(),
            FlowKind::Input => -s.stock_end.clone(),
        })
        .sum()
}

/// Operating cash of a period from first principles: result after tax plus
/// calculated charges less non-cash products, less the working-capital change.
pub fn operating_cash(accounts: &[PeriodAccount], stocks: &[FlowStock], period: u32) -> Money {
    let account = accounts.iter().find(|a| a.period == period).unwrap();
    let mut caf = &account.result_before_tax - &account.tax;
    for line in account.lines.iter().filter(|l| !l.cash_effective) {
        match line.kind {
            FlowKind::Input => caf += line.value(),
            FlowKind::Product => caf -= line.value(),
        }
    }
    caf - (working_capital(accounts, stocks, period) - working_capital(accounts, stocks, period - 1))
}

/// Production identity solved for the productivity surplus:
/// `-sum dp (P + dP) + sum df (F + dF) + dR`. Flows are matched by id; a flow
/// missing from one side counts as zero quantity at the other side's price.
pub fn identity_surplus(base: &PeriodAccount, next: &PeriodAccount) -> Money {
    let mut ids: Vec<&str> = base.lines.iter().chain(&next.lines).map(|l| l.id.as_str()).collect();
    ids.sort_unstable();
    ids.dedup();
    let mut total = &next.result_before_tax - &base.result_before_tax;
    for id in ids {
        let (b, n) = (base.line(id), next.line(id));
        let line = b.or(n).unwrap();
        let base_price = b.map_or_else(|| n.unwrap().unit_value.clone(), |l| l.unit_value.clone());
        let next_price = n.map_or_else(|| base_price.clone(), |l| l.unit_value.clone());
        let next_qty = n.map_or_else(Money::zero, |l| l.quantity.clone());
        let term = (next_price - base_price) * next_qty;
        match line.kind {
            FlowKind::Product => total -= term,
            FlowKind::Input => total += term,
        }
    }
    total
}

/// A cost structure and lag profile whose lags are whole numbers of days and
/// whose monthly sales are a multiple of 30, so that every cash event of the
/// day-level replay falls on a sale instant.
pub struct LaggedScenario {
    pub cs: CostStructure,
    pub profile: CashLagProfile,
}

pub fn lag_free_scenario<R: Rng>(rng: &mut R) -> LaggedScenario {
    let price = ratio(rng, 200, 20_000, 100);
    let cost = &price * ratio(rng, 0, 95, 100);
    let cash_fixed = ratio(rng, 0, 10_000_000, 100);
    let calculated = ratio(rng, 0, 1_000_000, 100);
    let cs = CostStructure::from_parts(cash_fixed, calculated, price, cost).unwrap();
    let profile = CashLagProfile::steady(ratio(rng, 1, 10_000, 10));
    LaggedScenario { cs, profile }
}

pub fn lagged_scenario<R: Rng>(rng: &mut R) -> LaggedScenario {
    loop {
        let price = Money::from_int(rng.gen_range(20..=200));
        let cost = Money::from_int(rng.gen_range(0..=price.to_i64().unwrap() * 4 / 5));
        let sales = Money::from_int(30 * rng.gen_range(1..=5));
        let margin = &price - &cost;
        // liquidity threshold reached within one to twelve months
        let cash_fixed = &margin * &sales * ratio(rng, 1, 1200, 100);
        let cs = CostStructure::from_parts(cash_fixed.clone(), Money::zero(), price.clone(), cost.clone()).unwrap();

        let days = |rng: &mut R, max| Money::from_ratio(rng.gen_range(0..=max), 30).unwrap();
        let mut profile = CashLagProfile::steady(sales.clone());
        profile.customer_credit_months = days(rng, 120);
        profile.supplier_credit_months = days(rng, 120);
        if rng.gen_bool(0.3) {
            profile.modulated_fixed = (&cash_fixed * ratio(rng, 0, 100, 100)).floor();
            profile.modulation_month = days(rng, 360);
        }
        if rng.gen_bool(0.3) {
            profile.anticipated_variable = Money::from_int(rng.gen_range(0..=100_000));
            if rng.gen_bool(0.5) && cost.is_positive() {
                profile.anticipation = AnticipationCase::SingleInputAllUpfront {
                    unit_cost_component: Money::from_int(rng.gen_range(0..=cost.to_i64().unwrap())),
                };
            }
        }
        if rng.gen_bool(0.3) {
            profile.cycle_months = Some(days(rng, 360) + Money::one());
        }
        match solvency_threshold(&cs, &profile) {
            Err(Error::InfeasibleCycle) | Err(Error::NonPositiveMargin { .. }) => continue,
            Err(other) => panic!("unexpected error {other}"),
            Ok(report) => {
                // the all-or-nothing modulation rule and the replay part ways
                // when the payment lands exactly on the crossing instant
                let on_boundary = profile.modulated_fixed.is_positive()
                    && &report.pre_modulation_threshold / &sales == profile.modulation_month;
                if !on_boundary {
                    return LaggedScenario { cs, profile };
                }
            }
        }
    }
}

/// Closed-form threshold and the replay's solvency instant expressed in
/// units of steady sales. Before the end of a bounded cycle this is the
/// number of units sold; after it, the volume the cycle would have sold by
/// then, which is how the total-charges cap counts.
pub fn threshold_and_replay(s: &LaggedScenario) -> (Money, Option<Money>) {
    let report = solvency_threshold(&s.cs, &s.profile).unwrap();
    let months = (&report.solvency_threshold / &s.profile.monthly_sales).ceil().to_i64().unwrap();
    let lags = s
        .profile
        .customer_credit_months
        .clone()
        .max_of(s.profile.supplier_credit_months.clone())
        .max_of(s.profile.modulation_month.clone())
        .max_of(s.profile.cycle_months.clone().unwrap_or_else(Money::zero))
        .ceil()
        .to_i64()
        .unwrap();
    let horizon = 30 * (months.max(lags) + lags + 2);
    let schedule = SalesSchedule::from_profile(&s.profile, 0);
    let sim = simulate_cash_days(&s.cs, &s.profile, &schedule, horizon as u32).unwrap();
    let sales = &s.profile.monthly_sales;
    (report.solvency_threshold, sim.solvency.map(|c| c.time_months * sales))
}
