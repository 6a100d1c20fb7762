//! Worked examples checked against independent computations rather than
//! against the formulas that produced them.

mod common;

use tresor_core::breakeven::{
    seasonal_solvency, simulate_cash_days, solvency_threshold, BindingFormula, SalesSchedule,
};
use tresor_core::ledger::validate_ledger;
use tresor_core::transfer::operating_cash_surplus;
use tresor_core::waterfall::{fcf_waterfall, waterfall_inputs};
use tresor_core::{AnticipationCase, CashLagProfile, CostStructure, FlowKind, FlowLine, FlowStock, Money};

use common::{balanced, operating_cash, threshold_and_replay, LaggedScenario};

fn m(v: i64) -> Money {
    Money::from_int(v)
}

fn scenario(cfd: i64, p: i64, v: i64, edit: impl FnOnce(&mut CashLagProfile)) -> LaggedScenario {
    let cs = CostStructure::from_parts(m(cfd), m(0), m(p), m(v)).unwrap();
    let mut profile = CashLagProfile::steady(m(1200));
    edit(&mut profile);
    LaggedScenario { cs, profile }
}

fn assert_replay_agrees(s: &LaggedScenario) -> Money {
    let (closed, replay) = threshold_and_replay(s);
    let replay = replay.expect("replay reaches solvency");
    assert!((&closed - &replay).abs() <= m(1), "closed {closed} vs replay {replay}");
    closed
}

#[test]
fn both_credits() {
    let s = scenario(120_000, 50, 30, |p| {
        p.customer_credit_months = m(1);
        p.supplier_credit_months = m(1);
    });
    // (120000 + 60000 - 36000) / 20
    assert_eq!(assert_replay_agrees(&s), m(7200));
}

#[test]
fn anticipated_purchases_both_cases() {
    let s = scenario(120_000, 50, 30, |p| p.anticipated_variable = m(40_000));
    assert_eq!(assert_replay_agrees(&s), m(8000));
    let s = scenario(120_000, 50, 30, |p| {
        p.anticipated_variable = m(40_000);
        p.anticipation = AnticipationCase::SingleInputAllUpfront {
            unit_cost_component: m(10),
        };
    });
    assert_eq!(assert_replay_agrees(&s), m(16_000) / m(3));
}

#[test]
fn late_modulation_and_supplier_cap() {
    let s = scenario(120_000, 50, 30, |p| {
        p.modulated_fixed = m(24_000);
        p.modulation_month = m(7);
    });
    assert_eq!(assert_replay_agrees(&s), m(4800));

    let s = scenario(120_000, 50, 30, |p| p.supplier_credit_months = m(4));
    let r = solvency_threshold(&s.cs, &s.profile).unwrap();
    assert_eq!(r.binding_formula, BindingFormula::AnticipatedCap);
    assert_eq!(assert_replay_agrees(&s), m(2400));
}

#[test]
fn bounded_cycle_cap() {
    let s = scenario(120_000, 50, 30, |p| {
        p.customer_credit_months = m(3);
        p.cycle_months = Some(m(6));
    });
    let r = solvency_threshold(&s.cs, &s.profile).unwrap();
    assert_eq!(r.binding_formula, BindingFormula::TotalChargesCap);
    // (120000 + 216000 + 180000) / 50
    assert_eq!(assert_replay_agrees(&s), m(10_320));
}

#[test]
fn seasonal_series_agrees_with_the_replay_on_month_ends() {
    let cs = CostStructure::from_parts(m(60_000), m(0), m(50), m(30)).unwrap();
    let mut p = CashLagProfile::steady(m(300));
    p.customer_credit_months = m(1);
    p.seasonal_weights = Some([1, 1, 1, 2, 2, 3, 3, 2, 1, 1, 1, 6].map(m).to_vec());
    let series = seasonal_solvency(&cs, &p, 24).unwrap();
    let schedule = SalesSchedule::from_profile(&p, 24);
    let replay = simulate_cash_days(&cs, &p, &schedule, 24 * 30).unwrap();
    for row in &series.series {
        let day = &replay.days[row.month as usize * 30];
        assert_eq!(day.cumulative, row.cumulative, "month {}", row.month);
    }
}

#[test]
fn cash_table_against_balance_sheet() {
    let line = |id: &str, kind, cash, q: &str, u: &str| FlowLine::new(id, kind, cash, q.parse().unwrap(), u.parse().unwrap());
    let period = |n, sales: &str, price: &str, bought: &str, cost: &str, dap: &str| {
        balanced(
            n,
            vec![
                line("sales", FlowKind::Product, true, sales, price),
                line("bought", FlowKind::Input, true, bought, cost),
                line("dap", FlowKind::Input, false, "1", dap),
            ],
            Money::from_int(40 * n as i64),
        )
    };
    let accounts = vec![
        period(1, "100", "10", "50", "8", "100"),
        period(2, "110", "10.5", "55", "8.2", "120"),
        period(3, "118", "10.4", "60", "8.1", "120"),
    ];
    let stock = |n, id: &str, s: &str| FlowStock {
        period: n,
        flow_id: id.into(),
        stock_end: s.parse().unwrap(),
    };
    let stocks = vec![
        stock(1, "sales", "150"),
        stock(2, "sales", "231"),
        stock(2, "bought", "90.2"),
        stock(3, "sales", "122.72"),
        stock(3, "bought", "48.6"),
    ];
    let ledger = validate_ledger(&accounts, &stocks).unwrap();
    let table = operating_cash_surplus(&ledger, 2).unwrap();
    let expected = operating_cash(&accounts, &stocks, 3) - operating_cash(&accounts, &stocks, 2);
    assert_eq!(table.operating_surplus, expected);
    let waterfall = fcf_waterfall(&waterfall_inputs(&ledger, &[]).unwrap()).unwrap();
    assert_eq!(waterfall.variation(2).unwrap().operating_cash, expected);
}
