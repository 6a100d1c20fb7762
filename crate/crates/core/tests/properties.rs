mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tresor_core::breakeven::{solvency_threshold, BindingFormula};
use tresor_core::leverage::TreasuryLeverage;
use tresor_core::surplus::{caf_surplus, surplus_accounts};
use tresor_core::transfer::{
    caf_cash_variation, deferred_net_cash_flow, transfer_coefficients, TransferCoefficients,
};
use tresor_core::{validate_ledger, CashLagProfile, CostStructure, FlowStock, Money, PeriodAccount};

use common::*;

fn money(cents: i64) -> Money {
    Money::from_ratio(cents, 100).unwrap()
}

fn seeded() -> impl Strategy<Value = ChaCha8Rng> {
    any::<u64>().prop_map(ChaCha8Rng::seed_from_u64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn money_text_round_trips(n in -1_000_000_000i64..1_000_000_000, d in 1i64..10_000) {
        let x = Money::from_ratio(n, d).unwrap();
        prop_assert_eq!(x.to_raw_string().parse::<Money>().unwrap(), x.clone());
        let cents: Money = x.to_fixed(2).parse().unwrap();
        prop_assert!((cents - &x).abs() <= money(1) / Money::from_int(2));
    }

    #[test]
    fn elasticities_agree_by_both_routes(
        fixed in 1i64..1_000_000_000,
        margin in 1i64..1_000_000,
        volume in 1i64..100_000_000,
    ) {
        let lev = TreasuryLeverage::new(money(fixed), money(margin));
        let q = Money::from_ratio(volume, 10).unwrap();
        match (lev.elasticity_wrt_volume(&q), lev.elasticity_wrt_margin(&money(margin), &q)) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "routes disagree: {:?} vs {:?}", a, b),
        }
    }

    #[test]
    fn lag_free_solvency_is_liquidity(mut rng in seeded()) {
        let s = lag_free_scenario(&mut rng);
        let r = solvency_threshold(&s.cs, &s.profile).unwrap();
        prop_assert_eq!(r.solvency_threshold, r.liquidity_threshold);
    }

    #[test]
    fn threshold_monotone_while_standard_binds(
        cash_fixed in 0i64..10_000_000,
        price in 20i64..200,
        cost_share in 0i64..80,
        k in 0i64..90,
        j in 0i64..90,
        extra in 1i64..90,
        cva in 0i64..1_000_000,
    ) {
        let price = Money::from_int(price);
        let cost = (&price * Money::from_ratio(cost_share, 100).unwrap()).floor();
        let cs = CostStructure::from_parts(money(cash_fixed), Money::zero(), price, cost).unwrap();
        let mut base = CashLagProfile::steady(Money::from_int(300));
        base.customer_credit_months = Money::from_ratio(k, 30).unwrap();
        base.supplier_credit_months = Money::from_ratio(j, 30).unwrap();
        let r0 = solvency_threshold(&cs, &base).unwrap();
        prop_assume!(r0.binding_formula == BindingFormula::Standard);

        let mut longer_customer = base.clone();
        longer_customer.customer_credit_months += Money::from_ratio(extra, 30).unwrap();
        let r = solvency_threshold(&cs, &longer_customer).unwrap();
        prop_assert!(r.solvency_threshold >= r0.solvency_threshold);

        let mut anticipated = base.clone();
        anticipated.anticipated_variable = money(cva);
        let r = solvency_threshold(&cs, &anticipated).unwrap();
        prop_assert!(r.solvency_threshold >= r0.solvency_threshold);

        let mut longer_supplier = base.clone();
        longer_supplier.supplier_credit_months += Money::from_ratio(extra, 30).unwrap();
        let r = solvency_threshold(&cs, &longer_supplier).unwrap();
        if r.binding_formula == BindingFormula::Standard {
            prop_assert!(r.solvency_threshold <= r0.solvency_threshold);
        }
    }

    #[test]
    fn surplus_accounts_balance(mut rng in seeded()) {
        let accounts = random_accounts(&mut rng, 2);
        let report = surplus_accounts(&accounts[0], &accounts[1]).unwrap();
        prop_assert!(report.balance_ok);
        prop_assert_eq!(report.global(), report.total_uses());
        prop_assert!(report.resources.iter().chain(&report.uses).all(|e| e.amount.is_positive()));
        prop_assert_eq!(&report.productivity, &identity_surplus(&accounts[0], &accounts[1]));
    }

    #[test]
    fn caf_surplus_is_change_in_caf(mut rng in seeded()) {
        let accounts = random_accounts(&mut rng, 2);
        let r = caf_surplus(&accounts[0], &accounts[1]).unwrap();
        prop_assert_eq!(r.total, accounts[1].caf_before_tax() - accounts[0].caf_before_tax());
    }

    #[test]
    fn cash_rows_keep_their_signs_and_add_up(mut rng in seeded()) {
        let accounts = random_accounts(&mut rng, 2);
        let stocks = random_stocks(&mut rng, &accounts);
        let ledger = validate_ledger(&accounts, &stocks).unwrap();
        let coeffs = transfer_coefficients(&ledger, 2).unwrap();
        for c in &coeffs.flows {
            prop_assert!(c.current.immobilized >= Money::zero() && c.current.immobilized <= Money::one());
            prop_assert!(c.delta_settled().abs() <= Money::one());
        }
        let v = caf_cash_variation(&accounts[0], &accounts[1], &coeffs).unwrap();
        prop_assert_eq!(&v.by_rows, &v.by_components);
        prop_assert!(!v.transferred.total().is_positive());
        prop_assert!(!v.inherited.total().is_negative());
        // row IV plus the deferral is the change in CAF after tax
        let deferred = deferred_net_cash_flow(&accounts[0], &accounts[1], &coeffs).unwrap();
        prop_assert_eq!(v.by_rows + deferred, accounts[1].caf() - accounts[0].caf());
    }

    #[test]
    fn lag_free_coefficients_reproduce_virtual_caf(mut rng in seeded()) {
        let accounts = random_accounts(&mut rng, 2);
        let coeffs = TransferCoefficients::lag_free(&accounts[0], &accounts[1]).unwrap();
        let v = caf_cash_variation(&accounts[0], &accounts[1], &coeffs).unwrap();
        prop_assert_eq!(v.by_rows, accounts[1].caf() - accounts[0].caf());
        prop_assert!(deferred_net_cash_flow(&accounts[0], &accounts[1], &coeffs).unwrap().is_zero());
    }

    #[test]
    fn deferrals_telescope_over_a_closed_window(mut rng in seeded(), len in 3u32..6) {
        let mut accounts = random_accounts(&mut rng, len);
        let mut stocks = random_stocks(&mut rng, &accounts);
        // the last period repeats the first, stocks included
        let first = accounts[0].clone();
        accounts.push(PeriodAccount { period: len + 1, ..first });
        let repeated: Vec<FlowStock> = stocks
            .iter()
            .filter(|s| s.period == 1)
            .map(|s| FlowStock { period: len + 1, ..s.clone() })
            .collect();
        stocks.extend(repeated);
        let ledger = validate_ledger(&accounts, &stocks).unwrap();

        let mut accounting = Money::zero();
        let mut total = Money::zero();
        for n in 2..=len + 1 {
            let coeffs = transfer_coefficients(&ledger, n).unwrap();
            let (a, b) = (ledger.account(n - 1).unwrap(), ledger.account(n).unwrap());
            total += deferred_net_cash_flow(a, b, &coeffs).unwrap();
            accounting += b.result_after_tax() - a.result_after_tax();
        }
        prop_assert!(accounting.is_zero());
        prop_assert!(total.is_zero());
    }
}
