//! Engine results laid out as tables and JSON documents.

use serde_json::{json, Map, Value};
use tresor_core::breakeven::{BindingFormula, CashSimulation, SeasonalSolvency, ThresholdReport};
use tresor_core::leverage::{CurveData, RuptureMatrix, TreasuryLeverage};
use tresor_core::surplus::{CafSurplusReport, SurplusEntry, SurplusItem, SurplusReport};
use tresor_core::transfer::CashDecompositionTable;
use tresor_core::waterfall::{Waterfall, WaterfallReport};
use tresor_core::{Money, Quantity};

use crate::render::{Cell, Style, Table};

/// A rendered-agnostic report: tables for text and CSV, a JSON document.
#[derive(Debug, Clone)]
pub struct Report {
    pub tables: Vec<Table>,
    pub json: Value,
}

fn binding_name(b: BindingFormula) -> &'static str {
    match b {
        BindingFormula::Standard => "standard",
        BindingFormula::AnticipatedCap => "anticipated_cap",
        BindingFormula::TotalChargesCap => "total_charges_cap",
    }
}

pub fn breakeven(name: &str, r: &ThresholdReport, style: Style) -> Report {
    let c = &r.components;
    let mut t = Table::new(format!("Break-even: {name}"), &["item", "value"]);
    t.row(vec!["liquidity threshold (units)".into(), (&r.liquidity_threshold).into()])
        .row(vec!["solvency threshold (units)".into(), (&r.solvency_threshold).into()])
        .row(vec!["binding formula".into(), binding_name(r.binding_formula).into()])
        .row(vec!["cash fixed charges".into(), (&c.fixed_cash).into()])
        .row(vec!["modulated fixed charges applied".into(), (&c.modulated_fixed).into()])
        .row(vec!["anticipated variable costs".into(), (&c.anticipated_variable).into()])
        .row(vec!["variable costs deferred by supplier credit".into(), (&c.deferred_variable).into()])
        .row(vec!["receipts deferred by customer credit".into(), (&c.deferred_receipts).into()])
        .row(vec!["unit margin on disbursed costs".into(), (&c.unit_margin).into()])
        .row(vec!["threshold before modulation".into(), (&r.pre_modulation_threshold).into()])
        .row(vec!["modulation applied".into(), r.modulation_applied.to_string().into()])
        .row(vec!["crossing month".into(), r.crossing_month.as_ref().into()]);
    let json = json!({
        "scenario": name,
        "liquidity_threshold": style.json(&r.liquidity_threshold),
        "solvency_threshold": style.json(&r.solvency_threshold),
        "binding_formula": binding_name(r.binding_formula),
        "components": {
            "fixed_cash": style.json(&c.fixed_cash),
            "modulated_fixed": style.json(&c.modulated_fixed),
            "anticipated_variable": style.json(&c.anticipated_variable),
            "deferred_variable": style.json(&c.deferred_variable),
            "deferred_receipts": style.json(&c.deferred_receipts),
            "unit_margin": style.json(&c.unit_margin),
        },
        "pre_modulation_threshold": style.json(&r.pre_modulation_threshold),
        "modulation_applied": r.modulation_applied,
        "crossing_month": style.json_opt(r.crossing_month.as_ref()),
    });
    Report { tables: vec![t], json }
}

pub fn simulation(name: &str, sim: &CashSimulation, daily: bool, style: Style) -> Report {
    let mut t = Table::new(format!("Cash replay: {name}"), &["crossing", "day", "month", "units sold"]);
    let mut crossing_json = Map::new();
    for (label, crossing) in [("solvency", &sim.solvency), ("first_crossing", &sim.first_crossing)] {
        match crossing {
            Some(c) => {
                t.row(vec![
                    label.into(),
                    c.day.to_string().into(),
                    (&c.time_months).into(),
                    (&c.units_sold).into(),
                ]);
                crossing_json.insert(
                    label.into(),
                    json!({"day": c.day, "month": style.json(&c.time_months), "units_sold": style.json(&c.units_sold)}),
                );
            }
            None => {
                t.row(vec![label.into(), "never".into(), Cell::Empty, Cell::Empty]);
                crossing_json.insert(label.into(), Value::Null);
            }
        }
    }
    let mut tables = vec![t];
    let mut json = json!({"scenario": name, "crossings": crossing_json});
    if daily {
        let mut days = Table::new("Daily cash", &["day", "inflow", "outflow", "cumulative"]);
        let mut rows = Vec::new();
        for d in &sim.days {
            days.row(vec![d.day.to_string().into(), (&d.inflow).into(), (&d.outflow).into(), (&d.cumulative).into()]);
            rows.push(json!({
                "day": d.day,
                "inflow": style.json(&d.inflow),
                "outflow": style.json(&d.outflow),
                "cumulative": style.json(&d.cumulative),
            }));
        }
        tables.push(days);
        json["days"] = Value::Array(rows);
    }
    Report { tables, json }
}

pub fn seasonal(name: &str, s: &SeasonalSolvency, style: Style) -> Report {
    let mut summary = Table::new(format!("Seasonal cash: {name}"), &["item", "value"]);
    summary
        .row(vec!["solvency month".into(), s.month.to_string().into()])
        .row(vec!["units sold by then".into(), (&s.cumulative_units).into()])
        .row(vec!["first non-negative month".into(), s.first_month.to_string().into()]);
    let mut months = Table::new("Monthly cash", &["month", "units", "inflow", "outflow", "cumulative"]);
    let mut rows = Vec::new();
    for m in &s.series {
        months.row(vec![
            m.month.to_string().into(),
            (&m.units).into(),
            (&m.inflow).into(),
            (&m.outflow).into(),
            (&m.cumulative).into(),
        ]);
        rows.push(json!({
            "month": m.month,
            "units": style.json(&m.units),
            "inflow": style.json(&m.inflow),
            "outflow": style.json(&m.outflow),
            "cumulative": style.json(&m.cumulative),
        }));
    }
    let json = json!({
        "scenario": name,
        "solvency_month": s.month,
        "cumulative_units": style.json(&s.cumulative_units),
        "first_month": s.first_month,
        "months": rows,
    });
    Report {
        tables: vec![summary, months],
        json,
    }
}

/// Values that may be unbounded at a pole.
pub struct LeverageFigures {
    pub leverage: TreasuryLeverage,
    pub volume: Quantity,
    pub virtual_treasury: Money,
    pub volume_elasticity: Option<Money>,
    pub margin_elasticity: Option<Money>,
    pub critical_production: Option<Quantity>,
    pub critical_margin: Option<Money>,
}

pub fn leverage(f: &LeverageFigures, matrix: Option<&RuptureMatrix>, style: Style) -> Report {
    let mut t = Table::new("Treasury leverage", &["item", "value"]);
    t.row(vec!["fixed charges F".into(), (&f.leverage.fixed).into()])
        .row(vec!["unit margin m".into(), (&f.leverage.margin).into()])
        .row(vec!["volume Q".into(), (&f.volume).into()])
        .row(vec!["virtual treasury mQ - F".into(), (&f.virtual_treasury).into()])
        .row(vec!["elasticity to volume".into(), f.volume_elasticity.as_ref().into()])
        .row(vec!["elasticity to margin".into(), f.margin_elasticity.as_ref().into()])
        .row(vec!["critical production F/m".into(), f.critical_production.as_ref().into()])
        .row(vec!["critical margin F/Q".into(), f.critical_margin.as_ref().into()]);
    let mut json = json!({
        "fixed": style.json(&f.leverage.fixed),
        "margin": style.json(&f.leverage.margin),
        "volume": style.json(&f.volume),
        "virtual_treasury": style.json(&f.virtual_treasury),
        "elasticity_wrt_volume": style.json_opt(f.volume_elasticity.as_ref()),
        "elasticity_wrt_margin": style.json_opt(f.margin_elasticity.as_ref()),
        "critical_production": style.json_opt(f.critical_production.as_ref()),
        "critical_margin": style.json_opt(f.critical_margin.as_ref()),
    });
    let mut tables = vec![t];
    if let Some(m) = matrix {
        let mut r = Table::new("Critical points by basis", &["basis", "critical production", "critical margin"]);
        r.row(vec!["term".into(), (&m.q_term).into(), (&m.m_term).into()])
            .row(vec!["immediate".into(), (&m.q_immediate).into(), (&m.m_immediate).into()]);
        tables.push(r);
        json["rupture_matrix"] = json!({
            "term": {"critical_production": style.json(&m.q_term), "critical_margin": style.json(&m.m_term)},
            "immediate": {"critical_production": style.json(&m.q_immediate), "critical_margin": style.json(&m.m_immediate)},
        });
    }
    Report { tables, json }
}

fn pairs(title: String, x: &str, y: &str, points: &[(Money, Money)]) -> Table {
    let mut t = Table::new(title, &[x, y]);
    for (a, b) in points {
        t.row(vec![a.into(), b.into()]);
    }
    t
}

fn pairs_json(points: &[(Money, Money)], style: Style) -> Value {
    Value::Array(points.iter().map(|(x, y)| json!([style.json(x), style.json(y)])).collect())
}

/// One table per curve; the header names the curve.
pub fn curves(data: &CurveData, style: Style) -> Report {
    let mut tables = vec![
        pairs("Elasticity to volume".into(), "volume", "elasticity_wrt_volume", &data.volume_elasticity),
        pairs("Elasticity to margin".into(), "margin", "elasticity_wrt_margin", &data.margin_elasticity),
    ];
    let mut indifference = Vec::new();
    for curve in &data.indifference {
        let header = format!("margin_at_fixed_{}", style.amount(&curve.fixed));
        tables.push(pairs(format!("Indifference curve F = {}", style.amount(&curve.fixed)), "volume", &header, &curve.points));
        indifference.push(json!({"fixed": style.json(&curve.fixed), "points": pairs_json(&curve.points, style)}));
    }
    let json = json!({
        "volume_elasticity": pairs_json(&data.volume_elasticity, style),
        "margin_elasticity": pairs_json(&data.margin_elasticity, style),
        "indifference": indifference,
    });
    Report { tables, json }
}

fn item_name(item: &SurplusItem) -> String {
    match item {
        SurplusItem::OutputPrice { flow_id } => format!("output price {flow_id}"),
        SurplusItem::InputPrice { flow_id } => format!("input price {flow_id}"),
        SurplusItem::Result => "result".into(),
    }
}

fn entries_json(entries: &[SurplusEntry], style: Style) -> Value {
    Value::Array(
        entries
            .iter()
            .map(|e| {
                let (party, flow) = match &e.item {
                    SurplusItem::OutputPrice { flow_id } => ("clients", Some(flow_id)),
                    SurplusItem::InputPrice { flow_id } => ("suppliers", Some(flow_id)),
                    SurplusItem::Result => ("result", None),
                };
                json!({"party": party, "flow_id": flow, "amount": style.json(&e.amount)})
            })
            .collect(),
    )
}

pub fn surplus(r: &SurplusReport, caf: &CafSurplusReport, style: Style) -> Report {
    let mut account = Table::new(
        format!("Surplus account, period {} to {}", r.base_period, r.next_period),
        &["side", "item", "amount"],
    );
    account.row(vec!["resource".into(), "productivity surplus".into(), (&r.productivity).into()]);
    for e in &r.resources {
        account.row(vec!["resource".into(), item_name(&e.item).into(), (&e.amount).into()]);
    }
    for e in &r.uses {
        account.row(vec!["use".into(), item_name(&e.item).into(), (&e.amount).into()]);
    }
    account
        .row(vec!["total".into(), "resources".into(), r.global().into()])
        .row(vec!["total".into(), "uses".into(), r.total_uses().into()]);

    let mut split = Table::new("Result change", &["item", "amount"]);
    split
        .row(vec!["before tax".into(), (&r.result_change.before_tax).into()])
        .row(vec!["tax".into(), (&r.result_change.tax).into()])
        .row(vec!["after tax".into(), (&r.result_change.after_tax).into()]);

    let mut virtual_cash = Table::new("Change in CAF before tax", &["item", "amount"]);
    virtual_cash
        .row(vec!["calculated charges (quantities)".into(), (&caf.dap_quantity).into()])
        .row(vec!["calculated charges (prices)".into(), (&caf.dap_price).into()])
        .row(vec!["calculated charges (cross)".into(), (&caf.dap_cross).into()])
        .row(vec!["result before tax".into(), (&caf.delta_result).into()])
        .row(vec!["total".into(), (&caf.total).into()]);

    let json = json!({
        "base_period": r.base_period,
        "next_period": r.next_period,
        "productivity_surplus": style.json(&r.productivity),
        "resources": entries_json(&r.resources, style),
        "uses": entries_json(&r.uses, style),
        "total_resources": style.json(&r.global()),
        "total_uses": style.json(&r.total_uses()),
        "balance_ok": r.balance_ok,
        "result_change": {
            "before_tax": style.json(&r.result_change.before_tax),
            "tax": style.json(&r.result_change.tax),
            "after_tax": style.json(&r.result_change.after_tax),
        },
        "caf_surplus": {
            "dap_quantity": style.json(&caf.dap_quantity),
            "dap_price": style.json(&caf.dap_price),
            "dap_cross": style.json(&caf.dap_cross),
            "delta_result": style.json(&caf.delta_result),
            "total": style.json(&caf.total),
        },
    });
    Report {
        tables: vec![account, split, virtual_cash],
        json,
    }
}

pub fn cash_table(table: &CashDecompositionTable, style: Style) -> Report {
    let mut t = Table::new(
        format!("Operating cash surplus, period {}", table.period),
        &["row", "cash flow", "amount"],
    );
    let mut rows = Vec::new();
    for row in table.rows() {
        t.row(vec![row.code.into(), row.label.into(), (&row.value).into()]);
        rows.push(json!({"row": row.code, "label": row.label, "amount": style.json(&row.value)}));
    }
    let v = &table.variation;
    let json = json!({
        "period": table.period,
        "rows": rows,
        "row_iv_by_rows": style.json(&v.by_rows),
        "row_iv_by_components": style.json(&v.by_components),
    });
    Report { tables: vec![t], json }
}

const WATERFALL_LINES: [&str; 9] = [
    "CAF before interest",
    "- change in working capital",
    "= operating cash",
    "- net investment",
    "= free cash",
    "+ change in debt",
    "= free cash after financing",
    "change in long-term funds",
    "change in treasury",
];

fn waterfall_values(r: &WaterfallReport) -> [&Money; 9] {
    [
        &r.caf_before_interest,
        &r.delta_bfr,
        &r.operating_cash,
        &r.net_investment,
        &r.free_cash,
        &r.delta_debt,
        &r.free_cash_after_financing,
        &r.delta_fr,
        &r.delta_treasury,
    ]
}

fn waterfall_json(r: &WaterfallReport, style: Style) -> Value {
    json!({
        "period": r.period,
        "caf_before_interest": style.json(&r.caf_before_interest),
        "delta_bfr": style.json(&r.delta_bfr),
        "operating_cash": style.json(&r.operating_cash),
        "net_investment": style.json(&r.net_investment),
        "free_cash": style.json(&r.free_cash),
        "delta_debt": style.json(&r.delta_debt),
        "free_cash_after_financing": style.json(&r.free_cash_after_financing),
        "delta_fr": style.json(&r.delta_fr),
        "delta_treasury": style.json(&r.delta_treasury),
    })
}

/// Financing table for `period` and, when present, `period + 1` with the
/// variation between them.
pub fn waterfall(w: &Waterfall, period: u32, style: Style) -> Option<Report> {
    let first = w.report(period)?;
    let second = w.report(period + 1);
    let headers_owned = [
        "flow".to_string(),
        format!("period {period}"),
        format!("period {}", period + 1),
        "variation".to_string(),
    ];
    let columns = if second.is_some() { 4 } else { 2 };
    let headers: Vec<&str> = headers_owned[..columns].iter().map(String::as_str).collect();
    let mut t = Table::new("Financing table", &headers);
    let a = waterfall_values(first);
    let b = second.map(waterfall_values);
    for (i, label) in WATERFALL_LINES.iter().enumerate() {
        let mut row: Vec<Cell> = vec![(*label).into(), a[i].into()];
        if let Some(b) = &b {
            row.push(b[i].into());
            row.push((b[i] - a[i]).into());
        }
        t.row(row);
    }
    let json = json!({
        "periods": w.reports.iter().map(|r| waterfall_json(r, style)).collect::<Vec<_>>(),
        "variations": w.variations.iter().map(|v| json!({
            "from": v.from,
            "to": v.to,
            "caf_before_interest": style.json(&v.caf_before_interest),
            "delta_bfr": style.json(&v.delta_bfr),
            "operating_cash": style.json(&v.operating_cash),
            "net_investment": style.json(&v.net_investment),
            "free_cash": style.json(&v.free_cash),
            "delta_debt": style.json(&v.delta_debt),
            "free_cash_after_financing": style.json(&v.free_cash_after_financing),
        })).collect::<Vec<_>>(),
    });
    Some(Report { tables: vec![t], json })
}
