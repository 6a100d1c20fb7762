//! Scenario and ledger file formats.
//!
//! Amounts are written either as JSON strings (`"12.50"`, `"1/3"`) or as
//! plain JSON numbers; numbers are read from their source text, so `0.1`
//! stays exactly one tenth. Exponent notation is rejected.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Deserializer};
use tresor_core::waterfall::FinancingFlows;
use tresor_core::{
    validate_ledger, AnticipationCase, CashLagProfile, CostStructure, FlowKind, FlowLine, FlowStock, Money,
    PeriodAccount, ValidatedLedger,
};

use crate::error::CliError;

/// An exact amount as found in an input file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Amount(pub Money);

impl<'de> Deserialize<'de> for Amount {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = match serde_json::Value::deserialize(deserializer)? {
            serde_json::Value::String(s) => s,
            serde_json::Value::Number(n) => n.to_string(),
            other => return Err(serde::de::Error::custom(format!("expected an amount, found {other}"))),
        };
        text.parse().map(Amount).map_err(serde::de::Error::custom)
    }
}

fn amount(a: Option<Amount>) -> Money {
    a.map_or_else(Money::zero, |a| a.0)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostStructureFile {
    /// Checked against `fixed_cash + fixed_calculated` when given.
    pub fixed_total: Option<Amount>,
    pub fixed_cash: Amount,
    #[serde(default)]
    pub fixed_calculated: Option<Amount>,
    pub unit_price: Amount,
    pub unit_variable_cost: Amount,
}

#[derive(Debug, Deserialize, Default)]
#[serde(tag = "case", rename_all = "snake_case", deny_unknown_fields)]
pub enum AnticipationFile {
    #[default]
    WholeUnits,
    SingleInputAllUpfront { unit_cost_component: Amount },
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct LagFile {
    pub modulated_fixed: Option<Amount>,
    pub modulation_month: Option<Amount>,
    pub anticipated_variable: Option<Amount>,
    #[serde(default)]
    pub anticipation: AnticipationFile,
    pub supplier_credit_months: Option<Amount>,
    pub customer_credit_months: Option<Amount>,
    pub seasonal_weights: Option<Vec<Amount>>,
    pub cycle_months: Option<Amount>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: Option<String>,
    pub cost_structure: CostStructureFile,
    pub monthly_sales: Amount,
    #[serde(default)]
    pub lags: LagFile,
}

/// A validated cost structure and lag profile.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub cost_structure: CostStructure,
    pub profile: CashLagProfile,
}

impl ScenarioFile {
    pub fn into_scenario(self, fallback_name: &str) -> Result<Scenario, CliError> {
        let c = self.cost_structure;
        let calculated = amount(c.fixed_calculated);
        let cost_structure = match c.fixed_total {
            Some(total) => CostStructure::new(total.0, c.fixed_cash.0, calculated, c.unit_price.0, c.unit_variable_cost.0),
            None => CostStructure::from_parts(c.fixed_cash.0, calculated, c.unit_price.0, c.unit_variable_cost.0),
        }?;
        let l = self.lags;
        let profile = CashLagProfile {
            modulated_fixed: amount(l.modulated_fixed),
            modulation_month: amount(l.modulation_month),
            anticipated_variable: amount(l.anticipated_variable),
            anticipation: match l.anticipation {
                AnticipationFile::WholeUnits => AnticipationCase::WholeUnits,
                AnticipationFile::SingleInputAllUpfront { unit_cost_component } => {
                    AnticipationCase::SingleInputAllUpfront {
                        unit_cost_component: unit_cost_component.0,
                    }
                }
            },
            supplier_credit_months: amount(l.supplier_credit_months),
            customer_credit_months: amount(l.customer_credit_months),
            monthly_sales: self.monthly_sales.0,
            seasonal_weights: l.seasonal_weights.map(|w| w.into_iter().map(|a| a.0).collect()),
            cycle_months: l.cycle_months.map(|a| a.0),
        };
        profile.validate(&cost_structure)?;
        Ok(Scenario {
            name: self.name.unwrap_or_else(|| fallback_name.to_string()),
            cost_structure,
            profile,
        })
    }
}

pub fn read_scenario(path: &Path) -> Result<Scenario, CliError> {
    let text = read(path)?;
    let file: ScenarioFile = serde_json::from_str(&text).map_err(|e| CliError::parse(path, e))?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scenario");
    file.into_scenario(stem)
}

#[derive(Debug, Deserialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum KindFile {
    Product,
    Input,
}

impl From<KindFile> for FlowKind {
    fn from(kind: KindFile) -> Self {
        match kind {
            KindFile::Product => FlowKind::Product,
            KindFile::Input => FlowKind::Input,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineFile {
    pub id: String,
    pub kind: KindFile,
    #[serde(default = "yes")]
    pub cash: bool,
    pub quantity: Amount,
    pub unit_value: Amount,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodFile {
    pub period: u32,
    pub result_before_tax: Amount,
    pub tax: Option<Amount>,
    pub lines: Vec<LineFile>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StockFile {
    pub period: u32,
    pub flow_id: String,
    pub stock_end: Amount,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FinancingFile {
    pub period: u32,
    pub net_investment: Option<Amount>,
    pub delta_debt: Option<Amount>,
    pub observed_delta_treasury: Option<Amount>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LedgerFile {
    pub periods: Vec<PeriodFile>,
    #[serde(default)]
    pub stocks: Vec<StockFile>,
    #[serde(default)]
    pub financing: Vec<FinancingFile>,
}

/// A validated ledger together with the investment and financing flows that
/// feed the waterfall.
#[derive(Debug, Clone)]
pub struct Ledger {
    pub ledger: ValidatedLedger,
    pub financing: Vec<FinancingFlows>,
}

impl LedgerFile {
    pub fn into_ledger(self) -> Result<Ledger, CliError> {
        let accounts: Vec<PeriodAccount> = self
            .periods
            .into_iter()
            .map(|p| PeriodAccount {
                period: p.period,
                result_before_tax: p.result_before_tax.0,
                tax: amount(p.tax),
                lines: p
                    .lines
                    .into_iter()
                    .map(|l| FlowLine {
                        id: l.id,
                        kind: l.kind.into(),
                        cash_effective: l.cash,
                        quantity: l.quantity.0,
                        unit_value: l.unit_value.0,
                    })
                    .collect(),
            })
            .collect();
        let stocks: Vec<FlowStock> = self
            .stocks
            .into_iter()
            .map(|s| FlowStock {
                period: s.period,
                flow_id: s.flow_id,
                stock_end: s.stock_end.0,
            })
            .collect();
        let financing = self
            .financing
            .into_iter()
            .map(|f| FinancingFlows {
                period: f.period,
                net_investment: amount(f.net_investment),
                delta_debt: amount(f.delta_debt),
                observed_delta_treasury: f.observed_delta_treasury.map(|a| a.0),
            })
            .collect();
        Ok(Ledger {
            ledger: validate_ledger(&accounts, &stocks)?,
            financing,
        })
    }
}

/// Reads a JSON ledger file, or a directory holding `lines.csv`,
/// `results.csv` and optionally `stocks.csv` and `financing.csv`.
pub fn read_ledger(path: &Path) -> Result<Ledger, CliError> {
    let file = if path.is_dir() {
        read_csv_ledger(path)?
    } else {
        serde_json::from_str(&read(path)?).map_err(|e| CliError::parse(path, e))?
    };
    file.into_ledger()
}

#[derive(Debug, Deserialize)]
struct LineRow {
    period: u32,
    id: String,
    kind: KindFile,
    cash: bool,
    quantity: String,
    unit_value: String,
}

#[derive(Debug, Deserialize)]
struct ResultRow {
    period: u32,
    result_before_tax: String,
    tax: Option<String>,
}

#[derive(Debug, Deserialize)]
struct StockRow {
    period: u32,
    flow_id: String,
    stock_end: String,
}

#[derive(Debug, Deserialize)]
struct FinancingRow {
    period: u32,
    net_investment: Option<String>,
    delta_debt: Option<String>,
    observed_delta_treasury: Option<String>,
}

fn csv_rows<T: for<'de> Deserialize<'de>>(path: &Path, required: bool) -> Result<Vec<T>, CliError> {
    if !required && !path.exists() {
        return Ok(Vec::new());
    }
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::parse(path, e))?;
    reader
        .deserialize()
        .collect::<Result<Vec<T>, _>>()
        .map_err(|e| CliError::parse(path, e))
}

fn cell(path: &Path, text: &str) -> Result<Amount, CliError> {
    text.parse().map(Amount).map_err(|e| CliError::parse(path, e))
}

fn optional_cell(path: &Path, text: Option<String>) -> Result<Option<Amount>, CliError> {
    match text.as_deref().map(str::trim) {
        None | Some("") => Ok(None),
        Some(t) => cell(path, t).map(Some),
    }
}

fn read_csv_ledger(dir: &Path) -> Result<LedgerFile, CliError> {
    let lines_path = dir.join("lines.csv");
    let results_path = dir.join("results.csv");
    let stocks_path = dir.join("stocks.csv");
    let financing_path = dir.join("financing.csv");

    let mut periods = Vec::new();
    for row in csv_rows::<ResultRow>(&results_path, true)? {
        periods.push(PeriodFile {
            period: row.period,
            result_before_tax: cell(&results_path, &row.result_before_tax)?,
            tax: optional_cell(&results_path, row.tax)?,
            lines: Vec::new(),
        });
    }
    for row in csv_rows::<LineRow>(&lines_path, true)? {
        let line = LineFile {
            id: row.id,
            kind: row.kind,
            cash: row.cash,
            quantity: cell(&lines_path, &row.quantity)?,
            unit_value: cell(&lines_path, &row.unit_value)?,
        };
        let period = periods
            .iter_mut()
            .find(|p| p.period == row.period)
            .ok_or_else(|| CliError::Parse(format!("{}: period {} has no result row", lines_path.display(), row.period)))?;
        period.lines.push(line);
    }
    let stocks = csv_rows::<StockRow>(&stocks_path, false)?
        .into_iter()
        .map(|row| {
            Ok(StockFile {
                period: row.period,
                flow_id: row.flow_id,
                stock_end: cell(&stocks_path, &row.stock_end)?,
            })
        })
        .collect::<Result<_, CliError>>()?;
    let financing = csv_rows::<FinancingRow>(&financing_path, false)?
        .into_iter()
        .map(|row| {
            Ok(FinancingFile {
                period: row.period,
                net_investment: optional_cell(&financing_path, row.net_investment)?,
                delta_debt: optional_cell(&financing_path, row.delta_debt)?,
                observed_delta_treasury: optional_cell(&financing_path, row.observed_delta_treasury)?,
            })
        })
        .collect::<Result<_, CliError>>()?;
    Ok(LedgerFile {
        periods,
        stocks,
        financing,
    })
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::parse(path, e))
}
