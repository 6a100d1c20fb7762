//! Domain types shared by every engine.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::money::{Fraction, Money, Quantity};

/// Single-product cost structure.
///
/// `fixed_total` covers every structural charge; it splits into the part that
/// is paid out in cash (`fixed_cash`) and calculated charges such as
/// depreciation that never leave the till (`fixed_calculated`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostStructure {
    fixed_total: Money,
    fixed_cash: Money,
    fixed_calculated: Money,
    unit_price: Money,
    unit_variable_cost: Money,
}

impl CostStructure {
    pub fn new(
        fixed_total: Money,
        fixed_cash: Money,
        fixed_calculated: Money,
        unit_price: Money,
        unit_variable_cost: Money,
    ) -> Result<Self> {
        if fixed_cash.is_negative() || fixed_calculated.is_negative() {
            return Err(Error::InvalidCostStructure("fixed charges must be non-negative"));
        }
        if &fixed_cash + &fixed_calculated != fixed_total {
            return Err(Error::InvalidCostStructure(
                "fixed_cash + fixed_calculated must equal fixed_total",
            ));
        }
        if unit_price.is_negative() || unit_variable_cost.is_negative() {
            return Err(Error::InvalidCostStructure("unit price and unit cost must be non-negative"));
        }
        Ok(CostStructure {
            fixed_total,
            fixed_cash,
            fixed_calculated,
            unit_price,
            unit_variable_cost,
        })
    }

    /// Builds the structure from its cash and calculated fixed parts.
    pub fn from_parts(
        fixed_cash: Money,
        fixed_calculated: Money,
        unit_price: Money,
        unit_variable_cost: Money,
    ) -> Result<Self> {
        let total = &fixed_cash + &fixed_calculated;
        Self::new(total, fixed_cash, fixed_calculated, unit_price, unit_variable_cost)
    }

    pub fn fixed_total(&self) -> &Money {
        &self.fixed_total
    }

    pub fn fixed_cash(&self) -> &Money {
        &self.fixed_cash
    }

    pub fn fixed_calculated(&self) -> &Money {
        &self.fixed_calculated
    }

    pub fn unit_price(&self) -> &Money {
        &self.unit_price
    }

    pub fn unit_variable_cost(&self) -> &Money {
        &self.unit_variable_cost
    }

    /// Unit contribution margin `p - v`. May be zero or negative.
    pub fn unit_margin(&self) -> Money {
        &self.unit_price - &self.unit_variable_cost
    }
}

/// How anticipated variable costs (input stocks bought before the cycle)
/// enter the threshold.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum AnticipationCase {
    /// A standing stock covering the full variable cost of the first units.
    /// The stock is replenished as units sell, so the unit margin is unchanged
    /// and the anticipated amount acts as an extra upfront charge.
    #[default]
    WholeUnits,
    /// The entire requirement of one input is bought upfront. Later sales no
    /// longer disburse that component, so it leaves the per-unit cash cost.
    SingleInputAllUpfront { unit_cost_component: Money },
}

/// Timing of the operating cash flows relative to the operating flows.
///
/// Durations are in months and may be fractional. Time zero is the start of
/// the cycle; steady sales run at `monthly_sales` units per month from there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CashLagProfile {
    /// Part of the cash fixed charges whose payment is pushed back.
    pub modulated_fixed: Money,
    /// When the modulated fixed charges are paid, in months from the start.
    pub modulation_month: Money,
    /// Variable costs paid before the cycle starts.
    pub anticipated_variable: Money,
    pub anticipation: AnticipationCase,
    pub supplier_credit_months: Money,
    pub customer_credit_months: Money,
    pub monthly_sales: Quantity,
    /// Twelve non-negative monthly weights; normalized before use.
    pub seasonal_weights: Option<Vec<Money>>,
    /// Length of the production and sales cycle, when bounded.
    pub cycle_months: Option<Money>,
}

impl Default for CashLagProfile {
    fn default() -> Self {
        CashLagProfile {
            modulated_fixed: Money::zero(),
            modulation_month: Money::zero(),
            anticipated_variable: Money::zero(),
            anticipation: AnticipationCase::WholeUnits,
            supplier_credit_months: Money::zero(),
            customer_credit_months: Money::zero(),
            monthly_sales: Money::zero(),
            seasonal_weights: None,
            cycle_months: None,
        }
    }
}

impl CashLagProfile {
    /// Profile with no timing effect at all, selling `monthly_sales` per month.
    pub fn steady(monthly_sales: Quantity) -> Self {
        CashLagProfile {
            monthly_sales,
            ..Default::default()
        }
    }

    pub fn validate(&self, cs: &CostStructure) -> Result<()> {
        if self.modulated_fixed.is_negative() || &self.modulated_fixed > cs.fixed_cash() {
            return Err(Error::InvalidLagProfile(
                "modulated fixed charges must lie between 0 and the cash fixed charges",
            ));
        }
        if self.modulation_month.is_negative() {
            return Err(Error::InvalidLagProfile("modulation month must be non-negative"));
        }
        if self.anticipated_variable.is_negative() {
            return Err(Error::InvalidLagProfile("anticipated variable costs must be non-negative"));
        }
        if let AnticipationCase::SingleInputAllUpfront { unit_cost_component } = &self.anticipation {
            if unit_cost_component.is_negative() || unit_cost_component > cs.unit_variable_cost() {
                return Err(Error::InvalidLagProfile(
                    "anticipated unit component must lie between 0 and the unit variable cost",
                ));
            }
        }
        if self.supplier_credit_months.is_negative() || self.customer_credit_months.is_negative() {
            return Err(Error::InvalidLagProfile("credit durations must be non-negative"));
        }
        if self.monthly_sales.is_negative() {
            return Err(Error::InvalidLagProfile("monthly sales must be non-negative"));
        }
        if let Some(weights) = &self.seasonal_weights {
            if weights.len() != 12 {
                return Err(Error::InvalidLagProfile("seasonal weights need exactly 12 entries"));
            }
            if weights.iter().any(Money::is_negative) {
                return Err(Error::InvalidLagProfile("seasonal weights must be non-negative"));
            }
            if !weights.iter().sum::<Money>().is_positive() {
                return Err(Error::InvalidLagProfile("seasonal weights must not all be zero"));
            }
        }
        if let Some(cycle) = &self.cycle_months {
            if !cycle.is_positive() {
                return Err(Error::InvalidLagProfile("cycle length must be positive"));
            }
        }
        Ok(())
    }

    /// Weights scaled to sum to exactly one.
    pub fn normalized_weights(&self) -> Option<Vec<Fraction>> {
        let weights = self.seasonal_weights.as_ref()?;
        let total: Money = weights.iter().sum();
        Some(weights.iter().map(|w| w / &total).collect())
    }

    /// True when no adjustment separates cash flows from operating flows.
    pub fn is_lag_free(&self) -> bool {
        self.modulated_fixed.is_zero()
            && self.anticipated_variable.is_zero()
            && self.supplier_credit_months.is_zero()
            && self.customer_credit_months.is_zero()
    }

    /// Variable cost still paid per unit sold once the anticipated component
    /// has been bought upfront.
    pub fn disbursed_unit_variable_cost(&self, cs: &CostStructure) -> Money {
        match &self.anticipation {
            AnticipationCase::WholeUnits => cs.unit_variable_cost().clone(),
            AnticipationCase::SingleInputAllUpfront { unit_cost_component } => {
                cs.unit_variable_cost() - unit_cost_component
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FlowKind {
    Product,
    Input,
}

/// One product or input flow of a period, as quantity times unit value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowLine {
    pub id: String,
    pub kind: FlowKind,
    /// False for calculated charges (depreciation, provisions) and other
    /// flows that never become cash.
    pub cash_effective: bool,
    pub quantity: Quantity,
    pub unit_value: Money,
}

impl FlowLine {
    pub fn new(
        id: impl Into<String>,
        kind: FlowKind,
        cash_effective: bool,
        quantity: Quantity,
        unit_value: Money,
    ) -> Self {
        FlowLine {
            id: id.into(),
            kind,
            cash_effective,
            quantity,
            unit_value,
        }
    }

    pub fn value(&self) -> Money {
        &self.quantity * &self.unit_value
    }
}

/// Production account of one period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodAccount {
    pub period: u32,
    pub lines: Vec<FlowLine>,
    pub result_before_tax: Money,
    pub tax: Money,
}

impl PeriodAccount {
    pub fn products_value(&self) -> Money {
        self.value_of(FlowKind::Product, |_| true)
    }

    pub fn inputs_value(&self) -> Money {
        self.value_of(FlowKind::Input, |_| true)
    }

    pub fn result_after_tax(&self) -> Money {
        &self.result_before_tax - &self.tax
    }

    /// Calculated charges net of non-cash products.
    pub fn non_cash_charges(&self) -> Money {
        self.value_of(FlowKind::Input, |l| !l.cash_effective)
            - self.value_of(FlowKind::Product, |l| !l.cash_effective)
    }

    /// Self-financing capacity before tax: result plus non-cash charges.
    pub fn caf_before_tax(&self) -> Money {
        &self.result_before_tax + self.non_cash_charges()
    }

    /// Self-financing capacity after tax.
    pub fn caf(&self) -> Money {
        self.result_after_tax() + self.non_cash_charges()
    }

    pub fn line(&self, id: &str) -> Option<&FlowLine> {
        self.lines.iter().find(|l| l.id == id)
    }

    pub fn check_identity(&self) -> Result<()> {
        let products = self.products_value();
        let inputs = self.inputs_value();
        if products != &inputs + &self.result_before_tax {
            return Err(Error::IdentityViolation {
                period: self.period,
                gap: products - inputs - &self.result_before_tax,
            });
        }
        Ok(())
    }

    fn value_of(&self, kind: FlowKind, keep: impl Fn(&FlowLine) -> bool) -> Money {
        self.lines
            .iter()
            .filter(|l| l.kind == kind && keep(l))
            .map(FlowLine::value)
            .sum()
    }
}

/// Value of a flow still immobilized at the end of a period (receivable for a
/// product, payable for an input).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowStock {
    pub period: u32,
    pub flow_id: String,
    pub stock_end: Money,
}
