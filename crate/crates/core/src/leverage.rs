//! Treasury leverage: elasticity of virtual treasury `T = mQ - F`.
//!
//! The same formulas serve two bases. With `F` the total fixed charges they
//! measure term liquidity (the operating leverage); with `F` the cash fixed
//! charges only they measure immediate liquidity.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::CostStructure;
use crate::money::{Fraction, Money, Quantity};

/// Which fixed charges play the role of `F`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LeverageBasis {
    /// All structural charges, calculated ones included.
    #[default]
    Term,
    /// Cash fixed charges only.
    Immediate,
}

impl LeverageBasis {
    pub fn fixed_charges<'a>(&self, cs: &'a CostStructure) -> &'a Money {
        match self {
            LeverageBasis::Term => cs.fixed_total(),
            LeverageBasis::Immediate => cs.fixed_cash(),
        }
    }
}

/// `mQ - F`.
pub fn virtual_treasury(margin: &Money, volume: &Quantity, fixed: &Money) -> Money {
    margin * volume - fixed
}

/// A fixed-charge level together with a unit margin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreasuryLeverage {
    pub fixed: Money,
    pub margin: Money,
}

impl TreasuryLeverage {
    pub fn new(fixed: Money, margin: Money) -> Self {
        TreasuryLeverage { fixed, margin }
    }

    pub fn from_cost_structure(cs: &CostStructure, basis: LeverageBasis) -> Self {
        TreasuryLeverage {
            fixed: basis.fixed_charges(cs).clone(),
            margin: cs.unit_margin(),
        }
    }

    pub fn virtual_treasury(&self, volume: &Quantity) -> Money {
        virtual_treasury(&self.margin, volume, &self.fixed)
    }

    /// `E(T/Q) = mQ / (mQ - F)`.
    pub fn elasticity_wrt_volume(&self, volume: &Quantity) -> Result<Fraction> {
        if volume.is_negative() {
            return Err(Error::InvalidArgument("volume must be non-negative"));
        }
        self.require_positive_margin()?;
        let contribution = &self.margin * volume;
        let treasury = &contribution - &self.fixed;
        contribution
            .checked_div(&treasury)
            .ok_or(Error::AtCriticalProduction)
    }

    /// `E(T/m) = m / (m - F/Q)` at the given margin, which may differ from
    /// `self.margin`.
    pub fn elasticity_wrt_margin(&self, margin: &Money, volume: &Quantity) -> Result<Fraction> {
        if !margin.is_positive() {
            return Err(Error::NonPositiveMargin {
                margin: margin.clone(),
            });
        }
        if !volume.is_positive() {
            return Err(Error::ZeroProduction);
        }
        let critical = &self.fixed / volume;
        margin
            .checked_div(&(margin - &critical))
            .ok_or(Error::AtCriticalMargin)
    }

    /// `Q* = F / m`, the volume where virtual treasury is zero.
    pub fn critical_production(&self) -> Result<Quantity> {
        self.require_positive_margin()?;
        Ok(&self.fixed / &self.margin)
    }

    /// `m* = F / Q`, the margin where virtual treasury is zero at `volume`.
    pub fn critical_margin(&self, volume: &Quantity) -> Result<Money> {
        if !volume.is_positive() {
            return Err(Error::ZeroProduction);
        }
        Ok(&self.fixed / volume)
    }

    fn require_positive_margin(&self) -> Result<()> {
        if self.margin.is_positive() {
            Ok(())
        } else {
            Err(Error::NonPositiveMargin {
                margin: self.margin.clone(),
            })
        }
    }
}

pub fn elasticity_wrt_volume(cs: &CostStructure, basis: LeverageBasis, volume: &Quantity) -> Result<Fraction> {
    TreasuryLeverage::from_cost_structure(cs, basis).elasticity_wrt_volume(volume)
}

pub fn elasticity_wrt_margin(
    cs: &CostStructure,
    basis: LeverageBasis,
    margin: &Money,
    volume: &Quantity,
) -> Result<Fraction> {
    TreasuryLeverage::from_cost_structure(cs, basis).elasticity_wrt_margin(margin, volume)
}

pub fn critical_production(cs: &CostStructure, basis: LeverageBasis) -> Result<Quantity> {
    TreasuryLeverage::from_cost_structure(cs, basis).critical_production()
}

pub fn critical_margin(cs: &CostStructure, basis: LeverageBasis, volume: &Quantity) -> Result<Money> {
    TreasuryLeverage::from_cost_structure(cs, basis).critical_margin(volume)
}

/// The four liquidity-rupture indicators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuptureMatrix {
    /// Immediate liquidity threshold, cash fixed charges over margin.
    pub q_immediate: Quantity,
    /// Term liquidity threshold (the break-even point).
    pub q_term: Quantity,
    /// Immediate critical margin at the given volume.
    pub m_immediate: Money,
    /// Term critical margin at the given volume.
    pub m_term: Money,
}

pub fn rupture_matrix(cs: &CostStructure, volume: &Quantity, margin: &Money) -> Result<RuptureMatrix> {
    if !margin.is_positive() {
        return Err(Error::NonPositiveMargin {
            margin: margin.clone(),
        });
    }
    if !volume.is_positive() {
        return Err(Error::ZeroProduction);
    }
    let term = TreasuryLeverage::new(cs.fixed_total().clone(), margin.clone());
    let immediate = TreasuryLeverage::new(cs.fixed_cash().clone(), margin.clone());
    Ok(RuptureMatrix {
        q_immediate: immediate.critical_production()?,
        q_term: term.critical_production()?,
        m_immediate: immediate.critical_margin(volume)?,
        m_term: term.critical_margin(volume)?,
    })
}

/// Points `(Q, m)` with `m * Q = fixed`, one per grid volume.
pub fn indifference_curve(fixed: &Money, grid: &[Quantity]) -> Result<Vec<(Quantity, Money)>> {
    if fixed.is_negative() {
        return Err(Error::InvalidArgument("fixed charges must be non-negative"));
    }
    grid.iter()
        .map(|q| {
            if !q.is_positive() {
                return Err(Error::ZeroProduction);
            }
            Ok((q.clone(), fixed / q))
        })
        .collect()
}

/// Log-spaced grid over `[low, high]`, `per_decade` points per decade.
///
/// Points are rounded to six significant digits so they stay short exact
/// decimals. Points within a relative 1e-9 of `pole` are dropped.
pub fn log_grid(low: &Money, high: &Money, per_decade: u32, pole: Option<&Money>) -> Result<Vec<Money>> {
    if !low.is_positive() || high < low || per_decade == 0 {
        return Err(Error::InvalidArgument("log grid needs 0 < low <= high"));
    }
    let (lo, hi) = (low.to_f64(), high.to_f64());
    let decades = libm::log10(hi / lo);
    let steps = libm::ceil(decades * f64::from(per_decade)) as u32;
    let mut points = Vec::with_capacity(steps as usize + 1);
    for i in 0..=steps {
        let x = lo * libm::pow(10.0, f64::from(i) / f64::from(per_decade));
        let Some(x) = round_significant(x, 6) else { continue };
        if &x < low || &x > high {
            continue;
        }
        points.push(x);
    }
    points.push(low.clone());
    points.push(high.clone());
    Ok(finish_grid(points, pole))
}

fn round_significant(x: f64, digits: i32) -> Option<Money> {
    if !x.is_finite() || x <= 0.0 {
        return None;
    }
    let exponent = libm::floor(libm::log10(x)) as i32;
    let shift = digits - 1 - exponent;
    let scaled = libm::round(x * libm::pow(10.0, f64::from(shift)));
    let mantissa = Money::from_f64(scaled)?;
    let ten = Money::from_int(10);
    let mut factor = Money::one();
    for _ in 0..shift.unsigned_abs() {
        factor = factor * &ten;
    }
    Some(if shift >= 0 { mantissa / factor } else { mantissa * factor })
}

fn finish_grid(mut points: Vec<Money>, pole: Option<&Money>) -> Vec<Money> {
    points.sort();
    points.dedup();
    if let Some(pole) = pole {
        let tolerance = pole.abs() / Money::from_int(1_000_000_000);
        points.retain(|x| (x - pole).abs() > tolerance);
    }
    points
}

/// Abscissae of the printed elasticity tables, as multiples of the critical
/// point: 1/2, 2/3, 2 and 3.
pub fn tabulated_multiples() -> [Fraction; 4] {
    [
        Money::from_ratio(1, 2).unwrap(),
        Money::from_ratio(2, 3).unwrap(),
        Money::from_int(2),
        Money::from_int(3),
    ]
}

/// Default grid around a critical point: 200 points per decade over
/// `[0.1, 4]` times the critical point, plus the tabulated multiples, with
/// the pole itself excluded.
pub fn default_grid(critical: &Money) -> Result<Vec<Money>> {
    if !critical.is_positive() {
        return Err(Error::InvalidArgument("default grid needs a positive critical point"));
    }
    let low = critical / Money::from_int(10);
    let high = critical * Money::from_int(4);
    let mut points = log_grid(&low, &high, 200, Some(critical))?;
    points.extend(tabulated_multiples().iter().map(|k| k * critical));
    Ok(finish_grid(points, Some(critical)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveRequest {
    pub leverage: TreasuryLeverage,
    /// Volume at which the margin elasticity curve is drawn.
    pub volume: Quantity,
    pub volume_grid: Option<Vec<Quantity>>,
    pub margin_grid: Option<Vec<Money>>,
    /// Fixed-charge levels for the indifference curves.
    pub indifference_levels: Vec<Money>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndifferenceCurve {
    pub fixed: Money,
    pub points: Vec<(Quantity, Money)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveData {
    /// `(Q, E(T/Q))`.
    pub volume_elasticity: Vec<(Quantity, Fraction)>,
    /// `(m, E(T/m))` at the requested volume.
    pub margin_elasticity: Vec<(Money, Fraction)>,
    pub indifference: Vec<IndifferenceCurve>,
}

/// Tabulates both elasticity curves and the indifference curves. Grid points
/// sitting exactly on a pole are skipped.
pub fn curve_data(request: &CurveRequest) -> Result<CurveData> {
    let lev = &request.leverage;
    let volume_grid = match &request.volume_grid {
        Some(grid) => grid.clone(),
        None => default_grid(&lev.critical_production()?)?,
    };
    let margin_grid = match &request.margin_grid {
        Some(grid) => grid.clone(),
        None => default_grid(&lev.critical_margin(&request.volume)?)?,
    };
    let mut volume_elasticity = Vec::with_capacity(volume_grid.len());
    for q in &volume_grid {
        match lev.elasticity_wrt_volume(q) {
            Ok(e) => volume_elasticity.push((q.clone(), e)),
            Err(Error::AtCriticalProduction) => {}
            Err(other) => return Err(other),
        }
    }
    let mut margin_elasticity = Vec::with_capacity(margin_grid.len());
    for m in &margin_grid {
        match lev.elasticity_wrt_margin(m, &request.volume) {
            Ok(e) => margin_elasticity.push((m.clone(), e)),
            Err(Error::AtCriticalMargin) => {}
            Err(other) => return Err(other),
        }
    }
    let positive_volumes: Vec<Quantity> = volume_grid.iter().filter(|q| q.is_positive()).cloned().collect();
    let indifference = request
        .indifference_levels
        .iter()
        .map(|fixed| {
            Ok(IndifferenceCurve {
                fixed: fixed.clone(),
                points: indifference_curve(fixed, &positive_volumes)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CurveData {
        volume_elasticity,
        margin_elasticity,
        indifference,
    })
}
