use alloc::boxed::Box;
use alloc::string::String;

use crate::money::Money;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    // Input validation.
    #[error("invalid cost structure: {0}")]
    InvalidCostStructure(&'static str),
    #[error("invalid cash lag profile: {0}")]
    InvalidLagProfile(&'static str),
    /// `gap` is products − inputs − result before tax.
    #[error("period {period}: products exceed inputs plus result by {gap}")]
    IdentityViolation { period: u32, gap: Money },
    #[error("period {period}: flow {flow_id:?} has no counterpart")]
    UnmatchedFlow { period: u32, flow_id: String },
    #[error("period {period}: flow {flow_id:?} declared twice")]
    DuplicateFlow { period: u32, flow_id: String },
    #[error("period {period}: flow {flow_id:?} has a negative quantity")]
    NegativeQuantity { period: u32, flow_id: String },
    #[error("period {period}: flow {flow_id:?} has stock/flow coefficient {coefficient} outside [0, 1]")]
    CoefficientOutOfRange {
        period: u32,
        flow_id: String,
        coefficient: Money,
    },
    #[error("period {period}: stock declared on non-cash flow {flow_id:?}")]
    StockOnNonCashFlow { period: u32, flow_id: String },
    #[error("periods must be consecutive and increasing (found {found} after {previous})")]
    NonConsecutivePeriods { previous: u32, found: u32 },
    #[error("need {needed} periods, ledger provides {available}")]
    InsufficientPeriods { needed: usize, available: usize },
    #[error("period {0} is not in the ledger")]
    UnknownPeriod(u32),

    // Domain conditions.
    #[error("unit margin {margin} is not positive")]
    NonPositiveMargin { margin: Money },
    #[error("cash never turns non-negative within the operating cycle")]
    InfeasibleCycle,
    #[error("cumulative cash never stays non-negative within the horizon")]
    NeverSolvent,
    #[error("elasticity is unbounded at the critical production (mQ = F)")]
    AtCriticalProduction,
    #[error("elasticity is unbounded at the critical margin (mQ = F)")]
    AtCriticalMargin,
    #[error("production volume must be strictly positive")]
    ZeroProduction,
    #[error("{0}")]
    InvalidArgument(&'static str),

    // Internal consistency checks; these signal an arithmetic bug.
    #[error("surplus account does not balance: {resources} vs {uses}")]
    BalanceViolation { resources: Box<Money>, uses: Box<Money> },
    #[error("cash decomposition routes disagree: {by_rows} vs {by_components}")]
    DecompositionMismatch {
        by_rows: Box<Money>,
        by_components: Box<Money>,
    },
    #[error("financing table does not reconcile: {expected} vs {found}")]
    ReconciliationFailure { expected: Box<Money>, found: Box<Money> },
}

impl Error {
    /// Rejections caused by malformed or inconsistent input data, as opposed
    /// to valid inputs for which the requested quantity does not exist.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidCostStructure(_)
                | Error::InvalidLagProfile(_)
                | Error::IdentityViolation { .. }
                | Error::UnmatchedFlow { .. }
                | Error::DuplicateFlow { .. }
                | Error::NegativeQuantity { .. }
                | Error::CoefficientOutOfRange { .. }
                | Error::StockOnNonCashFlow { .. }
                | Error::NonConsecutivePeriods { .. }
                | Error::InsufficientPeriods { .. }
                | Error::UnknownPeriod(_)
        )
    }
}
