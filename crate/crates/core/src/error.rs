//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("license price must be an integer >= 2, got {0}")]
    LicensePriceTooSmall(i64),

    #[error("price sequence must contain at least one day")]
    EmptyPriceSeq,

    #[error("price {price} on day {day} is outside [0, {license}]")]
    PriceOutOfRange { day: i64, price: i64, license: i64 },

    #[error("day {day} is free but not terminal: the sequence must be truncated at its first free day")]
    FreeDayNotTerminal { day: i64 },

    #[error(
        "sequence of length {len} is incomplete: it must either end on a free day or span at least {required} days"
    )]
    IncompleteSequence { len: i64, required: i64 },

    #[error("day {day} is out of range 1..={max}")]
    DayOutOfRange { day: i64, max: i64 },

    #[error("threshold {value} on day {day} is outside [0, {license}]")]
    ThresholdOutOfRange { day: i64, value: i64, license: i64 },

    #[error("lambda must lie in (0, 1], got {0}")]
    LambdaOutOfRange(String),

    #[error("the wait rule applies to this sequence: acting on day {day} is already optimal")]
    WaitRuleApplies { day: i64 },

    #[error("early buy day {early} exceeds the optimal known-price buy day {best}")]
    EarlyDayTooLate { early: i64, best: i64 },

    #[error("search space of {needed} cells exceeds the configured cap of {cap}")]
    SearchSpaceExceeded { needed: u64, cap: u64 },

    #[error("horizon {horizon} is too small for this search: need at least {required}")]
    HorizonTooSmall { horizon: i64, required: i64 },

    #[error("agent {agent} pledged {pledge}, outside [0, {license}]")]
    ProtocolViolation { agent: usize, pledge: i64, license: i64 },

    #[error("agents {first} and {second} both predict the other agents' pledges; such predictions are circular")]
    CircularPrediction { first: usize, second: usize },

    #[error("agent {agent}: active days {active_days} exceed the game horizon {max_days}")]
    ActiveBeyondHorizon { agent: usize, active_days: i64, max_days: i64 },

    #[error("agent {agent}: {field} must be at least 1, got {value}")]
    AgentFieldOutOfRange { agent: usize, field: &'static str, value: i64 },

    #[error("game needs at least one agent")]
    NoAgents,

    #[error("game horizon must be at least 1, got {0}")]
    HorizonOutOfRange(i64),

    #[error("daily pledge total on day {day} is negative: {total}")]
    NegativePledgeTotal { day: i64, total: i64 },

    #[error("unknown strategy kind {0:?}")]
    UnknownStrategy(String),

    #[error("strategy {kind:?} requires field {field:?}")]
    MissingStrategyField { kind: String, field: &'static str },

    #[error("cannot parse {0:?} as an exact rational")]
    BadRatio(String),

    #[error("invalid sweep configuration: {0}")]
    BadSweepConfig(String),

    #[error(
        "sample violated its own robustness bound (ratio {ratio} > bound {bound}); this indicates an implementation bug"
    )]
    BoundViolation { ratio: String, bound: String },
}
