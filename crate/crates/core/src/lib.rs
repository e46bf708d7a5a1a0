//! Multiagent ski rental with two predictors.
//!
//! A group of agents shares a resource: each active day an agent either rents
//! for 1$ or the agents jointly buy a group license for `B`$ by pledging
//! toward it. From one agent's perspective the game reduces to ski rental
//! with *varying prices*: the price it faces on day `t` is whatever the other
//! agents left unpledged. This crate implements
//!
//! * [`pricecore`] — residual price sequences and every scalar derived from
//!   them (total buy costs, running minima, the optimal deterministic
//!   competitive ratio, exact rational arithmetic throughout);
//! * [`offline`] — clairvoyant baselines: the offline optimum and the best
//!   possible deterministic ratio when prices are known in advance;
//! * [`policies`] — online algorithms: threshold policies for adversarial
//!   prices, the predictor-following rule, and the lambda-parameterized
//!   algorithm trading consistency for robustness;
//! * [`oracle`] — independent brute force: exhaustive adversaries, exhaustive
//!   policy enumeration, and full sweeps certifying every closed-form ratio
//!   at small scale;
//! * [`arena`] — the n-agent pledging game and its reduction to the
//!   single-agent problem;
//! * [`bench`] — reproducible Monte-Carlo noise sweeps with CSV output.
//!
//! Competitive ratios are exact `i64` rationals; floats appear only in the
//! benchmark aggregation.

pub mod arena;
pub mod bench;
pub mod error;
pub mod offline;
pub mod oracle;
pub mod policies;
pub mod pricecore;
pub mod ratio;
pub mod rng;

pub use error::Error;
pub use pricecore::{PriceSeq, SeqStats, WaitRule};
pub use ratio::{CompRatio, Ratio};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
