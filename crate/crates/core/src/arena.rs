//! The n-agent pledging game.
//!
//! Each day every active agent pledges an integer amount toward the group
//! license. If the pledges sum to at least the license price the license is
//! acquired, every pledger pays what it pledged (even when the round was
//! overpledged), and the resource is free from then on. Otherwise the
//! pledges are nullified and every active agent rents for 1$.
//!
//! All supported strategies are nonadaptive — an agent's pledge on day `t`
//! depends only on `t` and its own policy, never on observed amounts — so
//! each agent resolves to a pledge stream up front and the game is a pure
//! fold over days. That is also what makes the single-agent reduction exact:
//! fix the other agents' streams, convert them to residual prices with
//! [`reduce`], and the agent's cost in the game equals its policy replayed
//! on that sequence.
//!
//! Strategies that consult an others' predictor (`KnownPrices`, `Blind`,
//! `Tradeoff`) are handed the perfect one: the realized residual sequence of
//! the remaining agents. That requires the remaining agents to be resolvable
//! on their own, so a game may contain at most one such agent.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::offline;
use crate::policies::{
    baseline_policy, blind_follow, prediction_policy, tradeoff_decide, Decision, Prediction,
    ThresholdPolicy,
};
use crate::pricecore::PriceSeq;
use crate::ratio::{parse_ratio, CompRatio, Ratio};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameConfig {
    #[serde(rename = "B")]
    pub license: i64,
    pub max_days: i64,
    pub agents: Vec<AgentSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentSpec {
    /// True number of active days.
    #[serde(rename = "T")]
    pub active_days: i64,
    /// The agent's own horizon prediction.
    #[serde(rename = "T_hat")]
    pub predicted_days: i64,
    pub strategy: Strategy,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Strategy {
    /// Rent on day 1, pledge the full license price on day 2.
    Baseline,
    /// Optimal threshold policy for the agent's own horizon prediction.
    PerfectSelf,
    /// Buy on the optimal known-price day of the predicted residual prices.
    KnownPrices,
    /// Follow the horizon prediction literally on the predicted residuals.
    Blind,
    /// The lambda tradeoff rule on the predicted residuals.
    Tradeoff { lambda: Ratio },
    /// A fixed pledge per day, padded with zeroes.
    FixedScript(Vec<i64>),
}

impl Strategy {
    /// True when the strategy consults a predictor of the other agents.
    pub fn needs_others_predictor(&self) -> bool {
        matches!(
            self,
            Strategy::KnownPrices | Strategy::Blind | Strategy::Tradeoff { .. }
        )
    }

    fn kind(&self) -> &'static str {
        match self {
            Strategy::Baseline => "baseline",
            Strategy::PerfectSelf => "perfect_self",
            Strategy::KnownPrices => "known_prices",
            Strategy::Blind => "blind",
            Strategy::Tradeoff { .. } => "tradeoff",
            Strategy::FixedScript(_) => "fixed_script",
        }
    }
}

#[derive(Serialize, Deserialize)]
struct StrategyRepr {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    script: Option<Vec<i64>>,
}

impl Serialize for Strategy {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = StrategyRepr {
            kind: self.kind().to_string(),
            lambda: match self {
                Strategy::Tradeoff { lambda } => Some(lambda.to_string()),
                _ => None,
            },
            script: match self {
                Strategy::FixedScript(script) => Some(script.clone()),
                _ => None,
            },
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Strategy {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = StrategyRepr::deserialize(deserializer)?;
        let strategy = match repr.kind.as_str() {
            "baseline" => Strategy::Baseline,
            "perfect_self" => Strategy::PerfectSelf,
            "known_prices" => Strategy::KnownPrices,
            "blind" => Strategy::Blind,
            "tradeoff" => {
                let text = repr.lambda.ok_or(Error::MissingStrategyField {
                    kind: repr.kind.clone(),
                    field: "lambda",
                });
                let text = text.map_err(serde::de::Error::custom)?;
                let lambda = parse_ratio(&text).map_err(serde::de::Error::custom)?;
                Strategy::Tradeoff { lambda }
            }
            "fixed_script" => {
                let script = repr.script.ok_or(Error::MissingStrategyField {
                    kind: repr.kind.clone(),
                    field: "script",
                });
                Strategy::FixedScript(script.map_err(serde::de::Error::custom)?)
            }
            other => {
                return Err(serde::de::Error::custom(Error::UnknownStrategy(
                    other.to_string(),
                )))
            }
        };
        Ok(strategy)
    }
}

/// Residual prices an agent faces given the other agents' daily pledge
/// totals: `price(t) = max(0, license - total(t))`, truncated at the first
/// free day.
pub fn reduce(others_daily_pledges: &[i64], license: i64) -> Result<PriceSeq> {
    if license < 2 {
        return Err(Error::LicensePriceTooSmall(license));
    }
    if others_daily_pledges.is_empty() {
        return Err(Error::EmptyPriceSeq);
    }
    let mut prices = Vec::with_capacity(others_daily_pledges.len());
    for (idx, &total) in others_daily_pledges.iter().enumerate() {
        if total < 0 {
            return Err(Error::NegativePledgeTotal { day: idx as i64 + 1, total });
        }
        let residual = (license - total).max(0);
        prices.push(residual);
        if residual == 0 {
            break;
        }
    }
    PriceSeq::new(license, prices)
}

/// Pledge of a committed buy plan on a given day: the predicted residual on
/// the planned day, nothing otherwise.
pub fn rational_pledge(predicted_prices: &PriceSeq, decision: &Decision, day: i64) -> i64 {
    match decision {
        Decision::BuyOn(buy_day) if *buy_day == day => {
            predicted_prices.price(day).unwrap_or(0)
        }
        _ => 0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgentOutcome {
    pub total_cost: i64,
    pub offline_opt: i64,
    pub ratio: CompRatio,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GameOutcome {
    /// Day the license was acquired, if ever.
    pub license_day: Option<i64>,
    pub per_agent: Vec<AgentOutcome>,
}

/// Runs the pledging game: resolves every agent to a pledge stream, folds
/// over days until the pledges cover the license, and scores each agent
/// against the offline optimum of its own residual sequence.
pub fn run_game(config: &GameConfig) -> Result<GameOutcome> {
    validate(config)?;
    let streams = resolve_streams(config)?;
    let n = config.agents.len();
    let days = config.max_days;

    let mut costs = vec![0i64; n];
    let mut license_day = None;
    for day in 1..=days {
        let active: Vec<usize> = (0..n)
            .filter(|&i| config.agents[i].active_days >= day)
            .collect();
        let total: i64 = active.iter().map(|&i| streams[i][day as usize - 1]).sum();
        if total >= config.license {
            for &i in &active {
                costs[i] += streams[i][day as usize - 1];
            }
            license_day = Some(day);
            break;
        }
        for &i in &active {
            costs[i] += 1;
        }
    }

    let mut per_agent = Vec::with_capacity(n);
    for i in 0..n {
        let residual = reduce(&others_totals(&streams, i, days), config.license)?;
        let offline_opt = offline::opt_cost(&residual, config.agents[i].active_days)?;
        per_agent.push(AgentOutcome {
            total_cost: costs[i],
            offline_opt,
            ratio: CompRatio::of_costs(costs[i], offline_opt),
        });
    }
    Ok(GameOutcome { license_day, per_agent })
}

/// The residual price sequence one agent faces in a configured game.
pub fn reduced_view(config: &GameConfig, agent: usize) -> Result<PriceSeq> {
    validate(config)?;
    let streams = resolve_streams(config)?;
    reduce(&others_totals(&streams, agent, config.max_days), config.license)
}

fn validate(config: &GameConfig) -> Result<()> {
    if config.license < 2 {
        return Err(Error::LicensePriceTooSmall(config.license));
    }
    if config.max_days < 1 {
        return Err(Error::HorizonOutOfRange(config.max_days));
    }
    if config.agents.is_empty() {
        return Err(Error::NoAgents);
    }
    for (i, agent) in config.agents.iter().enumerate() {
        if agent.active_days < 1 {
            return Err(Error::AgentFieldOutOfRange {
                agent: i,
                field: "T",
                value: agent.active_days,
            });
        }
        if agent.active_days > config.max_days {
            return Err(Error::ActiveBeyondHorizon {
                agent: i,
                active_days: agent.active_days,
                max_days: config.max_days,
            });
        }
    }
    Ok(())
}

fn others_totals(streams: &[Vec<i64>], agent: usize, days: i64) -> Vec<i64> {
    (0..days as usize)
        .map(|d| {
            streams
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != agent)
                .map(|(_, s)| s[d])
                .sum()
        })
        .collect()
}

/// Materializes each agent's pledge stream over the full horizon. Streams
/// are hypothetical past the license day — nonadaptive strategies make them
/// well defined — which is exactly what the per-agent reduction needs.
fn resolve_streams(config: &GameConfig) -> Result<Vec<Vec<i64>>> {
    let days = config.max_days as usize;
    let n = config.agents.len();

    let predictor_agents: Vec<usize> = (0..n)
        .filter(|&i| config.agents[i].strategy.needs_others_predictor())
        .collect();
    if predictor_agents.len() >= 2 {
        return Err(Error::CircularPrediction {
            first: predictor_agents[0],
            second: predictor_agents[1],
        });
    }

    let mut streams: Vec<Option<Vec<i64>>> = vec![None; n];
    for (i, agent) in config.agents.iter().enumerate() {
        let prediction = Prediction::new(agent.predicted_days);
        let stream = match &agent.strategy {
            Strategy::Baseline => {
                threshold_stream(&baseline_policy(config.license)?, agent.active_days, days)
            }
            Strategy::PerfectSelf => threshold_stream(
                &prediction_policy(prediction, config.license)?,
                agent.active_days,
                days,
            ),
            Strategy::FixedScript(script) => {
                let mut stream = vec![0i64; days];
                for (d, &pledge) in script.iter().take(days).enumerate() {
                    if pledge < 0 || pledge > config.license {
                        return Err(Error::ProtocolViolation {
                            agent: i,
                            pledge,
                            license: config.license,
                        });
                    }
                    if (d as i64) < agent.active_days {
                        stream[d] = pledge;
                    }
                }
                stream
            }
            _ => continue,
        };
        streams[i] = Some(stream);
    }

    if let Some(&i) = predictor_agents.first() {
        let agent = &config.agents[i];
        let others: Vec<i64> = (0..days)
            .map(|d| {
                streams
                    .iter()
                    .flatten()
                    .map(|s| s[d])
                    .sum()
            })
            .collect();
        let predicted_prices = reduce(&others, config.license)?;
        let prediction = Prediction::new(agent.predicted_days);
        let decision = match &agent.strategy {
            Strategy::KnownPrices => {
                let (_, optimal_days) = offline::optimal_ratio_with_days(&predicted_prices)?;
                Decision::BuyOn(optimal_days[0])
            }
            Strategy::Blind => blind_follow(&predicted_prices, prediction),
            Strategy::Tradeoff { lambda } => {
                tradeoff_decide(&predicted_prices, prediction, *lambda)?
            }
            _ => unreachable!("only predictor strategies reach here"),
        };
        let mut stream = vec![0i64; days];
        if let Decision::BuyOn(day) = decision {
            if day <= agent.active_days && day <= days as i64 {
                stream[day as usize - 1] = rational_pledge(&predicted_prices, &decision, day);
            }
        }
        streams[i] = Some(stream);
    }

    Ok(streams.into_iter().map(|s| s.expect("all agents resolved")).collect())
}

fn threshold_stream(policy: &ThresholdPolicy, active_days: i64, days: usize) -> Vec<i64> {
    (1..=days as i64)
        .map(|day| if day <= active_days { policy.threshold(day) } else { 0 })
        .collect()
}
