//! Online algorithms for the single-agent reduction.
//!
//! Two families live here. Threshold policies cover the adversarial-price
//! setting: on day `i` the agent pledges `theta_i`; the license is acquired
//! exactly when the residual price satisfies `price(i) <= theta_i`, and the
//! agent then pays its pledge (not the residual — pledged sums are paid as
//! committed, even when the others already covered the license). Decision
//! rules cover the known-price setting: commit to buying on one day, or rent
//! forever.
//!
//! The lambda-parameterized tradeoff rule interpolates between the optimal
//! known-price buy day (`lambda = 1`) and the cheapest possible buy day
//! (`lambda` near 0), hedging against a wrong horizon prediction at a
//! bounded cost in consistency.

use num_traits::One;
use serde::Serialize;

use crate::error::Error;
use crate::offline::{self, OptProfile};
use crate::pricecore::{PriceSeq, SeqStats};
use crate::ratio::{ceil_to_int, validate_lambda, CompRatio, Ratio};
use crate::Result;

/// Per-day pledge caps: on day `i` the agent pledges `threshold(i)`. Days
/// beyond the explicit list pledge nothing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThresholdPolicy {
    thetas: Vec<i64>,
}

impl ThresholdPolicy {
    pub fn new(thetas: Vec<i64>, license: i64) -> Result<Self> {
        for (idx, &value) in thetas.iter().enumerate() {
            if value < 0 || value > license {
                return Err(Error::ThresholdOutOfRange {
                    day: idx as i64 + 1,
                    value,
                    license,
                });
            }
        }
        Ok(ThresholdPolicy { thetas })
    }

    pub fn threshold(&self, day: i64) -> i64 {
        if day >= 1 && day <= self.thetas.len() as i64 {
            self.thetas[day as usize - 1]
        } else {
            0
        }
    }

    pub fn thresholds(&self) -> &[i64] {
        &self.thetas
    }

    /// True if some day pledges the full license price, which forces a buy
    /// no matter what prices the adversary picks.
    pub fn ever_pledges_license(&self, license: i64) -> bool {
        self.thetas.iter().any(|&t| t == license)
    }
}

/// The optimal policy without any predictions: rent on day 1, pledge the
/// full license price on day 2. Its worst-case ratio is `license + 1`.
pub fn baseline_policy(license: i64) -> Result<ThresholdPolicy> {
    if license < 2 {
        return Err(Error::LicensePriceTooSmall(license));
    }
    ThresholdPolicy::new(vec![0, license], license)
}

/// A prediction of the agent's own active time, clamped to at least one day.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Prediction {
    days: i64,
}

impl Prediction {
    pub fn new(raw_days: i64) -> Self {
        Prediction { days: raw_days.max(1) }
    }

    pub fn days(self) -> i64 {
        self.days
    }
}

/// Canonical optimal threshold policy for a trusted horizon prediction under
/// adversarial prices. Worst-case ratio `min(predicted, license + 1)`:
/// a short predicted horizon caps how much renting can lose, while anything
/// past `license + 1` days degenerates to the no-prediction baseline.
pub fn prediction_policy(predicted: Prediction, license: i64) -> Result<ThresholdPolicy> {
    if license < 2 {
        return Err(Error::LicensePriceTooSmall(license));
    }
    let horizon = predicted.days();
    let thetas = if horizon <= license {
        let mut v = vec![0];
        v.extend((2..=horizon).map(|day| horizon - day));
        v
    } else if horizon == license + 1 {
        let mut v = vec![0];
        v.extend((2..=horizon).map(|day| license + 2 - day));
        v
    } else {
        vec![0, license]
    };
    ThresholdPolicy::new(thetas, license)
}

/// Outcome of one run: the algorithm's cost, the offline optimum for the
/// same horizon, and their exact ratio.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunRecord {
    pub alg_cost: i64,
    pub opt_cost: i64,
    pub ratio: CompRatio,
}

impl RunRecord {
    fn of(alg_cost: i64, opt_cost: i64) -> Self {
        RunRecord {
            alg_cost,
            opt_cost,
            ratio: CompRatio::of_costs(alg_cost, opt_cost),
        }
    }
}

/// Simulates a threshold policy day by day. The first day whose price does
/// not exceed the pledge buys at `day - 1 + threshold(day)`; free days
/// trigger like any other (the pledge is still paid). Without a trigger the
/// agent rents all `active_days`.
pub fn run_threshold(policy: &ThresholdPolicy, p: &PriceSeq, active_days: i64) -> Result<RunRecord> {
    if active_days < 1 {
        return Err(Error::DayOutOfRange { day: active_days, max: i64::MAX });
    }
    let horizon = active_days.min(p.len());
    let mut alg_cost = active_days;
    for day in 1..=horizon {
        if p.price(day)? <= policy.threshold(day) {
            alg_cost = day - 1 + policy.threshold(day);
            break;
        }
    }
    Ok(RunRecord::of(alg_cost, offline::opt_cost(p, active_days)?))
}

/// A committed plan on a known price sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Decision {
    BuyOn(i64),
    RentForever,
}

/// Cost of executing a decision for `active_days` days. A planned buy past
/// the horizon never happens; a renting agent still stops paying once the
/// sequence ends on a free day (the others bought the license).
pub fn decision_cost(p: &PriceSeq, decision: &Decision, active_days: i64) -> Result<i64> {
    if active_days < 1 {
        return Err(Error::DayOutOfRange { day: active_days, max: i64::MAX });
    }
    if let Decision::BuyOn(day) = decision {
        if *day < 1 || *day > p.len() {
            return Err(Error::DayOutOfRange { day: *day, max: p.len() });
        }
        if *day <= active_days {
            return p.total_cost(*day);
        }
    }
    if p.ends_free() && p.len() <= active_days {
        Ok(p.len() - 1)
    } else {
        Ok(active_days)
    }
}

pub fn run_decision(p: &PriceSeq, decision: &Decision, active_days: i64) -> Result<RunRecord> {
    let alg_cost = decision_cost(p, decision, active_days)?;
    Ok(RunRecord::of(alg_cost, offline::opt_cost(p, active_days)?))
}

/// Follows the horizon prediction literally: if the predicted time covers
/// the cheapest total cost within it, buy on the first day attaining that
/// minimum; otherwise rent forever. 1-consistent but unboundedly bad under
/// a short misprediction.
pub fn blind_follow(p: &PriceSeq, predicted: Prediction) -> Decision {
    let look = predicted.days().min(p.len());
    let (prefix_min, day) = p.prefix_min(look).expect("look >= 1");
    if predicted.days() >= prefix_min {
        Decision::BuyOn(day)
    } else {
        Decision::RentForever
    }
}

/// The two buy days the tradeoff rule can pick, with the bounds it
/// guarantees for them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TradeoffParams {
    #[serde(with = "crate::ratio::ratio_string")]
    pub lambda: Ratio,
    /// Buy day when the prediction clears the ownership threshold.
    pub early_buy_day: i64,
    /// Buy day when it does not.
    pub late_buy_day: i64,
    /// Worst-case ratio regardless of prediction quality:
    /// `lambda - 1 + optimal_ratio / lambda`.
    #[serde(with = "crate::ratio::ratio_string")]
    pub robustness_bound: Ratio,
    /// Worst-case ratio under a perfect prediction.
    #[serde(with = "crate::ratio::ratio_string")]
    pub consistency_bound: Ratio,
}

/// Precomputed tradeoff decision table for one sequence and one lambda.
#[derive(Debug, Clone)]
pub struct TradeoffPlan {
    wait_day: Option<i64>,
    params: Option<TradeoffParams>,
    robustness_bound: Ratio,
    consistency_bound: Ratio,
    prefix_min: Vec<i64>,
    len: i64,
}

impl TradeoffPlan {
    pub fn new(p: &PriceSeq, lambda: Ratio) -> Result<Self> {
        validate_lambda(lambda)?;
        let stats = p.stats()?;
        let n = p.len();
        let mut prefix_min = Vec::with_capacity(n as usize);
        let mut running = i64::MAX;
        for day in 1..=n {
            running = running.min(stats.total_cost(day));
            prefix_min.push(running);
        }

        if let Some(day) = stats.wait_rule.action_day() {
            let robustness_bound = lambda - Ratio::one() + stats.optimal_ratio / lambda;
            return Ok(TradeoffPlan {
                wait_day: Some(day),
                params: None,
                robustness_bound,
                consistency_bound: Ratio::one(),
                prefix_min,
                len: n,
            });
        }

        let params = compute_params(p, &stats, lambda)?;
        Ok(TradeoffPlan {
            wait_day: None,
            robustness_bound: params.robustness_bound,
            consistency_bound: params.consistency_bound,
            params: Some(params),
            prefix_min,
            len: n,
        })
    }

    /// The committed plan for one prediction. With a wait rule the agent
    /// heads for the guaranteed day; otherwise it buys early when the
    /// predicted time covers the cheapest total cost within it, late when
    /// it does not.
    pub fn decide(&self, predicted: Prediction) -> Decision {
        if let Some(day) = self.wait_day {
            return Decision::BuyOn(day);
        }
        let params = self.params.as_ref().expect("no wait day means params exist");
        let look = predicted.days().min(self.len) as usize;
        if predicted.days() >= self.prefix_min[look - 1] {
            Decision::BuyOn(params.early_buy_day)
        } else {
            Decision::BuyOn(params.late_buy_day)
        }
    }

    pub fn params(&self) -> Option<&TradeoffParams> {
        self.params.as_ref()
    }

    pub fn robustness_bound(&self) -> Ratio {
        self.robustness_bound
    }

    pub fn consistency_bound(&self) -> Ratio {
        self.consistency_bound
    }
}

fn compute_params(p: &PriceSeq, stats: &SeqStats, lambda: Ratio) -> Result<TradeoffParams> {
    let n = p.len();
    let last_min = stats.last_min_day;
    let best = stats.best_buy_day;
    let opts = offline::opt_profile(p, n)?;

    // First day at or after the interpolated start whose rent-adjusted total
    // is minimal over the rest of the horizon.
    let start = ceil_to_int(
        (Ratio::one() - lambda) * Ratio::from_integer(last_min - 1)
            + lambda * Ratio::from_integer(best),
    );
    debug_assert!(start >= 1 && start <= best);
    let mut early = start;
    let mut early_value = adjusted(stats, &opts, start, lambda);
    for day in start + 1..=n {
        let value = adjusted(stats, &opts, day, lambda);
        if value < early_value {
            early_value = value;
            early = day;
        }
    }
    if stats.total_cost(early) > stats.total_cost(best) {
        early = best;
    }

    let robustness_bound = lambda - Ratio::one() + stats.optimal_ratio / lambda;
    let mut late: Option<i64> = None;
    let mut late_rate = Ratio::from_integer(i64::MAX);
    for day in 1..=n {
        let total = stats.total_cost(day);
        if Ratio::new(total, opts.opt(day)) <= robustness_bound {
            let rate = Ratio::new(total, day);
            if rate < late_rate {
                late_rate = rate;
                late = Some(day);
            }
        }
    }
    // The known-price optimal day always qualifies, so a feasible day exists.
    let late = late.expect("best_buy_day is always feasible");

    let m = stats.min_total_cost;
    let early_over_min = Ratio::new(stats.total_cost(early), m);
    let consistency_bound = if late <= m {
        early_over_min.max(Ratio::new(stats.total_cost(late), late))
    } else {
        early_over_min
    };

    Ok(TradeoffParams {
        lambda,
        early_buy_day: early,
        late_buy_day: late,
        robustness_bound,
        consistency_bound,
    })
}

fn adjusted(stats: &SeqStats, opts: &OptProfile, day: i64, lambda: Ratio) -> Ratio {
    Ratio::from_integer(stats.total_cost(day)) - lambda * Ratio::from_integer(opts.opt(day))
}

/// Tradeoff parameters for a sequence without a wait rule.
pub fn tradeoff_params(p: &PriceSeq, lambda: Ratio) -> Result<TradeoffParams> {
    let plan = TradeoffPlan::new(p, lambda)?;
    match (plan.wait_day, plan.params) {
        (Some(day), _) => Err(Error::WaitRuleApplies { day }),
        (None, Some(params)) => Ok(params),
        (None, None) => unreachable!("plan always has a wait day or params"),
    }
}

/// The tradeoff rule end to end: wait rule if available, otherwise the
/// early/late buy day selected by the prediction guard.
pub fn tradeoff_decide(p: &PriceSeq, predicted: Prediction, lambda: Ratio) -> Result<Decision> {
    Ok(TradeoffPlan::new(p, lambda)?.decide(predicted))
}

/// Consistency and robustness of the two-day rule that buys on `early_day`
/// when the prediction clears the ownership threshold and on `late_day`
/// (possibly never) otherwise.
pub fn simple_bounds(
    p: &PriceSeq,
    early_day: i64,
    late_day: Option<i64>,
) -> Result<(Ratio, CompRatio)> {
    let stats = p.stats()?;
    let n = p.len();
    if early_day < 1 || early_day > n {
        return Err(Error::DayOutOfRange { day: early_day, max: n });
    }
    if let Some(day) = late_day {
        if day < 1 || day > n {
            return Err(Error::DayOutOfRange { day, max: n });
        }
    }
    if early_day > stats.best_buy_day {
        return Err(Error::EarlyDayTooLate {
            early: early_day,
            best: stats.best_buy_day,
        });
    }
    let m = stats.min_total_cost;
    if m == 0 {
        let day = stats.wait_rule.action_day().expect("free day one");
        return Err(Error::WaitRuleApplies { day });
    }
    let opts = offline::opt_profile(p, n)?;
    let early_over_min = Ratio::new(stats.total_cost(early_day), m);
    let consistency = match late_day {
        Some(day) if day < m => early_over_min.max(Ratio::new(stats.total_cost(day), day)),
        _ => early_over_min,
    };
    let robustness = match late_day {
        Some(day) => CompRatio::Finite(
            Ratio::new(stats.total_cost(early_day), opts.opt(early_day))
                .max(Ratio::new(stats.total_cost(day), opts.opt(day))),
        ),
        None => CompRatio::Unbounded,
    };
    Ok((consistency, robustness))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(license: i64, prices: &[i64]) -> PriceSeq {
        PriceSeq::new(license, prices.to_vec()).unwrap()
    }

    #[test]
    fn baseline_shape() {
        let policy = baseline_policy(3).unwrap();
        assert_eq!(policy.thresholds(), &[0, 3]);
        assert_eq!(policy.threshold(3), 0);
        assert!(baseline_policy(1).is_err());
    }

    #[test]
    fn baseline_runs() {
        let policy = baseline_policy(3).unwrap();
        // Forced to pay full price on day 2 after a cheap day 1.
        let rec = run_threshold(&policy, &seq(3, &[1, 3]), 2).unwrap();
        assert_eq!((rec.alg_cost, rec.opt_cost), (4, 1));
        assert_eq!(rec.ratio, CompRatio::of_costs(4, 1));
        // The pledge is paid even when the others already covered the
        // license on day 2.
        let rec = run_threshold(&policy, &seq(3, &[1, 0]), 2).unwrap();
        assert_eq!((rec.alg_cost, rec.opt_cost), (4, 1));
        // One rented day, then the horizon ends.
        let rec = run_threshold(&policy, &seq(3, &[1, 0]), 1).unwrap();
        assert_eq!((rec.alg_cost, rec.opt_cost), (1, 1));
    }

    #[test]
    fn threshold_run_examples() {
        let policy = ThresholdPolicy::new(vec![0, 3], 3).unwrap();
        let rec = run_threshold(&policy, &seq(3, &[1, 3, 2]), 1).unwrap();
        assert_eq!((rec.alg_cost, rec.opt_cost), (1, 1));

        let mid = ThresholdPolicy::new(vec![0, 1, 0], 3).unwrap();
        let rec = run_threshold(&mid, &seq(3, &[1, 1, 1]), 3).unwrap();
        assert_eq!((rec.alg_cost, rec.opt_cost), (2, 1));
    }

    #[test]
    fn prediction_policy_shapes() {
        assert_eq!(
            prediction_policy(Prediction::new(3), 5).unwrap().thresholds(),
            &[0, 1, 0]
        );
        assert_eq!(
            prediction_policy(Prediction::new(6), 5).unwrap().thresholds(),
            &[0, 5, 4, 3, 2, 1]
        );
        assert_eq!(
            prediction_policy(Prediction::new(100), 5).unwrap().thresholds(),
            &[0, 5]
        );
        assert_eq!(
            prediction_policy(Prediction::new(1), 5).unwrap().thresholds(),
            &[0]
        );
    }

    #[test]
    fn prediction_clamps_to_one() {
        assert_eq!(Prediction::new(-7).days(), 1);
        assert_eq!(Prediction::new(0).days(), 1);
        assert_eq!(Prediction::new(3).days(), 3);
    }

    #[test]
    fn blind_follow_fixed_price() {
        let p = PriceSeq::fixed(100, 101).unwrap();
        assert_eq!(
            blind_follow(&p, Prediction::new(250)),
            Decision::BuyOn(1)
        );
        assert_eq!(
            blind_follow(&p, Prediction::new(1)),
            Decision::RentForever
        );
    }

    #[test]
    fn blind_follow_takes_prefix_minimum() {
        let p = seq(4, &[4, 4, 0]);
        assert_eq!(blind_follow(&p, Prediction::new(5)), Decision::BuyOn(3));
        assert_eq!(p.total_cost(3).unwrap(), 2);
    }

    #[test]
    fn decision_costs() {
        let p = seq(4, &[4, 4, 0]);
        assert_eq!(decision_cost(&p, &Decision::BuyOn(3), 5).unwrap(), 2);
        assert_eq!(decision_cost(&p, &Decision::BuyOn(3), 2).unwrap(), 2);
        assert_eq!(decision_cost(&p, &Decision::RentForever, 2).unwrap(), 2);
        assert_eq!(decision_cost(&p, &Decision::RentForever, 7).unwrap(), 2);
        let fixed = PriceSeq::fixed(5, 6).unwrap();
        assert_eq!(decision_cost(&fixed, &Decision::RentForever, 9).unwrap(), 9);
        assert!(decision_cost(&fixed, &Decision::BuyOn(7), 9).is_err());
    }

    #[test]
    fn tradeoff_fixed_price_days() {
        let p = PriceSeq::fixed(100, 1000).unwrap();
        let fifth = Ratio::new(1, 5);
        let params = tradeoff_params(&p, fifth).unwrap();
        assert_eq!(params.early_buy_day, 20);
        assert_eq!(params.late_buy_day, 816);
        assert_eq!(params.robustness_bound, Ratio::new(183, 20));
        assert_eq!(params.consistency_bound, Ratio::new(119, 100));

        let one = tradeoff_params(&p, Ratio::one()).unwrap();
        assert_eq!(one.early_buy_day, 100);
        assert_eq!(one.late_buy_day, 100);
        assert_eq!(one.robustness_bound, Ratio::new(199, 100));
    }

    #[test]
    fn tradeoff_decisions_follow_the_guard() {
        let p = PriceSeq::fixed(100, 1000).unwrap();
        let fifth = Ratio::new(1, 5);
        assert_eq!(
            tradeoff_decide(&p, Prediction::new(250), fifth).unwrap(),
            Decision::BuyOn(20)
        );
        assert_eq!(
            tradeoff_decide(&p, Prediction::new(50), fifth).unwrap(),
            Decision::BuyOn(816)
        );
    }

    #[test]
    fn tradeoff_wait_rule_short_circuits() {
        let p = seq(4, &[2, 4, 0]);
        assert_eq!(
            tradeoff_decide(&p, Prediction::new(1), Ratio::new(1, 2)).unwrap(),
            Decision::BuyOn(3)
        );
        assert!(matches!(
            tradeoff_params(&p, Ratio::new(1, 2)),
            Err(Error::WaitRuleApplies { day: 3 })
        ));
        // The guaranteed day is optimal for every horizon.
        for t in 1..=3 {
            let rec = run_decision(&p, &Decision::BuyOn(3), t).unwrap();
            assert_eq!(rec.ratio, CompRatio::Finite(Ratio::one()));
        }
    }

    #[test]
    fn tradeoff_rejects_bad_lambda() {
        let p = PriceSeq::fixed(10, 11).unwrap();
        assert!(tradeoff_decide(&p, Prediction::new(5), Ratio::from_integer(0)).is_err());
        assert!(tradeoff_decide(&p, Prediction::new(5), Ratio::new(3, 2)).is_err());
    }

    #[test]
    fn tradeoff_requires_completeness() {
        let p = seq(10, &[10, 10]);
        assert!(matches!(
            tradeoff_decide(&p, Prediction::new(5), Ratio::one()),
            Err(Error::IncompleteSequence { .. })
        ));
    }

    #[test]
    fn simple_bounds_fixed_price() {
        let p = PriceSeq::fixed(100, 1000).unwrap();
        let (consistency, robustness) = simple_bounds(&p, 20, Some(816)).unwrap();
        assert_eq!(consistency, Ratio::new(119, 100));
        assert!(robustness.as_finite().is_some());

        let (consistency, robustness) = simple_bounds(&p, 100, Some(100)).unwrap();
        assert_eq!(consistency, Ratio::new(199, 100));
        assert_eq!(robustness, CompRatio::Finite(Ratio::new(199, 100)));

        let (_, robustness) = simple_bounds(&p, 20, None).unwrap();
        assert_eq!(robustness, CompRatio::Unbounded);

        assert!(matches!(
            simple_bounds(&p, 101, Some(101)),
            Err(Error::EarlyDayTooLate { early: 101, best: 100 })
        ));
    }
}
