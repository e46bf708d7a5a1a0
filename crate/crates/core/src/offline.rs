//! Clairvoyant baselines.
//!
//! `opt_cost(p, t)` is what an agent pays if it knows both the prices and its
//! own active time `t` in advance: rent all `t` days or buy on the cheapest
//! day seen so far, whichever is cheaper. `optimal_ratio` is the best
//! worst-case ratio any deterministic online algorithm can guarantee when
//! prices (but not `t`) are known, together with every buy day achieving it.

use serde::Serialize;

use crate::error::Error;
use crate::pricecore::PriceSeq;
use crate::ratio::Ratio;
use crate::Result;

/// Offline optimum for `active_days` days: `min(t, total_cost(1..=t))`,
/// evaluated on the finite prefix. Days past the end of a complete sequence
/// cannot improve the minimum, so `active_days` may exceed the length.
pub fn opt_cost(p: &PriceSeq, active_days: i64) -> Result<i64> {
    let (prefix_min, _) = p.prefix_min(active_days)?;
    Ok(active_days.min(prefix_min))
}

/// Offline optima for every horizon `1..=horizon`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OptProfile {
    pub opt_by_day: Vec<i64>,
}

impl OptProfile {
    pub fn opt(&self, active_days: i64) -> i64 {
        self.opt_by_day[active_days as usize - 1]
    }
}

pub fn opt_profile(p: &PriceSeq, horizon: i64) -> Result<OptProfile> {
    if horizon < 1 {
        return Err(Error::DayOutOfRange { day: horizon, max: p.len() });
    }
    let mut opt_by_day = Vec::with_capacity(horizon as usize);
    let mut running = i64::MAX;
    for t in 1..=horizon {
        if t <= p.len() {
            running = running.min(p.total_cost(t)?);
        }
        opt_by_day.push(t.min(running));
    }
    Ok(OptProfile { opt_by_day })
}

/// Optimal deterministic competitive ratio for known prices.
pub fn optimal_ratio(p: &PriceSeq) -> Result<Ratio> {
    Ok(optimal_ratio_with_days(p)?.0)
}

/// The optimal ratio together with every buy day attaining it (ascending).
/// When a wait rule applies the ratio is 1 and the days are exactly the
/// wait-rule action days.
pub fn optimal_ratio_with_days(p: &PriceSeq) -> Result<(Ratio, Vec<i64>)> {
    let stats = p.stats()?;
    Ok((stats.optimal_ratio, stats.optimal_days))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn opt_cost_fixed_price() {
        let p = PriceSeq::fixed(100, 101).unwrap();
        assert_eq!(opt_cost(&p, 40).unwrap(), 40);
        assert_eq!(opt_cost(&p, 250).unwrap(), 100);
        assert_eq!(opt_cost(&p, 100).unwrap(), 100);
        assert_eq!(opt_cost(&p, 99).unwrap(), 99);
        assert!(opt_cost(&p, 0).is_err());
    }

    #[test]
    fn opt_cost_cheap_first_day() {
        let p = PriceSeq::new(3, vec![1, 3, 3]).unwrap();
        assert_eq!(opt_cost(&p, 5).unwrap(), 1);
        assert_eq!(opt_cost(&p, 1).unwrap(), 1);
    }

    #[test]
    fn profile_matches_pointwise_opt() {
        let p = PriceSeq::new(10, vec![9, 4, 10, 10, 10, 10]).unwrap();
        let profile = opt_profile(&p, 12).unwrap();
        for t in 1..=12 {
            assert_eq!(profile.opt(t), opt_cost(&p, t).unwrap());
        }
    }

    #[test]
    fn ratio_fixed_price() {
        let p = PriceSeq::fixed(100, 101).unwrap();
        let (ratio, days) = optimal_ratio_with_days(&p).unwrap();
        assert_eq!(ratio, Ratio::new(199, 100));
        assert_eq!(days, vec![100]);
    }

    #[test]
    fn ratio_two_phase() {
        let mut prices = vec![100; 100];
        prices.extend_from_slice(&[2; 10]);
        let p = PriceSeq::new(100, prices).unwrap();
        let (ratio, days) = optimal_ratio_with_days(&p).unwrap();
        assert_eq!(ratio, Ratio::new(102, 100));
        assert_eq!(days, vec![101]);
    }

    #[test]
    fn ratio_one_when_free_day_follows_minimum() {
        let p = PriceSeq::new(4, vec![2, 4, 0]).unwrap();
        assert_eq!(optimal_ratio(&p).unwrap(), Ratio::from_integer(1));
    }
}
