//! Residual price sequences and the scalars derived from them.
//!
//! A [`PriceSeq`] is the single-agent view of the pledging game: `price(t)`
//! is what buying the license costs this agent on day `t` (the amount the
//! other agents leave unpledged), renting always costs 1$ per day, and
//! `total_cost(t) = t - 1 + price(t)` is the full cost of owning from day
//! `t` on. Sequences are finite with two structural invariants:
//!
//! * truncation — a free day (price 0) ends the sequence, because at that
//!   point the license has been bought by the others and nothing later
//!   matters;
//! * completeness — unless it ends on a free day, the sequence must span at
//!   least `min total cost + 1` days. Since `total_cost(t) >= t - 1`, any
//!   day beyond that horizon is more expensive than the established
//!   minimum, so every quantity below is already determined by the prefix.
//!
//! Days are 1-indexed everywhere in the public API.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::offline;
use crate::ratio::{CompRatio, Ratio};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriceSeq {
    license: i64,
    prices: Vec<i64>,
}

impl PriceSeq {
    /// Validates the price range, the license threshold, and the truncation
    /// rule. Completeness is checked separately by the operations that need
    /// it, because game-reduced sequences are legitimately short.
    pub fn new(license: i64, prices: Vec<i64>) -> Result<Self> {
        if license < 2 {
            return Err(Error::LicensePriceTooSmall(license));
        }
        if prices.is_empty() {
            return Err(Error::EmptyPriceSeq);
        }
        for (idx, &p) in prices.iter().enumerate() {
            let day = idx as i64 + 1;
            if p < 0 || p > license {
                return Err(Error::PriceOutOfRange { day, price: p, license });
            }
            if p == 0 && idx + 1 != prices.len() {
                return Err(Error::FreeDayNotTerminal { day });
            }
        }
        Ok(PriceSeq { license, prices })
    }

    /// Classical fixed-price ski rental: every day costs the license price.
    pub fn fixed(license: i64, days: usize) -> Result<Self> {
        Self::new(license, vec![license; days])
    }

    pub fn license_price(&self) -> i64 {
        self.license
    }

    /// Number of days in the sequence.
    pub fn len(&self) -> i64 {
        self.prices.len() as i64
    }

    pub fn is_empty(&self) -> bool {
        self.prices.is_empty()
    }

    pub fn prices(&self) -> &[i64] {
        &self.prices
    }

    pub fn price(&self, day: i64) -> Result<i64> {
        self.check_day(day)?;
        Ok(self.prices[day as usize - 1])
    }

    /// `total_cost(i) = i - 1 + price(i)`: rent for `i - 1` days, then buy.
    pub fn total_cost(&self, day: i64) -> Result<i64> {
        Ok(day - 1 + self.price(day)?)
    }

    pub fn total_costs(&self) -> Vec<i64> {
        self.prices
            .iter()
            .enumerate()
            .map(|(idx, &p)| idx as i64 + p)
            .collect()
    }

    /// True when the sequence ends on a free day.
    pub fn ends_free(&self) -> bool {
        *self.prices.last().expect("sequences are nonempty") == 0
    }

    /// Minimum total cost over the whole sequence.
    pub fn min_total_cost(&self) -> i64 {
        self.total_costs().into_iter().min().expect("nonempty")
    }

    /// Length a non-free-ended sequence needs in order to be complete.
    pub fn required_len(&self) -> i64 {
        self.min_total_cost() + 1
    }

    pub fn is_complete(&self) -> bool {
        self.ends_free() || self.len() >= self.required_len()
    }

    pub fn ensure_complete(&self) -> Result<()> {
        if self.is_complete() {
            Ok(())
        } else {
            Err(Error::IncompleteSequence {
                len: self.len(),
                required: self.required_len(),
            })
        }
    }

    /// Running minimum of total costs over days `1..=t` together with the
    /// first day attaining it. `t` is clamped to the sequence length.
    pub fn prefix_min(&self, t: i64) -> Result<(i64, i64)> {
        if t < 1 {
            return Err(Error::DayOutOfRange { day: t, max: self.len() });
        }
        let upto = t.min(self.len()) as usize;
        let mut best = i64::MAX;
        let mut best_day = 1;
        for (idx, &p) in self.prices[..upto].iter().enumerate() {
            let total = idx as i64 + p;
            if total < best {
                best = total;
                best_day = idx as i64 + 1;
            }
        }
        Ok((best, best_day))
    }

    /// Minimum total cost and minimum price over days `t..=n`.
    pub fn tail_min(&self, t: i64) -> Result<(i64, i64)> {
        self.check_day(t)?;
        let from = t as usize - 1;
        let mut min_total = i64::MAX;
        let mut min_price = i64::MAX;
        for (idx, &p) in self.prices[from..].iter().enumerate() {
            min_total = min_total.min(from as i64 + idx as i64 + p);
            min_price = min_price.min(p);
        }
        Ok((min_total, min_price))
    }

    /// All derived scalars; requires a complete sequence.
    pub fn stats(&self) -> Result<SeqStats> {
        self.ensure_complete()?;
        let totals = self.total_costs();
        let n = self.len();

        let min_total_cost = *totals.iter().min().expect("nonempty");
        let first_min_day = totals
            .iter()
            .position(|&c| c == min_total_cost)
            .expect("minimum exists") as i64
            + 1;
        let last_min_day = totals
            .iter()
            .rposition(|&c| c == min_total_cost)
            .expect("minimum exists") as i64
            + 1;

        // First day by which owning can undercut renting.
        let mut break_even_day = n;
        let mut running = i64::MAX;
        for (idx, &c) in totals.iter().enumerate() {
            running = running.min(c);
            if running <= idx as i64 + 1 {
                break_even_day = idx as i64 + 1;
                break;
            }
        }

        let wait_rule = self.wait_rule_at(min_total_cost);
        let (optimal_ratio, optimal_days) = optimal_ratio_candidates(self, &totals, min_total_cost);
        let best_buy_day = optimal_days[0];

        Ok(SeqStats {
            total_costs: totals,
            min_total_cost,
            first_min_day,
            last_min_day,
            break_even_day,
            best_buy_day,
            optimal_ratio,
            optimal_days,
            wait_rule,
        })
    }

    fn wait_rule_at(&self, min_total_cost: i64) -> WaitRule {
        let m = min_total_cost;
        let bargain = m >= 1 && m <= self.len() && self.prices[m as usize - 1] == 1;
        let free = m + 1 >= 1 && m + 1 <= self.len() && self.prices[m as usize] == 0;
        match (bargain, free) {
            (true, true) => WaitRule::BargainThenFree { bargain: m, free: m + 1 },
            (true, false) => WaitRule::BargainDay(m),
            (false, true) => WaitRule::FreeDay(m + 1),
            (false, false) => WaitRule::None,
        }
    }

    fn check_day(&self, day: i64) -> Result<()> {
        if day < 1 || day > self.len() {
            Err(Error::DayOutOfRange { day, max: self.len() })
        } else {
            Ok(())
        }
    }
}

/// The optimal deterministic competitive ratio for known prices, plus every
/// buy day attaining it: the minimum of `total_cost(r) / opt_cost(r)` over
/// days up to the cost minimum, joined by `total_cost(r) / min_total_cost`
/// over later days that still attain the tail minimum. Ascending day order,
/// so the first entry is the canonical buy day.
fn optimal_ratio_candidates(
    p: &PriceSeq,
    totals: &[i64],
    min_total_cost: i64,
) -> (Ratio, Vec<i64>) {
    let m = min_total_cost;
    if m == 0 {
        // Only the one-day sequence (0): taking the free day is optimal.
        return (Ratio::from_integer(1), vec![1]);
    }
    let n = p.len();
    let mut best: Option<Ratio> = None;
    let mut days: Vec<i64> = Vec::new();
    let mut consider = |day: i64, ratio: Ratio| match best {
        Some(b) if ratio > b => {}
        Some(b) if ratio == b => days.push(day),
        _ => {
            best = Some(ratio);
            days.clear();
            days.push(day);
        }
    };

    let tail_min = totals[(m.min(n) as usize - 1)..]
        .iter()
        .copied()
        .min()
        .unwrap_or(i64::MAX);
    for day in 1..=n {
        let total = totals[day as usize - 1];
        if day <= m {
            let opt = offline::opt_cost(p, day).expect("day in range");
            consider(day, Ratio::new(total, opt));
        } else if total == tail_min {
            consider(day, Ratio::new(total, m));
        }
        // Day m itself belongs to both candidate families, but its offline
        // optimum is exactly m there, so the two ratios coincide.
    }
    (best.expect("candidate set is nonempty"), days)
}

/// Everything the analysis derives from one complete sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeqStats {
    /// `total_cost(i)` for every day.
    pub total_costs: Vec<i64>,
    /// Cheapest possible buy-and-own cost.
    pub min_total_cost: i64,
    /// First day attaining it.
    pub first_min_day: i64,
    /// Last day attaining it.
    pub last_min_day: i64,
    /// First day `t` with `min(total_costs[..t]) <= t`.
    pub break_even_day: i64,
    /// Canonical optimal buy day when prices are known in advance.
    pub best_buy_day: i64,
    /// Optimal deterministic competitive ratio for known prices.
    #[serde(with = "crate::ratio::ratio_string")]
    pub optimal_ratio: Ratio,
    /// Every buy day attaining that ratio, ascending.
    pub optimal_days: Vec<i64>,
    /// Whether a rent-and-wait action is already optimal.
    pub wait_rule: WaitRule,
}

impl SeqStats {
    pub fn total_cost(&self, day: i64) -> i64 {
        self.total_costs[day as usize - 1]
    }

    pub fn optimal_ratio(&self) -> CompRatio {
        CompRatio::Finite(self.optimal_ratio)
    }
}

/// A waiting action guaranteed to match the offline optimum: a free day right
/// after the cost minimum, a price-1 day exactly at it, or both in a row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WaitRule {
    None,
    FreeDay(i64),
    BargainDay(i64),
    BargainThenFree { bargain: i64, free: i64 },
}

impl WaitRule {
    /// Earliest day on which the waiting policy acts.
    pub fn action_day(&self) -> Option<i64> {
        match *self {
            WaitRule::None => None,
            WaitRule::FreeDay(d) => Some(d),
            WaitRule::BargainDay(d) => Some(d),
            WaitRule::BargainThenFree { bargain, .. } => Some(bargain),
        }
    }

    pub fn applies(&self) -> bool {
        !matches!(self, WaitRule::None)
    }
}

#[derive(Serialize, Deserialize)]
struct PriceSeqRepr {
    #[serde(rename = "B")]
    license: i64,
    prices: Vec<i64>,
}

impl Serialize for PriceSeq {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PriceSeqRepr {
            license: self.license,
            prices: self.prices.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PriceSeq {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = PriceSeqRepr::deserialize(deserializer)?;
        PriceSeq::new(repr.license, repr.prices).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(license: i64, prices: &[i64]) -> PriceSeq {
        PriceSeq::new(license, prices.to_vec()).unwrap()
    }

    #[test]
    fn rejects_bad_sequences() {
        assert_eq!(
            PriceSeq::new(1, vec![1]).unwrap_err(),
            Error::LicensePriceTooSmall(1)
        );
        assert_eq!(PriceSeq::new(3, vec![]).unwrap_err(), Error::EmptyPriceSeq);
        assert!(matches!(
            PriceSeq::new(3, vec![1, 4]).unwrap_err(),
            Error::PriceOutOfRange { day: 2, price: 4, .. }
        ));
        assert!(matches!(
            PriceSeq::new(3, vec![1, 0, 2]).unwrap_err(),
            Error::FreeDayNotTerminal { day: 2 }
        ));
    }

    #[test]
    fn total_cost_fixed_price() {
        // total_cost(t) = license + t - 1 on the fixed-price sequence
        let p = PriceSeq::fixed(100, 101).unwrap();
        assert_eq!(p.total_cost(5).unwrap(), 104);
        assert_eq!(p.total_cost(1).unwrap(), 100);
    }

    #[test]
    fn total_cost_free_and_small() {
        let free = seq(5, &[0]);
        assert_eq!(free.total_cost(1).unwrap(), 0);
        let p = seq(3, &[1, 3, 2]);
        assert_eq!(p.total_cost(3).unwrap(), 4);
        assert!(matches!(
            p.total_cost(4),
            Err(Error::DayOutOfRange { day: 4, max: 3 })
        ));
    }

    #[test]
    fn completeness_rule() {
        // min total cost 3 => needs 4 days unless it ends free
        let short = seq(5, &[3, 5, 5]);
        assert!(!short.is_complete());
        assert_eq!(
            short.ensure_complete().unwrap_err(),
            Error::IncompleteSequence { len: 3, required: 4 }
        );
        assert!(seq(5, &[3, 5, 5, 5]).is_complete());
        assert!(seq(5, &[3, 5, 0]).is_complete());
    }

    #[test]
    fn stats_fixed_price() {
        let p = PriceSeq::fixed(100, 101).unwrap();
        let s = p.stats().unwrap();
        assert_eq!(s.min_total_cost, 100);
        assert_eq!(s.first_min_day, 1);
        assert_eq!(s.last_min_day, 1);
        assert_eq!(s.break_even_day, 100);
        assert_eq!(s.best_buy_day, 100);
        assert_eq!(s.optimal_ratio, Ratio::new(199, 100));
        assert_eq!(s.optimal_days, vec![100]);
        assert_eq!(s.wait_rule, WaitRule::None);
    }

    #[test]
    fn stats_two_phase_price_drop() {
        // Expensive for 100 days, then cheap: optimal to buy on day 101.
        let mut prices = vec![100; 100];
        prices.extend_from_slice(&[2; 10]);
        let p = PriceSeq::new(100, prices).unwrap();
        let s = p.stats().unwrap();
        assert_eq!(s.min_total_cost, 100);
        assert_eq!(s.first_min_day, 1);
        assert_eq!(s.last_min_day, 1);
        assert_eq!(s.best_buy_day, 101);
        assert_eq!(s.optimal_ratio, Ratio::new(102, 100));
        assert_eq!(s.optimal_days, vec![101]);
    }

    #[test]
    fn stats_bargain_at_minimum() {
        // total costs (5, 2, 7): the price-1 day sits exactly at the minimum
        let p = seq(5, &[5, 1, 5]);
        let s = p.stats().unwrap();
        assert_eq!(s.min_total_cost, 2);
        assert_eq!(s.wait_rule, WaitRule::BargainDay(2));
        assert_eq!(s.optimal_ratio, Ratio::from_integer(1));
        assert_eq!(s.optimal_days, vec![2]);
    }

    #[test]
    fn stats_bargain_then_free() {
        let p = seq(3, &[3, 3, 1, 0]);
        let s = p.stats().unwrap();
        assert_eq!(s.min_total_cost, 3);
        assert_eq!(
            s.wait_rule,
            WaitRule::BargainThenFree { bargain: 3, free: 4 }
        );
        assert_eq!(s.optimal_ratio, Ratio::from_integer(1));
        assert_eq!(s.optimal_days, vec![3, 4]);
    }

    #[test]
    fn stats_free_day_right_after_minimum() {
        let p = seq(4, &[2, 4, 0]);
        let s = p.stats().unwrap();
        assert_eq!(s.min_total_cost, 2);
        assert_eq!(s.wait_rule, WaitRule::FreeDay(3));
        assert_eq!(s.optimal_ratio, Ratio::from_integer(1));
        assert_eq!(s.optimal_days, vec![3]);
    }

    #[test]
    fn tail_min_values() {
        let p = PriceSeq::fixed(100, 101).unwrap();
        assert_eq!(p.tail_min(100).unwrap(), (199, 100));

        let mut prices = vec![100; 100];
        prices.extend_from_slice(&[2; 10]);
        let two_phase = PriceSeq::new(100, prices).unwrap();
        assert_eq!(two_phase.tail_min(100).unwrap().0, 102);

        let free = seq(4, &[2, 4, 0]);
        assert_eq!(free.tail_min(1).unwrap(), (2, 0));
        assert!(free.tail_min(4).is_err());
    }

    #[test]
    fn prefix_min_clamps_to_length() {
        let p = seq(4, &[3, 2, 4, 4, 4]);
        assert_eq!(p.prefix_min(1).unwrap(), (3, 1));
        assert_eq!(p.prefix_min(2).unwrap(), (3, 1));
        // total costs are (3, 3, 6, 7, 8): ties keep the first day
        assert_eq!(p.prefix_min(99).unwrap(), (3, 1));
        assert!(p.prefix_min(0).is_err());
    }

    #[test]
    fn json_round_trip_and_validation() {
        let p = seq(10, &[7, 7, 0]);
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(text, r#"{"B":10,"prices":[7,7,0]}"#);
        let back: PriceSeq = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);

        let err = serde_json::from_str::<PriceSeq>(r#"{"B":10,"prices":[11]}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("outside [0, 10]"), "{err}");
        let err = serde_json::from_str::<PriceSeq>(r#"{"B":10,"prices":[0,3]}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("free day"), "{err}");
    }
}
