//! Independent brute-force ground truth.
//!
//! Everything here re-derives, by plain enumeration, the quantities the rest
//! of the crate computes in closed form: exhaustive adversaries against one
//! threshold policy, exhaustive search over all threshold policies,
//! enumeration of all buy-day rules for the known-price optimum, and full
//! `(T, predicted T)` sweeps of the tradeoff rule. Search spaces grow as
//! `(B + 1)^horizon`, so every entry point takes an explicit cell cap and
//! fails loudly instead of truncating silently.

use num_traits::One;
use serde::Serialize;

use crate::error::Error;
use crate::offline;
use crate::policies::{self, Decision, Prediction, ThresholdPolicy, TradeoffPlan};
use crate::pricecore::{PriceSeq, SeqStats, WaitRule};
use crate::ratio::{CompRatio, Ratio};
use crate::rng::SplitMix64;
use crate::Result;

/// Caps on enumeration sizes. A search refuses to start when its space,
/// measured in `(B + 1)^horizon` sequence cells (times the horizon for
/// policy searches), exceeds `max_cells`.
#[derive(Debug, Clone, Copy)]
pub struct SearchCaps {
    pub max_cells: u64,
}

impl Default for SearchCaps {
    fn default() -> Self {
        SearchCaps { max_cells: 10_000_000 }
    }
}

impl SearchCaps {
    fn check(&self, needed: u64) -> Result<()> {
        if needed > self.max_cells {
            Err(Error::SearchSpaceExceeded { needed, cap: self.max_cells })
        } else {
            Ok(())
        }
    }
}

fn space_size(license: i64, horizon: i64, factor: u64) -> Result<u64> {
    (license as u64 + 1)
        .checked_pow(horizon as u32)
        .and_then(|cells| cells.checked_mul(factor))
        .ok_or(Error::SearchSpaceExceeded { needed: u64::MAX, cap: 0 })
}

/// An adversarial input: a price sequence plus the active time on which the
/// reported ratio is attained. `active_days` is `None` when the ratio grows
/// without bound as the horizon extends (the policy never buys while the
/// optimum stays bounded).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdversaryWitness {
    pub prices: Vec<i64>,
    pub active_days: Option<i64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AdversaryReport {
    pub worst_ratio: CompRatio,
    pub witness: AdversaryWitness,
    pub sequences_evaluated: u64,
}

struct SeqData {
    prices: Vec<i64>,
    prefix_min_total: Vec<i64>,
}

impl SeqData {
    fn new(prices: Vec<i64>) -> Self {
        let mut prefix_min_total = Vec::with_capacity(prices.len());
        let mut running = i64::MAX;
        for (idx, &p) in prices.iter().enumerate() {
            running = running.min(idx as i64 + p);
            prefix_min_total.push(running);
        }
        SeqData { prices, prefix_min_total }
    }

    fn len(&self) -> i64 {
        self.prices.len() as i64
    }

    fn opt(&self, t: i64) -> i64 {
        t.min(self.prefix_min_total[(t.min(self.len()) - 1) as usize])
    }
}

/// Every legal sequence with the given horizon: positive prices of full
/// length, plus positive prefixes ended by one free day (the truncation
/// rule makes anything after a free day meaningless).
fn enumerate_sequences(license: i64, horizon: i64) -> Vec<SeqData> {
    let mut out = Vec::new();
    // Free-day-terminated, every length.
    for len in 1..=horizon {
        let mut buf = vec![1i64; len as usize];
        *buf.last_mut().unwrap() = 0;
        loop {
            out.push(SeqData::new(buf.clone()));
            if !bump(&mut buf[..len as usize - 1], 1, license) {
                break;
            }
        }
    }
    // Positive prices, full length.
    let mut buf = vec![1i64; horizon as usize];
    loop {
        out.push(SeqData::new(buf.clone()));
        if !bump(&mut buf, 1, license) {
            break;
        }
    }
    out
}

/// Odometer increment over `[lo, hi]^len`; false once the space is spent.
fn bump(buf: &mut [i64], lo: i64, hi: i64) -> bool {
    for slot in buf.iter_mut().rev() {
        if *slot < hi {
            *slot += 1;
            return true;
        }
        *slot = lo;
    }
    false
}

fn theta_at(thetas: &[i64], day: i64) -> i64 {
    if day >= 1 && day <= thetas.len() as i64 {
        thetas[day as usize - 1]
    } else {
        0
    }
}

/// Worst ratio of a threshold policy on one sequence, over `1..=t_max`
/// active days or at one pinned value. Returns the attaining time.
fn eval_worst(thetas: &[i64], seq: &SeqData, t_max: i64, t_fixed: Option<i64>) -> (CompRatio, i64) {
    let len = seq.len();
    let mut trigger: Option<(i64, i64)> = None;
    for day in 1..=len {
        let th = theta_at(thetas, day);
        if seq.prices[day as usize - 1] <= th {
            trigger = Some((day, day - 1 + th));
            break;
        }
    }
    let eval_at = |t: i64| {
        let alg = match trigger {
            Some((day, cost)) if day <= t => cost,
            _ => t,
        };
        CompRatio::of_costs(alg, seq.opt(t))
    };
    if let Some(t) = t_fixed {
        return (eval_at(t), t);
    }
    let mut worst = (CompRatio::of_costs(0, 1), 1);
    for t in 1..=t_max {
        let ratio = eval_at(t);
        if ratio > worst.0 {
            worst = (ratio, t);
        }
    }
    worst
}

/// Enumerates every price sequence up to `horizon` days and every active
/// time, returning the policy's worst ratio and a witness. If the policy
/// never pledges the full license price, the all-license sequence makes it
/// rent forever at unbounded ratio.
pub fn exhaustive_adversary(
    policy: &ThresholdPolicy,
    license: i64,
    horizon: i64,
    caps: &SearchCaps,
) -> Result<AdversaryReport> {
    if license < 2 {
        return Err(Error::LicensePriceTooSmall(license));
    }
    if horizon < 1 {
        return Err(Error::HorizonOutOfRange(horizon));
    }
    caps.check(space_size(license, horizon, 1)?)?;

    let sequences = enumerate_sequences(license, horizon);
    let mut worst: Option<(CompRatio, AdversaryWitness)> = None;
    for seq in &sequences {
        let (ratio, t) = eval_worst(policy.thresholds(), seq, horizon, None);
        if worst.as_ref().map_or(true, |(w, _)| ratio > *w) {
            worst = Some((
                ratio,
                AdversaryWitness { prices: seq.prices.clone(), active_days: Some(t) },
            ));
        }
    }
    let (mut worst_ratio, mut witness) = worst.expect("nonempty sequence space");
    if !policy.ever_pledges_license(license) && CompRatio::Unbounded > worst_ratio {
        worst_ratio = CompRatio::Unbounded;
        witness = AdversaryWitness {
            prices: vec![license; horizon as usize],
            active_days: None,
        };
    }
    Ok(AdversaryReport {
        worst_ratio,
        witness,
        sequences_evaluated: sequences.len() as u64,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PolicySearchReport {
    pub optimal_ratio: CompRatio,
    pub optimal_policies: Vec<Vec<i64>>,
    pub policies_evaluated: u64,
}

/// Enumerates every threshold policy of length `horizon` and evaluates each
/// against every sequence. With `predicted` set, the active time is pinned
/// to the prediction (the perfect-self-prediction setting); otherwise it is
/// adversarial up to the horizon, and never-buying policies are unbounded.
pub fn exhaustive_policy_search(
    license: i64,
    horizon: i64,
    predicted: Option<i64>,
    caps: &SearchCaps,
) -> Result<PolicySearchReport> {
    if license < 2 {
        return Err(Error::LicensePriceTooSmall(license));
    }
    if horizon < 1 {
        return Err(Error::HorizonOutOfRange(horizon));
    }
    caps.check(space_size(license, horizon, horizon as u64)?)?;

    let sequences = enumerate_sequences(license, horizon);
    let mut best: Option<CompRatio> = None;
    let mut optimal: Vec<Vec<i64>> = Vec::new();
    let mut thetas = vec![0i64; horizon as usize];
    let mut evaluated = 0u64;
    loop {
        evaluated += 1;
        let mut worst = CompRatio::of_costs(0, 1);
        let unbounded_rent =
            predicted.is_none() && !thetas.iter().any(|&t| t == license);
        if unbounded_rent {
            worst = CompRatio::Unbounded;
        } else {
            for seq in &sequences {
                let (ratio, _) = eval_worst(&thetas, seq, horizon, predicted);
                if ratio > worst {
                    worst = ratio;
                }
                if best.map_or(false, |b| worst > b) {
                    break;
                }
            }
        }
        match best {
            Some(b) if worst > b => {}
            Some(b) if worst == b => optimal.push(thetas.clone()),
            _ => {
                best = Some(worst);
                optimal.clear();
                optimal.push(thetas.clone());
            }
        }
        if !bump(&mut thetas, 0, license) {
            break;
        }
    }
    Ok(PolicySearchReport {
        optimal_ratio: best.expect("nonempty policy space"),
        optimal_policies: optimal,
        policies_evaluated: evaluated,
    })
}

/// Every buy-day rule (and renting forever) evaluated against every active
/// time: the definitional optimum that the closed-form ratio must match.
/// Returns the best worst-case ratio and every day attaining it.
pub fn brute_force_optimal(p: &PriceSeq) -> Result<(CompRatio, Vec<i64>)> {
    p.ensure_complete()?;
    let n = p.len();
    let opts = offline::opt_profile(p, n)?;
    let mut best = CompRatio::Unbounded;
    let mut days: Vec<i64> = Vec::new();
    for day in 1..=n {
        let mut worst = CompRatio::of_costs(0, 1);
        for t in 1..=n {
            let cost = policies::decision_cost(p, &Decision::BuyOn(day), t)?;
            let ratio = CompRatio::of_costs(cost, opts.opt(t));
            worst = worst.max(ratio);
        }
        if worst < best {
            best = worst;
            days.clear();
            days.push(day);
        } else if worst == best {
            days.push(day);
        }
    }
    // Renting forever: unbounded unless the sequence ends free, in which
    // case it coincides with buying on the terminal free day and never
    // improves on the day set.
    if p.ends_free() {
        let mut worst = CompRatio::of_costs(0, 1);
        for t in 1..=n {
            let cost = policies::decision_cost(p, &Decision::RentForever, t)?;
            worst = worst.max(CompRatio::of_costs(cost, opts.opt(t)));
        }
        debug_assert!(worst >= best);
    }
    Ok((best, days))
}

/// Definition-by-definition recomputation of [`SeqStats`] with plain
/// quadratic scans, used to cross-check the incremental computation.
pub fn naive_stats(p: &PriceSeq) -> Result<SeqStats> {
    p.ensure_complete()?;
    let n = p.len();
    let mut totals = Vec::new();
    for day in 1..=n {
        totals.push(day - 1 + p.price(day)?);
    }
    let min_total = *totals.iter().min().unwrap();
    let first_min = (1..=n).find(|&d| totals[d as usize - 1] == min_total).unwrap();
    let last_min = (1..=n).rev().find(|&d| totals[d as usize - 1] == min_total).unwrap();
    let break_even = (1..=n)
        .find(|&t| (1..=t).map(|d| totals[d as usize - 1]).min().unwrap() <= t)
        .unwrap_or(n);

    let naive_opt = |t: i64| -> i64 {
        (1..=t)
            .map(|d| if d <= n { totals[d as usize - 1] } else { i64::MAX })
            .chain(std::iter::once(t))
            .min()
            .unwrap()
    };

    let (ratio, optimal_days) = if min_total == 0 {
        (Ratio::one(), vec![1])
    } else {
        let tail_min = (min_total.min(n)..=n)
            .map(|d| totals[d as usize - 1])
            .min()
            .unwrap();
        let mut candidates: Vec<(i64, Ratio)> = Vec::new();
        for day in 1..=n {
            if day <= min_total {
                candidates.push((day, Ratio::new(totals[day as usize - 1], naive_opt(day))));
            } else if totals[day as usize - 1] == tail_min {
                candidates.push((day, Ratio::new(totals[day as usize - 1], min_total)));
            }
        }
        let best = candidates.iter().map(|&(_, r)| r).min().unwrap();
        (
            best,
            candidates
                .iter()
                .filter(|&&(_, r)| r == best)
                .map(|&(d, _)| d)
                .collect(),
        )
    };

    let bargain = min_total >= 1 && min_total <= n && p.price(min_total)? == 1;
    let free = min_total + 1 <= n && p.price(min_total + 1)? == 0;
    let wait_rule = match (bargain, free) {
        (true, true) => WaitRule::BargainThenFree { bargain: min_total, free: min_total + 1 },
        (true, false) => WaitRule::BargainDay(min_total),
        (false, true) => WaitRule::FreeDay(min_total + 1),
        (false, false) => WaitRule::None,
    };

    Ok(SeqStats {
        total_costs: totals,
        min_total_cost: min_total,
        first_min_day: first_min,
        last_min_day: last_min,
        break_even_day: break_even,
        best_buy_day: optimal_days[0],
        optimal_ratio: ratio,
        optimal_days,
        wait_rule,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct TradeoffViolation {
    pub lambda: String,
    pub active_days: i64,
    pub predicted_days: i64,
    pub ratio: String,
    pub bound: String,
    pub diagonal: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TradeoffCertificate {
    pub cells_checked: u64,
    pub worst_ratio: CompRatio,
    pub worst_diagonal_ratio: CompRatio,
    pub violations: Vec<TradeoffViolation>,
}

/// Checks the tradeoff rule on one sequence against its own bounds: for
/// every lambda in the grid and every `(active, predicted)` pair, the exact
/// ratio must stay within the robustness bound, and within the consistency
/// bound on the diagonal.
pub fn certify_tradeoff(p: &PriceSeq, lambdas: &[Ratio]) -> Result<TradeoffCertificate> {
    let n = p.len();
    let opts = offline::opt_profile(p, n)?;
    let mut cert = TradeoffCertificate {
        cells_checked: 0,
        worst_ratio: CompRatio::of_costs(0, 1),
        worst_diagonal_ratio: CompRatio::of_costs(0, 1),
        violations: Vec::new(),
    };
    for &lambda in lambdas {
        let plan = TradeoffPlan::new(p, lambda)?;
        let robust = CompRatio::Finite(plan.robustness_bound());
        let consistent = CompRatio::Finite(plan.consistency_bound());
        for predicted in 1..=n {
            let decision = plan.decide(Prediction::new(predicted));
            for active in 1..=n {
                cert.cells_checked += 1;
                let cost = policies::decision_cost(p, &decision, active)?;
                let ratio = CompRatio::of_costs(cost, opts.opt(active));
                cert.worst_ratio = cert.worst_ratio.max(ratio);
                if ratio > robust {
                    cert.violations.push(TradeoffViolation {
                        lambda: lambda.to_string(),
                        active_days: active,
                        predicted_days: predicted,
                        ratio: ratio.to_string(),
                        bound: plan.robustness_bound().to_string(),
                        diagonal: false,
                    });
                }
                if active == predicted {
                    cert.worst_diagonal_ratio = cert.worst_diagonal_ratio.max(ratio);
                    if ratio > consistent {
                        cert.violations.push(TradeoffViolation {
                            lambda: lambda.to_string(),
                            active_days: active,
                            predicted_days: predicted,
                            ratio: ratio.to_string(),
                            bound: plan.consistency_bound().to_string(),
                            diagonal: true,
                        });
                    }
                }
            }
        }
    }
    Ok(cert)
}

/// A complete random sequence: prices drawn uniformly from a band whose
/// width is itself drawn per instance, truncated at the first free day,
/// extended past completeness by a random margin.
pub fn random_complete_seq(rng: &mut SplitMix64, license: i64) -> PriceSeq {
    let band = rng.uniform_int(0, 4);
    let lo = license - license * band / 4;
    let extra = rng.uniform_int(0, license);
    let mut prices = Vec::new();
    let mut min_total = i64::MAX;
    loop {
        let day = prices.len() as i64 + 1;
        let price = rng.uniform_int(lo, license);
        prices.push(price);
        min_total = min_total.min(day - 1 + price);
        if price == 0 || prices.len() as i64 >= min_total + 1 + extra {
            break;
        }
    }
    PriceSeq::new(license, prices).expect("constructed sequences are valid")
}

/// Deterministic corpus of complete random instances.
pub fn random_corpus(count: usize, max_license: i64, seed: u64) -> Vec<PriceSeq> {
    let mut rng = SplitMix64::new(seed);
    (0..count)
        .map(|_| {
            let license = rng.uniform_int(2, max_license);
            random_complete_seq(&mut rng, license)
        })
        .collect()
}

/// Every complete sequence with prices in `[0, license]` and at most
/// `max_len` days.
pub fn enumerate_complete(license: i64, max_len: i64) -> Vec<PriceSeq> {
    let mut out = Vec::new();
    for seq in enumerate_sequences(license, max_len) {
        let p = PriceSeq::new(license, seq.prices).expect("enumerated sequences are valid");
        if p.is_complete() {
            out.push(p);
        }
    }
    // enumerate_sequences emits positive sequences only at full length; the
    // shorter ones are distinct instances here, not prefixes of longer ones.
    for len in 1..max_len {
        let mut buf = vec![1i64; len as usize];
        loop {
            let p = PriceSeq::new(license, buf.clone()).expect("valid");
            if p.is_complete() {
                out.push(p);
            }
            if !bump(&mut buf, 1, license) {
                break;
            }
        }
    }
    out
}

/// Serializable outcome of one certification claim, consumed by the CLI.
#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub claim_id: String,
    pub instance_count: u64,
    pub violations: Vec<String>,
    pub worst_ratio_found: CompRatio,
    pub passed: bool,
}

impl OracleReport {
    fn new(claim_id: &str) -> Self {
        OracleReport {
            claim_id: claim_id.to_string(),
            instance_count: 0,
            violations: Vec::new(),
            worst_ratio_found: CompRatio::of_costs(0, 1),
            passed: true,
        }
    }

    fn fail(&mut self, message: String) {
        self.violations.push(message);
        self.passed = false;
    }
}

/// No-prediction optimum: the exhaustive search must find worst-case ratio
/// `license + 1`, attained exactly by the policies that rent on day 1 and
/// pledge the full price on day 2. Needs `horizon >= license + 2` so that
/// renting long enough is visibly suboptimal.
pub fn certify_thm1(license: i64, horizon: i64, caps: &SearchCaps) -> Result<OracleReport> {
    if horizon < license + 2 {
        return Err(Error::HorizonTooSmall { horizon, required: license + 2 });
    }
    let mut report = OracleReport::new("thm1");
    let search = exhaustive_policy_search(license, horizon, None, caps)?;
    report.instance_count = search.policies_evaluated;
    report.worst_ratio_found = search.optimal_ratio;

    let expected = CompRatio::Finite(Ratio::from_integer(license + 1));
    if search.optimal_ratio != expected {
        report.fail(format!(
            "optimal ratio {} != {} at license {license}",
            search.optimal_ratio, expected
        ));
    }
    let family = |thetas: &[i64]| thetas[0] == 0 && thetas[1] == license;
    for thetas in &search.optimal_policies {
        if !family(thetas) {
            report.fail(format!("unexpected optimal policy {thetas:?}"));
        }
    }
    let expected_count = (license as u64 + 1).pow(horizon as u32 - 2);
    if search.optimal_policies.len() as u64 != expected_count {
        report.fail(format!(
            "optimal family has {} members, expected {expected_count}",
            search.optimal_policies.len()
        ));
    }
    Ok(report)
}

/// Perfect self-prediction: for every predicted horizon up to
/// `max_predicted`, the exhaustive optimum must equal
/// `min(predicted, license + 1)`.
pub fn certify_thm2(license: i64, max_predicted: i64, caps: &SearchCaps) -> Result<OracleReport> {
    let mut report = OracleReport::new("thm2");
    for predicted in 1..=max_predicted {
        let search = exhaustive_policy_search(license, predicted, Some(predicted), caps)?;
        report.instance_count += search.policies_evaluated;
        report.worst_ratio_found = report.worst_ratio_found.max(search.optimal_ratio);
        let expected = CompRatio::Finite(Ratio::from_integer(predicted.min(license + 1)));
        if search.optimal_ratio != expected {
            report.fail(format!(
                "predicted {predicted}: optimal ratio {} != {}",
                search.optimal_ratio, expected
            ));
        }
    }
    Ok(report)
}

/// Known-price optimum: the closed-form ratio and day set must equal the
/// brute-force enumeration on every complete sequence up to the exhaustive
/// bounds, plus a random corpus.
pub fn certify_thm3(
    max_license: i64,
    max_len: i64,
    random_count: usize,
    random_max_license: i64,
    seed: u64,
) -> Result<OracleReport> {
    let mut report = OracleReport::new("thm3");
    let check = |p: &PriceSeq, report: &mut OracleReport| -> Result<()> {
        let (formula_ratio, formula_days) = offline::optimal_ratio_with_days(p)?;
        let (brute_ratio, brute_days) = brute_force_optimal(p)?;
        report.instance_count += 1;
        report.worst_ratio_found = report.worst_ratio_found.max(brute_ratio);
        if CompRatio::Finite(formula_ratio) != brute_ratio || formula_days != brute_days {
            report.fail(format!(
                "sequence {:?} (license {}): formula ({}, {:?}) != brute force ({}, {:?})",
                p.prices(),
                p.license_price(),
                formula_ratio,
                formula_days,
                brute_ratio,
                brute_days
            ));
        }
        Ok(())
    };
    for license in 2..=max_license {
        for p in enumerate_complete(license, max_len) {
            check(&p, &mut report)?;
        }
    }
    let mut rng = SplitMix64::new(seed);
    for _ in 0..random_count {
        let license = rng.uniform_int(2, random_max_license);
        let p = random_complete_seq(&mut rng, license);
        check(&p, &mut report)?;
    }
    Ok(report)
}

/// Tradeoff bounds: full `(active, predicted, lambda)` sweeps on a random
/// corpus must produce no violation of either bound.
pub fn certify_thm6(
    instances: usize,
    max_license: i64,
    lambdas: &[Ratio],
    seed: u64,
) -> Result<OracleReport> {
    let mut report = OracleReport::new("thm6");
    for p in random_corpus(instances, max_license, seed) {
        let cert = certify_tradeoff(&p, lambdas)?;
        report.instance_count += 1;
        report.worst_ratio_found = report.worst_ratio_found.max(cert.worst_ratio);
        for violation in cert.violations {
            report.fail(format!(
                "sequence {:?} (license {}): {}",
                p.prices(),
                p.license_price(),
                serde_json::to_string(&violation).expect("serializable")
            ));
        }
    }
    Ok(report)
}
