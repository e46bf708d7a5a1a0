//! Reproducible Monte-Carlo noise sweeps.
//!
//! One sweep fixes a license price and a price-fluctuation width `z`, then
//! measures the average competitive ratio of the tradeoff rule as the
//! horizon predictor degrades: prices are drawn uniformly from
//! `[B - floor(z*B), B]`, the true active time uniformly from `[1, 4B]`,
//! and the prediction is the true time plus Gaussian noise of standard
//! deviation sigma, rounded and clamped to at least 1.
//!
//! Every sample's ratio is computed exactly and checked against its own
//! robustness bound before entering the float aggregation; a violation
//! aborts the sweep, because it can only mean an implementation bug.
//!
//! Sample streams are keyed by `(seed, cell, sample)` (see [`crate::rng`]),
//! so the output is a pure function of the configuration. The draw order
//! within a sample is: true active time, one Gaussian deviate (two uniform
//! draws, consumed even when sigma is zero), then prices in day order until
//! the instance is fully drawn or truncated by a free day.

use std::io::{self, Write};

use num_traits::One;

use serde::Serialize;

use crate::error::Error;
use crate::offline;
use crate::policies::{decision_cost, Prediction, TradeoffPlan};
use crate::pricecore::PriceSeq;
use crate::ratio::{ceil_to_int, floor_to_int, validate_lambda, CompRatio, Ratio};
use crate::rng::{substream_seed, SplitMix64};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub license: i64,
    /// Price fluctuation width in `[0, 1]`.
    pub z: Ratio,
    pub sigma_grid: Vec<f64>,
    pub samples_per_sigma: u32,
    pub lambdas: Vec<Ratio>,
    pub seed: u64,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.license < 2 {
            return Err(Error::LicensePriceTooSmall(self.license));
        }
        if self.z < Ratio::from_integer(0) || self.z > Ratio::one() {
            return Err(Error::BadSweepConfig(format!("z = {} outside [0, 1]", self.z)));
        }
        if self.sigma_grid.is_empty() {
            return Err(Error::BadSweepConfig("empty sigma grid".into()));
        }
        if self.sigma_grid.iter().any(|&s| !s.is_finite() || s < 0.0) {
            return Err(Error::BadSweepConfig("sigmas must be finite and >= 0".into()));
        }
        if self.samples_per_sigma == 0 {
            return Err(Error::BadSweepConfig("samples_per_sigma must be >= 1".into()));
        }
        if self.lambdas.is_empty() {
            return Err(Error::BadSweepConfig("empty lambda list".into()));
        }
        for &lambda in &self.lambdas {
            validate_lambda(lambda)?;
        }
        Ok(())
    }

    /// Sequence length used for every instance: long enough for completeness
    /// at every price draw (`4B` covers the horizon range) and for the late
    /// buy day of the smallest lambda, which can reach roughly
    /// `optimal_ratio * min_total_cost / lambda <= (2B - 1) / lambda`.
    pub fn instance_len(&self) -> i64 {
        let min_lambda = *self.lambdas.iter().min().expect("validated nonempty");
        let b = self.license;
        let late_window = ceil_to_int(Ratio::from_integer(2 * b - 1) / min_lambda) + b;
        (4 * b).max(late_window)
    }

    fn cell_index(&self, lambda_idx: usize, sigma_idx: usize) -> u64 {
        (lambda_idx * self.sigma_grid.len() + sigma_idx) as u64
    }
}

/// One aggregated grid cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub z: f64,
    pub lambda: f64,
    pub sigma: f64,
    pub mean_ratio: f64,
    pub std_ratio: f64,
    pub n_samples: u32,
}

fn ratio_to_f64(r: Ratio) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Draws the instance of one `(cell, sample)` slot: the price sequence, the
/// true active time, and the (noisy, clamped) predicted time.
pub fn gen_instance(cfg: &SweepConfig, cell: u64, sample: u64) -> (PriceSeq, i64, i64) {
    let mut rng = SplitMix64::new(substream_seed(cfg.seed, cell, sample));
    let sigma = cfg.sigma_grid[(cell as usize) % cfg.sigma_grid.len()];

    let active = rng.uniform_int(1, 4 * cfg.license);
    let noise = sigma * rng.standard_normal();
    let predicted = ((active as f64 + noise).round() as i64).max(1);

    let lo = cfg.license - floor_to_int(cfg.z * Ratio::from_integer(cfg.license));
    let len = cfg.instance_len();
    let mut prices = Vec::with_capacity(len as usize);
    for _ in 0..len {
        let price = rng.uniform_int(lo, cfg.license);
        prices.push(price);
        if price == 0 {
            break;
        }
    }
    let seq = PriceSeq::new(cfg.license, prices).expect("drawn sequences are valid");
    debug_assert!(seq.is_complete());
    (seq, active, predicted)
}

/// Runs the full `(lambda, sigma)` grid. Rows are ordered lambda-major in
/// the order the configuration lists them.
pub fn sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let mut rows = Vec::with_capacity(cfg.lambdas.len() * cfg.sigma_grid.len());
    for (lambda_idx, &lambda) in cfg.lambdas.iter().enumerate() {
        for (sigma_idx, &sigma) in cfg.sigma_grid.iter().enumerate() {
            let cell = cfg.cell_index(lambda_idx, sigma_idx);
            let mut sum = 0.0f64;
            let mut sumsq = 0.0f64;
            for sample in 0..cfg.samples_per_sigma {
                let (seq, active, predicted) = gen_instance(cfg, cell, sample as u64);
                let plan = TradeoffPlan::new(&seq, lambda)?;
                let decision = plan.decide(Prediction::new(predicted));
                let cost = decision_cost(&seq, &decision, active)?;
                let opt = offline::opt_cost(&seq, active)?;
                let ratio = match CompRatio::of_costs(cost, opt) {
                    CompRatio::Finite(r) => r,
                    CompRatio::Unbounded => {
                        return Err(Error::BoundViolation {
                            ratio: "inf".into(),
                            bound: plan.robustness_bound().to_string(),
                        })
                    }
                };
                if ratio > plan.robustness_bound() {
                    return Err(Error::BoundViolation {
                        ratio: ratio.to_string(),
                        bound: plan.robustness_bound().to_string(),
                    });
                }
                let value = ratio_to_f64(ratio);
                sum += value;
                sumsq += value * value;
            }
            let n = cfg.samples_per_sigma as f64;
            let mean = sum / n;
            let std = if cfg.samples_per_sigma > 1 {
                ((sumsq - sum * sum / n) / (n - 1.0)).max(0.0).sqrt()
            } else {
                0.0
            };
            rows.push(SweepRow {
                z: ratio_to_f64(cfg.z),
                lambda: ratio_to_f64(lambda),
                sigma,
                mean_ratio: mean,
                std_ratio: std,
                n_samples: cfg.samples_per_sigma,
            });
        }
    }
    Ok(rows)
}

/// Writes rows in the fixed CSV contract:
/// `z,lambda,sigma,mean_ratio,std_ratio,n`.
pub fn write_csv<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    writeln!(out, "z,lambda,sigma,mean_ratio,std_ratio,n")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            row.z, row.lambda, row.sigma, row.mean_ratio, row.std_ratio, row.n_samples
        )?;
    }
    Ok(())
}

pub fn csv_string(rows: &[SweepRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("csv is ascii")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(z: Ratio, sigmas: &[f64], lambdas: &[Ratio], samples: u32) -> SweepConfig {
        SweepConfig {
            license: 20,
            z,
            sigma_grid: sigmas.to_vec(),
            samples_per_sigma: samples,
            lambdas: lambdas.to_vec(),
            seed: 0xB0B,
        }
    }

    #[test]
    fn zero_width_means_fixed_prices() {
        let cfg = config(Ratio::from_integer(0), &[0.0], &[Ratio::one()], 4);
        for sample in 0..4 {
            let (seq, _, _) = gen_instance(&cfg, 0, sample);
            assert!(seq.prices().iter().all(|&p| p == 20));
            assert_eq!(seq.len(), cfg.instance_len());
        }
    }

    #[test]
    fn zero_noise_means_perfect_prediction() {
        let cfg = config(Ratio::new(1, 2), &[0.0], &[Ratio::one()], 16);
        for sample in 0..16 {
            let (_, active, predicted) = gen_instance(&cfg, 0, sample);
            assert_eq!(active, predicted);
        }
    }

    #[test]
    fn full_width_allows_free_days() {
        let cfg = config(Ratio::one(), &[0.0], &[Ratio::one()], 64);
        let mut saw_truncated = false;
        for sample in 0..64 {
            let (seq, _, _) = gen_instance(&cfg, 0, sample);
            assert!(seq.is_complete());
            saw_truncated |= seq.ends_free();
        }
        assert!(saw_truncated, "free days should occur at z = 1");
    }

    #[test]
    fn instance_len_covers_late_buy_day() {
        let cfg = config(
            Ratio::from_integer(0),
            &[0.0],
            &[Ratio::new(1, 5), Ratio::one()],
            1,
        );
        // late day at lambda 1/5 on the fixed-price instance is
        // floor(B/5 + (2B-1) * 4) = 160 for B = 20
        assert!(cfg.instance_len() >= 160 + 1);
        assert_eq!(cfg.instance_len(), (4 * 20i64).max(195 + 20));
    }

    #[test]
    fn sweep_is_deterministic_and_bounded_below_by_one() {
        let cfg = config(
            Ratio::new(1, 2),
            &[0.0, 10.0],
            &[Ratio::new(1, 5), Ratio::one()],
            40,
        );
        let rows = sweep(&cfg).unwrap();
        let again = sweep(&cfg).unwrap();
        assert_eq!(rows, again);
        assert_eq!(csv_string(&rows), csv_string(&again));
        assert_eq!(rows.len(), 4);
        for row in &rows {
            assert!(row.mean_ratio >= 1.0 - 1e-12, "{row:?}");
        }
        // lambda-major ordering, sigmas in grid order
        assert_eq!((rows[0].lambda, rows[0].sigma), (0.2, 0.0));
        assert_eq!((rows[1].lambda, rows[1].sigma), (0.2, 10.0));
        assert_eq!((rows[2].lambda, rows[2].sigma), (1.0, 0.0));
    }

    #[test]
    fn perfect_predictions_keep_small_lambda_consistent() {
        let cfg = config(
            Ratio::from_integer(0),
            &[0.0],
            &[Ratio::new(1, 5), Ratio::one()],
            60,
        );
        let rows = sweep(&cfg).unwrap();
        // Fixed price, perfect prediction: every sample ratio is at most
        // 1 + lambda, so the mean is too.
        assert!(rows[0].mean_ratio <= 1.2 + 1e-12, "{:?}", rows[0]);
        assert!(rows[0].mean_ratio <= rows[1].mean_ratio + 1e-12);
    }

    #[test]
    fn csv_has_the_pinned_header() {
        let rows = vec![SweepRow {
            z: 0.5,
            lambda: 0.2,
            sigma: 10.0,
            mean_ratio: 1.25,
            std_ratio: 0.5,
            n_samples: 3,
        }];
        assert_eq!(
            csv_string(&rows),
            "z,lambda,sigma,mean_ratio,std_ratio,n\n0.5,0.2,10,1.25,0.5,3\n"
        );
    }

    #[test]
    fn rejects_bad_configs() {
        let mut cfg = config(Ratio::new(1, 2), &[0.0], &[Ratio::one()], 10);
        cfg.z = Ratio::new(3, 2);
        assert!(sweep(&cfg).is_err());
        let mut cfg = config(Ratio::new(1, 2), &[], &[Ratio::one()], 10);
        cfg.samples_per_sigma = 10;
        assert!(sweep(&cfg).is_err());
        let cfg = config(Ratio::new(1, 2), &[0.0], &[Ratio::from_integer(0)], 10);
        assert!(sweep(&cfg).is_err());
    }
}
