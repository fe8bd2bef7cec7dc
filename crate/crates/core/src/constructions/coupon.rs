//! Coupon collecting on the Cantor universe: draws needed to see all but `d`
//! of the points, the quantity that drives the single-ERM lower bound.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::CantorInstance;
use crate::rng::RandomSource;
use crate::{Error, Result};

/// Number of i.i.d. uniform draws from `[domain_size]` until
/// `domain_size - d` distinct points have appeared.
pub fn coupon_trial_with<R: Rng + ?Sized>(domain_size: u32, d: usize, rng: &mut R) -> u64 {
    let n = domain_size as usize;
    let goal = n.saturating_sub(d);
    let mut seen = vec![false; n];
    let mut distinct = 0;
    let mut draws = 0u64;
    while distinct < goal {
        let x = rng.gen_range(0..n);
        draws += 1;
        if !seen[x] {
            seen[x] = true;
            distinct += 1;
        }
    }
    draws
}

pub fn coupon_trial(instance: &CantorInstance, r: &RandomSource) -> Result<u64> {
    let p = instance.params();
    if p.d >= p.domain_size as usize {
        return Err(Error::invalid(format!(
            "coupon trials need d < |X|, got d = {} and |X| = {}",
            p.d, p.domain_size
        )));
    }
    Ok(coupon_trial_with(p.domain_size, p.d, &mut r.rng()))
}

/// `E[N] = |X| Σ_{i=d+1}^{|X|} 1/i`.
pub fn coupon_exact_mean(domain_size: u32, d: usize) -> f64 {
    let n = domain_size as f64;
    n * (d + 1..=domain_size as usize).map(|i| 1.0 / i as f64).sum::<f64>()
}

/// `Var[N] = |X| Σ_{i=d+1}^{|X|} (|X| − i)/i²`.
pub fn coupon_exact_variance(domain_size: u32, d: usize) -> f64 {
    let n = domain_size as f64;
    n * (d + 1..=domain_size as usize)
        .map(|i| (n - i as f64) / (i as f64 * i as f64))
        .sum::<f64>()
}

/// `|X| ln((|X| + 1)/(d + 1))`, a lower bound on `E[N]`.
pub fn coupon_mean_lower_bound(domain_size: u32, d: usize) -> f64 {
    let n = domain_size as f64;
    n * ((n + 1.0) / (d as f64 + 1.0)).ln()
}

/// `|X|² / d`, an upper bound on `Var[N]`.
pub fn coupon_variance_bound(domain_size: u32, d: usize) -> f64 {
    let n = domain_size as f64;
    n * n / d as f64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouponStats {
    pub domain_size: u32,
    pub d: usize,
    pub trials: usize,
    pub min_draws: u64,
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    pub exact_mean: f64,
    pub exact_variance: f64,
    pub mean_lower_bound: f64,
    pub variance_bound: f64,
}

impl CouponStats {
    pub fn from_counts(domain_size: u32, d: usize, counts: &[u64]) -> Self {
        let trials = counts.len();
        let mean = counts.iter().map(|&c| c as f64).sum::<f64>() / trials.max(1) as f64;
        let variance = if trials > 1 {
            counts
                .iter()
                .map(|&c| (c as f64 - mean).powi(2))
                .sum::<f64>()
                / (trials - 1) as f64
        } else {
            0.0
        };
        CouponStats {
            domain_size,
            d,
            trials,
            min_draws: counts.iter().copied().min().unwrap_or(0),
            mean,
            variance,
            exact_mean: coupon_exact_mean(domain_size, d),
            exact_variance: coupon_exact_variance(domain_size, d),
            mean_lower_bound: coupon_mean_lower_bound(domain_size, d),
            variance_bound: coupon_variance_bound(domain_size, d),
        }
    }

    pub fn relative_mean_error(&self) -> f64 {
        (self.mean - self.exact_mean).abs() / self.exact_mean
    }
}
