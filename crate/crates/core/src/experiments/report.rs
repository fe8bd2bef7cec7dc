//! Aggregates and on-disk reports.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::runner::TrialRecord;
use crate::splitting::Splitter;
use crate::Result;

/// Summary of one metric over the trials at one `m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub mean: f64,
    pub median: f64,
    pub q10: f64,
    pub q90: f64,
    pub max: f64,
    /// Fraction of trials with value `> ε`.
    pub p_above_eps: f64,
    /// Fraction of trials with value `>= 2ε`.
    pub p_at_least_2eps: f64,
}

impl MetricSummary {
    pub fn new(values: &[f64], epsilon: f64) -> Self {
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let n = v.len() as f64;
        MetricSummary {
            mean: v.iter().sum::<f64>() / n,
            median: quantile(&v, 0.5),
            q10: quantile(&v, 0.1),
            q90: quantile(&v, 0.9),
            max: v.last().copied().unwrap_or(f64::NAN),
            p_above_eps: v.iter().filter(|&&x| x > epsilon).count() as f64 / n,
            p_at_least_2eps: v.iter().filter(|&&x| x >= 2.0 * epsilon).count() as f64 / n,
        }
    }
}

/// Linear-interpolation quantile of sorted values.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MAggregate {
    pub m: usize,
    pub trials: usize,
    pub voters_mean: f64,
    pub metrics: BTreeMap<String, MetricSummary>,
    /// `median(majority error) · m / d_G`, when `d_G` is known and positive.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fitted_constant: Option<f64>,
}

/// Per-`m` aggregates of records ordered by `m`.
pub fn aggregate(records: &[TrialRecord], epsilon: f64, graph_dimension: Option<usize>) -> Vec<MAggregate> {
    let mut by_m: BTreeMap<usize, Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        by_m.entry(r.m).or_default().push(r);
    }
    by_m.into_iter()
        .map(|(m, rs)| {
            let metrics: BTreeMap<String, MetricSummary> = TrialRecord::METRICS
                .iter()
                .chain(std::iter::once(&"lifted_error"))
                .map(|&name| {
                    let values: Vec<f64> = rs.iter().filter_map(|r| r.metric(name)).collect();
                    (name.to_string(), MetricSummary::new(&values, epsilon))
                })
                .collect();
            let fitted_constant = graph_dimension
                .filter(|&d| d > 0)
                .map(|d| metrics["majority_error"].median * m as f64 / d as f64);
            MAggregate {
                m,
                trials: rs.len(),
                voters_mean: rs.iter().map(|r| r.voters as f64).sum::<f64>() / rs.len() as f64,
                metrics,
                fitted_constant,
            }
        })
        .collect()
}

/// Sample sizes at which the lower-bound argument predicts failure.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundThresholds {
    /// `d / (16ε)`: below this, the majority fails with constant probability.
    pub d_over_16_eps: f64,
    /// `ln(1/δ) / (8ε)`.
    pub confidence_term: f64,
    /// `d · ln(1/(8 e^{√2} ε)) / (4ε)`: below this, a single bad ERM fails
    /// with constant probability.
    pub single_erm: f64,
}

impl LowerBoundThresholds {
    pub fn new(d: usize, epsilon: f64, delta: f64) -> Self {
        let d = d as f64;
        LowerBoundThresholds {
            d_over_16_eps: d / (16.0 * epsilon),
            confidence_term: (1.0 / delta).ln() / (8.0 * epsilon),
            single_erm: d * (1.0 / (8.0 * std::f64::consts::SQRT_2.exp() * epsilon)).ln() / (4.0 * epsilon),
        }
    }
}

/// Results of one splitter over the whole grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub splitter: Splitter,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph_dimension: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<LowerBoundThresholds>,
    /// Trials where the multiclass majority error exceeded the lifted
    /// binary `maj_⊥` error.
    pub lemma_violations: usize,
    pub aggregates: Vec<MAggregate>,
    #[serde(skip)]
    pub records: Vec<TrialRecord>,
}

impl ExperimentResult {
    pub fn aggregate_at(&self, m: usize) -> Option<&MAggregate> {
        self.aggregates.iter().find(|a| a.m == m)
    }

    pub fn records_at(&self, m: usize) -> impl Iterator<Item = &TrialRecord> {
        self.records.iter().filter(move |r| r.m == m)
    }
}

/// The `summary.json` document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub seed: u64,
    #[serde(flatten)]
    pub result: ExperimentResult,
}

/// Writes `records.csv` (`m,trial,metric,value`) and `summary.json` into
/// `dir`, creating it if needed.
pub fn emit_report(result: &ExperimentResult, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut w = csv::Writer::from_path(dir.join("records.csv"))?;
    w.write_record(["m", "trial", "metric", "value"])?;
    for r in &result.records {
        for name in TrialRecord::METRICS {
            let value = r.metric(name).expect("listed metric");
            w.write_record([r.m.to_string(), r.trial.to_string(), name.to_string(), value.to_string()])?;
        }
    }
    w.flush()?;
    let summary = Summary {
        seed: result.config.seed,
        result: result.clone(),
    };
    let mut json = serde_json::to_string_pretty(&summary)?;
    json.push('\n');
    fs::write(dir.join("summary.json"), json)?;
    Ok(())
}

/// Writes one report per splitter into `dir/<splitter name>/`.
pub fn emit_reports(results: &[ExperimentResult], dir: &Path) -> Result<()> {
    for r in results {
        emit_report(r, &dir.join(r.splitter.name()))?;
    }
    Ok(())
}

/// Writes `draws.csv` (`trial,draws`) and `summary.json` for a coupon run.
pub fn emit_coupon_report(
    config: &ExperimentConfig,
    stats: &crate::constructions::CouponStats,
    counts: &[u64],
    dir: &Path,
) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut w = csv::Writer::from_path(dir.join("draws.csv"))?;
    w.write_record(["trial", "draws"])?;
    for (t, c) in counts.iter().enumerate() {
        w.write_record([t.to_string(), c.to_string()])?;
    }
    w.flush()?;
    let doc = serde_json::json!({ "config": config, "seed": config.seed, "stats": stats });
    let mut json = serde_json::to_string_pretty(&doc)?;
    json.push('\n');
    fs::write(dir.join("summary.json"), json)?;
    Ok(())
}
