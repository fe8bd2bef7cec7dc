//! Seeded Monte Carlo experiments over majorities of ERM learners.
//!
//! A run is fully determined by its [`ExperimentConfig`]: every `(m, trial)`
//! unit draws from its own stream forked off the master seed, errors are
//! computed exactly against the finite distribution, and reports list units
//! in grid order.

mod config;
mod report;
mod runner;

pub use config::{ExperimentConfig, Family, LearnerSpec, Marginal};
pub use report::{
    aggregate, emit_coupon_report, emit_report, emit_reports, quantile, ExperimentResult,
    LowerBoundThresholds, MAggregate, MetricSummary, Summary,
};
pub use runner::{coupon_counts, run_coupon, run_records, run_trial, unit_source, Prepared, TrialRecord};

use serde::Serialize;

use crate::splitting::Splitter;
use crate::{Error, Result};

fn thresholds(config: &ExperimentConfig) -> Option<LowerBoundThresholds> {
    match config.family {
        Family::Cantor { d, .. } => Some(LowerBoundThresholds::new(d, config.epsilon, config.delta)),
        Family::Random { .. } => None,
    }
}

fn result_for(prep: &Prepared, splitter: Splitter, graph_dimension: Option<usize>, parallel: bool) -> Result<ExperimentResult> {
    let records = run_records(prep, &splitter, parallel)?;
    let lemma_violations = records.iter().filter(|r| r.violates_lift_bound()).count();
    Ok(ExperimentResult {
        config: prep.config.clone(),
        splitter,
        graph_dimension,
        thresholds: thresholds(&prep.config),
        lemma_violations,
        aggregates: aggregate(&records, prep.config.epsilon, graph_dimension),
        records,
    })
}

/// Runs every configured splitter over the grid, in parallel.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ExperimentResult>> {
    run_experiment_with(config, true)
}

/// As [`run_experiment`], optionally on the calling thread only.
pub fn run_experiment_with(config: &ExperimentConfig, parallel: bool) -> Result<Vec<ExperimentResult>> {
    let prep = Prepared::new(config)?;
    let graph_dimension = prep.graph_dimension()?;
    config
        .splitters
        .iter()
        .map(|&s| result_for(&prep, s, graph_dimension, parallel))
        .collect()
}

/// Lower-bound sweep: the Cantor class with the adversarial ERM, a lone
/// learner and each configured splitter.
pub fn run_lower_bound(config: &ExperimentConfig) -> Result<Vec<ExperimentResult>> {
    if !matches!(config.family, Family::Cantor { .. }) || config.learner != LearnerSpec::Bad {
        return Err(Error::config("the lower-bound experiment needs family=cantor and learner=bad"));
    }
    run_experiment(config)
}

/// Decay of the median majority error along the grid for one splitter.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateCheck {
    pub splitter: Splitter,
    pub grid: Vec<usize>,
    pub medians: Vec<f64>,
    /// `median(m_{i+1}) / median(m_i)`.
    pub ratios: Vec<f64>,
    pub fitted_constants: Vec<f64>,
    /// `max / min` of the fitted constants over the top half of the grid.
    pub top_half_spread: f64,
}

impl RateCheck {
    pub fn from_result(result: &ExperimentResult) -> Result<Self> {
        let grid: Vec<usize> = result.aggregates.iter().map(|a| a.m).collect();
        let medians: Vec<f64> = result
            .aggregates
            .iter()
            .map(|a| a.metrics["majority_error"].median)
            .collect();
        let fitted_constants = result
            .aggregates
            .iter()
            .map(|a| a.fitted_constant)
            .collect::<Option<Vec<f64>>>()
            .ok_or_else(|| Error::config("fitted constants need a certified Graph dimension"))?;
        let ratios = medians.windows(2).map(|w| w[1] / w[0]).collect();
        let top = &fitted_constants[fitted_constants.len() / 2..];
        let max = top.iter().copied().fold(f64::MIN, f64::max);
        let min = top.iter().copied().fold(f64::MAX, f64::min);
        Ok(RateCheck {
            splitter: result.splitter,
            grid,
            medians,
            ratios,
            fitted_constants,
            top_half_spread: max / min,
        })
    }

    /// Whether each doubling step cuts the median by at least `factor`.
    pub fn decays_by(&self, factor: f64) -> bool {
        self.ratios.iter().all(|&r| r <= factor)
    }
}

/// Upper-bound sweep on an enumerated class, whose Graph dimension is
/// brute-forced so the fitted constants are certified.
pub fn run_upper_bound(config: &ExperimentConfig) -> Result<(Vec<ExperimentResult>, Vec<RateCheck>)> {
    let explicit = match config.family {
        Family::Cantor { explicit, .. } => explicit,
        Family::Random { .. } => true,
    };
    if !explicit {
        return Err(Error::config("the upper-bound experiment needs an enumerated class (explicit=true)"));
    }
    let results = run_experiment(config)?;
    let checks = results.iter().map(RateCheck::from_result).collect::<Result<Vec<_>>>()?;
    Ok((results, checks))
}

/// Smallest `m` of the grid at which the median majority error of
/// `splitter` is at most `ε`.
pub fn min_sample_size(config: &ExperimentConfig, splitter: Splitter) -> Result<Option<usize>> {
    let mut config = config.clone();
    config.splitters = vec![splitter];
    let result = run_experiment(&config)?.remove(0);
    Ok(result
        .aggregates
        .iter()
        .find(|a| a.metrics["majority_error"].median <= config.epsilon)
        .map(|a| a.m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aggregation::TiePolicy;

    fn small(splitters: Vec<Splitter>) -> ExperimentConfig {
        let mut c = ExperimentConfig::cantor(3, 0.05).unwrap();
        c.splitters = splitters;
        c.m_grid = vec![0, 6, 30];
        c.trials = 5;
        c.seed = 11;
        c
    }

    #[test]
    fn empty_sample_bad_erm_errs_on_its_set() {
        let c = small(vec![Splitter::None]);
        let prep = Prepared::new(&c).unwrap();
        let r = run_trial(&prep, &Splitter::None, 0, 0).unwrap();
        assert!((r.majority_error - 0.2).abs() < 1e-12);
        assert_eq!(r.voters, 1);
    }

    #[test]
    fn singleton_class_never_errs() {
        let mut c = small(vec![Splitter::None]);
        c.family = Family::Random {
            points: 4,
            labels: 3,
            hyps: 1,
            target: 0,
        };
        c.learner = LearnerSpec::Canonical;
        let out = run_experiment(&c).unwrap();
        assert!(out[0].records.iter().all(|r| r.majority_error == 0.0));
    }

    #[test]
    fn records_are_deterministic_and_schedule_free() {
        let mut c = small(vec![Splitter::Hanneke, Splitter::Three, Splitter::Bagging { rho: 0.5, delta: 0.1 }]);
        c.m_grid = vec![6, 30];
        c.tie = TiePolicy::FirstVoter;
        let a = run_experiment_with(&c, true).unwrap();
        let b = run_experiment_with(&c, false).unwrap();
        let again = run_experiment_with(&c, true).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, again);
        for r in &a {
            assert_eq!(r.lemma_violations, 0);
            assert_eq!(r.records.len(), 10);
        }
    }

    #[test]
    fn lower_bound_requires_cantor_bad() {
        let mut c = small(vec![Splitter::None]);
        c.family = Family::Random {
            points: 4,
            labels: 3,
            hyps: 3,
            target: 0,
        };
        c.learner = LearnerSpec::Canonical;
        assert!(matches!(run_lower_bound(&c), Err(Error::InvalidConfig(_))));
        assert!(matches!(
            run_upper_bound(&small(vec![Splitter::Three])),
            Err(Error::InvalidConfig(_))
        ));
    }
}
