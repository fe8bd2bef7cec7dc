//! Trial execution. Each `(m, trial)` pair is an independent work unit with
//! its own random stream, so results do not depend on scheduling.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, Family, LearnerSpec, Marginal};
use crate::aggregation::ensemble_errors;
use crate::constructions::{coupon_trial, random_class, CantorInstance, CouponStats, DEFAULT_EXPLICIT_CAP};
use crate::dimensions::{graph_dimension, DimensionCaps};
use crate::learners::{BadCantorErm, CantorParams, FirstConsistentErm, Learner};
use crate::model::{ExplicitClass, Hypothesis, LabeledDistribution, Point};
use crate::reduction::{lift_distribution, lift_sample, lifted_majority_error, BarLearner, LiftedDistribution};
use crate::rng::RandomSource;
use crate::splitting::{materialize, materialize_items, Splitter};
use crate::{Error, Result};

/// Stream keys under a unit's source.
const SAMPLE_STREAM: u64 = 0;
const SPLIT_STREAM: u64 = 1;
/// Stream key for drawing a random class from the master seed.
const CLASS_STREAM: u64 = u64::MAX;

/// Everything a trial needs, built once per experiment.
pub struct Prepared {
    pub config: ExperimentConfig,
    pub distribution: LabeledDistribution,
    pub lifted: LiftedDistribution,
    pub learner: Box<dyn Learner>,
    pub target: Hypothesis,
    /// The class when it is enumerated.
    pub class: Option<Arc<ExplicitClass>>,
}

impl Prepared {
    pub fn new(config: &ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let (target, class, learner): (Hypothesis, Option<Arc<ExplicitClass>>, Box<dyn Learner>) =
            match config.family {
                Family::Cantor {
                    d,
                    domain_size,
                    explicit,
                } => {
                    let mut params = CantorParams::new(d, domain_size)?;
                    params.epsilon = Some(config.epsilon);
                    let inst = CantorInstance::new(params)?;
                    let class = if explicit {
                        Some(Arc::new(inst.class().explicit(DEFAULT_EXPLICIT_CAP)?))
                    } else {
                        None
                    };
                    let learner: Box<dyn Learner> = match config.learner {
                        LearnerSpec::Bad => Box::new(BadCantorErm::from_class(inst.class().clone())),
                        LearnerSpec::Canonical => Box::new(FirstConsistentErm::new(
                            class.clone().ok_or_else(|| Error::config("canonical ERM needs explicit=true"))?,
                        )),
                    };
                    (inst.target(), class, learner)
                }
                Family::Random {
                    points,
                    labels,
                    hyps,
                    target,
                } => {
                    let mut rng = RandomSource::new(config.seed).fork(&[CLASS_STREAM]).rng();
                    let class = Arc::new(random_class(points, labels, hyps, &mut rng)?);
                    if target >= class.len() {
                        return Err(Error::config(format!(
                            "target {target} is out of range: the drawn class has {} distinct rows",
                            class.len()
                        )));
                    }
                    let learner: Box<dyn Learner> = Box::new(FirstConsistentErm::new(class.clone()));
                    (class.hypothesis(target), Some(class), learner)
                }
            };
        let n = target.domain_size();
        let marginal: Vec<(Point, f64)> = match config.marginal {
            Marginal::Uniform => (1..=n).map(|x| (Point(x), 1.0)).collect(),
            Marginal::Geometric { ratio } => (1..=n).map(|x| (Point(x), ratio.powi(x as i32 - 1))).collect(),
        };
        let distribution = LabeledDistribution::labeled_by(&marginal, &target)?;
        let lifted = lift_distribution(&distribution);
        Ok(Prepared {
            config: config.clone(),
            distribution,
            lifted,
            learner,
            target,
            class,
        })
    }

    /// Brute-force Graph dimension of the enumerated class.
    pub fn graph_dimension(&self) -> Result<Option<usize>> {
        match &self.class {
            Some(c) => Ok(Some(graph_dimension(c, &DimensionCaps::default())?.value)),
            None => Ok(None),
        }
    }
}

/// Exact errors of one trained ensemble.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub m: usize,
    pub trial: usize,
    pub voters: usize,
    /// Majority vote under the configured tie policy.
    pub majority_error: f64,
    pub half_vote_error: f64,
    pub list_error: f64,
    pub bottom_rate: f64,
    /// `maj_⊥` of the lifted voters under the lifted distribution.
    pub lifted_error: f64,
}

impl TrialRecord {
    pub const METRICS: [&'static str; 4] = ["majority_error", "half_vote_error", "list_error", "bottom_rate"];

    pub fn metric(&self, name: &str) -> Option<f64> {
        match name {
            "majority_error" => Some(self.majority_error),
            "half_vote_error" => Some(self.half_vote_error),
            "list_error" => Some(self.list_error),
            "bottom_rate" => Some(self.bottom_rate),
            "lifted_error" => Some(self.lifted_error),
            _ => None,
        }
    }

    /// Whether the multiclass majority error exceeds the lifted error.
    pub fn violates_lift_bound(&self) -> bool {
        self.majority_error > self.lifted_error
    }
}

/// Source of the unit `(m, trial)`.
pub fn unit_source(seed: u64, m: usize, trial: usize) -> RandomSource {
    RandomSource::new(seed).fork(&[m as u64, trial as u64])
}

/// Draws `S ~ D^m`, splits it, trains one voter per part and evaluates the
/// ensemble exactly. The same plan is replayed on `(S, 1⃗)` for the lifted
/// learner.
pub fn run_trial(prep: &Prepared, splitter: &Splitter, m: usize, trial: usize) -> Result<TrialRecord> {
    let unit = unit_source(prep.config.seed, m, trial);
    let sample = prep
        .distribution
        .sample(&mut unit.fork(&[SAMPLE_STREAM]).rng(), m);
    let plan = splitter.plan(m, &unit.fork(&[SPLIT_STREAM]))?;
    let voters = materialize(&plan, &sample)?
        .iter()
        .map(|s| prep.learner.learn(s))
        .collect::<Result<Vec<_>>>()?;
    let errors = ensemble_errors(&voters, &prep.distribution)?;

    let bar = BarLearner::new(&*prep.learner);
    let lifted_voters = materialize_items(&plan, &lift_sample(&sample))?
        .iter()
        .map(|s| bar.learn(s))
        .collect::<Result<Vec<_>>>()?;
    let lifted_error = lifted_majority_error(&lifted_voters, &prep.lifted)?;

    Ok(TrialRecord {
        m,
        trial,
        voters: voters.len(),
        majority_error: errors.majority(prep.config.tie),
        half_vote_error: errors.half_vote,
        list_error: errors.list,
        bottom_rate: errors.bottom_rate,
        lifted_error,
    })
}

/// Records for every `(m, trial)` of the grid, ordered by `m` then trial.
pub fn run_records(prep: &Prepared, splitter: &Splitter, parallel: bool) -> Result<Vec<TrialRecord>> {
    let units: Vec<(usize, usize)> = prep
        .config
        .m_grid
        .iter()
        .flat_map(|&m| (0..prep.config.trials).map(move |t| (m, t)))
        .collect();
    if parallel {
        units
            .par_iter()
            .map(|&(m, t)| run_trial(prep, splitter, m, t))
            .collect()
    } else {
        units.iter().map(|&(m, t)| run_trial(prep, splitter, m, t)).collect()
    }
}

/// Draw counts of `trials` coupon-collector runs, one stream per trial.
pub fn coupon_counts(instance: &CantorInstance, seed: u64, trials: usize) -> Result<Vec<u64>> {
    let root = RandomSource::new(seed);
    (0..trials)
        .into_par_iter()
        .map(|t| coupon_trial(instance, &root.fork(&[t as u64])))
        .collect()
}

/// Coupon-collector statistics for the Cantor instance of `config`.
pub fn run_coupon(config: &ExperimentConfig) -> Result<(CouponStats, Vec<u64>)> {
    let Family::Cantor { d, domain_size, .. } = config.family else {
        return Err(Error::config("the coupon experiment needs the Cantor family"));
    };
    if config.trials == 0 {
        return Err(Error::config("trials must be at least 1"));
    }
    let instance = CantorInstance::new(CantorParams::new(d, domain_size)?)?;
    if d >= domain_size as usize {
        return Err(Error::config("the coupon experiment needs d < domain_size"));
    }
    let counts = coupon_counts(&instance, config.seed, config.trials)?;
    Ok((CouponStats::from_counts(domain_size, d, &counts), counts))
}
