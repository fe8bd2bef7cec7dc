//! Learners: the ERM contract, a deterministic first-consistent ERM, and the
//! adversarial ERM on the Cantor class that places its whole set budget on
//! the smallest unseen points.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::constructions::{CantorClass, STAR};
use crate::model::{Domain, ExplicitClass, Hypothesis, Point, TrainingSequence};
use crate::{Error, Result};

/// A deterministic map from training sequences to hypotheses.
pub trait Learner: Send + Sync {
    fn learn(&self, sample: &TrainingSequence) -> Result<Hypothesis>;

    /// Whether every output lies in the learner's class.
    fn is_proper(&self) -> bool {
        false
    }

    fn name(&self) -> &str;
}

impl<L: Learner + ?Sized> Learner for &L {
    fn learn(&self, sample: &TrainingSequence) -> Result<Hypothesis> {
        (**self).learn(sample)
    }

    fn is_proper(&self) -> bool {
        (**self).is_proper()
    }

    fn name(&self) -> &str {
        (**self).name()
    }
}

impl<L: Learner + ?Sized> Learner for Box<L> {
    fn learn(&self, sample: &TrainingSequence) -> Result<Hypothesis> {
        (**self).learn(sample)
    }

    fn is_proper(&self) -> bool {
        (**self).is_proper()
    }

    fn name(&self) -> &str {
        (**self).name()
    }
}

/// First hypothesis of an explicit class, in enumeration order, that is
/// consistent with the sample.
pub fn erm_first_consistent(class: &ExplicitClass, sample: &TrainingSequence) -> Result<Hypothesis> {
    class
        .first_consistent(sample)
        .map(|i| class.hypothesis(i))
        .ok_or(Error::NoConsistentHypothesis)
}

#[derive(Clone, Debug)]
pub struct FirstConsistentErm {
    class: Arc<ExplicitClass>,
}

impl FirstConsistentErm {
    pub fn new(class: Arc<ExplicitClass>) -> Self {
        FirstConsistentErm { class }
    }

    pub fn class(&self) -> &Arc<ExplicitClass> {
        &self.class
    }
}

impl Learner for FirstConsistentErm {
    fn learn(&self, sample: &TrainingSequence) -> Result<Hypothesis> {
        erm_first_consistent(&self.class, sample)
    }

    fn is_proper(&self) -> bool {
        true
    }

    fn name(&self) -> &str {
        "erm"
    }
}

/// Ignores its input and always returns the same function.
#[derive(Clone, Debug)]
pub struct FixedLearner(pub Hypothesis);

impl Learner for FixedLearner {
    fn learn(&self, _sample: &TrainingSequence) -> Result<Hypothesis> {
        Ok(self.0.clone())
    }

    fn name(&self) -> &str {
        "fixed"
    }
}

/// Parameters of a Cantor instance: set budget `d` over `[domain_size]`,
/// normally `domain_size = ⌈d/(4ε)⌉`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CantorParams {
    pub d: usize,
    pub domain_size: u32,
    pub epsilon: Option<f64>,
}

/// Threshold above which the lower-bound argument no longer applies.
pub const CANTOR_EPSILON_MAX: f64 = 0.01;

impl CantorParams {
    pub fn new(d: usize, domain_size: u32) -> Result<Self> {
        if domain_size == 0 {
            return Err(Error::invalid("the Cantor universe must be nonempty"));
        }
        if d > domain_size as usize {
            return Err(Error::invalid(format!(
                "d = {d} exceeds the universe size {domain_size}"
            )));
        }
        Ok(CantorParams {
            d,
            domain_size,
            epsilon: None,
        })
    }

    /// Universe `[⌈d/(4ε)⌉]`. Values of `ε` above 1/100 are accepted with a
    /// warning.
    pub fn from_epsilon(d: usize, epsilon: f64) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("the Cantor budget d must be at least 1"));
        }
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::invalid(format!("epsilon {epsilon} is outside (0, 1]")));
        }
        if epsilon > CANTOR_EPSILON_MAX {
            log::warn!(
                "epsilon = {epsilon} is above {CANTOR_EPSILON_MAX}; lower-bound guarantees may not hold"
            );
        }
        let mut params = Self::new(d, domain_size_for(d, epsilon))?;
        params.epsilon = Some(epsilon);
        Ok(params)
    }

    pub fn domain(&self) -> Domain {
        Domain::new(self.domain_size).expect("validated on construction")
    }
}

/// `⌈d/(4ε)⌉`, snapping quotients within floating-point noise of an integer
/// (so `d = 10, ε = 0.01` gives 250, not 251).
pub fn domain_size_for(d: usize, epsilon: f64) -> u32 {
    let q = d as f64 / (4.0 * epsilon);
    let r = q.round();
    let size = if (q - r).abs() <= 1e-9 * r.max(1.0) {
        r
    } else {
        q.ceil()
    };
    size.max(1.0) as u32
}

/// Points of the universe that do not occur in the sample, ascending.
pub fn unseen_points(params: &CantorParams, sample: &TrainingSequence) -> Vec<Point> {
    let mut seen = vec![false; params.domain_size as usize];
    for e in sample {
        if let Some(s) = seen.get_mut(e.point.index()) {
            *s = true;
        }
    }
    (0..seen.len())
        .filter(|&i| !seen[i])
        .map(Point::from_index)
        .collect()
}

/// The set `A_S` chosen by the adversarial ERM: the `d` smallest unseen
/// points, or every unseen point when fewer than `d` remain.
pub fn bad_erm_set(params: &CantorParams, sample: &TrainingSequence) -> Result<Vec<Point>> {
    let domain = params.domain();
    for e in sample {
        domain.check(e.point)?;
        if e.label != STAR {
            return Err(Error::invalid(format!(
                "the adversarial ERM is only defined on all-* samples; point {} has label {}",
                e.point, e.label
            )));
        }
    }
    let mut unseen = unseen_points(params, sample);
    unseen.truncate(params.d);
    Ok(unseen)
}

/// Output of the adversarial ERM on `sample`: `h_{A_S}`.
pub fn erm_bad_cantor(params: &CantorParams, sample: &TrainingSequence) -> Result<Hypothesis> {
    BadCantorErm::new(*params)?.learn(sample)
}

#[derive(Clone, Debug)]
pub struct BadCantorErm {
    class: CantorClass,
}

impl BadCantorErm {
    pub fn new(params: CantorParams) -> Result<Self> {
        Ok(BadCantorErm {
            class: CantorClass::new(params)?,
        })
    }

    pub fn from_class(class: CantorClass) -> Self {
        BadCantorErm { class }
    }

    pub fn params(&self) -> &CantorParams {
        self.class.params()
    }
}

impl Learner for BadCantorErm {
    fn learn(&self, sample: &TrainingSequence) -> Result<Hypothesis> {
        let set = bad_erm_set(self.class.params(), sample)?;
        self.class.hypothesis(&set)
    }

    fn is_proper(&self) -> bool {
        true
    }

    fn name(&self) -> &str {
        "erm-bad"
    }
}
