//! The graph reduction from multiclass to binary classification.
//!
//! A hypothesis `h` becomes the binary `h̄(x, y) = 1{h(x) = y}` over pairs
//! `(x, y)`, a distribution `D` becomes `D₁` supported on triples
//! `(x, y, 1)`, and a learner `A` becomes `Ā`, which drops the bit column and
//! lifts `A`'s output.
//!
//! Pairs are evaluated lazily. The pair domain is materialised (for dimension
//! brute force) only when `|X|·|Y|` is small; its points are numbered
//! x-major, so pair `(x, y)` with `y = Label(j)` is point
//! `(x − 1)·|Y| + j + 1`.

use serde::{Deserialize, Serialize};

use crate::aggregation::{vote, TiePolicy};
use crate::learners::Learner;
use crate::model::{
    ExplicitClass, Hypothesis, Label, LabelSpace, LabeledDistribution, Point, Prediction,
    TrainingSequence,
};
use crate::{Error, Result};

/// Largest pair domain that [`bar_class`] will materialise.
pub const BAR_DOMAIN_CAP: u64 = 100_000;

/// Binary label meaning `h(x) ≠ y`.
pub const BAR_ZERO: Label = Label(0);
/// Binary label meaning `h(x) = y`.
pub const BAR_ONE: Label = Label(1);

/// A point `(x, y)` of the reduced problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BarPoint {
    pub x: Point,
    pub y: Label,
}

impl BarPoint {
    /// Position in the x-major enumeration over `label_count` labels.
    pub fn to_point(self, label_count: usize) -> Point {
        Point((self.x.index() * label_count + self.y.0 as usize + 1) as u32)
    }

    pub fn from_point(p: Point, label_count: usize) -> Self {
        BarPoint {
            x: Point::from_index(p.index() / label_count),
            y: Label((p.index() % label_count) as u64),
        }
    }
}

/// All pairs of a domain of size `domain_size` and `label_count` labels, in
/// x-major order.
pub fn bar_points(domain_size: u32, label_count: usize) -> impl Iterator<Item = BarPoint> {
    (1..=domain_size).flat_map(move |x| {
        (0..label_count as u64).map(move |y| BarPoint {
            x: Point(x),
            y: Label(y),
        })
    })
}

/// `h̄`, evaluated lazily from `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarHypothesis {
    base: Hypothesis,
}

impl BarHypothesis {
    pub fn base(&self) -> &Hypothesis {
        &self.base
    }

    pub fn eval(&self, p: BarPoint) -> Result<bool> {
        Ok(self.base.eval(p.x)? == p.y)
    }

    pub fn eval_label(&self, p: BarPoint) -> Result<Label> {
        Ok(if self.eval(p)? { BAR_ONE } else { BAR_ZERO })
    }

    /// Dense table over the x-major pair domain.
    pub fn to_table(&self, label_count: usize) -> Result<Vec<Label>> {
        check_bar_size(self.base.domain_size(), label_count)?;
        bar_points(self.base.domain_size(), label_count)
            .map(|p| self.eval_label(p))
            .collect()
    }
}

pub fn bar_hypothesis(h: &Hypothesis) -> BarHypothesis {
    BarHypothesis { base: h.clone() }
}

fn check_bar_size(domain_size: u32, label_count: usize) -> Result<u32> {
    let size = domain_size as u64 * label_count as u64;
    if size > BAR_DOMAIN_CAP {
        return Err(Error::OverCap {
            what: "pair domain size",
            requested: size as u128,
            limit: BAR_DOMAIN_CAP as u128,
        });
    }
    if size == 0 {
        return Err(Error::invalid("the pair domain is empty"));
    }
    Ok(size as u32)
}

/// The binary labels `0` and `1` used by every materialised pair class.
pub fn bar_labels() -> LabelSpace {
    LabelSpace::anonymous(2)
}

/// `H̄ = {h̄ : h ∈ H}` over the materialised pair domain.
pub fn bar_class(class: &ExplicitClass) -> Result<ExplicitClass> {
    let k = class.labels().len();
    let size = check_bar_size(class.domain_size(), k)?;
    let rows = class
        .hypotheses()
        .map(|h| bar_hypothesis(&h).to_table(k))
        .collect::<Result<Vec<_>>>()?;
    ExplicitClass::new(size, bar_labels(), rows)
}

/// An example `(x, y, b)` of the reduced problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BarExample {
    pub point: BarPoint,
    pub bit: bool,
}

/// `(S, 1⃗)`: every example of `S` with bit `1`.
pub fn lift_sample(sample: &TrainingSequence) -> Vec<BarExample> {
    sample
        .iter()
        .map(|e| BarExample {
            point: BarPoint {
                x: e.point,
                y: e.label,
            },
            bit: true,
        })
        .collect()
}

/// `(S_X, S_Y)`: the multiclass sequence with the bit column dropped.
pub fn drop_bits(sample: &[BarExample]) -> TrainingSequence {
    sample
        .iter()
        .map(|b| crate::model::Example::new(b.point.x, b.point.y))
        .collect()
}

/// `D₁`, supported on triples `(x, y, 1)` with the masses of `D`.
#[derive(Clone, Debug)]
pub struct LiftedDistribution {
    support: Vec<(BarExample, f64)>,
}

impl LiftedDistribution {
    pub fn support(&self) -> &[(BarExample, f64)] {
        &self.support
    }

    pub fn total_mass(&self) -> f64 {
        self.support.iter().map(|(_, m)| m).sum()
    }

    /// `L_{D₁}(h̄)`: the mass where `h̄` disagrees with the bit.
    pub fn loss(&self, h: &BarHypothesis) -> Result<f64> {
        let mut err = 0.0;
        for (e, mass) in &self.support {
            if h.eval(e.point)? != e.bit {
                err += mass;
            }
        }
        Ok(err)
    }

    /// `D₁` as an ordinary distribution over the materialised pair domain.
    pub fn to_labeled(&self, label_count: usize) -> Result<LabeledDistribution> {
        LabeledDistribution::new(
            self.support
                .iter()
                .map(|(e, m)| {
                    let bit = if e.bit { BAR_ONE } else { BAR_ZERO };
                    (crate::model::Example::new(e.point.to_point(label_count), bit), *m)
                })
                .collect(),
        )
    }
}

pub fn lift_distribution(dist: &LabeledDistribution) -> LiftedDistribution {
    LiftedDistribution {
        support: dist
            .support()
            .iter()
            .map(|(e, m)| {
                (
                    BarExample {
                        point: BarPoint {
                            x: e.point,
                            y: e.label,
                        },
                        bit: true,
                    },
                    *m,
                )
            })
            .collect(),
    }
}

/// `Ā`: trains `A` on `(S_X, S_Y)` and returns the lifted output.
#[derive(Clone, Debug)]
pub struct BarLearner<L> {
    inner: L,
}

impl<L: Learner> BarLearner<L> {
    pub fn new(inner: L) -> Self {
        BarLearner { inner }
    }

    pub fn inner(&self) -> &L {
        &self.inner
    }

    pub fn learn(&self, sample: &[BarExample]) -> Result<BarHypothesis> {
        Ok(bar_hypothesis(&self.inner.learn(&drop_bits(sample))?))
    }
}

/// Error of the binary `maj_⊥` of the lifted voters under `D₁`: a tie
/// between `0` and `1` votes abstains and counts as a mistake.
pub fn lifted_majority_error(fs: &[BarHypothesis], lifted: &LiftedDistribution) -> Result<f64> {
    if fs.is_empty() {
        return Err(Error::invalid("an ensemble needs at least one voter"));
    }
    let mut err = 0.0;
    for (e, mass) in lifted.support() {
        let votes = fs
            .iter()
            .map(|h| h.eval_label(e.point))
            .collect::<Result<Vec<_>>>()?;
        let bit = if e.bit { BAR_ONE } else { BAR_ZERO };
        if vote(&votes, TiePolicy::Idk)? != Prediction::Label(bit) {
            err += mass;
        }
    }
    Ok(err)
}
