//! Domain, label, hypothesis, sample and distribution types.
//!
//! Everything here is immutable once built and cheap to share between
//! worker threads: dense hypotheses hold their label table behind an `Arc`.

mod class;
mod distribution;
mod hypothesis;
mod label;
mod sample;

pub use class::{ExplicitClass, HypothesisClass};
pub use distribution::{loss_exact, LabeledDistribution};
pub use hypothesis::{Hypothesis, SetHypothesis};
pub use label::{Label, LabelSpace, LabelValue, Prediction};
pub use sample::{is_consistent, is_realizable, Example, TrainingSequence};

use std::fmt;

use serde::{Deserialize, Serialize};

/// Identifier of a domain point. Points of a domain of size `n` are `1..=n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub u32);

impl Point {
    /// Zero-based position of the point in its domain.
    pub fn index(self) -> usize {
        (self.0 as usize).wrapping_sub(1)
    }

    pub fn from_index(index: usize) -> Self {
        Point(index as u32 + 1)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A finite, nonempty domain `{1, ..., size}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Domain {
    size: u32,
}

impl Domain {
    pub fn new(size: u32) -> crate::Result<Self> {
        if size == 0 {
            return Err(crate::Error::invalid("a domain must contain at least one point"));
        }
        Ok(Domain { size })
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn contains(&self, point: Point) -> bool {
        point.0 >= 1 && point.0 <= self.size
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + Clone {
        (1..=self.size).map(Point)
    }

    pub(crate) fn check(&self, point: Point) -> crate::Result<()> {
        if self.contains(point) {
            Ok(())
        } else {
            Err(crate::Error::DomainMismatch {
                point,
                domain_size: self.size,
            })
        }
    }
}
