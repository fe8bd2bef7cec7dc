use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{Hypothesis, HypothesisClass, Label, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Example {
    pub point: Point,
    pub label: Label,
}

impl Example {
    pub fn new(point: Point, label: Label) -> Self {
        Example { point, label }
    }
}

/// Ordered list of labelled examples. Duplicates are allowed and order
/// matters: splitting schemes address examples by position.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TrainingSequence {
    examples: Vec<Example>,
}

impl TrainingSequence {
    pub fn new(examples: Vec<Example>) -> Self {
        TrainingSequence { examples }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn examples(&self) -> &[Example] {
        &self.examples
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Example> {
        self.examples.iter()
    }

    pub fn push(&mut self, example: Example) {
        self.examples.push(example);
    }

    /// `true` when every example of `self` occurs in `other`, with any
    /// multiplicity. This is the sub-training-sequence relation used by
    /// splitting schemes (repetition permitted).
    pub fn is_sub_sequence_of(&self, other: &TrainingSequence) -> bool {
        let present: std::collections::HashSet<&Example> = other.examples.iter().collect();
        self.examples.iter().all(|e| present.contains(e))
    }

    /// Multiset inclusion: every example occurs in `other` at least as often.
    pub fn is_sub_multiset_of(&self, other: &TrainingSequence) -> bool {
        let mut counts: HashMap<&Example, usize> = HashMap::new();
        for e in &other.examples {
            *counts.entry(e).or_default() += 1;
        }
        for e in &self.examples {
            match counts.get_mut(e) {
                Some(c) if *c > 0 => *c -= 1,
                _ => return false,
            }
        }
        true
    }
}

impl FromIterator<Example> for TrainingSequence {
    fn from_iter<I: IntoIterator<Item = Example>>(iter: I) -> Self {
        TrainingSequence::new(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a TrainingSequence {
    type Item = &'a Example;
    type IntoIter = std::slice::Iter<'a, Example>;

    fn into_iter(self) -> Self::IntoIter {
        self.examples.iter()
    }
}

/// `h(x) = y` for every `(x, y)` in the sequence. Points outside the domain
/// of `h` count as disagreements.
pub fn is_consistent(h: &Hypothesis, sample: &TrainingSequence) -> bool {
    sample.iter().all(|e| h.label_at(e.point) == Some(e.label))
}

pub fn is_realizable(class: &HypothesisClass, sample: &TrainingSequence) -> bool {
    class.is_realizable(sample)
}
