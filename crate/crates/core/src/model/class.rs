use std::collections::HashMap;
use std::sync::Arc;

use super::{Domain, Hypothesis, Label, LabelSpace, LabelValue, TrainingSequence};
use crate::constructions::CantorClass;
use crate::{Error, Result};

/// A finite class given by its label matrix: one row of `|domain|` labels per
/// hypothesis. Rows are unique and keep the order they were supplied in,
/// which is the enumeration order every ERM tie-break relies on.
#[derive(Clone, Debug)]
pub struct ExplicitClass {
    domain: Domain,
    labels: LabelSpace,
    rows: Vec<Arc<[Label]>>,
    index: HashMap<Arc<[Label]>, usize>,
}

impl ExplicitClass {
    /// Builds a class, dropping repeated rows after their first occurrence.
    pub fn new(domain_size: u32, labels: LabelSpace, rows: Vec<Vec<Label>>) -> Result<Self> {
        let domain = Domain::new(domain_size)?;
        if rows.is_empty() {
            return Err(Error::invalid("a hypothesis class must contain at least one hypothesis"));
        }
        let mut class = ExplicitClass {
            domain,
            labels,
            rows: Vec::with_capacity(rows.len()),
            index: HashMap::with_capacity(rows.len()),
        };
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != domain_size as usize {
                return Err(Error::invalid(format!(
                    "hypothesis {i} has {} labels, expected {domain_size}",
                    row.len()
                )));
            }
            if let Some(bad) = row.iter().find(|l| !class.labels.contains(**l)) {
                return Err(Error::invalid(format!(
                    "hypothesis {i} uses label {bad} outside a label space of size {}",
                    class.labels.len()
                )));
            }
            let row: Arc<[Label]> = row.into();
            if !class.index.contains_key(&row) {
                class.index.insert(row.clone(), class.rows.len());
                class.rows.push(row);
            }
        }
        Ok(class)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn domain_size(&self) -> u32 {
        self.domain.size()
    }

    pub fn labels(&self) -> &LabelSpace {
        &self.labels
    }

    pub fn label_value(&self, label: Label) -> Option<&LabelValue> {
        self.labels.value(label)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_binary(&self) -> bool {
        self.labels.len() == 2
    }

    pub fn row(&self, i: usize) -> &[Label] {
        &self.rows[i]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[Label]> + '_ {
        self.rows.iter().map(|r| &r[..])
    }

    pub fn hypothesis(&self, i: usize) -> Hypothesis {
        Hypothesis::Table(self.rows[i].clone())
    }

    pub fn hypotheses(&self) -> impl ExactSizeIterator<Item = Hypothesis> + '_ {
        self.rows.iter().map(|r| Hypothesis::Table(r.clone()))
    }

    /// Position of `h` in the enumeration, comparing as functions.
    pub fn position(&self, h: &Hypothesis) -> Option<usize> {
        if h.domain_size() != self.domain_size() {
            return None;
        }
        match h {
            Hypothesis::Table(t) => self.index.get(t).copied(),
            Hypothesis::Set(_) => self.index.get(&h.to_table()[..]).copied(),
        }
    }

    pub fn contains(&self, h: &Hypothesis) -> bool {
        self.position(h).is_some()
    }

    /// Index of the first hypothesis (in enumeration order) consistent with
    /// `sample`.
    pub fn first_consistent(&self, sample: &TrainingSequence) -> Option<usize> {
        if sample.iter().any(|e| !self.domain.contains(e.point)) {
            return None;
        }
        self.rows
            .iter()
            .position(|row| sample.iter().all(|e| row[e.point.index()] == e.label))
    }
}

/// A finite hypothesis class, either enumerated or given as a parametric
/// family that answers membership and consistency queries directly.
#[derive(Clone, Debug)]
pub enum HypothesisClass {
    Explicit(Arc<ExplicitClass>),
    Cantor(CantorClass),
}

impl HypothesisClass {
    pub fn domain_size(&self) -> u32 {
        match self {
            HypothesisClass::Explicit(c) => c.domain_size(),
            HypothesisClass::Cantor(c) => c.params().domain_size,
        }
    }

    pub fn is_realizable(&self, sample: &TrainingSequence) -> bool {
        match self {
            HypothesisClass::Explicit(c) => c.first_consistent(sample).is_some(),
            HypothesisClass::Cantor(c) => c.consistent_hypothesis(sample).is_some(),
        }
    }

    pub fn contains(&self, h: &Hypothesis) -> bool {
        match self {
            HypothesisClass::Explicit(c) => c.contains(h),
            HypothesisClass::Cantor(c) => c.contains(h),
        }
    }

    /// Some hypothesis of the class consistent with `sample`, if any.
    pub fn consistent_hypothesis(&self, sample: &TrainingSequence) -> Option<Hypothesis> {
        match self {
            HypothesisClass::Explicit(c) => c.first_consistent(sample).map(|i| c.hypothesis(i)),
            HypothesisClass::Cantor(c) => c.consistent_hypothesis(sample),
        }
    }

    pub fn as_explicit(&self) -> Option<&Arc<ExplicitClass>> {
        match self {
            HypothesisClass::Explicit(c) => Some(c),
            HypothesisClass::Cantor(_) => None,
        }
    }
}

impl From<ExplicitClass> for HypothesisClass {
    fn from(class: ExplicitClass) -> Self {
        HypothesisClass::Explicit(Arc::new(class))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{is_consistent, Example, Point};

    fn two_constants() -> ExplicitClass {
        ExplicitClass::new(
            3,
            LabelSpace::anonymous(2),
            vec![vec![Label(0); 3], vec![Label(1); 3], vec![Label(0); 3]],
        )
        .unwrap()
    }

    #[test]
    fn duplicate_rows_are_dropped() {
        let c = two_constants();
        assert_eq!(c.len(), 2);
        assert_eq!(c.position(&Hypothesis::table(vec![Label(1); 3])), Some(1));
    }

    #[test]
    fn rejects_bad_rows() {
        assert!(ExplicitClass::new(2, LabelSpace::anonymous(2), vec![vec![Label(0)]]).is_err());
        assert!(ExplicitClass::new(1, LabelSpace::anonymous(2), vec![vec![Label(5)]]).is_err());
        assert!(ExplicitClass::new(1, LabelSpace::anonymous(2), vec![]).is_err());
    }

    #[test]
    fn two_constant_class_cannot_fit_mixed_labels() {
        let c: HypothesisClass = two_constants().into();
        assert!(c.is_realizable(&TrainingSequence::empty()));
        let mixed = TrainingSequence::new(vec![
            Example::new(Point(1), Label(0)),
            Example::new(Point(2), Label(1)),
        ]);
        assert!(!c.is_realizable(&mixed));
        let explicit = c.as_explicit().unwrap();
        assert!(explicit.hypotheses().all(|h| !is_consistent(&h, &mixed)));
    }
}
