use std::sync::Arc;

use super::{Domain, Label, Point};
use crate::Result;

/// A total function from a finite domain to labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Hypothesis {
    /// Dense assignment, entry `i` is the label of point `i + 1`.
    Table(Arc<[Label]>),
    /// Closed-form rule parameterised by a set of points.
    Set(SetHypothesis),
}

/// `x -> inside` when `x` is in `set`, `x -> outside` otherwise.
///
/// The Cantor hypotheses `h_A` are the instances with `inside` the canonical
/// label of `A` and `outside = *`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetHypothesis {
    domain: Domain,
    set: Arc<[Point]>,
    inside: Label,
    outside: Label,
}

impl SetHypothesis {
    pub fn new(domain: Domain, set: Vec<Point>, inside: Label, outside: Label) -> Result<Self> {
        let mut set = set;
        set.sort_unstable();
        set.dedup();
        for &p in &set {
            domain.check(p)?;
        }
        Ok(SetHypothesis {
            domain,
            set: set.into(),
            inside,
            outside,
        })
    }

    pub fn set(&self) -> &[Point] {
        &self.set
    }

    pub fn inside_label(&self) -> Label {
        self.inside
    }

    pub fn outside_label(&self) -> Label {
        self.outside
    }

    fn label_at(&self, point: Point) -> Label {
        if self.set.binary_search(&point).is_ok() {
            self.inside
        } else {
            self.outside
        }
    }
}

impl Hypothesis {
    pub fn table(labels: Vec<Label>) -> Self {
        Hypothesis::Table(labels.into())
    }

    pub fn constant(domain: Domain, label: Label) -> Self {
        Hypothesis::table(vec![label; domain.size() as usize])
    }

    pub fn domain_size(&self) -> u32 {
        match self {
            Hypothesis::Table(t) => t.len() as u32,
            Hypothesis::Set(s) => s.domain.size(),
        }
    }

    /// Label at `point`, or `None` when the point lies outside the domain.
    pub fn label_at(&self, point: Point) -> Option<Label> {
        match self {
            Hypothesis::Table(t) => t.get(point.index()).copied().filter(|_| point.0 >= 1),
            Hypothesis::Set(s) => s.domain.contains(point).then(|| s.label_at(point)),
        }
    }

    pub fn eval(&self, point: Point) -> Result<Label> {
        self.label_at(point).ok_or(crate::Error::DomainMismatch {
            point,
            domain_size: self.domain_size(),
        })
    }

    /// Dense label table over the whole domain.
    pub fn to_table(&self) -> Vec<Label> {
        match self {
            Hypothesis::Table(t) => t.to_vec(),
            Hypothesis::Set(s) => s.domain.points().map(|p| s.label_at(p)).collect(),
        }
    }

    /// Functional equality, independent of representation.
    pub fn same_function(&self, other: &Hypothesis) -> bool {
        self.domain_size() == other.domain_size() && self.to_table() == other.to_table()
    }
}
