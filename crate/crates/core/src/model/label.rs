use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Interned label identifier.
///
/// Identifiers are only meaningful relative to a [`LabelSpace`] (or another
/// canonical coder, such as the Cantor set-label coder). The deliberate-error
/// vote is not a `Label` at all; see [`Prediction::Bottom`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Label(pub u64);

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Structural value behind a label: a named atom (`*`, `$`, `0`, `1`, ...) or
/// a finite set of point identifiers kept sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LabelValue {
    Atom(String),
    Set(Vec<u32>),
}

impl LabelValue {
    pub fn atom(name: impl Into<String>) -> Self {
        LabelValue::Atom(name.into())
    }

    pub fn star() -> Self {
        LabelValue::atom("*")
    }

    /// Canonical set label: elements are sorted and duplicates dropped, so two
    /// structurally equal sets always produce equal values.
    pub fn set(points: impl IntoIterator<Item = u32>) -> Self {
        let mut v: Vec<u32> = points.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        LabelValue::Set(v)
    }
}

impl fmt::Display for LabelValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabelValue::Atom(name) => f.write_str(name),
            LabelValue::Set(points) => {
                f.write_str("{")?;
                for (i, p) in points.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str("}")
            }
        }
    }
}

/// Interning table from label values to dense identifiers `0..len`.
#[derive(Clone, Debug, Default)]
pub struct LabelSpace {
    values: Vec<LabelValue>,
    index: HashMap<LabelValue, Label>,
}

impl LabelSpace {
    pub fn new() -> Self {
        Self::default()
    }

    /// `k` anonymous atoms named `0`, `1`, ..., `k-1`, with identifier `i`
    /// naming atom `i`.
    pub fn anonymous(k: usize) -> Self {
        let mut space = Self::new();
        for i in 0..k {
            space.intern(LabelValue::atom(i.to_string()));
        }
        space
    }

    pub fn intern(&mut self, value: LabelValue) -> Label {
        if let Some(&label) = self.index.get(&value) {
            return label;
        }
        let label = Label(self.values.len() as u64);
        self.values.push(value.clone());
        self.index.insert(value, label);
        label
    }

    pub fn lookup(&self, value: &LabelValue) -> Option<Label> {
        self.index.get(value).copied()
    }

    pub fn value(&self, label: Label) -> Option<&LabelValue> {
        self.values.get(label.0 as usize)
    }

    pub fn contains(&self, label: Label) -> bool {
        (label.0 as usize) < self.values.len()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        (0..self.values.len() as u64).map(Label)
    }
}

/// Output of an aggregate predictor: a label, or `⊥`, the deliberate error.
///
/// `Bottom` never equals any label, so it is always counted as a mistake.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Prediction {
    Label(Label),
    Bottom,
}

impl Prediction {
    pub fn is(&self, label: Label) -> bool {
        matches!(self, Prediction::Label(l) if *l == label)
    }
}
