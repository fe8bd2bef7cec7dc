//! The first Cantor class: `h_A(x) = A` for `x` in `A`, `*` otherwise, for all
//! `A` with `|A| <= d` over the universe `[⌈d/(4ε)⌉]`.
//!
//! Set labels are encoded canonically without an interning table: `*` is label
//! 0 and a nonempty set `A` gets `1 + Σ_{j<|A|} C(n, j) + colex_rank(A)`. The
//! explicit materialisation interns labels in exactly this order, so implicit
//! and explicit hypotheses share label identifiers.

use std::sync::Arc;

use itertools::Itertools;

use super::binomial;
use crate::learners::CantorParams;
use crate::model::{
    Domain, ExplicitClass, Hypothesis, HypothesisClass, Label, LabelSpace, LabelValue,
    LabeledDistribution, Point, SetHypothesis, TrainingSequence,
};
use crate::{Error, Result};

/// The `*` label of Cantor-style classes.
pub const STAR: Label = Label(0);

/// Largest explicit class materialised by default.
pub const DEFAULT_EXPLICIT_CAP: usize = 10_000;

/// Canonical bijection between nonempty sets of at most `d` points and labels.
#[derive(Clone, Debug)]
pub struct CantorCoder {
    n: u32,
    d: usize,
    // binom[c][i] = C(c, i) for c <= n, i <= d
    binom: Vec<Vec<u128>>,
    // offsets[k] = first label of a k-set, k = 1..=d; offsets[d + 1] = label count
    offsets: Vec<u128>,
}

impl CantorCoder {
    pub fn new(n: u32, d: usize) -> Result<Self> {
        if d > n as usize {
            return Err(Error::invalid(format!(
                "set-size budget {d} exceeds the universe size {n}"
            )));
        }
        let overflow = || Error::OverCap {
            what: "Cantor label count",
            requested: u128::MAX,
            limit: u64::MAX as u128,
        };
        let mut binom = vec![vec![0u128; d + 1]; n as usize + 1];
        for c in 0..=n as usize {
            binom[c][0] = 1;
            for i in 1..=d.min(c) {
                binom[c][i] = binom[c - 1][i - 1]
                    .checked_add(binom[c - 1][i])
                    .ok_or_else(overflow)?;
            }
        }
        let mut offsets = vec![0u128; d + 2];
        offsets[1] = 1;
        for k in 1..=d {
            offsets[k + 1] = offsets[k]
                .checked_add(binom[n as usize][k])
                .ok_or_else(overflow)?;
        }
        if offsets[d + 1] > u64::MAX as u128 {
            return Err(Error::OverCap {
                what: "Cantor label count",
                requested: offsets[d + 1],
                limit: u64::MAX as u128,
            });
        }
        Ok(CantorCoder { n, d, binom, offsets })
    }

    /// Number of labels, `*` included.
    pub fn label_count(&self) -> u128 {
        self.offsets[self.d + 1]
    }

    /// Label of a nonempty set of at most `d` points. Input order and repeats
    /// do not matter.
    pub fn encode(&self, set: &[Point]) -> Result<Label> {
        let mut points: Vec<u32> = set.iter().map(|p| p.0).collect();
        points.sort_unstable();
        points.dedup();
        let k = points.len();
        if k == 0 || k > self.d {
            return Err(Error::invalid(format!(
                "Cantor set labels need 1..={} points, got {k}",
                self.d
            )));
        }
        if points[0] == 0 || points[k - 1] > self.n {
            return Err(Error::invalid(format!(
                "set {:?} is not inside the universe [{}]",
                points, self.n
            )));
        }
        let rank: u128 = points
            .iter()
            .enumerate()
            .map(|(i, &p)| self.binom[(p - 1) as usize][i + 1])
            .sum();
        Ok(Label((self.offsets[k] + rank) as u64))
    }

    /// Set behind a label; `None` for `*` and for identifiers out of range.
    pub fn decode(&self, label: Label) -> Option<Vec<Point>> {
        let id = label.0 as u128;
        if id == 0 || id >= self.label_count() {
            return None;
        }
        let k = (1..=self.d).find(|&k| id < self.offsets[k + 1])?;
        let mut rank = id - self.offsets[k];
        let mut out = vec![Point(0); k];
        let mut upper = self.n as usize;
        for i in (1..=k).rev() {
            let c = (0..upper).rev().find(|&c| self.binom[c][i] <= rank)?;
            rank -= self.binom[c][i];
            out[i - 1] = Point(c as u32 + 1);
            upper = c;
        }
        Some(out)
    }
}

/// Implicit family `{h_A : |A| <= d}`; never enumerated.
#[derive(Clone, Debug)]
pub struct CantorClass {
    params: CantorParams,
    coder: Arc<CantorCoder>,
}

impl CantorClass {
    pub fn new(params: CantorParams) -> Result<Self> {
        let coder = CantorCoder::new(params.domain_size, params.d)?;
        Ok(CantorClass {
            params,
            coder: Arc::new(coder),
        })
    }

    pub fn params(&self) -> &CantorParams {
        &self.params
    }

    pub fn coder(&self) -> &CantorCoder {
        &self.coder
    }

    pub fn domain(&self) -> Domain {
        Domain::new(self.params.domain_size).expect("Cantor params keep a nonempty domain")
    }

    /// `h_A`; the empty set gives the all-`*` target `f*`.
    pub fn hypothesis(&self, set: &[Point]) -> Result<Hypothesis> {
        let inside = if set.is_empty() {
            STAR
        } else {
            self.coder.encode(set)?
        };
        Ok(Hypothesis::Set(SetHypothesis::new(
            self.domain(),
            set.to_vec(),
            inside,
            STAR,
        )?))
    }

    /// The all-`*` hypothesis `f* = h_∅`.
    pub fn target(&self) -> Hypothesis {
        self.hypothesis(&[]).expect("the empty set is always a member")
    }

    pub fn contains(&self, h: &Hypothesis) -> bool {
        if h.domain_size() != self.params.domain_size {
            return false;
        }
        let table = h.to_table();
        let mut set_label = None;
        for &l in &table {
            if l != STAR {
                match set_label {
                    None => set_label = Some(l),
                    Some(prev) if prev != l => return false,
                    _ => {}
                }
            }
        }
        let Some(label) = set_label else {
            return true;
        };
        let Some(set) = self.coder.decode(label) else {
            return false;
        };
        let emitted: Vec<Point> = (0..table.len())
            .filter(|&i| table[i] == label)
            .map(Point::from_index)
            .collect();
        emitted == set
    }

    /// The unique set label seen in a sample determines the only candidate
    /// `A`; otherwise the sample is all `*` and `f*` fits.
    pub fn consistent_hypothesis(&self, sample: &TrainingSequence) -> Option<Hypothesis> {
        let domain = self.domain();
        if sample.iter().any(|e| !domain.contains(e.point)) {
            return None;
        }
        let mut set_label = None;
        for e in sample {
            if e.label != STAR {
                match set_label {
                    None => set_label = Some(e.label),
                    Some(prev) if prev != e.label => return None,
                    _ => {}
                }
            }
        }
        let h = match set_label {
            None => self.target(),
            Some(label) => {
                let set = self.coder.decode(label)?;
                self.hypothesis(&set).ok()?
            }
        };
        crate::model::is_consistent(&h, sample).then_some(h)
    }

    /// Enumerates every `h_A` (`∅` first, then by size, colex within a size)
    /// as an explicit class whose label identifiers match [`CantorCoder`].
    pub fn explicit(&self, cap: usize) -> Result<ExplicitClass> {
        let n = self.params.domain_size;
        let d = self.params.d;
        let total = (0..=d as u64)
            .map(|k| binomial(n as u64, k))
            .try_fold(0u128, |acc, c| c.and_then(|c| acc.checked_add(c)))
            .unwrap_or(u128::MAX);
        if total > cap as u128 {
            return Err(Error::OverCap {
                what: "explicit Cantor class size",
                requested: total,
                limit: cap as u128,
            });
        }
        let mut labels = LabelSpace::new();
        let star = labels.intern(LabelValue::star());
        debug_assert_eq!(star, STAR);
        let mut rows = vec![vec![STAR; n as usize]];
        for k in 1..=d {
            let mut sets: Vec<Vec<Point>> = (1..=n)
                .map(Point)
                .combinations(k)
                .collect();
            // colex: compare from the largest element down
            sets.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
            for set in sets {
                let label = labels.intern(LabelValue::set(set.iter().map(|p| p.0)));
                debug_assert_eq!(Some(label), self.coder.encode(&set).ok());
                let mut row = vec![STAR; n as usize];
                for p in &set {
                    row[p.index()] = label;
                }
                rows.push(row);
            }
        }
        ExplicitClass::new(n, labels, rows)
    }
}

/// A Cantor class together with its hard distribution `D_{U,f*}`.
#[derive(Clone, Debug)]
pub struct CantorInstance {
    class: CantorClass,
}

impl CantorInstance {
    pub fn new(params: CantorParams) -> Result<Self> {
        Ok(CantorInstance {
            class: CantorClass::new(params)?,
        })
    }

    pub fn params(&self) -> &CantorParams {
        self.class.params()
    }

    pub fn class(&self) -> &CantorClass {
        &self.class
    }

    pub fn hypothesis_class(&self) -> HypothesisClass {
        HypothesisClass::Cantor(self.class.clone())
    }

    pub fn target(&self) -> Hypothesis {
        self.class.target()
    }

    pub fn hypothesis(&self, set: &[Point]) -> Result<Hypothesis> {
        self.class.hypothesis(set)
    }

    /// Uniform over the universe, every point labelled `*`.
    pub fn hard_distribution(&self) -> LabeledDistribution {
        LabeledDistribution::uniform(self.class.domain().points(), &self.target())
            .expect("uniform distribution over a nonempty domain")
    }
}

/// Cantor instance over `[⌈d/(4ε)⌉]`.
pub fn cantor_instance(d: usize, epsilon: f64) -> Result<CantorInstance> {
    CantorInstance::new(CantorParams::from_epsilon(d, epsilon)?)
}

/// Explicit enumeration of `{h_A : |A| <= d}` over `[domain_size]`.
pub fn cantor_explicit(d: usize, domain_size: u32, cap: usize) -> Result<ExplicitClass> {
    CantorClass::new(CantorParams::new(d, domain_size)?)?.explicit(cap)
}
