//! Index-only splitting schemes.
//!
//! A scheme sees only the length `m` of the training sequence (and its own
//! randomness) and returns lists of 1-based positions. The same plan can be
//! replayed against a multiclass sequence and against its lifted copy, which
//! is what makes per-trial comparisons between the two exact.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::model::TrainingSequence;
use crate::rng::RandomSource;
use crate::{Error, Result};

/// Allowed range of the bag-size fraction.
pub const RHO_RANGE: (f64, f64) = (0.02, 1.0);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum Scheme {
    Identity,
    Hanneke,
    Bagging {
        rho: f64,
        delta: f64,
        seed: u64,
        stream: u64,
    },
    Three,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitPlan {
    pub scheme: Scheme,
    pub m: usize,
    /// 1-based positions into the training sequence.
    pub index_sequences: Vec<Vec<usize>>,
}

impl SplitPlan {
    pub fn len(&self) -> usize {
        self.index_sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index_sequences.is_empty()
    }
}

/// The whole sequence as a single voter (a lone ERM).
pub fn identity_split(m: usize) -> SplitPlan {
    SplitPlan {
        scheme: Scheme::Identity,
        m,
        index_sequences: vec![(1..=m).collect()],
    }
}

/// Recursive quarter split: while more than three examples remain, keep the
/// leading block `S0` of `m − 3⌊m/4⌋` examples and recurse three times, each
/// time handing two of the three following quarters to the accumulated tail.
pub fn hanneke_split(m: usize) -> Result<SplitPlan> {
    if m == 0 {
        return Err(Error::invalid("the recursive split needs m >= 1"));
    }
    let all: Vec<usize> = (1..=m).collect();
    let mut out = Vec::with_capacity(hanneke_count(m));
    hanneke_rec(&all, &[], &mut out);
    Ok(SplitPlan {
        scheme: Scheme::Hanneke,
        m,
        index_sequences: out,
    })
}

fn hanneke_rec(s: &[usize], tail: &[usize], out: &mut Vec<Vec<usize>>) {
    if s.len() <= 3 {
        out.push([s, tail].concat());
        return;
    }
    let q = s.len() / 4;
    let head = s.len() - 3 * q;
    let s0 = &s[..head];
    let s1 = &s[head..head + q];
    let s2 = &s[head + q..head + 2 * q];
    let s3 = &s[head + 2 * q..];
    hanneke_rec(s0, &[s2, s3, tail].concat(), out);
    hanneke_rec(s0, &[s1, s3, tail].concat(), out);
    hanneke_rec(s0, &[s1, s2, tail].concat(), out);
}

/// Number of sub-sequences of [`hanneke_split`] without building them.
pub fn hanneke_count(m: usize) -> usize {
    let mut m = m;
    let mut count = 1;
    while m > 3 {
        m -= 3 * (m / 4);
        count *= 3;
    }
    count
}

/// `⌈18 ln(2m/δ)⌉`, the number of bags.
pub fn bagging_count(m: usize, delta: f64) -> usize {
    (18.0 * (2.0 * m as f64 / delta).ln()).ceil().max(1.0) as usize
}

/// `⌈18 ln(2m/δ)⌉` bags of `⌊ρ m⌋` positions drawn uniformly with
/// replacement.
pub fn bagging_split(m: usize, rho: f64, delta: f64, r: &RandomSource) -> Result<SplitPlan> {
    if m == 0 {
        return Err(Error::invalid("bagging needs m >= 1"));
    }
    if !(RHO_RANGE.0..=RHO_RANGE.1).contains(&rho) {
        return Err(Error::invalid(format!(
            "bag fraction rho = {rho} is outside [{}, {}]",
            RHO_RANGE.0, RHO_RANGE.1
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid(format!("delta = {delta} is outside (0, 1)")));
    }
    let bags = bagging_count(m, delta);
    let size = (rho * m as f64).floor() as usize;
    let mut rng = r.rng();
    let index_sequences = (0..bags)
        .map(|_| (0..size).map(|_| rng.gen_range(1..=m)).collect())
        .collect();
    Ok(SplitPlan {
        scheme: Scheme::Bagging {
            rho,
            delta,
            seed: r.seed,
            stream: r.stream,
        },
        m,
        index_sequences,
    })
}

/// Three consecutive disjoint blocks of `⌊m/3⌋` positions; the remainder is
/// unused.
pub fn three_split(m: usize) -> Result<SplitPlan> {
    if m < 3 {
        return Err(Error::invalid(format!("the three-way split needs m >= 3, got {m}")));
    }
    let b = m / 3;
    Ok(SplitPlan {
        scheme: Scheme::Three,
        m,
        index_sequences: (0..3).map(|j| (j * b + 1..=(j + 1) * b).collect()).collect(),
    })
}

/// Selects the items named by each index sequence.
pub fn materialize_items<T: Clone>(plan: &SplitPlan, items: &[T]) -> Result<Vec<Vec<T>>> {
    if plan.m != items.len() {
        return Err(Error::invalid(format!(
            "plan built for length {} applied to a sequence of length {}",
            plan.m,
            items.len()
        )));
    }
    plan.index_sequences
        .iter()
        .map(|seq| {
            seq.iter()
                .map(|&i| {
                    i.checked_sub(1)
                        .and_then(|i| items.get(i))
                        .cloned()
                        .ok_or_else(|| Error::invalid(format!("index {i} outside [1, {}]", plan.m)))
                })
                .collect()
        })
        .collect()
}

pub fn materialize(plan: &SplitPlan, sample: &TrainingSequence) -> Result<Vec<TrainingSequence>> {
    Ok(materialize_items(plan, sample.examples())?
        .into_iter()
        .map(TrainingSequence::new)
        .collect())
}

/// A splitting scheme with its parameters, ready to plan any length.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum Splitter {
    None,
    Hanneke,
    Bagging { rho: f64, delta: f64 },
    Three,
}

impl Splitter {
    pub fn plan(&self, m: usize, r: &RandomSource) -> Result<SplitPlan> {
        match *self {
            Splitter::None => Ok(identity_split(m)),
            Splitter::Hanneke => hanneke_split(m),
            Splitter::Bagging { rho, delta } => bagging_split(m, rho, delta, r),
            Splitter::Three => three_split(m),
        }
    }

    /// Smallest sequence length the scheme accepts.
    pub fn min_length(&self) -> usize {
        match self {
            Splitter::None => 0,
            Splitter::Hanneke | Splitter::Bagging { .. } => 1,
            Splitter::Three => 3,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Splitter::None => "none",
            Splitter::Hanneke => "hanneke",
            Splitter::Bagging { .. } => "bagging",
            Splitter::Three => "three",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Example, Label, Point};
    use proptest::prelude::*;

    #[test]
    fn hanneke_small_cases() {
        assert_eq!(hanneke_split(3).unwrap().index_sequences, vec![vec![1, 2, 3]]);
        let p = hanneke_split(4).unwrap();
        assert_eq!(
            p.index_sequences,
            vec![vec![1, 3, 4], vec![1, 2, 4], vec![1, 2, 3]]
        );
        assert_eq!(hanneke_split(16).unwrap().len(), 9);
        assert_eq!(hanneke_split(64).unwrap().len(), 27);
        assert!(hanneke_split(0).is_err());
    }

    #[test]
    fn hanneke_excludes_one_quarter_per_branch() {
        // m = 16: S0 = 1..4, quarters 5..8, 9..12, 13..16.
        let p = hanneke_split(16).unwrap();
        let quarters = [5..=8, 9..=12, 13..=16];
        for (branch, chunk) in p.index_sequences.chunks(3).enumerate() {
            for seq in chunk {
                for (j, q) in quarters.iter().enumerate() {
                    let hit = seq.iter().filter(|i| q.contains(*i)).count();
                    if j == branch {
                        assert_eq!(hit, 0);
                    } else {
                        assert_eq!(hit, 4);
                    }
                }
            }
        }
    }

    #[test]
    fn bagging_counts_and_sizes() {
        assert_eq!(bagging_count(100, 0.01), 179);
        let p = bagging_split(10, 1.0, 0.1, &RandomSource::new(5)).unwrap();
        assert!(p.index_sequences.iter().all(|s| s.len() == 10));
        assert_eq!(p, bagging_split(10, 1.0, 0.1, &RandomSource::new(5)).unwrap());
        assert!(bagging_split(10, 0.01, 0.1, &RandomSource::new(5)).is_err());
        assert!(bagging_split(10, 0.5, 1.0, &RandomSource::new(5)).is_err());
        // floor of a fractional bag size
        let p = bagging_split(7, 0.5, 0.1, &RandomSource::new(5)).unwrap();
        assert!(p.index_sequences.iter().all(|s| s.len() == 3));
    }

    #[test]
    fn three_blocks() {
        assert_eq!(
            three_split(9).unwrap().index_sequences,
            vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]
        );
        assert_eq!(three_split(10).unwrap(), SplitPlan { m: 10, ..three_split(9).unwrap() });
        assert_eq!(
            three_split(3).unwrap().index_sequences,
            vec![vec![1], vec![2], vec![3]]
        );
        assert!(three_split(2).is_err());
    }

    #[test]
    fn materialize_examples() {
        let a = Example::new(Point(1), Label(0));
        let b = Example::new(Point(2), Label(1));
        let s = TrainingSequence::new(vec![a, b]);
        assert_eq!(materialize(&identity_split(2), &s).unwrap(), vec![s.clone()]);
        let plan = SplitPlan {
            scheme: Scheme::Identity,
            m: 2,
            index_sequences: vec![vec![2, 2]],
        };
        assert_eq!(
            materialize(&plan, &s).unwrap(),
            vec![TrainingSequence::new(vec![b, b])]
        );
        assert!(materialize(&identity_split(3), &s).is_err());
    }

    proptest! {
        #[test]
        fn hanneke_count_matches_recurrence(m in 1usize..2000) {
            fn rec(m: usize) -> usize {
                if m <= 3 { 1 } else { 3 * rec(m - 3 * (m / 4)) }
            }
            let plan = hanneke_split(m).unwrap();
            prop_assert_eq!(plan.len(), rec(m));
            prop_assert_eq!(hanneke_count(m), rec(m));
            prop_assert!(plan.index_sequences.iter().flatten().all(|&i| (1..=m).contains(&i)));
        }

        #[test]
        fn materialized_parts_are_sub_sequences(
            labels in proptest::collection::vec(0u64..4, 3..60),
            seed in any::<u64>(),
        ) {
            let s: TrainingSequence = labels.iter().enumerate()
                .map(|(i, &l)| Example::new(Point(i as u32 % 7 + 1), Label(l))).collect();
            let r = RandomSource::new(seed);
            for splitter in [Splitter::None, Splitter::Hanneke, Splitter::Three,
                             Splitter::Bagging { rho: 0.5, delta: 0.1 }] {
                let plan = splitter.plan(s.len(), &r).unwrap();
                let parts = materialize(&plan, &s).unwrap();
                prop_assert_eq!(parts.len(), plan.len());
                for part in &parts {
                    prop_assert!(part.is_sub_sequence_of(&s));
                }
            }
        }
    }
}
