//! Properness numbers: the fewest hypotheses of a class whose pointwise
//! labels cover a function.
//!
//! Hypothesis `h` covers point `x` when `h(x) = f(x)`, so the properness
//! number of `f` is a minimum set cover of the domain. The exact solver is a
//! branch and bound seeded by the greedy cover; an exhaustive subset search
//! is kept as a cross-check for small classes.

use std::fmt;

use itertools::Itertools;
use serde::{Serialize, Serializer};

use crate::learners::Learner;
use crate::model::{ExplicitClass, Hypothesis, TrainingSequence};
use crate::{Error, Result};

/// A properness number: finite, or infinite when some point is covered by no
/// hypothesis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Properness {
    Finite(usize),
    Infinite,
}

impl Properness {
    pub fn finite(&self) -> Option<usize> {
        match self {
            Properness::Finite(n) => Some(*n),
            Properness::Infinite => None,
        }
    }
}

impl fmt::Display for Properness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Properness::Finite(n) => n.fmt(f),
            Properness::Infinite => f.write_str("infinity"),
        }
    }
}

impl Serialize for Properness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Properness::Finite(n) => s.serialize_u64(*n as u64),
            Properness::Infinite => s.serialize_str("infinity"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropernessResult {
    pub value: Properness,
    /// Class row indices of a cover of size `value`; empty when infinite.
    pub cover: Vec<usize>,
}

/// Fixed-width bit set over domain points.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn count_and_not(&self, other: &Bits) -> usize {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a & !b).count_ones() as usize)
            .sum()
    }

    fn union_with(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }
}

struct CoverProblem {
    n: usize,
    covers: Vec<Bits>,
    /// For each point, the hypotheses covering it.
    coverers: Vec<Vec<usize>>,
}

impl CoverProblem {
    fn new(f: &Hypothesis, class: &ExplicitClass) -> Result<Self> {
        if f.domain_size() != class.domain_size() {
            return Err(Error::invalid(format!(
                "function has domain size {}, class has {}",
                f.domain_size(),
                class.domain_size()
            )));
        }
        let target = f.to_table();
        let n = target.len();
        let mut covers = Vec::with_capacity(class.len());
        let mut coverers = vec![Vec::new(); n];
        for (i, row) in class.rows().enumerate() {
            let mut bits = Bits::empty(n);
            for x in 0..n {
                if row[x] == target[x] {
                    bits.set(x);
                    coverers[x].push(i);
                }
            }
            covers.push(bits);
        }
        Ok(CoverProblem { n, covers, coverers })
    }

    fn coverable(&self) -> bool {
        self.coverers.iter().all(|c| !c.is_empty())
    }

    fn is_cover(&self, chosen: &[usize]) -> bool {
        let mut covered = Bits::empty(self.n);
        for &i in chosen {
            covered.union_with(&self.covers[i]);
        }
        (0..self.n).all(|x| covered.get(x))
    }

    fn greedy(&self) -> Vec<usize> {
        let mut covered = Bits::empty(self.n);
        let mut remaining = self.n;
        let mut chosen = Vec::new();
        while remaining > 0 {
            let (best, gain) = self
                .covers
                .iter()
                .enumerate()
                .map(|(i, c)| (i, c.count_and_not(&covered)))
                .fold((0, 0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
            debug_assert!(gain > 0, "greedy called on an uncoverable instance");
            covered.union_with(&self.covers[best]);
            remaining -= gain;
            chosen.push(best);
        }
        chosen
    }

    fn branch_and_bound(&self) -> Vec<usize> {
        let mut best = self.greedy();
        // Points with the fewest coverers first: they branch the least.
        let order: Vec<usize> = (0..self.n)
            .sorted_by_key(|&x| (self.coverers[x].len(), x))
            .collect();
        let max_gain = self.covers.iter().map(|c| c.count_and_not(&Bits::empty(self.n))).max().unwrap_or(0);
        let mut chosen = Vec::new();
        self.search(&order, &Bits::empty(self.n), self.n, max_gain, &mut chosen, &mut best);
        best
    }

    fn search(
        &self,
        order: &[usize],
        covered: &Bits,
        remaining: usize,
        max_gain: usize,
        chosen: &mut Vec<usize>,
        best: &mut Vec<usize>,
    ) {
        if remaining == 0 {
            if chosen.len() < best.len() {
                *best = chosen.clone();
            }
            return;
        }
        // Any completion needs at least ceil(remaining / max_gain) more sets.
        if chosen.len() + remaining.div_ceil(max_gain) >= best.len() {
            return;
        }
        let x = *order
            .iter()
            .find(|&&x| !covered.get(x))
            .expect("remaining > 0 implies an uncovered point");
        let branches: Vec<(usize, usize)> = self.coverers[x]
            .iter()
            .map(|&i| (i, self.covers[i].count_and_not(covered)))
            .sorted_by_key(|&(i, gain)| (std::cmp::Reverse(gain), i))
            .collect();
        for (i, gain) in branches {
            let mut next = covered.clone();
            next.union_with(&self.covers[i]);
            chosen.push(i);
            self.search(order, &next, remaining - gain, max_gain, chosen, best);
            chosen.pop();
        }
    }
}

fn finish(problem: &CoverProblem, mut cover: Vec<usize>) -> PropernessResult {
    cover.sort_unstable();
    debug_assert!(problem.is_cover(&cover));
    PropernessResult {
        value: Properness::Finite(cover.len()),
        cover,
    }
}

fn infinite() -> PropernessResult {
    PropernessResult {
        value: Properness::Infinite,
        cover: Vec::new(),
    }
}

/// Exact properness number of `f` with respect to `class`.
pub fn properness_exact(f: &Hypothesis, class: &ExplicitClass) -> Result<PropernessResult> {
    let problem = CoverProblem::new(f, class)?;
    if !problem.coverable() {
        return Ok(infinite());
    }
    let cover = problem.branch_and_bound();
    Ok(finish(&problem, cover))
}

/// Greedy cover: an upper bound on the properness number.
pub fn properness_greedy(f: &Hypothesis, class: &ExplicitClass) -> Result<PropernessResult> {
    let problem = CoverProblem::new(f, class)?;
    if !problem.coverable() {
        return Ok(infinite());
    }
    let cover = problem.greedy();
    Ok(finish(&problem, cover))
}

/// Largest class accepted by [`properness_exhaustive`].
pub const EXHAUSTIVE_CAP: usize = 20;

/// Properness by trying every subset in order of size. Exponential; meant as
/// an independent check of [`properness_exact`].
pub fn properness_exhaustive(f: &Hypothesis, class: &ExplicitClass) -> Result<PropernessResult> {
    if class.len() > EXHAUSTIVE_CAP {
        return Err(Error::OverCap {
            what: "class size for exhaustive properness",
            requested: class.len() as u128,
            limit: EXHAUSTIVE_CAP as u128,
        });
    }
    let problem = CoverProblem::new(f, class)?;
    for size in 1..=class.len() {
        if let Some(cover) = (0..class.len()).combinations(size).find(|c| problem.is_cover(c)) {
            return Ok(finish(&problem, cover));
        }
    }
    Ok(infinite())
}

/// Whether `cover` certifies `f`: every point's label is produced by some
/// hypothesis in it.
pub fn verify_cover(f: &Hypothesis, class: &ExplicitClass, cover: &[usize]) -> Result<bool> {
    if cover.iter().any(|&i| i >= class.len()) {
        return Ok(false);
    }
    Ok(CoverProblem::new(f, class)?.is_cover(cover))
}

/// Properness of a learner over a finite set of realizable samples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LearnerProperness {
    /// Largest properness number seen; a lower bound on the supremum over all
    /// realizable samples.
    pub lower_bound: Properness,
    /// Index of the sample attaining it.
    pub worst_sample: usize,
    pub cover: Vec<usize>,
}

/// Maximum properness number of the learner's outputs over `samples`.
pub fn learner_properness<L: Learner + ?Sized>(
    learner: &L,
    class: &ExplicitClass,
    samples: &[TrainingSequence],
) -> Result<LearnerProperness> {
    if samples.is_empty() {
        return Err(Error::invalid("learner properness needs at least one sample"));
    }
    let mut best: Option<LearnerProperness> = None;
    for (i, s) in samples.iter().enumerate() {
        if class.first_consistent(s).is_none() {
            return Err(Error::invalid(format!("sample {i} is not realizable by the class")));
        }
        let r = properness_exact(&learner.learn(s)?, class)?;
        if best.as_ref().is_none_or(|b| r.value > b.lower_bound) {
            best = Some(LearnerProperness {
                lower_bound: r.value,
                worst_sample: i,
                cover: r.cover,
            });
        }
    }
    Ok(best.expect("samples is nonempty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{properness_witness, random_class, two_constant_class, STAR};
    use crate::learners::{FirstConsistentErm, FixedLearner};
    use crate::model::{Label, LabelSpace, Point};
    use crate::rng::RandomSource;
    use proptest::prelude::*;
    use rand::Rng;
    use std::sync::Arc;

    #[test]
    fn members_have_properness_one() {
        let class = random_class(5, 3, 10, &mut RandomSource::new(1).rng()).unwrap();
        for h in class.hypotheses() {
            let r = properness_exact(&h, &class).unwrap();
            assert_eq!(r.value, Properness::Finite(1));
            assert_eq!(properness_greedy(&h, &class).unwrap().value, Properness::Finite(1));
        }
    }

    #[test]
    fn two_constants_cover_every_binary_function() {
        let class = two_constant_class(4).unwrap();
        for mask in 1..15u64 {
            let f = Hypothesis::table((0..4).map(|i| Label(mask >> i & 1)).collect());
            let r = properness_exact(&f, &class).unwrap();
            assert_eq!(r.value, Properness::Finite(2));
            assert!(verify_cover(&f, &class, &r.cover).unwrap());
        }
    }

    #[test]
    fn unmatched_point_is_infinite() {
        let class = ExplicitClass::new(2, LabelSpace::anonymous(3), vec![vec![Label(0), Label(1)]]).unwrap();
        let f = Hypothesis::table(vec![Label(2), Label(1)]);
        assert_eq!(properness_exact(&f, &class).unwrap().value, Properness::Infinite);
        assert_eq!(properness_exhaustive(&f, &class).unwrap().value, Properness::Infinite);
    }

    #[test]
    fn all_star_function_on_witness_block() {
        let w = properness_witness(4).unwrap();
        let star = Hypothesis::table(vec![STAR; 4]);
        let r = properness_exact(&star, &w.class).unwrap();
        assert_eq!(r.value, Properness::Finite(2));
        let lp = learner_properness(&FixedLearner(star), &w.class, &[TrainingSequence::empty()]).unwrap();
        assert_eq!(lp.lower_bound, Properness::Finite(2));
    }

    #[test]
    fn proper_learners_score_one() {
        let class = Arc::new(random_class(4, 3, 8, &mut RandomSource::new(9).rng()).unwrap());
        let mut rng = RandomSource::new(10).rng();
        let samples: Vec<TrainingSequence> = (0..20)
            .map(|_| {
                let h = class.hypothesis(rng.gen_range(0..class.len()));
                (0..rng.gen_range(0..5))
                    .map(|_| {
                        let x = Point(rng.gen_range(1..=4));
                        crate::model::Example::new(x, h.eval(x).unwrap())
                    })
                    .collect()
            })
            .collect();
        let erm = FirstConsistentErm::new(class.clone());
        assert_eq!(learner_properness(&erm, &class, &samples).unwrap().lower_bound, Properness::Finite(1));
        let bad = TrainingSequence::new(vec![
            crate::model::Example::new(Point(1), Label(0)),
            crate::model::Example::new(Point(1), Label(1)),
        ]);
        assert!(learner_properness(&erm, &class, &[bad]).is_err());
    }

    proptest! {
        #[test]
        fn exact_matches_exhaustive_and_greedy_bounds(seed in any::<u64>(), hyps in 1usize..=12) {
            let mut rng = RandomSource::new(seed).rng();
            let class = random_class(6, 3, hyps, &mut rng).unwrap();
            let f = Hypothesis::table((0..6).map(|_| Label(rng.gen_range(0..3))).collect());
            let exact = properness_exact(&f, &class).unwrap();
            let oracle = properness_exhaustive(&f, &class).unwrap();
            let greedy = properness_greedy(&f, &class).unwrap();
            prop_assert_eq!(exact.value, oracle.value);
            prop_assert!(greedy.value >= exact.value);
            prop_assert!(exact.value == Properness::Infinite || verify_cover(&f, &class, &exact.cover).unwrap());
            prop_assert!(greedy.value == Properness::Infinite || verify_cover(&f, &class, &greedy.cover).unwrap());
        }

        #[test]
        fn larger_classes_never_increase_properness(seed in any::<u64>()) {
            let mut rng = RandomSource::new(seed).rng();
            let big = random_class(5, 3, 12, &mut rng).unwrap();
            let keep: Vec<Vec<Label>> = big.rows().filter(|_| rng.gen_bool(0.5)).map(|r| r.to_vec()).collect();
            prop_assume!(!keep.is_empty());
            let small = ExplicitClass::new(5, LabelSpace::anonymous(3), keep).unwrap();
            let f = Hypothesis::table((0..5).map(|_| Label(rng.gen_range(0..3))).collect());
            prop_assert!(properness_exact(&f, &big).unwrap().value <= properness_exact(&f, &small).unwrap().value);
        }

        #[test]
        fn infinite_iff_some_point_unmatched(seed in any::<u64>()) {
            let mut rng = RandomSource::new(seed).rng();
            let class = random_class(4, 4, 5, &mut rng).unwrap();
            let f = Hypothesis::table((0..4).map(|_| Label(rng.gen_range(0..4))).collect());
            let unmatched = (0..4).any(|x| class.rows().all(|r| r[x] != f.to_table()[x]));
            prop_assert_eq!(properness_exact(&f, &class).unwrap().value == Properness::Infinite, unmatched);
        }
    }
}
