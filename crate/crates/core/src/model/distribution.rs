use std::collections::HashSet;

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use super::{Example, Hypothesis, Point, TrainingSequence};
use crate::{Error, Result};

/// Tolerance on the total mass of a distribution.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// Finite discrete distribution over labelled points.
#[derive(Clone, Debug)]
pub struct LabeledDistribution {
    support: Vec<(Example, f64)>,
    sampler: WeightedIndex<f64>,
}

impl LabeledDistribution {
    /// Validates masses (each in `[0, 1]`, total 1 within `1e-12`) and rejects
    /// repeated support entries.
    pub fn new(support: Vec<(Example, f64)>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::invalid("a distribution needs a nonempty support"));
        }
        let mut seen = HashSet::with_capacity(support.len());
        for (example, mass) in &support {
            if !mass.is_finite() || *mass < 0.0 || *mass > 1.0 {
                return Err(Error::invalid(format!(
                    "mass {mass} of ({}, {}) is outside [0, 1]",
                    example.point, example.label
                )));
            }
            if !seen.insert(*example) {
                return Err(Error::invalid(format!(
                    "support entry ({}, {}) is repeated",
                    example.point, example.label
                )));
            }
        }
        let total: f64 = support.iter().map(|(_, m)| m).sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::invalid(format!("masses sum to {total}, expected 1")));
        }
        let sampler = WeightedIndex::new(support.iter().map(|(_, m)| *m))
            .map_err(|e| Error::invalid(format!("cannot sample from distribution: {e}")))?;
        Ok(LabeledDistribution { support, sampler })
    }

    /// The realizable distribution `D_c`: a marginal over points, each point
    /// labelled by `target`. Marginal weights are normalised to total 1.
    pub fn labeled_by(marginal: &[(Point, f64)], target: &Hypothesis) -> Result<Self> {
        let total: f64 = marginal.iter().map(|(_, w)| w).sum();
        if total <= 0.0 || !total.is_finite() {
            return Err(Error::invalid("marginal weights must have a positive finite total"));
        }
        let support = marginal
            .iter()
            .map(|&(p, w)| Ok((Example::new(p, target.eval(p)?), w / total)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(support)
    }

    /// Uniform marginal over `points`, labelled by `target`.
    pub fn uniform(points: impl IntoIterator<Item = Point>, target: &Hypothesis) -> Result<Self> {
        let marginal: Vec<(Point, f64)> = points.into_iter().map(|p| (p, 1.0)).collect();
        Self::labeled_by(&marginal, target)
    }

    pub fn support(&self) -> &[(Example, f64)] {
        &self.support
    }

    /// Draws `m` i.i.d. examples.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, m: usize) -> TrainingSequence {
        (0..m)
            .map(|_| self.support[self.sampler.sample(rng)].0)
            .collect()
    }

    /// Total mass of support entries satisfying `pred`, summed in support
    /// order.
    pub fn mass_where(&self, mut pred: impl FnMut(&Example) -> bool) -> f64 {
        self.support
            .iter()
            .filter(|(e, _)| pred(e))
            .map(|(_, m)| m)
            .sum()
    }
}

/// True error `P[h(x) != y]`, computed by exact summation over the support.
pub fn loss_exact(h: &Hypothesis, dist: &LabeledDistribution) -> Result<f64> {
    let mut loss = 0.0;
    for (e, mass) in dist.support() {
        if h.eval(e.point)? != e.label {
            loss += mass;
        }
    }
    Ok(loss)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Label;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn target() -> Hypothesis {
        Hypothesis::table(vec![Label(0), Label(1), Label(0), Label(1)])
    }

    #[test]
    fn target_has_zero_loss() {
        let d = LabeledDistribution::uniform((1..=4).map(Point), &target()).unwrap();
        assert_eq!(loss_exact(&target(), &d).unwrap(), 0.0);
    }

    #[test]
    fn single_point_disagreement_costs_its_mass() {
        let d = LabeledDistribution::uniform((1..=4).map(Point), &target()).unwrap();
        let h = Hypothesis::table(vec![Label(0), Label(1), Label(1), Label(1)]);
        assert_eq!(loss_exact(&h, &d).unwrap(), 0.25);
    }

    #[test]
    fn rejects_invalid_masses() {
        let e = |p| Example::new(Point(p), Label(0));
        assert!(LabeledDistribution::new(vec![(e(1), 0.5), (e(2), 0.4)]).is_err());
        assert!(LabeledDistribution::new(vec![(e(1), 0.5), (e(1), 0.5)]).is_err());
        assert!(LabeledDistribution::new(vec![(e(1), 1.5), (e(2), -0.5)]).is_err());
        assert!(LabeledDistribution::new(vec![]).is_err());
        assert!(LabeledDistribution::new(vec![(e(1), 0.5), (e(2), 0.5)]).is_ok());
    }

    #[test]
    fn out_of_domain_support_is_a_mismatch() {
        let d = LabeledDistribution::new(vec![(Example::new(Point(9), Label(0)), 1.0)]).unwrap();
        assert!(matches!(
            loss_exact(&target(), &d),
            Err(Error::DomainMismatch { .. })
        ));
    }

    #[test]
    fn sampling_is_reproducible_and_on_support() {
        let d = LabeledDistribution::uniform((1..=4).map(Point), &target()).unwrap();
        let mut a = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut b = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let s = d.sample(&mut a, 50);
        assert_eq!(s, d.sample(&mut b, 50));
        assert!(crate::model::is_consistent(&target(), &s));
    }

    proptest! {
        #[test]
        fn loss_is_a_probability_and_order_free(
            labels in proptest::collection::vec(0u64..3, 6),
            weights in proptest::collection::vec(1u32..20, 6),
            rot in 0usize..6,
        ) {
            let h = Hypothesis::table(labels.iter().map(|&l| Label(l)).collect());
            let tgt = Hypothesis::table(vec![Label(0); 6]);
            let marginal: Vec<_> = weights.iter().enumerate()
                .map(|(i, &w)| (Point(i as u32 + 1), w as f64)).collect();
            let d = LabeledDistribution::labeled_by(&marginal, &tgt).unwrap();
            let loss = loss_exact(&h, &d).unwrap();
            prop_assert!((0.0..=1.0 + 1e-12).contains(&loss));

            let mut rotated = marginal.clone();
            rotated.rotate_left(rot);
            let d2 = LabeledDistribution::labeled_by(&rotated, &tgt).unwrap();
            prop_assert!((loss_exact(&h, &d2).unwrap() - loss).abs() < 1e-12);
            prop_assert_eq!(loss == 0.0, labels.iter().all(|&l| l == 0));
        }
    }
}
