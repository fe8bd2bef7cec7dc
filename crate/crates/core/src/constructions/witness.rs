//! Classes with DS dimension 1 that no bounded combination of proper learners
//! can learn: on a block of `d` points (`d` a perfect square), every
//! hypothesis emits `*` on exactly `√d` points.

use std::sync::Arc;

use itertools::Itertools;

use super::{binomial, DEFAULT_EXPLICIT_CAP, STAR};
use crate::model::{
    ExplicitClass, Hypothesis, Label, LabelSpace, LabelValue, LabeledDistribution, Point,
};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct PropernessWitness {
    pub d: u32,
    pub root: u32,
    pub class: Arc<ExplicitClass>,
    /// `sets[i]` is the set `A` of hypothesis `i`, which outputs `A` on `A`
    /// and `*` on the `√d` points outside it.
    pub sets: Vec<Vec<Point>>,
}

impl PropernessWitness {
    /// `D_{h_A}`: uniform over the complement of `A`, every point labelled `*`.
    pub fn distribution(&self, i: usize) -> Result<LabeledDistribution> {
        let set = &self.sets[i];
        let complement = (1..=self.d).map(Point).filter(|p| !set.contains(p));
        LabeledDistribution::uniform(complement, &self.class.hypothesis(i))
    }

    pub fn hypothesis(&self, i: usize) -> Hypothesis {
        self.class.hypothesis(i)
    }
}

fn exact_root(d: u32) -> Result<u32> {
    let root = (d as f64).sqrt().round() as u32;
    if d == 0 || root * root != d {
        return Err(Error::invalid(format!("{d} is not a positive perfect square")));
    }
    Ok(root)
}

/// `H_d = {h_A : A ⊆ [d], |A| = d − √d}` with the default size cap.
pub fn properness_witness(d: u32) -> Result<PropernessWitness> {
    let root = exact_root(d)?;
    let k = d - root;
    let count = binomial(d as u64, k as u64).unwrap_or(u128::MAX);
    if count > DEFAULT_EXPLICIT_CAP as u128 {
        return Err(Error::OverCap {
            what: "properness witness class size",
            requested: count,
            limit: DEFAULT_EXPLICIT_CAP as u128,
        });
    }
    let mut labels = LabelSpace::new();
    labels.intern(LabelValue::star());
    let mut rows = Vec::new();
    let mut sets = Vec::new();
    for set in (1..=d).map(Point).combinations(k as usize) {
        let label = labels.intern(LabelValue::set(set.iter().map(|p| p.0)));
        let mut row = vec![STAR; d as usize];
        for p in &set {
            row[p.index()] = label;
        }
        rows.push(row);
        sets.push(set);
    }
    Ok(PropernessWitness {
        d,
        root,
        class: Arc::new(ExplicitClass::new(d, labels, rows)?),
        sets,
    })
}

/// Disjoint union of witness blocks for the given perfect squares: block `b`
/// occupies consecutive points, and each of its hypotheses outputs `$` on
/// every point outside the block.
pub fn two_block_witness(blocks: &[u32]) -> Result<ExplicitClass> {
    let parts = blocks
        .iter()
        .map(|&d| properness_witness(d))
        .collect::<Result<Vec<_>>>()?;
    let n: u32 = blocks.iter().sum();
    let mut labels = LabelSpace::new();
    labels.intern(LabelValue::star());
    let dollar = labels.intern(LabelValue::atom("$"));
    let mut rows = Vec::new();
    let mut offset = 0u32;
    for part in &parts {
        for set in &part.sets {
            let global: Vec<u32> = set.iter().map(|p| p.0 + offset).collect();
            let label: Label = labels.intern(LabelValue::set(global.iter().copied()));
            let mut row = vec![dollar; n as usize];
            for x in offset + 1..=offset + part.d {
                row[(x - 1) as usize] = if global.contains(&x) { label } else { STAR };
            }
            rows.push(row);
        }
        offset += part.d;
    }
    ExplicitClass::new(n, labels, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_sizes() {
        let w4 = properness_witness(4).unwrap();
        assert_eq!(w4.class.len(), 6);
        for row in w4.class.rows() {
            assert_eq!(row.iter().filter(|&&l| l == STAR).count(), 2);
        }
        assert_eq!(properness_witness(9).unwrap().class.len(), 84);
        assert!(properness_witness(8).is_err());
        assert!(properness_witness(0).is_err());
    }

    #[test]
    fn distributions_live_on_the_star_points() {
        let w = properness_witness(9).unwrap();
        let dist = w.distribution(5).unwrap();
        assert_eq!(dist.support().len(), 3);
        assert_eq!(crate::model::loss_exact(&w.hypothesis(5), &dist).unwrap(), 0.0);
    }

    #[test]
    fn composite_blocks() {
        let c = two_block_witness(&[4, 9]).unwrap();
        assert_eq!(c.domain_size(), 13);
        assert_eq!(c.len(), 90);
    }
}
