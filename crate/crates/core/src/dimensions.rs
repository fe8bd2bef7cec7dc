//! Brute-force VC, Graph and DS dimensions of explicit classes.
//!
//! All three notions are hereditary (every subset of a shattered set is
//! shattered), so each search walks set sizes upwards and stops at the first
//! size with no shattered set. Candidate sets of one size are checked in
//! parallel; the reported witness is the first shattered set in
//! lexicographic order, independent of scheduling.

use std::collections::{HashMap, HashSet};

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::model::{ExplicitClass, Label, Point};
use crate::{Error, Result};

/// Limits on the exponential searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionCaps {
    /// Largest domain the subset search accepts.
    pub max_points: u32,
    /// Largest candidate set size the search will examine.
    pub max_subset: usize,
}

impl Default for DimensionCaps {
    fn default() -> Self {
        DimensionCaps {
            max_points: 16,
            max_subset: 6,
        }
    }
}

impl DimensionCaps {
    fn check_domain(&self, class: &ExplicitClass) -> Result<()> {
        if class.domain_size() > self.max_points {
            return Err(Error::OverCap {
                what: "domain size for dimension search",
                requested: class.domain_size() as u128,
                limit: self.max_points as u128,
            });
        }
        Ok(())
    }

    fn check_subset(&self, k: usize) -> Result<()> {
        if k > self.max_subset {
            return Err(Error::OverCap {
                what: "candidate set size for dimension search",
                requested: k as u128,
                limit: self.max_subset as u128,
            });
        }
        Ok(())
    }
}

/// Certificate that a set of points is shattered.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShatterWitness {
    pub points: Vec<Point>,
    /// Graph dimension: the anchor label of each point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchors: Option<Vec<Label>>,
    /// DS dimension: indices of class rows whose restrictions to `points`
    /// form the shattering family (one row per behaviour).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Vec<usize>>,
}

/// A dimension together with a witness set of that size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dimension {
    pub value: usize,
    pub witness: ShatterWitness,
}

fn check_points(class: &ExplicitClass, points: &[Point]) -> Result<()> {
    let mut seen = HashSet::with_capacity(points.len());
    for &p in points {
        class.domain().check(p)?;
        if !seen.insert(p) {
            return Err(Error::invalid(format!("point {p} appears twice")));
        }
    }
    Ok(())
}

/// Distinct restrictions of the class rows to `points`, each paired with the
/// first row that realises it.
fn behaviours(class: &ExplicitClass, points: &[Point]) -> Vec<(Vec<Label>, usize)> {
    let mut seen: HashMap<Vec<Label>, usize> = HashMap::new();
    let mut out = Vec::new();
    for (i, row) in class.rows().enumerate() {
        let b: Vec<Label> = points.iter().map(|p| row[p.index()]).collect();
        if !seen.contains_key(&b) {
            seen.insert(b.clone(), i);
            out.push((b, i));
        }
    }
    out
}

fn graph_patterns_complete(class: &ExplicitClass, points: &[Point], anchors: &[Label]) -> bool {
    let k = points.len();
    if k >= usize::BITS as usize - 1 || (1usize << k) > class.len() {
        return k == 0;
    }
    let mut hit = vec![false; 1 << k];
    let mut missing = hit.len();
    for row in class.rows() {
        let mask = points
            .iter()
            .zip(anchors)
            .enumerate()
            .fold(0usize, |m, (i, (p, y))| m | (((row[p.index()] == *y) as usize) << i));
        if !hit[mask] {
            hit[mask] = true;
            missing -= 1;
            if missing == 0 {
                return true;
            }
        }
    }
    false
}

/// Whether the class realises every agree/disagree pattern against the
/// anchored points.
pub fn graph_shatters(class: &ExplicitClass, anchored: &[(Point, Label)]) -> Result<bool> {
    let points: Vec<Point> = anchored.iter().map(|(p, _)| *p).collect();
    check_points(class, &points)?;
    let anchors: Vec<Label> = anchored.iter().map(|(_, y)| *y).collect();
    Ok(graph_patterns_complete(class, &points, &anchors))
}

/// Anchors for which `points` are Graph-shattered, if any.
///
/// The all-agree pattern forces the anchor vector to be a behaviour of the
/// class on `points`, so only realised behaviours are tried.
fn graph_anchor_for(class: &ExplicitClass, points: &[Point]) -> Option<Vec<Label>> {
    let bs = behaviours(class, points);
    if bs.len() < 1 << points.len() {
        return None;
    }
    bs.into_iter()
        .map(|(b, _)| b)
        .find(|b| graph_patterns_complete(class, points, b))
}

/// Runs the hereditary size-by-size search. `probe` returns a witness for a
/// candidate set, or `None`.
fn hereditary_search<F>(class: &ExplicitClass, caps: &DimensionCaps, probe: F) -> Result<Dimension>
where
    F: Fn(&[Point]) -> Option<ShatterWitness> + Sync,
{
    caps.check_domain(class)?;
    let n = class.domain_size() as usize;
    let mut best = probe(&[]).expect("the empty set is always shattered");
    let mut k = 1;
    while k <= n && (k >= usize::BITS as usize - 1 || (1usize << k) <= class.len()) {
        caps.check_subset(k)?;
        let candidates: Vec<Vec<Point>> = class.domain().points().combinations(k).collect();
        match candidates.par_iter().find_map_first(|pts| probe(pts)) {
            Some(w) => best = w,
            None => break,
        }
        k += 1;
    }
    Ok(Dimension {
        value: best.points.len(),
        witness: best,
    })
}

pub fn graph_dimension(class: &ExplicitClass, caps: &DimensionCaps) -> Result<Dimension> {
    hereditary_search(class, caps, |pts| {
        graph_anchor_for(class, pts).map(|anchors| ShatterWitness {
            points: pts.to_vec(),
            anchors: Some(anchors),
            family: None,
        })
    })
}

/// Positions (into `bs`) of the largest subfamily in which every behaviour
/// has a neighbour in every coordinate: one that differs from it exactly
/// there. Behaviours without a neighbour are deleted until nothing changes.
pub(crate) fn ds_fixpoint(bs: &[Vec<Label>]) -> Vec<usize> {
    let k = bs.first().map_or(0, Vec::len);
    let mut alive = vec![true; bs.len()];
    loop {
        let mut changed = false;
        for i in 0..k {
            let mut groups: HashMap<Vec<Label>, usize> = HashMap::new();
            let key = |b: &Vec<Label>| {
                let mut key = b.clone();
                key.remove(i);
                key
            };
            for (j, b) in bs.iter().enumerate() {
                if alive[j] {
                    *groups.entry(key(b)).or_default() += 1;
                }
            }
            for (j, b) in bs.iter().enumerate() {
                if alive[j] && groups[&key(b)] < 2 {
                    alive[j] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    (0..bs.len()).filter(|&j| alive[j]).collect()
}

fn ds_family(class: &ExplicitClass, points: &[Point]) -> Option<Vec<usize>> {
    let bs = behaviours(class, points);
    if bs.len() < 1 << points.len() {
        return None;
    }
    let restricted: Vec<Vec<Label>> = bs.iter().map(|(b, _)| b.clone()).collect();
    let survivors = ds_fixpoint(&restricted);
    (!survivors.is_empty()).then(|| survivors.into_iter().map(|j| bs[j].1).collect())
}

/// Whether some nonempty subfamily is a pseudo-cube on `points`.
pub fn ds_shatters(class: &ExplicitClass, points: &[Point]) -> Result<bool> {
    check_points(class, points)?;
    Ok(points.is_empty() || ds_family(class, points).is_some())
}

pub fn ds_dimension(class: &ExplicitClass, caps: &DimensionCaps) -> Result<Dimension> {
    hereditary_search(class, caps, |pts| {
        let family = if pts.is_empty() {
            vec![0]
        } else {
            ds_family(class, pts)?
        };
        Some(ShatterWitness {
            points: pts.to_vec(),
            anchors: None,
            family: Some(family),
        })
    })
}

/// Whether a binary class realises all `2^k` behaviours on `points`.
pub fn vc_shatters(class: &ExplicitClass, points: &[Point]) -> Result<bool> {
    require_binary(class)?;
    check_points(class, points)?;
    Ok(vc_complete(class, points))
}

fn vc_complete(class: &ExplicitClass, points: &[Point]) -> bool {
    points.len() < usize::BITS as usize - 1 && behaviours(class, points).len() == 1 << points.len()
}

fn require_binary(class: &ExplicitClass) -> Result<()> {
    if class.is_binary() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "VC dimension needs a binary class, this one has {} labels",
            class.labels().len()
        )))
    }
}

pub fn vc_dimension(class: &ExplicitClass, caps: &DimensionCaps) -> Result<Dimension> {
    require_binary(class)?;
    hereditary_search(class, caps, |pts| {
        vc_complete(class, pts).then(|| ShatterWitness {
            points: pts.to_vec(),
            anchors: None,
            family: None,
        })
    })
}

/// Checks a witness against the predicate it claims to satisfy.
pub fn verify_graph_witness(class: &ExplicitClass, w: &ShatterWitness) -> Result<bool> {
    let anchors = w
        .anchors
        .as_ref()
        .ok_or_else(|| Error::invalid("graph witness without anchors"))?;
    if anchors.len() != w.points.len() {
        return Err(Error::invalid("graph witness anchors and points differ in length"));
    }
    let anchored: Vec<(Point, Label)> = w.points.iter().copied().zip(anchors.iter().copied()).collect();
    graph_shatters(class, &anchored)
}

/// Checks that the witness family is itself a pseudo-cube on its points.
pub fn verify_ds_witness(class: &ExplicitClass, w: &ShatterWitness) -> Result<bool> {
    check_points(class, &w.points)?;
    let family = w
        .family
        .as_ref()
        .ok_or_else(|| Error::invalid("DS witness without a family"))?;
    if family.iter().any(|&i| i >= class.len()) || family.is_empty() {
        return Ok(false);
    }
    if w.points.is_empty() {
        return Ok(true);
    }
    let mut bs: Vec<Vec<Label>> = family
        .iter()
        .map(|&i| w.points.iter().map(|p| class.row(i)[p.index()]).collect())
        .collect();
    bs.sort();
    bs.dedup();
    Ok(ds_fixpoint(&bs).len() == bs.len())
}
