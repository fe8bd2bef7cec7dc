//! Plurality voting with `⊥` and exact ensemble error metrics.

use serde::{Deserialize, Serialize};

use crate::model::{Hypothesis, Label, LabeledDistribution, Point, Prediction};
use crate::{Error, Result};

/// What a vote returns when no label has strictly more votes than every
/// other label.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TiePolicy {
    /// Always `⊥`.
    #[default]
    Idk,
    /// The first voter's label.
    FirstVoter,
    /// The smallest label among those tied for the lead.
    LabelOrder,
}

impl TiePolicy {
    pub const ALL: [TiePolicy; 3] = [TiePolicy::Idk, TiePolicy::FirstVoter, TiePolicy::LabelOrder];

    pub fn name(&self) -> &'static str {
        match self {
            TiePolicy::Idk => "idk",
            TiePolicy::FirstVoter => "first-voter",
            TiePolicy::LabelOrder => "label-order",
        }
    }
}

/// Tally of one point's votes, each voter counted once.
#[derive(Clone, Debug)]
pub struct Tally {
    first: Label,
    total: usize,
    counts: Vec<(Label, usize)>,
}

impl Tally {
    pub fn new(votes: &[Label]) -> Result<Self> {
        let (&first, _) = votes
            .split_first()
            .ok_or_else(|| Error::invalid("majority vote over an empty list"))?;
        let mut counts: Vec<(Label, usize)> = Vec::new();
        for &v in votes {
            match counts.iter_mut().find(|(l, _)| *l == v) {
                Some((_, c)) => *c += 1,
                None => counts.push((v, 1)),
            }
        }
        Ok(Tally {
            first,
            total: votes.len(),
            counts,
        })
    }

    pub fn count(&self, label: Label) -> usize {
        self.counts
            .iter()
            .find(|(l, _)| *l == label)
            .map_or(0, |(_, c)| *c)
    }

    pub fn voters(&self) -> usize {
        self.total
    }

    /// The unique label with the most votes, if there is one.
    pub fn strict_plurality(&self) -> Option<Label> {
        let top = self.counts.iter().map(|(_, c)| *c).max()?;
        let mut leaders = self.counts.iter().filter(|(_, c)| *c == top);
        let (label, _) = leaders.next()?;
        leaders.next().is_none().then_some(*label)
    }

    pub fn decide(&self, policy: TiePolicy) -> Prediction {
        if let Some(l) = self.strict_plurality() {
            return Prediction::Label(l);
        }
        match policy {
            TiePolicy::Idk => Prediction::Bottom,
            TiePolicy::FirstVoter => Prediction::Label(self.first),
            TiePolicy::LabelOrder => {
                let top = self.counts.iter().map(|(_, c)| *c).max().unwrap_or(0);
                self.counts
                    .iter()
                    .filter(|(_, c)| *c == top)
                    .map(|(l, _)| *l)
                    .min()
                    .map_or(Prediction::Bottom, Prediction::Label)
            }
        }
    }

    /// At most half of the voters chose `label`.
    pub fn at_most_half(&self, label: Label) -> bool {
        2 * self.count(label) <= self.total
    }
}

pub fn vote(votes: &[Label], policy: TiePolicy) -> Result<Prediction> {
    Ok(Tally::new(votes)?.decide(policy))
}

fn votes_at(fs: &[Hypothesis], x: Point) -> Result<Vec<Label>> {
    fs.iter().map(|h| h.eval(x)).collect()
}

pub fn majority_vote(fs: &[Hypothesis], x: Point, policy: TiePolicy) -> Result<Prediction> {
    vote(&votes_at(fs, x)?, policy)
}

fn require_voters(fs: &[Hypothesis]) -> Result<()> {
    if fs.is_empty() {
        Err(Error::invalid("an ensemble needs at least one voter"))
    } else {
        Ok(())
    }
}

/// Mass where the vote is not the true label; `⊥` is always an error.
pub fn majority_error_exact(
    fs: &[Hypothesis],
    dist: &LabeledDistribution,
    policy: TiePolicy,
) -> Result<f64> {
    require_voters(fs)?;
    let mut err = 0.0;
    for (e, mass) in dist.support() {
        if !majority_vote(fs, e.point, policy)?.is(e.label) {
            err += mass;
        }
    }
    Ok(err)
}

/// Mass where at most half of the voters are correct.
pub fn half_vote_error_exact(fs: &[Hypothesis], dist: &LabeledDistribution) -> Result<f64> {
    require_voters(fs)?;
    let mut err = 0.0;
    for (e, mass) in dist.support() {
        let correct = fs
            .iter()
            .map(|h| h.eval(e.point).map(|l| l == e.label))
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .filter(|&c| c)
            .count();
        if 2 * correct <= fs.len() {
            err += mass;
        }
    }
    Ok(err)
}

/// Mass where no voter predicts the true label.
pub fn list_error_exact(fs: &[Hypothesis], dist: &LabeledDistribution) -> Result<f64> {
    require_voters(fs)?;
    let mut err = 0.0;
    for (e, mass) in dist.support() {
        if !votes_at(fs, e.point)?.contains(&e.label) {
            err += mass;
        }
    }
    Ok(err)
}

/// Every ensemble metric from one pass over the support.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleErrors {
    pub majority_idk: f64,
    pub majority_first_voter: f64,
    pub majority_label_order: f64,
    pub half_vote: f64,
    pub list: f64,
    /// Mass where the `⊥`-on-ties vote abstains.
    pub bottom_rate: f64,
}

impl EnsembleErrors {
    pub fn majority(&self, policy: TiePolicy) -> f64 {
        match policy {
            TiePolicy::Idk => self.majority_idk,
            TiePolicy::FirstVoter => self.majority_first_voter,
            TiePolicy::LabelOrder => self.majority_label_order,
        }
    }
}

pub fn ensemble_errors(fs: &[Hypothesis], dist: &LabeledDistribution) -> Result<EnsembleErrors> {
    require_voters(fs)?;
    let mut out = EnsembleErrors {
        majority_idk: 0.0,
        majority_first_voter: 0.0,
        majority_label_order: 0.0,
        half_vote: 0.0,
        list: 0.0,
        bottom_rate: 0.0,
    };
    for (e, mass) in dist.support() {
        let tally = Tally::new(&votes_at(fs, e.point)?)?;
        let y = e.label;
        let idk = tally.decide(TiePolicy::Idk);
        if !idk.is(y) {
            out.majority_idk += mass;
        }
        if idk == Prediction::Bottom {
            out.bottom_rate += mass;
        }
        if !tally.decide(TiePolicy::FirstVoter).is(y) {
            out.majority_first_voter += mass;
        }
        if !tally.decide(TiePolicy::LabelOrder).is(y) {
            out.majority_label_order += mass;
        }
        if tally.at_most_half(y) {
            out.half_vote += mass;
        }
        if tally.count(y) == 0 {
            out.list += mass;
        }
    }
    Ok(out)
}
