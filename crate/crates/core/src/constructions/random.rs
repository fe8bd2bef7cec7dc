use rand::Rng;

use crate::model::{ExplicitClass, Label, LabelSpace};
use crate::Result;

/// Random explicit class with `labels` anonymous labels over `points` points.
/// Up to `hyps` rows are drawn uniformly; repeats are dropped, so the class
/// may come out smaller.
pub fn random_class<R: Rng + ?Sized>(
    points: u32,
    labels: usize,
    hyps: usize,
    rng: &mut R,
) -> Result<ExplicitClass> {
    let rows = (0..hyps.max(1))
        .map(|_| {
            (0..points)
                .map(|_| Label(rng.gen_range(0..labels.max(1)) as u64))
                .collect()
        })
        .collect();
    ExplicitClass::new(points, LabelSpace::anonymous(labels.max(1)), rows)
}
