//! Generators for the hard instances and test corpora.

mod cantor;
mod coupon;
mod random;
mod witness;

pub use cantor::{
    cantor_explicit, cantor_instance, CantorClass, CantorCoder, CantorInstance, DEFAULT_EXPLICIT_CAP,
    STAR,
};
pub use coupon::{
    coupon_exact_mean, coupon_exact_variance, coupon_mean_lower_bound, coupon_trial,
    coupon_trial_with, coupon_variance_bound, CouponStats,
};
pub use random::random_class;
pub use witness::{properness_witness, two_block_witness, PropernessWitness};

use crate::model::{ExplicitClass, Label, LabelSpace};
use crate::Result;

/// The class holding only the two constant functions `0` and `1` on a domain
/// of size `n`.
pub fn two_constant_class(n: u32) -> Result<ExplicitClass> {
    let n_usize = n as usize;
    ExplicitClass::new(
        n,
        LabelSpace::anonymous(2),
        vec![vec![Label(0); n_usize], vec![Label(1); n_usize]],
    )
}

/// Binomial coefficient with overflow reported as `None`.
pub(crate) fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}
