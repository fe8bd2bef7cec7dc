//! Multiclass learning with majorities of ERM learners.
//!
//! The crate is organised around a handful of finite, desk-scale objects:
//!
//! - [`model`]: points, interned labels, hypotheses, classes, training
//!   sequences and finite labelled distributions with exact loss.
//! - [`dimensions`]: brute-force VC, Graph and DS dimensions with witnesses.
//! - [`reduction`]: the graph reduction `h -> h̄` from multiclass to binary.
//! - [`splitting`]: index-only splitting schemes (recursive quarter split,
//!   bagging, three disjoint blocks).
//! - [`learners`]: the ERM contract, a canonical ERM and the adversarial
//!   ERM for the Cantor class.
//! - [`aggregation`]: majority voting with an explicit "I don't know" vote and
//!   exact ensemble error metrics.
//! - [`constructions`]: Cantor classes, the properness witness class, the
//!   two-constant class, random corpora and coupon-collector trials.
//! - [`properness`]: properness numbers via exact minimum set cover.
//! - [`experiments`]: the seeded Monte Carlo harness and report writer.

pub mod aggregation;
pub mod class_file;
pub mod constructions;
pub mod dimensions;
pub mod error;
pub mod experiments;
pub mod learners;
pub mod model;
pub mod properness;
pub mod reduction;
pub mod rng;
pub mod splitting;

pub use error::{Error, Result};
