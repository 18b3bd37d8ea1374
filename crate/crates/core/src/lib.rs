//! Supervised word sense disambiguation.
//!
//! The crate bundles everything needed to run cross-corpus WSD experiments
//! over sense-tagged corpora split into two parts (A and B):
//!
//! * [`corpus`] reads, writes, splits and synthesizes corpora.
//! * [`features`] turns an occurrence into sparse binary features.
//! * [`classifiers`] holds the six learners behind one [`classifiers::Model`] type.
//! * [`eval`] scores predictions and drives the combination, agreement and
//!   tuning experiments.
//! * [`noise`] ranks suspicious training examples from a boosting model.

// Parameter checks are written as `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classifiers;
pub mod config;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod features;
pub mod noise;
pub mod rng;

pub use error::{Error, Result};
