//! Naive Bayes with relative-frequency estimates.
//!
//! Zero estimates of `P(f|s)` are replaced by `P(s)/m`. Only features
//! active in the test vector and seen in training contribute to the score.

use super::{argmax, TrainSet};
use crate::error::{Error, Result};
use crate::features::FeatureVector;

#[derive(Debug, Clone, PartialEq)]
pub struct NbModel {
    pub prior: Vec<f64>,
    /// `cond[f][s] = P(f|s)`; empty for features never seen in training.
    pub cond: Vec<Vec<f64>>,
    pub m: usize,
}

pub fn train_naive_bayes(ts: &TrainSet) -> Result<NbModel> {
    if ts.is_empty() {
        return Err(Error::Validation("empty training set".into()));
    }
    let k = ts.n_senses;
    let m = ts.len();
    let sense_counts = ts.sense_counts();
    let mut joint = vec![Vec::<u32>::new(); ts.n_features];
    for (v, label) in ts.examples() {
        for &f in v.active() {
            let row = &mut joint[f as usize];
            if row.is_empty() {
                row.resize(k, 0);
            }
            row[label] += 1;
        }
    }
    let prior: Vec<f64> = sense_counts.iter().map(|&c| c as f64 / m as f64).collect();
    let cond = joint
        .into_iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(s, &c)| {
                    if c == 0 {
                        prior[s] / m as f64
                    } else {
                        c as f64 / sense_counts[s] as f64
                    }
                })
                .collect()
        })
        .collect();
    Ok(NbModel { prior, cond, m })
}

impl NbModel {
    pub fn n_senses(&self) -> usize {
        self.prior.len()
    }

    /// `ln P(s) + Σ ln P(f|s)` over the active features seen in training.
    /// Senses absent from training score `-inf`.
    pub fn log_score(&self, v: &FeatureVector, s: usize) -> f64 {
        let mut score = self.prior[s].ln();
        for &f in v.active() {
            if let Some(row) = self.cond.get(f as usize).filter(|r| !r.is_empty()) {
                score += row[s].ln();
            }
        }
        score
    }

    pub fn classify(&self, v: &FeatureVector) -> usize {
        let scores: Vec<f64> = (0..self.n_senses()).map(|s| self.log_score(v, s)).collect();
        argmax(&scores)
    }
}

/// Free-function form of [`NbModel::log_score`].
pub fn nb_log_score(model: &NbModel, v: &FeatureVector, s: usize) -> f64 {
    model.log_score(v, s)
}
