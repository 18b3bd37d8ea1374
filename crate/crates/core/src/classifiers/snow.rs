//! One mistake-driven Winnow node per sense.
//!
//! A node predicts "mine" when the summed weight of the active features
//! reaches `theta`. On a false positive the active weights are multiplied by
//! `beta`; on a false negative by `alpha`. Weights start at 1.0 the first time
//! a node sees a feature. Classification picks the node with the largest raw
//! activation.

use super::{argmax, TrainSet};
use crate::error::{Error, Result};
use crate::features::FeatureVector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnowParams {
    pub alpha: f64,
    pub beta: f64,
    pub theta: f64,
    pub epochs: usize,
}

impl Default for SnowParams {
    fn default() -> Self {
        Self {
            alpha: 1.5,
            beta: 0.5,
            theta: 1.0,
            epochs: 3,
        }
    }
}

impl SnowParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 1.0) {
            return Err(Error::Param(format!("alpha must exceed 1, got {}", self.alpha)));
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(Error::Param(format!("beta must lie in (0, 1), got {}", self.beta)));
        }
        if !(self.theta > 0.0) {
            return Err(Error::Param(format!("theta must be positive, got {}", self.theta)));
        }
        if self.epochs == 0 {
            return Err(Error::Param("epochs must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SnowModel {
    /// `weights[s][f]`; zero where the feature was never seen.
    pub weights: Vec<Vec<f64>>,
    /// Features seen during training (every node sees every example).
    pub seen: Vec<bool>,
    pub params: SnowParams,
}

impl SnowModel {
    pub fn n_senses(&self) -> usize {
        self.weights.len()
    }

    pub fn activation(&self, v: &FeatureVector, s: usize) -> f64 {
        let w = &self.weights[s];
        v.active().iter().filter_map(|&f| w.get(f as usize)).sum()
    }

    pub fn classify(&self, v: &FeatureVector) -> usize {
        let acts: Vec<f64> = (0..self.n_senses()).map(|s| self.activation(v, s)).collect();
        argmax(&acts)
    }

    /// One Winnow update of node `s` on an example with the given activity.
    fn update(&mut self, v: &FeatureVector, s: usize, positive: bool) {
        let act = self.activation(v, s);
        let factor = if act >= self.params.theta && !positive {
            self.params.beta
        } else if act < self.params.theta && positive {
            self.params.alpha
        } else {
            return;
        };
        let w = &mut self.weights[s];
        for &f in v.active() {
            w[f as usize] *= factor;
        }
    }
}

pub fn train_snow(ts: &TrainSet, params: &SnowParams) -> Result<SnowModel> {
    params.validate()?;
    if ts.is_empty() {
        return Err(Error::Validation("empty training set".into()));
    }
    let mut model = SnowModel {
        weights: vec![vec![0.0; ts.n_features]; ts.n_senses],
        seen: vec![false; ts.n_features],
        params: *params,
    };
    for _ in 0..params.epochs {
        for (v, label) in ts.examples() {
            for &f in v.active() {
                if !model.seen[f as usize] {
                    model.seen[f as usize] = true;
                    for w in model.weights.iter_mut() {
                        w[f as usize] = 1.0;
                    }
                }
            }
            for s in 0..ts.n_senses {
                model.update(v, s, s == label);
            }
        }
    }
    Ok(model)
}
