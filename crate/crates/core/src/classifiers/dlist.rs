//! Decision lists: one-feature rules ordered by smoothed log-likelihood.

use super::{mfc::MfcModel, TrainSet};
use crate::error::{Error, Result};
use crate::features::FeatureVector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DlParams {
    /// Additive smoothing of both counts.
    pub delta: f64,
    /// Rules must weigh strictly more than this.
    pub min_weight: f64,
}

impl Default for DlParams {
    fn default() -> Self {
        Self {
            delta: 0.1,
            min_weight: 0.0,
        }
    }
}

/// `ln((count_for + delta) / (count_against + delta))`.
pub fn dl_weight(count_for: u32, count_against: u32, delta: f64) -> f64 {
    ((count_for as f64 + delta) / (count_against as f64 + delta)).ln()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DlRule {
    pub feature: u32,
    pub sense: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DlModel {
    /// Descending weight; ties by feature id then sense id.
    pub rules: Vec<DlRule>,
    pub default_sense: usize,
    pub params: DlParams,
    /// Position of the first rule testing each feature, `u32::MAX` if none.
    first_rule: Vec<u32>,
}

impl DlModel {
    pub fn new(mut rules: Vec<DlRule>, default_sense: usize, params: DlParams) -> Self {
        rules.sort_by(|a, b| {
            b.weight
                .total_cmp(&a.weight)
                .then(a.feature.cmp(&b.feature))
                .then(a.sense.cmp(&b.sense))
        });
        let n = rules.iter().map(|r| r.feature as usize + 1).max().unwrap_or(0);
        let mut first_rule = vec![u32::MAX; n];
        for (pos, r) in rules.iter().enumerate().rev() {
            first_rule[r.feature as usize] = pos as u32;
        }
        Self {
            rules,
            default_sense,
            params,
            first_rule,
        }
    }

    /// The highest-ranked rule whose feature is active.
    pub fn matching_rule(&self, v: &FeatureVector) -> Option<&DlRule> {
        v.active()
            .iter()
            .filter_map(|&f| self.first_rule.get(f as usize).copied())
            .min()
            .filter(|&pos| pos != u32::MAX)
            .map(|pos| &self.rules[pos as usize])
    }

    pub fn classify(&self, v: &FeatureVector) -> usize {
        self.matching_rule(v).map_or(self.default_sense, |r| r.sense)
    }
}

pub fn train_decision_list(ts: &TrainSet, params: &DlParams) -> Result<DlModel> {
    if !(params.delta > 0.0) {
        return Err(Error::Param(format!("delta must be positive, got {}", params.delta)));
    }
    if ts.is_empty() {
        return Err(Error::Validation("empty training set".into()));
    }
    let k = ts.n_senses;
    let mut counts = vec![0u32; ts.n_features * k];
    let mut totals = vec![0u32; ts.n_features];
    for (v, label) in ts.examples() {
        for &f in v.active() {
            counts[f as usize * k + label] += 1;
            totals[f as usize] += 1;
        }
    }
    let mut rules = Vec::new();
    for f in 0..ts.n_features {
        for s in 0..k {
            let c = counts[f * k + s];
            if c == 0 {
                continue;
            }
            let weight = dl_weight(c, totals[f] - c, params.delta);
            if weight > params.min_weight {
                rules.push(DlRule {
                    feature: f as u32,
                    sense: s,
                    weight,
                });
            }
        }
    }
    let default_sense = MfcModel::from_counts(ts.sense_counts()).majority_sense;
    Ok(DlModel::new(rules, default_sense, *params))
}
