//! Memory-based k-NN over Hamming distance.

use super::{argmax, TrainSet};
use crate::error::{Error, Result};
use crate::features::FeatureVector;

/// Size of the symmetric difference of two active sets.
pub fn hamming_distance(a: &FeatureVector, b: &FeatureVector) -> usize {
    let (a, b) = (a.active(), b.active());
    let (mut i, mut j, mut common) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    a.len() + b.len() - 2 * common
}

/// Stores every training example unchanged.
#[derive(Debug, Clone, PartialEq)]
pub struct EbModel {
    pub stored: TrainSet,
    pub k_neighbors: usize,
}

impl EbModel {
    pub fn train(ts: &TrainSet, k_neighbors: usize) -> Result<Self> {
        if k_neighbors == 0 {
            return Err(Error::Param("k must be at least 1".into()));
        }
        if ts.is_empty() {
            return Err(Error::Validation("empty training set".into()));
        }
        Ok(Self {
            stored: ts.clone(),
            k_neighbors,
        })
    }

    /// The `k` nearest stored examples ordered by `(distance, example index)`:
    /// examples tied at the k-th distance are cut by lowest index.
    pub fn neighbors(&self, v: &FeatureVector) -> Vec<(usize, usize)> {
        let mut dist: Vec<(usize, usize)> = self
            .stored
            .vectors
            .iter()
            .enumerate()
            .map(|(i, s)| (hamming_distance(v, s), i))
            .collect();
        let k = self.k_neighbors.min(dist.len());
        if k < dist.len() {
            dist.select_nth_unstable(k - 1);
            dist.truncate(k);
        }
        dist.sort_unstable();
        dist
    }

    /// Each neighbour votes for its sense with weight `1/(1+d)`.
    pub fn classify(&self, v: &FeatureVector) -> usize {
        let mut votes = vec![0.0; self.stored.n_senses];
        for (d, i) in self.neighbors(v) {
            votes[self.stored.labels[i]] += 1.0 / (1.0 + d as f64);
        }
        argmax(&votes)
    }
}
