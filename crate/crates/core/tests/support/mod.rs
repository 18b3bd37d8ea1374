//! Reference implementations written independently of the library code,
//! plus generators of small random training sets.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::HashSet;

use rand::Rng;
use wsd::classifiers::TrainSet;
use wsd::features::FeatureVector;

/// A random training set with `m ≤ max_m` examples, `k ≤ max_k` senses and
/// `n ≤ max_n` features; every sense id is in range but not every sense
/// has to occur.
pub fn random_train_set<R: Rng>(rng: &mut R, max_m: usize, max_k: usize, max_n: usize) -> TrainSet {
    let m = rng.random_range(1..=max_m);
    let k = rng.random_range(1..=max_k);
    let n = rng.random_range(1..=max_n);
    let density: f64 = rng.random_range(0.1..0.6);
    let vectors = (0..m).map(|_| random_vector(rng, n, density)).collect();
    let labels = (0..m).map(|_| rng.random_range(0..k)).collect();
    TrainSet::new(vectors, labels, k, n).expect("valid random train set")
}

pub fn random_vector<R: Rng>(rng: &mut R, n: usize, density: f64) -> FeatureVector {
    FeatureVector::new((0..n as u32).filter(|_| rng.random_bool(density)).collect())
}

fn dense(v: &FeatureVector, n: usize) -> Vec<bool> {
    let mut row = vec![false; n];
    for &f in v.active() {
        row[f as usize] = true;
    }
    row
}

/// Posterior over senses of the smoothed Naive Bayes model, computed in
/// linear space by counting over the raw examples for every (feature,
/// sense) pair. Only active features seen in training take part.
pub fn nb_posterior(ts: &TrainSet, v: &FeatureVector) -> Vec<f64> {
    let m = ts.len() as f64;
    let k = ts.n_senses;
    let rows: Vec<Vec<bool>> = ts.vectors.iter().map(|x| dense(x, ts.n_features)).collect();
    let query = dense(v, ts.n_features);
    let mut joint = vec![0.0; k];
    for (s, slot) in joint.iter_mut().enumerate() {
        let n_s = ts.labels.iter().filter(|&&l| l == s).count() as f64;
        let prior = n_s / m;
        let mut p = prior;
        for f in 0..ts.n_features {
            if !query[f] {
                continue;
            }
            let seen = rows.iter().any(|r| r[f]);
            if !seen {
                continue;
            }
            let both = rows.iter().zip(&ts.labels).filter(|(r, &l)| r[f] && l == s).count() as f64;
            p *= if both == 0.0 { prior / m } else { both / n_s };
        }
        *slot = p;
    }
    let total: f64 = joint.iter().sum();
    joint.iter().map(|p| p / total).collect()
}

/// k-NN by sorting every stored example on (distance, index).
pub fn knn_classify(ts: &TrainSet, v: &FeatureVector, k: usize) -> usize {
    let q: HashSet<u32> = v.active().iter().copied().collect();
    let mut all: Vec<(usize, usize)> = ts
        .vectors
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let s: HashSet<u32> = x.active().iter().copied().collect();
            (q.symmetric_difference(&s).count(), i)
        })
        .collect();
    all.sort();
    let mut votes = vec![0.0f64; ts.n_senses];
    for &(d, i) in all.iter().take(k) {
        votes[ts.labels[i]] += 1.0 / (1.0 + d as f64);
    }
    let mut best = 0;
    for s in 1..votes.len() {
        if votes[s] > votes[best] {
            best = s;
        }
    }
    best
}

/// One round of the dense reference booster.
#[derive(Debug, Clone)]
pub struct OracleRound {
    pub feature: usize,
    pub c_present: Vec<f64>,
    pub c_absent: Vec<f64>,
    pub z: f64,
}

/// Exhaustive real AdaBoost.MH with one-feature stumps over a dense
/// `m × n` matrix.
pub struct DenseBooster {
    x: Vec<Vec<bool>>,
    y: Vec<Vec<f64>>,
    pub dist: Vec<Vec<f64>>,
    eps: f64,
    k: usize,
}

impl DenseBooster {
    pub fn new(ts: &TrainSet) -> Self {
        let m = ts.len();
        let k = ts.n_senses;
        Self {
            x: ts.vectors.iter().map(|v| dense(v, ts.n_features)).collect(),
            y: ts
                .labels
                .iter()
                .map(|&s| (0..k).map(|l| if l == s { 1.0 } else { -1.0 }).collect())
                .collect(),
            dist: vec![vec![1.0 / (m * k) as f64; k]; m],
            eps: 1.0 / (m * k) as f64,
            k,
        }
    }

    /// Outputs and normalizer of the stump on `feature` under the current
    /// distribution.
    pub fn stump(&self, feature: usize) -> OracleRound {
        let mut w = vec![[[0.0f64; 2]; 2]; self.k];
        for (i, row) in self.x.iter().enumerate() {
            let block = usize::from(row[feature]);
            for l in 0..self.k {
                let sign = usize::from(self.y[i][l] > 0.0);
                w[l][block][sign] += self.dist[i][l];
            }
        }
        let c = |l: usize, b: usize| 0.5 * ((w[l][b][1] + self.eps) / (w[l][b][0] + self.eps)).ln();
        let c_present: Vec<f64> = (0..self.k).map(|l| c(l, 1)).collect();
        let c_absent: Vec<f64> = (0..self.k).map(|l| c(l, 0)).collect();
        let mut z = 0.0;
        for (i, row) in self.x.iter().enumerate() {
            let out = if row[feature] { &c_present } else { &c_absent };
            for l in 0..self.k {
                z += self.dist[i][l] * (-self.y[i][l] * out[l]).exp();
            }
        }
        OracleRound {
            feature,
            c_present,
            c_absent,
            z,
        }
    }

    /// Best stump over all features: lowest normalizer, first feature on ties.
    pub fn best(&self) -> OracleRound {
        let n = self.x.first().map_or(0, |r| r.len());
        let mut best = self.stump(0);
        for f in 1..n {
            let cand = self.stump(f);
            if cand.z < best.z {
                best = cand;
            }
        }
        best
    }

    /// Reweights by the given stump and renormalizes.
    pub fn apply(&mut self, round: &OracleRound) {
        let mut z = 0.0;
        for (i, row) in self.x.iter().enumerate() {
            let out = if row[round.feature] {
                &round.c_present
            } else {
                &round.c_absent
            };
            for l in 0..self.k {
                self.dist[i][l] *= (-self.y[i][l] * out[l]).exp();
                z += self.dist[i][l];
            }
        }
        for row in &mut self.dist {
            for d in row.iter_mut() {
                *d /= z;
            }
        }
    }
}

/// Training set in which sense `s` owns features `s·width .. (s+1)·width`
/// and every example carries at least one of its sense's features.
pub fn disjoint_keyed<R: Rng>(rng: &mut R, m: usize, k: usize, width: usize) -> TrainSet {
    let mut vectors = Vec::with_capacity(m);
    let mut labels = Vec::with_capacity(m);
    for _ in 0..m {
        let s = rng.random_range(0..k);
        let base = (s * width) as u32;
        let mut ids: Vec<u32> = (0..width as u32)
            .filter(|_| rng.random_bool(0.4))
            .map(|j| base + j)
            .collect();
        if ids.is_empty() {
            ids.push(base + rng.random_range(0..width as u32));
        }
        vectors.push(FeatureVector::new(ids));
        labels.push(s);
    }
    TrainSet::new(vectors, labels, k, k * width).expect("valid keyed set")
}
