//! LazyBoosting: AdaBoost.MH with real-valued decision stumps, where each
//! round only looks at a random sample of the features.
//!
//! The multiclass problem is reduced to `k` binary ones through the sign
//! matrix `Y[i][l] = +1` iff `l` is the label of example `i`. The booster
//! keeps a distribution `D(i, l)` over the `m·k` pairs. A stump on feature
//! `f` outputs `c[j][l]` for presence `j ∈ {absent, present}`, with
//!
//! ```text
//! c[j][l] = ½ ln((W+[j][l] + ε) / (W-[j][l] + ε))
//! ```
//!
//! where `W±[j][l]` is the weight of the pairs in block `j` with sign `±`.
//! The stump minimizing `Z = Σ D(i,l) exp(-Y[i][l] h(x_i, l))` is kept and
//! the distribution is reweighted by `exp(-Y h) / Z`.

use rand::seq::index;

use super::{argmax, TrainSet};
use crate::error::{Error, Result};
use crate::features::FeatureVector;
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LbParams {
    pub rounds: usize,
    /// Fraction of the features examined per round.
    pub sample_fraction: f64,
    /// Smoothing of the stump outputs; `None` means `1/(m·k)`.
    pub epsilon: Option<f64>,
}

impl Default for LbParams {
    fn default() -> Self {
        Self {
            rounds: 200,
            sample_fraction: 0.1,
            epsilon: None,
        }
    }
}

impl LbParams {
    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(Error::Param("boosting needs at least one round".into()));
        }
        if !(self.sample_fraction > 0.0 && self.sample_fraction <= 1.0) {
            return Err(Error::Param(format!(
                "sample fraction must lie in (0, 1], got {}",
                self.sample_fraction
            )));
        }
        if let Some(eps) = self.epsilon {
            if !(eps > 0.0) {
                return Err(Error::Param(format!("epsilon must be positive, got {eps}")));
            }
        }
        Ok(())
    }
}

/// Single-feature stump with per-label outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakRule {
    pub feature: u32,
    pub c_present: Vec<f64>,
    pub c_absent: Vec<f64>,
    /// Normalizer `Z_t` of the round that selected the rule.
    pub z: f64,
}

impl WeakRule {
    pub fn output(&self, v: &FeatureVector) -> &[f64] {
        if v.contains(self.feature) {
            &self.c_present
        } else {
            &self.c_absent
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LbModel {
    pub rounds: Vec<WeakRule>,
    pub n_senses: usize,
    pub epsilon: f64,
    /// `D_{T+1}(i, l)` in row-major `m × k` layout.
    pub final_distribution: Option<Vec<f64>>,
}

impl LbModel {
    /// `score(l) = Σ_t h_t(v, l)`.
    pub fn scores(&self, v: &FeatureVector) -> Vec<f64> {
        let mut scores = vec![0.0; self.n_senses];
        for rule in &self.rounds {
            for (s, c) in scores.iter_mut().zip(rule.output(v)) {
                *s += c;
            }
        }
        scores
    }

    pub fn classify(&self, v: &FeatureVector) -> usize {
        argmax(&self.scores(v))
    }

    /// The ensemble of the first `t` rounds, without a retained distribution.
    pub fn prefix(&self, t: usize) -> LbModel {
        LbModel {
            rounds: self.rounds[..t.min(self.rounds.len())].to_vec(),
            n_senses: self.n_senses,
            epsilon: self.epsilon,
            final_distribution: None,
        }
    }

    /// Fraction of `(example, label)` pairs whose score sign disagrees
    /// with `Y` (a zero score counts as an error).
    pub fn hamming_loss(&self, ts: &TrainSet) -> f64 {
        let mut errors = 0usize;
        for (v, label) in ts.examples() {
            for (l, s) in self.scores(v).into_iter().enumerate() {
                let y = if l == label { 1.0 } else { -1.0 };
                if y * s <= 0.0 {
                    errors += 1;
                }
            }
        }
        errors as f64 / (ts.len() * self.n_senses) as f64
    }

    /// `Π_t Z_t` over the rounds.
    pub fn z_product(&self) -> f64 {
        self.rounds.iter().map(|r| r.z).product()
    }
}

/// Scratch buffers for stump evaluation.
struct StumpScratch {
    present_all: Vec<f64>,
    present_plus: Vec<f64>,
}

struct Candidate {
    feature: u32,
    z: f64,
    c_present: Vec<f64>,
    c_absent: Vec<f64>,
}

pub fn train_lazyboosting(ts: &TrainSet, params: &LbParams, seed: u64) -> Result<LbModel> {
    params.validate()?;
    if ts.is_empty() {
        return Err(Error::Validation("empty training set".into()));
    }
    let m = ts.len();
    let k = ts.n_senses;
    let n = ts.n_features;
    let eps = params.epsilon.unwrap_or(1.0 / (m * k) as f64);

    let mut postings: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (i, v) in ts.vectors.iter().enumerate() {
        for &f in v.active() {
            postings[f as usize].push(i as u32);
        }
    }

    let mut dist = vec![1.0 / (m * k) as f64; m * k];
    let mut rng = rng::stream(seed);
    let n_candidates = ((params.sample_fraction * n as f64 - 1e-9).ceil() as usize).clamp(1, n.max(1));
    let mut scratch = StumpScratch {
        present_all: vec![0.0; k],
        present_plus: vec![0.0; k],
    };
    let mut in_block = vec![false; m];
    let mut rounds = Vec::with_capacity(params.rounds);

    for _ in 0..params.rounds {
        if n == 0 {
            break;
        }
        let candidates: Vec<u32> = if n_candidates >= n {
            (0..n as u32).collect()
        } else {
            let mut c: Vec<u32> = index::sample(&mut rng, n, n_candidates)
                .into_iter()
                .map(|f| f as u32)
                .collect();
            c.sort_unstable();
            c
        };

        let mut total_all = vec![0.0; k];
        let mut total_plus = vec![0.0; k];
        for (i, &label) in ts.labels.iter().enumerate() {
            let row = &dist[i * k..(i + 1) * k];
            for (t, d) in total_all.iter_mut().zip(row) {
                *t += d;
            }
            total_plus[label] += row[label];
        }

        let mut best: Option<Candidate> = None;
        for f in candidates {
            let cand = evaluate_stump(
                f,
                &postings[f as usize],
                &dist,
                &ts.labels,
                &total_all,
                &total_plus,
                eps,
                &mut scratch,
            );
            if best.as_ref().is_none_or(|b| cand.z < b.z) {
                best = Some(cand);
            }
        }
        let best = best.expect("at least one candidate");

        for &i in &postings[best.feature as usize] {
            in_block[i as usize] = true;
        }
        let mut z = 0.0;
        for (i, &label) in ts.labels.iter().enumerate() {
            let c = if in_block[i] { &best.c_present } else { &best.c_absent };
            for l in 0..k {
                let y = if l == label { 1.0 } else { -1.0 };
                let d = &mut dist[i * k + l];
                *d *= (-y * c[l]).exp();
                z += *d;
            }
        }
        for &i in &postings[best.feature as usize] {
            in_block[i as usize] = false;
        }
        for d in dist.iter_mut() {
            *d /= z;
        }
        rounds.push(WeakRule {
            feature: best.feature,
            c_present: best.c_present,
            c_absent: best.c_absent,
            z,
        });
    }

    Ok(LbModel {
        rounds,
        n_senses: k,
        epsilon: eps,
        final_distribution: Some(dist),
    })
}

#[allow(clippy::too_many_arguments)]
fn evaluate_stump(
    feature: u32,
    postings: &[u32],
    dist: &[f64],
    labels: &[usize],
    total_all: &[f64],
    total_plus: &[f64],
    eps: f64,
    scratch: &mut StumpScratch,
) -> Candidate {
    let k = total_all.len();
    scratch.present_all.iter_mut().for_each(|x| *x = 0.0);
    scratch.present_plus.iter_mut().for_each(|x| *x = 0.0);
    for &i in postings {
        let i = i as usize;
        let row = &dist[i * k..(i + 1) * k];
        for (p, d) in scratch.present_all.iter_mut().zip(row) {
            *p += d;
        }
        scratch.present_plus[labels[i]] += row[labels[i]];
    }

    let mut c_present = vec![0.0; k];
    let mut c_absent = vec![0.0; k];
    let mut z = 0.0;
    for l in 0..k {
        let wp1 = scratch.present_plus[l];
        let wm1 = (scratch.present_all[l] - wp1).max(0.0);
        let wp0 = (total_plus[l] - wp1).max(0.0);
        let wm0 = (total_all[l] - total_plus[l] - wm1).max(0.0);
        let c1 = 0.5 * ((wp1 + eps) / (wm1 + eps)).ln();
        let c0 = 0.5 * ((wp0 + eps) / (wm0 + eps)).ln();
        z += wp1 * (-c1).exp() + wm1 * c1.exp() + wp0 * (-c0).exp() + wm0 * c0.exp();
        c_present[l] = c1;
        c_absent[l] = c0;
    }
    Candidate {
        feature,
        z,
        c_present,
        c_absent,
    }
}
