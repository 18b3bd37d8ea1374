//! The six sense classifiers.
//!
//! All learners consume a [`TrainSet`] of sparse binary vectors and produce
//! an immutable model. Wherever two senses score equally the lowest sense id
//! wins.

mod boost;
mod dlist;
mod exemplar;
mod io;
mod mfc;
mod naive_bayes;
mod snow;

pub use boost::{train_lazyboosting, LbModel, LbParams, WeakRule};
pub use dlist::{dl_weight, train_decision_list, DlModel, DlParams, DlRule};
pub use exemplar::{hamming_distance, EbModel};
pub use io::{read_model, write_model, TrainedModel};
pub use mfc::{train_mfc, MfcModel};
pub use naive_bayes::{nb_log_score, train_naive_bayes, NbModel};
pub use snow::{train_snow, SnowModel, SnowParams};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::features::FeatureVector;

/// Training vectors with sense ids in `0..n_senses`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainSet {
    pub vectors: Vec<FeatureVector>,
    pub labels: Vec<usize>,
    pub n_senses: usize,
    pub n_features: usize,
}

impl TrainSet {
    pub fn new(vectors: Vec<FeatureVector>, labels: Vec<usize>, n_senses: usize, n_features: usize) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::Validation("empty training set".into()));
        }
        if vectors.len() != labels.len() {
            return Err(Error::Validation(format!(
                "{} vectors but {} labels",
                vectors.len(),
                labels.len()
            )));
        }
        if let Some(&l) = labels.iter().find(|&&l| l >= n_senses) {
            return Err(Error::Validation(format!(
                "label {l} out of range for {n_senses} senses"
            )));
        }
        if let Some(f) = vectors
            .iter()
            .flat_map(|v| v.active().last())
            .find(|&&f| f as usize >= n_features)
        {
            return Err(Error::Validation(format!(
                "feature {f} out of range for {n_features} features"
            )));
        }
        Ok(Self {
            vectors,
            labels,
            n_senses,
            n_features,
        })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn sense_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_senses];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    pub(crate) fn examples(&self) -> impl Iterator<Item = (&FeatureVector, usize)> {
        self.vectors.iter().zip(self.labels.iter().copied())
    }
}

/// Index of the first maximum.
pub(crate) fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Mfc,
    NaiveBayes,
    Exemplar,
    Snow,
    DecisionList,
    LazyBoosting,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Mfc,
        Method::NaiveBayes,
        Method::Exemplar,
        Method::Snow,
        Method::DecisionList,
        Method::LazyBoosting,
    ];

    /// Short name used on the command line and in model files.
    pub fn name(self) -> &'static str {
        match self {
            Method::Mfc => "mfc",
            Method::NaiveBayes => "nb",
            Method::Exemplar => "eb",
            Method::Snow => "snow",
            Method::DecisionList => "dl",
            Method::LazyBoosting => "lb",
        }
    }

    /// Row label in report tables.
    pub fn title(self) -> &'static str {
        match self {
            Method::Mfc => "MFC",
            Method::NaiveBayes => "NB",
            Method::Exemplar => "EB",
            Method::Snow => "SNoW",
            Method::DecisionList => "DL",
            Method::LazyBoosting => "LB",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        Method::ALL
            .into_iter()
            .find(|m| m.name() == lower || m.title().eq_ignore_ascii_case(&lower))
            .ok_or_else(|| Error::Param(format!("unknown method {s:?}")))
    }
}

/// Hyper-parameters of every learner.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnerParams {
    pub k_neighbors: usize,
    pub snow: SnowParams,
    pub dl: DlParams,
    pub lb: LbParams,
}

impl Default for LearnerParams {
    fn default() -> Self {
        Self {
            k_neighbors: 1,
            snow: SnowParams::default(),
            dl: DlParams::default(),
            lb: LbParams::default(),
        }
    }
}

impl LearnerParams {
    pub fn validate(&self) -> Result<()> {
        if self.k_neighbors == 0 {
            return Err(Error::Param("k must be at least 1".into()));
        }
        if !(self.dl.delta > 0.0) {
            return Err(Error::Param(format!("delta must be positive, got {}", self.dl.delta)));
        }
        self.snow.validate()?;
        self.lb.validate()
    }
}

/// A trained classifier of any kind.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Mfc(MfcModel),
    NaiveBayes(NbModel),
    Exemplar(EbModel),
    Snow(SnowModel),
    DecisionList(DlModel),
    LazyBoosting(LbModel),
}

impl Model {
    pub fn method(&self) -> Method {
        match self {
            Model::Mfc(_) => Method::Mfc,
            Model::NaiveBayes(_) => Method::NaiveBayes,
            Model::Exemplar(_) => Method::Exemplar,
            Model::Snow(_) => Method::Snow,
            Model::DecisionList(_) => Method::DecisionList,
            Model::LazyBoosting(_) => Method::LazyBoosting,
        }
    }

    pub fn classify(&self, v: &FeatureVector) -> usize {
        match self {
            Model::Mfc(m) => m.classify(v),
            Model::NaiveBayes(m) => m.classify(v),
            Model::Exemplar(m) => m.classify(v),
            Model::Snow(m) => m.classify(v),
            Model::DecisionList(m) => m.classify(v),
            Model::LazyBoosting(m) => m.classify(v),
        }
    }
}

/// Trains `method` on `ts`. `seed` only matters for LazyBoosting.
pub fn train(method: Method, ts: &TrainSet, params: &LearnerParams, seed: u64) -> Result<Model> {
    Ok(match method {
        Method::Mfc => Model::Mfc(train_mfc(ts)?),
        Method::NaiveBayes => Model::NaiveBayes(train_naive_bayes(ts)?),
        Method::Exemplar => Model::Exemplar(EbModel::train(ts, params.k_neighbors)?),
        Method::Snow => Model::Snow(train_snow(ts, &params.snow)?),
        Method::DecisionList => Model::DecisionList(train_decision_list(ts, &params.dl)?),
        Method::LazyBoosting => Model::LazyBoosting(train_lazyboosting(ts, &params.lb, seed)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fv(ids: &[u32]) -> FeatureVector {
        FeatureVector::new(ids.to_vec())
    }

    #[test]
    fn train_set_validation() {
        assert!(TrainSet::new(vec![], vec![], 2, 3).is_err());
        assert!(TrainSet::new(vec![fv(&[0])], vec![2], 2, 3).is_err());
        assert!(TrainSet::new(vec![fv(&[3])], vec![0], 2, 3).is_err());
        assert!(TrainSet::new(vec![fv(&[2])], vec![1], 2, 3).is_ok());
    }

    #[test]
    fn argmax_prefers_lowest_index() {
        assert_eq!(argmax(&[1.0, 3.0, 3.0]), 1);
        assert_eq!(argmax(&[0.0, 0.0]), 0);
        assert_eq!(argmax(&[f64::NEG_INFINITY, -5.0]), 1);
    }

    #[test]
    fn method_names_parse() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
            assert_eq!(m.title().parse::<Method>().unwrap(), m);
        }
        assert!("svm".parse::<Method>().is_err());
    }

    #[test]
    fn single_sense_training_always_predicts_it() {
        let ts = TrainSet::new(vec![fv(&[0, 1]), fv(&[1])], vec![0, 0], 1, 3).unwrap();
        let params = LearnerParams {
            lb: LbParams {
                rounds: 5,
                ..LbParams::default()
            },
            ..LearnerParams::default()
        };
        for m in Method::ALL {
            let model = train(m, &ts, &params, 1).unwrap();
            for v in [fv(&[]), fv(&[2]), fv(&[0, 1, 2])] {
                assert_eq!(model.classify(&v), 0, "{m}");
            }
        }
    }

    #[test]
    fn every_model_handles_the_empty_vector() {
        let ts = TrainSet::new(
            vec![fv(&[0]), fv(&[0, 1]), fv(&[2]), fv(&[2, 3])],
            vec![0, 0, 1, 1],
            3,
            4,
        )
        .unwrap();
        let params = LearnerParams::default();
        for m in Method::ALL {
            let model = train(m, &ts, &params, 9).unwrap();
            let a = model.classify(&fv(&[]));
            assert!(a < 3);
            assert_eq!(a, model.classify(&fv(&[])));
        }
    }
}
