use super::TrainSet;
use crate::error::{Error, Result};
use crate::features::FeatureVector;

/// Most-frequent-sense baseline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MfcModel {
    pub majority_sense: usize,
    pub counts: Vec<usize>,
}

impl MfcModel {
    pub fn from_counts(counts: Vec<usize>) -> Self {
        let mut majority_sense = 0;
        for (s, &c) in counts.iter().enumerate() {
            if c > counts[majority_sense] {
                majority_sense = s;
            }
        }
        Self { majority_sense, counts }
    }

    pub fn classify(&self, _v: &FeatureVector) -> usize {
        self.majority_sense
    }
}

pub fn train_mfc(ts: &TrainSet) -> Result<MfcModel> {
    if ts.is_empty() {
        return Err(Error::Validation("empty training set".into()));
    }
    Ok(MfcModel::from_counts(ts.sense_counts()))
}
