use crate::error::{Error, Result};

use super::stats::{accuracy, kappa};

/// Gold sense and one prediction per method for a single test example.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredictionRecord {
    pub example_id: usize,
    pub gold: usize,
    pub predicted: Vec<usize>,
}

/// Pairwise agreement rates and kappa values among gold and the methods.
///
/// Both matrices are stored in full and are symmetric. The diagonal holds
/// `NaN` because a column compared with itself is not reported.
#[derive(Debug, Clone, PartialEq)]
pub struct AgreementMatrix {
    pub labels: Vec<String>,
    pub agreement: Vec<Vec<f64>>,
    pub kappa: Vec<Vec<f64>>,
}

impl AgreementMatrix {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Element-wise mean of matrices with identical labels.
    pub fn average(matrices: &[AgreementMatrix]) -> Result<AgreementMatrix> {
        let first = matrices
            .first()
            .ok_or_else(|| Error::Validation("no agreement matrices to average".into()))?;
        if matrices.iter().any(|m| m.labels != first.labels) {
            return Err(Error::Validation("agreement matrices have different labels".into()));
        }
        let n = first.len();
        let count = matrices.len() as f64;
        let mean_of = |pick: fn(&AgreementMatrix) -> &Vec<Vec<f64>>| {
            let mut out = vec![vec![f64::NAN; n]; n];
            for (i, row) in out.iter_mut().enumerate() {
                for (j, cell) in row.iter_mut().enumerate() {
                    if i != j {
                        *cell = matrices.iter().map(|m| pick(m)[i][j]).sum::<f64>() / count;
                    }
                }
            }
            out
        };
        Ok(AgreementMatrix {
            labels: first.labels.clone(),
            agreement: mean_of(|m| &m.agreement),
            kappa: mean_of(|m| &m.kappa),
        })
    }
}

/// Builds the matrix over `gold` followed by the columns named in `methods`.
pub fn agreement_matrix(records: &[PredictionRecord], methods: &[&str]) -> Result<AgreementMatrix> {
    if records.is_empty() {
        return Err(Error::Validation("no prediction records".into()));
    }
    if let Some(r) = records.iter().find(|r| r.predicted.len() != methods.len()) {
        return Err(Error::Validation(format!(
            "example {} has {} predictions for {} methods",
            r.example_id,
            r.predicted.len(),
            methods.len()
        )));
    }
    let mut columns: Vec<Vec<usize>> = vec![records.iter().map(|r| r.gold).collect()];
    for j in 0..methods.len() {
        columns.push(records.iter().map(|r| r.predicted[j]).collect());
    }
    let mut labels = vec!["gold".to_string()];
    labels.extend(methods.iter().map(|m| m.to_string()));

    let n = labels.len();
    let mut agreement = vec![vec![f64::NAN; n]; n];
    let mut kap = vec![vec![f64::NAN; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let a = accuracy(&columns[i], &columns[j])?;
            let k = kappa(&columns[i], &columns[j])?;
            agreement[i][j] = a;
            agreement[j][i] = a;
            kap[i][j] = k;
            kap[j][i] = k;
        }
    }
    Ok(AgreementMatrix {
        labels,
        agreement,
        kappa: kap,
    })
}
