use crate::classifiers::Method;
use crate::corpus::Combination;
use crate::error::{Error, Result};

use super::agreement::{agreement_matrix, AgreementMatrix};
use super::experiment::WordResult;
use super::stats::{mcnemar, mean, paired_ttest, sample_sd, McNemar, PairedTTest};

/// One (method, combination) entry of the accuracy table.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Cell {
    /// Mean over words of each word's mean fold accuracy.
    pub mean: Option<f64>,
    /// Standard deviation over folds of the word-averaged fold accuracies;
    /// only for cross-validated combinations.
    pub sd: Option<f64>,
    /// Against the reference method, on predictions pooled over folds and words.
    pub mcnemar: Option<McNemar>,
    /// Against the reference method, on word-averaged fold accuracies.
    pub ttest: Option<PairedTTest>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub label: String,
    pub methods: Vec<Method>,
    pub reference: Method,
    /// `[method][combination]`, combinations in [`Combination::ALL`] order.
    pub cells: Vec<Vec<Cell>>,
    /// `(word, combination, message)` for combinations that could not run.
    pub errors: Vec<(String, Combination, String)>,
}

impl EvaluationReport {
    pub fn cell(&self, method: Method, combination: Combination) -> Option<&Cell> {
        let i = self.methods.iter().position(|&m| m == method)?;
        let j = Combination::ALL.iter().position(|&c| c == combination)?;
        Some(&self.cells[i][j])
    }

    /// Mean of the available combination means of `method`.
    pub fn overall_mean(&self, method: Method) -> Option<f64> {
        let i = self.methods.iter().position(|&m| m == method)?;
        let means: Vec<f64> = self.cells[i].iter().filter_map(|c| c.mean).collect();
        (!means.is_empty()).then(|| mean(&means))
    }
}

/// Aggregates word results into one table.
pub fn summarize(results: &[WordResult], reference: Method, label: &str) -> Result<EvaluationReport> {
    let first = results
        .first()
        .ok_or_else(|| Error::Validation("no word results to summarize".into()))?;
    if results.iter().any(|r| r.methods != first.methods) {
        return Err(Error::Validation("word results use different method lists".into()));
    }
    let methods = first.methods.clone();
    let r = first
        .method_position(reference)
        .ok_or_else(|| Error::Param(format!("reference method {reference} was not run")))?;

    let mut errors = Vec::new();
    for w in results {
        for o in &w.outcomes {
            if let Err(e) = &o.result {
                errors.push((w.lemma.clone(), o.combination, e.clone()));
            }
        }
    }

    let mut cells = vec![Vec::with_capacity(7); methods.len()];
    for (ci, &combo) in Combination::ALL.iter().enumerate() {
        let runs: Vec<_> = results.iter().filter_map(|w| w.outcomes[ci].folds()).collect();
        let fold_curve = |j: usize| -> Option<Vec<f64>> {
            if runs.is_empty() {
                return None;
            }
            let n_folds = runs.iter().map(|f| f.len()).max()?;
            (0..n_folds)
                .map(|f| {
                    let accs: Vec<f64> = runs
                        .iter()
                        .filter_map(|folds| folds.get(f).and_then(|fo| fo.accuracy(j)))
                        .collect();
                    (!accs.is_empty()).then(|| mean(&accs))
                })
                .collect()
        };
        let reference_curve = fold_curve(r);

        for (j, row) in cells.iter_mut().enumerate() {
            let word_means: Vec<f64> = runs
                .iter()
                .filter_map(|folds| {
                    let accs: Vec<f64> = folds.iter().filter_map(|f| f.accuracy(j)).collect();
                    (!accs.is_empty()).then(|| mean(&accs))
                })
                .collect();
            let mut cell = Cell {
                mean: (!word_means.is_empty()).then(|| mean(&word_means)),
                ..Cell::default()
            };
            let curve = if combo.is_cross_validated() {
                fold_curve(j)
            } else {
                None
            };
            if let Some(curve) = &curve {
                if curve.len() >= 2 {
                    cell.sd = Some(sample_sd(curve));
                }
            }
            if j != r {
                let pooled = runs.iter().flat_map(|folds| folds.iter().flat_map(|f| &f.records));
                let (mut a, mut b, mut g) = (Vec::new(), Vec::new(), Vec::new());
                for rec in pooled {
                    a.push(rec.predicted[j]);
                    b.push(rec.predicted[r]);
                    g.push(rec.gold);
                }
                if !g.is_empty() {
                    cell.mcnemar = Some(mcnemar(&a, &b, &g)?);
                }
                if let (Some(x), Some(y)) = (&curve, &reference_curve) {
                    if x.len() >= 2 && x.len() == y.len() {
                        cell.ttest = Some(paired_ttest(x, y)?);
                    }
                }
            }
            row.push(cell);
        }
    }

    Ok(EvaluationReport {
        label: label.to_string(),
        methods,
        reference,
        cells,
        errors,
    })
}

/// Agreement and kappa over the pooled folds of `combination`, computed per
/// word and then averaged over words.
pub fn agreement_for(results: &[WordResult], combination: Combination) -> Result<AgreementMatrix> {
    let mut per_word = Vec::new();
    for w in results {
        let records: Vec<_> = w.outcome(combination).records().cloned().collect();
        if records.is_empty() {
            continue;
        }
        let titles: Vec<&str> = w.methods.iter().map(|m| m.title()).collect();
        per_word.push(agreement_matrix(&records, &titles)?);
    }
    AgreementMatrix::average(&per_word)
}
