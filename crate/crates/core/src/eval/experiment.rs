//! Drivers for the seven train/test combinations and the tuning curves.
//!
//! Work is split into independent (word, fold) tasks that run on the
//! ambient rayon pool. Results are collected in task order and every model
//! seed is derived from the run seed, so output does not depend on the
//! number of threads.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::classifiers::{self, LearnerParams, Method, TrainSet};
use crate::corpus::{split, tuning_split, Combination, Example, Part, SplitSpec, WordProblem};
use crate::error::{Error, Result};
use crate::features::{extract_canonical, FeatureIndex, Stopwords};
use crate::rng;

use super::agreement::PredictionRecord;

const STREAM_MODEL: u64 = 0x6d6f_6465;
const STREAM_TUNING: u64 = 0x6375_7276;

/// Settings shared by every experiment driver.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub methods: Vec<Method>,
    pub params: LearnerParams,
    pub folds: usize,
    pub seed: u64,
    /// Features seen in fewer training examples than this are dropped.
    pub min_count: usize,
    /// Method the significance tests compare against.
    pub reference: Method,
}

impl ExperimentConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            methods: Method::ALL.to_vec(),
            params: LearnerParams::default(),
            folds: 10,
            seed,
            min_count: 1,
            reference: Method::LazyBoosting,
        }
    }

    /// Requested methods in canonical order, with MFC and the reference
    /// method always present.
    pub fn method_list(&self) -> Vec<Method> {
        let mut out: Vec<Method> = self.methods.clone();
        out.push(Method::Mfc);
        out.push(self.reference);
        out.sort();
        out.dedup();
        out
    }
}

/// Seed of the model trained for fold `fold` of `combination`.
pub fn model_seed(seed: u64, combination: Combination, fold: usize) -> u64 {
    let group = match combination {
        Combination::AbAb | Combination::AbA | Combination::AbB => 1,
        Combination::AA => 2,
        Combination::BB => 3,
        Combination::AB => 4,
        Combination::BA => 5,
    };
    rng::derive(seed, &[STREAM_MODEL, group, fold as u64])
}

/// A word problem with its canonical feature strings extracted once.
#[derive(Debug, Clone)]
pub struct PreparedProblem<'a> {
    pub problem: &'a WordProblem,
    features: Vec<Vec<String>>,
    position: HashMap<usize, usize>,
}

impl<'a> PreparedProblem<'a> {
    pub fn new(problem: &'a WordProblem, stopwords: &Stopwords) -> Self {
        let features = problem
            .examples
            .par_iter()
            .map(|e| extract_canonical(e, stopwords))
            .collect();
        let position = problem.examples.iter().enumerate().map(|(i, e)| (e.id, i)).collect();
        Self {
            problem,
            features,
            position,
        }
    }

    pub fn features_of(&self, example: &Example) -> &[String] {
        &self.features[self.position[&example.id]]
    }

    /// Builds the fold's feature index from `train` only, trains each method
    /// and returns one record per test example.
    pub fn fit_predict(
        &self,
        train: &[&Example],
        test: &[&Example],
        methods: &[Method],
        config: &ExperimentConfig,
        seed: u64,
    ) -> Result<Vec<PredictionRecord>> {
        let index = FeatureIndex::build(train.iter().map(|e| self.features_of(e)), config.min_count);
        let vectors = train.iter().map(|e| index.vectorize(self.features_of(e))).collect();
        let labels = train.iter().map(|e| self.problem.label_of(e)).collect();
        let ts = TrainSet::new(vectors, labels, self.problem.n_senses(), index.len())?;

        let test_vectors: Vec<_> = test.iter().map(|e| index.vectorize(self.features_of(e))).collect();
        let mut records: Vec<PredictionRecord> = test
            .iter()
            .map(|e| PredictionRecord {
                example_id: e.id,
                gold: self.problem.label_of(e),
                predicted: Vec::with_capacity(methods.len()),
            })
            .collect();
        for &method in methods {
            let model = classifiers::train(method, &ts, &config.params, seed)?;
            for (rec, v) in records.iter_mut().zip(&test_vectors) {
                rec.predicted.push(model.classify(v));
            }
        }
        Ok(records)
    }
}

/// Predictions of one fold (or of the single split).
#[derive(Debug, Clone, PartialEq)]
pub struct FoldOutcome {
    pub records: Vec<PredictionRecord>,
}

impl FoldOutcome {
    /// Accuracy of the `j`-th method, `None` when the fold has no test examples.
    pub fn accuracy(&self, j: usize) -> Option<f64> {
        if self.records.is_empty() {
            return None;
        }
        let hits = self.records.iter().filter(|r| r.predicted[j] == r.gold).count();
        Some(hits as f64 / self.records.len() as f64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CombinationOutcome {
    pub combination: Combination,
    /// Either the folds or the reason the combination could not be run.
    pub result: std::result::Result<Vec<FoldOutcome>, String>,
}

impl CombinationOutcome {
    pub fn folds(&self) -> Option<&[FoldOutcome]> {
        self.result.as_deref().ok()
    }

    /// All records of all folds, in fold order.
    pub fn records(&self) -> impl Iterator<Item = &PredictionRecord> {
        self.folds().into_iter().flatten().flat_map(|f| f.records.iter())
    }
}

/// Everything `run_combinations` produced for one word.
#[derive(Debug, Clone, PartialEq)]
pub struct WordResult {
    pub lemma: String,
    pub methods: Vec<Method>,
    /// One entry per combination, in [`Combination::ALL`] order.
    pub outcomes: Vec<CombinationOutcome>,
    pub warnings: Vec<String>,
}

impl WordResult {
    pub fn outcome(&self, c: Combination) -> &CombinationOutcome {
        &self.outcomes[Combination::ALL.iter().position(|&x| x == c).unwrap()]
    }

    pub fn method_position(&self, m: Method) -> Option<usize> {
        self.methods.iter().position(|&x| x == m)
    }
}

/// Combinations whose folds are computed directly; A+B-A and A+B-B reuse
/// the A+B-A+B folds with the test side filtered to one part.
const BASE: [Combination; 5] = [
    Combination::AbAb,
    Combination::AA,
    Combination::BB,
    Combination::AB,
    Combination::BA,
];

/// Runs every method on the seven combinations of one word.
pub fn run_combinations(prepared: &PreparedProblem<'_>, config: &ExperimentConfig) -> Result<WordResult> {
    let problem = prepared.problem;
    if config.folds < 2 {
        return Err(Error::Param(format!("folds must be at least 2, got {}", config.folds)));
    }
    let methods = config.method_list();

    let mut warnings = Vec::new();
    let mut split_errors: HashMap<Combination, String> = HashMap::new();
    let mut tasks = Vec::new();
    for combo in BASE {
        let spec = SplitSpec {
            combination: combo,
            folds: config.folds,
            seed: config.seed,
        };
        match split(problem, &spec) {
            Ok(s) => {
                warnings.extend(s.warnings.iter().map(|w| format!("{combo}: {w}")));
                for (f, fold) in s.folds.into_iter().enumerate() {
                    tasks.push((combo, f, fold));
                }
            }
            Err(e) => {
                split_errors.insert(combo, e.to_string());
            }
        }
    }

    let results: Vec<Result<Vec<PredictionRecord>>> = tasks
        .par_iter()
        .map(|(combo, f, fold)| {
            prepared.fit_predict(
                &fold.train,
                &fold.test,
                &methods,
                config,
                model_seed(config.seed, *combo, *f),
            )
        })
        .collect();

    let mut per_base: HashMap<Combination, std::result::Result<Vec<Vec<PredictionRecord>>, String>> = HashMap::new();
    for (combo, err) in split_errors {
        per_base.insert(combo, Err(err));
    }
    for ((combo, _, _), res) in tasks.iter().zip(results) {
        let entry = per_base.entry(*combo).or_insert_with(|| Ok(Vec::new()));
        match (entry.as_mut(), res) {
            (Ok(folds), Ok(records)) => folds.push(records),
            (Ok(_), Err(e)) => *entry = Err(e.to_string()),
            (Err(_), _) => {}
        }
    }

    let part_of: HashMap<usize, Part> = problem.examples.iter().map(|e| (e.id, e.part)).collect();
    let outcomes = Combination::ALL
        .iter()
        .map(|&combination| {
            let (base, keep): (Combination, Option<Part>) = match combination {
                Combination::AbA => (Combination::AbAb, Some(Part::A)),
                Combination::AbB => (Combination::AbAb, Some(Part::B)),
                c => (c, None),
            };
            let result = match &per_base[&base] {
                Err(e) => Err(e.clone()),
                Ok(folds) => Ok(folds
                    .iter()
                    .map(|records| FoldOutcome {
                        records: records
                            .iter()
                            .filter(|r| keep.is_none_or(|p| part_of[&r.example_id] == p))
                            .cloned()
                            .collect(),
                    })
                    .collect()),
            };
            CombinationOutcome { combination, result }
        })
        .collect();

    Ok(WordResult {
        lemma: problem.lemma.clone(),
        methods,
        outcomes,
        warnings,
    })
}

/// Runs [`run_combinations`] on every word, words in parallel.
pub fn run_suite(prepared: &[PreparedProblem<'_>], config: &ExperimentConfig) -> Result<Vec<WordResult>> {
    prepared.par_iter().map(|p| run_combinations(p, config)).collect()
}

/// Tuning-curve accuracies for one word or averaged over several.
#[derive(Debug, Clone, PartialEq)]
pub struct TuningCurve {
    pub label: String,
    pub methods: Vec<Method>,
    pub fractions: Vec<f64>,
    /// Source-only accuracy per method.
    pub baseline: Vec<f64>,
    /// `[method][fraction]`, source part plus tuning sample.
    pub combined: Vec<Vec<f64>>,
    /// `[method][fraction]`, tuning sample only.
    pub tuning_only: Vec<Vec<f64>>,
    /// Relative frequency of the commonest sense in the target test half.
    pub target_mfs: f64,
}

pub const DEFAULT_FRACTIONS: [f64; 5] = [0.1, 0.2, 0.3, 0.4, 0.5];

/// Trains on `source` (optionally plus a tuning sample of `target`) and
/// scores on the fixed held-out half of `target`.
pub fn tuning_curve(
    prepared: &PreparedProblem<'_>,
    source: Part,
    target: Part,
    fractions: &[f64],
    config: &ExperimentConfig,
) -> Result<TuningCurve> {
    let problem = prepared.problem;
    if source == target {
        return Err(Error::Param("source and target parts must differ".into()));
    }
    if fractions.is_empty() {
        return Err(Error::Param("no tuning fractions given".into()));
    }
    let source_examples: Vec<&Example> = problem.part(source).collect();
    if source_examples.is_empty() {
        return Err(Error::Validation(format!("part {source} is empty")));
    }
    let splits = fractions
        .iter()
        .map(|&f| tuning_split(problem, target, f, config.seed))
        .collect::<Result<Vec<_>>>()?;
    let test = splits[0].test.clone();
    let methods = config.method_list();

    // Same seed as the matching single-split combination, so the baseline
    // reproduces that combination's predictions on the test half.
    let baseline_combo = if source == Part::A {
        Combination::AB
    } else {
        Combination::BA
    };
    let mut tasks: Vec<(Vec<&Example>, u64)> =
        vec![(source_examples.clone(), model_seed(config.seed, baseline_combo, 0))];
    for (i, s) in splits.iter().enumerate() {
        let mut combined = source_examples.clone();
        combined.extend(s.tuning.iter().copied());
        tasks.push((combined, rng::derive(config.seed, &[STREAM_TUNING, i as u64, 0])));
        tasks.push((
            s.tuning.clone(),
            rng::derive(config.seed, &[STREAM_TUNING, i as u64, 1]),
        ));
    }

    let results = tasks
        .par_iter()
        .map(|(train, seed)| prepared.fit_predict(train, &test, &methods, config, *seed))
        .collect::<Result<Vec<_>>>()?;
    let acc = |records: &[PredictionRecord]| -> Vec<f64> {
        let fold = FoldOutcome {
            records: records.to_vec(),
        };
        (0..methods.len()).map(|j| fold.accuracy(j).unwrap_or(0.0)).collect()
    };

    let baseline = acc(&results[0]);
    let mut combined = vec![Vec::new(); methods.len()];
    let mut tuning_only = vec![Vec::new(); methods.len()];
    for i in 0..fractions.len() {
        let c = acc(&results[1 + 2 * i]);
        let t = acc(&results[2 + 2 * i]);
        for j in 0..methods.len() {
            combined[j].push(c[j]);
            tuning_only[j].push(t[j]);
        }
    }

    let mut counts = vec![0usize; problem.n_senses()];
    for e in &test {
        counts[problem.label_of(e)] += 1;
    }
    let target_mfs = *counts.iter().max().unwrap_or(&0) as f64 / test.len() as f64;

    Ok(TuningCurve {
        label: problem.lemma.clone(),
        methods,
        fractions: fractions.to_vec(),
        baseline,
        combined,
        tuning_only,
        target_mfs,
    })
}

/// Element-wise mean of curves computed with the same methods and fractions.
pub fn average_curves(curves: &[TuningCurve], label: &str) -> Result<TuningCurve> {
    let first = curves
        .first()
        .ok_or_else(|| Error::Validation("no tuning curves to average".into()))?;
    if curves
        .iter()
        .any(|c| c.methods != first.methods || c.fractions != first.fractions)
    {
        return Err(Error::Validation("tuning curves have different shapes".into()));
    }
    let n = curves.len() as f64;
    let avg_vec = |pick: &dyn Fn(&TuningCurve) -> &Vec<f64>| -> Vec<f64> {
        (0..pick(first).len())
            .map(|i| curves.iter().map(|c| pick(c)[i]).sum::<f64>() / n)
            .collect()
    };
    let methods = first.methods.len();
    Ok(TuningCurve {
        label: label.to_string(),
        methods: first.methods.clone(),
        fractions: first.fractions.clone(),
        baseline: avg_vec(&|c| &c.baseline),
        combined: (0..methods).map(|j| avg_vec(&|c| &c.combined[j])).collect(),
        tuning_only: (0..methods).map(|j| avg_vec(&|c| &c.tuning_only[j])).collect(),
        target_mfs: curves.iter().map(|c| c.target_mfs).sum::<f64>() / n,
    })
}
