//! Scoring, significance testing and the experiment drivers.

mod agreement;
mod experiment;
pub mod report;
pub mod stats;
mod summary;

pub use agreement::{agreement_matrix, AgreementMatrix, PredictionRecord};
pub use experiment::{
    average_curves, model_seed, run_combinations, run_suite, tuning_curve, CombinationOutcome, ExperimentConfig,
    FoldOutcome, PreparedProblem, TuningCurve, WordResult, DEFAULT_FRACTIONS,
};
pub use stats::{accuracy, kappa, mcnemar, paired_ttest, McNemar, PairedTTest};
pub use summary::{agreement_for, summarize, Cell, EvaluationReport};
