//! `wsd`: train sense classifiers and run the cross-corpus experiments.
//!
//! Exit status is 0 on success, 1 for data errors (unreadable or malformed
//! corpora and models) and 2 for usage errors (bad flags or parameters).

mod commands;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wsd::config::KvConfig;

#[derive(Parser)]
#[command(name = "wsd", version, about = "Supervised word sense disambiguation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train one classifier on a corpus and write a model file.
    Train {
        #[command(flatten)]
        common: Common,
        /// Restrict training to one part (A or B).
        #[arg(long)]
        part: Option<String>,
    },
    /// Accuracy of every method on the seven train/test combinations.
    Combinations(Common),
    /// Agreement rates and kappa between gold and the methods.
    Agreement {
        #[command(flatten)]
        common: Common,
        /// Combination whose pooled test predictions are compared.
        #[arg(long)]
        combination: Option<String>,
    },
    /// Accuracy when adding tuning examples from the target part.
    Tuning {
        #[command(flatten)]
        common: Common,
        /// Part the out-of-domain training data comes from (default A).
        #[arg(long)]
        source: Option<String>,
        /// Part tuning and test examples come from (default: the other part).
        #[arg(long)]
        target: Option<String>,
        /// Comma-separated fractions of the target part, each in (0, 0.5].
        #[arg(long)]
        fractions: Option<String>,
    },
    /// Rank training examples by their final boosting weight.
    Noise {
        #[command(flatten)]
        common: Common,
        /// Model file written by `wsd train --method lb`.
        #[arg(long)]
        model: Option<PathBuf>,
        /// Part the model was trained on, if not both.
        #[arg(long)]
        part: Option<String>,
        /// Number of examples listed.
        #[arg(long)]
        top: Option<usize>,
        /// Number of rules listed.
        #[arg(long)]
        top_rules: Option<usize>,
    },
    /// Write synthetic corpora.
    Synth(Common),
}

#[derive(Args)]
struct Common {
    /// Corpus file; repeat for several word problems.
    #[arg(long)]
    corpus: Vec<PathBuf>,
    /// Synthetic preset used instead of corpus files.
    #[arg(long)]
    preset: Option<String>,
    /// Number of synthetic word problems.
    #[arg(long)]
    words: Option<usize>,
    /// Methods, comma separated (mfc, nb, eb, snow, dl, lb).
    #[arg(long, value_delimiter = ',')]
    method: Vec<String>,
    /// Method the significance tests compare against.
    #[arg(long)]
    reference: Option<String>,
    /// Seed for splits, sampling and synthetic data; required.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (a file for `train`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Configuration file in `key = value` form, such as a manifest.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Stopword file, one word per line.
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// Minimum number of training examples a feature must occur in.
    #[arg(long)]
    min_count: Option<usize>,
    /// Neighbours consulted by EB.
    #[arg(long)]
    k: Option<usize>,
    /// LazyBoosting rounds.
    #[arg(long)]
    rounds: Option<usize>,
    /// Fraction of features LazyBoosting examines per round.
    #[arg(long)]
    sample_fraction: Option<f64>,
    /// Winnow promotion factor.
    #[arg(long)]
    alpha: Option<f64>,
    /// Winnow demotion factor.
    #[arg(long)]
    beta: Option<f64>,
    /// Winnow threshold.
    #[arg(long)]
    theta: Option<f64>,
    /// Winnow passes over the data.
    #[arg(long)]
    epochs: Option<usize>,
    /// Decision-list smoothing.
    #[arg(long)]
    delta: Option<f64>,
    /// Cross-validation folds.
    #[arg(long)]
    folds: Option<usize>,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    jobs: Option<usize>,
}

impl Common {
    fn flags(&self) -> KvConfig {
        let mut kv = KvConfig::new();
        if !self.corpus.is_empty() {
            let paths: Vec<String> = self.corpus.iter().map(|p| p.display().to_string()).collect();
            kv.set("corpus", paths.join(","));
        }
        if !self.method.is_empty() {
            kv.set("methods", self.method.join(","));
        }
        macro_rules! put {
            ($($field:ident),*) => {
                $(if let Some(v) = &self.$field { kv.set(stringify!($field), v); })*
            };
        }
        put!(
            preset,
            words,
            reference,
            seed,
            min_count,
            k,
            rounds,
            sample_fraction,
            alpha,
            beta,
            theta,
            epochs,
            delta,
            folds
        );
        if let Some(p) = &self.stopwords {
            kv.set("stopwords", p.display());
        }
        kv
    }
}

fn put(kv: &mut KvConfig, key: &str, value: &Option<impl std::fmt::Display>) {
    if let Some(v) = value {
        kv.set(key, v);
    }
}

fn run(cli: Cli) -> wsd::Result<()> {
    let (name, common, mut flags) = match &cli.command {
        Command::Train { common, .. } => ("train", common, common.flags()),
        Command::Combinations(common) => ("combinations", common, common.flags()),
        Command::Agreement { common, .. } => ("agreement", common, common.flags()),
        Command::Tuning { common, .. } => ("tuning", common, common.flags()),
        Command::Noise { common, .. } => ("noise", common, common.flags()),
        Command::Synth(common) => ("synth", common, common.flags()),
    };
    match &cli.command {
        Command::Train { part, .. } => put(&mut flags, "part", part),
        Command::Agreement { combination, .. } => put(&mut flags, "combination", combination),
        Command::Tuning {
            source,
            target,
            fractions,
            ..
        } => {
            put(&mut flags, "source", source);
            put(&mut flags, "target", target);
            put(&mut flags, "fractions", fractions);
        }
        Command::Noise {
            model,
            part,
            top,
            top_rules,
            ..
        } => {
            put(&mut flags, "model", &model.as_ref().map(|p| p.display()));
            put(&mut flags, "part", part);
            put(&mut flags, "top", top);
            put(&mut flags, "top_rules", top_rules);
        }
        _ => {}
    }

    let kv = settings::resolve(name, common.config.as_deref(), &flags)?;
    let out = common
        .out
        .clone()
        .ok_or_else(|| wsd::Error::Param("--out is required".into()))?;
    let jobs = common.jobs.unwrap_or(1);
    if jobs == 0 {
        return Err(wsd::Error::Param("--jobs must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| wsd::Error::Param(format!("cannot start {jobs} threads: {e}")))?;
    pool.install(|| match name {
        "train" => commands::train(&kv, &out),
        "combinations" => commands::combinations(&kv, &out),
        "agreement" => commands::agreement(&kv, &out),
        "tuning" => commands::tuning(&kv, &out),
        "noise" => commands::noise(&kv, &out),
        _ => commands::synth(&kv, &out),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wsd: {e}");
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}
