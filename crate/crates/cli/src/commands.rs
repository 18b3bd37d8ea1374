use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use wsd::classifiers::{self, read_model, write_model, Model, TrainSet, TrainedModel};
use wsd::config::KvConfig;
use wsd::corpus::{write_corpus, Combination, Example, Part, WordProblem};
use wsd::eval::{self, report, PreparedProblem, DEFAULT_FRACTIONS};
use wsd::features::{extract_canonical, FeatureIndex};
use wsd::noise::{self, ReportContext, DEFAULT_TOP_RULES};
use wsd::{Error, Result};

use crate::settings::{self, Inputs};

fn write_file(dir: &Path, name: &str, f: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
    let mut w = BufWriter::new(File::create(dir.join(name))?);
    f(&mut w)?;
    w.flush()?;
    Ok(())
}

fn write_text(dir: &Path, name: &str, text: &str) -> Result<()> {
    write_file(dir, name, |w| Ok(w.write_all(text.as_bytes())?))
}

fn prepare_dir(out: &Path, kv: &KvConfig) -> Result<()> {
    fs::create_dir_all(out)?;
    write_text(out, "manifest.txt", &settings::manifest(kv))
}

fn single_problem(inputs: Inputs, command: &str) -> Result<WordProblem> {
    let mut problems = inputs.problems;
    if problems.len() != 1 {
        return Err(Error::Param(format!(
            "{command} works on one word problem, got {} (use one --corpus or --words 1)",
            problems.len()
        )));
    }
    Ok(problems.remove(0))
}

fn part_filter(kv: &KvConfig) -> Result<Option<Part>> {
    kv.get("part")
}

fn training_examples(problem: &WordProblem, part: Option<Part>) -> Result<Vec<&Example>> {
    let examples: Vec<&Example> = problem
        .examples
        .iter()
        .filter(|e| part.is_none_or(|p| e.part == p))
        .collect();
    if examples.is_empty() {
        return Err(Error::Validation(format!("no training examples in part {part:?}")));
    }
    Ok(examples)
}

pub fn train(kv: &KvConfig, out: &Path) -> Result<()> {
    let methods = settings::methods(kv)?;
    let [method] = methods[..] else {
        return Err(Error::Param("train takes exactly one --method".into()));
    };
    let params = settings::learner_params(kv)?;
    let min_count = kv.get("min_count")?.unwrap_or(1);
    let stopwords = settings::stopwords(kv)?;
    let seed = settings::seed(kv)?;
    let problem = single_problem(settings::inputs(kv)?, "train")?;
    let examples = training_examples(&problem, part_filter(kv)?)?;

    let feats: Vec<Vec<String>> = examples.iter().map(|e| extract_canonical(e, &stopwords)).collect();
    let index = FeatureIndex::build(&feats, min_count);
    let ts = TrainSet::new(
        feats.iter().map(|f| index.vectorize(f)).collect(),
        examples.iter().map(|e| problem.label_of(e)).collect(),
        problem.n_senses(),
        index.len(),
    )?;
    let model = classifiers::train(method, &ts, &params, seed)?;
    let detail = match &model {
        Model::LazyBoosting(m) => format!(" rounds={}", m.rounds.len()),
        Model::Snow(m) => format!(" epochs={}", m.params.epochs),
        Model::Exemplar(m) => format!(" k={}", m.k_neighbors),
        Model::DecisionList(m) => format!(" rules={}", m.rules.len()),
        _ => String::new(),
    };
    let trained = TrainedModel {
        lemma: problem.lemma.clone(),
        senses: problem.sense_inventory.clone(),
        index,
        model,
    };
    let mut w = BufWriter::new(File::create(out)?);
    write_model(&trained, &mut w)?;
    w.flush()?;
    println!(
        "{} {}: m={} k={} features={}{detail}",
        method.name(),
        problem.lemma,
        ts.len(),
        ts.n_senses,
        ts.n_features
    );
    Ok(())
}

fn run_all(kv: &KvConfig) -> Result<(eval::ExperimentConfig, Vec<eval::WordResult>)> {
    let config = settings::experiment(kv)?;
    let stopwords = settings::stopwords(kv)?;
    let inputs = settings::inputs(kv)?;
    let prepared: Vec<PreparedProblem<'_>> = inputs
        .problems
        .iter()
        .map(|p| PreparedProblem::new(p, &stopwords))
        .collect();
    let results = eval::run_suite(&prepared, &config)?;
    for w in &results {
        for msg in &w.warnings {
            eprintln!("wsd: warning: {}: {msg}", w.lemma);
        }
    }
    Ok((config, results))
}

pub fn combinations(kv: &KvConfig, out: &Path) -> Result<()> {
    let (config, results) = run_all(kv)?;
    let overall = eval::summarize(&results, config.reference, "ALL")?;
    let mut scoped = Vec::new();
    if results.len() > 1 {
        for w in &results {
            scoped.push(eval::summarize(std::slice::from_ref(w), config.reference, &w.lemma)?);
        }
    }
    scoped.push(overall.clone());

    prepare_dir(out, kv)?;
    write_file(out, "accuracy.csv", |w| report::write_accuracy_csv(&overall, w))?;
    write_file(out, "accuracy_sd.csv", |w| report::write_accuracy_sd_csv(&overall, w))?;
    write_file(out, "significance.csv", |w| report::write_significance_csv(&scoped, w))?;
    let table = report::render_accuracy_table(&overall);
    write_text(out, "accuracy.txt", &table)?;
    print!("{table}");
    for (word, combo, msg) in &overall.errors {
        eprintln!("wsd: {word} {combo} skipped: {msg}");
    }
    Ok(())
}

pub fn agreement(kv: &KvConfig, out: &Path) -> Result<()> {
    let combination: Combination = kv.get("combination")?.unwrap_or(Combination::AbAb);
    let (_, results) = run_all(kv)?;
    let matrix = eval::agreement_for(&results, combination)?;
    prepare_dir(out, kv)?;
    write_file(out, "agreement.csv", |w| report::write_agreement_csv(&matrix, w))?;
    write_file(out, "kappa.csv", |w| report::write_kappa_csv(&matrix, w))?;
    let table = report::render_agreement_table(&matrix);
    write_text(out, "agreement.txt", &table)?;
    print!("{table}");
    Ok(())
}

pub fn tuning(kv: &KvConfig, out: &Path) -> Result<()> {
    let source: Part = kv.get("source")?.unwrap_or(Part::A);
    let target: Part = kv
        .get("target")?
        .unwrap_or(if source == Part::A { Part::B } else { Part::A });
    let fractions: Vec<f64> = kv.get_list("fractions")?.unwrap_or_else(|| DEFAULT_FRACTIONS.to_vec());
    let config = settings::experiment(kv)?;
    let stopwords = settings::stopwords(kv)?;
    let inputs = settings::inputs(kv)?;
    let curves = inputs
        .problems
        .iter()
        .map(|p| {
            let prepared = PreparedProblem::new(p, &stopwords);
            eval::tuning_curve(&prepared, source, target, &fractions, &config)
        })
        .collect::<Result<Vec<_>>>()?;
    let curve = eval::average_curves(&curves, "ALL")?;
    prepare_dir(out, kv)?;
    write_file(out, "tuning.csv", |w| report::write_tuning_csv(&curve, w))?;
    let table = report::render_tuning_table(&curve);
    write_text(out, "tuning.txt", &table)?;
    print!("{table}");
    Ok(())
}

pub fn noise(kv: &KvConfig, out: &Path) -> Result<()> {
    let path = kv.get_str("model").ok_or_else(|| {
        Error::Param(
            "noise needs a LazyBoosting model: train one with `wsd train --method lb` and pass it with --model".into(),
        )
    })?;
    let trained = read_model(BufReader::new(settings::open_input(Path::new(path))?))?;
    let Model::LazyBoosting(model) = &trained.model else {
        return Err(Error::Param(format!(
            "{path} holds a {} model; noise detection needs a LazyBoosting (lb) model",
            trained.model.method().name()
        )));
    };
    let top: usize = kv.get("top")?.unwrap_or(50);
    let top_rules: usize = kv.get("top_rules")?.unwrap_or(DEFAULT_TOP_RULES);
    let stopwords = settings::stopwords(kv)?;
    let problem = single_problem(settings::inputs(kv)?, "noise")?;
    if problem.lemma != trained.lemma {
        eprintln!(
            "wsd: warning: model lemma {} differs from corpus lemma {}",
            trained.lemma, problem.lemma
        );
    }
    let examples = training_examples(&problem, part_filter(kv)?)?;
    let labels = examples
        .iter()
        .map(|e| {
            trained.senses.iter().position(|s| *s == e.sense).ok_or_else(|| {
                Error::Validation(format!("example {} has sense {:?} unknown to the model", e.id, e.sense))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let vectors = examples
        .iter()
        .map(|e| trained.index.vectorize(&extract_canonical(e, &stopwords)))
        .collect();
    let ts = TrainSet::new(vectors, labels, trained.senses.len(), trained.index.len())?;
    let report = noise::rank_suspicious(model, &ts, top, top_rules)?;
    let ids: Vec<usize> = examples.iter().map(|e| e.id).collect();
    let ctx = ReportContext {
        index: &trained.index,
        senses: &trained.senses,
        example_ids: &ids,
    };
    prepare_dir(out, kv)?;
    write_file(out, "suspects.csv", |w| noise::write_suspects_csv(&report, &ctx, w))?;
    write_file(out, "rules.csv", |w| noise::write_rules_csv(&report, &ctx, w))?;
    let text = noise::render_report(&report, &ctx);
    write_text(out, "noise.txt", &text)?;
    print!("{text}");
    Ok(())
}

pub fn synth(kv: &KvConfig, out: &Path) -> Result<()> {
    if kv.get_str("preset").is_none() {
        return Err(Error::Param("synth needs --preset".into()));
    }
    let inputs = settings::inputs(kv)?;
    let suite = inputs.synthetic.unwrap_or_default();
    prepare_dir(out, kv)?;
    for s in &suite {
        let name = format!("{}.wsd", s.problem.lemma);
        write_file(out, &name, |w| write_corpus(&s.problem, w))?;
    }
    write_file(out, "truth.csv", |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(["lemma", "example_id", "true_sense", "recorded_sense", "mislabeled"])?;
        for s in &suite {
            for (e, truth) in s.problem.examples.iter().zip(&s.true_senses) {
                csv.write_record([
                    s.problem.lemma.as_str(),
                    &e.id.to_string(),
                    truth,
                    &e.sense,
                    if s.mislabeled.contains(&e.id) { "1" } else { "0" },
                ])?;
            }
        }
        csv.flush()?;
        Ok(())
    })?;
    println!("wrote {} corpora to {}", suite.len(), out.display());
    Ok(())
}
