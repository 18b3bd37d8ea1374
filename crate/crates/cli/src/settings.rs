//! Effective configuration: built-in defaults, then the `--config` file,
//! then command-line flags. The result is echoed into each manifest.

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use wsd::classifiers::{LearnerParams, Method};
use wsd::config::KvConfig;
use wsd::corpus::{generate_suite, parse_corpus, Preset, SyntheticCorpus, WordProblem};
use wsd::eval::ExperimentConfig;
use wsd::features::Stopwords;
use wsd::{Error, Result};

/// Keys accepted in configuration files, besides `synth.*`.
const KNOWN_KEYS: &[&str] = &[
    "command",
    "seed",
    "corpus",
    "preset",
    "words",
    "stopwords",
    "min_count",
    "methods",
    "reference",
    "k",
    "rounds",
    "sample_fraction",
    "alpha",
    "beta",
    "theta",
    "epochs",
    "delta",
    "folds",
    "combination",
    "source",
    "target",
    "fractions",
    "part",
    "model",
    "top",
    "top_rules",
];

fn defaults() -> KvConfig {
    let text = "\
methods = mfc,nb,eb,snow,dl,lb
reference = lb
k = 1
rounds = 200
sample_fraction = 0.1
alpha = 1.5
beta = 0.5
theta = 1
epochs = 3
delta = 0.1
folds = 10
min_count = 1
";
    KvConfig::parse(text).expect("built-in defaults parse")
}

/// Loads the effective configuration for `command`.
pub fn resolve(command: &str, config_file: Option<&Path>, flags: &KvConfig) -> Result<KvConfig> {
    let mut kv = defaults();
    if let Some(path) = config_file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Param(format!("cannot read config {}: {e}", path.display())))?;
        let file = KvConfig::parse(&text)?;
        if let Some(bad) = file
            .keys()
            .find(|k| !k.starts_with("synth.") && !KNOWN_KEYS.contains(k))
        {
            return Err(Error::Param(format!(
                "unknown config key {bad:?} in {}",
                path.display()
            )));
        }
        kv.merge(&file);
    }
    kv.merge(flags);
    kv.set("command", command);
    if kv.get_str("seed").is_none() {
        return Err(Error::Param(
            "a seed is required (--seed or `seed` in the config)".into(),
        ));
    }
    Ok(kv)
}

pub fn seed(kv: &KvConfig) -> Result<u64> {
    kv.get("seed")?.ok_or_else(|| Error::Param("a seed is required".into()))
}

pub fn learner_params(kv: &KvConfig) -> Result<LearnerParams> {
    let mut p = LearnerParams::default();
    macro_rules! read {
        ($key:literal => $($field:ident).+) => {
            if let Some(v) = kv.get($key)? {
                p.$($field).+ = v;
            }
        };
    }
    read!("k" => k_neighbors);
    read!("rounds" => lb.rounds);
    read!("sample_fraction" => lb.sample_fraction);
    read!("alpha" => snow.alpha);
    read!("beta" => snow.beta);
    read!("theta" => snow.theta);
    read!("epochs" => snow.epochs);
    read!("delta" => dl.delta);
    p.validate()?;
    Ok(p)
}

pub fn methods(kv: &KvConfig) -> Result<Vec<Method>> {
    let list: Vec<Method> = kv.get_list("methods")?.unwrap_or_default();
    if list.is_empty() {
        return Err(Error::Param("no methods given".into()));
    }
    Ok(list)
}

pub fn experiment(kv: &KvConfig) -> Result<ExperimentConfig> {
    let mut c = ExperimentConfig::new(seed(kv)?);
    c.methods = methods(kv)?;
    c.params = learner_params(kv)?;
    c.folds = kv.get("folds")?.unwrap_or(10);
    if c.folds < 2 {
        return Err(Error::Param(format!("folds must be at least 2, got {}", c.folds)));
    }
    c.min_count = kv.get("min_count")?.unwrap_or(1);
    c.reference = kv.get("reference")?.unwrap_or(Method::LazyBoosting);
    Ok(c)
}

pub fn stopwords(kv: &KvConfig) -> Result<Stopwords> {
    match kv.get_str("stopwords") {
        None => Ok(Stopwords::default()),
        Some(path) => Stopwords::from_reader(BufReader::new(open_input(Path::new(path))?)),
    }
}

/// Opens a file that the configuration refers to; a missing file is a
/// usage error, unlike a malformed one.
pub fn open_input(path: &Path) -> Result<File> {
    if !path.is_file() {
        return Err(Error::Param(format!("{} does not exist", path.display())));
    }
    Ok(File::open(path)?)
}

/// Problems named by `corpus` or generated from `preset`, plus the
/// generator's ground truth in the latter case.
pub struct Inputs {
    pub problems: Vec<WordProblem>,
    pub synthetic: Option<Vec<SyntheticCorpus>>,
}

pub fn inputs(kv: &KvConfig) -> Result<Inputs> {
    let corpora: Vec<PathBuf> = kv.get_list("corpus")?.unwrap_or_default();
    let preset: Option<Preset> = kv.get("preset")?;
    match (corpora.is_empty(), preset) {
        (false, Some(_)) => Err(Error::Param("give either --corpus or --preset, not both".into())),
        (true, None) => Err(Error::Param("no input: give --corpus or --preset".into())),
        (false, None) => {
            let problems = corpora
                .iter()
                .map(|p| {
                    let file = open_input(p)?;
                    parse_corpus(BufReader::new(file)).map_err(|e| match e {
                        Error::Parse { line, msg } => Error::Validation(format!("{}:{line}: {msg}", p.display())),
                        Error::Validation(msg) => Error::Validation(format!("{}: {msg}", p.display())),
                        other => other,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Inputs {
                problems,
                synthetic: None,
            })
        }
        (true, Some(preset)) => {
            let words = kv.get("words")?.unwrap_or(21);
            let suite = generate_suite(preset, words, &kv.section("synth."), seed(kv)?)?;
            Ok(Inputs {
                problems: suite.iter().map(|s| s.problem.clone()).collect(),
                synthetic: Some(suite),
            })
        }
    }
}

/// The manifest text: the effective configuration in config-file syntax.
pub fn manifest(kv: &KvConfig) -> String {
    format!(
        "# effective configuration; rerun with `wsd {} --config <this file> --out <dir>`\n{kv}",
        kv.get_str("command").unwrap_or("?")
    )
}
