//! Synthetic two-part corpora.
//!
//! Every example draws a sense from its part's priors and fills a sentence
//! around the target with three kinds of words: indicative cue words of the
//! sense (a part-specific vocabulary that overlaps the other part's by
//! `shared_cues`), function words, and a Zipf-distributed background
//! vocabulary. A sense collocate may follow the target directly. A fraction
//! of examples is then recorded under a wrong sense.

use std::fmt;
use std::str::FromStr;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use super::{Example, Part, PosClass, Token, WordProblem};
use crate::config::KvConfig;
use crate::error::{Error, Result};
use crate::rng;

const FUNCTION_WORDS: &[(&str, &str)] = &[
    ("the", "DT"),
    ("of", "IN"),
    ("a", "DT"),
    ("to", "TO"),
    ("in", "IN"),
    ("and", "CC"),
    ("that", "WDT"),
    ("for", "IN"),
    ("is", "VBZ"),
    ("on", "IN"),
    ("with", "IN"),
    ("was", "VBD"),
];
const CUE_TAGS: &[&str] = &["NN", "JJ", "VB", "NNS", "RB", "VBN"];
const NOISE_TAGS: &[&str] = &["NN", "VB", "JJ", "NNS", "VBD", "RB", "NNP"];
const COLLOCATES_PER_SENSE: usize = 3;
const STREAM_SUITE: u64 = 0x7375_6974;

/// Generator parameters for one word problem.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub lemma: String,
    pub pos_class: PosClass,
    pub senses: usize,
    pub examples_a: usize,
    pub examples_b: usize,
    pub priors_a: Vec<f64>,
    pub priors_b: Vec<f64>,
    /// Cue vocabulary size per sense and part.
    pub cue_words: usize,
    /// Fraction of a sense's cue vocabulary common to both parts.
    pub shared_cues: f64,
    /// Probability that a context slot holds a cue word.
    pub cue_rate: f64,
    /// Probability that a cue slot borrows another sense's cue word.
    pub cue_confusion: f64,
    /// Probability that the token after the target is a sense collocate.
    pub colloc_rate: f64,
    /// Probability that a non-cue slot holds a function word.
    pub function_rate: f64,
    pub noise_words: usize,
    pub sentence_min: usize,
    pub sentence_max: usize,
    pub mislabel_rate: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Preset::IidDomains.config(0)
    }
}

/// Built-in generator settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Both parts drawn from the same distribution.
    IidDomains,
    /// Rotated sense priors and mostly part-specific cue vocabularies.
    ShiftedDomains,
    /// Every context word is a cue of the true sense; no background words.
    Separable,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::IidDomains, Preset::ShiftedDomains, Preset::Separable];

    pub fn name(self) -> &'static str {
        match self {
            Preset::IidDomains => "iid-domains",
            Preset::ShiftedDomains => "shifted-domains",
            Preset::Separable => "separable",
        }
    }

    /// Configuration of the `word`-th problem of the preset suite. The first
    /// 13 words of a suite are nouns, the rest verbs.
    pub fn config(self, word: usize) -> SynthConfig {
        let senses = 3 + (word * 7) % 6;
        let priors_a = geometric_priors(senses, 0.6, 0);
        let priors_b = match self {
            Preset::ShiftedDomains => geometric_priors(senses, 0.6, 1),
            _ => priors_a.clone(),
        };
        let base = SynthConfig {
            lemma: format!("w{:02}", word + 1),
            pos_class: if word < 13 { PosClass::Noun } else { PosClass::Verb },
            senses,
            examples_a: 500,
            examples_b: 500,
            priors_a,
            priors_b,
            cue_words: 8,
            shared_cues: 1.0,
            cue_rate: 0.15,
            cue_confusion: 0.3,
            colloc_rate: 0.6,
            function_rate: 0.35,
            noise_words: 3000,
            sentence_min: 10,
            sentence_max: 30,
            mislabel_rate: 0.0,
        };
        match self {
            Preset::IidDomains => base,
            Preset::ShiftedDomains => SynthConfig {
                shared_cues: 0.35,
                ..base
            },
            Preset::Separable => SynthConfig {
                examples_a: 200,
                examples_b: 200,
                cue_rate: 1.0,
                cue_confusion: 0.0,
                colloc_rate: 0.0,
                function_rate: 0.0,
                sentence_min: 4,
                sentence_max: 10,
                ..base
            },
        }
    }

    pub fn suite(self, words: usize) -> Vec<SynthConfig> {
        (0..words).map(|w| self.config(w)).collect()
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Param(format!("unknown preset {s:?}")))
    }
}

/// Probabilities proportional to `ratio^rank`, where sense `s` has rank
/// `(s + k - shift) mod k`.
fn geometric_priors(k: usize, ratio: f64, shift: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|s| ratio.powi(((s + k - shift % k) % k) as i32)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|p| p / total).collect()
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        if self.senses < 2 {
            return Err(Error::Param(format!("senses must be at least 2, got {}", self.senses)));
        }
        for (name, priors) in [("priors_a", &self.priors_a), ("priors_b", &self.priors_b)] {
            if priors.len() != self.senses {
                return Err(Error::Param(format!(
                    "{name} has {} entries for {} senses",
                    priors.len(),
                    self.senses
                )));
            }
            if priors.iter().any(|p| !(*p >= 0.0)) {
                return Err(Error::Param(format!("{name} has a negative entry")));
            }
            let sum: f64 = priors.iter().sum();
            if (sum - 1.0).abs() > 1e-9 {
                return Err(Error::Param(format!("{name} sums to {sum}, not 1")));
            }
        }
        for (name, v) in [
            ("shared_cues", self.shared_cues),
            ("cue_rate", self.cue_rate),
            ("cue_confusion", self.cue_confusion),
            ("colloc_rate", self.colloc_rate),
            ("function_rate", self.function_rate),
            ("mislabel_rate", self.mislabel_rate),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Param(format!("{name} must lie in [0, 1], got {v}")));
            }
        }
        if self.cue_words == 0 || self.noise_words == 0 {
            return Err(Error::Param("cue_words and noise_words must be positive".into()));
        }
        if self.sentence_min == 0 || self.sentence_min > self.sentence_max {
            return Err(Error::Param(format!(
                "bad sentence length range {}..={}",
                self.sentence_min, self.sentence_max
            )));
        }
        Ok(())
    }

    /// Reads the keys listed by [`SynthConfig::to_kv`]; missing keys keep
    /// their values from `base`.
    pub fn from_kv(cfg: &KvConfig, base: SynthConfig) -> Result<Self> {
        let mut c = base;
        if let Some(v) = cfg.get_str("lemma") {
            c.lemma = v.to_string();
        }
        if let Some(v) = cfg.get::<PosClass>("pos")? {
            c.pos_class = v;
        }
        macro_rules! read {
            ($($field:ident),*) => {
                $(if let Some(v) = cfg.get(stringify!($field))? { c.$field = v; })*
            };
        }
        read!(
            senses,
            examples_a,
            examples_b,
            cue_words,
            shared_cues,
            cue_rate,
            cue_confusion,
            colloc_rate,
            function_rate,
            noise_words,
            sentence_min,
            sentence_max,
            mislabel_rate
        );
        let senses_changed = cfg.get_str("senses").is_some();
        match cfg.get_list("priors_a")? {
            Some(p) => c.priors_a = p,
            None if senses_changed => c.priors_a = geometric_priors(c.senses, 0.6, 0),
            None => {}
        }
        match cfg.get_list("priors_b")? {
            Some(p) => c.priors_b = p,
            None if senses_changed => c.priors_b = c.priors_a.clone(),
            None => {}
        }
        c.validate()?;
        Ok(c)
    }

    pub fn to_kv(&self) -> KvConfig {
        let list = |p: &[f64]| p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let mut kv = KvConfig::new();
        kv.set("lemma", &self.lemma);
        kv.set("pos", self.pos_class.as_str());
        kv.set("senses", self.senses);
        kv.set("examples_a", self.examples_a);
        kv.set("examples_b", self.examples_b);
        kv.set("priors_a", list(&self.priors_a));
        kv.set("priors_b", list(&self.priors_b));
        kv.set("cue_words", self.cue_words);
        kv.set("shared_cues", self.shared_cues);
        kv.set("cue_rate", self.cue_rate);
        kv.set("cue_confusion", self.cue_confusion);
        kv.set("colloc_rate", self.colloc_rate);
        kv.set("function_rate", self.function_rate);
        kv.set("noise_words", self.noise_words);
        kv.set("sentence_min", self.sentence_min);
        kv.set("sentence_max", self.sentence_max);
        kv.set("mislabel_rate", self.mislabel_rate);
        kv
    }

    fn cue_word(&self, part: Part, sense: usize, j: usize) -> Token {
        let shared = ((self.shared_cues * self.cue_words as f64) + 1e-9).floor() as usize;
        let form = if j < shared {
            format!("k{sense}x{j}")
        } else {
            match part {
                Part::A => format!("k{sense}a{j}"),
                Part::B => format!("k{sense}b{j}"),
            }
        };
        Token::new(form, CUE_TAGS[(sense + j) % CUE_TAGS.len()])
    }
}

/// Output of [`generate_synthetic`], with the generator's ground truth.
#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub problem: WordProblem,
    /// Sense that generated each example (before label corruption).
    pub true_senses: Vec<String>,
    /// Ids of examples recorded under a wrong sense.
    pub mislabeled: Vec<usize>,
}

/// Draws a corpus; a pure function of `(config, seed)`.
pub fn generate_synthetic(config: &SynthConfig, seed: u64) -> Result<SyntheticCorpus> {
    config.validate()?;
    let mut rng = rng::stream(seed);
    let k = config.senses;
    let sense_name = |s: usize| format!("s{s}");

    let noise_dist = WeightedIndex::new((1..=config.noise_words).map(|r| 1.0 / r as f64)).expect("positive weights");
    let prior_a = WeightedIndex::new(&config.priors_a).map_err(|e| Error::Param(format!("priors_a: {e}")))?;
    let prior_b = WeightedIndex::new(&config.priors_b).map_err(|e| Error::Param(format!("priors_b: {e}")))?;

    let mut examples = Vec::with_capacity(config.examples_a + config.examples_b);
    let mut true_senses = Vec::new();
    let mut mislabeled = Vec::new();

    let parts = [
        (Part::A, config.examples_a, &prior_a),
        (Part::B, config.examples_b, &prior_b),
    ];
    for (part, count, priors) in parts {
        for _ in 0..count {
            let sense = priors.sample(&mut rng);
            let len = rng.random_range(config.sentence_min..=config.sentence_max);
            let target = rng.random_range(0..len);

            let mut tokens = Vec::with_capacity(len);
            for slot in 0..len {
                if slot == target {
                    tokens.push(target_token(config, &mut rng));
                    continue;
                }
                if slot == target + 1 && rng.random_bool(config.colloc_rate) {
                    let j = rng.random_range(0..COLLOCATES_PER_SENSE);
                    tokens.push(Token::new(format!("q{sense}x{j}"), "NN"));
                    continue;
                }
                let r: f64 = rng.random();
                if r < config.cue_rate {
                    let cue_sense = if k > 1 && rng.random_bool(config.cue_confusion) {
                        rng.random_range(0..k)
                    } else {
                        sense
                    };
                    let j = rng.random_range(0..config.cue_words);
                    tokens.push(config.cue_word(part, cue_sense, j));
                } else if rng.random_bool(config.function_rate) {
                    let (w, t) = FUNCTION_WORDS[rng.random_range(0..FUNCTION_WORDS.len())];
                    tokens.push(Token::new(w, t));
                } else {
                    let j = noise_dist.sample(&mut rng);
                    tokens.push(Token::new(format!("n{j}"), NOISE_TAGS[j % NOISE_TAGS.len()]));
                }
            }

            let id = examples.len();
            let recorded = if rng.random_bool(config.mislabel_rate) {
                mislabeled.push(id);
                let other = rng.random_range(0..k - 1);
                if other >= sense {
                    other + 1
                } else {
                    other
                }
            } else {
                sense
            };
            true_senses.push(sense_name(sense));
            examples.push(Example {
                id,
                part,
                sense: sense_name(recorded),
                tokens,
                target_index: target,
            });
        }
    }

    let problem = WordProblem::new(config.lemma.clone(), config.pos_class, examples)?;
    Ok(SyntheticCorpus {
        problem,
        true_senses,
        mislabeled,
    })
}

/// Generates the first `words` problems of `preset`, each with its own seed
/// derived from `seed`. Keys in `overrides` replace generator settings of
/// every word (see [`SynthConfig::from_kv`]).
pub fn generate_suite(preset: Preset, words: usize, overrides: &KvConfig, seed: u64) -> Result<Vec<SyntheticCorpus>> {
    if words == 0 {
        return Err(Error::Param("a suite needs at least one word".into()));
    }
    (0..words)
        .map(|w| {
            let config = SynthConfig::from_kv(overrides, preset.config(w))?;
            generate_synthetic(&config, rng::derive(seed, &[STREAM_SUITE, w as u64]))
        })
        .collect()
}

fn target_token<R: Rng>(config: &SynthConfig, rng: &mut R) -> Token {
    let lemma = &config.lemma;
    match config.pos_class {
        PosClass::Noun => {
            if rng.random_bool(0.25) {
                Token::new(format!("{lemma}s"), "NNS")
            } else {
                Token::new(lemma.clone(), "NN")
            }
        }
        PosClass::Verb => match rng.random_range(0..3) {
            0 => Token::new(lemma.clone(), "VB"),
            1 => Token::new(format!("{lemma}s"), "VBZ"),
            _ => Token::new(format!("{lemma}ed"), "VBD"),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn empirical(problem: &WordProblem, part: Part, k: usize) -> Vec<f64> {
        let mut counts = vec![0.0; k];
        let mut n = 0.0;
        for e in problem.part(part) {
            counts[e.sense[1..].parse::<usize>().unwrap()] += 1.0;
            n += 1.0;
        }
        counts.into_iter().map(|c| c / n).collect()
    }

    #[test]
    fn identical_generators_give_matching_priors() {
        let cfg = SynthConfig {
            examples_a: 2000,
            examples_b: 2000,
            ..Preset::IidDomains.config(0)
        };
        let corpus = generate_synthetic(&cfg, 3).unwrap();
        let a = empirical(&corpus.problem, Part::A, cfg.senses);
        let b = empirical(&corpus.problem, Part::B, cfg.senses);
        for (pa, pb) in a.iter().zip(&b) {
            // two binomial proportions of n = 2000: sd of the difference < 0.016
            assert!((pa - pb).abs() < 0.05, "{a:?} vs {b:?}");
        }
        assert!(corpus.mislabeled.is_empty());
    }

    #[test]
    fn mislabel_count_matches_recorded_flips() {
        let cfg = SynthConfig {
            examples_a: 50,
            examples_b: 50,
            mislabel_rate: 0.2,
            ..Preset::IidDomains.config(2)
        };
        let corpus = generate_synthetic(&cfg, 11).unwrap();
        let flipped: Vec<usize> = corpus
            .problem
            .examples
            .iter()
            .filter(|e| e.sense != corpus.true_senses[e.id])
            .map(|e| e.id)
            .collect();
        assert_eq!(flipped, corpus.mislabeled);
        // Binomial(100, 0.2): mean 20, sd 4
        assert!((8..=32).contains(&flipped.len()), "{}", flipped.len());
    }

    #[test]
    fn generation_is_deterministic() {
        let cfg = Preset::ShiftedDomains.config(4);
        let a = generate_synthetic(&cfg, 5).unwrap().problem.to_corpus_string();
        let b = generate_synthetic(&cfg, 5).unwrap().problem.to_corpus_string();
        assert_eq!(a, b);
        let c = generate_synthetic(&cfg, 6).unwrap().problem.to_corpus_string();
        assert_ne!(a, c);
    }

    #[test]
    fn rejects_bad_configs() {
        let mut cfg = Preset::IidDomains.config(0);
        cfg.priors_a[0] += 0.01;
        assert!(generate_synthetic(&cfg, 0).is_err());
        let cfg = SynthConfig {
            senses: 1,
            priors_a: vec![1.0],
            priors_b: vec![1.0],
            ..Preset::IidDomains.config(0)
        };
        assert!(generate_synthetic(&cfg, 0).is_err());
    }

    #[test]
    fn kv_round_trip() {
        for preset in Preset::ALL {
            let cfg = preset.config(5);
            let text = cfg.to_kv().to_string();
            let back = SynthConfig::from_kv(&KvConfig::parse(&text).unwrap(), SynthConfig::default()).unwrap();
            assert_eq!(back, cfg);
        }
    }

    #[test]
    fn shifted_preset_rotates_priors() {
        let cfg = Preset::ShiftedDomains.config(0);
        let argmax = |p: &[f64]| {
            p.iter()
                .enumerate()
                .fold((0, f64::MIN), |acc, (i, &x)| if x > acc.1 { (i, x) } else { acc })
                .0
        };
        assert_eq!(argmax(&cfg.priors_a), 0);
        assert_eq!(argmax(&cfg.priors_b), 1);
    }
}
