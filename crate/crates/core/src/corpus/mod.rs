//! Sense-tagged corpora.
//!
//! A corpus file holds every tagged occurrence of one target word:
//!
//! ```text
//! #WSD bank noun
//! A<TAB>finance<TAB>1<TAB>the/DT bank/NN raised/VBD rates/NNS
//! B<TAB>river<TAB>2<TAB>along/IN the/DT bank/NN
//! ```
//!
//! Each line carries the corpus part, the sense label, the token offset of
//! the target and the `form/POS` tokens. The last `/` of a token separates
//! the form from its tag. Lines starting with `#` after the header are
//! comments.

mod split;
mod synth;

pub use split::{split, tuning_split, Combination, Fold, SplitSpec, Splits, TuningSplit};
pub use synth::{generate_suite, generate_synthetic, Preset, SynthConfig, SyntheticCorpus};

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Source corpus of an example.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Part {
    A,
    B,
}

impl Part {
    pub fn as_str(self) -> &'static str {
        match self {
            Part::A => "A",
            Part::B => "B",
        }
    }
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Part {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Part::A),
            "B" | "b" => Ok(Part::B),
            _ => Err(Error::Param(format!("unknown corpus part {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PosClass {
    Noun,
    Verb,
}

impl PosClass {
    pub fn as_str(self) -> &'static str {
        match self {
            PosClass::Noun => "noun",
            PosClass::Verb => "verb",
        }
    }
}

impl FromStr for PosClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "noun" => Ok(PosClass::Noun),
            "verb" => Ok(PosClass::Verb),
            _ => Err(Error::Param(format!("unknown word class {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub form: String,
    pub pos: String,
}

impl Token {
    pub fn new(form: impl Into<String>, pos: impl Into<String>) -> Self {
        Self {
            form: form.into(),
            pos: pos.into(),
        }
    }
}

/// One sense-tagged occurrence of the target word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Example {
    pub id: usize,
    pub part: Part,
    pub sense: String,
    pub tokens: Vec<Token>,
    pub target_index: usize,
}

impl Example {
    fn validate(&self) -> std::result::Result<(), String> {
        if self.tokens.is_empty() {
            return Err("example has no tokens".into());
        }
        if self.target_index >= self.tokens.len() {
            return Err(format!(
                "target index {} out of range for {} tokens",
                self.target_index,
                self.tokens.len()
            ));
        }
        if self.sense.is_empty() {
            return Err("empty sense label".into());
        }
        if let Some(t) = self.tokens.iter().find(|t| t.form.is_empty() || t.pos.is_empty()) {
            return Err(format!("token with empty form or tag: {:?}", t));
        }
        Ok(())
    }
}

/// All examples of one target word. Each word is its own classification
/// problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordProblem {
    pub lemma: String,
    pub pos_class: PosClass,
    pub examples: Vec<Example>,
    /// Sense labels in order of first occurrence.
    pub sense_inventory: Vec<String>,
}

impl WordProblem {
    /// Validates the examples and derives the sense inventory.
    pub fn new(lemma: impl Into<String>, pos_class: PosClass, examples: Vec<Example>) -> Result<Self> {
        let mut sense_inventory: Vec<String> = Vec::new();
        let mut seen_ids = std::collections::HashSet::new();
        for ex in &examples {
            ex.validate()
                .map_err(|e| Error::Validation(format!("example {}: {e}", ex.id)))?;
            if !seen_ids.insert(ex.id) {
                return Err(Error::Validation(format!("duplicate example id {}", ex.id)));
            }
            if !sense_inventory.contains(&ex.sense) {
                sense_inventory.push(ex.sense.clone());
            }
        }
        if examples.is_empty() {
            return Err(Error::Validation("corpus has no examples".into()));
        }
        Ok(Self {
            lemma: lemma.into(),
            pos_class,
            examples,
            sense_inventory,
        })
    }

    pub fn n_senses(&self) -> usize {
        self.sense_inventory.len()
    }

    pub fn sense_id(&self, sense: &str) -> Option<usize> {
        self.sense_inventory.iter().position(|s| s == sense)
    }

    /// Sense id of every example, in example order.
    pub fn labels(&self) -> Vec<usize> {
        self.examples
            .iter()
            .map(|e| self.sense_id(&e.sense).expect("inventory covers all senses"))
            .collect()
    }

    pub fn label_of(&self, ex: &Example) -> usize {
        self.sense_id(&ex.sense).expect("inventory covers all senses")
    }

    pub fn part(&self, part: Part) -> impl Iterator<Item = &Example> {
        self.examples.iter().filter(move |e| e.part == part)
    }

    /// At least two senses are needed for a meaningful classifier.
    pub fn is_trainable(&self) -> bool {
        self.sense_inventory.len() >= 2
    }

    pub fn to_corpus_string(&self) -> String {
        let mut buf = Vec::new();
        write_corpus(self, &mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("corpus text is UTF-8")
    }
}

/// Reads a corpus file. Example ids are assigned in file order from 0.
pub fn parse_corpus<R: BufRead>(reader: R) -> Result<WordProblem> {
    let mut header: Option<(String, PosClass)> = None;
    let mut examples = Vec::new();

    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let line = line.strip_suffix('\r').unwrap_or(&line);

        if header.is_none() {
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            match (fields.next(), fields.next(), fields.next(), fields.next()) {
                (Some("#WSD"), Some(lemma), Some(class), None) => {
                    let class = class
                        .parse()
                        .map_err(|_| Error::parse(lineno, format!("unknown word class {class:?}")))?;
                    header = Some((lemma.to_string(), class));
                }
                _ => return Err(Error::parse(lineno, "expected header `#WSD <lemma> <noun|verb>`")),
            }
            continue;
        }

        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }

        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 4 {
            return Err(Error::parse(
                lineno,
                format!("expected 4 tab-separated fields, found {}", fields.len()),
            ));
        }
        let part: Part = fields[0]
            .parse()
            .map_err(|_| Error::parse(lineno, format!("unknown part {:?}", fields[0])))?;
        let sense = fields[1].to_string();
        let target_index: usize = fields[2]
            .trim()
            .parse()
            .map_err(|_| Error::parse(lineno, format!("bad target index {:?}", fields[2])))?;
        let tokens = fields[3]
            .split_whitespace()
            .map(|tok| {
                tok.rsplit_once('/')
                    .filter(|(form, pos)| !form.is_empty() && !pos.is_empty())
                    .map(|(form, pos)| Token::new(form, pos))
                    .ok_or_else(|| Error::parse(lineno, format!("token {tok:?} is not form/POS")))
            })
            .collect::<Result<Vec<_>>>()?;

        let ex = Example {
            id: examples.len(),
            part,
            sense,
            tokens,
            target_index,
        };
        ex.validate()
            .map_err(|e| Error::Validation(format!("line {lineno}: {e}")))?;
        examples.push(ex);
    }

    let (lemma, class) = header.ok_or_else(|| Error::Validation("empty corpus file".into()))?;
    if examples.is_empty() {
        return Err(Error::Validation("corpus file has no examples".into()));
    }
    WordProblem::new(lemma, class, examples)
}

pub fn parse_corpus_str(text: &str) -> Result<WordProblem> {
    parse_corpus(text.as_bytes())
}

/// Writes `problem` in corpus file format. Example ids are implicit.
pub fn write_corpus<W: Write>(problem: &WordProblem, mut w: W) -> Result<()> {
    writeln!(w, "#WSD {} {}", problem.lemma, problem.pos_class.as_str())?;
    for ex in &problem.examples {
        write!(w, "{}\t{}\t{}\t", ex.part, ex.sense, ex.target_index)?;
        for (i, t) in ex.tokens.iter().enumerate() {
            if i > 0 {
                w.write_all(b" ")?;
            }
            write!(w, "{}/{}", t.form, t.pos)?;
        }
        w.write_all(b"\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_two_line_file() {
        let text = "#WSD bank noun\nA\ts1\t1\tthe/DT bank/NN\nB\ts2\t0\tbank/NN of/IN rivers/NNS\n";
        let p = parse_corpus_str(text).unwrap();
        assert_eq!(p.lemma, "bank");
        assert_eq!(p.pos_class, PosClass::Noun);
        assert_eq!(p.examples.len(), 2);
        assert_eq!(p.sense_inventory, vec!["s1", "s2"]);
        assert_eq!(p.examples[0].id, 0);
        assert_eq!(p.examples[1].part, Part::B);
        assert_eq!(p.examples[1].tokens[2], Token::new("rivers", "NNS"));
    }

    #[test]
    fn inventory_follows_first_occurrence() {
        let text = "#WSD bank noun\nA\ts2\t0\tbank/NN\nA\ts1\t0\tbank/NN\nA\ts2\t0\tbank/NN\n";
        let p = parse_corpus_str(text).unwrap();
        assert_eq!(p.sense_inventory, vec!["s2", "s1"]);
        assert_eq!(p.labels(), vec![0, 1, 0]);
    }

    #[test]
    fn target_index_at_token_count_is_rejected() {
        let text = "#WSD bank noun\nA\ts1\t0\tbank/NN\nA\ts1\t2\tthe/DT bank/NN\n";
        match parse_corpus_str(text) {
            Err(Error::Validation(msg)) => assert!(msg.contains("line 3"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn wrong_field_count_names_line() {
        let text = "#WSD bank noun\n# a comment\nA\ts1\tbank/NN\n";
        assert!(matches!(parse_corpus_str(text), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn empty_file_is_invalid() {
        assert!(matches!(parse_corpus_str(""), Err(Error::Validation(_))));
        assert!(matches!(
            parse_corpus_str("#WSD bank noun\n"),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn last_slash_splits_form_and_tag() {
        let text = "#WSD and/or noun\nA\tx\t0\tand/or/CC 1/2/CD\n";
        let p = parse_corpus_str(text).unwrap();
        assert_eq!(p.examples[0].tokens[0], Token::new("and/or", "CC"));
        assert_eq!(p.examples[0].tokens[1], Token::new("1/2", "CD"));
        assert_eq!(parse_corpus_str(&p.to_corpus_string()).unwrap(), p);
    }

    #[test]
    fn rejects_tokens_without_tag() {
        let text = "#WSD bank noun\nA\tx\t0\tbank/\n";
        assert!(matches!(parse_corpus_str(text), Err(Error::Parse { line: 2, .. })));
        let text = "#WSD bank noun\nC\tx\t0\tbank/NN\n";
        assert!(matches!(parse_corpus_str(text), Err(Error::Parse { line: 2, .. })));
    }
}
