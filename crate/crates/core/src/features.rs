//! Binary feature extraction.
//!
//! Each occurrence is described by local and topical context:
//!
//! * `W[o]=form` and `P[o]=tag` for every token at offset `o ∈ [-3, +3]`
//!   from the target (the target itself included as `o = 0`);
//! * `C[o,n]=f1_f2(_f3)` for every 2- and 3-gram of forms lying inside the
//!   window, `o` being the offset of its first token;
//! * `T=form` for every distinct lower-cased content word of the sentence
//!   other than the target occurrence.
//!
//! Local features keep the original case. Offsets are rendered with an
//! explicit sign except for zero (`W[-1]`, `W[0]`, `W[+2]`).

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use crate::corpus::Example;
use crate::error::{Error, Result};

/// Half width of the local window.
pub const WINDOW: i32 = 3;

const DEFAULT_STOPWORDS: &[&str] = &[
    "a", "about", "after", "all", "an", "and", "any", "are", "as", "at", "be", "been", "but", "by", "can", "could",
    "did", "do", "for", "from", "had", "has", "have", "he", "her", "his", "i", "if", "in", "into", "is", "it", "its",
    "no", "not", "of", "on", "or", "our", "she", "so", "than", "that", "the", "their", "them", "there", "they", "this",
    "to", "was", "we", "were", "which", "who", "will", "with", "would", "you",
];

/// Words excluded from topical features.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stopwords(HashSet<String>);

impl Default for Stopwords {
    fn default() -> Self {
        Self(DEFAULT_STOPWORDS.iter().map(|w| w.to_string()).collect())
    }
}

impl Stopwords {
    pub fn empty() -> Self {
        Self(HashSet::new())
    }

    /// One word per line; blank lines are skipped and words are lower-cased.
    pub fn from_reader<R: BufRead>(reader: R) -> Result<Self> {
        let mut set = HashSet::new();
        for line in reader.lines() {
            let line = line?;
            let w = line.trim();
            if !w.is_empty() {
                set.insert(w.to_lowercase());
            }
        }
        Ok(Self(set))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RawFeature {
    Word {
        offset: i32,
        form: String,
    },
    Pos {
        offset: i32,
        tag: String,
    },
    /// `text` holds the forms joined by `_`.
    Colloc {
        offset: i32,
        len: usize,
        text: String,
    },
    Topical(String),
}

fn fmt_offset(o: i32) -> String {
    if o > 0 {
        format!("+{o}")
    } else {
        o.to_string()
    }
}

impl fmt::Display for RawFeature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RawFeature::Word { offset, form } => write!(f, "W[{}]={form}", fmt_offset(*offset)),
            RawFeature::Pos { offset, tag } => write!(f, "P[{}]={tag}", fmt_offset(*offset)),
            RawFeature::Colloc { offset, len, text } => {
                write!(f, "C[{},{len}]={text}", fmt_offset(*offset))
            }
            RawFeature::Topical(w) => write!(f, "T={w}"),
        }
    }
}

impl FromStr for RawFeature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Param(format!("not a canonical feature: {s:?}"));
        if let Some(w) = s.strip_prefix("T=") {
            return if w.is_empty() {
                Err(bad())
            } else {
                Ok(RawFeature::Topical(w.to_string()))
            };
        }
        let (head, value) = s.split_once("]=").ok_or_else(bad)?;
        if value.is_empty() {
            return Err(bad());
        }
        let (kind, args) = head.split_once('[').ok_or_else(bad)?;
        let parse_offset = |a: &str| -> Result<i32> {
            let o: i32 = a.parse().map_err(|_| bad())?;
            if o.abs() > WINDOW || fmt_offset(o) != a {
                return Err(bad());
            }
            Ok(o)
        };
        match kind {
            "W" => Ok(RawFeature::Word {
                offset: parse_offset(args)?,
                form: value.to_string(),
            }),
            "P" => Ok(RawFeature::Pos {
                offset: parse_offset(args)?,
                tag: value.to_string(),
            }),
            "C" => {
                let (o, n) = args.split_once(',').ok_or_else(bad)?;
                let len: usize = n.parse().map_err(|_| bad())?;
                if !(2..=3).contains(&len) || n != len.to_string() {
                    return Err(bad());
                }
                Ok(RawFeature::Colloc {
                    offset: parse_offset(o)?,
                    len,
                    text: value.to_string(),
                })
            }
            _ => Err(bad()),
        }
    }
}

/// Local window, collocation and topical features of one occurrence.
pub fn extract_features(example: &Example, stopwords: &Stopwords) -> BTreeSet<RawFeature> {
    let tokens = &example.tokens;
    let t = example.target_index as i32;
    let lo = (t - WINDOW).max(0);
    let hi = (t + WINDOW).min(tokens.len() as i32 - 1);
    let mut out = BTreeSet::new();

    for i in lo..=hi {
        let tok = &tokens[i as usize];
        out.insert(RawFeature::Word {
            offset: i - t,
            form: tok.form.clone(),
        });
        out.insert(RawFeature::Pos {
            offset: i - t,
            tag: tok.pos.clone(),
        });
    }
    for len in 2..=3 {
        for start in lo..=(hi - len as i32 + 1) {
            let text = tokens[start as usize..start as usize + len]
                .iter()
                .map(|tok| tok.form.as_str())
                .collect::<Vec<_>>()
                .join("_");
            out.insert(RawFeature::Colloc {
                offset: start - t,
                len,
                text,
            });
        }
    }
    for (i, tok) in tokens.iter().enumerate() {
        if i == example.target_index {
            continue;
        }
        let w = tok.form.to_lowercase();
        if !stopwords.contains(&w) {
            out.insert(RawFeature::Topical(w));
        }
    }
    out
}

/// Canonical strings of [`extract_features`], sorted and distinct.
pub fn extract_canonical(example: &Example, stopwords: &Stopwords) -> Vec<String> {
    let mut v: Vec<String> = extract_features(example, stopwords)
        .iter()
        .map(ToString::to_string)
        .collect();
    v.sort_unstable();
    v
}

/// Sorted, distinct active feature ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FeatureVector(Vec<u32>);

impl FeatureVector {
    pub fn new(mut ids: Vec<u32>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        Self(ids)
    }

    pub fn active(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, id: u32) -> bool {
        self.0.binary_search(&id).is_ok()
    }
}

impl From<Vec<u32>> for FeatureVector {
    fn from(ids: Vec<u32>) -> Self {
        Self::new(ids)
    }
}

/// Dense id assignment for canonical feature strings, built from training data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureIndex {
    forward: HashMap<String, u32>,
    backward: Vec<String>,
    min_count: usize,
}

impl FeatureIndex {
    /// Indexes every string present in at least `min_count` of the sets.
    /// Ids follow the lexicographic order of the strings.
    pub fn build<I, S, T>(sets: I, min_count: usize) -> Self
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = T>,
        T: AsRef<str>,
    {
        let min_count = min_count.max(1);
        let mut counts: BTreeMap<String, usize> = BTreeMap::new();
        for set in sets {
            let distinct: BTreeSet<String> = set.into_iter().map(|s| s.as_ref().to_string()).collect();
            for s in distinct {
                *counts.entry(s).or_default() += 1;
            }
        }
        let backward: Vec<String> = counts
            .into_iter()
            .filter(|&(_, c)| c >= min_count)
            .map(|(s, _)| s)
            .collect();
        Self::from_names(backward, min_count)
    }

    /// Rebuilds an index from its id-ordered strings (as stored in model files).
    pub fn from_names(backward: Vec<String>, min_count: usize) -> Self {
        let forward = backward
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i as u32))
            .collect();
        Self {
            forward,
            backward,
            min_count,
        }
    }

    pub fn len(&self) -> usize {
        self.backward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.backward.is_empty()
    }

    pub fn min_count(&self) -> usize {
        self.min_count
    }

    pub fn id(&self, feature: &str) -> Option<u32> {
        self.forward.get(feature).copied()
    }

    pub fn name(&self, id: u32) -> Option<&str> {
        self.backward.get(id as usize).map(String::as_str)
    }

    pub fn names(&self) -> &[String] {
        &self.backward
    }

    /// Known features only; unknown strings are dropped.
    pub fn vectorize<S: AsRef<str>>(&self, raw: &[S]) -> FeatureVector {
        FeatureVector::new(raw.iter().filter_map(|s| self.id(s.as_ref())).collect())
    }
}

/// Free-function form of [`FeatureIndex::vectorize`] over extracted features.
pub fn vectorize(raw: &BTreeSet<RawFeature>, index: &FeatureIndex) -> FeatureVector {
    FeatureVector::new(raw.iter().filter_map(|f| index.id(&f.to_string())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Part, Token};
    use proptest::prelude::*;

    fn example(tokens: &[(&str, &str)], target: usize) -> Example {
        Example {
            id: 0,
            part: Part::A,
            sense: "s".into(),
            tokens: tokens.iter().map(|(f, p)| Token::new(*f, *p)).collect(),
            target_index: target,
        }
    }

    fn names(ex: &Example, sw: &Stopwords) -> BTreeSet<String> {
        extract_features(ex, sw).iter().map(ToString::to_string).collect()
    }

    #[test]
    fn bank_fees_example() {
        let ex = example(&[("the", "DT"), ("bank", "NN"), ("fees", "NNS")], 1);
        let f = names(&ex, &Stopwords::empty());
        for want in [
            "W[-1]=the",
            "W[0]=bank",
            "P[+1]=NNS",
            "C[-1,2]=the_bank",
            "C[0,2]=bank_fees",
            "C[-1,3]=the_bank_fees",
            "T=the",
            "T=fees",
        ] {
            assert!(f.contains(want), "missing {want}: {f:?}");
        }
        assert!(!f.contains("T=bank"));
        // 3 words + 3 tags + 3 collocations + 2 topical
        assert_eq!(f.len(), 11);
    }

    #[test]
    fn sentence_start_has_no_negative_offsets() {
        let ex = example(&[("bank", "NN"), ("of", "IN"), ("the", "DT"), ("river", "NN")], 0);
        for feat in extract_features(&ex, &Stopwords::default()) {
            match feat {
                RawFeature::Word { offset, .. }
                | RawFeature::Pos { offset, .. }
                | RawFeature::Colloc { offset, .. } => assert!(offset >= 0),
                RawFeature::Topical(w) => assert_eq!(w, "river"),
            }
        }
    }

    #[test]
    fn one_token_sentence() {
        let ex = example(&[("Bank", "NNP")], 0);
        let f = names(&ex, &Stopwords::empty());
        assert_eq!(f, ["P[0]=NNP", "W[0]=Bank"].iter().map(|s| s.to_string()).collect());
    }

    #[test]
    fn window_is_clipped_to_three() {
        let toks: Vec<(&str, &str)> = (0..9).map(|_| ("x", "X")).collect();
        let ex = example(&toks, 4);
        let f = extract_features(&ex, &Stopwords::empty());
        let words = f.iter().filter(|x| matches!(x, RawFeature::Word { .. })).count();
        let collocs = f.iter().filter(|x| matches!(x, RawFeature::Colloc { .. })).count();
        assert_eq!(words, 7);
        // 6 bigrams and 5 trigrams inside a 7-token window
        assert_eq!(collocs, 11);
    }

    #[test]
    fn topical_is_lowercased_and_filtered() {
        let ex = example(&[("The", "DT"), ("Bank", "NNP"), ("bank", "NN")], 2);
        let f = names(&ex, &Stopwords::default());
        assert!(f.contains("T=bank"), "same form elsewhere in the sentence is kept");
        assert!(!f.contains("T=the"));
        assert!(f.contains("W[-2]=The"));
    }

    #[test]
    fn stopwords_from_reader() {
        let sw = Stopwords::from_reader("The\n\nof\n".as_bytes()).unwrap();
        assert_eq!(sw.len(), 2);
        assert!(sw.contains("the"));
    }

    #[test]
    fn index_thresholds_and_orders() {
        let sets = vec![vec!["b", "a"], vec!["a", "c"]];
        let idx = FeatureIndex::build(&sets, 1);
        assert_eq!(idx.names(), &["a", "b", "c"]);
        let idx2 = FeatureIndex::build(&sets, 2);
        assert_eq!(idx2.names(), &["a"]);
        assert_eq!(FeatureIndex::build(&sets, 1), idx);
    }

    #[test]
    fn vectorize_drops_unknown() {
        let idx = FeatureIndex::build([vec!["x", "y", "z"]], 1);
        assert_eq!(idx.vectorize(&["z", "x", "y"]).active(), &[0, 1, 2]);
        assert!(idx.vectorize(&["q"]).is_empty());
        assert_eq!(idx.vectorize(&["z", "q", "x"]).active(), &[0, 2]);
    }

    #[test]
    fn rejects_malformed_canonical_strings() {
        for s in ["W[4]=x", "W[1]=x", "C[0,4]=a_b", "Q[0]=x", "W[0]=", "T=", "P[+0]=NN"] {
            assert!(s.parse::<RawFeature>().is_err(), "{s}");
        }
    }

    fn arb_example() -> impl Strategy<Value = Example> {
        let tok = ("[a-zA-Z/_]{1,6}", "[A-Z]{2,3}");
        prop::collection::vec(tok, 1..12).prop_flat_map(|toks| {
            let n = toks.len();
            (Just(toks), 0..n).prop_map(|(toks, t)| Example {
                id: 0,
                part: Part::B,
                sense: "s".into(),
                tokens: toks.into_iter().map(|(f, p)| Token::new(f, p)).collect(),
                target_index: t,
            })
        })
    }

    proptest! {
        #[test]
        fn canonical_strings_parse_back(ex in arb_example()) {
            let feats = extract_features(&ex, &Stopwords::default());
            prop_assert_eq!(&feats, &extract_features(&ex, &Stopwords::default()));
            for f in feats {
                let s = f.to_string();
                prop_assert_eq!(s.parse::<RawFeature>().unwrap(), f);
            }
        }

        #[test]
        fn vectorize_is_monotone(ex in arb_example(), extra in "[a-z]{1,5}") {
            let raw = extract_canonical(&ex, &Stopwords::empty());
            let mut with_extra = raw.clone();
            with_extra.push(format!("T={extra}"));
            let idx = FeatureIndex::build([with_extra.clone(), vec!["T=zz".to_string()]], 1);
            let small = idx.vectorize(&raw);
            let big = idx.vectorize(&with_extra);
            prop_assert!(small.active().iter().all(|id| big.contains(*id)));
        }
    }
}
