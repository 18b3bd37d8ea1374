//! Text model files.
//!
//! ```text
//! WSDMODEL 1 <algo> <lemma> <k> <n_features>
//! senses<TAB>s0<TAB>s1...
//! <canonical feature string, one per id>
//! <algorithm section, tab-separated, features by canonical string>
//! end
//! ```
//!
//! Reals are written with 17 significant digits so a model reads back
//! bit-for-bit.

use std::io::{BufRead, Write};

use super::{
    DlModel, DlParams, DlRule, EbModel, LbModel, Method, MfcModel, Model, NbModel, SnowModel, SnowParams, TrainSet,
    WeakRule,
};
use crate::error::{Error, Result};
use crate::features::{FeatureIndex, FeatureVector};

/// A model together with what is needed to apply it to a new corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    pub lemma: String,
    pub senses: Vec<String>,
    pub index: FeatureIndex,
    pub model: Model,
}

fn real(x: f64) -> String {
    format!("{x:.16e}")
}

fn reals(xs: &[f64]) -> String {
    xs.iter().map(|&x| real(x)).collect::<Vec<_>>().join("\t")
}

pub fn write_model<W: Write>(tm: &TrainedModel, mut w: W) -> Result<()> {
    let k = tm.senses.len();
    let name = |f: u32| tm.index.name(f).expect("feature id within index");
    writeln!(
        w,
        "WSDMODEL 1 {} {} {} {}",
        tm.model.method().name(),
        tm.lemma,
        k,
        tm.index.len()
    )?;
    writeln!(w, "senses\t{}", tm.senses.join("\t"))?;
    for f in tm.index.names() {
        writeln!(w, "{f}")?;
    }
    match &tm.model {
        Model::Mfc(m) => {
            let counts: Vec<String> = m.counts.iter().map(ToString::to_string).collect();
            writeln!(w, "counts\t{}", counts.join("\t"))?;
        }
        Model::NaiveBayes(m) => {
            writeln!(w, "m\t{}", m.m)?;
            writeln!(w, "prior\t{}", reals(&m.prior))?;
            for (f, row) in m.cond.iter().enumerate() {
                if !row.is_empty() {
                    writeln!(w, "cond\t{}\t{}", name(f as u32), reals(row))?;
                }
            }
        }
        Model::Exemplar(m) => {
            writeln!(w, "k\t{}", m.k_neighbors)?;
            for (v, label) in m.stored.examples() {
                write!(w, "ex\t{label}")?;
                for &f in v.active() {
                    write!(w, "\t{}", name(f))?;
                }
                writeln!(w)?;
            }
        }
        Model::Snow(m) => {
            let p = &m.params;
            writeln!(
                w,
                "params\t{}\t{}\t{}\t{}",
                real(p.alpha),
                real(p.beta),
                real(p.theta),
                p.epochs
            )?;
            for (f, _) in m.seen.iter().enumerate().filter(|(_, &s)| s) {
                let ws: Vec<f64> = m.weights.iter().map(|node| node[f]).collect();
                writeln!(w, "w\t{}\t{}", name(f as u32), reals(&ws))?;
            }
        }
        Model::DecisionList(m) => {
            writeln!(w, "params\t{}\t{}", real(m.params.delta), real(m.params.min_weight))?;
            writeln!(w, "default\t{}", m.default_sense)?;
            for r in &m.rules {
                writeln!(w, "rule\t{}\t{}\t{}", name(r.feature), r.sense, real(r.weight))?;
            }
        }
        Model::LazyBoosting(m) => {
            writeln!(w, "epsilon\t{}", real(m.epsilon))?;
            for r in &m.rounds {
                writeln!(
                    w,
                    "round\t{}\t{}\t{}\t{}",
                    name(r.feature),
                    real(r.z),
                    reals(&r.c_present),
                    reals(&r.c_absent)
                )?;
            }
            if let Some(d) = &m.final_distribution {
                for row in d.chunks(k) {
                    writeln!(w, "dist\t{}", reals(row))?;
                }
            }
        }
    }
    writeln!(w, "end")?;
    Ok(())
}

struct Lines<R> {
    inner: std::io::Lines<R>,
    lineno: usize,
}

impl<R: BufRead> Lines<R> {
    fn next_line(&mut self) -> Result<Option<String>> {
        match self.inner.next() {
            None => Ok(None),
            Some(line) => {
                self.lineno += 1;
                Ok(Some(line?))
            }
        }
    }

    fn require(&mut self) -> Result<String> {
        self.next_line()?
            .ok_or_else(|| Error::parse(self.lineno + 1, "unexpected end of model file"))
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.lineno, msg)
    }
}

pub fn read_model<R: BufRead>(reader: R) -> Result<TrainedModel> {
    let mut lines = Lines {
        inner: reader.lines(),
        lineno: 0,
    };
    let header = lines.require()?;
    let h: Vec<&str> = header.split(' ').collect();
    if h.len() != 6 || h[0] != "WSDMODEL" {
        return Err(lines.err("expected `WSDMODEL 1 <algo> <lemma> <k> <n_features>`"));
    }
    if h[1] != "1" {
        return Err(lines.err(format!("unsupported model version {}", h[1])));
    }
    let method: Method = h[2]
        .parse()
        .map_err(|_| lines.err(format!("unknown algorithm {:?}", h[2])))?;
    let lemma = h[3].to_string();
    let k: usize = h[4].parse().map_err(|_| lines.err("bad sense count"))?;
    let n: usize = h[5].parse().map_err(|_| lines.err("bad feature count"))?;

    let senses_line = lines.require()?;
    let senses: Vec<String> = match senses_line.strip_prefix("senses\t") {
        Some(rest) => rest.split('\t').map(str::to_string).collect(),
        None if k == 0 && senses_line == "senses" => Vec::new(),
        None => return Err(lines.err("expected senses line")),
    };
    if senses.len() != k {
        return Err(lines.err(format!("{} senses listed, header says {k}", senses.len())));
    }
    let mut names = Vec::with_capacity(n);
    for _ in 0..n {
        names.push(lines.require()?);
    }
    let index = FeatureIndex::from_names(names, 1);

    let mut body: Vec<(usize, Vec<String>)> = Vec::new();
    loop {
        let line = lines.require()?;
        if line == "end" {
            break;
        }
        body.push((lines.lineno, line.split('\t').map(str::to_string).collect()));
    }

    let feature = |lineno: usize, s: &str| {
        index
            .id(s)
            .ok_or_else(|| Error::parse(lineno, format!("unknown feature {s:?}")))
    };
    let num = |lineno: usize, s: &str| {
        s.parse::<f64>()
            .map_err(|_| Error::parse(lineno, format!("bad number {s:?}")))
    };
    let int = |lineno: usize, s: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::parse(lineno, format!("bad integer {s:?}")))
    };
    let nums = |lineno: usize, xs: &[String]| -> Result<Vec<f64>> { xs.iter().map(|x| num(lineno, x)).collect() };
    let expect_len = |lineno: usize, fields: &[String], len: usize| {
        if fields.len() == len {
            Ok(())
        } else {
            Err(Error::parse(
                lineno,
                format!("expected {len} fields, found {}", fields.len()),
            ))
        }
    };
    let single = |tag: &str| -> Result<(usize, &Vec<String>)> {
        body.iter()
            .find(|(_, f)| f[0] == tag)
            .map(|(l, f)| (*l, f))
            .ok_or_else(|| Error::Validation(format!("model file lacks `{tag}` line")))
    };

    let model = match method {
        Method::Mfc => {
            let (l, f) = single("counts")?;
            expect_len(l, f, k + 1)?;
            let counts = f[1..].iter().map(|x| int(l, x)).collect::<Result<Vec<_>>>()?;
            Model::Mfc(MfcModel::from_counts(counts))
        }
        Method::NaiveBayes => {
            let (l, f) = single("m")?;
            expect_len(l, f, 2)?;
            let m = int(l, &f[1])?;
            let (l, f) = single("prior")?;
            expect_len(l, f, k + 1)?;
            let prior = nums(l, &f[1..])?;
            let mut cond = vec![Vec::new(); n];
            for (l, f) in body.iter().filter(|(_, f)| f[0] == "cond") {
                expect_len(*l, f, k + 2)?;
                cond[feature(*l, &f[1])? as usize] = nums(*l, &f[2..])?;
            }
            Model::NaiveBayes(NbModel { prior, cond, m })
        }
        Method::Exemplar => {
            let (l, f) = single("k")?;
            expect_len(l, f, 2)?;
            let k_neighbors = int(l, &f[1])?;
            let mut vectors = Vec::new();
            let mut labels = Vec::new();
            for (l, f) in body.iter().filter(|(_, f)| f[0] == "ex") {
                if f.len() < 2 {
                    return Err(Error::parse(*l, "exemplar line without label"));
                }
                labels.push(int(*l, &f[1])?);
                let ids = f[2..].iter().map(|s| feature(*l, s)).collect::<Result<Vec<_>>>()?;
                vectors.push(FeatureVector::new(ids));
            }
            let stored = TrainSet::new(vectors, labels, k, n)?;
            Model::Exemplar(EbModel::train(&stored, k_neighbors)?)
        }
        Method::Snow => {
            let (l, f) = single("params")?;
            expect_len(l, f, 5)?;
            let params = SnowParams {
                alpha: num(l, &f[1])?,
                beta: num(l, &f[2])?,
                theta: num(l, &f[3])?,
                epochs: int(l, &f[4])?,
            };
            let mut weights = vec![vec![0.0; n]; k];
            let mut seen = vec![false; n];
            for (l, f) in body.iter().filter(|(_, f)| f[0] == "w") {
                expect_len(*l, f, k + 2)?;
                let id = feature(*l, &f[1])? as usize;
                seen[id] = true;
                for (s, x) in f[2..].iter().enumerate() {
                    weights[s][id] = num(*l, x)?;
                }
            }
            Model::Snow(SnowModel { weights, seen, params })
        }
        Method::DecisionList => {
            let (l, f) = single("params")?;
            expect_len(l, f, 3)?;
            let params = DlParams {
                delta: num(l, &f[1])?,
                min_weight: num(l, &f[2])?,
            };
            let (l, f) = single("default")?;
            expect_len(l, f, 2)?;
            let default_sense = int(l, &f[1])?;
            let mut rules = Vec::new();
            for (l, f) in body.iter().filter(|(_, f)| f[0] == "rule") {
                expect_len(*l, f, 4)?;
                rules.push(DlRule {
                    feature: feature(*l, &f[1])?,
                    sense: int(*l, &f[2])?,
                    weight: num(*l, &f[3])?,
                });
            }
            Model::DecisionList(DlModel::new(rules, default_sense, params))
        }
        Method::LazyBoosting => {
            let (l, f) = single("epsilon")?;
            expect_len(l, f, 2)?;
            let epsilon = num(l, &f[1])?;
            let mut rounds = Vec::new();
            for (l, f) in body.iter().filter(|(_, f)| f[0] == "round") {
                expect_len(*l, f, 2 * k + 3)?;
                rounds.push(WeakRule {
                    feature: feature(*l, &f[1])?,
                    z: num(*l, &f[2])?,
                    c_present: nums(*l, &f[3..3 + k])?,
                    c_absent: nums(*l, &f[3 + k..])?,
                });
            }
            let mut dist = Vec::new();
            for (l, f) in body.iter().filter(|(_, f)| f[0] == "dist") {
                expect_len(*l, f, k + 1)?;
                dist.extend(nums(*l, &f[1..])?);
            }
            Model::LazyBoosting(LbModel {
                rounds,
                n_senses: k,
                epsilon,
                final_distribution: if dist.is_empty() { None } else { Some(dist) },
            })
        }
    };

    Ok(TrainedModel {
        lemma,
        senses,
        index,
        model,
    })
}
