//! Annotation-noise detection from the final LazyBoosting distribution.
//!
//! Examples the ensemble keeps getting wrong accumulate weight, so the
//! heaviest rows of the last distribution point at suspicious labels.

use std::fmt::Write as _;
use std::io::Write;

use crate::classifiers::{LbModel, TrainSet, WeakRule};
use crate::error::{Error, Result};
use crate::features::FeatureIndex;

/// Number of rules dumped when the caller does not ask for another amount.
pub const DEFAULT_TOP_RULES: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct Suspect {
    /// Position of the example in the training set.
    pub position: usize,
    /// Σ over senses of its final distribution mass.
    pub weight: f64,
    pub gold: usize,
    pub predicted: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedRule {
    pub rank: usize,
    /// Boosting round that produced the rule.
    pub round: usize,
    pub rule: WeakRule,
    /// Largest `|c|` over both blocks and all senses.
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuspicionReport {
    pub ranked: Vec<Suspect>,
    pub rules: Vec<RankedRule>,
}

/// Per-example marginal of the retained distribution.
pub fn suspicion_weights(model: &LbModel, ts: &TrainSet) -> Result<Vec<f64>> {
    let dist = model
        .final_distribution
        .as_ref()
        .ok_or_else(|| Error::Validation("model has no retained boosting distribution".into()))?;
    let k = model.n_senses;
    if k == 0 || dist.len() != ts.len() * k {
        return Err(Error::Validation(format!(
            "distribution has {} entries but the training set needs {}×{}",
            dist.len(),
            ts.len(),
            k
        )));
    }
    Ok(dist.chunks(k).map(|row| row.iter().sum()).collect())
}

/// Ranks training examples by suspicion and lists the strongest rules.
///
/// Rules are ordered by their largest per-sense `|c|`, ties going to the
/// earlier round.
pub fn rank_suspicious(model: &LbModel, ts: &TrainSet, top_n: usize, top_rules: usize) -> Result<SuspicionReport> {
    if top_n == 0 {
        return Err(Error::Param("top_n must be at least 1".into()));
    }
    let weights = suspicion_weights(model, ts)?;
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
    let ranked = order
        .into_iter()
        .take(top_n)
        .map(|i| Suspect {
            position: i,
            weight: weights[i],
            gold: ts.labels[i],
            predicted: model.classify(&ts.vectors[i]),
        })
        .collect();

    let mut rules: Vec<(usize, f64)> = model
        .rounds
        .iter()
        .enumerate()
        .map(|(t, r)| {
            let m = r
                .c_present
                .iter()
                .chain(&r.c_absent)
                .fold(0.0f64, |acc, c| acc.max(c.abs()));
            (t, m)
        })
        .collect();
    rules.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let rules = rules
        .into_iter()
        .take(top_rules)
        .enumerate()
        .map(|(rank, (round, magnitude))| RankedRule {
            rank: rank + 1,
            round,
            rule: model.rounds[round].clone(),
            magnitude,
        })
        .collect();

    Ok(SuspicionReport { ranked, rules })
}

/// Names used when writing a report.
pub struct ReportContext<'a> {
    pub index: &'a FeatureIndex,
    pub senses: &'a [String],
    /// Example id of each training position.
    pub example_ids: &'a [usize],
}

/// `rank, example_id, weight, gold, predicted`.
pub fn write_suspects_csv<W: Write>(report: &SuspicionReport, ctx: &ReportContext<'_>, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["rank", "example_id", "weight", "gold", "predicted"])?;
    for (r, s) in report.ranked.iter().enumerate() {
        out.write_record([
            (r + 1).to_string(),
            ctx.example_ids[s.position].to_string(),
            format!("{:.12e}", s.weight),
            ctx.senses[s.gold].clone(),
            ctx.senses[s.predicted].clone(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// `rank, round, feature, magnitude`, then `present:<sense>` and
/// `absent:<sense>` for every sense.
pub fn write_rules_csv<W: Write>(report: &SuspicionReport, ctx: &ReportContext<'_>, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header: Vec<String> = ["rank", "round", "feature", "magnitude"].map(String::from).to_vec();
    header.extend(ctx.senses.iter().map(|s| format!("present:{s}")));
    header.extend(ctx.senses.iter().map(|s| format!("absent:{s}")));
    out.write_record(&header)?;
    for r in &report.rules {
        let mut rec = vec![
            r.rank.to_string(),
            r.round.to_string(),
            ctx.index.name(r.rule.feature).unwrap_or("?").to_string(),
            format!("{:.6}", r.magnitude),
        ];
        rec.extend(r.rule.c_present.iter().map(|c| format!("{c:.6}")));
        rec.extend(r.rule.c_absent.iter().map(|c| format!("{c:.6}")));
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

/// Plain listing: suspects first, then one rule per line.
pub fn render_report(report: &SuspicionReport, ctx: &ReportContext<'_>) -> String {
    let mut s = String::from("# suspicious examples\n");
    for (r, x) in report.ranked.iter().enumerate() {
        let _ = writeln!(
            s,
            "{:>4}  id {:<6} weight {:.6}  gold {}  predicted {}",
            r + 1,
            ctx.example_ids[x.position],
            x.weight,
            ctx.senses[x.gold],
            ctx.senses[x.predicted]
        );
    }
    s.push_str("# rules\n");
    for r in &report.rules {
        let best = r
            .rule
            .c_present
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
            .map(|(l, _)| ctx.senses[l].as_str())
            .unwrap_or("?");
        let cs: Vec<String> = r.rule.c_present.iter().map(|c| format!("{c:+.3}")).collect();
        let _ = writeln!(
            s,
            "{:>4}  {}  -> {}  |c|={:.3}  [{}]",
            r.rank,
            ctx.index.name(r.rule.feature).unwrap_or("?"),
            best,
            r.magnitude,
            cs.join(" ")
        );
    }
    s
}
