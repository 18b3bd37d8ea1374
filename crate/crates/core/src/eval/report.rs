//! CSV and aligned-text renderings of the evaluation tables.
//!
//! Column orders:
//!
//! * `accuracy.csv`, `accuracy_sd.csv`: `method` then the seven combinations
//!   (`A+B-A+B, A+B-A, A+B-B, A-A, B-B, A-B, B-A`); percentages with two
//!   decimals, empty where no value exists.
//! * `significance.csv`: `scope, method, combination, reference, only_method,
//!   only_reference, mcnemar, mcnemar_significant, t, t_df, t_significant`.
//! * `agreement.csv`, `kappa.csv`: a square matrix with `gold` first; the
//!   diagonal is empty.
//! * `tuning.csv`: `method, baseline`, then `combined@f` and `tuning@f` for
//!   each fraction `f` (percent of the target part).

use std::fmt::Write as _;
use std::io::Write;

use crate::corpus::Combination;
use crate::error::Result;

use super::agreement::AgreementMatrix;
use super::experiment::TuningCurve;
use super::summary::{Cell, EvaluationReport};

fn pct(x: Option<f64>) -> String {
    x.map(|v| format!("{:.2}", v * 100.0)).unwrap_or_default()
}

fn real(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.6}")
    }
}

fn accuracy_like<W: Write>(report: &EvaluationReport, w: W, pick: fn(&Cell) -> Option<f64>) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["method".to_string()];
    header.extend(Combination::ALL.iter().map(|c| c.label().to_string()));
    out.write_record(&header)?;
    for (m, row) in report.methods.iter().zip(&report.cells) {
        let mut rec = vec![m.title().to_string()];
        rec.extend(row.iter().map(|c| pct(pick(c))));
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_accuracy_csv<W: Write>(report: &EvaluationReport, w: W) -> Result<()> {
    accuracy_like(report, w, |c| c.mean)
}

pub fn write_accuracy_sd_csv<W: Write>(report: &EvaluationReport, w: W) -> Result<()> {
    accuracy_like(report, w, |c| c.sd)
}

/// One row per (report, method, combination) with at least one test result.
pub fn write_significance_csv<W: Write>(reports: &[EvaluationReport], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "scope",
        "method",
        "combination",
        "reference",
        "only_method",
        "only_reference",
        "mcnemar",
        "mcnemar_significant",
        "t",
        "t_df",
        "t_significant",
    ])?;
    for report in reports {
        for (m, row) in report.methods.iter().zip(&report.cells) {
            for (cell, combo) in row.iter().zip(Combination::ALL) {
                if cell.mcnemar.is_none() && cell.ttest.is_none() {
                    continue;
                }
                let mc = cell.mcnemar;
                let tt = cell.ttest;
                out.write_record([
                    report.label.clone(),
                    m.title().to_string(),
                    combo.label().to_string(),
                    report.reference.title().to_string(),
                    mc.map(|x| x.only_a.to_string()).unwrap_or_default(),
                    mc.map(|x| x.only_b.to_string()).unwrap_or_default(),
                    mc.map(|x| real(x.statistic)).unwrap_or_default(),
                    mc.map(|x| x.significant.to_string()).unwrap_or_default(),
                    tt.map(|x| real(x.t)).unwrap_or_default(),
                    tt.map(|x| x.df.to_string()).unwrap_or_default(),
                    tt.map(|x| x.significant.to_string()).unwrap_or_default(),
                ])?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn write_matrix<W: Write>(matrix: &AgreementMatrix, values: &[Vec<f64>], fmt: fn(f64) -> String, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec![String::new()];
    header.extend(matrix.labels.iter().cloned());
    out.write_record(&header)?;
    for (i, label) in matrix.labels.iter().enumerate() {
        let mut rec = vec![label.clone()];
        rec.extend(
            values[i]
                .iter()
                .enumerate()
                .map(|(j, &v)| if i == j { String::new() } else { fmt(v) }),
        );
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

/// Agreement rates in percent.
pub fn write_agreement_csv<W: Write>(matrix: &AgreementMatrix, w: W) -> Result<()> {
    write_matrix(matrix, &matrix.agreement, |v| format!("{:.2}", v * 100.0), w)
}

pub fn write_kappa_csv<W: Write>(matrix: &AgreementMatrix, w: W) -> Result<()> {
    write_matrix(matrix, &matrix.kappa, |v| format!("{v:.4}"), w)
}

fn fraction_tag(f: f64) -> String {
    format!("{}", (f * 100.0).round() as i64)
}

pub fn write_tuning_csv<W: Write>(curve: &TuningCurve, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["method".to_string(), "baseline".to_string()];
    header.extend(curve.fractions.iter().map(|&f| format!("combined@{}", fraction_tag(f))));
    header.extend(curve.fractions.iter().map(|&f| format!("tuning@{}", fraction_tag(f))));
    out.write_record(&header)?;
    for (j, m) in curve.methods.iter().enumerate() {
        let mut rec = vec![m.title().to_string(), pct(Some(curve.baseline[j]))];
        rec.extend(curve.combined[j].iter().map(|&v| pct(Some(v))));
        rec.extend(curve.tuning_only[j].iter().map(|&v| pct(Some(v))));
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

fn render_grid(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|j| {
            rows.iter()
                .filter_map(|r| r.get(j))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut s = String::new();
    for row in rows {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(j, cell)| {
                if j == 0 {
                    format!("{cell:<w$}", w = widths[j])
                } else {
                    format!("{cell:>w$}", w = widths[j])
                }
            })
            .collect();
        let _ = writeln!(s, "{}", line.join("  ").trim_end());
    }
    s
}

/// Accuracy table with `mean±sd` cells and the per-method average.
pub fn render_accuracy_table(report: &EvaluationReport) -> String {
    let mut rows = vec![{
        let mut h = vec!["".to_string()];
        h.extend(Combination::ALL.iter().map(|c| c.label().to_string()));
        h.push("mean".into());
        h
    }];
    for (m, row) in report.methods.iter().zip(&report.cells) {
        let mut r = vec![m.title().to_string()];
        for c in row {
            r.push(match (c.mean, c.sd) {
                (Some(a), Some(sd)) => format!("{:.2}±{:.2}", a * 100.0, sd * 100.0),
                (Some(a), None) => format!("{:.2}", a * 100.0),
                _ => "-".into(),
            });
        }
        r.push(pct(report.overall_mean(*m)));
        rows.push(r);
    }
    let mut s = render_grid(&rows);
    for (word, combo, msg) in &report.errors {
        let _ = writeln!(s, "! {word} {combo}: {msg}");
    }
    s
}

/// Kappa below the diagonal, agreement (percent) above it.
pub fn render_agreement_table(matrix: &AgreementMatrix) -> String {
    let mut rows = vec![{
        let mut h = vec!["".to_string()];
        h.extend(matrix.labels.iter().cloned());
        h
    }];
    for (i, label) in matrix.labels.iter().enumerate() {
        let mut r = vec![label.clone()];
        for j in 0..matrix.len() {
            r.push(match i.cmp(&j) {
                std::cmp::Ordering::Equal => "-".into(),
                std::cmp::Ordering::Less => format!("{:.2}", matrix.agreement[i][j] * 100.0),
                std::cmp::Ordering::Greater => format!("{:.2}", matrix.kappa[i][j]),
            });
        }
        rows.push(r);
    }
    render_grid(&rows)
}

pub fn render_tuning_table(curve: &TuningCurve) -> String {
    let mut header = vec!["".to_string(), "base".to_string()];
    header.extend(curve.fractions.iter().map(|&f| format!("+{}%", fraction_tag(f))));
    header.extend(curve.fractions.iter().map(|&f| format!("only{}%", fraction_tag(f))));
    let mut rows = vec![header];
    for (j, m) in curve.methods.iter().enumerate() {
        let mut r = vec![m.title().to_string(), pct(Some(curve.baseline[j]))];
        r.extend(curve.combined[j].iter().map(|&v| pct(Some(v))));
        r.extend(curve.tuning_only[j].iter().map(|&v| pct(Some(v))));
        rows.push(r);
    }
    let mut s = render_grid(&rows);
    let _ = writeln!(s, "MFS of target test half: {}", pct(Some(curve.target_mfs)));
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifiers::Method;
    use crate::eval::agreement_matrix;
    use crate::eval::PredictionRecord;

    fn report() -> EvaluationReport {
        let cell = Cell {
            mean: Some(0.6632),
            sd: Some(0.0134),
            ..Cell::default()
        };
        EvaluationReport {
            label: "ALL".into(),
            methods: vec![Method::Mfc, Method::LazyBoosting],
            reference: Method::LazyBoosting,
            cells: vec![vec![cell.clone(); 7], vec![Cell::default(); 7]],
            errors: vec![],
        }
    }

    #[test]
    fn accuracy_csv_layout() {
        let mut buf = Vec::new();
        write_accuracy_csv(&report(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "method,A+B-A+B,A+B-A,A+B-B,A-A,B-B,A-B,B-A");
        assert_eq!(lines[1], "MFC,66.32,66.32,66.32,66.32,66.32,66.32,66.32");
        assert_eq!(lines[2], "LB,,,,,,,");
    }

    #[test]
    fn matrix_csv_has_empty_diagonal() {
        let recs = vec![
            PredictionRecord {
                example_id: 0,
                gold: 0,
                predicted: vec![0],
            },
            PredictionRecord {
                example_id: 1,
                gold: 1,
                predicted: vec![0],
            },
        ];
        let m = agreement_matrix(&recs, &["MFC"]).unwrap();
        let mut buf = Vec::new();
        write_agreement_csv(&m, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), ",gold,MFC\ngold,,50.00\nMFC,50.00,\n");
        let table = render_agreement_table(&m);
        assert!(table.contains("50.00"));
    }

    #[test]
    fn accuracy_text_has_plus_minus() {
        let t = render_accuracy_table(&report());
        assert!(t.contains("66.32±1.34"));
    }
}
