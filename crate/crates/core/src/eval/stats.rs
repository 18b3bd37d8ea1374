//! Accuracy, Cohen's kappa, McNemar's test and the paired t-test.

use std::collections::HashMap;
use std::hash::Hash;

use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

/// χ² critical value with one degree of freedom at 95%.
pub const CHI2_1DF_95: f64 = 3.841459;

fn check_lengths(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::Validation(format!("length mismatch: {a} vs {b}")));
    }
    if a == 0 {
        return Err(Error::Validation("no predictions to score".into()));
    }
    Ok(())
}

/// Fraction of positions where `predictions` equals `gold`.
pub fn accuracy<T: PartialEq>(predictions: &[T], gold: &[T]) -> Result<f64> {
    check_lengths(predictions.len(), gold.len())?;
    let hits = predictions.iter().zip(gold).filter(|(p, g)| p == g).count();
    Ok(hits as f64 / gold.len() as f64)
}

/// Cohen's kappa, `(P_o - P_e) / (1 - P_e)`.
///
/// When both annotators use one and the same label throughout, `P_e = 1` and
/// kappa is defined as 1.
pub fn kappa<T: Eq + Hash>(a: &[T], b: &[T]) -> Result<f64> {
    check_lengths(a.len(), b.len())?;
    let n = a.len() as f64;
    let mut margins: HashMap<&T, (f64, f64)> = HashMap::new();
    let mut agree = 0usize;
    for (x, y) in a.iter().zip(b) {
        margins.entry(x).or_default().0 += 1.0;
        margins.entry(y).or_default().1 += 1.0;
        if x == y {
            agree += 1;
        }
    }
    let p_o = agree as f64 / n;
    let p_e: f64 = margins.values().map(|(ca, cb)| (ca / n) * (cb / n)).sum();
    if (1.0 - p_e).abs() < 1e-15 {
        return Ok(if p_o == 1.0 { 1.0 } else { 0.0 });
    }
    Ok((p_o - p_e) / (1.0 - p_e))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McNemar {
    /// `a` right, `b` wrong.
    pub only_a: usize,
    /// `a` wrong, `b` right.
    pub only_b: usize,
    pub statistic: f64,
    pub significant: bool,
}

/// Continuity-corrected McNemar test on two prediction columns.
pub fn mcnemar<T: PartialEq>(pred_a: &[T], pred_b: &[T], gold: &[T]) -> Result<McNemar> {
    check_lengths(pred_a.len(), gold.len())?;
    check_lengths(pred_b.len(), gold.len())?;
    let mut only_a = 0;
    let mut only_b = 0;
    for ((a, b), g) in pred_a.iter().zip(pred_b).zip(gold) {
        match (a == g, b == g) {
            (true, false) => only_a += 1,
            (false, true) => only_b += 1,
            _ => {}
        }
    }
    Ok(mcnemar_from_counts(only_a, only_b))
}

pub fn mcnemar_from_counts(only_a: usize, only_b: usize) -> McNemar {
    let n = only_a + only_b;
    let statistic = if n == 0 {
        0.0
    } else {
        let diff = (only_a as f64 - only_b as f64).abs() - 1.0;
        diff * diff / n as f64
    };
    McNemar {
        only_a,
        only_b,
        statistic,
        significant: statistic > CHI2_1DF_95,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairedTTest {
    /// `+inf`/`-inf` when every difference is the same non-zero value.
    pub t: f64,
    pub df: usize,
    pub critical: f64,
    pub significant: bool,
}

/// Two-tailed critical value of Student's t at 95%.
pub fn t_critical_95(df: usize) -> f64 {
    StudentsT::new(0.0, 1.0, df as f64).expect("df > 0").inverse_cdf(0.975)
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (`n - 1` divisor).
pub fn sample_sd(xs: &[f64]) -> f64 {
    let mu = mean(xs);
    (xs.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

/// Paired t-test over per-fold accuracies.
pub fn paired_ttest(acc_a: &[f64], acc_b: &[f64]) -> Result<PairedTTest> {
    if acc_a.len() != acc_b.len() {
        return Err(Error::Validation(format!(
            "length mismatch: {} vs {}",
            acc_a.len(),
            acc_b.len()
        )));
    }
    let n = acc_a.len();
    if n < 2 {
        return Err(Error::Validation("paired t-test needs at least 2 folds".into()));
    }
    let d: Vec<f64> = acc_a.iter().zip(acc_b).map(|(a, b)| a - b).collect();
    let mu = mean(&d);
    let sd = sample_sd(&d);
    let df = n - 1;
    let critical = t_critical_95(df);
    let degenerate = sd <= 1e-15 * mu.abs().max(1.0);
    let t = if degenerate {
        if mu.abs() <= 1e-15 {
            0.0
        } else {
            f64::INFINITY.copysign(mu)
        }
    } else {
        mu * (n as f64).sqrt() / sd
    };
    Ok(PairedTTest {
        t,
        df,
        critical,
        significant: t.abs() > critical,
    })
}
