use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;

use super::{Example, Part, WordProblem};
use crate::error::{Error, Result};
use crate::rng;

const STREAM_TUNING: u64 = 0x7475_6e65;
const STREAM_SUPPLY: u64 = 0x7375_7070;

/// Training/test combination. The training pool is on the left of the dash.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Combination {
    AbAb,
    AbA,
    AbB,
    AA,
    BB,
    AB,
    BA,
}

impl Combination {
    pub const ALL: [Combination; 7] = [
        Combination::AbAb,
        Combination::AbA,
        Combination::AbB,
        Combination::AA,
        Combination::BB,
        Combination::AB,
        Combination::BA,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Combination::AbAb => "A+B-A+B",
            Combination::AbA => "A+B-A",
            Combination::AbB => "A+B-B",
            Combination::AA => "A-A",
            Combination::BB => "B-B",
            Combination::AB => "A-B",
            Combination::BA => "B-A",
        }
    }

    /// Same-pool combinations are cross-validated; A-B and B-A use whole parts.
    pub fn is_cross_validated(self) -> bool {
        !matches!(self, Combination::AB | Combination::BA)
    }

    /// Parts drawn on for training (and, when cross-validated, for testing).
    pub fn train_parts(self) -> &'static [Part] {
        match self {
            Combination::AbAb | Combination::AbA | Combination::AbB => &[Part::A, Part::B],
            Combination::AA | Combination::AB => &[Part::A],
            Combination::BB | Combination::BA => &[Part::B],
        }
    }

    pub fn test_parts(self) -> &'static [Part] {
        match self {
            Combination::AbAb => &[Part::A, Part::B],
            Combination::AbA | Combination::AA | Combination::BA => &[Part::A],
            Combination::AbB | Combination::BB | Combination::AB => &[Part::B],
        }
    }

    fn stream(self) -> u64 {
        // A+B-* combinations share one set of folds.
        match self {
            Combination::AbAb | Combination::AbA | Combination::AbB => 1,
            Combination::AA => 2,
            Combination::BB => 3,
            Combination::AB => 4,
            Combination::BA => 5,
        }
    }
}

impl fmt::Display for Combination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Combination {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.replace(['–', '—'], "-").to_ascii_uppercase();
        Combination::ALL
            .into_iter()
            .find(|c| c.label() == norm)
            .ok_or_else(|| Error::Param(format!("unknown combination {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitSpec {
    pub combination: Combination,
    pub folds: usize,
    pub seed: u64,
}

impl SplitSpec {
    pub fn new(combination: Combination, seed: u64) -> Self {
        Self {
            combination,
            folds: 10,
            seed,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Fold<'a> {
    pub train: Vec<&'a Example>,
    pub test: Vec<&'a Example>,
}

#[derive(Debug, Clone)]
pub struct Splits<'a> {
    pub folds: Vec<Fold<'a>>,
    /// Senses with fewer examples than folds; stratification is best-effort for them.
    pub warnings: Vec<String>,
}

/// Builds the train/test pairs of one combination.
///
/// Same-pool combinations use stratified cross-validation: the examples of
/// each sense are shuffled with a generator seeded by `(seed, sense index)`
/// and dealt round-robin into the folds, the dealing position carrying over
/// from one sense to the next.
pub fn split<'a>(problem: &'a WordProblem, spec: &SplitSpec) -> Result<Splits<'a>> {
    let combo = spec.combination;
    let train_pool: Vec<&Example> = problem
        .examples
        .iter()
        .filter(|e| combo.train_parts().contains(&e.part))
        .collect();
    if train_pool.is_empty() {
        return Err(Error::Validation(format!("{}: training pool is empty", combo.label())));
    }
    if !problem.examples.iter().any(|e| combo.test_parts().contains(&e.part)) {
        return Err(Error::Validation(format!("{}: test pool is empty", combo.label())));
    }

    if !combo.is_cross_validated() {
        let test = problem
            .examples
            .iter()
            .filter(|e| combo.test_parts().contains(&e.part))
            .collect();
        return Ok(Splits {
            folds: vec![Fold {
                train: train_pool,
                test,
            }],
            warnings: Vec::new(),
        });
    }

    if spec.folds < 2 {
        return Err(Error::Param(format!("folds must be at least 2, got {}", spec.folds)));
    }
    let (assignment, warnings) =
        stratified_folds(problem, &train_pool, spec.folds, rng::mix(spec.seed, combo.stream()));
    let folds = (0..spec.folds)
        .map(|f| {
            let mut fold = Fold {
                train: Vec::new(),
                test: Vec::new(),
            };
            for (ex, &a) in train_pool.iter().zip(&assignment) {
                if a == f {
                    if combo.test_parts().contains(&ex.part) {
                        fold.test.push(*ex);
                    }
                } else {
                    fold.train.push(*ex);
                }
            }
            fold
        })
        .collect();
    Ok(Splits { folds, warnings })
}

/// Fold index for each pool member.
fn stratified_folds(problem: &WordProblem, pool: &[&Example], folds: usize, seed: u64) -> (Vec<usize>, Vec<String>) {
    let mut by_sense: Vec<Vec<usize>> = vec![Vec::new(); problem.n_senses()];
    for (i, ex) in pool.iter().enumerate() {
        by_sense[problem.label_of(ex)].push(i);
    }
    let mut assignment = vec![0; pool.len()];
    let mut warnings = Vec::new();
    let mut next = 0;
    for (sense, members) in by_sense.iter_mut().enumerate() {
        if members.is_empty() {
            continue;
        }
        if members.len() < folds {
            warnings.push(format!(
                "sense {:?} has {} examples for {} folds",
                problem.sense_inventory[sense],
                members.len(),
                folds
            ));
        }
        members.shuffle(&mut rng::splitmix(rng::mix(seed, sense as u64)));
        for &i in members.iter() {
            assignment[i] = next % folds;
            next += 1;
        }
    }
    (assignment, warnings)
}

#[derive(Debug, Clone)]
pub struct TuningSplit<'a> {
    /// Prefix of the supply half, in seeded order.
    pub tuning: Vec<&'a Example>,
    /// Fixed held-out half, sorted by example id.
    pub test: Vec<&'a Example>,
}

/// Splits `target` into a fixed test half and a supply half, returning the
/// first `⌈fraction·|part|⌉` supply examples as the tuning sample.
///
/// The test half depends only on `seed`, and tuning samples for growing
/// fractions are nested.
pub fn tuning_split(problem: &WordProblem, target: Part, fraction: f64, seed: u64) -> Result<TuningSplit<'_>> {
    if !(fraction > 0.0 && fraction <= 0.5 + 1e-12) {
        return Err(Error::Param(format!(
            "tuning fraction must lie in (0, 0.5], got {fraction}"
        )));
    }
    let part: Vec<&Example> = problem.part(target).collect();
    if part.is_empty() {
        return Err(Error::Validation(format!("part {target} is empty")));
    }

    let seed = rng::mix(seed, STREAM_TUNING);
    let (halves, _) = stratified_folds(problem, &part, 2, seed);
    let mut test = Vec::new();
    let mut supply = Vec::new();
    for (ex, half) in part.iter().zip(halves) {
        if half == 0 {
            test.push(*ex);
        } else {
            supply.push(*ex);
        }
    }
    test.sort_by_key(|e| e.id);
    supply.sort_by_key(|e| e.id);
    supply.shuffle(&mut rng::splitmix(rng::mix(seed, STREAM_SUPPLY)));

    let wanted = (fraction * part.len() as f64 - 1e-9).ceil().max(0.0) as usize;
    supply.truncate(wanted.min(supply.len()));
    Ok(TuningSplit { tuning: supply, test })
}
