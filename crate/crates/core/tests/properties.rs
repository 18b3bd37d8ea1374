use std::collections::HashSet;

use proptest::prelude::*;
use rand::Rng;
use wsd::corpus::{
    generate_synthetic, parse_corpus_str, split, tuning_split, Combination, Part, Preset, SplitSpec, SynthConfig,
    WordProblem,
};
use wsd::eval::{accuracy, agreement_matrix, kappa, mcnemar, paired_ttest, PredictionRecord};
use wsd::features::{extract_canonical, FeatureIndex, Stopwords};
use wsd::rng;

fn small_config(word: usize, a: usize, b: usize) -> SynthConfig {
    SynthConfig {
        examples_a: a,
        examples_b: b,
        ..Preset::ShiftedDomains.config(word)
    }
}

fn problem(seed: u64, a: usize, b: usize) -> WordProblem {
    generate_synthetic(&small_config((seed % 21) as usize, a, b), seed)
        .unwrap()
        .problem
}

fn labels(max: usize) -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
    (1usize..60).prop_flat_map(move |n| {
        (
            proptest::collection::vec(0..max, n),
            proptest::collection::vec(0..max, n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn corpus_round_trips(seed in any::<u64>()) {
        let p = problem(seed, 15, 10);
        let back = parse_corpus_str(&p.to_corpus_string()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn folds_partition_the_pool_and_stay_stratified(seed in any::<u64>(), folds in 2usize..12) {
        let p = problem(seed, 40, 35);
        for combo in [Combination::AbAb, Combination::AA, Combination::BB] {
            let spec = SplitSpec { combination: combo, folds, seed };
            let s = split(&p, &spec).unwrap();
            let pool: Vec<usize> = p
                .examples
                .iter()
                .filter(|e| combo.train_parts().contains(&e.part))
                .map(|e| e.id)
                .collect();
            let mut seen: Vec<usize> = s.folds.iter().flat_map(|f| f.test.iter().map(|e| e.id)).collect();
            seen.sort_unstable();
            prop_assert_eq!(&seen, &pool);
            for f in &s.folds {
                let test: HashSet<usize> = f.test.iter().map(|e| e.id).collect();
                prop_assert!(f.train.iter().all(|e| !test.contains(&e.id)));
                prop_assert_eq!(f.train.len() + f.test.len(), pool.len());
            }
            for sense in &p.sense_inventory {
                let total = p.examples.iter().filter(|e| pool.contains(&e.id) && &e.sense == sense).count();
                if total < folds {
                    continue;
                }
                let counts: Vec<usize> = s
                    .folds
                    .iter()
                    .map(|f| f.test.iter().filter(|e| &e.sense == sense).count())
                    .collect();
                let (lo, hi) = (counts.iter().min().unwrap(), counts.iter().max().unwrap());
                prop_assert!(hi - lo <= 1, "{:?}", counts);
            }
        }
    }

    #[test]
    fn tuning_halves_are_fixed_and_nested(seed in any::<u64>()) {
        let p = problem(seed, 20, 47);
        let splits: Vec<_> = [0.1, 0.2, 0.3, 0.4, 0.5]
            .iter()
            .map(|&f| tuning_split(&p, Part::B, f, seed).unwrap())
            .collect();
        for pair in splits.windows(2) {
            let ids = |v: &[&wsd::corpus::Example]| v.iter().map(|e| e.id).collect::<Vec<_>>();
            prop_assert_eq!(ids(&pair[0].test), ids(&pair[1].test));
            prop_assert!(pair[1].tuning.len() >= pair[0].tuning.len());
            prop_assert_eq!(ids(&pair[0].tuning), ids(&pair[1].tuning[..pair[0].tuning.len()]));
        }
        let test: HashSet<usize> = splits[4].test.iter().map(|e| e.id).collect();
        prop_assert!(splits[4].tuning.iter().all(|e| !test.contains(&e.id)));
    }

    #[test]
    fn generation_is_pure(seed in any::<u64>()) {
        let c = small_config(3, 12, 12);
        prop_assert_eq!(generate_synthetic(&c, seed).unwrap().problem, generate_synthetic(&c, seed).unwrap().problem);
    }

    #[test]
    fn kappa_is_symmetric_and_one_on_itself((a, b) in labels(4)) {
        prop_assert!((kappa(&a, &b).unwrap() - kappa(&b, &a).unwrap()).abs() <= 1e-12);
        prop_assert_eq!(kappa(&a, &a).unwrap(), 1.0);
    }

    #[test]
    fn mcnemar_is_symmetric((a, b) in labels(3), gold_seed in any::<u64>()) {
        let mut r = rng::stream(gold_seed);
        let gold: Vec<usize> = (0..a.len()).map(|_| r.random_range(0..3)).collect();
        let x = mcnemar(&a, &b, &gold).unwrap();
        let y = mcnemar(&b, &a, &gold).unwrap();
        prop_assert_eq!(x.statistic, y.statistic);
        prop_assert_eq!((x.only_a, x.only_b), (y.only_b, y.only_a));
    }

    #[test]
    fn ttest_is_antisymmetric(
        a in proptest::collection::vec(0.0f64..1.0, 10),
        b in proptest::collection::vec(0.0f64..1.0, 10),
    ) {
        let x = paired_ttest(&a, &b).unwrap();
        let y = paired_ttest(&b, &a).unwrap();
        prop_assert!((x.t + y.t).abs() <= 1e-9 * x.t.abs().max(1.0));
        prop_assert_eq!(x.significant, y.significant);
    }

    #[test]
    fn agreement_with_gold_is_accuracy((gold, pred) in labels(4), extra_seed in any::<u64>()) {
        let mut r = rng::stream(extra_seed);
        let other: Vec<usize> = (0..gold.len()).map(|_| r.random_range(0..4)).collect();
        let records: Vec<PredictionRecord> = (0..gold.len())
            .map(|i| PredictionRecord { example_id: i, gold: gold[i], predicted: vec![pred[i], other[i]] })
            .collect();
        let m = agreement_matrix(&records, &["x", "y"]).unwrap();
        prop_assert_eq!(m.agreement[0][1], accuracy(&pred, &gold).unwrap());
        prop_assert_eq!(m.agreement[0][2], accuracy(&other, &gold).unwrap());
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    prop_assert!((0.0..=1.0).contains(&m.agreement[i][j]));
                    prop_assert_eq!(m.agreement[i][j], m.agreement[j][i]);
                }
            }
        }
    }

    /// Every id produced for a test example names a feature that occurs in
    /// that fold's training data.
    #[test]
    fn test_vectors_only_use_training_features(seed in any::<u64>()) {
        let p = problem(seed, 30, 30);
        let sw = Stopwords::default();
        let spec = SplitSpec { combination: Combination::AbAb, folds: 4, seed };
        for fold in split(&p, &spec).unwrap().folds {
            let train: Vec<Vec<String>> = fold.train.iter().map(|e| extract_canonical(e, &sw)).collect();
            let seen: HashSet<&String> = train.iter().flatten().collect();
            let index = FeatureIndex::build(&train, 1);
            for e in &fold.test {
                for &id in index.vectorize(&extract_canonical(e, &sw)).active() {
                    let name = index.name(id).unwrap().to_string();
                    prop_assert!(seen.contains(&name));
                }
            }
        }
    }
}

#[test]
fn kappa_of_random_relabelling_tends_to_zero() {
    let mut r = rng::stream(99);
    let n = 200_000;
    let a: Vec<usize> = (0..n).map(|_| r.random_range(0..5)).collect();
    let b: Vec<usize> = (0..n).map(|_| r.random_range(0..5)).collect();
    assert!(kappa(&a, &b).unwrap().abs() < 0.01);
}
