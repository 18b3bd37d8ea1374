mod support;

use proptest::prelude::*;
use rand::Rng;
use wsd::classifiers::{
    nb_log_score, train, train_lazyboosting, train_naive_bayes, train_snow, EbModel, LbParams, LearnerParams, Method,
    Model, SnowParams, TrainSet,
};
use wsd::features::FeatureVector;
use wsd::rng;

#[test]
fn naive_bayes_matches_enumeration() {
    let mut r = rng::stream(11);
    for _ in 0..500 {
        let ts = support::random_train_set(&mut r, 30, 4, 12);
        let model = train_naive_bayes(&ts).unwrap();
        let v = support::random_vector(&mut r, ts.n_features, 0.3);
        let expected = support::nb_posterior(&ts, &v);
        let scores: Vec<f64> = (0..ts.n_senses).map(|s| nb_log_score(&model, &v, s)).collect();
        let top = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let unnorm: Vec<f64> = scores.iter().map(|s| (s - top).exp()).collect();
        let total: f64 = unnorm.iter().sum();
        for (got, want) in unnorm.iter().map(|u| u / total).zip(&expected) {
            assert!((got - want).abs() <= 1e-9, "{got} vs {want}");
        }
    }
}

#[test]
fn knn_matches_full_sort() {
    let mut r = rng::stream(12);
    for _ in 0..1000 {
        let ts = support::random_train_set(&mut r, 25, 4, 10);
        let k = r.random_range(1..=5);
        let model = EbModel::train(&ts, k).unwrap();
        let v = support::random_vector(&mut r, ts.n_features, 0.4);
        assert_eq!(model.classify(&v), support::knn_classify(&ts, &v, k));
    }
}

#[test]
fn full_sampling_equals_exhaustive_adaboost() {
    let mut r = rng::stream(13);
    for _ in 0..40 {
        let ts = support::random_train_set(&mut r, 30, 4, 12);
        let rounds = 15;
        let params = LbParams {
            rounds,
            sample_fraction: 1.0,
            epsilon: None,
        };
        let model = train_lazyboosting(&ts, &params, r.random()).unwrap();
        let mut oracle = support::DenseBooster::new(&ts);
        assert_eq!(model.rounds.len(), rounds);
        for rule in &model.rounds {
            let best = oracle.best();
            let chosen = if best.feature == rule.feature as usize {
                best
            } else {
                // Only an exact tie in the normalizer may pick another feature.
                let alt = oracle.stump(rule.feature as usize);
                assert!(
                    (alt.z - best.z).abs() <= 1e-12,
                    "feature {} vs {}",
                    rule.feature,
                    best.feature
                );
                alt
            };
            for l in 0..ts.n_senses {
                assert!((rule.c_present[l] - chosen.c_present[l]).abs() <= 1e-9);
                assert!((rule.c_absent[l] - chosen.c_absent[l]).abs() <= 1e-9);
            }
            assert!((rule.z - chosen.z).abs() <= 1e-9);
            oracle.apply(&chosen);
        }
        let dist = model.final_distribution.as_ref().unwrap();
        for (i, row) in oracle.dist.iter().enumerate() {
            for (l, d) in row.iter().enumerate() {
                assert!((dist[i * ts.n_senses + l] - d).abs() <= 1e-9);
            }
        }
    }
}

#[test]
fn boosting_loss_stays_under_z_product() {
    let mut r = rng::stream(14);
    for _ in 0..30 {
        let ts = support::random_train_set(&mut r, 40, 5, 15);
        let params = LbParams {
            rounds: 25,
            sample_fraction: r.random_range(0.2..=1.0),
            epsilon: None,
        };
        let model = train_lazyboosting(&ts, &params, r.random()).unwrap();
        for t in 1..=model.rounds.len() {
            let prefix = model.prefix(t);
            assert!(prefix.hamming_loss(&ts) <= prefix.z_product() + 1e-12);
        }
    }
}

#[test]
fn winnow_separates_disjoint_keyed_data() {
    let mut r = rng::stream(15);
    for _ in 0..20 {
        let k = r.random_range(2..=6);
        let ts = support::disjoint_keyed(&mut r, 200, k, 8);
        let model = train_snow(&ts, &SnowParams::default()).unwrap();
        for (v, &l) in ts.vectors.iter().zip(&ts.labels) {
            assert_eq!(model.classify(v), l);
        }
    }
}

fn permute(ts: &TrainSet, perm: &[u32]) -> TrainSet {
    let vectors = ts
        .vectors
        .iter()
        .map(|v| FeatureVector::new(v.active().iter().map(|&f| perm[f as usize]).collect()))
        .collect();
    TrainSet::new(vectors, ts.labels.clone(), ts.n_senses, ts.n_features).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Renaming features consistently in training and test data leaves
    /// every prediction unchanged, up to ties that are broken by id.
    #[test]
    fn predictions_ignore_feature_ids(seed in any::<u64>()) {
        let mut r = rng::stream(seed);
        let ts = support::random_train_set(&mut r, 20, 4, 10);
        let mut perm: Vec<u32> = (0..ts.n_features as u32).collect();
        for i in (1..perm.len()).rev() {
            perm.swap(i, r.random_range(0..=i));
        }
        let renamed = permute(&ts, &perm);
        let params = LearnerParams {
            k_neighbors: 3,
            lb: LbParams { rounds: 8, sample_fraction: 1.0, epsilon: None },
            ..LearnerParams::default()
        };
        let queries: Vec<FeatureVector> =
            (0..10).map(|_| support::random_vector(&mut r, ts.n_features, 0.4)).collect();
        for method in Method::ALL {
            if method == Method::LazyBoosting {
                // Exact ties between stumps are broken by feature id.
                continue;
            }
            let a = train(method, &ts, &params, 1).unwrap();
            let b = train(method, &renamed, &params, 1).unwrap();
            for q in &queries {
                let moved = FeatureVector::new(q.active().iter().map(|&f| perm[f as usize]).collect());
                let (x, y) = (a.classify(q), b.classify(&moved));
                if x != y {
                    if let (Model::DecisionList(da), Model::DecisionList(db)) = (&a, &b) {
                        // Rules of equal weight are ordered by feature id.
                        let wa = da.matching_rule(q).map(|r| r.weight);
                        let wb = db.matching_rule(&moved).map(|r| r.weight);
                        prop_assert_eq!(wa, wb, "dl");
                        continue;
                    }
                    // Summation order follows feature ids, so only scores
                    // tied up to rounding may resolve differently.
                    let score = |s: usize| match &a {
                        Model::NaiveBayes(m) => m.log_score(q, s),
                        Model::Snow(m) => m.activation(q, s),
                        _ => f64::NAN,
                    };
                    let (sx, sy) = (score(x), score(y));
                    prop_assert!((sx - sy).abs() <= 1e-9 * sx.abs().max(1.0), "{} {} vs {}", method, x, y);
                }
            }
        }
    }

    #[test]
    fn training_is_deterministic(seed in any::<u64>()) {
        let mut r = rng::stream(seed);
        let ts = support::random_train_set(&mut r, 20, 4, 10);
        let params = LearnerParams {
            lb: LbParams { rounds: 10, ..LbParams::default() },
            ..LearnerParams::default()
        };
        for method in Method::ALL {
            prop_assert_eq!(train(method, &ts, &params, seed).unwrap(), train(method, &ts, &params, seed).unwrap());
        }
    }

    #[test]
    fn suspicion_is_a_distribution(seed in any::<u64>()) {
        let mut r = rng::stream(seed);
        let ts = support::random_train_set(&mut r, 30, 4, 10);
        let params = LbParams { rounds: 12, sample_fraction: 0.5, epsilon: None };
        let model = train_lazyboosting(&ts, &params, seed).unwrap();
        let w = wsd::noise::suspicion_weights(&model, &ts).unwrap();
        prop_assert!(w.iter().all(|&x| x >= 0.0));
        prop_assert!((w.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
    }
}
