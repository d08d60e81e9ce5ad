use falsify_core::nets::TrainConfig;
use falsify_core::ogan::OganConfig;
use falsify_core::search::{
    falsify, latin_hypercube, mab_pick, run_seeded, Algorithm, BudgetConfig, RunRecord,
    SearchConfig, SearchError, Source, Termination,
};
use falsify_core::suts::{FnSut, Mo3d, SutError, SutSpec};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Small networks so that the tests stay fast.
fn small(budget: usize) -> SearchConfig {
    let training = TrainConfig {
        epochs: 3,
        ..TrainConfig::default()
    };
    SearchConfig {
        budget: BudgetConfig {
            budget,
            ..BudgetConfig::default()
        },
        ogan: OganConfig {
            latent_dim: 4,
            discriminator_hidden: vec![8],
            generator_hidden: vec![8],
            discriminator_training: training.clone(),
            generator_training: training,
            generator_batch: 8,
            scale_quantile: 1.0,
        },
    }
}

fn constant(dim: usize, values: Vec<f64>) -> FnSut<impl Fn(&[f64]) -> Result<Vec<f64>, SutError>> {
    let spec = SutSpec::new("constant", vec![(0.0, 1.0); dim], values.len()).unwrap();
    FnSut::new(spec, move |_: &[f64]| Ok(values.clone()))
}

/// Checks the structural invariants every run must satisfy.
fn check(record: &RunRecord, cfg: &SearchConfig) {
    let b = &cfg.budget;
    assert!(record.rows.len() <= b.budget);
    let falsifying = record.rows.iter().filter(|r| r.min_robustness() <= 0.0).count();
    assert_eq!(record.falsified(), falsifying > 0);
    assert_eq!(record.termination == Termination::Falsified, falsifying > 0);
    if record.falsified() {
        assert_eq!(falsifying, 1);
        assert!(record.rows.last().unwrap().min_robustness() <= 0.0);
    } else {
        assert_eq!(record.rows.len(), b.budget);
    }
    for (i, row) in record.rows.iter().enumerate() {
        if i < b.lhs_count() {
            assert_eq!(row.source, Source::Lhs);
            assert!(row.escalations.is_none());
        } else {
            assert!(matches!(row.source, Source::Gan(_)));
            let k = row.escalations.unwrap();
            assert!(k >= 1 && k <= b.max_escalations());
            let target = row.target.unwrap();
            assert!((target - k as f64 * b.delta).abs() < 1e-12);
        }
    }
    let wins: u64 = record.winners.iter().sum();
    assert_eq!(wins as usize, record.rows.len());
}

#[test]
fn constant_falsifier_stops_at_first_execution() {
    let cfg = small(20);
    for alg in Algorithm::ALL {
        let r = run_seeded(alg, &constant(2, vec![-1.0]), &cfg, 0).unwrap();
        check(&r, &cfg);
        assert_eq!(r.rows.len(), 1);
        assert_eq!(r.executions_to_falsification(), Some(1));
        assert_eq!(r.termination, Termination::Falsified);
    }
}

#[test]
fn constant_satisfier_uses_the_whole_budget() {
    let cfg = small(12);
    for alg in Algorithm::ALL {
        let r = run_seeded(alg, &constant(2, vec![1.0]), &cfg, 1).unwrap();
        check(&r, &cfg);
        assert_eq!(r.rows.len(), 12);
        assert_eq!(r.termination, Termination::BudgetExhausted);
        assert_eq!(r.observed_minimum(), 1.0);
    }
}

#[test]
fn third_component_falsifies() {
    let cfg = small(10);
    for alg in Algorithm::ALL {
        let r = run_seeded(alg, &constant(3, vec![1.0, 1.0, -1.0]), &cfg, 2).unwrap();
        assert_eq!(r.rows.len(), 1);
        assert_eq!(r.winners, vec![0, 0, 1]);
    }
}

#[test]
fn bandit_counts_the_falsifying_requirement() {
    let cfg = small(10);
    let r = run_seeded(Algorithm::Mab, &constant(2, vec![1.0, -1.0]), &cfg, 3).unwrap();
    assert!(r.falsified());
    assert_eq!(r.winners, vec![0, 1]);
}

#[test]
fn bandit_winners_follow_outcomes_not_choices() {
    // requirement 1 always wins no matter which surrogate proposed the test
    let cfg = small(16);
    let r = run_seeded(Algorithm::Mab, &constant(2, vec![3.0, 2.0]), &cfg, 4).unwrap();
    check(&r, &cfg);
    assert_eq!(r.winners, vec![0, 16]);
    assert_eq!(r.warmup_executions, 8);
}

fn without_algorithm(mut r: RunRecord) -> RunRecord {
    r.algorithm = Algorithm::Single;
    r.warmup_executions = 0;
    r
}

#[test]
fn one_requirement_makes_all_algorithms_agree() {
    let cfg = small(16);
    let sut = {
        let spec = SutSpec::new("bowl", vec![(-1.0, 1.0); 2], 1).unwrap();
        FnSut::new(spec, |x: &[f64]| Ok(vec![x[0] * x[0] + x[1] * x[1] - 0.001]))
    };
    for seed in 0..3 {
        let single = run_seeded(Algorithm::Single, &sut, &cfg, seed).unwrap();
        let multi = run_seeded(Algorithm::Multi, &sut, &cfg, seed).unwrap();
        let mab = run_seeded(Algorithm::Mab, &sut, &cfg, seed).unwrap();
        assert_eq!(multi.algorithm, Algorithm::Multi);
        let single = without_algorithm(single);
        assert_eq!(without_algorithm(multi), single);
        assert_eq!(without_algorithm(mab), single);
    }
}

#[test]
fn same_seed_same_json() {
    let cfg = small(20);
    for alg in Algorithm::ALL {
        let a = run_seeded(alg, &Mo3d::new(), &cfg, 42).unwrap();
        let b = run_seeded(alg, &Mo3d::new(), &cfg, 42).unwrap();
        check(&a, &cfg);
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.seed, Some(42));
        let c = run_seeded(alg, &Mo3d::new(), &cfg, 43).unwrap();
        assert_ne!(a.to_json(), c.to_json());
    }
}

#[test]
fn failing_system_aborts_with_partial_record() {
    let spec = SutSpec::new("flaky", vec![(0.0, 1.0)], 1).unwrap();
    let calls = std::sync::atomic::AtomicUsize::new(0);
    let sut = FnSut::new(spec, move |_: &[f64]| {
        if calls.fetch_add(1, std::sync::atomic::Ordering::SeqCst) == 6 {
            Err(SutError::Execution("boom".into()))
        } else {
            Ok(vec![1.0])
        }
    });
    match run_seeded(Algorithm::Multi, &sut, &small(20), 5) {
        Err(SearchError::Sut { partial, .. }) => {
            assert_eq!(partial.rows.len(), 6);
            assert_eq!(partial.termination, Termination::Aborted);
            assert_eq!(partial.seed, Some(5));
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn wrong_output_length_is_an_error() {
    let spec = SutSpec::new("short", vec![(0.0, 1.0)], 2).unwrap();
    let sut = FnSut::new(spec, |_: &[f64]| Ok(vec![1.0]));
    assert!(matches!(
        run_seeded(Algorithm::Single, &sut, &small(8), 0),
        Err(SearchError::Sut { .. })
    ));
}

#[test]
fn invalid_budgets_are_rejected() {
    let sut = constant(1, vec![1.0]);
    let mut cfg = small(2);
    cfg.budget.lhs_fraction = 0.25;
    assert!(matches!(
        run_seeded(Algorithm::Single, &sut, &cfg, 0),
        Err(SearchError::Config(_))
    ));
    let mut cfg = small(20);
    cfg.budget.warmup_fraction = 0.1;
    assert!(matches!(
        run_seeded(Algorithm::Mab, &sut, &cfg, 0),
        Err(SearchError::Config(_))
    ));
    let mut cfg = small(20);
    cfg.budget.delta = 0.0;
    assert!(run_seeded(Algorithm::Single, &sut, &cfg, 0).is_err());
}

#[test]
fn escalation_bound_is_respected_on_mo3d() {
    let mut cfg = small(30);
    cfg.budget.delta = 0.3;
    for alg in Algorithm::ALL {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let r = falsify(alg, &Mo3d::new(), &cfg, &mut rng).unwrap();
        check(&r, &cfg);
        assert!(r.max_escalations() <= 5);
    }
}

#[test]
fn bandit_frequencies() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 10_000;
    let hits = (0..n).filter(|_| mab_pick(&[0, 0, 10], &mut rng) == 2).count();
    let p = hits as f64 / n as f64;
    assert!((p - 11.0 / 13.0).abs() < 0.02, "{p}");
    assert_eq!(mab_pick(&[5], &mut rng), 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lhs_has_one_sample_per_stratum(count in 1usize..=32, dim in 1usize..=12, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = latin_hypercube(count, dim, &mut rng);
        prop_assert_eq!(pts.len(), count);
        for d in 0..dim {
            let mut seen = vec![false; count];
            for p in &pts {
                let v = p.coords()[d];
                prop_assert!((-1.0..=1.0).contains(&v));
                let s = (((v + 1.0) / 2.0 * count as f64).floor() as usize).min(count - 1);
                prop_assert!(!seen[s]);
                seen[s] = true;
            }
        }
    }

    #[test]
    fn runs_respect_budget_and_count_every_winner(
        budget in 4usize..14,
        seed in 0u64..1000,
        alg in prop::sample::select(Algorithm::ALL.to_vec()),
    ) {
        let cfg = small(budget);
        let sut = {
            let spec = SutSpec::new("affine", vec![(-1.0, 1.0); 2], 2).unwrap();
            FnSut::new(spec, |x: &[f64]| Ok(vec![x[0] + 0.5, x[1] * 3.0 + 2.5]))
        };
        let r = run_seeded(alg, &sut, &cfg, seed).unwrap();
        check(&r, &cfg);
    }
}
