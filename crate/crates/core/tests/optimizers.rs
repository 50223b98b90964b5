use proptest::prelude::*;

use swarm_rl::baselines::{de_optimize, pso_optimize, DeConfig, PsoConfig};
use swarm_rl::bench::get_benchmark;
use swarm_rl::deploy::{optimize, total_evaluations, DeployConfig, OptimizationResult};
use swarm_rl::harness::mean_std;
use swarm_rl::ppo::{PolicyArtifact, TrainConfig};
use swarm_rl::swarm::BoundsMap;

fn policy() -> PolicyArtifact {
    PolicyArtifact::untrained(&TrainConfig { seed: 4, ..Default::default() })
}

fn check_trace(res: &OptimizationResult, bounds: &BoundsMap) {
    for w in res.history.windows(2) {
        assert!(w[1].global_best_f >= w[0].global_best_f);
        assert!(w[1].evaluations > w[0].evaluations);
    }
    assert_eq!(res.best_f, res.history.last().unwrap().global_best_f);
    for (j, v) in res.best_x.iter().enumerate() {
        assert!(*v >= bounds.lower()[j] && *v <= bounds.upper()[j]);
    }
    for h in &res.history {
        for p in &h.positions {
            for (j, v) in p.iter().enumerate() {
                assert!(*v >= bounds.lower()[j] && *v <= bounds.upper()[j]);
            }
        }
    }
}

#[test]
fn policy_runs_for_any_swarm_shape() {
    let p = policy();
    for dims in 1..=5 {
        let spec = get_benchmark("function_one", dims).unwrap();
        let bounds = BoundsMap::new(spec.lower.clone(), spec.upper.clone()).unwrap();
        for n in [2, 3, 8, 20] {
            let cfg = DeployConfig::new(n, 15, dims as u64 * 100 + n as u64, bounds.clone());
            let res = optimize(&spec.objective(), &cfg, &p).unwrap();
            check_trace(&res, &bounds);
            assert_eq!(res.evaluations, total_evaluations(&cfg));
            assert_eq!(res.best_x.len(), dims);
        }
    }
}

#[test]
fn deployment_is_deterministic_and_leaves_policy_alone() {
    let p = policy();
    let before = p.clone();
    let spec = get_benchmark("six_hump_camel", 2).unwrap();
    let bounds = BoundsMap::new(spec.lower.clone(), spec.upper.clone()).unwrap();
    let cfg = DeployConfig::new(7, 40, 123, bounds);
    let a = optimize(&spec.objective(), &cfg, &p).unwrap();
    let b = optimize(&spec.objective(), &cfg, &p).unwrap();
    assert_eq!(a, b);
    assert_eq!(p, before);
}

#[test]
fn unfrozen_and_pbest_anchor_variants() {
    let p = policy();
    let spec = get_benchmark("matyas", 2).unwrap();
    let bounds = BoundsMap::new(spec.lower.clone(), spec.upper.clone()).unwrap();
    let mut cfg = DeployConfig::new(6, 30, 5, bounds.clone());
    cfg.freeze_best = false;
    let res = optimize(&spec.objective(), &cfg, &p).unwrap();
    assert_eq!(res.evaluations, 6 * 31);
    check_trace(&res, &bounds);
    cfg.freeze_best = true;
    cfg.anchor_on_pbest = true;
    let res = optimize(&spec.objective(), &cfg, &p).unwrap();
    assert_eq!(res.evaluations, 6 + 30 * 5);
    check_trace(&res, &bounds);
}

#[test]
fn pso_converges_on_sphere() {
    let bounds = BoundsMap::uniform(2, -5.0, 5.0).unwrap();
    let sphere = |x: &[f64]| -x.iter().map(|v| v * v).sum::<f64>();
    let bests: Vec<f64> = (0..25)
        .map(|t| pso_optimize(&sphere, &bounds, &PsoConfig::new(10, 200, t)).unwrap().best_f)
        .collect();
    assert!(mean_std(&bests).0 >= -1e-3);
}

#[test]
fn de_converges_on_matyas() {
    let spec = get_benchmark("matyas", 2).unwrap();
    let bounds = BoundsMap::new(spec.lower.clone(), spec.upper.clone()).unwrap();
    let bests: Vec<f64> = (0..25)
        .map(|t| de_optimize(&spec.objective(), &bounds, &DeConfig::new(20, 100, t)).unwrap().best_f)
        .collect();
    assert!(mean_std(&bests).0 >= -1e-3);
}

#[test]
fn baselines_count_evaluations_like_deploy() {
    let spec = get_benchmark("cosine_mixture", 2).unwrap();
    let bounds = BoundsMap::new(spec.lower.clone(), spec.upper.clone()).unwrap();
    let calls = std::sync::atomic::AtomicUsize::new(0);
    let counted = |x: &[f64]| {
        calls.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
        spec.evaluate_unchecked(x)
    };
    let res = pso_optimize(&counted, &bounds, &PsoConfig::new(8, 12, 1)).unwrap();
    assert_eq!(res.evaluations, calls.load(std::sync::atomic::Ordering::Relaxed));
    check_trace(&res, &bounds);
    calls.store(0, std::sync::atomic::Ordering::Relaxed);
    let res = de_optimize(&counted, &bounds, &DeConfig::new(8, 12, 1)).unwrap();
    assert_eq!(res.evaluations, calls.load(std::sync::atomic::Ordering::Relaxed));
    check_trace(&res, &bounds);
    calls.store(0, std::sync::atomic::Ordering::Relaxed);
    let cfg = DeployConfig::new(8, 12, 1, bounds.clone());
    let res = optimize(&counted, &cfg, &policy()).unwrap();
    assert_eq!(res.evaluations, calls.load(std::sync::atomic::Ordering::Relaxed));
}

#[test]
fn baselines_abort_on_non_finite_values() {
    let bounds = BoundsMap::uniform(2, -1.0, 1.0).unwrap();
    let bad = |x: &[f64]| if x[0] > 0.9 { f64::INFINITY } else { -x[0] };
    let res = pso_optimize(&bad, &bounds, &PsoConfig::new(10, 200, 2));
    match res {
        Ok(r) => assert!(r.aborted.is_some() || r.history.iter().all(|h| h.global_best_f.is_finite())),
        Err(e) => assert!(e.to_string().contains("non-finite")),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn baselines_best_is_monotone(seed in 0u64..10_000, n in 4usize..12, dims in 1usize..4) {
        let spec = get_benchmark("function_one", dims).unwrap();
        let bounds = BoundsMap::new(spec.lower.clone(), spec.upper.clone()).unwrap();
        let pso = pso_optimize(&spec.objective(), &bounds, &PsoConfig::new(n, 20, seed)).unwrap();
        let de = de_optimize(&spec.objective(), &bounds, &DeConfig::new(n, 20, seed)).unwrap();
        for r in [&pso, &de] {
            for w in r.history.windows(2) {
                prop_assert!(w[1].global_best_f >= w[0].global_best_f);
            }
        }
    }

    #[test]
    fn deploy_best_is_monotone(seed in 0u64..10_000, n in 2usize..10, dims in 1usize..4) {
        let spec = get_benchmark("cosine_mixture", dims).unwrap();
        let bounds = BoundsMap::new(spec.lower.clone(), spec.upper.clone()).unwrap();
        let cfg = DeployConfig::new(n, 25, seed, bounds);
        let res = optimize(&spec.objective(), &cfg, &policy()).unwrap();
        for w in res.history.windows(2) {
            prop_assert!(w[1].global_best_f >= w[0].global_best_f);
        }
        prop_assert_eq!(res.evaluations, n + 25 * (n - 1));
    }
}
