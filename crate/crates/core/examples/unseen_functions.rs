//! Runs a cosine-mixture policy on functions it never saw during training,
//! including a user-defined one.
//!
//!     cargo run --release --example unseen_functions -- [policy.txt]

use std::path::Path;

use swarm_rl::bench::{get_benchmark, BenchmarkSpec};
use swarm_rl::harness::{load_policy, mean_std, run_trials, ObjectiveSource, Optimizer};
use swarm_rl::ppo::{train, TrainConfig};

fn main() -> swarm_rl::Result<()> {
    let policy = match std::env::args().nth(1) {
        Some(p) => load_policy(Path::new(&p))?,
        None => train(&TrainConfig { episodes: 500, seed: 1, ..Default::default() })?.artifact,
    };

    let mut specs = vec![
        get_benchmark("function_one", 2)?,
        get_benchmark("function_two", 2)?,
        get_benchmark("matyas", 2)?,
        get_benchmark("six_hump_camel", 2)?,
    ];
    // negated Rastrigin, maximum 0 at the origin
    specs.push(BenchmarkSpec::custom("neg_rastrigin", vec![-5.12; 2], vec![5.12; 2], |x| {
        -x.iter()
            .map(|v| v * v - 10.0 * (2.0 * std::f64::consts::PI * v).cos() + 10.0)
            .sum::<f64>()
    })?);

    let n = 10;
    let iters = Optimizer::Policy.iters_for_budget(n, 1000);
    for spec in specs {
        let name = spec.name.clone();
        let runs = run_trials(Optimizer::Policy, &ObjectiveSource::Benchmark(spec), Some(&policy), n, iters, 25, 7)?;
        let (m, s) = mean_std(&runs.iter().map(|r| r.best_f).collect::<Vec<_>>());
        println!("{name:<16} {m:>10.5} ± {s:.5}");
    }
    Ok(())
}
