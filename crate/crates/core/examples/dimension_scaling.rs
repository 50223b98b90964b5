//! A policy trained in 2-D, deployed unchanged in higher dimensions.
//!
//!     cargo run --release --example dimension_scaling -- [policy.txt]

use std::path::Path;

use swarm_rl::bench::get_benchmark;
use swarm_rl::harness::{load_policy, mean_std, run_trials, ObjectiveSource, Optimizer};
use swarm_rl::ppo::{train, TrainConfig};

fn main() -> swarm_rl::Result<()> {
    let policy = match std::env::args().nth(1) {
        Some(p) => load_policy(Path::new(&p))?,
        None => train(&TrainConfig { episodes: 500, seed: 1, ..Default::default() })?.artifact,
    };
    let n = 10;
    for dims in 2..=6 {
        let spec = get_benchmark("cosine_mixture", dims)?;
        let optimum = spec.known_max.unwrap();
        let source = ObjectiveSource::Benchmark(spec);
        let iters = Optimizer::Policy.iters_for_budget(n, 1000);
        let runs = run_trials(Optimizer::Policy, &source, Some(&policy), n, iters, 25, 1)?;
        let (m, s) = mean_std(&runs.iter().map(|r| r.best_f).collect::<Vec<_>>());
        println!("D = {dims}  {m:.4} ± {s:.4}  (optimum {optimum:.1})");
    }
    Ok(())
}
