//! One policy, different swarm sizes: mean best value at a fixed evaluation budget.
//!
//!     cargo run --release --example agent_scaling -- [policy.txt]

use std::path::Path;

use swarm_rl::bench::get_benchmark;
use swarm_rl::harness::{load_policy, mean_std, run_trials, ObjectiveSource, Optimizer};
use swarm_rl::ppo::{train, TrainConfig};

const BUDGET: usize = 1000;
const TRIALS: usize = 25;

fn main() -> swarm_rl::Result<()> {
    let policy = match std::env::args().nth(1) {
        Some(p) => load_policy(Path::new(&p))?,
        None => train(&TrainConfig { episodes: 500, seed: 1, ..Default::default() })?.artifact,
    };
    let source = ObjectiveSource::Benchmark(get_benchmark("cosine_mixture", 2)?);
    for n in [3, 5, 7, 10, 15, 20] {
        let iters = Optimizer::Policy.iters_for_budget(n, BUDGET);
        let runs = run_trials(Optimizer::Policy, &source, Some(&policy), n, iters, TRIALS, 0)?;
        let bests: Vec<f64> = runs.iter().map(|r| r.best_at(BUDGET).unwrap()).collect();
        let (m, s) = mean_std(&bests);
        println!("N = {n:>2}  ({iters:>3} iterations)  {m:.5} ± {s:.5}");
    }
    Ok(())
}
