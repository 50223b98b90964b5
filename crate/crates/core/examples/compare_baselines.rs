//! Learned swarm vs PSO vs DE under one evaluation budget.
//!
//!     cargo run --release --example compare_baselines -- [policy.txt]

use std::path::Path;

use swarm_rl::bench::get_benchmark;
use swarm_rl::harness::{compare, load_policy, CompareArgs, ObjectiveSource};
use swarm_rl::ppo::{train, TrainConfig};

fn main() -> swarm_rl::Result<()> {
    let (policy, path) = match std::env::args().nth(1) {
        Some(p) => (load_policy(Path::new(&p))?, p),
        None => (train(&TrainConfig { episodes: 500, seed: 1, ..Default::default() })?.artifact, String::new()),
    };
    for name in ["cosine_mixture", "six_hump_camel"] {
        let args = CompareArgs {
            policy: path.clone().into(),
            source: ObjectiveSource::Benchmark(get_benchmark(name, 2)?),
            agents: 10,
            budget: 1000,
            trials: 25,
            seed: 0,
            step: 250,
        };
        println!("{name}");
        for (opt, summary) in compare(&args, &policy)? {
            let cells: Vec<String> = (0..summary.checkpoints.len())
                .map(|k| format!("@{} {}", summary.checkpoints[k], summary.format_row(k)))
                .collect();
            println!("  {:<9} {}", opt.label(), cells.join("  "));
        }
    }
    Ok(())
}
