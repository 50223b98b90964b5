//! Deploys a policy on the cosine mixture and prints the best-so-far trace.
//!
//!     cargo run --release --example deploy_cosine -- [policy.txt]

use std::path::Path;

use swarm_rl::bench::get_benchmark;
use swarm_rl::deploy::{optimize, DeployConfig};
use swarm_rl::harness::load_policy;
use swarm_rl::ppo::{train, PolicyArtifact, TrainConfig};
use swarm_rl::swarm::BoundsMap;

fn policy_from_args() -> swarm_rl::Result<PolicyArtifact> {
    match std::env::args().nth(1) {
        Some(path) => load_policy(Path::new(&path)),
        None => {
            println!("no policy given, training a short one (500 episodes)");
            Ok(train(&TrainConfig { episodes: 500, seed: 1, ..Default::default() })?.artifact)
        }
    }
}

fn main() -> swarm_rl::Result<()> {
    let policy = policy_from_args()?;
    let spec = get_benchmark("cosine_mixture", 2)?;
    let bounds = BoundsMap::new(spec.lower.clone(), spec.upper.clone())?;
    let cfg = DeployConfig::new(10, 100, 42, bounds);
    let res = optimize(&spec.objective(), &cfg, &policy)?;

    for rec in res.history.iter().step_by(10) {
        println!("iter {:>3}  evals {:>4}  best {:.6}", rec.iteration, rec.evaluations, rec.global_best_f);
    }
    println!("best f = {:.6} at {:?} after {} evaluations", res.best_f, res.best_x, res.evaluations);
    Ok(())
}
