//! Optimizes a black-box objective implemented as a shell command.
//! The command reads space-separated coordinates on stdin and prints one number.
//!
//!     cargo run --release --example external_objective -- [policy.txt]

use std::path::Path;

use swarm_rl::harness::{load_policy, run_trials, ObjectiveSource, Optimizer};
use swarm_rl::ppo::{PolicyArtifact, TrainConfig};
use swarm_rl::swarm::BoundsMap;

fn main() -> swarm_rl::Result<()> {
    let policy = match std::env::args().nth(1) {
        Some(p) => load_policy(Path::new(&p))?,
        None => PolicyArtifact::untrained(&TrainConfig::default()),
    };
    // -(x-1)^2 - (y+0.5)^2, maximum 0 at (1, -0.5)
    let source = ObjectiveSource::External {
        command: "awk '{ printf \"%.17g\\n\", -(($1-1)^2 + ($2+0.5)^2) }'".into(),
        bounds: BoundsMap::uniform(2, -2.0, 2.0)?,
    };
    let runs = run_trials(Optimizer::Policy, &source, Some(&policy), 6, 20, 2, 3)?;
    for (t, r) in runs.iter().enumerate() {
        println!("trial {t}: best {:.5} at {:?} ({} evaluations)", r.best_f, r.best_x, r.evaluations);
    }
    Ok(())
}
