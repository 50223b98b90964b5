//! Trains a policy on the 2-D cosine mixture and saves it.
//!
//!     cargo run --release --example train_policy -- [episodes] [out]

use std::path::PathBuf;

use swarm_rl::harness::{curve_csv, save_policy};
use swarm_rl::ppo::{train, TrainConfig};

fn main() -> swarm_rl::Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let mut args = std::env::args().skip(1);
    let episodes = args.next().map(|s| s.parse().expect("episodes")).unwrap_or(500);
    let out = PathBuf::from(args.next().unwrap_or_else(|| "policy.txt".into()));

    let cfg = TrainConfig { episodes, ..Default::default() };
    let outcome = train(&cfg)?;
    if let Some(reason) = &outcome.aborted {
        eprintln!("training stopped early: {reason}");
    }

    let curve = &outcome.curve;
    for p in curve.iter().step_by((curve.len() / 10).max(1)) {
        println!("episode {:>5}  mean reward {:>8.3}  best f {:.5}", p.episode, p.mean_reward, p.best_f);
    }
    save_policy(&outcome.artifact, &out)?;
    std::fs::write(out.with_extension("curve.csv"), curve_csv(curve))?;
    println!("saved {} (from episode {})", out.display(), outcome.artifact.meta.episodes);
    Ok(())
}
