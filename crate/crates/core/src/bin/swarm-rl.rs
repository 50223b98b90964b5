use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use swarm_rl::bench::get_benchmark;
use swarm_rl::harness::{self, CompareArgs, ObjectiveSource, OptimizeArgs};
use swarm_rl::swarm::BoundsMap;

#[derive(Parser)]
#[command(name = "swarm-rl", version, about = "Learned swarm optimizer: train, deploy, compare")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Train a policy from a config file.
    Train {
        #[arg(long)]
        config: PathBuf,
        /// Output policy file.
        #[arg(long)]
        out: PathBuf,
        /// Training-curve CSV (defaults to `<out>.curve.csv`).
        #[arg(long)]
        curve: Option<PathBuf>,
    },
    /// Deploy a policy over several seeded trials.
    Optimize {
        #[arg(long)]
        policy: PathBuf,
        #[command(flatten)]
        objective: ObjectiveArgs,
        #[arg(long, default_value_t = 10)]
        agents: usize,
        #[arg(long, default_value_t = 100)]
        iters: usize,
        #[arg(long, default_value_t = 25)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory for trials.csv and summary.csv.
        #[arg(long, default_value = "results")]
        out: PathBuf,
    },
    /// Compare the policy with PSO and DE at equal evaluation budgets.
    Compare {
        #[arg(long)]
        policy: PathBuf,
        #[command(flatten)]
        objective: ObjectiveArgs,
        #[arg(long, default_value_t = 10)]
        agents: usize,
        #[arg(long, default_value_t = 1000)]
        budget: usize,
        #[arg(long, default_value_t = 25)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Checkpoint spacing in evaluations.
        #[arg(long, default_value_t = 10)]
        step: usize,
        #[arg(long, default_value = "compare.csv")]
        out: PathBuf,
    },
    /// List the registered benchmark functions.
    Bench,
}

#[derive(Args)]
struct ObjectiveArgs {
    /// Registered benchmark name.
    #[arg(long, conflicts_with = "objective_cmd")]
    benchmark: Option<String>,
    /// Shell command evaluating one point per invocation (coordinates on
    /// stdin, one number on stdout).
    #[arg(long)]
    objective_cmd: Option<String>,
    #[arg(long, default_value_t = 2)]
    dims: usize,
    /// Lower bound for every coordinate of an external objective.
    #[arg(long, allow_hyphen_values = true, default_value_t = -1.0)]
    lower: f64,
    /// Upper bound for every coordinate of an external objective.
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    upper: f64,
}

impl ObjectiveArgs {
    fn source(&self) -> swarm_rl::Result<ObjectiveSource> {
        match (&self.benchmark, &self.objective_cmd) {
            (Some(name), None) => Ok(ObjectiveSource::Benchmark(get_benchmark(name, self.dims)?)),
            (None, Some(cmd)) => Ok(ObjectiveSource::External {
                command: cmd.clone(),
                bounds: BoundsMap::uniform(self.dims, self.lower, self.upper)?,
            }),
            _ => Err(swarm_rl::Error::Config(
                "give exactly one of --benchmark or --objective-cmd".into(),
            )),
        }
    }
}

fn run(cli: Cli) -> swarm_rl::Result<()> {
    match cli.command {
        Cmd::Train { config, out, curve } => {
            let curve = harness::cmd_train(&config, &out, curve.as_deref())?;
            println!("wrote {} and {}", out.display(), curve.display());
        }
        Cmd::Optimize { policy, objective, agents, iters, trials, seed, out } => {
            let args = OptimizeArgs {
                policy,
                source: objective.source()?,
                agents,
                iters,
                trials,
                seed,
                out_dir: out.clone(),
            };
            let summary = harness::cmd_optimize(&args)?;
            let last = summary.checkpoints.len() - 1;
            println!(
                "{} trials, {} evaluations: best {}",
                summary.trials,
                summary.checkpoints[last],
                summary.format_row(last)
            );
            println!("wrote {}", out.display());
        }
        Cmd::Compare { policy, objective, agents, budget, trials, seed, step, out } => {
            let args = CompareArgs {
                policy,
                source: objective.source()?,
                agents,
                budget,
                trials,
                seed,
                step,
            };
            for (opt, s) in harness::cmd_compare(&args, &out)? {
                let last = s.checkpoints.len() - 1;
                println!("{:<9} {}", opt.label(), s.format_row(last));
            }
            println!("wrote {}", out.display());
        }
        Cmd::Bench => print!("{}", harness::cmd_bench()),
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
