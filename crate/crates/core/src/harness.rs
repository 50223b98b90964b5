//! Experiment plumbing: config files, the policy file format, seeded
//! multi-trial runs and CSV summaries.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader, Write as _};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

use log::{info, warn};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::baselines::{de_optimize, pso_optimize, DeConfig, PsoConfig};
use crate::bench::{get_benchmark, BenchmarkSpec, REGISTRY};
use crate::deploy::{iters_for_budget, optimize, DeployConfig, OptimizationResult};
use crate::error::{Error, Result};
use crate::neuro::{Activation, Mlp};
use crate::ppo::{train, CurvePoint, PolicyArtifact, TrainConfig, TrainingMeta};
use crate::swarm::BoundsMap;

pub const POLICY_FORMAT_VERSION: u32 = 1;
const POLICY_MAGIC: &str = "swarm-rl-policy";

/// Parses a flat `key = value` config; unknown keys are rejected.
pub fn parse_train_config(text: &str) -> Result<TrainConfig> {
    let cfg: TrainConfig = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_train_config(path: &Path) -> Result<TrainConfig> {
    parse_train_config(&fs::read_to_string(path)?)
}

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_network(out: &mut String, role: &str, net: &Mlp) {
    let _ = writeln!(out, "network {role} {}", net.output_activation.name());
    let dims: Vec<String> = net.layer_dims.iter().map(usize::to_string).collect();
    let _ = writeln!(out, "layers {}", dims.join(" "));
    for (l, (w, b)) in net.weights.iter().zip(&net.biases).enumerate() {
        let fan_in = net.layer_dims[l];
        let fan_out = net.layer_dims[l + 1];
        let _ = writeln!(out, "weights {l} {fan_out} {fan_in}");
        for row in w.chunks_exact(fan_in) {
            let vals: Vec<String> = row.iter().map(|&v| fmt_f64(v)).collect();
            let _ = writeln!(out, "{}", vals.join(" "));
        }
        let _ = writeln!(out, "biases {l} {fan_out}");
        let vals: Vec<String> = b.iter().map(|&v| fmt_f64(v)).collect();
        let _ = writeln!(out, "{}", vals.join(" "));
    }
}

/// Text encoding of a policy. Every parameter is written with 17 significant
/// digits so that loading reproduces it exactly.
pub fn encode_policy(policy: &PolicyArtifact) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{POLICY_MAGIC}");
    let _ = writeln!(out, "format_version {POLICY_FORMAT_VERSION}");
    let _ = writeln!(out, "episodes {}", policy.meta.episodes);
    let _ = writeln!(out, "mean_reward {}", fmt_f64(policy.meta.mean_reward));
    let _ = writeln!(out, "config_begin");
    out.push_str(&toml::to_string(&policy.meta.config).expect("config serializes"));
    let _ = writeln!(out, "config_end");
    write_network(&mut out, "actor", &policy.actor);
    write_network(&mut out, "critic", &policy.critic);
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Result<&'a str> {
        let (n, l) = self
            .inner
            .next()
            .ok_or_else(|| Error::PolicyFormat("unexpected end of file".into()))?;
        self.line = n + 1;
        Ok(l)
    }

    fn err(&self, what: impl std::fmt::Display) -> Error {
        Error::PolicyFormat(format!("line {}: {what}", self.line))
    }

    /// Reads `<key> <rest>` and returns the rest split on whitespace.
    fn keyed(&mut self, key: &str) -> Result<Vec<&'a str>> {
        let l = self.next()?;
        let mut parts = l.split_whitespace();
        if parts.next() != Some(key) {
            return Err(self.err(format!("expected `{key}`, found `{l}`")));
        }
        Ok(parts.collect())
    }

    fn numbers<T: std::str::FromStr>(&self, parts: &[&str]) -> Result<Vec<T>> {
        parts
            .iter()
            .map(|p| p.parse::<T>().map_err(|_| self.err(format!("bad number `{p}`"))))
            .collect()
    }

    fn single<T: std::str::FromStr>(&mut self, key: &str) -> Result<T> {
        let parts = self.keyed(key)?;
        match self.numbers::<T>(&parts)?.as_slice() {
            [_] => Ok(self.numbers::<T>(&parts)?.remove(0)),
            _ => Err(self.err(format!("`{key}` takes one value"))),
        }
    }
}

fn read_network(lines: &mut Lines<'_>, role: &str) -> Result<Mlp> {
    let head = lines.keyed("network")?;
    if head.len() != 2 || head[0] != role {
        return Err(lines.err(format!("expected `network {role} <activation>`")));
    }
    let activation = Activation::from_name(head[1]).ok_or_else(|| lines.err("unknown activation"))?;
    let dims_parts = lines.keyed("layers")?;
    let dims: Vec<usize> = lines.numbers(&dims_parts)?;
    let mut net = Mlp::zeros(&dims, activation).map_err(|e| lines.err(e))?;
    for l in 0..dims.len() - 1 {
        let shape: Vec<usize> = {
            let p = lines.keyed("weights")?;
            lines.numbers(&p)?
        };
        if shape != [l, dims[l + 1], dims[l]] {
            return Err(lines.err(format!("weights header {shape:?} does not match layers")));
        }
        let mut w = Vec::with_capacity(dims[l] * dims[l + 1]);
        for _ in 0..dims[l + 1] {
            let row = lines.next()?;
            let vals: Vec<f64> = lines.numbers(&row.split_whitespace().collect::<Vec<_>>())?;
            if vals.len() != dims[l] {
                return Err(lines.err(format!("expected {} weights in row", dims[l])));
            }
            w.extend(vals);
        }
        let shape: Vec<usize> = {
            let p = lines.keyed("biases")?;
            lines.numbers(&p)?
        };
        if shape != [l, dims[l + 1]] {
            return Err(lines.err(format!("biases header {shape:?} does not match layers")));
        }
        let row = lines.next()?;
        let b: Vec<f64> = lines.numbers(&row.split_whitespace().collect::<Vec<_>>())?;
        if b.len() != dims[l + 1] {
            return Err(lines.err(format!("expected {} biases", dims[l + 1])));
        }
        net.weights[l] = w;
        net.biases[l] = b;
    }
    if !net.is_finite() {
        return Err(Error::PolicyFormat(format!("{role} has non-finite parameters")));
    }
    Ok(net)
}

pub fn decode_policy(text: &str) -> Result<PolicyArtifact> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        line: 0,
    };
    if lines.next()? != POLICY_MAGIC {
        return Err(lines.err("not a policy file"));
    }
    let version: u32 = lines.single("format_version")?;
    if version != POLICY_FORMAT_VERSION {
        return Err(lines.err(format!("unsupported format_version {version}")));
    }
    let episodes: usize = lines.single("episodes")?;
    let mean_reward: f64 = lines.single("mean_reward")?;
    lines.keyed("config_begin")?;
    let mut cfg_text = String::new();
    loop {
        let l = lines.next()?;
        if l == "config_end" {
            break;
        }
        cfg_text.push_str(l);
        cfg_text.push('\n');
    }
    let config: TrainConfig = toml::from_str(&cfg_text).map_err(|e| lines.err(e.message()))?;
    let actor = read_network(&mut lines, "actor")?;
    let critic = read_network(&mut lines, "critic")?;
    Ok(PolicyArtifact {
        actor,
        critic,
        meta: TrainingMeta {
            config,
            episodes,
            mean_reward,
        },
    })
}

pub fn save_policy(policy: &PolicyArtifact, path: &Path) -> Result<()> {
    fs::write(path, encode_policy(policy))?;
    Ok(())
}

pub fn load_policy(path: &Path) -> Result<PolicyArtifact> {
    decode_policy(&fs::read_to_string(path)?)
}

/// Mean and population standard deviation of best-so-far values at each
/// evaluation checkpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialSummary {
    pub trials: usize,
    pub checkpoints: Vec<usize>,
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
}

impl TrialSummary {
    /// Table-style `mean±std` at checkpoint `k`.
    pub fn format_row(&self, k: usize) -> String {
        format!("{:.4}±{:.4}", self.means[k], self.stds[k])
    }

    /// `evaluations,mean,std` rows with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("evaluations,mean,std\n");
        for k in 0..self.checkpoints.len() {
            let _ = writeln!(out, "{},{},{}", self.checkpoints[k], self.means[k], self.stds[k]);
        }
        out
    }
}

pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Summarizes `(evaluations, best-so-far)` traces at the given checkpoints.
///
/// A checkpoint between two recorded points uses the earlier one.
pub fn summarize(traces: &[Vec<(usize, f64)>], checkpoints: &[usize]) -> Result<TrialSummary> {
    if traces.is_empty() {
        return Err(Error::Usage("no trials to summarize".into()));
    }
    let mut means = Vec::with_capacity(checkpoints.len());
    let mut stds = Vec::with_capacity(checkpoints.len());
    for &c in checkpoints {
        let mut at = Vec::with_capacity(traces.len());
        for (t, trace) in traces.iter().enumerate() {
            let budget = trace.last().map_or(0, |p| p.0);
            if c > budget {
                return Err(Error::Usage(format!(
                    "checkpoint {c} exceeds trial {t}'s budget of {budget} evaluations"
                )));
            }
            let best = trace
                .iter()
                .take_while(|p| p.0 <= c)
                .last()
                .ok_or_else(|| Error::Usage(format!("checkpoint {c} precedes trial {t}'s first record")))?
                .1;
            at.push(best);
        }
        let (m, s) = mean_std(&at);
        means.push(m);
        stds.push(s);
    }
    Ok(TrialSummary {
        trials: traces.len(),
        checkpoints: checkpoints.to_vec(),
        means,
        stds,
    })
}

/// Independent, reproducible seed for trial `index` under `master`.
pub fn trial_seed(master: u64, index: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index as u64 + 1);
    rng.next_u64()
}

/// Where objective values come from.
#[derive(Debug, Clone)]
pub enum ObjectiveSource {
    Benchmark(BenchmarkSpec),
    /// Shell command evaluated once per point: reads a line of space-separated
    /// coordinates on stdin, prints one number.
    External { command: String, bounds: BoundsMap },
}

impl ObjectiveSource {
    pub fn bounds(&self) -> Result<BoundsMap> {
        match self {
            ObjectiveSource::Benchmark(spec) => BoundsMap::new(spec.lower.clone(), spec.upper.clone()),
            ObjectiveSource::External { bounds, .. } => Ok(bounds.clone()),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            ObjectiveSource::Benchmark(spec) => &spec.name,
            ObjectiveSource::External { command, .. } => command,
        }
    }

    /// Evaluates one point. Failures of an external command yield NaN, which
    /// the optimizers treat as an evaluation error.
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        match self {
            ObjectiveSource::Benchmark(spec) => spec.evaluate_unchecked(x),
            ObjectiveSource::External { command, .. } => match run_external(command, x) {
                Ok(v) => v,
                Err(e) => {
                    warn!("objective command failed: {e}");
                    f64::NAN
                }
            },
        }
    }
}

fn run_external(command: &str, x: &[f64]) -> Result<f64> {
    let mut child = Command::new("sh")
        .arg("-c")
        .arg(command)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()?;
    {
        let mut stdin = child.stdin.take().expect("piped stdin");
        let line: Vec<String> = x.iter().map(|&v| fmt_f64(v)).collect();
        writeln!(stdin, "{}", line.join(" "))?;
    }
    let stdout = child.stdout.take().expect("piped stdout");
    let mut reply = String::new();
    BufReader::new(stdout).read_line(&mut reply)?;
    let status = child.wait()?;
    if !status.success() {
        return Err(Error::Usage(format!("objective command exited with {status}")));
    }
    reply
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::Usage(format!("objective command printed `{}`", reply.trim())))
}

/// Optimizers available to the experiment runner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Optimizer {
    Policy,
    Pso,
    De,
}

impl Optimizer {
    pub const ALL: [Optimizer; 3] = [Optimizer::Policy, Optimizer::Pso, Optimizer::De];

    pub fn label(self) -> &'static str {
        match self {
            Optimizer::Policy => "rl-swarm",
            Optimizer::Pso => "pso",
            Optimizer::De => "de",
        }
    }

    /// Iterations needed for `budget` evaluations with `n` agents.
    pub fn iters_for_budget(self, n: usize, budget: usize) -> usize {
        match self {
            Optimizer::Policy => iters_for_budget(n, n - 1, budget),
            Optimizer::Pso | Optimizer::De => iters_for_budget(n, n, budget),
        }
    }
}

/// Runs `trials` seeded runs of one optimizer in parallel, ordered by trial index.
pub fn run_trials(
    optimizer: Optimizer,
    source: &ObjectiveSource,
    policy: Option<&PolicyArtifact>,
    n_agents: usize,
    iters: usize,
    trials: usize,
    master_seed: u64,
) -> Result<Vec<OptimizationResult>> {
    let bounds = source.bounds()?;
    let objective = |x: &[f64]| source.evaluate(x);
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let seed = trial_seed(master_seed, t);
            match optimizer {
                Optimizer::Policy => {
                    let policy = policy.ok_or_else(|| Error::Usage("policy optimizer needs a policy".into()))?;
                    let cfg = DeployConfig::new(n_agents, iters, seed, bounds.clone());
                    optimize(&objective, &cfg, policy)
                }
                Optimizer::Pso => pso_optimize(&objective, &bounds, &PsoConfig::new(n_agents, iters, seed)),
                Optimizer::De => de_optimize(&objective, &bounds, &DeConfig::new(n_agents, iters, seed)),
            }
        })
        .collect()
}

/// Evaluation checkpoints from the first multiple of `step` at or above
/// `start` up to `budget`, always ending at `budget`.
pub fn checkpoint_grid(start: usize, budget: usize, step: usize) -> Vec<usize> {
    let step = step.max(1);
    let first = start.div_ceil(step) * step;
    let mut out: Vec<usize> = (first..=budget).step_by(step).collect();
    if out.last() != Some(&budget) && budget >= start {
        out.push(budget);
    }
    out
}

pub fn curve_csv(curve: &[CurvePoint]) -> String {
    let mut out = String::from("episode,mean_reward,best_f\n");
    for p in curve {
        let _ = writeln!(out, "{},{},{}", p.episode, p.mean_reward, p.best_f);
    }
    out
}

/// Trains from a config file and writes the policy plus its training curve.
pub fn cmd_train(config: &Path, policy_out: &Path, curve_out: Option<&Path>) -> Result<PathBuf> {
    let cfg = load_train_config(config)?;
    info!("training on {} ({}-D) for {} episodes", cfg.benchmark, cfg.dims, cfg.episodes);
    let outcome = train(&cfg)?;
    if let Some(reason) = &outcome.aborted {
        warn!("training stopped early: {reason}");
    }
    save_policy(&outcome.artifact, policy_out)?;
    let curve_path = curve_out.map(Path::to_path_buf).unwrap_or_else(|| {
        let mut p = policy_out.as_os_str().to_owned();
        p.push(".curve.csv");
        PathBuf::from(p)
    });
    fs::write(&curve_path, curve_csv(&outcome.curve))?;
    Ok(curve_path)
}

#[derive(Debug, Clone)]
pub struct OptimizeArgs {
    pub policy: PathBuf,
    pub source: ObjectiveSource,
    pub agents: usize,
    pub iters: usize,
    pub trials: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
}

/// Per-trial histories as `trial,iteration,evaluations,best_f` rows.
pub fn histories_csv(results: &[OptimizationResult]) -> String {
    let mut out = String::from("trial,iteration,evaluations,best_f\n");
    for (t, r) in results.iter().enumerate() {
        for h in &r.history {
            let _ = writeln!(out, "{t},{},{},{}", h.iteration, h.evaluations, h.global_best_f);
        }
    }
    out
}

/// Deploys a saved policy over `trials` seeded runs. Writes `trials.csv`
/// and `summary.csv` into the output directory.
pub fn cmd_optimize(args: &OptimizeArgs) -> Result<TrialSummary> {
    let policy = load_policy(&args.policy)?;
    if policy.actor.input_dim() != 4 {
        return Err(Error::Usage(format!(
            "policy network takes {} inputs, expected 4",
            policy.actor.input_dim()
        )));
    }
    if args.trials == 0 {
        return Err(Error::Config("`trials` must be at least 1".into()));
    }
    let results = run_trials(
        Optimizer::Policy,
        &args.source,
        Some(&policy),
        args.agents,
        args.iters,
        args.trials,
        args.seed,
    )?;
    for (t, r) in results.iter().enumerate() {
        if let Some(reason) = &r.aborted {
            warn!("trial {t} aborted: {reason}");
        }
    }
    let traces: Vec<_> = results.iter().map(OptimizationResult::trace).collect();
    let budget = traces.iter().filter_map(|t| t.last()).map(|p| p.0).min().unwrap_or(0);
    let checkpoints: Vec<usize> = results[0]
        .history
        .iter()
        .map(|h| h.evaluations)
        .filter(|&e| e <= budget)
        .collect();
    let summary = summarize(&traces, &checkpoints)?;
    fs::create_dir_all(&args.out_dir)?;
    fs::write(args.out_dir.join("trials.csv"), histories_csv(&results))?;
    fs::write(args.out_dir.join("summary.csv"), summary.to_csv())?;
    Ok(summary)
}

#[derive(Debug, Clone)]
pub struct CompareArgs {
    pub policy: PathBuf,
    pub source: ObjectiveSource,
    pub agents: usize,
    pub budget: usize,
    pub trials: usize,
    pub seed: u64,
    /// Checkpoint spacing in evaluations.
    pub step: usize,
}

/// Summaries for the policy optimizer, PSO and DE under one evaluation budget.
pub fn compare(args: &CompareArgs, policy: &PolicyArtifact) -> Result<Vec<(Optimizer, TrialSummary)>> {
    if args.agents < 4 {
        return Err(Error::Config("comparison needs at least 4 agents (DE rand/1)".into()));
    }
    if args.budget < args.agents {
        return Err(Error::Config("`budget` must cover the initial population".into()));
    }
    let checkpoints = checkpoint_grid(args.agents, args.budget, args.step);
    Optimizer::ALL
        .iter()
        .map(|&opt| {
            let iters = opt.iters_for_budget(args.agents, args.budget);
            let results = run_trials(opt, &args.source, Some(policy), args.agents, iters, args.trials, args.seed)?;
            let traces: Vec<_> = results.iter().map(OptimizationResult::trace).collect();
            Ok((opt, summarize(&traces, &checkpoints)?))
        })
        .collect()
}

pub fn compare_csv(rows: &[(Optimizer, TrialSummary)]) -> String {
    let mut out = String::from("optimizer,evaluations,mean,std\n");
    for (opt, s) in rows {
        for k in 0..s.checkpoints.len() {
            let _ = writeln!(out, "{},{},{},{}", opt.label(), s.checkpoints[k], s.means[k], s.stds[k]);
        }
    }
    out
}

/// Loads the policy, runs [`compare`] and writes one combined CSV.
pub fn cmd_compare(args: &CompareArgs, out: &Path) -> Result<Vec<(Optimizer, TrialSummary)>> {
    let policy = load_policy(&args.policy)?;
    let rows = compare(args, &policy)?;
    if let Some(dir) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(out, compare_csv(&rows))?;
    Ok(rows)
}

/// One line per registered benchmark.
pub fn cmd_bench() -> String {
    let mut out = String::new();
    for name in REGISTRY {
        let spec = get_benchmark(name, 2).expect("registered");
        let _ = writeln!(
            out,
            "{name:<16} bounds [{}, {}]  max {}  at {:?}",
            spec.lower[0],
            spec.upper[0],
            spec.known_max.map_or("?".into(), |m| format!("{m:.6}")),
            spec.known_argmax.unwrap_or_default(),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summarize_examples() {
        let s = summarize(&[vec![(1, 0.1), (2, 0.5)]], &[1, 2]).unwrap();
        assert_eq!(s.means, vec![0.1, 0.5]);
        assert_eq!(s.stds, vec![0.0, 0.0]);

        let s = summarize(&[vec![(5, 0.0)], vec![(5, 0.2)]], &[5]).unwrap();
        assert!((s.means[0] - 0.1).abs() < 1e-15 && (s.stds[0] - 0.1).abs() < 1e-15);
        assert_eq!(s.format_row(0), "0.1000±0.1000");

        let s = summarize(&[vec![(10, 0.1), (19, 0.3), (28, 0.4)]], &[18, 19, 27]).unwrap();
        assert_eq!(s.means, vec![0.1, 0.3, 0.3]);

        assert!(summarize(&[vec![(10, 0.1)]], &[11]).is_err());
        assert!(summarize(&[vec![(10, 0.1)]], &[9]).is_err());
    }

    #[test]
    fn summarize_is_permutation_invariant() {
        let a = vec![(4, 0.1), (8, 0.3)];
        let b = vec![(4, -0.2), (8, 0.25)];
        let c = vec![(4, 0.05), (8, 0.05)];
        let s1 = summarize(&[a.clone(), b.clone(), c.clone()], &[4, 8]).unwrap();
        let s2 = summarize(&[c, a, b], &[4, 8]).unwrap();
        for k in 0..2 {
            assert!((s1.means[k] - s2.means[k]).abs() < 1e-15);
            assert!((s1.stds[k] - s2.stds[k]).abs() < 1e-15);
        }
    }

    #[test]
    fn config_rejects_unknown_keys() {
        let err = parse_train_config("episodes = 3\nepisods = 4\n").unwrap_err();
        assert!(err.to_string().contains("episods"), "{err}");
        let err = parse_train_config("benchmark = \"nope\"\n").unwrap_err();
        assert!(err.to_string().contains("unknown benchmark"), "{err}");
        let cfg = parse_train_config("episodes = 12\nseed = 5\n").unwrap();
        assert_eq!((cfg.episodes, cfg.seed, cfg.n_agents), (12, 5, 7));
    }

    #[test]
    fn trial_seeds_are_distinct_and_stable() {
        let a: Vec<u64> = (0..25).map(|i| trial_seed(42, i)).collect();
        let b: Vec<u64> = (0..25).map(|i| trial_seed(42, i)).collect();
        assert_eq!(a, b);
        let mut sorted = a.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 25);
        assert_ne!(trial_seed(43, 0), a[0]);
    }

    #[test]
    fn checkpoints() {
        assert_eq!(checkpoint_grid(10, 50, 20), vec![20, 40, 50]);
        assert_eq!(checkpoint_grid(7, 30, 10), vec![10, 20, 30]);
    }

    #[test]
    fn policy_decoder_rejects_garbage() {
        assert!(decode_policy("hello").is_err());
        let p = PolicyArtifact::untrained(&TrainConfig::default());
        let text = encode_policy(&p);
        let broken = text.replacen("format_version 1", "format_version 9", 1);
        assert!(decode_policy(&broken).is_err());
        let truncated: String = text.lines().take(40).collect::<Vec<_>>().join("\n");
        assert!(decode_policy(&truncated).is_err());
    }

    #[test]
    fn bench_listing_names_every_function() {
        let out = cmd_bench();
        for name in REGISTRY {
            assert!(out.contains(name));
        }
    }
}
