//! Policy generation: episodic swarm rollouts, GAE advantages and the
//! clipped PPO update for the shared per-dimension policy.

use log::{debug, info, warn};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::bench::{get_benchmark, BenchmarkSpec};
use crate::error::{Error, Result};
use crate::neuro::{adam_step, gaussian_entropy, gaussian_logprob, AdamState, Mlp, MlpGrads};
use crate::swarm::{compute_reward, psi, random_neighbor, BoundsMap, SwarmState};

/// Window for the running-mean reward that selects the saved policy.
pub const SELECTION_WINDOW: usize = 50;

/// Hyperparameters for policy generation. Every field is a config-file key.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub episodes: usize,
    pub steps_per_episode: usize,
    pub n_agents: usize,
    pub benchmark: String,
    pub dims: usize,
    pub clip_eps: f64,
    pub gamma: f64,
    pub gae_lambda: f64,
    pub c1: f64,
    pub c2: f64,
    pub lr: f64,
    pub update_epochs: usize,
    /// Samples per gradient step; 0 uses the whole episode as one batch.
    pub minibatch_size: usize,
    /// Environment steps spent under the fixed exploration deviation.
    pub exploration_steps: usize,
    pub sigma_explore: f64,
    pub kappa: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            episodes: 10_000,
            steps_per_episode: 25,
            n_agents: 7,
            benchmark: "cosine_mixture".into(),
            dims: 2,
            clip_eps: 0.2,
            gamma: 0.99,
            gae_lambda: 0.95,
            c1: 0.5,
            c2: 0.01,
            lr: 3e-4,
            update_epochs: 4,
            minibatch_size: 0,
            exploration_steps: 2500,
            sigma_explore: 0.2,
            kappa: 0.9,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |key: &str, why: &str| Err(Error::Config(format!("`{key}` {why}")));
        if !(self.clip_eps > 0.0 && self.clip_eps < 1.0) {
            return bad("clip_eps", "must lie in (0, 1)");
        }
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return bad("gamma", "must lie in (0, 1]");
        }
        if !(0.0..=1.0).contains(&self.gae_lambda) {
            return bad("gae_lambda", "must lie in [0, 1]");
        }
        if self.steps_per_episode < 1 {
            return bad("steps_per_episode", "must be at least 1");
        }
        if self.n_agents < 2 {
            return bad("n_agents", "must be at least 2");
        }
        if !(self.kappa > 0.0 && self.kappa < 1.0) {
            return bad("kappa", "must lie in (0, 1)");
        }
        if !(self.sigma_explore > 0.0) {
            return bad("sigma_explore", "must be positive");
        }
        if !(self.lr > 0.0) {
            return bad("lr", "must be positive");
        }
        if self.c1 < 0.0 || self.c2 < 0.0 {
            return bad("c1/c2", "must be non-negative");
        }
        get_benchmark(&self.benchmark, self.dims)?;
        Ok(())
    }
}

/// Action standard deviation: fixed while exploring, then `psi(distance)`.
pub fn action_sigma(total_env_steps: usize, cfg: &TrainConfig, dist_to_gbest: f64) -> f64 {
    if total_env_steps < cfg.exploration_steps {
        cfg.sigma_explore
    } else {
        psi(dist_to_gbest.abs())
    }
}

/// Rollout buffer. Samples of one (agent, dimension) chain are contiguous and
/// the last sample of each chain carries `done = true`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trajectory {
    pub observations: Vec<[f64; 4]>,
    pub actions: Vec<f64>,
    pub sigmas: Vec<f64>,
    pub log_probs: Vec<f64>,
    pub rewards: Vec<f64>,
    pub values: Vec<f64>,
    pub dones: Vec<bool>,
    pub advantages: Vec<f64>,
    pub returns: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    #[allow(clippy::too_many_arguments)]
    pub fn push(&mut self, obs: [f64; 4], action: f64, sigma: f64, log_prob: f64, reward: f64, value: f64, done: bool) {
        self.observations.push(obs);
        self.actions.push(action);
        self.sigmas.push(sigma);
        self.log_probs.push(log_prob);
        self.rewards.push(reward);
        self.values.push(value);
        self.dones.push(done);
    }

    fn append(&mut self, mut other: Trajectory) {
        self.observations.append(&mut other.observations);
        self.actions.append(&mut other.actions);
        self.sigmas.append(&mut other.sigmas);
        self.log_probs.append(&mut other.log_probs);
        self.rewards.append(&mut other.rewards);
        self.values.append(&mut other.values);
        self.dones.append(&mut other.dones);
        self.advantages.append(&mut other.advantages);
        self.returns.append(&mut other.returns);
    }

    /// Fills `advantages` (normalized) and `returns` (from raw advantages).
    pub fn finish(&mut self, gamma: f64, lambda: f64) {
        let (mut adv, ret) = compute_gae(&self.rewards, &self.values, &self.dones, gamma, lambda);
        normalize_advantages(&mut adv);
        self.advantages = adv;
        self.returns = ret;
    }

    fn subset(&self, idx: &[usize]) -> Trajectory {
        let pick = |v: &Vec<f64>| idx.iter().map(|&i| v[i]).collect::<Vec<_>>();
        Trajectory {
            observations: idx.iter().map(|&i| self.observations[i]).collect(),
            actions: pick(&self.actions),
            sigmas: pick(&self.sigmas),
            log_probs: pick(&self.log_probs),
            rewards: pick(&self.rewards),
            values: pick(&self.values),
            dones: idx.iter().map(|&i| self.dones[i]).collect(),
            advantages: pick(&self.advantages),
            returns: pick(&self.returns),
        }
    }
}

/// Generalized advantage estimates and returns (`advantage + value`).
///
/// A `done` sample bootstraps from zero; otherwise from the next sample's value.
pub fn compute_gae(rewards: &[f64], values: &[f64], dones: &[bool], gamma: f64, lambda: f64) -> (Vec<f64>, Vec<f64>) {
    let n = rewards.len();
    let mut adv = vec![0.0; n];
    let mut running = 0.0;
    for t in (0..n).rev() {
        let (next_value, carry) = if dones[t] || t + 1 == n {
            (0.0, 0.0)
        } else {
            (values[t + 1], running)
        };
        let delta = rewards[t] + gamma * next_value - values[t];
        running = delta + gamma * lambda * carry;
        adv[t] = running;
    }
    let ret = adv.iter().zip(values).map(|(a, v)| a + v).collect();
    (adv, ret)
}

/// Shifts and scales to zero mean and unit (population) deviation. Constant
/// inputs are only centered.
pub fn normalize_advantages(adv: &mut [f64]) {
    if adv.is_empty() {
        return;
    }
    let n = adv.len() as f64;
    let mean = adv.iter().sum::<f64>() / n;
    let var = adv.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / n;
    let std = var.sqrt();
    for a in adv.iter_mut() {
        *a -= mean;
        if std > 1e-12 {
            *a /= std;
        }
    }
}

/// The swarm environment used during policy generation.
#[derive(Debug, Clone)]
pub struct SwarmEnv {
    pub benchmark: BenchmarkSpec,
    pub bounds: BoundsMap,
    /// Fixed normalization range `(worst, best)` of the training function.
    pub value_range: (f64, f64),
}

impl SwarmEnv {
    /// Estimates the value range on a dense grid; the known maximum, when
    /// registered, replaces the grid maximum.
    pub fn new(benchmark: BenchmarkSpec) -> Result<Self> {
        let bounds = BoundsMap::new(benchmark.lower.clone(), benchmark.upper.clone())?;
        let (lo, hi) = grid_range(&benchmark);
        let hi = benchmark.known_max.map_or(hi, |m| m.max(hi));
        Ok(Self {
            benchmark,
            bounds,
            value_range: (lo, hi),
        })
    }

    pub fn reset<R: Rng + ?Sized>(&self, n_agents: usize, rng: &mut R) -> Result<SwarmState> {
        let f = self.benchmark.objective();
        let mut state = SwarmState::random(n_agents, &f, &self.bounds, rng)?;
        state.widen_value_range(self.value_range.0, self.value_range.1);
        Ok(state)
    }
}

fn grid_range(spec: &BenchmarkSpec) -> (f64, f64) {
    let d = spec.dims as i32;
    let per_dim = ((200_000f64).powf(1.0 / d as f64).floor() as usize).clamp(2, 401);
    let total = per_dim.pow(d as u32);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut x = vec![0.0; spec.dims];
    for k in 0..total {
        let mut rest = k;
        for (j, xj) in x.iter_mut().enumerate() {
            let t = (rest % per_dim) as f64 / (per_dim - 1) as f64;
            rest /= per_dim;
            *xj = spec.lower[j] + t * (spec.upper[j] - spec.lower[j]);
        }
        let v = spec.evaluate_unchecked(&x);
        if v.is_finite() {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    (lo, hi)
}

/// Summary of one episode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpisodeStats {
    /// Reward summed over steps, averaged over agents.
    pub mean_reward: f64,
    /// Best objective value reached during the episode.
    pub best_f: f64,
}

/// Runs one episode with every agent moving under the shared policy.
pub fn collect_episode<R: Rng + ?Sized>(
    env: &SwarmEnv,
    actor: &Mlp,
    critic: &Mlp,
    cfg: &TrainConfig,
    total_env_steps: &mut usize,
    rng: &mut R,
) -> Result<(Trajectory, EpisodeStats)> {
    let n = cfg.n_agents;
    let d = env.bounds.dims();
    let f = env.benchmark.objective();
    let mut state = env.reset(n, rng)?;
    let mut chains = vec![Trajectory::default(); n * d];
    let mut reward_sum = 0.0;

    for step in 0..cfg.steps_per_episode {
        let g = state.current_best_idx();
        let mut deltas = vec![vec![0.0; d]; n];
        let mut pending = Vec::with_capacity(n * d);
        for i in 0..n {
            let nbr = random_neighbor(i, n, rng);
            for j in 0..d {
                let obs = state.build_observation(i, nbr, j)?.to_array();
                let mean = actor.forward(&obs)?;
                let value = critic.forward(&obs)?;
                let dist = (state.positions[i][j] - state.positions[g][j]).abs();
                let sigma = action_sigma(*total_env_steps, cfg, dist);
                let action = Normal::new(mean, sigma)
                    .map_err(|e| Error::Usage(e.to_string()))?
                    .sample(rng);
                let log_prob = gaussian_logprob(mean, sigma, action)?;
                deltas[i][j] = action;
                pending.push((obs, action, sigma, log_prob, value));
            }
        }

        let prev: Vec<f64> = state.raw_values.iter().map(|&v| state.normalized_value(v)).collect();
        state.step(&deltas, &f, &env.bounds, None)?;
        *total_env_steps += 1;
        let done = step + 1 == cfg.steps_per_episode;

        for (k, (obs, action, sigma, log_prob, value)) in pending.into_iter().enumerate() {
            let i = k / d;
            let cur = state.normalized_value(state.raw_values[i]);
            let reward = compute_reward(cur, prev[i], cfg.kappa);
            chains[k].push(obs, action, sigma, log_prob, reward, value, done);
            if k % d == 0 {
                reward_sum += reward;
            }
        }
    }

    let mut traj = Trajectory::default();
    for chain in chains {
        traj.append(chain);
    }
    let stats = EpisodeStats {
        mean_reward: reward_sum / n as f64,
        best_f: state.best().1,
    };
    Ok((traj, stats))
}

/// Loss value, its parts and parameter gradients for one batch.
#[derive(Debug, Clone)]
pub struct PpoLoss {
    pub loss: f64,
    pub surrogate: f64,
    pub value_loss: f64,
    pub entropy: f64,
    pub clip_fraction: f64,
    pub actor_grads: MlpGrads,
    pub critic_grads: MlpGrads,
}

/// Per-sample clipped surrogate `min(r·A, clip(r, 1−ε, 1+ε)·A)` and whether
/// the unclipped branch is the active one.
pub fn clipped_surrogate(ratio: f64, advantage: f64, clip_eps: f64) -> (f64, bool) {
    let unclipped = ratio * advantage;
    let clipped = ratio.clamp(1.0 - clip_eps, 1.0 + clip_eps) * advantage;
    if unclipped <= clipped {
        (unclipped, true)
    } else {
        (clipped, false)
    }
}

/// New-to-old probability ratios of the stored actions under `actor`.
pub fn probability_ratios(batch: &Trajectory, actor: &Mlp) -> Result<Vec<f64>> {
    (0..batch.len())
        .map(|t| {
            let mean = actor.forward(&batch.observations[t])?;
            let log_prob = gaussian_logprob(mean, batch.sigmas[t], batch.actions[t])?;
            Ok((log_prob - batch.log_probs[t]).exp())
        })
        .collect()
}

/// `−E[min(rÂ, clip(r)Â)] + c1·E[(V − R)²] − c2·E[H]` with exact gradients.
pub fn ppo_loss(batch: &Trajectory, actor: &Mlp, critic: &Mlp, cfg: &TrainConfig) -> Result<PpoLoss> {
    let b = batch.len();
    if b == 0 || batch.advantages.len() != b || batch.returns.len() != b {
        return Err(Error::Usage("batch is empty or lacks advantages/returns".into()));
    }
    let scale = 1.0 / b as f64;
    let mut actor_grads = MlpGrads::zeros_like(actor);
    let mut critic_grads = MlpGrads::zeros_like(critic);
    let (mut surrogate, mut value_loss, mut entropy, mut clipped) = (0.0, 0.0, 0.0, 0usize);

    for t in 0..b {
        let obs = &batch.observations[t];
        let sigma = batch.sigmas[t];
        let adv = batch.advantages[t];
        let mean = actor.forward(obs)?;
        let log_prob = gaussian_logprob(mean, sigma, batch.actions[t])?;
        let ratio = (log_prob - batch.log_probs[t]).exp();
        let (surr, active) = clipped_surrogate(ratio, adv, cfg.clip_eps);
        surrogate += surr;
        if !active {
            clipped += 1;
        }
        if active && adv != 0.0 {
            // d(rA)/dμ = rA·(a − μ)/σ²; the loss carries −1/B.
            let dmean = -scale * ratio * adv * (batch.actions[t] - mean) / (sigma * sigma);
            actor.accumulate_backward(obs, dmean, &mut actor_grads)?;
        }

        let value = critic.forward(obs)?;
        let err = value - batch.returns[t];
        value_loss += err * err;
        critic.accumulate_backward(obs, 2.0 * cfg.c1 * scale * err, &mut critic_grads)?;

        // σ is scheduled, so the entropy bonus has no parameter gradient.
        entropy += gaussian_entropy(sigma)?;
    }

    surrogate *= scale;
    value_loss *= scale;
    entropy *= scale;
    let loss = -surrogate + cfg.c1 * value_loss - cfg.c2 * entropy;
    if !loss.is_finite() {
        return Err(Error::Divergence(format!(
            "non-finite PPO loss (surrogate {surrogate}, value {value_loss}, entropy {entropy})"
        )));
    }
    Ok(PpoLoss {
        loss,
        surrogate,
        value_loss,
        entropy,
        clip_fraction: clipped as f64 * scale,
        actor_grads,
        critic_grads,
    })
}

/// Metadata stored alongside trained networks.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingMeta {
    pub config: TrainConfig,
    /// Episode after which the saved parameters were taken.
    pub episodes: usize,
    pub mean_reward: f64,
}

/// Trained actor and critic, deployable without the training environment.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyArtifact {
    pub actor: Mlp,
    pub critic: Mlp,
    pub meta: TrainingMeta,
}

impl PolicyArtifact {
    /// Freshly initialized networks for `cfg.seed`.
    pub fn untrained(cfg: &TrainConfig) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        Self {
            actor: Mlp::actor(&mut rng),
            critic: Mlp::critic(&mut rng),
            meta: TrainingMeta {
                config: cfg.clone(),
                episodes: 0,
                mean_reward: 0.0,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub episode: usize,
    pub mean_reward: f64,
    pub best_f: f64,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    /// Parameters with the best running-mean episode reward.
    pub artifact: PolicyArtifact,
    pub curve: Vec<CurvePoint>,
    /// Set when training stopped early on non-finite values.
    pub aborted: Option<String>,
}

/// Full policy-generation loop.
pub fn train(cfg: &TrainConfig) -> Result<TrainOutcome> {
    cfg.validate()?;
    let env = SwarmEnv::new(get_benchmark(&cfg.benchmark, cfg.dims)?)?;
    let mut current = PolicyArtifact::untrained(cfg);
    // Rollout randomness is independent of network initialization.
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(1);
    let mut actor_opt = AdamState::new(&current.actor, cfg.lr);
    let mut critic_opt = AdamState::new(&current.critic, cfg.lr);

    let mut best = current.clone();
    let mut best_running = f64::NEG_INFINITY;
    let mut curve = Vec::with_capacity(cfg.episodes);
    let mut total_env_steps = 0usize;
    let mut aborted = None;

    for episode in 0..cfg.episodes {
        let (mut traj, stats) = collect_episode(&env, &current.actor, &current.critic, cfg, &mut total_env_steps, &mut rng)?;
        traj.finish(cfg.gamma, cfg.gae_lambda);
        curve.push(CurvePoint {
            episode,
            mean_reward: stats.mean_reward,
            best_f: stats.best_f,
        });

        // Selection uses the parameters that produced the window's rollouts.
        let window = &curve[curve.len().saturating_sub(SELECTION_WINDOW)..];
        if window.len() == SELECTION_WINDOW.min(cfg.episodes) {
            let running = window.iter().map(|p| p.mean_reward).sum::<f64>() / window.len() as f64;
            if running > best_running {
                best_running = running;
                best = current.clone();
                best.meta.episodes = episode;
                best.meta.mean_reward = running;
            }
        }

        if let Err(e) = ppo_update(&mut current, &traj, cfg, &mut actor_opt, &mut critic_opt, &mut rng) {
            warn!("episode {episode}: {e}; keeping last good policy");
            aborted = Some(e.to_string());
            break;
        }
        if episode % 100 == 0 {
            debug!(
                "episode {episode}: mean reward {:.3}, best f {:.5}",
                stats.mean_reward, stats.best_f
            );
        }
    }

    if best_running == f64::NEG_INFINITY {
        best = current;
        best.meta.episodes = curve.len();
        best.meta.mean_reward = curve.last().map_or(0.0, |p| p.mean_reward);
    }
    info!(
        "trained {} episodes; saved policy from episode {} (running mean reward {:.3})",
        curve.len(),
        best.meta.episodes,
        best.meta.mean_reward
    );
    Ok(TrainOutcome {
        artifact: best,
        curve,
        aborted,
    })
}

/// `update_epochs` passes of PPO gradient steps over one finished trajectory.
pub fn ppo_update<R: Rng + ?Sized>(
    policy: &mut PolicyArtifact,
    traj: &Trajectory,
    cfg: &TrainConfig,
    actor_opt: &mut AdamState,
    critic_opt: &mut AdamState,
    rng: &mut R,
) -> Result<()> {
    let n = traj.len();
    let mb = if cfg.minibatch_size == 0 { n } else { cfg.minibatch_size.min(n) };
    let mut order: Vec<usize> = (0..n).collect();
    for _ in 0..cfg.update_epochs {
        if mb < n {
            rand::seq::SliceRandom::shuffle(order.as_mut_slice(), rng);
        }
        for chunk in order.chunks(mb) {
            let loss = if mb == n {
                ppo_loss(traj, &policy.actor, &policy.critic, cfg)?
            } else {
                ppo_loss(&traj.subset(chunk), &policy.actor, &policy.critic, cfg)?
            };
            adam_step(&mut policy.actor, &loss.actor_grads, actor_opt)?;
            adam_step(&mut policy.critic, &loss.critic_grads, critic_opt)?;
        }
    }
    if !policy.actor.is_finite() || !policy.critic.is_finite() {
        return Err(Error::Divergence("non-finite parameters after update".into()));
    }
    Ok(())
}
