//! Optimizing a black-box objective with a frozen trained policy.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::ppo::PolicyArtifact;
use crate::swarm::{psi, random_neighbor, BoundsMap, SwarmState};

#[derive(Debug, Clone, PartialEq)]
pub struct DeployConfig {
    pub n_agents: usize,
    pub max_iters: usize,
    pub seed: u64,
    pub bounds: BoundsMap,
    /// Keep the current best agent in place each iteration.
    pub freeze_best: bool,
    /// Anchor on the best personal best instead of the best current value.
    pub anchor_on_pbest: bool,
}

impl DeployConfig {
    pub fn new(n_agents: usize, max_iters: usize, seed: u64, bounds: BoundsMap) -> Self {
        Self {
            n_agents,
            max_iters,
            seed,
            bounds,
            freeze_best: true,
            anchor_on_pbest: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_agents < 2 {
            return Err(Error::Config(format!("`n_agents` must be at least 2, got {}", self.n_agents)));
        }
        if self.max_iters < 1 {
            return Err(Error::Config("`max_iters` must be at least 1".into()));
        }
        Ok(())
    }
}

/// Snapshot after one iteration (iteration 0 is the random initialization).
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub evaluations: usize,
    pub global_best_f: f64,
    /// Agent positions in original units.
    pub positions: Vec<Vec<f64>>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub best_x: Vec<f64>,
    pub best_f: f64,
    pub history: Vec<IterationRecord>,
    pub evaluations: usize,
    /// Reason the run stopped early, if it did.
    pub aborted: Option<String>,
}

impl OptimizationResult {
    /// `(evaluations, best-so-far)` after every iteration.
    pub fn trace(&self) -> Vec<(usize, f64)> {
        self.history.iter().map(|h| (h.evaluations, h.global_best_f)).collect()
    }

    /// Best value reached within `budget` evaluations (step-function lookup).
    pub fn best_at(&self, budget: usize) -> Option<f64> {
        self.history
            .iter()
            .take_while(|h| h.evaluations <= budget)
            .last()
            .map(|h| h.global_best_f)
    }

    pub(crate) fn record(&mut self, iteration: usize, positions: Vec<Vec<f64>>, values: Vec<f64>, best_x: Vec<f64>, best_f: f64) {
        self.best_x = best_x;
        self.best_f = best_f;
        self.history.push(IterationRecord {
            iteration,
            evaluations: self.evaluations,
            global_best_f: best_f,
            positions,
            values,
        });
    }

    pub(crate) fn empty() -> Self {
        Self {
            best_x: Vec::new(),
            best_f: f64::NEG_INFINITY,
            history: Vec::new(),
            evaluations: 0,
            aborted: None,
        }
    }
}

/// Objective calls made in `iteration`: all agents at initialization, then
/// one fewer per iteration when the best agent is frozen.
pub fn evaluations_per_iteration(cfg: &DeployConfig, iteration: usize) -> usize {
    if iteration == 0 || !cfg.freeze_best {
        cfg.n_agents
    } else {
        cfg.n_agents - 1
    }
}

/// `N + K·(N−1)` with freezing, `N·(K+1)` without.
pub fn total_evaluations(cfg: &DeployConfig) -> usize {
    cfg.n_agents + cfg.max_iters * evaluations_per_iteration(cfg, 1)
}

/// Smallest iteration count whose total evaluations reach `budget`.
pub fn iters_for_budget(n_agents: usize, per_iter: usize, budget: usize) -> usize {
    budget.saturating_sub(n_agents).div_ceil(per_iter.max(1)).max(1)
}

fn snapshot(state: &SwarmState, bounds: &BoundsMap) -> (Vec<Vec<f64>>, Vec<f64>, Vec<f64>, f64) {
    let positions = state.positions.iter().map(|p| bounds.denormalize(p)).collect();
    let (best_pos, best_f) = state.best();
    (positions, state.raw_values.clone(), bounds.denormalize(best_pos), best_f)
}

/// Runs the frozen policy on `objective` for `cfg.max_iters` iterations.
///
/// Configuration and shape problems are errors. A non-finite objective value
/// after initialization ends the run early and is reported in
/// [`OptimizationResult::aborted`] alongside the partial history.
pub fn optimize<F>(objective: &F, cfg: &DeployConfig, policy: &PolicyArtifact) -> Result<OptimizationResult>
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    cfg.validate()?;
    if policy.actor.input_dim() != 4 {
        return Err(Error::Usage(format!(
            "policy actor takes {} inputs, expected 4",
            policy.actor.input_dim()
        )));
    }
    let bounds = &cfg.bounds;
    let dims = bounds.dims();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut state = SwarmState::random(cfg.n_agents, objective, bounds, &mut rng)?;

    let mut result = OptimizationResult::empty();
    result.evaluations = cfg.n_agents;
    let (pos, vals, bx, bf) = snapshot(&state, bounds);
    result.record(0, pos, vals, bx, bf);

    for k in 1..=cfg.max_iters {
        let g = if cfg.anchor_on_pbest {
            state.gbest_idx
        } else {
            state.current_best_idx()
        };
        let frozen = cfg.freeze_best.then_some(g);
        let mut deltas = vec![vec![0.0; dims]; cfg.n_agents];
        for (i, row) in deltas.iter_mut().enumerate() {
            if Some(i) == frozen {
                continue;
            }
            let nbr = random_neighbor(i, cfg.n_agents, &mut rng);
            for (j, delta) in row.iter_mut().enumerate() {
                let obs = state.build_observation(i, nbr, j)?.to_array();
                let mean = policy.actor.forward(&obs)?;
                let sigma = psi((state.positions[i][j] - state.positions[g][j]).abs());
                let normal = Normal::new(mean, sigma).map_err(|e| Error::Usage(e.to_string()))?;
                *delta = normal.sample(&mut rng);
            }
        }
        match state.step(&deltas, objective, bounds, frozen) {
            Ok(n) => result.evaluations += n,
            Err(e @ Error::Evaluation { .. }) => {
                result.aborted = Some(format!("iteration {k}: {e}"));
                break;
            }
            Err(e) => return Err(e),
        }
        let (pos, vals, bx, bf) = snapshot(&state, bounds);
        result.record(k, pos, vals, bx, bf);
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neuro::{Activation, Mlp, DEFAULT_LAYERS};
    use crate::ppo::TrainConfig;

    fn zero_policy() -> PolicyArtifact {
        let mut p = PolicyArtifact::untrained(&TrainConfig::default());
        p.actor = Mlp::zeros(&DEFAULT_LAYERS, Activation::Tanh).unwrap();
        p
    }

    fn bowl(x: &[f64]) -> f64 {
        -x.iter().map(|v| v * v).sum::<f64>()
    }

    #[test]
    fn evaluation_accounting() {
        let b = BoundsMap::uniform(2, -1.0, 1.0).unwrap();
        let mut cfg = DeployConfig::new(10, 7, 0, b);
        assert_eq!(evaluations_per_iteration(&cfg, 0), 10);
        assert_eq!(evaluations_per_iteration(&cfg, 3), 9);
        assert_eq!(total_evaluations(&cfg), 10 + 7 * 9);
        cfg.freeze_best = false;
        assert_eq!(evaluations_per_iteration(&cfg, 3), 10);
        assert_eq!(iters_for_budget(10, 9, 1000), 110);
        assert_eq!(iters_for_budget(10, 9, 10), 1);
    }

    #[test]
    fn two_agents_move_one_at_a_time() {
        let b = BoundsMap::uniform(3, -2.0, 2.0).unwrap();
        let cfg = DeployConfig::new(2, 20, 4, b);
        let res = optimize(&bowl, &cfg, &zero_policy()).unwrap();
        assert_eq!(res.evaluations, 2 + 20);
        for w in res.history.windows(2) {
            assert_eq!(w[1].evaluations - w[0].evaluations, 1);
            let moved = (0..2).filter(|&i| w[0].positions[i] != w[1].positions[i]).count();
            assert!(moved <= 1);
        }
    }

    #[test]
    fn single_iteration_stays_near_initial_best() {
        let b = BoundsMap::uniform(2, -1.0, 1.0).unwrap();
        let cfg = DeployConfig::new(6, 1, 11, b);
        let res = optimize(&bowl, &cfg, &zero_policy()).unwrap();
        let init_best = res.history[0].global_best_f;
        assert!(res.best_f >= init_best);
        // one zero-mean step with sigma <= 0.182 in unit coordinates
        for (p0, p1) in res.history[0].positions.iter().zip(&res.history[1].positions) {
            for (a, c) in p0.iter().zip(p1) {
                assert!((a - c).abs() <= 2.0 * 0.182 * 6.0);
            }
        }
    }

    #[test]
    fn rejects_bad_config_and_policy() {
        let b = BoundsMap::uniform(2, -1.0, 1.0).unwrap();
        assert!(optimize(&bowl, &DeployConfig::new(1, 5, 0, b.clone()), &zero_policy()).is_err());
        assert!(optimize(&bowl, &DeployConfig::new(3, 0, 0, b.clone()), &zero_policy()).is_err());
        let mut p = zero_policy();
        p.actor = Mlp::zeros(&[3, 8, 1], Activation::Tanh).unwrap();
        assert!(optimize(&bowl, &DeployConfig::new(3, 5, 0, b), &p).is_err());
    }

    #[test]
    fn non_finite_objective_aborts_with_partial_result() {
        let b = BoundsMap::uniform(1, -1.0, 1.0).unwrap();
        let cfg = DeployConfig::new(4, 50, 2, b);
        let calls = std::cell::Cell::new(0usize);
        let flaky = |x: &[f64]| {
            calls.set(calls.get() + 1);
            if calls.get() > 10 { f64::NAN } else { -x[0].abs() }
        };
        let res = optimize(&flaky, &cfg, &zero_policy()).unwrap();
        assert!(res.aborted.is_some());
        assert!(res.history.len() >= 1 && res.history.len() < 51);
        assert_eq!(res.best_f, res.history.last().unwrap().global_best_f);
    }

    #[test]
    fn best_at_uses_last_completed_iteration() {
        let b = BoundsMap::uniform(2, -1.0, 1.0).unwrap();
        let cfg = DeployConfig::new(5, 10, 1, b);
        let res = optimize(&bowl, &cfg, &zero_policy()).unwrap();
        assert_eq!(res.best_at(4), None);
        assert_eq!(res.best_at(5), Some(res.history[0].global_best_f));
        assert_eq!(res.best_at(12), Some(res.history[1].global_best_f));
        assert_eq!(res.best_at(10_000), Some(res.best_f));
    }
}
