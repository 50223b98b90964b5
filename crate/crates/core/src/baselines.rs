//! Reference optimizers: global-best PSO and DE/rand/1/bin.
//!
//! Both work in original units, maximize, and count evaluations the same way
//! as the policy optimizer: the whole population at initialization, then one
//! call per individual per iteration.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::deploy::OptimizationResult;
use crate::error::{Error, Result};
use crate::swarm::{argmax, BoundsMap};

#[derive(Debug, Clone, PartialEq)]
pub struct PsoConfig {
    pub n_particles: usize,
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    /// Velocity limit as a fraction of each dimension's range.
    pub v_max: f64,
    pub max_iters: usize,
    pub seed: u64,
}

impl PsoConfig {
    pub fn new(n_particles: usize, max_iters: usize, seed: u64) -> Self {
        Self {
            n_particles,
            inertia: 0.729,
            cognitive: 1.49445,
            social: 1.49445,
            v_max: 0.5,
            max_iters,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_particles < 1 {
            return Err(Error::Config("`n_particles` must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.inertia) {
            return Err(Error::Config("`inertia` must lie in [0, 1]".into()));
        }
        if self.cognitive < 0.0 || self.social < 0.0 || !(self.v_max > 0.0) {
            return Err(Error::Config("PSO coefficients must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeConfig {
    pub population: usize,
    /// Differential weight.
    pub f: f64,
    /// Crossover probability.
    pub cr: f64,
    pub max_iters: usize,
    pub seed: u64,
}

impl DeConfig {
    pub fn new(population: usize, max_iters: usize, seed: u64) -> Self {
        Self {
            population,
            f: 0.8,
            cr: 0.9,
            max_iters,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.population < 4 {
            return Err(Error::Config(format!(
                "DE needs a population of at least 4, got {}",
                self.population
            )));
        }
        if !(self.f > 0.0 && self.f <= 2.0) {
            return Err(Error::Config("`f` must lie in (0, 2]".into()));
        }
        if !(0.0..=1.0).contains(&self.cr) {
            return Err(Error::Config("`cr` must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

/// Shared population bookkeeping for both baselines.
struct Population {
    x: Vec<Vec<f64>>,
    f: Vec<f64>,
    best_x: Vec<f64>,
    best_f: f64,
}

impl Population {
    fn random<F, R>(n: usize, bounds: &BoundsMap, objective: &F, rng: &mut R) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + ?Sized,
        R: Rng,
    {
        let x: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                (0..bounds.dims())
                    .map(|j| rng.random_range(bounds.lower()[j]..=bounds.upper()[j]))
                    .collect()
            })
            .collect();
        let f = evaluate_all(&x, objective)?;
        let g = argmax(&f);
        Ok(Self {
            best_x: x[g].clone(),
            best_f: f[g],
            x,
            f,
        })
    }
}

fn evaluate_all<F>(xs: &[Vec<f64>], objective: &F) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    xs.iter()
        .enumerate()
        .map(|(i, x)| {
            let value = objective(x);
            if value.is_finite() {
                Ok(value)
            } else {
                Err(Error::Evaluation { agent: i, value })
            }
        })
        .collect()
}

fn clamp_into(x: &mut [f64], bounds: &BoundsMap) {
    for (j, v) in x.iter_mut().enumerate() {
        *v = v.clamp(bounds.lower()[j], bounds.upper()[j]);
    }
}

/// One PSO velocity update for a single coordinate, clamped to `±limit`.
pub fn pso_velocity(v: f64, x: f64, pbest: f64, gbest: f64, cfg: &PsoConfig, r1: f64, r2: f64, limit: f64) -> f64 {
    let v = cfg.inertia * v + cfg.cognitive * r1 * (pbest - x) + cfg.social * r2 * (gbest - x);
    v.clamp(-limit, limit)
}

/// Canonical global-best particle swarm optimization.
pub fn pso_optimize<F>(objective: &F, bounds: &BoundsMap, cfg: &PsoConfig) -> Result<OptimizationResult>
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut pop = Population::random(cfg.n_particles, bounds, objective, &mut rng)?;
    let dims = bounds.dims();
    let limits: Vec<f64> = (0..dims)
        .map(|j| cfg.v_max * (bounds.upper()[j] - bounds.lower()[j]))
        .collect();
    let mut vel = vec![vec![0.0; dims]; cfg.n_particles];
    let mut pbest_x = pop.x.clone();
    let mut pbest_f = pop.f.clone();

    let mut result = OptimizationResult::empty();
    result.evaluations = cfg.n_particles;
    result.record(0, pop.x.clone(), pop.f.clone(), pop.best_x.clone(), pop.best_f);

    for k in 1..=cfg.max_iters {
        let mut moved = pop.x.clone();
        for (i, x) in moved.iter_mut().enumerate() {
            for j in 0..dims {
                let (r1, r2) = (rng.random::<f64>(), rng.random::<f64>());
                vel[i][j] = pso_velocity(vel[i][j], x[j], pbest_x[i][j], pop.best_x[j], cfg, r1, r2, limits[j]);
                x[j] += vel[i][j];
            }
            clamp_into(x, bounds);
        }
        let values = match evaluate_all(&moved, objective) {
            Ok(v) => v,
            Err(e) => {
                result.aborted = Some(format!("iteration {k}: {e}"));
                break;
            }
        };
        result.evaluations += moved.len();
        for i in 0..cfg.n_particles {
            if values[i] > pbest_f[i] {
                pbest_f[i] = values[i];
                pbest_x[i].clone_from(&moved[i]);
            }
            if values[i] > pop.best_f {
                pop.best_f = values[i];
                pop.best_x.clone_from(&moved[i]);
            }
        }
        pop.x = moved;
        pop.f = values;
        result.record(k, pop.x.clone(), pop.f.clone(), pop.best_x.clone(), pop.best_f);
    }
    Ok(result)
}

/// Three distinct indices, all different from `target`.
fn pick_three<R: Rng>(target: usize, n: usize, rng: &mut R) -> [usize; 3] {
    let mut out = [0usize; 3];
    let mut k = 0;
    while k < 3 {
        let c = rng.random_range(0..n);
        if c != target && !out[..k].contains(&c) {
            out[k] = c;
            k += 1;
        }
    }
    out
}

/// Classic differential evolution, rand/1 mutation with binomial crossover
/// and greedy one-to-one selection.
pub fn de_optimize<F>(objective: &F, bounds: &BoundsMap, cfg: &DeConfig) -> Result<OptimizationResult>
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut pop = Population::random(cfg.population, bounds, objective, &mut rng)?;
    let dims = bounds.dims();

    let mut result = OptimizationResult::empty();
    result.evaluations = cfg.population;
    result.record(0, pop.x.clone(), pop.f.clone(), pop.best_x.clone(), pop.best_f);

    for k in 1..=cfg.max_iters {
        let trials: Vec<Vec<f64>> = (0..cfg.population)
            .map(|i| {
                let [a, b, c] = pick_three(i, cfg.population, &mut rng);
                let forced = rng.random_range(0..dims);
                let mut trial = pop.x[i].clone();
                for (j, t) in trial.iter_mut().enumerate() {
                    if j == forced || rng.random::<f64>() < cfg.cr {
                        *t = pop.x[a][j] + cfg.f * (pop.x[b][j] - pop.x[c][j]);
                    }
                }
                clamp_into(&mut trial, bounds);
                trial
            })
            .collect();
        let values = match evaluate_all(&trials, objective) {
            Ok(v) => v,
            Err(e) => {
                result.aborted = Some(format!("generation {k}: {e}"));
                break;
            }
        };
        result.evaluations += trials.len();
        for (i, (trial, value)) in trials.into_iter().zip(values).enumerate() {
            if value >= pop.f[i] {
                pop.x[i] = trial;
                pop.f[i] = value;
                if value > pop.best_f {
                    pop.best_f = value;
                    pop.best_x.clone_from(&pop.x[i]);
                }
            }
        }
        result.record(k, pop.x.clone(), pop.f.clone(), pop.best_x.clone(), pop.best_f);
    }
    Ok(result)
}
