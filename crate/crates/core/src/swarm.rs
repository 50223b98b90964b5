//! The swarm viewed as a decision process: normalized positions, the
//! per-(agent, dimension) observation, the reward and the exploration
//! schedule shared by training and deployment.

use rand::Rng;

use crate::error::{Error, Result};

/// Below this width the observed value range is treated as degenerate.
const DEGENERATE_RANGE: f64 = 1e-12;

/// Box bounds in original units; maps to and from the unit hypercube.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsMap {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BoundsMap {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::Config(
                "bounds must be non-empty with matching lengths".into(),
            ));
        }
        for j in 0..lower.len() {
            if !(lower[j] < upper[j]) || !(upper[j] - lower[j]).is_finite() {
                return Err(Error::Config(format!(
                    "zero-width or invalid bound in dimension {j}: [{}, {}]",
                    lower[j], upper[j]
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    pub fn uniform(dims: usize, lower: f64, upper: f64) -> Result<Self> {
        Self::new(vec![lower; dims], vec![upper; dims])
    }

    pub fn dims(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Component-wise `(x − lower)/(upper − lower)`, clamping `x` into the box first.
    pub fn normalize(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .enumerate()
            .map(|(j, &v)| {
                let v = v.clamp(self.lower[j], self.upper[j]);
                (v - self.lower[j]) / (self.upper[j] - self.lower[j])
            })
            .collect()
    }

    /// Inverse of [`normalize`](Self::normalize); the result is clamped into the box.
    pub fn denormalize(&self, u: &[f64]) -> Vec<f64> {
        u.iter()
            .enumerate()
            .map(|(j, &t)| {
                let v = self.lower[j] + t * (self.upper[j] - self.lower[j]);
                v.clamp(self.lower[j], self.upper[j])
            })
            .collect()
    }
}

/// The four-component input to the policy for one agent in one dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    /// Own position minus own historical best, this dimension.
    pub dpos_best: f64,
    /// Normalized own value minus normalized historical best value.
    pub dval_best: f64,
    /// Own position minus the neighbor's, this dimension.
    pub dpos_nbr: f64,
    /// Normalized own value minus the neighbor's.
    pub dval_nbr: f64,
}

impl Observation {
    pub fn to_array(self) -> [f64; 4] {
        [self.dpos_best, self.dval_best, self.dpos_nbr, self.dval_nbr]
    }
}

/// Full state of one swarm run. Positions are stored in normalized
/// coordinates; objective values stay in original units.
#[derive(Debug, Clone, PartialEq)]
pub struct SwarmState {
    pub positions: Vec<Vec<f64>>,
    pub raw_values: Vec<f64>,
    pub pbest_pos: Vec<Vec<f64>>,
    pub pbest_val: Vec<f64>,
    pub gbest_idx: usize,
    pub f_best_seen: f64,
    pub f_worst_seen: f64,
    pub iter: usize,
}

impl SwarmState {
    /// Evaluates the given normalized positions and builds the initial state.
    pub fn from_positions<F>(positions: Vec<Vec<f64>>, objective: &F, bounds: &BoundsMap) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + ?Sized,
    {
        if positions.is_empty() {
            return Err(Error::Usage("swarm needs at least one agent".into()));
        }
        let dims = bounds.dims();
        let mut raw_values = Vec::with_capacity(positions.len());
        let positions: Vec<Vec<f64>> = positions
            .into_iter()
            .map(|p| p.into_iter().map(|v| v.clamp(0.0, 1.0)).collect::<Vec<_>>())
            .collect();
        for (i, p) in positions.iter().enumerate() {
            if p.len() != dims {
                return Err(Error::Usage(format!(
                    "agent {i} has {} coordinates, bounds have {dims}",
                    p.len()
                )));
            }
            let value = objective(&bounds.denormalize(p));
            if !value.is_finite() {
                return Err(Error::Evaluation { agent: i, value });
            }
            raw_values.push(value);
        }
        let f_best_seen = raw_values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let f_worst_seen = raw_values.iter().copied().fold(f64::INFINITY, f64::min);
        let mut state = Self {
            pbest_pos: positions.clone(),
            pbest_val: raw_values.clone(),
            positions,
            raw_values,
            gbest_idx: 0,
            f_best_seen,
            f_worst_seen,
            iter: 0,
        };
        state.gbest_idx = argmax(&state.pbest_val);
        Ok(state)
    }

    /// Places `n_agents` uniformly at random in the unit hypercube.
    pub fn random<F, R>(n_agents: usize, objective: &F, bounds: &BoundsMap, rng: &mut R) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + ?Sized,
        R: Rng + ?Sized,
    {
        let positions = (0..n_agents)
            .map(|_| (0..bounds.dims()).map(|_| rng.random::<f64>()).collect())
            .collect();
        Self::from_positions(positions, objective, bounds)
    }

    /// Widens the normalization range to at least `[worst, best]`.
    pub fn widen_value_range(&mut self, worst: f64, best: f64) {
        self.f_worst_seen = self.f_worst_seen.min(worst);
        self.f_best_seen = self.f_best_seen.max(best);
    }

    pub fn n_agents(&self) -> usize {
        self.positions.len()
    }

    pub fn dims(&self) -> usize {
        self.positions.first().map_or(0, Vec::len)
    }

    /// Index of the agent with the highest current value.
    pub fn current_best_idx(&self) -> usize {
        argmax(&self.raw_values)
    }

    /// Maps `f` onto `[0, 1]` using the running range; 0.5 when the range is degenerate.
    pub fn normalized_value(&self, f: f64) -> f64 {
        let width = self.f_best_seen - self.f_worst_seen;
        if width < DEGENERATE_RANGE {
            0.5
        } else {
            (f - self.f_worst_seen) / width
        }
    }

    /// Observation for agent `i` in dimension `j` against neighbor `n`.
    pub fn build_observation(&self, i: usize, n: usize, j: usize) -> Result<Observation> {
        let agents = self.n_agents();
        if i == n {
            return Err(Error::Usage(format!("agent {i} cannot be its own neighbor")));
        }
        if i >= agents || n >= agents || j >= self.dims() {
            return Err(Error::Usage(format!(
                "index out of range: agent {i}, neighbor {n}, dim {j} for {agents}x{}",
                self.dims()
            )));
        }
        let own = self.normalized_value(self.raw_values[i]);
        Ok(Observation {
            dpos_best: self.positions[i][j] - self.pbest_pos[i][j],
            dval_best: own - self.normalized_value(self.pbest_val[i]),
            dpos_nbr: self.positions[i][j] - self.positions[n][j],
            dval_nbr: own - self.normalized_value(self.raw_values[n]),
        })
    }

    /// Applies `deltas`, clamps to the unit box, evaluates the moved agents and
    /// refreshes bests. `frozen` is left in place and not re-evaluated.
    ///
    /// All evaluations complete before any state is touched, so a failing
    /// objective leaves the state as it was. Returns the number of evaluations.
    pub fn step<F>(
        &mut self,
        deltas: &[Vec<f64>],
        objective: &F,
        bounds: &BoundsMap,
        frozen: Option<usize>,
    ) -> Result<usize>
    where
        F: Fn(&[f64]) -> f64 + ?Sized,
    {
        if deltas.len() != self.n_agents() {
            return Err(Error::Usage(format!(
                "expected {} delta rows, got {}",
                self.n_agents(),
                deltas.len()
            )));
        }
        let mut moved = Vec::with_capacity(self.n_agents());
        for (i, row) in deltas.iter().enumerate() {
            if Some(i) == frozen {
                continue;
            }
            if row.len() != self.dims() || row.iter().any(|d| !d.is_finite()) {
                return Err(Error::Usage(format!("agent {i}: malformed or non-finite delta")));
            }
            let pos: Vec<f64> = self.positions[i]
                .iter()
                .zip(row)
                .map(|(x, d)| (x + d).clamp(0.0, 1.0))
                .collect();
            let value = objective(&bounds.denormalize(&pos));
            if !value.is_finite() {
                return Err(Error::Evaluation { agent: i, value });
            }
            moved.push((i, pos, value));
        }

        let evaluations = moved.len();
        for (i, pos, value) in moved {
            if value > self.pbest_val[i] {
                self.pbest_pos[i].clone_from(&pos);
                self.pbest_val[i] = value;
            }
            self.positions[i] = pos;
            self.raw_values[i] = value;
            self.f_best_seen = self.f_best_seen.max(value);
            self.f_worst_seen = self.f_worst_seen.min(value);
        }
        self.gbest_idx = argmax(&self.pbest_val);
        self.iter += 1;
        Ok(evaluations)
    }

    /// Highest value any agent has reached, with its normalized position.
    pub fn best(&self) -> (&[f64], f64) {
        (&self.pbest_pos[self.gbest_idx], self.pbest_val[self.gbest_idx])
    }
}

/// Reward for one agent's move, in normalized value units.
///
/// Below `kappa` the reward is `10·(f_cur − f_prev)`; at or above it a
/// baseline of 10 is added.
pub fn compute_reward(f_cur: f64, f_prev: f64, kappa: f64) -> f64 {
    let delta = f_cur - f_prev;
    if f_cur < kappa {
        10.0 * delta
    } else {
        10.0 * (1.0 + delta)
    }
}

/// Exploration standard deviation as a function of the (absolute, normalized)
/// distance to the global best.
pub fn psi(distance: f64) -> f64 {
    0.002 + 0.18 * distance
}

/// First index of the maximum; NaN entries never win.
pub(crate) fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] || values[best].is_nan() {
            best = i;
        }
    }
    best
}

/// Uniformly random agent index different from `i`.
pub fn random_neighbor<R: Rng + ?Sized>(i: usize, n_agents: usize, rng: &mut R) -> usize {
    debug_assert!(n_agents >= 2);
    let k = rng.random_range(0..n_agents - 1);
    if k >= i {
        k + 1
    } else {
        k
    }
}
