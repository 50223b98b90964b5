//! Small dense networks with exact backpropagation, Gaussian policy-head
//! helpers and an Adam optimizer.

use std::f64::consts::PI;

use rand::Rng;

use crate::error::{Error, Result};

/// Layer widths for both actor and critic.
pub const DEFAULT_LAYERS: [usize; 4] = [4, 64, 64, 1];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Tanh,
    Identity,
}

impl Activation {
    fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Tanh => z.tanh(),
            Activation::Identity => z,
        }
    }

    /// Derivative expressed through the activation's output.
    fn slope_from_output(self, a: f64) -> f64 {
        match self {
            Activation::Tanh => 1.0 - a * a,
            Activation::Identity => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Activation::Tanh => "tanh",
            Activation::Identity => "identity",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "tanh" => Some(Activation::Tanh),
            "identity" => Some(Activation::Identity),
            _ => None,
        }
    }
}

/// Weights and biases of a fully connected network with tanh hidden layers.
///
/// `weights[l]` is stored row-major with shape `layer_dims[l+1] × layer_dims[l]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    pub layer_dims: Vec<usize>,
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<Vec<f64>>,
    pub output_activation: Activation,
}

/// Parameter-shaped container used for gradients and optimizer moments.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpGrads {
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<Vec<f64>>,
}

impl MlpGrads {
    pub fn zeros_like(net: &Mlp) -> Self {
        Self {
            weights: net.weights.iter().map(|w| vec![0.0; w.len()]).collect(),
            biases: net.biases.iter().map(|b| vec![0.0; b.len()]).collect(),
        }
    }

    pub fn add_scaled(&mut self, other: &MlpGrads, scale: f64) {
        for (a, b) in self.iter_mut().zip(other.iter()) {
            *a += scale * b;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &f64> {
        self.weights.iter().chain(&self.biases).flatten()
    }

    pub fn iter_mut(&mut self) -> impl Iterator<Item = &mut f64> {
        self.weights.iter_mut().chain(&mut self.biases).flatten()
    }

    pub fn is_finite(&self) -> bool {
        self.iter().all(|g| g.is_finite())
    }
}

impl Mlp {
    /// All-zero network; mostly useful in tests.
    pub fn zeros(layer_dims: &[usize], output_activation: Activation) -> Result<Self> {
        if layer_dims.len() < 2 || layer_dims.contains(&0) {
            return Err(Error::Usage(format!("invalid layer widths {layer_dims:?}")));
        }
        let weights = layer_dims.windows(2).map(|w| vec![0.0; w[0] * w[1]]).collect();
        let biases = layer_dims[1..].iter().map(|&n| vec![0.0; n]).collect();
        Ok(Self {
            layer_dims: layer_dims.to_vec(),
            weights,
            biases,
            output_activation,
        })
    }

    /// Uniform fan-in initialization, `U(−g/√fan_in, g/√fan_in)`, with gain 1
    /// on hidden layers and `output_scale` on the last layer. Biases start at 0.
    pub fn init<R: Rng + ?Sized>(
        layer_dims: &[usize],
        output_activation: Activation,
        output_scale: f64,
        rng: &mut R,
    ) -> Result<Self> {
        let mut net = Self::zeros(layer_dims, output_activation)?;
        let last = net.weights.len() - 1;
        for (l, w) in net.weights.iter_mut().enumerate() {
            let fan_in = layer_dims[l] as f64;
            let gain = if l == last { output_scale } else { 1.0 };
            let limit = gain / fan_in.sqrt();
            for v in w.iter_mut() {
                *v = rng.random_range(-1.0..=1.0) * limit;
            }
        }
        Ok(net)
    }

    /// Actor network: tanh output, 0.01 output-layer scale.
    pub fn actor<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::init(&DEFAULT_LAYERS, Activation::Tanh, 0.01, rng).expect("static layer dims")
    }

    /// Critic network: identity output.
    pub fn critic<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::init(&DEFAULT_LAYERS, Activation::Identity, 1.0, rng).expect("static layer dims")
    }

    pub fn input_dim(&self) -> usize {
        self.layer_dims[0]
    }

    pub fn param_count(&self) -> usize {
        self.weights.iter().chain(&self.biases).map(Vec::len).sum()
    }

    pub fn params(&self) -> impl Iterator<Item = &f64> {
        self.weights.iter().chain(&self.biases).flatten()
    }

    pub fn params_mut(&mut self) -> impl Iterator<Item = &mut f64> {
        self.weights.iter_mut().chain(&mut self.biases).flatten()
    }

    pub fn is_finite(&self) -> bool {
        self.params().all(|p| p.is_finite())
    }

    /// Checks that the stored arrays agree with `layer_dims`.
    pub fn validate(&self) -> Result<()> {
        let n = self.layer_dims.len();
        if n < 2 || self.weights.len() != n - 1 || self.biases.len() != n - 1 {
            return Err(Error::Usage("layer count mismatch".into()));
        }
        for l in 0..n - 1 {
            let (fan_in, fan_out) = (self.layer_dims[l], self.layer_dims[l + 1]);
            if self.weights[l].len() != fan_in * fan_out || self.biases[l].len() != fan_out {
                return Err(Error::Usage(format!("layer {l} has inconsistent shapes")));
            }
        }
        Ok(())
    }

    /// Activations of every layer, input first.
    fn activations(&self, input: &[f64]) -> Result<Vec<Vec<f64>>> {
        if input.len() != self.input_dim() {
            return Err(Error::Usage(format!(
                "network expects {} inputs, got {}",
                self.input_dim(),
                input.len()
            )));
        }
        let last = self.weights.len() - 1;
        let mut acts = Vec::with_capacity(self.layer_dims.len());
        acts.push(input.to_vec());
        for l in 0..=last {
            let act = if l == last { self.output_activation } else { Activation::Tanh };
            let fan_in = self.layer_dims[l];
            let prev = &acts[l];
            let out = self.weights[l]
                .chunks_exact(fan_in)
                .zip(&self.biases[l])
                .map(|(row, b)| {
                    let z = row.iter().zip(prev).map(|(w, x)| w * x).sum::<f64>() + b;
                    act.apply(z)
                })
                .collect();
            acts.push(out);
        }
        Ok(acts)
    }

    /// Output vector of the network.
    pub fn forward_vec(&self, input: &[f64]) -> Result<Vec<f64>> {
        Ok(self.activations(input)?.pop().expect("at least one layer"))
    }

    /// Scalar output (first output unit).
    pub fn forward(&self, input: &[f64]) -> Result<f64> {
        Ok(self.forward_vec(input)?[0])
    }

    /// Gradient of `upstream · output[0]` with respect to every parameter,
    /// together with the forward output.
    pub fn backward(&self, input: &[f64], upstream: f64) -> Result<(f64, MlpGrads)> {
        let mut grads = MlpGrads::zeros_like(self);
        let out = self.accumulate_backward(input, upstream, &mut grads)?;
        Ok((out, grads))
    }

    /// Like [`backward`](Self::backward) but adds into an existing buffer.
    pub fn accumulate_backward(&self, input: &[f64], upstream: f64, grads: &mut MlpGrads) -> Result<f64> {
        let acts = self.activations(input)?;
        let last = self.weights.len() - 1;
        let output = acts[last + 1][0];

        let mut delta = vec![0.0; self.layer_dims[last + 1]];
        delta[0] = upstream * self.output_activation.slope_from_output(output);

        for l in (0..=last).rev() {
            let fan_in = self.layer_dims[l];
            let prev = &acts[l];
            for (o, &d) in delta.iter().enumerate() {
                if d == 0.0 {
                    continue;
                }
                grads.biases[l][o] += d;
                let row = &mut grads.weights[l][o * fan_in..(o + 1) * fan_in];
                for (g, x) in row.iter_mut().zip(prev) {
                    *g += d * x;
                }
            }
            if l == 0 {
                break;
            }
            // Propagate through W^T, then the tanh of layer l.
            let mut next = vec![0.0; fan_in];
            for (o, &d) in delta.iter().enumerate() {
                if d == 0.0 {
                    continue;
                }
                let row = &self.weights[l][o * fan_in..(o + 1) * fan_in];
                for (n, w) in next.iter_mut().zip(row) {
                    *n += d * w;
                }
            }
            for (n, a) in next.iter_mut().zip(prev) {
                *n *= Activation::Tanh.slope_from_output(*a);
            }
            delta = next;
        }
        Ok(output)
    }
}

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(Error::Usage(format!("standard deviation must be positive, got {sigma}")))
    }
}

/// Log-density of `action` under `Normal(mean, sigma)`.
pub fn gaussian_logprob(mean: f64, sigma: f64, action: f64) -> Result<f64> {
    check_sigma(sigma)?;
    let z = (action - mean) / sigma;
    Ok(-0.5 * z * z - sigma.ln() - HALF_LN_2PI)
}

/// Differential entropy of `Normal(·, sigma)`.
pub fn gaussian_entropy(sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    Ok(0.5 * (2.0 * PI * std::f64::consts::E * sigma * sigma).ln())
}

/// Moment estimates and hyperparameters for [`adam_step`].
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub m: MlpGrads,
    pub v: MlpGrads,
    pub step: u64,
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl AdamState {
    pub fn new(net: &Mlp, lr: f64) -> Self {
        Self {
            m: MlpGrads::zeros_like(net),
            v: MlpGrads::zeros_like(net),
            step: 0,
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

/// One bias-corrected Adam descent step on `net`.
pub fn adam_step(net: &mut Mlp, grads: &MlpGrads, state: &mut AdamState) -> Result<()> {
    if !grads.is_finite() {
        return Err(Error::Divergence("non-finite gradient rejected".into()));
    }
    if grads.iter().count() != net.param_count() {
        return Err(Error::Usage("gradient shape does not match network".into()));
    }
    state.step += 1;
    let t = state.step as i32;
    let (b1, b2) = (state.beta1, state.beta2);
    let c1 = 1.0 - b1.powi(t);
    let c2 = 1.0 - b2.powi(t);
    let params = net.params_mut();
    let moments = state.m.iter_mut().zip(state.v.iter_mut());
    for ((p, g), (m, v)) in params.zip(grads.iter()).zip(moments) {
        *m = b1 * *m + (1.0 - b1) * g;
        *v = b2 * *v + (1.0 - b2) * g * g;
        let m_hat = *m / c1;
        let v_hat = *v / c2;
        *p -= state.lr * m_hat / (v_hat.sqrt() + state.eps);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_network_outputs_zero() {
        let net = Mlp::zeros(&DEFAULT_LAYERS, Activation::Tanh).unwrap();
        assert_eq!(net.forward(&[0.3, -0.2, 0.9, 1.0]).unwrap(), 0.0);
    }

    #[test]
    fn zero_input_zero_bias_gives_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let net = Mlp::init(&DEFAULT_LAYERS, Activation::Tanh, 1.0, &mut rng).unwrap();
        assert_eq!(net.forward(&[0.0; 4]).unwrap(), 0.0);
    }

    #[test]
    fn single_layer_closed_form() {
        let mut net = Mlp::zeros(&[1, 1], Activation::Tanh).unwrap();
        net.weights[0][0] = 0.7;
        assert_eq!(net.forward(&[1.3]).unwrap(), (0.7f64 * 1.3).tanh());
        assert!(net.forward(&[1.0, 2.0]).is_err());
    }

    #[test]
    fn backward_closed_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let net = Mlp::init(&[3, 5, 1], Activation::Tanh, 1.0, &mut rng).unwrap();
        let (_, g) = net.backward(&[0.1, 0.2, 0.3], 0.0).unwrap();
        assert!(g.iter().all(|&v| v == 0.0));

        let mut lin = Mlp::zeros(&[1, 1], Activation::Identity).unwrap();
        lin.weights[0][0] = -2.0;
        let (_, g) = lin.backward(&[0.75], 1.0).unwrap();
        assert_eq!(g.weights[0][0], 0.75);
        assert_eq!(g.biases[0][0], 1.0);
    }

    #[test]
    fn actor_output_is_bounded() {
        let mut net = Mlp::zeros(&[4, 3, 1], Activation::Tanh).unwrap();
        for p in net.params_mut() {
            *p = 50.0;
        }
        let y = net.forward(&[1.0; 4]).unwrap();
        assert!(y < 1.0 || y == 1.0, "tanh saturates but never exceeds 1");
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let actor = Mlp::actor(&mut rng);
        for _ in 0..100 {
            let x: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
            let y = actor.forward(&x).unwrap();
            assert!(y > -1.0 && y < 1.0);
        }
    }

    #[test]
    fn forward_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let net = Mlp::critic(&mut rng);
        let x = [0.1, -0.4, 0.25, 0.9];
        assert_eq!(net.forward(&x).unwrap().to_bits(), net.forward(&x).unwrap().to_bits());
    }

    #[test]
    fn gaussian_helpers() {
        assert!((gaussian_logprob(0.0, 1.0, 0.0).unwrap() + 0.918_938_533_204_672_8).abs() < 1e-15);
        let s = 0.37;
        assert!((gaussian_logprob(0.4, s, 0.4).unwrap() - (-s.ln() - HALF_LN_2PI)).abs() < 1e-15);
        // -0.5 - ln 0.2 - 0.5 ln 2π
        assert!((gaussian_logprob(0.0, 0.2, 0.2).unwrap() - 0.190_499_379_229_427_6).abs() < 1e-12);
        assert!(gaussian_logprob(0.0, 0.0, 0.1).is_err());

        assert!((gaussian_entropy(1.0).unwrap() - 1.418_938_533_204_672_7).abs() < 1e-12);
        assert!((gaussian_entropy(0.2).unwrap() + 0.190_499_379_229_427_6).abs() < 1e-12);
        for s in [0.01, 0.3, 2.0] {
            let d = gaussian_entropy(2.0 * s).unwrap() - gaussian_entropy(s).unwrap();
            assert!((d - 2f64.ln()).abs() < 1e-12);
        }
        assert!(gaussian_entropy(-1.0).is_err());
    }

    #[test]
    fn density_integrates_to_one() {
        // Simpson's rule over ±12σ.
        for (mu, sigma) in [(0.0, 1.0), (0.3, 0.05), (-0.7, 0.2)] {
            let n = 20_000;
            let (a, b) = (mu - 12.0 * sigma, mu + 12.0 * sigma);
            let h = (b - a) / n as f64;
            let mut sum = 0.0;
            for k in 0..=n {
                let x = a + k as f64 * h;
                let w = if k == 0 || k == n { 1.0 } else if k % 2 == 1 { 4.0 } else { 2.0 };
                sum += w * gaussian_logprob(mu, sigma, x).unwrap().exp();
            }
            assert!((sum * h / 3.0 - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn adam_zero_grads_and_first_step() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut net = Mlp::init(&[2, 3, 1], Activation::Identity, 1.0, &mut rng).unwrap();
        let before = net.clone();
        let mut st = AdamState::new(&net, 0.1);
        let zeros = MlpGrads::zeros_like(&net);
        adam_step(&mut net, &zeros, &mut st).unwrap();
        assert_eq!(net, before);
        assert_eq!(st.step, 1);

        let mut st = AdamState::new(&net, 0.1);
        let mut g = MlpGrads::zeros_like(&net);
        for (k, v) in g.iter_mut().enumerate() {
            *v = (k as f64 - 4.0) * 0.5;
        }
        adam_step(&mut net, &g, &mut st).unwrap();
        for ((p, q), gk) in net.params().zip(before.params()).zip(g.iter()) {
            let want = -0.1 * gk / (gk.abs() + 1e-8);
            assert!((p - q - want).abs() < 1e-12);
        }

        let mut bad = g.clone();
        bad.weights[0][0] = f64::NAN;
        let snapshot = net.clone();
        assert!(adam_step(&mut net, &bad, &mut st).is_err());
        assert_eq!(net, snapshot);
    }

    #[test]
    fn adam_descends_quadratic_bowl() {
        // minimize (b - 3)^2 over the bias of a 1->1 identity net
        let mut net = Mlp::zeros(&[1, 1], Activation::Identity).unwrap();
        let mut st = AdamState::new(&net, 0.05);
        let mut last_gap = f64::INFINITY;
        for _ in 0..200 {
            let b = net.biases[0][0];
            let mut g = MlpGrads::zeros_like(&net);
            g.biases[0][0] = 2.0 * (b - 3.0);
            adam_step(&mut net, &g, &mut st).unwrap();
            let gap = (net.biases[0][0] - 3.0).abs();
            assert!(gap <= last_gap + 1e-12 || gap < 0.05);
            last_gap = gap;
        }
        assert!(last_gap < 0.05);
    }
}
