//! Analytic benchmark objectives.
//!
//! Every function is exposed in a maximization convention: minimization
//! problems (Matyas, six-hump camel) are negated so that larger is better.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Registry names accepted by [`get_benchmark`].
pub const REGISTRY: [&str; 5] = [
    "cosine_mixture",
    "function_one",
    "function_two",
    "matyas",
    "six_hump_camel",
];

type Kernel = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// An objective with box bounds and, when known, its global maximum.
#[derive(Clone)]
pub struct BenchmarkSpec {
    pub name: String,
    pub dims: usize,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub known_max: Option<f64>,
    pub known_argmax: Option<Vec<Vec<f64>>>,
    kernel: Kernel,
}

impl fmt::Debug for BenchmarkSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BenchmarkSpec")
            .field("name", &self.name)
            .field("dims", &self.dims)
            .field("lower", &self.lower)
            .field("upper", &self.upper)
            .field("known_max", &self.known_max)
            .field("known_argmax", &self.known_argmax)
            .finish_non_exhaustive()
    }
}

impl BenchmarkSpec {
    /// Wraps an arbitrary objective. Bounds must satisfy `lower[j] < upper[j]`.
    pub fn custom<F>(name: &str, lower: Vec<f64>, upper: Vec<f64>, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::Config(format!(
                "{name}: bounds must be non-empty and of equal length"
            )));
        }
        if let Some(j) = (0..lower.len()).find(|&j| !(lower[j] < upper[j])) {
            return Err(Error::Config(format!(
                "{name}: lower[{j}] = {} is not below upper[{j}] = {}",
                lower[j], upper[j]
            )));
        }
        Ok(Self {
            name: name.to_string(),
            dims: lower.len(),
            lower,
            upper,
            known_max: None,
            known_argmax: None,
            kernel: Arc::new(f),
        })
    }

    fn with_optimum(mut self, max: f64, argmax: Vec<Vec<f64>>) -> Self {
        self.known_max = Some(max);
        self.known_argmax = Some(argmax);
        self
    }

    /// Evaluates after checking that `x` lies within the bounds.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        self.check_domain(x)?;
        Ok((self.kernel)(x))
    }

    /// Evaluates without a bounds check. Callers clamp beforehand.
    pub fn evaluate_unchecked(&self, x: &[f64]) -> f64 {
        (self.kernel)(x)
    }

    /// Borrowable objective closure for the optimizers.
    pub fn objective(&self) -> impl Fn(&[f64]) -> f64 + Send + Sync + '_ {
        move |x: &[f64]| (self.kernel)(x)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.check_domain(x).is_ok()
    }

    fn check_domain(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dims {
            return Err(Error::Usage(format!(
                "{} expects {} coordinates, got {}",
                self.name,
                self.dims,
                x.len()
            )));
        }
        check_box(&self.name, x, &self.lower, &self.upper)
    }
}

fn check_box(name: &str, x: &[f64], lower: &[f64], upper: &[f64]) -> Result<()> {
    for (j, &v) in x.iter().enumerate() {
        // NaN fails both comparisons and is reported as out of domain.
        if !(v >= lower[j] && v <= upper[j]) {
            return Err(Error::Domain {
                function: name.to_string(),
                index: j,
                value: v,
                lower: lower[j],
                upper: upper[j],
            });
        }
    }
    Ok(())
}

fn check_uniform(name: &str, x: &[f64], lo: f64, hi: f64) -> Result<()> {
    if x.is_empty() {
        return Err(Error::Usage(format!("{name} needs at least one coordinate")));
    }
    let lower = vec![lo; x.len()];
    let upper = vec![hi; x.len()];
    check_box(name, x, &lower, &upper)
}

fn check_pair(name: &str, x: &[f64], lo: f64, hi: f64) -> Result<()> {
    if x.len() != 2 {
        return Err(Error::Usage(format!(
            "{name} is defined for 2 variables, got {}",
            x.len()
        )));
    }
    check_uniform(name, x, lo, hi)
}

fn cosine_mixture_raw(x: &[f64]) -> f64 {
    let waves: f64 = x.iter().map(|&v| (5.0 * PI * v).cos()).sum();
    let bowl: f64 = x.iter().map(|&v| v * v).sum();
    0.1 * waves - bowl
}

fn function_one_raw(x: &[f64]) -> f64 {
    x.iter()
        .map(|&v| (v - 2.0).cos() + (2.0 * v - 4.0).cos() + (4.0 * v - 8.0).cos())
        .sum()
}

fn function_two_raw(x: &[f64]) -> f64 {
    let (a, b) = (x[0], x[1]);
    (1.0 - a / 2.0 + a.powi(5) + b.powi(3)) * (-a * a - b * b).exp()
}

fn matyas_neg_raw(x: &[f64]) -> f64 {
    let (a, b) = (x[0], x[1]);
    -(0.26 * (a * a + b * b) - 0.48 * a * b)
}

fn six_hump_camel_neg_raw(x: &[f64]) -> f64 {
    let (a, b) = (x[0], x[1]);
    let a2 = a * a;
    let b2 = b * b;
    -((4.0 - 2.1 * a2 + a2 * a2 / 3.0) * a2 + a * b + (-4.0 + 4.0 * b2) * b2)
}

/// `0.1 Σ cos(5π x_j) − Σ x_j²` on `[−1, 1]^D`; maximum `0.1·D` at the origin.
pub fn cosine_mixture(x: &[f64]) -> Result<f64> {
    check_uniform("cosine_mixture", x, -1.0, 1.0)?;
    Ok(cosine_mixture_raw(x))
}

/// Sum of three shifted cosines per coordinate on `[−10, 10]^D`; maximum
/// `3·D` at `(2, …, 2)`.
pub fn function_one(x: &[f64]) -> Result<f64> {
    check_uniform("function_one", x, -10.0, 10.0)?;
    Ok(function_one_raw(x))
}

/// `(1 − x₁/2 + x₁⁵ + x₂³)·exp(−x₁² − x₂²)` on `[−10, 10]²`.
pub fn function_two(x: &[f64]) -> Result<f64> {
    check_pair("function_two", x, -10.0, 10.0)?;
    Ok(function_two_raw(x))
}

/// Negated Matyas on `[−10, 10]²`; maximum 0 at the origin.
pub fn matyas_neg(x: &[f64]) -> Result<f64> {
    check_pair("matyas", x, -10.0, 10.0)?;
    Ok(matyas_neg_raw(x))
}

/// Negated standard six-hump camel on `[−3, 3]²`; two maxima of ≈1.0316.
pub fn six_hump_camel_neg(x: &[f64]) -> Result<f64> {
    check_pair("six_hump_camel", x, -3.0, 3.0)?;
    Ok(six_hump_camel_neg_raw(x))
}

const FUNCTION_TWO_MAX: f64 = 1.057_064_385_585_110_7;
const FUNCTION_TWO_ARGMAX: [f64; 2] = [-0.220_043_050_890_094_2, 0.0];
const CAMEL_MAX: f64 = 1.031_628_453_489_877;
const CAMEL_ARGMAX: [f64; 2] = [0.089_842_006_519_373_32, -0.712_656_408_437_096_5];

/// Looks up a registered benchmark at the requested dimensionality.
pub fn get_benchmark(name: &str, dims: usize) -> Result<BenchmarkSpec> {
    if dims == 0 {
        return Err(Error::Config(format!("{name}: dims must be positive")));
    }
    let fixed_2d = |dims: usize| {
        if dims == 2 {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "{name} is only defined for dims = 2 (got {dims})"
            )))
        }
    };
    let spec = match name {
        "cosine_mixture" => BenchmarkSpec::custom(
            name,
            vec![-1.0; dims],
            vec![1.0; dims],
            cosine_mixture_raw,
        )?
        .with_optimum(0.1 * dims as f64, vec![vec![0.0; dims]]),
        "function_one" => BenchmarkSpec::custom(
            name,
            vec![-10.0; dims],
            vec![10.0; dims],
            function_one_raw,
        )?
        .with_optimum(3.0 * dims as f64, vec![vec![2.0; dims]]),
        "function_two" => {
            fixed_2d(dims)?;
            BenchmarkSpec::custom(name, vec![-10.0; 2], vec![10.0; 2], function_two_raw)?
                .with_optimum(FUNCTION_TWO_MAX, vec![FUNCTION_TWO_ARGMAX.to_vec()])
        }
        "matyas" => {
            fixed_2d(dims)?;
            BenchmarkSpec::custom(name, vec![-10.0; 2], vec![10.0; 2], matyas_neg_raw)?
                .with_optimum(0.0, vec![vec![0.0, 0.0]])
        }
        "six_hump_camel" => {
            fixed_2d(dims)?;
            let [a, b] = CAMEL_ARGMAX;
            BenchmarkSpec::custom(name, vec![-3.0; 2], vec![3.0; 2], six_hump_camel_neg_raw)?
                .with_optimum(CAMEL_MAX, vec![vec![a, b], vec![-a, -b]])
        }
        other => return Err(Error::UnknownBenchmark(other.to_string())),
    };
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cosine_mixture_values() {
        assert!((cosine_mixture(&[0.0, 0.0]).unwrap() - 0.2).abs() < 1e-12);
        assert!((cosine_mixture(&[0.0; 4]).unwrap() - 0.4).abs() < 1e-12);
        assert!((cosine_mixture(&[1.0, 1.0]).unwrap() + 2.2).abs() < 1e-12);
    }

    #[test]
    fn function_one_values() {
        assert!((function_one(&[2.0, 2.0]).unwrap() - 6.0).abs() < 1e-12);
        assert!((function_one(&[2.0]).unwrap() - 3.0).abs() < 1e-12);
        // numpy: 2*(cos(-2)+cos(-4)+cos(-8))
        assert!((function_one(&[0.0, 0.0]).unwrap() + 2.430_580_982_438_735_7).abs() < 1e-12);
    }

    #[test]
    fn function_two_values() {
        assert!((function_two(&[-0.225, 0.0]).unwrap() - 1.058).abs() < 1e-3);
        assert_eq!(function_two(&[0.0, 0.0]).unwrap(), 1.0);
        assert!(function_two(&[10.0, 10.0]).unwrap().abs() < 1e-80);
    }

    #[test]
    fn matyas_values() {
        assert_eq!(matyas_neg(&[0.0, 0.0]).unwrap(), 0.0);
        assert!((matyas_neg(&[1.0, 1.0]).unwrap() + 0.04).abs() < 1e-12);
        for a in [-7.5, -1.0, 0.3, 4.0, 10.0] {
            assert!((matyas_neg(&[a, a]).unwrap() + 0.04 * a * a).abs() < 1e-12);
        }
    }

    #[test]
    fn camel_values() {
        let v = six_hump_camel_neg(&[0.0898, -0.7126]).unwrap();
        assert!((v - 1.0316).abs() < 1e-3);
        let w = six_hump_camel_neg(&[-0.0898, 0.7126]).unwrap();
        assert_eq!(v, w);
        assert_eq!(six_hump_camel_neg(&[0.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn out_of_domain_is_rejected() {
        assert!(matches!(
            cosine_mixture(&[1.5, 0.0]),
            Err(Error::Domain { index: 0, .. })
        ));
        assert!(six_hump_camel_neg(&[0.0, 3.1]).is_err());
        assert!(function_two(&[0.0]).is_err());
        assert!(cosine_mixture(&[f64::NAN]).is_err());
        let spec = get_benchmark("matyas", 2).unwrap();
        assert!(spec.evaluate(&[11.0, 0.0]).is_err());
    }

    #[test]
    fn registry_lookup() {
        assert_eq!(get_benchmark("cosine_mixture", 2).unwrap().known_max, Some(0.2));
        assert_eq!(get_benchmark("cosine_mixture", 4).unwrap().known_max, Some(0.4));
        assert!(matches!(get_benchmark("matyas", 3), Err(Error::Config(_))));
        assert!(matches!(
            get_benchmark("rosenbrock", 2),
            Err(Error::UnknownBenchmark(_))
        ));
        assert_eq!(get_benchmark("function_one", 5).unwrap().dims, 5);
    }

    #[test]
    fn registered_optima_hold() {
        for name in REGISTRY {
            for dims in [1, 2, 3] {
                let Ok(spec) = get_benchmark(name, dims) else { continue };
                let max = spec.known_max.unwrap();
                for x in spec.known_argmax.as_ref().unwrap() {
                    let v = spec.evaluate(x).unwrap();
                    assert!((v - max).abs() <= 1e-9, "{name}/{dims}: {v} vs {max}");
                }
            }
        }
    }

    #[test]
    fn no_random_point_beats_the_registered_maximum() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for name in REGISTRY {
            let spec = get_benchmark(name, 2).unwrap();
            let max = spec.known_max.unwrap();
            for _ in 0..10_000 {
                let x: Vec<f64> = (0..2)
                    .map(|j| rng.random_range(spec.lower[j]..=spec.upper[j]))
                    .collect();
                assert!(spec.evaluate(&x).unwrap() <= max + 1e-9, "{name} at {x:?}");
            }
        }
    }

    #[test]
    fn custom_rejects_inverted_bounds() {
        assert!(BenchmarkSpec::custom("bad", vec![1.0], vec![1.0], |_| 0.0).is_err());
        assert!(BenchmarkSpec::custom("bad", vec![], vec![], |_| 0.0).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn separable_functions_are_permutation_symmetric(
                xs in proptest::collection::vec(-1.0f64..=1.0, 2..6),
                rot in 0usize..6,
            ) {
                let mut ys = xs.clone();
                let k = rot % ys.len();
                ys.rotate_left(k);
                ys.reverse();
                let a = cosine_mixture(&xs).unwrap();
                let b = cosine_mixture(&ys).unwrap();
                prop_assert!((a - b).abs() < 1e-12);
                let scaled: Vec<f64> = xs.iter().map(|v| v * 10.0).collect();
                let mut scaled_perm: Vec<f64> = ys.iter().map(|v| v * 10.0).collect();
                scaled_perm.reverse();
                let c = function_one(&scaled).unwrap();
                let d = function_one(&scaled_perm).unwrap();
                let mut sorted_a = scaled.clone();
                let mut sorted_b = scaled_perm.clone();
                sorted_a.sort_by(f64::total_cmp);
                sorted_b.sort_by(f64::total_cmp);
                prop_assert_eq!(sorted_a, sorted_b);
                prop_assert!((c - d).abs() < 1e-12);
            }
        }
    }
}
