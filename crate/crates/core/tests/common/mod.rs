//! Test-only oracles, independent of the code paths they check.
#![allow(dead_code)]

use swarm_rl::neuro::Mlp;

/// Central finite differences of `f` with respect to every parameter of `net`.
pub fn finite_difference<F: Fn(&Mlp) -> f64>(net: &Mlp, f: F, h: f64) -> Vec<f64> {
    let n = net.param_count();
    let mut probe = net.clone();
    (0..n)
        .map(|k| {
            let orig = *probe.params_mut().nth(k).unwrap();
            *probe.params_mut().nth(k).unwrap() = orig + h;
            let up = f(&probe);
            *probe.params_mut().nth(k).unwrap() = orig - h;
            let down = f(&probe);
            *probe.params_mut().nth(k).unwrap() = orig;
            (up - down) / (2.0 * h)
        })
        .collect()
}

/// Largest `|a − n| / max(|a|, |n|, floor)` over paired entries.
pub fn max_relative_error<'a>(analytic: impl Iterator<Item = &'a f64>, numeric: &[f64], floor: f64) -> f64 {
    analytic
        .zip(numeric)
        .map(|(a, n)| (a - n).abs() / a.abs().max(n.abs()).max(floor))
        .fold(0.0, f64::max)
}

/// Advantage by direct summation of discounted TD residuals within one chain.
pub fn gae_by_summation(rewards: &[f64], values: &[f64], gamma: f64, lambda: f64) -> Vec<f64> {
    let n = rewards.len();
    let delta = |t: usize| {
        let next = if t + 1 < n { values[t + 1] } else { 0.0 };
        rewards[t] + gamma * next - values[t]
    };
    (0..n)
        .map(|t| (t..n).map(|l| (gamma * lambda).powi((l - t) as i32) * delta(l)).sum())
        .collect()
}
