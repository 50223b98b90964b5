//! Swarm optimizers whose position-update rule is a neural policy trained
//! with PPO.
//!
//! A policy is learned on a benchmark function ([`ppo::train`]) and then
//! frozen and deployed on arbitrary black-box objectives with any number of
//! agents and dimensions ([`deploy::optimize`]). Each agent moves one
//! dimension at a time from a four-value observation of its own best and a
//! random neighbor, so the same network serves every swarm size and
//! dimensionality.
//!
//! Modules:
//! - [`bench`]: analytic benchmark functions (maximization convention)
//! - [`swarm`]: swarm state, observations, reward and exploration schedule
//! - [`neuro`]: small MLPs with backpropagation, Gaussian helpers, Adam
//! - [`ppo`]: rollouts, GAE, clipped PPO objective and the training loop
//! - [`deploy`]: running a frozen policy
//! - [`baselines`]: PSO and DE reference optimizers
//! - [`harness`]: config and policy files, trial runner, CSV summaries

pub mod baselines;
pub mod bench;
pub mod deploy;
pub mod error;
pub mod harness;
pub mod neuro;
pub mod ppo;
pub mod swarm;

pub use error::{Error, Result};
