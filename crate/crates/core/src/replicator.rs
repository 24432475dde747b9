//! Replicator dynamics `ẋ_i = x_i [(Mx)_i − xᵀMx]`, integrated with explicit
//! Euler steps and projected back onto the simplex after each step.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{MixedStrategy, PayoffMatrix};

const MONOTONE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DynamicsParams {
    pub dt: f64,
    pub steps: usize,
    pub perturbation: f64,
    /// Distance to the equilibrium that counts as converged.
    pub tolerance: f64,
}

impl Default for DynamicsParams {
    fn default() -> Self {
        Self { dt: 0.01, steps: 5000, perturbation: 1e-2, tolerance: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    /// Initial state followed by one state per step.
    pub states: Vec<MixedStrategy>,
    pub dt: f64,
    pub steps: usize,
}

impl Trajectory {
    pub fn last(&self) -> &MixedStrategy {
        self.states.last().expect("trajectory holds the initial state")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StabilityClass {
    Attracting,
    Repelling,
    Inconclusive,
}

pub fn replicator_step(x: &MixedStrategy, m: &PayoffMatrix, dt: f64) -> Result<MixedStrategy> {
    if x.dim() != m.dim() {
        return Err(Error::DimensionMismatch { expected: m.dim(), found: x.dim() });
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidDynamics(format!("dt must be positive, got {dt}")));
    }
    Ok(step_unchecked(x.probs(), m, dt))
}

fn step_unchecked(x: &[f64], m: &PayoffMatrix, dt: f64) -> MixedStrategy {
    let fitness = m.apply(x);
    let mean: f64 = x.iter().zip(&fitness).map(|(a, f)| a * f).sum();
    let mut next: Vec<f64> = x
        .iter()
        .zip(&fitness)
        .map(|(&xi, &fi)| (xi + dt * xi * (fi - mean)).max(0.0))
        .collect();
    let total: f64 = next.iter().sum();
    for v in &mut next {
        *v /= total;
    }
    MixedStrategy::from_simplex_unchecked(next)
}

pub fn simulate(x0: &MixedStrategy, m: &PayoffMatrix, dt: f64, steps: usize) -> Result<Trajectory> {
    if steps == 0 {
        return Err(Error::InvalidDynamics("steps must be at least 1".into()));
    }
    let mut states = Vec::with_capacity(steps + 1);
    states.push(x0.clone());
    states.push(replicator_step(x0, m, dt)?);
    for _ in 1..steps {
        let next = step_unchecked(states.last().unwrap().probs(), m, dt);
        states.push(next);
    }
    Ok(Trajectory { states, dt, steps })
}

/// Perturbs a two-strategy equilibrium `x_star` (first-strategy probability)
/// both ways and follows the flow.
///
/// `Attracting` when both runs end within `tolerance` of `x_star`;
/// `Repelling` when both distances grow monotonically past twice the
/// perturbation; `Inconclusive` otherwise.
pub fn classify_stability(m: &PayoffMatrix, x_star: f64, params: &DynamicsParams) -> Result<StabilityClass> {
    m.require_dim(2)?;
    let DynamicsParams { dt, steps, perturbation, tolerance } = *params;
    if !(perturbation > 0.0) {
        return Err(Error::InvalidDynamics(format!("perturbation must be positive, got {perturbation}")));
    }
    if !(x_star - perturbation > 0.0 && x_star + perturbation < 1.0) {
        return Err(Error::NearBoundary { x_star, perturbation });
    }

    let mut attracting = true;
    let mut repelling = true;
    for start in [x_star - perturbation, x_star + perturbation] {
        let traj = simulate(&MixedStrategy::from_scalar(start)?, m, dt, steps)?;
        let dist: Vec<f64> = traj.states.iter().map(|s| (s.probs()[0] - x_star).abs()).collect();
        let last = *dist.last().unwrap();
        attracting &= last <= tolerance;
        // Rounding near a vertex can shave an ulp off the distance.
        let monotone = dist.windows(2).all(|w| w[1] >= w[0] - MONOTONE_SLACK);
        repelling &= monotone && last > 2.0 * perturbation;
    }
    Ok(match (attracting, repelling) {
        (true, _) => StabilityClass::Attracting,
        (false, true) => StabilityClass::Repelling,
        _ => StabilityClass::Inconclusive,
    })
}
