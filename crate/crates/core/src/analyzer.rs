//! Classical versus quantum stability of the interior mixed equilibrium in
//! two-strategy games.
//!
//! For `ω = transform_2x2(α, s)` the discriminants factor as
//! `(ω11 − ω13 − ω31 + ω33) = (α11 − α13 − α31 + α33) · stability_factor(s)`,
//! so the interior equilibrium changes its stability exactly when the state's
//! stability factor is negative.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{self, MixedNe, PayoffMatrix, ESS_TOL};
use crate::state::StateWeights;
use crate::transform::{self, QuantumPayoffMatrix};

/// Off-diagonal tolerance when deciding whether the quantum game is symmetric.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Two mixed equilibria closer than this count as the same point.
pub const NE_MATCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub omega: QuantumPayoffMatrix,
    pub stability_factor: f64,
    pub classical_discriminant: f64,
    pub quantum_discriminant: f64,
    pub mixed_ne_classical: Option<f64>,
    pub mixed_ne_quantum: Option<f64>,
    pub classical_degenerate: bool,
    pub quantum_degenerate: bool,
    /// Both games have a mixed equilibrium and it is the same point.
    pub ne_preserved: bool,
    pub classical_mixed_is_ess: bool,
    /// `None` when the state breaks the symmetry of the quantum game.
    pub quantum_mixed_is_ess: Option<bool>,
    pub flip: bool,
    pub pure_ess_classical: Vec<usize>,
    /// `None` when the state breaks the symmetry of the quantum game.
    pub pure_ess_quantum: Option<Vec<usize>>,
    pub state_symmetric: bool,
}

impl StabilityReport {
    pub fn is_degenerate(&self) -> bool {
        self.classical_degenerate || self.quantum_degenerate
    }
}

/// `ω11 − ω13 − ω31 + ω33`; the interior equilibrium is an ESS when negative.
pub fn quantum_discriminant(omega: &QuantumPayoffMatrix) -> Result<f64> {
    omega.to_game()?.discriminant_2x2()
}

pub fn classical_discriminant(alpha: &PayoffMatrix) -> Result<f64> {
    alpha.discriminant_2x2()
}

pub fn mixed_ne_quantum(omega: &QuantumPayoffMatrix) -> Result<MixedNe> {
    game::find_mixed_ne_2x2(&omega.to_game()?)
}

/// `α33 − α13 = α11 − α31`: the mixed equilibrium sits at `½` in the classical
/// game and in every quantization of it.
pub fn ne_preservation_check(alpha: &PayoffMatrix, tol: f64) -> Result<bool> {
    alpha.require_dim(2)?;
    let lhs = alpha.get(1, 1) - alpha.get(0, 1);
    let rhs = alpha.get(0, 0) - alpha.get(1, 0);
    Ok((lhs - rhs).abs() <= tol)
}

/// Interior-equilibrium verdict of a 2×2 game: `(is_interior, is_ess)`.
///
/// The equilibrium is interior when both pure-strategy payoff gaps at the
/// vertices, `m00 − m10` and `m11 − m01`, are nonzero beyond `tol` and share
/// a sign. It is an ESS when additionally the discriminant is negative. Using
/// the same tolerance as the pure-ESS test keeps the two verdicts consistent.
fn interior_verdict(m: &PayoffMatrix, tol: f64) -> (bool, bool) {
    let left = m.get(0, 0) - m.get(1, 0);
    let right = m.get(1, 1) - m.get(0, 1);
    let interior = left.abs() > tol && right.abs() > tol && (left > 0.0) == (right > 0.0);
    (interior, interior && left < 0.0)
}

pub fn analyze(alpha: &PayoffMatrix, s: &StateWeights) -> Result<StabilityReport> {
    alpha.require_dim(2)?;
    if s.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: s.dim() });
    }
    let omega = transform::transform_2x2(alpha, s)?;
    let quantum_game = omega.to_game()?;

    let classical_ne = game::find_mixed_ne_2x2(alpha)?;
    let quantum_ne = game::find_mixed_ne_2x2(&quantum_game)?;
    let (classical_interior, classical_mixed_is_ess) = interior_verdict(alpha, ESS_TOL);
    let (quantum_interior, quantum_ess) = interior_verdict(&quantum_game, ESS_TOL);

    let ne_preserved = match (classical_ne.value(), quantum_ne.value()) {
        (Some(xc), Some(xq)) => (xc - xq).abs() <= NE_MATCH_TOL,
        _ => false,
    };
    let state_symmetric = s.is_symmetric(SYMMETRY_TOL);
    let flip = state_symmetric
        && classical_interior
        && quantum_interior
        && ne_preserved
        && classical_mixed_is_ess != quantum_ess;

    Ok(StabilityReport {
        stability_factor: s.stability_factor()?,
        classical_discriminant: alpha.discriminant_2x2()?,
        quantum_discriminant: quantum_game.discriminant_2x2()?,
        mixed_ne_classical: classical_ne.value(),
        mixed_ne_quantum: quantum_ne.value(),
        classical_degenerate: classical_ne == MixedNe::Degenerate,
        quantum_degenerate: quantum_ne == MixedNe::Degenerate,
        ne_preserved,
        classical_mixed_is_ess,
        quantum_mixed_is_ess: state_symmetric.then_some(quantum_ess),
        flip,
        pure_ess_classical: game::enumerate_pure_ess(alpha, ESS_TOL),
        pure_ess_quantum: state_symmetric.then(|| game::enumerate_pure_ess(&quantum_game, ESS_TOL)),
        state_symmetric,
        omega,
    })
}
