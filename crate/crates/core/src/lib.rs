//! Quantized symmetric matrix games.
//!
//! A classical symmetric game `α` is played on a shared initial state whose
//! squared coefficient magnitudes are held in [`StateWeights`]. Players apply
//! basis-permuting operators drawn from an [`OperatorSet`], which yields an
//! effective payoff matrix `ω` over operator choices. The crate computes
//! mixed Nash equilibria and evolutionary-stability verdicts for both forms
//! and locates the weights for which the stability of the mixed equilibrium
//! flips between them.
//!
//! Index convention for two-strategy games: grid indices `0` and `1` stand
//! for the identity operator and the swap operator respectively, so a scalar
//! strategy `x` is the probability of playing index `0`.

pub mod analyzer;
pub mod cli;
mod error;
pub mod game;
pub mod replicator;
pub mod scanner;
pub mod state;
pub mod transform;

pub use analyzer::{analyze, StabilityReport};
pub use error::{Error, Result};
pub use game::{EssBranch, EssVerdict, MixedNe, MixedStrategy, PayoffMatrix};
pub use replicator::{StabilityClass, Trajectory};
pub use scanner::{ScanConstraint, ScanGrid, ScanPoint};
pub use state::StateWeights;
pub use transform::{OperatorSet, QuantumPayoffMatrix};
