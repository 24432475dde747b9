//! Quantum payoff matrix construction.
//!
//! Operator `μ` relabels basis state `i` as `π_μ(i)`. When the row player
//! applies `μ` and the column player `ν` to the shared state, outcome `(k, l)`
//! is observed with probability `w[π_μ⁻¹(k)][π_ν⁻¹(l)]`, so
//!
//! ```text
//! ω[μ][ν] = Σ_{k,l} α[k][l] · w[π_μ⁻¹(k)][π_ν⁻¹(l)]
//! ```
//!
//! With the `rsp3` operators `(I, D, C)` this reproduces the nine-by-nine
//! coefficient table of the three-strategy scheme entry for entry.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::PayoffMatrix;
use crate::state::StateWeights;

/// Ordered basis permutations, one per available operator. The first is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct OperatorSet {
    n: usize,
    perms: Vec<Vec<usize>>,
}

impl OperatorSet {
    pub fn new(perms: Vec<Vec<usize>>) -> Result<Self> {
        let first = perms
            .first()
            .ok_or_else(|| Error::InvalidOperators("at least one operator is required".into()))?;
        let n = first.len();
        for (mu, perm) in perms.iter().enumerate() {
            if perm.len() != n {
                return Err(Error::InvalidOperators(format!(
                    "operator {mu} acts on {} labels, expected {n}",
                    perm.len()
                )));
            }
            let mut seen = vec![false; n];
            for &target in perm {
                if target >= n || std::mem::replace(&mut seen[target], true) {
                    return Err(Error::InvalidOperators(format!("operator {mu} is not a bijection")));
                }
            }
        }
        if first.iter().enumerate().any(|(i, &t)| i != t) {
            return Err(Error::InvalidOperators("operator 0 must be the identity".into()));
        }
        Ok(Self { n, perms })
    }

    /// `I`, `D = swap(0,1)`, `C = swap(0,2)` on three labels.
    pub fn rsp3() -> Self {
        Self { n: 3, perms: vec![vec![0, 1, 2], vec![1, 0, 2], vec![2, 1, 0]] }
    }

    /// `I` and `C = swap(0,1)` on two labels.
    pub fn id_swap2() -> Self {
        Self { n: 2, perms: vec![vec![0, 1], vec![1, 0]] }
    }

    /// The preset matching a basis size.
    pub fn default_for(n: usize) -> Result<Self> {
        match n {
            2 => Ok(Self::id_swap2()),
            3 => Ok(Self::rsp3()),
            other => Err(Error::UnsupportedDimension(other)),
        }
    }

    pub fn basis_size(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }

    pub fn perms(&self) -> &[Vec<usize>] {
        &self.perms
    }

    pub fn inverses(&self) -> Vec<Vec<usize>> {
        self.perms
            .iter()
            .map(|perm| {
                let mut inv = vec![0; perm.len()];
                for (i, &t) in perm.iter().enumerate() {
                    inv[t] = i;
                }
                inv
            })
            .collect()
    }
}

impl TryFrom<Vec<Vec<usize>>> for OperatorSet {
    type Error = Error;

    fn try_from(perms: Vec<Vec<usize>>) -> Result<Self> {
        Self::new(perms)
    }
}

impl From<OperatorSet> for Vec<Vec<usize>> {
    fn from(ops: OperatorSet) -> Self {
        ops.perms
    }
}

/// Effective payoffs `ω[μ][ν]` over operator choices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QuantumPayoffMatrix {
    m: Vec<Vec<f64>>,
}

impl QuantumPayoffMatrix {
    pub fn from_rows(m: Vec<Vec<f64>>) -> Result<Self> {
        let k = m.len();
        if k == 0 || m.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidPayoff("quantum payoff matrix must be square".into()));
        }
        if m.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidPayoff("quantum payoff matrix has non-finite entries".into()));
        }
        Ok(Self { m })
    }

    pub fn dim(&self) -> usize {
        self.m.len()
    }

    pub fn get(&self, mu: usize, nu: usize) -> f64 {
        self.m[mu][nu]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.m
    }

    /// The matrix as an ordinary symmetric game over operator choices.
    pub fn to_game(&self) -> Result<PayoffMatrix> {
        PayoffMatrix::new(self.m.clone())
    }
}

fn check_shapes(alpha: &PayoffMatrix, s: &StateWeights, ops: &OperatorSet) -> Result<()> {
    if s.dim() != alpha.dim() {
        return Err(Error::DimensionMismatch { expected: alpha.dim(), found: s.dim() });
    }
    if ops.basis_size() != alpha.dim() {
        return Err(Error::DimensionMismatch { expected: alpha.dim(), found: ops.basis_size() });
    }
    Ok(())
}

pub fn transform(alpha: &PayoffMatrix, s: &StateWeights, ops: &OperatorSet) -> Result<QuantumPayoffMatrix> {
    check_shapes(alpha, s, ops)?;
    let n = alpha.dim();
    let inv = ops.inverses();
    let m = inv
        .iter()
        .map(|row_inv| {
            inv.iter()
                .map(|col_inv| {
                    let mut acc = 0.0;
                    for k in 0..n {
                        for l in 0..n {
                            acc += alpha.get(k, l) * s.get(row_inv[k], col_inv[l]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    Ok(QuantumPayoffMatrix { m })
}

/// Closed-form two-strategy map. Conventional labels `1, 3` are grid indices `0, 1`.
pub fn transform_2x2(alpha: &PayoffMatrix, s: &StateWeights) -> Result<QuantumPayoffMatrix> {
    alpha.require_dim(2)?;
    if s.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: s.dim() });
    }
    let (a11, a13, a31, a33) = (alpha.get(0, 0), alpha.get(0, 1), alpha.get(1, 0), alpha.get(1, 1));
    let (c11, c13, c31, c33) = (s.get(0, 0), s.get(0, 1), s.get(1, 0), s.get(1, 1));
    // Summed in α11, α13, α31, α33 order so the result matches `transform` bit for bit.
    let w11 = a11 * c11 + a13 * c13 + a31 * c31 + a33 * c33;
    let w13 = a11 * c13 + a13 * c11 + a31 * c33 + a33 * c31;
    let w31 = a11 * c31 + a13 * c33 + a31 * c11 + a33 * c13;
    let w33 = a11 * c33 + a13 * c31 + a31 * c13 + a33 * c11;
    Ok(QuantumPayoffMatrix { m: vec![vec![w11, w13], vec![w31, w33]] })
}

/// Independent route: physically relabel the weight grid for each operator
/// pair, then take the Frobenius inner product with `α`.
pub fn oracle_transform(
    alpha: &PayoffMatrix,
    s: &StateWeights,
    ops: &OperatorSet,
) -> Result<QuantumPayoffMatrix> {
    check_shapes(alpha, s, ops)?;
    let n = alpha.dim();
    let mut m = vec![vec![0.0; ops.len()]; ops.len()];
    for (mu, row_perm) in ops.perms().iter().enumerate() {
        for (nu, col_perm) in ops.perms().iter().enumerate() {
            let mut moved = vec![vec![0.0; n]; n];
            for i in 0..n {
                for j in 0..n {
                    moved[row_perm[i]][col_perm[j]] = s.get(i, j);
                }
            }
            m[mu][nu] = moved
                .iter()
                .enumerate()
                .flat_map(|(k, row)| row.iter().enumerate().map(move |(l, &p)| (k, l, p)))
                .map(|(k, l, p)| alpha.get(k, l) * p)
                .sum();
        }
    }
    Ok(QuantumPayoffMatrix { m })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha() -> PayoffMatrix {
        PayoffMatrix::from_2x2([[3.0, 4.0], [2.0, 5.0]]).unwrap()
    }

    #[test]
    fn operator_validation() {
        assert!(OperatorSet::new(vec![]).is_err());
        assert!(OperatorSet::new(vec![vec![1, 0]]).is_err());
        assert!(OperatorSet::new(vec![vec![0, 1], vec![0, 0]]).is_err());
        assert!(OperatorSet::new(vec![vec![0, 1], vec![0, 2]]).is_err());
        assert!(OperatorSet::new(vec![vec![0, 1, 2], vec![1, 0]]).is_err());
        // A 3-cycle is not self-inverse but is allowed.
        let cyc = OperatorSet::new(vec![vec![0, 1, 2], vec![1, 2, 0]]).unwrap();
        assert_eq!(cyc.inverses()[1], vec![2, 0, 1]);
    }

    #[test]
    fn classical_limit_recovers_alpha() {
        let s = StateWeights::classical_limit(2).unwrap();
        let w = transform(&alpha(), &s, &OperatorSet::id_swap2()).unwrap();
        assert_eq!(w.rows(), alpha().rows().as_slice());
        assert_eq!(transform_2x2(&alpha(), &s).unwrap(), w);
    }

    #[test]
    fn uniform_weights_give_mean() {
        let a = PayoffMatrix::from_3x3([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [7.0, 8.0, 9.0]]).unwrap();
        let w = transform(&a, &StateWeights::uniform(3).unwrap(), &OperatorSet::rsp3()).unwrap();
        for v in w.rows().iter().flatten() {
            assert!((v - 5.0).abs() < 1e-12, "{v}");
        }
    }

    #[test]
    fn off_diagonal_state_example() {
        let s = StateWeights::from_2x2([[0.0, 0.5], [0.5, 0.0]]).unwrap();
        let expected = vec![vec![3.0, 4.0], vec![4.0, 3.0]];
        assert_eq!(transform_2x2(&alpha(), &s).unwrap().rows(), expected.as_slice());
        assert_eq!(transform(&alpha(), &s, &OperatorSet::id_swap2()).unwrap().rows(), expected.as_slice());
        assert_eq!(oracle_transform(&alpha(), &s, &OperatorSet::id_swap2()).unwrap().rows(), expected.as_slice());
    }

    #[test]
    fn diagonal_state_averages() {
        let a = PayoffMatrix::from_2x2([[1.0, -2.0], [7.0, 0.5]]).unwrap();
        let s = StateWeights::from_2x2([[0.5, 0.0], [0.0, 0.5]]).unwrap();
        let w = transform_2x2(&a, &s).unwrap();
        assert_eq!(w.get(0, 0), (1.0 + 0.5) / 2.0);
        assert_eq!(w.get(1, 1), (1.0 + 0.5) / 2.0);
        assert_eq!(w.get(0, 1), (-2.0 + 7.0) / 2.0);
        assert_eq!(w.get(1, 0), (-2.0 + 7.0) / 2.0);
    }

    #[test]
    fn shape_mismatches() {
        let s3 = StateWeights::classical_limit(3).unwrap();
        assert!(transform(&alpha(), &s3, &OperatorSet::id_swap2()).is_err());
        let s2 = StateWeights::classical_limit(2).unwrap();
        assert!(transform(&alpha(), &s2, &OperatorSet::rsp3()).is_err());
        assert!(transform_2x2(&alpha(), &s3).is_err());
        assert!(oracle_transform(&alpha(), &s3, &OperatorSet::id_swap2()).is_err());
    }

    #[test]
    fn to_game_requires_supported_size() {
        let one = OperatorSet::new(vec![vec![0, 1]]).unwrap();
        let w = transform(&alpha(), &StateWeights::classical_limit(2).unwrap(), &one).unwrap();
        assert_eq!(w.dim(), 1);
        assert!(w.to_game().is_err());
    }
}
