//! Initial-state weights `w[i][j] = |c_ij|²`.
//!
//! Only squared magnitudes enter the payoffs, so phases are not stored. For
//! two-strategy games grid indices `0, 1` correspond to the basis labels of
//! the identity and swap outcomes (conventionally labelled `1` and `3`).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Allowed deviation of the weight total from one.
pub const NORMALIZATION_TOL: f64 = 1e-9;
/// Band around zero within which the stability factor counts as zero.
pub const FACTOR_ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct StateWeights {
    n: usize,
    w: Vec<f64>,
}

impl StateWeights {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if !(2..=3).contains(&n) {
            return Err(Error::UnsupportedDimension(n));
        }
        let mut w = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidWeights(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidWeights(format!(
                        "weight ({i}, {j}) = {v} is negative or not finite"
                    )));
                }
            }
            w.extend(row);
        }
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidWeights(format!("normalization violated: sum={sum}")));
        }
        Ok(Self { n, w })
    }

    pub fn from_2x2(rows: [[f64; 2]; 2]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.to_vec()).collect())
    }

    pub fn from_3x3(rows: [[f64; 3]; 3]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.to_vec()).collect())
    }

    /// The unentangled state with `|c_11|² = 1`, under which the quantum game
    /// reproduces the classical one.
    pub fn classical_limit(n: usize) -> Result<Self> {
        if !(2..=3).contains(&n) {
            return Err(Error::UnsupportedDimension(n));
        }
        let mut w = vec![0.0; n * n];
        w[0] = 1.0;
        Ok(Self { n, w })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if !(2..=3).contains(&n) {
            return Err(Error::UnsupportedDimension(n));
        }
        Ok(Self { n, w: vec![1.0 / (n * n) as f64; n * n] })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.w[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.w.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    /// `|w[i][j] − w[j][i]| ≤ tol` off the diagonal: the quantum game is symmetric.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| (self.get(i, j) - self.get(j, i)).abs() <= tol))
    }

    /// `w00 − w01 − w10 + w11`: the factor by which the classical discriminant
    /// is scaled in the quantized two-strategy game.
    pub fn stability_factor(&self) -> Result<f64> {
        self.require_2x2()?;
        Ok(self.get(0, 0) - self.get(0, 1) - self.get(1, 0) + self.get(1, 1))
    }

    /// `w00 + w11 < w01 + w10`, i.e. a strictly negative stability factor.
    pub fn flip_condition_holds(&self) -> Result<bool> {
        Ok(self.stability_factor()? < -FACTOR_ZERO_TOL)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j) == 0.0))
    }

    fn require_2x2(&self) -> Result<()> {
        if self.n != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: self.n });
        }
        Ok(())
    }
}

impl TryFrom<Vec<Vec<f64>>> for StateWeights {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(rows)
    }
}

impl From<StateWeights> for Vec<Vec<f64>> {
    fn from(s: StateWeights) -> Self {
        s.rows()
    }
}
