//! Uniform sweeps over two-strategy state weights.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analyzer::{analyze, StabilityReport};
use crate::error::{Error, Result};
use crate::game::PayoffMatrix;
use crate::state::StateWeights;

pub const DEFAULT_RESOLUTION: usize = 51;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanConstraint {
    /// `w01 = w10 = c/2` with `w00 + w11 + c = 1`; every point gives a symmetric game.
    #[default]
    SymmetricOffDiagonal,
    /// All four weights vary independently on the 3-simplex.
    FullSimplex,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    /// Integer grid coordinates: `(i, j, k)` for the symmetric scan,
    /// `(a, b, c, d)` for the full simplex, summing to `resolution − 1`.
    pub index: Vec<usize>,
    pub weights: StateWeights,
    pub report: StabilityReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub resolution: usize,
    pub constraint: ScanConstraint,
    pub points: Vec<ScanPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Serial,
    Parallel,
}

pub fn scan(alpha: &PayoffMatrix, resolution: usize, constraint: ScanConstraint) -> Result<ScanGrid> {
    scan_with(alpha, resolution, constraint, Execution::Parallel)
}

pub fn scan_with(
    alpha: &PayoffMatrix,
    resolution: usize,
    constraint: ScanConstraint,
    execution: Execution,
) -> Result<ScanGrid> {
    alpha.require_dim(2)?;
    if resolution < 2 {
        return Err(Error::InvalidResolution(resolution));
    }
    let cells = grid_indices(resolution - 1, constraint);
    let eval = |index: Vec<usize>| -> Result<ScanPoint> {
        let weights = weights_at(&index, resolution - 1, constraint)?;
        let report = analyze(alpha, &weights)?;
        Ok(ScanPoint { index, weights, report })
    };
    let points = match execution {
        Execution::Serial => cells.into_iter().map(eval).collect::<Result<Vec<_>>>()?,
        Execution::Parallel => cells.into_par_iter().map(eval).collect::<Result<Vec<_>>>()?,
    };
    Ok(ScanGrid { resolution, constraint, points })
}

/// Lexicographic compositions of `total` into 3 or 4 parts.
fn grid_indices(total: usize, constraint: ScanConstraint) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    match constraint {
        ScanConstraint::SymmetricOffDiagonal => {
            for i in 0..=total {
                for j in 0..=total - i {
                    out.push(vec![i, j, total - i - j]);
                }
            }
        }
        ScanConstraint::FullSimplex => {
            for a in 0..=total {
                for b in 0..=total - a {
                    for c in 0..=total - a - b {
                        out.push(vec![a, b, c, total - a - b - c]);
                    }
                }
            }
        }
    }
    out
}

fn weights_at(index: &[usize], total: usize, constraint: ScanConstraint) -> Result<StateWeights> {
    let frac = |k: usize| k as f64 / total as f64;
    match constraint {
        ScanConstraint::SymmetricOffDiagonal => {
            let half = frac(index[2]) / 2.0;
            StateWeights::from_2x2([[frac(index[0]), half], [half, frac(index[1])]])
        }
        ScanConstraint::FullSimplex => StateWeights::from_2x2([
            [frac(index[0]), frac(index[1])],
            [frac(index[2]), frac(index[3])],
        ]),
    }
}

pub fn flip_fraction(grid: &ScanGrid) -> Result<f64> {
    if grid.points.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let flips = grid.points.iter().filter(|p| p.report.flip).count();
    Ok(flips as f64 / grid.points.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coordination() -> PayoffMatrix {
        PayoffMatrix::from_2x2([[3.0, 4.0], [2.0, 5.0]]).unwrap()
    }

    #[test]
    fn coarse_symmetric_scan() {
        let g = scan(&coordination(), 3, ScanConstraint::SymmetricOffDiagonal).unwrap();
        let idx: Vec<_> = g.points.iter().map(|p| p.index.clone()).collect();
        assert_eq!(
            idx,
            vec![
                vec![0, 0, 2],
                vec![0, 1, 1],
                vec![0, 2, 0],
                vec![1, 0, 1],
                vec![1, 1, 0],
                vec![2, 0, 0]
            ]
        );
        let flips: Vec<bool> = g.points.iter().map(|p| p.report.flip).collect();
        // Only the all-off-diagonal corner has w00 + w11 < w01 + w10; the
        // points with w00 + w11 = ½ sit on the boundary.
        assert_eq!(flips, vec![true, false, false, false, false, false]);
    }

    #[test]
    fn classical_corner_never_flips() {
        let g = scan(&coordination(), 2, ScanConstraint::SymmetricOffDiagonal).unwrap();
        let corner = g.points.iter().find(|p| p.index == vec![1, 0, 0]).unwrap();
        assert_eq!(corner.weights, StateWeights::classical_limit(2).unwrap());
        assert!(!corner.report.flip);
    }

    #[test]
    fn zero_discriminant_never_flips() {
        let flat = PayoffMatrix::from_2x2([[1.0, 2.0], [3.0, 4.0]]).unwrap();
        let g = scan(&flat, 11, ScanConstraint::SymmetricOffDiagonal).unwrap();
        assert_eq!(flip_fraction(&g).unwrap(), 0.0);
    }

    #[test]
    fn full_simplex_marks_asymmetric_points() {
        let g = scan(&coordination(), 5, ScanConstraint::FullSimplex).unwrap();
        assert_eq!(g.points.len(), 35);
        for p in &g.points {
            let sym = p.index[1] == p.index[2];
            assert_eq!(p.report.state_symmetric, sym, "{:?}", p.index);
            if !sym {
                assert!(!p.report.flip);
            }
        }
    }

    #[test]
    fn fraction_edge_cases() {
        let empty = ScanGrid { resolution: 2, constraint: ScanConstraint::SymmetricOffDiagonal, points: vec![] };
        assert_eq!(flip_fraction(&empty), Err(Error::EmptyGrid));
        let mut g = scan(&coordination(), 2, ScanConstraint::SymmetricOffDiagonal).unwrap();
        g.points.retain(|p| p.report.flip);
        assert_eq!(flip_fraction(&g).unwrap(), 1.0);
    }

    #[test]
    fn invalid_inputs() {
        assert_eq!(
            scan(&coordination(), 1, ScanConstraint::SymmetricOffDiagonal).unwrap_err(),
            Error::InvalidResolution(1)
        );
        let three = PayoffMatrix::from_3x3([[0.0; 3]; 3]).unwrap();
        assert!(scan(&three, 5, ScanConstraint::SymmetricOffDiagonal).is_err());
    }
}
