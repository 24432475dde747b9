#![allow(dead_code)]

use qess_core::{MixedStrategy, OperatorSet, PayoffMatrix, StateWeights};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_alpha(rng: &mut impl Rng, n: usize, scale: f64) -> PayoffMatrix {
    let rows = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-scale..=scale)).collect()).collect();
    PayoffMatrix::new(rows).unwrap()
}

pub fn random_weights(rng: &mut impl Rng, n: usize) -> StateWeights {
    let raw: Vec<f64> = (0..n * n).map(|_| rng.gen_range(0.0..1.0)).collect();
    let total: f64 = raw.iter().sum();
    StateWeights::new(raw.chunks(n).map(|r| r.iter().map(|v| v / total).collect()).collect()).unwrap()
}

/// Two-strategy weights with `w01 = w10`.
pub fn random_symmetric_weights(rng: &mut impl Rng) -> StateWeights {
    let (a, b, c): (f64, f64, f64) = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
    let total = a + b + 2.0 * c;
    StateWeights::from_2x2([[a / total, c / total], [c / total, b / total]]).unwrap()
}

/// Identity followed by 1–3 random permutations, often not self-inverse.
pub fn random_operators(rng: &mut impl Rng, n: usize) -> OperatorSet {
    let mut perms = vec![(0..n).collect::<Vec<_>>()];
    for _ in 0..rng.gen_range(1..=3) {
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(rng);
        perms.push(p);
    }
    OperatorSet::new(perms).unwrap()
}

pub fn payoff(p: &[f64], q: &[f64], m: &PayoffMatrix) -> f64 {
    let mut acc = 0.0;
    for i in 0..m.dim() {
        for j in 0..m.dim() {
            acc += p[i] * m.get(i, j) * q[j];
        }
    }
    acc
}

/// Brute-force ESS test for a two-strategy game: `p` must satisfy condition
/// (i), or the tie of (i) together with (ii), against every invader on a
/// uniform grid of step `step`.
pub fn brute_force_ess_2x2(x: f64, m: &PayoffMatrix, step: f64, tol: f64) -> bool {
    let p = [x, 1.0 - x];
    let n = (1.0 / step).round() as usize;
    (0..=n).map(|k| k as f64 / n as f64).filter(|y| (y - x).abs() > step / 2.0).all(|y| {
        let q = [y, 1.0 - y];
        let first = payoff(&p, &p, m) - payoff(&q, &p, m);
        let second = payoff(&p, &q, m) - payoff(&q, &q, m);
        first > tol || (first >= -tol && second > tol)
    })
}

/// Brute-force ESS test on the 3-simplex grid.
pub fn brute_force_ess_3x3(p: &MixedStrategy, m: &PayoffMatrix, steps: usize, tol: f64) -> bool {
    let p = p.probs();
    for i in 0..=steps {
        for j in 0..=steps - i {
            let q = [i as f64 / steps as f64, j as f64 / steps as f64, (steps - i - j) as f64 / steps as f64];
            if q.iter().zip(p).all(|(a, b)| (a - b).abs() <= 0.5 / steps as f64) {
                continue;
            }
            let first = payoff(p, p, m) - payoff(&q, p, m);
            let second = payoff(p, &q, m) - payoff(&q, &q, m);
            if !(first > tol || (first >= -tol && second > tol)) {
                return false;
            }
        }
    }
    true
}

/// Coefficient table of the three-strategy scheme: row `(k,l)` of the
/// classical payoff `α_kl`, column `(μ,ν)` of `ω_μν`, entry = the weight
/// `|c_ij|²` multiplying it, written as 1-based labels `ij`.
pub const COEFFICIENT_TABLE: [[u8; 9]; 9] = [
    [11, 12, 13, 21, 22, 23, 31, 32, 33],
    [12, 11, 12, 22, 21, 22, 32, 31, 32],
    [13, 13, 11, 23, 23, 21, 33, 33, 31],
    [21, 22, 23, 11, 12, 13, 21, 22, 23],
    [22, 21, 22, 12, 11, 12, 22, 21, 22],
    [23, 23, 21, 13, 13, 11, 23, 23, 21],
    [31, 32, 33, 31, 32, 33, 11, 12, 13],
    [32, 31, 32, 32, 31, 32, 12, 11, 12],
    [33, 33, 31, 33, 33, 31, 13, 13, 11],
];

pub fn table_weight(s: &StateWeights, label: u8) -> f64 {
    s.get((label / 10 - 1) as usize, (label % 10 - 1) as usize)
}
