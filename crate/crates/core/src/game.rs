//! Classical symmetric game primitives.
//!
//! The row player receives `entries[i][j]` when playing `i` against `j`; the
//! column player's payoffs are the transpose, so symmetry is structural.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the equality branches of the ESS conditions.
pub const ESS_TOL: f64 = 1e-9;
/// Componentwise slack allowed outside `[0, 1]` for strategy entries.
pub const COMPONENT_TOL: f64 = 1e-12;
/// Allowed deviation of a strategy's component sum from one.
pub const SUM_TOL: f64 = 1e-9;
/// Default threshold below which a probability counts as zero.
pub const SUPPORT_THRESHOLD: f64 = 1e-12;
/// Default invasion share for numeric spot checks.
pub const DEFAULT_EPSILON: f64 = 1e-3;
/// Grid step used to search for a refuting invader in three-strategy games.
const INVADER_GRID_STEPS: usize = 100;

/// Square payoff matrix of a symmetric two-player game with 2 or 3 strategies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct PayoffMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl PayoffMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if !(2..=3).contains(&n) {
            return Err(Error::UnsupportedDimension(n));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidPayoff(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::InvalidPayoff(format!("entry ({i}, {j}) is not finite")));
            }
            entries.extend(row);
        }
        Ok(Self { n, entries })
    }

    pub fn from_2x2(rows: [[f64; 2]; 2]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.to_vec()).collect())
    }

    pub fn from_3x3(rows: [[f64; 3]; 3]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.to_vec()).collect())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    pub fn min(&self) -> f64 {
        self.entries.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.entries.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `M q`, the payoff of each pure strategy against `q`.
    pub fn apply(&self, q: &[f64]) -> Vec<f64> {
        self.entries
            .chunks(self.n)
            .map(|row| row.iter().zip(q).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `α11 − α13 − α31 + α33` in the two-strategy labelling.
    pub fn discriminant_2x2(&self) -> Result<f64> {
        self.require_dim(2)?;
        Ok(self.get(0, 0) - self.get(0, 1) - self.get(1, 0) + self.get(1, 1))
    }

    pub(crate) fn require_dim(&self, n: usize) -> Result<()> {
        if self.n != n {
            return Err(Error::DimensionMismatch { expected: n, found: self.n });
        }
        Ok(())
    }
}

impl TryFrom<Vec<Vec<f64>>> for PayoffMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(rows)
    }
}

impl From<PayoffMatrix> for Vec<Vec<f64>> {
    fn from(m: PayoffMatrix) -> Self {
        m.rows()
    }
}

/// Probability distribution over pure strategies. Validated, never renormalized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct MixedStrategy {
    probs: Vec<f64>,
}

impl MixedStrategy {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidStrategy("empty probability vector".into()));
        }
        for (i, &p) in probs.iter().enumerate() {
            if !p.is_finite() || p < -COMPONENT_TOL || p > 1.0 + COMPONENT_TOL {
                return Err(Error::InvalidStrategy(format!(
                    "component {i} = {p} lies outside [0, 1]"
                )));
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidStrategy(format!("components sum to {sum}, not 1")));
        }
        Ok(Self { probs })
    }

    pub fn pure(n: usize, i: usize) -> Self {
        assert!(i < n, "pure strategy index {i} out of range for {n} strategies");
        let mut probs = vec![0.0; n];
        probs[i] = 1.0;
        Self { probs }
    }

    /// Two-strategy form `[x, 1 − x]`.
    pub fn from_scalar(x: f64) -> Result<Self> {
        Self::new(vec![x, 1.0 - x])
    }

    pub fn uniform(n: usize) -> Self {
        Self { probs: vec![1.0 / n as f64; n] }
    }

    pub fn dim(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Trusted constructor for values already on the simplex.
    pub(crate) fn from_simplex_unchecked(probs: Vec<f64>) -> Self {
        Self { probs }
    }

    fn distance(&self, other: &Self) -> f64 {
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl TryFrom<Vec<f64>> for MixedStrategy {
    type Error = Error;

    fn try_from(probs: Vec<f64>) -> Result<Self> {
        Self::new(probs)
    }
}

impl From<MixedStrategy> for Vec<f64> {
    fn from(s: MixedStrategy) -> Self {
        s.probs
    }
}

/// Which of the ESS conditions settled the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EssBranch {
    /// Unique best reply to itself: condition (i) holds against every invader.
    StrictNash,
    /// Alternative best replies exist and condition (ii) holds against all of them.
    NeutralStable,
    /// Alternative best replies exist and some of them violate condition (ii).
    NeutralUnstable,
    NotNash,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EssVerdict {
    pub is_nash: bool,
    pub is_ess: bool,
    pub branch: EssBranch,
    /// An invader refuting stability; absent when the strategy is an ESS.
    pub worst_invader: Option<MixedStrategy>,
}

fn check_dims(m: &PayoffMatrix, strategies: &[&MixedStrategy]) -> Result<()> {
    for s in strategies {
        if s.dim() != m.dim() {
            return Err(Error::DimensionMismatch { expected: m.dim(), found: s.dim() });
        }
    }
    Ok(())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `pᵀ M q`.
pub fn expected_payoff(p: &MixedStrategy, q: &MixedStrategy, m: &PayoffMatrix) -> Result<f64> {
    check_dims(m, &[p, q])?;
    Ok(payoff(p.probs(), q.probs(), m))
}

fn payoff(p: &[f64], q: &[f64], m: &PayoffMatrix) -> f64 {
    let n = m.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += m.get(i, j) * p[i] * q[j];
        }
    }
    acc
}

/// True when no pure deviation gains more than `tol` against `p`.
pub fn is_symmetric_nash(p: &MixedStrategy, m: &PayoffMatrix, tol: f64) -> Result<bool> {
    check_dims(m, &[p])?;
    let mp = m.apply(p.probs());
    let own = dot(p.probs(), &mp);
    Ok(mp.iter().all(|&r| r <= own + tol))
}

/// `P[p, (1−ε)p + εq] − P[q, (1−ε)p + εq]`; positive when `p` resists `q` at share `ε`.
pub fn invasion_payoff_difference(
    p: &MixedStrategy,
    q: &MixedStrategy,
    eps: f64,
    m: &PayoffMatrix,
) -> Result<f64> {
    check_dims(m, &[p, q])?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::EpsilonOutOfRange(eps));
    }
    let mix: Vec<f64> = p
        .probs()
        .iter()
        .zip(q.probs())
        .map(|(a, b)| (1.0 - eps) * a + eps * b)
        .collect();
    Ok(payoff(p.probs(), &mix, m) - payoff(q.probs(), &mix, m))
}

pub fn support(p: &MixedStrategy) -> BTreeSet<usize> {
    support_with_threshold(p, SUPPORT_THRESHOLD)
}

pub fn support_with_threshold(p: &MixedStrategy, threshold: f64) -> BTreeSet<usize> {
    p.probs()
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > threshold)
        .map(|(i, _)| i)
        .collect()
}

/// Evolutionary stability of `p` via conditions (i)/(ii).
///
/// After the Nash test, the invaders that tie with `p` against `p` are exactly
/// the mixtures of its best replies `B`. Writing such an invader as `p + z`,
/// condition (ii) reduces to `zᵀ M z < 0` for every feasible direction `z` in
/// the face spanned by `B`, where coordinates outside the support of `p` may
/// only grow. With at most three strategies that cone is a line, a half-plane,
/// a plane or a quadrant, each of which has a closed-form sign test.
pub fn ess_verdict(p: &MixedStrategy, m: &PayoffMatrix, tol: f64) -> Result<EssVerdict> {
    check_dims(m, &[p])?;
    let n = m.dim();
    let probs = p.probs();
    let mp = m.apply(probs);
    let own = dot(probs, &mp);

    let (best, best_payoff) = mp
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, r)| if r > acc.1 { (i, r) } else { acc });
    if best_payoff > own + tol {
        return Ok(EssVerdict {
            is_nash: false,
            is_ess: false,
            branch: EssBranch::NotNash,
            worst_invader: Some(MixedStrategy::pure(n, best)),
        });
    }

    let best_replies: Vec<usize> = (0..n).filter(|&i| mp[i] >= own - tol).collect();
    let supp = support(p);
    if best_replies.len() == 1 {
        return Ok(EssVerdict {
            is_nash: true,
            is_ess: true,
            branch: EssBranch::StrictNash,
            worst_invader: None,
        });
    }

    // Anchor on a support index; supp(p) ⊆ B holds at a Nash equilibrium.
    let anchor = *supp
        .iter()
        .find(|i| best_replies.contains(i))
        .unwrap_or(&best_replies[0]);
    let others: Vec<usize> = best_replies.iter().copied().filter(|&b| b != anchor).collect();
    let quad = |b: usize, c: usize| {
        // (e_b − e_a)ᵀ M (e_c − e_a), symmetrised.
        let a = anchor;
        let form = |x: usize, y: usize| m.get(x, y) - m.get(x, a) - m.get(a, y) + m.get(a, a);
        0.5 * (form(b, c) + form(c, b))
    };

    let stable = match others.as_slice() {
        [b] => quad(*b, *b) < -tol,
        [b, c] => {
            let (g00, g11, g01) = (quad(*b, *b), quad(*c, *c), quad(*b, *c));
            let free = supp.contains(b) || supp.contains(c);
            if free {
                // The feasible cone and its negation cover the whole plane.
                g00 < -tol && g11 < -tol && g00 * g11 - g01 * g01 > tol
            } else {
                // Pure p with both other strategies as best replies: a quadrant.
                g00 < -tol && g11 < -tol && (g01 <= 0.0 || g01 * g01 < g00 * g11 - tol)
            }
        }
        _ => unreachable!("at most three strategies"),
    };

    if stable {
        return Ok(EssVerdict {
            is_nash: true,
            is_ess: true,
            branch: EssBranch::NeutralStable,
            worst_invader: None,
        });
    }
    Ok(EssVerdict {
        is_nash: true,
        is_ess: false,
        branch: EssBranch::NeutralUnstable,
        worst_invader: Some(worst_best_reply_invader(p, m, &best_replies)),
    })
}

/// Minimises `P(p,q) − P(q,q)` over invaders drawn from the best-reply face.
fn worst_best_reply_invader(p: &MixedStrategy, m: &PayoffMatrix, face: &[usize]) -> MixedStrategy {
    let n = m.dim();
    let candidates: Vec<Vec<f64>> = if n == 2 {
        face.iter().map(|&i| MixedStrategy::pure(n, i).probs).collect()
    } else {
        face_grid(n, face, INVADER_GRID_STEPS)
    };
    let mut worst: Option<(f64, Vec<f64>)> = None;
    for q in candidates {
        let cand = MixedStrategy::from_simplex_unchecked(q);
        if cand.distance(p) <= SUPPORT_THRESHOLD {
            continue;
        }
        let margin = payoff(p.probs(), cand.probs(), m) - payoff(cand.probs(), cand.probs(), m);
        if worst.as_ref().is_none_or(|(w, _)| margin < *w) {
            worst = Some((margin, cand.probs));
        }
    }
    let (_, q) = worst.expect("best-reply face has at least two vertices");
    MixedStrategy::from_simplex_unchecked(q)
}

/// Uniform grid of mixtures supported on `face` with `steps` subdivisions.
fn face_grid(n: usize, face: &[usize], steps: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    let mut counts = vec![0usize; face.len()];
    fn rec(
        pos: usize,
        remaining: usize,
        counts: &mut [usize],
        n: usize,
        face: &[usize],
        steps: usize,
        out: &mut Vec<Vec<f64>>,
    ) {
        if pos + 1 == counts.len() {
            counts[pos] = remaining;
            let mut q = vec![0.0; n];
            for (k, &i) in face.iter().enumerate() {
                q[i] = counts[k] as f64 / steps as f64;
            }
            out.push(q);
            return;
        }
        for c in 0..=remaining {
            counts[pos] = c;
            rec(pos + 1, remaining - c, counts, n, face, steps, out);
        }
    }
    rec(0, steps, &mut counts, n, face, steps, &mut out);
    out
}

/// Indices whose pure strategy is an ESS.
pub fn enumerate_pure_ess(m: &PayoffMatrix, tol: f64) -> Vec<usize> {
    (0..m.dim())
        .filter(|&i| {
            ess_verdict(&MixedStrategy::pure(m.dim(), i), m, tol)
                .map(|v| v.is_ess)
                .unwrap_or(false)
        })
        .collect()
}

/// Outcome of the closed-form mixed equilibrium of a 2×2 game.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "x", rename_all = "snake_case")]
pub enum MixedNe {
    /// Isolated equilibrium with first-strategy probability in `[0, 1]`.
    Isolated(f64),
    /// The formula's root lies outside `[0, 1]`.
    OutOfRange(f64),
    /// Zero denominator: no isolated mixed equilibrium.
    Degenerate,
}

impl MixedNe {
    pub fn value(self) -> Option<f64> {
        match self {
            MixedNe::Isolated(x) => Some(x),
            _ => None,
        }
    }
}

/// `x* = (α33 − α13) / (α11 − α13 − α31 + α33)`, the first-strategy probability
/// that equalises both pure payoffs.
pub fn find_mixed_ne_2x2(m: &PayoffMatrix) -> Result<MixedNe> {
    let denom = m.discriminant_2x2()?;
    if denom == 0.0 {
        return Ok(MixedNe::Degenerate);
    }
    let x = (m.get(1, 1) - m.get(0, 1)) / denom;
    if (0.0..=1.0).contains(&x) {
        Ok(MixedNe::Isolated(x))
    } else {
        Ok(MixedNe::OutOfRange(x))
    }
}
