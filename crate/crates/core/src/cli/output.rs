//! Artifact serialization. JSON numbers use the shortest round-trip form;
//! CSV numbers carry 17 significant digits.

use serde::Serialize;

use super::Command;
use crate::error::Result;
use crate::replicator::{StabilityClass, Trajectory};
use crate::scanner::{flip_fraction, ScanConstraint, ScanGrid, ScanPoint};
use crate::transform::{OperatorSet, QuantumPayoffMatrix};

pub const SCAN_HEADER: [&str; 10] = [
    "w00",
    "w01",
    "w10",
    "w11",
    "classical_disc",
    "quantum_disc",
    "mixed_ne",
    "classical_ess",
    "quantum_ess",
    "flip",
];

#[derive(Debug, Serialize)]
pub struct Meta {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    seed: Option<u64>,
}

impl Meta {
    pub fn new(command: Command, seed: Option<u64>) -> Self {
        Self { tool: "qess", version: env!("CARGO_PKG_VERSION"), command: command.as_str(), seed }
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    meta: &'a Meta,
    result: &'a T,
}

pub fn json<T: Serialize>(meta: &Meta, result: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(&Envelope { meta, result }).expect("artifact serializes");
    out.push(b'\n');
    out
}

#[derive(Debug, Serialize)]
pub struct TransformResult {
    pub operator_set: OperatorSet,
    pub omega: QuantumPayoffMatrix,
}

#[derive(Debug, Serialize)]
pub struct SimulateResult {
    pub trajectory: Trajectory,
    pub classification: Option<StabilityClass>,
}

#[derive(Debug, Serialize)]
pub struct ScanResult<'a> {
    pub resolution: usize,
    pub constraint: ScanConstraint,
    pub flip_fraction: f64,
    pub points: &'a [ScanPoint],
}

impl<'a> ScanResult<'a> {
    pub fn new(grid: &'a ScanGrid) -> Result<Self> {
        Ok(Self {
            resolution: grid.resolution,
            constraint: grid.constraint,
            flip_fraction: flip_fraction(grid)?,
            points: &grid.points,
        })
    }
}

pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn opt_bool(v: Option<bool>) -> String {
    v.map(|b| b.to_string()).unwrap_or_else(|| "na".into())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Vec<u8> {
    w.into_inner().expect("in-memory writer")
}

pub fn scan_csv(grid: &ScanGrid) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SCAN_HEADER).expect("in-memory writer");
    for p in &grid.points {
        let r = &p.report;
        let s = &p.weights;
        w.write_record([
            num(s.get(0, 0)),
            num(s.get(0, 1)),
            num(s.get(1, 0)),
            num(s.get(1, 1)),
            num(r.classical_discriminant),
            num(r.quantum_discriminant),
            opt_num(r.mixed_ne_quantum),
            r.classical_mixed_is_ess.to_string(),
            opt_bool(r.quantum_mixed_is_ess),
            r.flip.to_string(),
        ])
        .expect("in-memory writer");
    }
    finish(w)
}

pub fn trajectory_csv(traj: &Trajectory) -> Vec<u8> {
    let dim = traj.states.first().map_or(0, |s| s.dim());
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<String> =
        std::iter::once("step".to_string()).chain((0..dim).map(|i| format!("x{i}"))).collect();
    w.write_record(&header).expect("in-memory writer");
    for (step, s) in traj.states.iter().enumerate() {
        let row: Vec<String> = std::iter::once(step.to_string()).chain(s.probs().iter().map(|&v| num(v))).collect();
        w.write_record(&row).expect("in-memory writer");
    }
    finish(w)
}

pub fn transform_csv(omega: &QuantumPayoffMatrix) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["mu", "nu", "omega"]).expect("in-memory writer");
    for (mu, row) in omega.rows().iter().enumerate() {
        for (nu, &v) in row.iter().enumerate() {
            w.write_record([mu.to_string(), nu.to_string(), num(v)]).expect("in-memory writer");
        }
    }
    finish(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::PayoffMatrix;
    use crate::scanner::scan;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(-2.0), "-2.0000000000000000e0");
        for v in [0.1, 1.0 / 3.0, -1e-300, 12345.678] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn scan_csv_layout() {
        let alpha = PayoffMatrix::from_2x2([[3.0, 4.0], [2.0, 5.0]]).unwrap();
        let grid = scan(&alpha, 3, ScanConstraint::SymmetricOffDiagonal).unwrap();
        let text = String::from_utf8(scan_csv(&grid)).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "w00,w01,w10,w11,classical_disc,quantum_disc,mixed_ne,classical_ess,quantum_ess,flip"
        );
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(first.len(), 10);
        assert_eq!(first[1].parse::<f64>().unwrap(), 0.5);
        assert_eq!(&first[7..], &["false", "true", "true"]);
        assert_eq!(text.lines().count(), 1 + grid.points.len());
    }
}
