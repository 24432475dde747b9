//! JSON run configuration and its validation.
//!
//! Validation walks the document field by field so that every problem is
//! reported at once, each tagged with the path of the offending field.

use std::fmt;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::game::{MixedStrategy, PayoffMatrix};
use crate::replicator::DynamicsParams;
use crate::scanner::{ScanConstraint, DEFAULT_RESOLUTION};
use crate::state::StateWeights;
use crate::transform::OperatorSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Analyze,
    Transform,
    Simulate,
    Scan,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Transform => "transform",
            Command::Simulate => "simulate",
            Command::Scan => "scan",
        }
    }

    pub fn default_format(self) -> Format {
        match self {
            Command::Scan => Format::Csv,
            _ => Format::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OperatorPreset {
    #[serde(rename = "rsp3")]
    Rsp3,
    #[serde(rename = "id-swap2")]
    IdSwap2,
}

/// A named preset or an explicit list of permutations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OperatorSpec {
    Preset(OperatorPreset),
    Explicit(OperatorSet),
}

impl OperatorSpec {
    pub fn resolve(&self) -> OperatorSet {
        match self {
            OperatorSpec::Preset(OperatorPreset::Rsp3) => OperatorSet::rsp3(),
            OperatorSpec::Preset(OperatorPreset::IdSwap2) => OperatorSet::id_swap2(),
            OperatorSpec::Explicit(ops) => ops.clone(),
        }
    }
}

/// Which payoff matrix drives the dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GameForm {
    Classical,
    Quantum,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicsConfig {
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<MixedStrategy>,
    #[serde(default = "default_perturbation")]
    pub perturbation: f64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    /// Defaults to `quantum` when weights are given, `classical` otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub game: Option<GameForm>,
}

fn default_dt() -> f64 {
    DynamicsParams::default().dt
}
fn default_steps() -> usize {
    DynamicsParams::default().steps
}
fn default_perturbation() -> f64 {
    DynamicsParams::default().perturbation
}
fn default_tolerance() -> f64 {
    DynamicsParams::default().tolerance
}

impl DynamicsConfig {
    pub fn params(&self) -> DynamicsParams {
        DynamicsParams {
            dt: self.dt,
            steps: self.steps,
            perturbation: self.perturbation,
            tolerance: self.tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    #[serde(default = "default_resolution")]
    pub resolution: usize,
    #[serde(default)]
    pub constraint: ScanConstraint,
}

fn default_resolution() -> usize {
    DEFAULT_RESOLUTION
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self { resolution: DEFAULT_RESOLUTION, constraint: ScanConstraint::default() }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub command: Command,
    pub alpha: PayoffMatrix,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<StateWeights>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub operator_set: Option<OperatorSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dynamics: Option<DynamicsConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputConfig>,
}

impl RunConfig {
    /// Operators to use, falling back to the preset for the game's size.
    pub fn operators(&self) -> OperatorSet {
        match &self.operator_set {
            Some(spec) => spec.resolve(),
            None if self.alpha.dim() == 3 => OperatorSet::rsp3(),
            None => OperatorSet::id_swap2(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub field: String,
    pub message: String,
}

impl Diagnostic {
    fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self { field: field.into(), message: message.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

const KNOWN_FIELDS: &[&str] =
    &["description", "command", "alpha", "weights", "operator_set", "dynamics", "scan", "output"];

/// Parses and checks a config document, collecting every diagnostic.
pub fn validate(text: &str) -> Result<RunConfig, Vec<Diagnostic>> {
    let doc: Value = serde_json::from_str(text).map_err(|e| {
        vec![Diagnostic::new(
            "(syntax)",
            format!("line {} column {}: {}", e.line(), e.column(), strip_position(&e.to_string())),
        )]
    })?;
    let Value::Object(obj) = doc else {
        return Err(vec![Diagnostic::new("(root)", "expected a JSON object")]);
    };

    let mut diags = Vec::new();
    for key in obj.keys().filter(|k| !KNOWN_FIELDS.contains(&k.as_str())) {
        diags.push(Diagnostic::new(key.clone(), "unknown field"));
    }

    let description = optional::<String>(&obj, "description", &mut diags);
    let command = required::<Command>(&obj, "command", &mut diags);
    let alpha = required::<Vec<Vec<f64>>>(&obj, "alpha", &mut diags)
        .and_then(|rows| lift(PayoffMatrix::new(rows), "alpha", &mut diags));
    let weights = optional::<Vec<Vec<f64>>>(&obj, "weights", &mut diags)
        .and_then(|rows| lift(StateWeights::new(rows), "weights", &mut diags));
    let operator_set = optional_raw(&obj, "operator_set").and_then(|v| parse_operators(v, &mut diags));
    let dynamics = optional::<DynamicsConfig>(&obj, "dynamics", &mut diags);
    let scan = optional::<ScanConfig>(&obj, "scan", &mut diags);
    let output = optional::<OutputConfig>(&obj, "output", &mut diags);

    if let (Some(a), Some(w)) = (&alpha, &weights) {
        if a.dim() != w.dim() {
            diags.push(Diagnostic::new(
                "weights",
                format!("dimension mismatch: alpha is {0}x{0} but weights are {1}x{1}", a.dim(), w.dim()),
            ));
        }
    }
    if let (Some(a), Some(ops)) = (&alpha, &operator_set) {
        let ops = ops.resolve();
        if ops.basis_size() != a.dim() {
            diags.push(Diagnostic::new(
                "operator_set",
                format!("operators act on {} labels but alpha is {}x{}", ops.basis_size(), a.dim(), a.dim()),
            ));
        }
    }
    if let Some(d) = &dynamics {
        if !(d.dt > 0.0 && d.dt.is_finite()) {
            diags.push(Diagnostic::new("dynamics.dt", format!("must be positive, got {}", d.dt)));
        }
        if d.steps == 0 {
            diags.push(Diagnostic::new("dynamics.steps", "must be at least 1"));
        }
        if !(d.perturbation > 0.0 && d.perturbation < 0.5) {
            diags.push(Diagnostic::new("dynamics.perturbation", format!("must lie in (0, 0.5), got {}", d.perturbation)));
        }
        if !(d.tolerance > 0.0) {
            diags.push(Diagnostic::new("dynamics.tolerance", format!("must be positive, got {}", d.tolerance)));
        }
    }
    if let Some(s) = &scan {
        if s.resolution < 2 {
            diags.push(Diagnostic::new("scan.resolution", format!("must be at least 2, got {}", s.resolution)));
        }
    }

    if let Some(cmd) = command {
        let weights_given = optional_raw(&obj, "weights").is_some();
        command_requirements(cmd, &alpha, weights_given, &operator_set, &dynamics, &output, &mut diags);
    }

    if !diags.is_empty() {
        return Err(diags);
    }
    Ok(RunConfig {
        description,
        command: command.expect("checked"),
        alpha: alpha.expect("checked"),
        weights,
        operator_set,
        dynamics,
        scan,
        output,
    })
}

fn command_requirements(
    cmd: Command,
    alpha: &Option<PayoffMatrix>,
    weights_given: bool,
    operator_set: &Option<OperatorSpec>,
    dynamics: &Option<DynamicsConfig>,
    output: &Option<OutputConfig>,
    diags: &mut Vec<Diagnostic>,
) {
    let two_by_two = |diags: &mut Vec<Diagnostic>| {
        if let Some(a) = alpha {
            if a.dim() != 2 {
                diags.push(Diagnostic::new("alpha", format!("{} requires a 2x2 game", cmd.as_str())));
            }
        }
    };
    match cmd {
        Command::Analyze => {
            two_by_two(diags);
            if !weights_given {
                diags.push(Diagnostic::new("weights", "required for analyze"));
            }
            if operator_set.is_some() {
                diags.push(Diagnostic::new("operator_set", "analyze always uses the id-swap2 operators"));
            }
        }
        Command::Transform => {
            if !weights_given {
                diags.push(Diagnostic::new("weights", "required for transform"));
            }
        }
        Command::Simulate => match dynamics {
            None => diags.push(Diagnostic::new("dynamics", "required for simulate")),
            Some(d) => {
                if d.x0.is_none() {
                    diags.push(Diagnostic::new("dynamics.x0", "required for simulate"));
                }
                if d.game == Some(GameForm::Quantum) && !weights_given {
                    diags.push(Diagnostic::new("weights", "required for quantum dynamics"));
                }
            }
        },
        Command::Scan => two_by_two(diags),
    }
    let format = output.as_ref().and_then(|o| o.format);
    if cmd == Command::Analyze && format == Some(Format::Csv) {
        diags.push(Diagnostic::new("output.format", "analyze emits json only"));
    }
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(idx) => msg[..idx].to_string(),
        None => msg.to_string(),
    }
}

fn optional_raw<'a>(obj: &'a Map<String, Value>, key: &str) -> Option<&'a Value> {
    obj.get(key).filter(|v| !v.is_null())
}

fn optional<T: DeserializeOwned>(obj: &Map<String, Value>, key: &str, diags: &mut Vec<Diagnostic>) -> Option<T> {
    let value = optional_raw(obj, key)?;
    match T::deserialize(value) {
        Ok(v) => Some(v),
        Err(e) => {
            diags.push(Diagnostic::new(key, e.to_string()));
            None
        }
    }
}

fn required<T: DeserializeOwned>(obj: &Map<String, Value>, key: &str, diags: &mut Vec<Diagnostic>) -> Option<T> {
    if optional_raw(obj, key).is_none() {
        diags.push(Diagnostic::new(key, "missing required field"));
        return None;
    }
    optional(obj, key, diags)
}

fn lift<T>(r: crate::Result<T>, field: &str, diags: &mut Vec<Diagnostic>) -> Option<T> {
    r.map_err(|e| diags.push(Diagnostic::new(field, e.to_string()))).ok()
}

fn parse_operators(value: &Value, diags: &mut Vec<Diagnostic>) -> Option<OperatorSpec> {
    match value {
        Value::String(_) => match OperatorPreset::deserialize(value) {
            Ok(p) => Some(OperatorSpec::Preset(p)),
            Err(_) => {
                diags.push(Diagnostic::new("operator_set", format!("unknown preset {value}; expected \"rsp3\" or \"id-swap2\"")));
                None
            }
        },
        _ => match Vec::<Vec<usize>>::deserialize(value) {
            Ok(perms) => lift(OperatorSet::new(perms), "operator_set", diags).map(OperatorSpec::Explicit),
            Err(e) => {
                diags.push(Diagnostic::new("operator_set", e.to_string()));
                None
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"command": "analyze", "alpha": [[3, 4], [2, 5]], "weights": [[0, 0.5], [0.5, 0]]}"#;

    fn fields(diags: &[Diagnostic]) -> Vec<&str> {
        diags.iter().map(|d| d.field.as_str()).collect()
    }

    #[test]
    fn minimal_analyze_config() {
        let cfg = validate(MINIMAL).unwrap();
        assert_eq!(cfg.command, Command::Analyze);
        assert_eq!(cfg.alpha.rows(), vec![vec![3.0, 4.0], vec![2.0, 5.0]]);
        assert_eq!(cfg.operators(), OperatorSet::id_swap2());
    }

    #[test]
    fn normalization_diagnostic() {
        let text = r#"{"command": "analyze", "alpha": [[3, 4], [2, 5]], "weights": [[0.5, 0.4], [0, 0]]}"#;
        let diags = validate(text).unwrap_err();
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].field, "weights");
        assert!(diags[0].message.contains("normalization violated: sum=0.9"), "{}", diags[0]);
    }

    #[test]
    fn dimension_mismatch_diagnostic() {
        let text = r#"{"command": "transform", "alpha": [[1,2,3],[4,5,6],[7,8,9]], "weights": [[1, 0], [0, 0]]}"#;
        let diags = validate(text).unwrap_err();
        assert_eq!(fields(&diags), vec!["weights"]);
        assert!(diags[0].message.contains("dimension mismatch"));
    }

    #[test]
    fn missing_weights_for_analyze() {
        let diags = validate(r#"{"command": "analyze", "alpha": [[3, 4], [2, 5]]}"#).unwrap_err();
        assert_eq!(fields(&diags), vec!["weights"]);
    }

    #[test]
    fn reports_all_problems() {
        let text = r#"{"command": "simulate", "alpha": [[1, 2], [3]], "bogus": 1,
                       "dynamics": {"dt": -1}, "scan": {"resolution": 1}}"#;
        let diags = validate(text).unwrap_err();
        let f = fields(&diags);
        for expected in ["bogus", "alpha", "dynamics.dt", "scan.resolution", "dynamics.x0"] {
            assert!(f.contains(&expected), "{expected} missing from {diags:?}");
        }
    }

    #[test]
    fn syntax_error_has_position() {
        let diags = validate("{\n  \"command\": \"analyze\",\n  oops\n}").unwrap_err();
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].field, "(syntax)");
        assert!(diags[0].message.starts_with("line 3 column"), "{}", diags[0]);
    }

    #[test]
    fn unknown_command_and_preset() {
        let text = r#"{"command": "explode", "alpha": [[1,2],[3,4]], "operator_set": "xyz"}"#;
        let diags = validate(text).unwrap_err();
        assert_eq!(fields(&diags), vec!["command", "operator_set"]);
    }

    #[test]
    fn explicit_operators_are_validated() {
        let ok = r#"{"command": "transform", "alpha": [[1,2,3],[4,5,6],[7,8,9]],
                     "weights": [[1,0,0],[0,0,0],[0,0,0]], "operator_set": [[0,1,2],[1,2,0]]}"#;
        let cfg = validate(ok).unwrap();
        assert_eq!(cfg.operators().len(), 2);
        let bad = ok.replace("[1,2,0]", "[1,1,0]");
        assert_eq!(fields(&validate(&bad).unwrap_err()), vec!["operator_set"]);
        let wrong_size = ok.replace("[[0,1,2],[1,2,0]]", "\"id-swap2\"");
        assert_eq!(fields(&validate(&wrong_size).unwrap_err()), vec!["operator_set"]);
    }

    #[test]
    fn round_trip_is_field_identical() {
        let text = r#"{"description": "d", "command": "simulate", "alpha": [[3, 4], [2, 5]],
                       "weights": [[0, 0.5], [0.5, 0]], "operator_set": [[0, 1], [1, 0]],
                       "dynamics": {"x0": [0.6, 0.4], "steps": 10, "game": "classical"},
                       "scan": {"constraint": "full-simplex"},
                       "output": {"path": "x.json", "format": "csv"}}"#;
        let cfg = validate(text).unwrap();
        let again = validate(&cfg.to_json()).unwrap();
        assert_eq!(cfg, again);
        let scan = again.scan.unwrap();
        assert_eq!(scan.resolution, DEFAULT_RESOLUTION);
        assert_eq!(scan.constraint, ScanConstraint::FullSimplex);
    }
}
