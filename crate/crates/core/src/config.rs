//! JSON scenario files.
//!
//! Parsing is strict: unknown keys are rejected, and every problem found is
//! reported together with the path of the offending entry.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::grid::Grid1D;
use crate::solver::{Field, PerturbationTerm, RunSettings, Shape, SimulationState};
use crate::thermo::GasParams;
use crate::waves::{FarState, RiemannData, WaveOptions};
use crate::Error;

const TOP_KEYS: &[&str] = &["label", "seed", "gas", "riemann", "wave", "grid", "time", "perturbation"];
const GAS_KEYS: &[&str] = &[
    "R", "Cv", "a", "mu", "kappa1", "kappa2", "b", "d", "lambda_heat", "K", "A", "beta",
];
const RIEMANN_KEYS: &[&str] = &[
    "v_minus", "u_minus", "theta_minus", "v_plus", "u_plus", "theta_plus", "entropy_tol",
];
const WAVE_KEYS: &[&str] = &["eps", "q"];
const GRID_KEYS: &[&str] = &["L", "n"];
const TIME_KEYS: &[&str] = &["t_end", "cfl", "output_interval", "snapshot_times"];
const PERTURBATION_KEYS: &[&str] = &["field", "shape", "amplitude", "center", "width"];

/// Far-field block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiemannSection {
    pub v_minus: f64,
    pub u_minus: f64,
    pub theta_minus: f64,
    pub v_plus: f64,
    pub u_plus: f64,
    pub theta_plus: f64,
    pub entropy_tol: f64,
}

impl RiemannSection {
    pub const DEFAULT_ENTROPY_TOL: f64 = 1e-8;

    pub fn left(&self) -> FarState {
        FarState::new(self.v_minus, self.u_minus, self.theta_minus)
    }

    pub fn right(&self) -> FarState {
        FarState::new(self.v_plus, self.u_plus, self.theta_plus)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveSection {
    pub eps: Option<f64>,
    pub q: f64,
}

impl Default for WaveSection {
    fn default() -> Self {
        Self { eps: None, q: 2.0 }
    }
}

impl WaveSection {
    pub fn options(&self) -> WaveOptions {
        WaveOptions { eps: self.eps, q: self.q }
    }
}

/// Domain `[-L, L]` with `n` nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSection {
    #[serde(rename = "L")]
    pub half_width: f64,
    pub n: usize,
}

impl Default for GridSection {
    fn default() -> Self {
        Self { half_width: 100.0, n: 512 }
    }
}

/// A validated scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub label: String,
    pub seed: u64,
    pub gas: GasParams,
    pub riemann: RiemannSection,
    pub wave: WaveSection,
    pub grid: GridSection,
    pub time: RunSettings,
    pub perturbation: Vec<PerturbationTerm>,
}

impl ScenarioConfig {
    pub fn riemann_data(&self) -> crate::Result<RiemannData> {
        RiemannData::new(&self.gas, self.riemann.left(), self.riemann.right(), self.riemann.entropy_tol)
    }

    pub fn grid(&self) -> crate::Result<Grid1D> {
        Grid1D::symmetric(self.grid.half_width, self.grid.n)
    }

    /// Initial solver state of the scenario.
    pub fn initial_state(&self) -> crate::Result<SimulationState> {
        SimulationState::initialize(&self.gas, &self.riemann_data()?, self.wave.options(), self.grid()?, &self.perturbation)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }
}

/// One problem in a scenario document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigIssue {
    pub path: String,
    pub message: String,
}

/// Every problem found while parsing a scenario document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub issues: Vec<ConfigIssue>,
}

impl ConfigError {
    fn single(path: &str, message: impl Into<String>) -> Self {
        Self { issues: vec![ConfigIssue { path: path.to_string(), message: message.into() }] }
    }

    pub fn mentions(&self, path: &str) -> bool {
        self.issues.iter().any(|i| i.path == path)
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, issue) in self.issues.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            if issue.path.is_empty() {
                write!(f, "{}", issue.message)?;
            } else {
                write!(f, "{}: {}", issue.path, issue.message)?;
            }
        }
        Ok(())
    }
}

impl std::error::Error for ConfigError {}

impl From<ConfigError> for Error {
    fn from(e: ConfigError) -> Self {
        Error::InvalidScenario(e.to_string())
    }
}

#[derive(Default)]
struct Issues(Vec<ConfigIssue>);

impl Issues {
    fn push(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.0.push(ConfigIssue { path: path.into(), message: message.into() });
    }
}

fn join(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_string()
    } else {
        format!("{prefix}.{key}")
    }
}

fn check_keys(obj: &Map<String, Value>, known: &[&str], prefix: &str, issues: &mut Issues) {
    for key in obj.keys() {
        if !known.contains(&key.as_str()) {
            issues.push(join(prefix, key), "unknown key");
        }
    }
}

/// Returns the object at `key`, an empty map when absent.
fn section<'a>(root: &'a Map<String, Value>, key: &str, issues: &mut Issues) -> Option<&'a Map<String, Value>> {
    match root.get(key) {
        None => None,
        Some(Value::Object(m)) => Some(m),
        Some(_) => {
            issues.push(key, "must be an object");
            None
        }
    }
}

fn number(obj: Option<&Map<String, Value>>, prefix: &str, key: &str, issues: &mut Issues) -> Option<f64> {
    match obj.and_then(|m| m.get(key)) {
        None => None,
        Some(Value::Number(x)) => x.as_f64(),
        Some(_) => {
            issues.push(join(prefix, key), "must be a number");
            None
        }
    }
}

fn required(obj: Option<&Map<String, Value>>, prefix: &str, key: &str, issues: &mut Issues) -> f64 {
    let present = obj.map_or(false, |m| m.contains_key(key));
    match number(obj, prefix, key, issues) {
        Some(x) => x,
        None => {
            if !present {
                issues.push(join(prefix, key), "is required");
            }
            f64::NAN
        }
    }
}

/// Parses and validates a scenario document.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| ConfigError::single("", format!("malformed JSON: {e}")))?;
    let Value::Object(root) = doc else {
        return Err(ConfigError::single("", "top level must be a JSON object"));
    };
    let mut issues = Issues::default();
    check_keys(&root, TOP_KEYS, "", &mut issues);

    let label = match root.get("label") {
        None => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(_) => {
            issues.push("label", "must be a string");
            String::new()
        }
    };
    let seed = match root.get("seed") {
        None => 0,
        Some(v) => v.as_u64().unwrap_or_else(|| {
            issues.push("seed", "must be a non-negative integer");
            0
        }),
    };

    let gas = parse_gas(section(&root, "gas", &mut issues), &mut issues);
    let riemann = parse_riemann(&root, &mut issues);
    let wave = parse_wave(section(&root, "wave", &mut issues), &mut issues);
    let grid = parse_grid(section(&root, "grid", &mut issues), &mut issues);
    let time = parse_time(section(&root, "time", &mut issues), &mut issues);
    let perturbation = parse_perturbation(root.get("perturbation"), &mut issues);

    let cfg = ScenarioConfig { label, seed, gas, riemann, wave, grid, time, perturbation };
    if issues.0.is_empty() {
        validate_physics(&cfg, &mut issues);
    }
    if issues.0.is_empty() {
        Ok(cfg)
    } else {
        Err(ConfigError { issues: issues.0 })
    }
}

fn parse_gas(obj: Option<&Map<String, Value>>, issues: &mut Issues) -> GasParams {
    if let Some(m) = obj {
        check_keys(m, GAS_KEYS, "gas", issues);
    }
    let d = GasParams::default();
    let mut get = |key: &str, default: f64| number(obj, "gas", key, issues).unwrap_or(default);
    let r = get("R", d.r);
    let gp = GasParams {
        r,
        cv: get("Cv", 1.5 * r),
        rad: get("a", d.rad),
        mu: get("mu", d.mu),
        kappa1: get("kappa1", d.kappa1),
        kappa2: get("kappa2", d.kappa2),
        b: get("b", d.b),
        d: get("d", d.d),
        heat_release: get("lambda_heat", d.heat_release),
        rate_prefactor: get("K", d.rate_prefactor),
        activation: get("A", d.activation),
        rate_exponent: get("beta", d.rate_exponent),
    };
    for (key, msg) in gp.violations() {
        issues.push(join("gas", key), msg);
    }
    gp
}

fn parse_riemann(root: &Map<String, Value>, issues: &mut Issues) -> RiemannSection {
    let obj = section(root, "riemann", issues);
    match obj {
        Some(m) => check_keys(m, RIEMANN_KEYS, "riemann", issues),
        None if !root.contains_key("riemann") => issues.push("riemann", "is required"),
        None => {}
    }
    let p = "riemann";
    let sec = RiemannSection {
        v_minus: required(obj, p, "v_minus", issues),
        u_minus: required(obj, p, "u_minus", issues),
        theta_minus: required(obj, p, "theta_minus", issues),
        v_plus: required(obj, p, "v_plus", issues),
        u_plus: required(obj, p, "u_plus", issues),
        theta_plus: required(obj, p, "theta_plus", issues),
        entropy_tol: number(obj, p, "entropy_tol", issues).unwrap_or(RiemannSection::DEFAULT_ENTROPY_TOL),
    };
    for (key, x) in [
        ("v_minus", sec.v_minus),
        ("theta_minus", sec.theta_minus),
        ("v_plus", sec.v_plus),
        ("theta_plus", sec.theta_plus),
        ("entropy_tol", sec.entropy_tol),
    ] {
        if !x.is_nan() && !(x > 0.0 && x.is_finite()) {
            issues.push(join(p, key), format!("must be a finite number > 0, got {x}"));
        }
    }
    sec
}

fn parse_wave(obj: Option<&Map<String, Value>>, issues: &mut Issues) -> WaveSection {
    if let Some(m) = obj {
        check_keys(m, WAVE_KEYS, "wave", issues);
    }
    let eps = match obj.and_then(|m| m.get("eps")) {
        None | Some(Value::Null) => None,
        Some(_) => number(obj, "wave", "eps", issues),
    };
    let q = number(obj, "wave", "q", issues).unwrap_or(2.0);
    if let Some(e) = eps {
        if !(e > 0.0 && e.is_finite()) {
            issues.push("wave.eps", format!("must be > 0, got {e}"));
        }
    }
    if !(q > 1.5 && q.is_finite()) {
        issues.push("wave.q", format!("must be > 1.5, got {q}"));
    }
    WaveSection { eps, q }
}

fn parse_grid(obj: Option<&Map<String, Value>>, issues: &mut Issues) -> GridSection {
    if let Some(m) = obj {
        check_keys(m, GRID_KEYS, "grid", issues);
    }
    let d = GridSection::default();
    let half_width = number(obj, "grid", "L", issues).unwrap_or(d.half_width);
    let n = match obj.and_then(|m| m.get("n")) {
        None => d.n,
        Some(v) => match v.as_u64() {
            Some(n) => n as usize,
            None => {
                issues.push("grid.n", "must be a non-negative integer");
                d.n
            }
        },
    };
    if !(half_width > 0.0 && half_width.is_finite()) {
        issues.push("grid.L", format!("must be > 0, got {half_width}"));
    }
    if n < Grid1D::MIN_NODES {
        issues.push("grid.n", format!("must be >= {}, got {n}", Grid1D::MIN_NODES));
    }
    GridSection { half_width, n }
}

fn parse_time(obj: Option<&Map<String, Value>>, issues: &mut Issues) -> RunSettings {
    if let Some(m) = obj {
        check_keys(m, TIME_KEYS, "time", issues);
    }
    let d = RunSettings::default();
    let t_end = number(obj, "time", "t_end", issues).unwrap_or(d.t_end);
    let cfl = number(obj, "time", "cfl", issues).unwrap_or(d.cfl);
    let output_interval = number(obj, "time", "output_interval", issues).unwrap_or(d.output_interval);
    let mut snapshot_times = Vec::new();
    match obj.and_then(|m| m.get("snapshot_times")) {
        None => {}
        Some(Value::Array(items)) => {
            for (k, item) in items.iter().enumerate() {
                match item.as_f64() {
                    Some(t) => snapshot_times.push(t),
                    None => issues.push(format!("time.snapshot_times[{k}]"), "must be a number"),
                }
            }
        }
        Some(_) => issues.push("time.snapshot_times", "must be an array of numbers"),
    }
    let settings = RunSettings { t_end, cfl, output_interval, snapshot_times };
    for (key, msg) in settings.violations() {
        issues.push(join("time", key), msg);
    }
    settings
}

fn parse_perturbation(value: Option<&Value>, issues: &mut Issues) -> Vec<PerturbationTerm> {
    let items = match value {
        None => return Vec::new(),
        Some(Value::Array(items)) => items,
        Some(_) => {
            issues.push("perturbation", "must be an array");
            return Vec::new();
        }
    };
    let mut out = Vec::new();
    for (k, item) in items.iter().enumerate() {
        let prefix = format!("perturbation[{k}]");
        let Value::Object(m) = item else {
            issues.push(prefix, "must be an object");
            continue;
        };
        check_keys(m, PERTURBATION_KEYS, &prefix, issues);
        let field = match m.get("field").and_then(Value::as_str) {
            Some("v") => Some(Field::V),
            Some("u") => Some(Field::U),
            Some("theta") => Some(Field::Theta),
            Some("z") => Some(Field::Z),
            _ => {
                issues.push(join(&prefix, "field"), "must be one of \"v\", \"u\", \"theta\", \"z\"");
                None
            }
        };
        let shape = match m.get("shape").and_then(Value::as_str) {
            Some("gaussian") => Some(Shape::Gaussian),
            Some("bump") => Some(Shape::Bump),
            _ => {
                issues.push(join(&prefix, "shape"), "must be \"gaussian\" or \"bump\"");
                None
            }
        };
        let obj = Some(m);
        let amplitude = required(obj, &prefix, "amplitude", issues);
        let center = number(obj, &prefix, "center", issues).unwrap_or(0.0);
        let width = required(obj, &prefix, "width", issues);
        if !width.is_nan() && !(width > 0.0 && width.is_finite()) {
            issues.push(join(&prefix, "width"), format!("must be > 0, got {width}"));
        }
        if let (Some(field), Some(shape)) = (field, shape) {
            out.push(PerturbationTerm { field, shape, amplitude, center, width });
        }
    }
    out
}

/// Checks that need the whole scenario: equal far-field entropies, the
/// rarefaction regime, edge decay and positivity of the initial data.
fn validate_physics(cfg: &ScenarioConfig, issues: &mut Issues) {
    let r = &cfg.riemann;
    let s_minus = cfg.gas.s(r.v_minus, r.theta_minus);
    let s_plus = cfg.gas.s(r.v_plus, r.theta_plus);
    if (s_minus - s_plus).abs() > r.entropy_tol {
        issues.push(
            "riemann",
            format!(
                "far fields must share one entropy (s_plus = s_minus = s_bar), got s_minus = {s_minus}, s_plus = {s_plus}"
            ),
        );
        return;
    }
    if let Err(e) = cfg.initial_state() {
        let path = match &e {
            Error::NotRarefaction(_) | Error::NoConvergence(_) => "riemann",
            _ => "perturbation",
        };
        issues.push(path, e.to_string());
    }
}
