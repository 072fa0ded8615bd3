//! Explicit finite-difference integrator for the viscous, heat-conducting,
//! radiative and reactive system in Lagrangian coordinates.
//!
//! Unknowns live on the nodes of a [`Grid1D`]. The energy balance is advanced
//! in temperature form. The two boundary nodes carry Dirichlet data taken from
//! the smooth rarefaction wave, with `z = 0`.

use serde::{Deserialize, Serialize};

use crate::diagnostics::{self, DiagnosticsRecord};
use crate::grid::Grid1D;
use crate::thermo::GasParams;
use crate::waves::{RiemannData, WaveOptions, WavePattern, WaveProfile};
use crate::{Error, Result};

/// Perturbations must vanish to this level at both domain edges.
pub const EDGE_DECAY_TOL: f64 = 1e-8;
/// Undershoot/overshoot of `z` tolerated before a step counts as a violation.
pub const Z_BOUNDS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    V,
    U,
    Theta,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    /// `A exp(−(x−c)²/(2w²))`.
    Gaussian,
    /// `A exp(1 − 1/(1−r²))` for `r = |x−c|/w < 1`, zero outside.
    Bump,
}

/// One localized term added to a field of the initial data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationTerm {
    pub field: Field,
    pub shape: Shape,
    pub amplitude: f64,
    pub center: f64,
    pub width: f64,
}

impl PerturbationTerm {
    pub fn eval(&self, x: f64) -> f64 {
        let r = (x - self.center) / self.width;
        match self.shape {
            Shape::Gaussian => self.amplitude * (-0.5 * r * r).exp(),
            Shape::Bump => {
                if r.abs() < 1.0 {
                    self.amplitude * (1.0 - 1.0 / (1.0 - r * r)).exp()
                } else {
                    0.0
                }
            }
        }
    }
}

/// The evolving solution at one time instant.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSnapshot {
    pub t: f64,
    pub grid: Grid1D,
    pub v: Vec<f64>,
    pub u: Vec<f64>,
    pub theta: Vec<f64>,
    pub z: Vec<f64>,
}

impl FieldSnapshot {
    /// Uniform fields.
    pub fn constant(t: f64, grid: Grid1D, v: f64, u: f64, theta: f64, z: f64) -> Self {
        let n = grid.n();
        Self { t, grid, v: vec![v; n], u: vec![u; n], theta: vec![theta; n], z: vec![z; n] }
    }

    /// Copies the smooth or exact wave profile, with `z = 0`.
    pub fn from_profile(profile: &WaveProfile) -> Self {
        Self {
            t: profile.t,
            grid: profile.grid,
            v: profile.v.clone(),
            u: profile.u.clone(),
            theta: profile.theta.clone(),
            z: vec![0.0; profile.grid.n()],
        }
    }
}

#[derive(Debug, Clone, Default)]
struct Rates {
    v: Vec<f64>,
    u: Vec<f64>,
    theta: Vec<f64>,
    z: Vec<f64>,
}

impl Rates {
    fn zeros(n: usize) -> Self {
        Self { v: vec![0.0; n], u: vec![0.0; n], theta: vec![0.0; n], z: vec![0.0; n] }
    }
}

/// Per-node and per-face work arrays reused across steps.
#[derive(Debug, Clone, Default)]
struct Scratch {
    p: Vec<f64>,
    kappa: Vec<f64>,
    phi: Vec<f64>,
    flux_u: Vec<f64>,
    flux_theta: Vec<f64>,
    flux_z: Vec<f64>,
    rates: Rates,
    stage: Option<FieldSnapshot>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Self {
            p: vec![0.0; n],
            kappa: vec![0.0; n],
            phi: vec![0.0; n],
            flux_u: vec![0.0; n - 1],
            flux_theta: vec![0.0; n - 1],
            flux_z: vec![0.0; n - 1],
            rates: Rates::zeros(n),
            stage: None,
        }
    }
}

/// Solver state: current fields, gas, far-field data and the cached wave
/// used for boundary values and diagnostics.
#[derive(Debug, Clone)]
pub struct SimulationState {
    gp: GasParams,
    wave: WavePattern,
    snapshot: FieldSnapshot,
    steps: u64,
    z_violations: u64,
    scratch: Scratch,
}

impl SimulationState {
    /// Smooth wave at `t = 0` plus the perturbation terms. `z` starts from the
    /// sum of the `z` terms alone.
    pub fn initialize(
        gp: &GasParams,
        rd: &RiemannData,
        opts: WaveOptions,
        grid: Grid1D,
        perturbation: &[PerturbationTerm],
    ) -> Result<Self> {
        let gp = gp.validate()?;
        for (k, term) in perturbation.iter().enumerate() {
            if !(term.width > 0.0 && term.width.is_finite()) {
                return Err(Error::InvalidScenario(format!(
                    "perturbation[{k}] width must be > 0, got {}",
                    term.width
                )));
            }
            if !(term.amplitude.is_finite() && term.center.is_finite()) {
                return Err(Error::InvalidScenario(format!("perturbation[{k}] has non-finite parameters")));
            }
            for edge in [grid.x_left(), grid.x_right()] {
                let value = term.eval(edge);
                if value.abs() >= EDGE_DECAY_TOL {
                    return Err(Error::InvalidScenario(format!(
                        "perturbation[{k}] is {value:e} at the domain edge x = {edge}; it must decay below {EDGE_DECAY_TOL:e}"
                    )));
                }
            }
        }

        let wave = WavePattern::new(&gp, rd, opts)?;
        let profile = wave.sample_smooth(0.0, &grid)?;
        let mut snapshot = FieldSnapshot::from_profile(&profile);
        for term in perturbation {
            let target = match term.field {
                Field::V => &mut snapshot.v,
                Field::U => &mut snapshot.u,
                Field::Theta => &mut snapshot.theta,
                Field::Z => &mut snapshot.z,
            };
            for (i, value) in target.iter_mut().enumerate() {
                *value += term.eval(grid.x(i));
            }
        }
        for i in 0..grid.n() {
            let x = grid.x(i);
            if !(snapshot.v[i] > 0.0) {
                return Err(Error::InvalidScenario(format!("initial v = {} <= 0 at x = {x}", snapshot.v[i])));
            }
            if !(snapshot.theta[i] > 0.0) {
                return Err(Error::InvalidScenario(format!("initial theta = {} <= 0 at x = {x}", snapshot.theta[i])));
            }
            if !(0.0..=1.0).contains(&snapshot.z[i]) {
                return Err(Error::InvalidScenario(format!("initial z = {} outside [0, 1] at x = {x}", snapshot.z[i])));
            }
        }
        Ok(Self::from_parts(gp, wave, snapshot))
    }

    /// Starts from arbitrary fields; the boundary nodes are still driven by
    /// `wave`.
    pub fn from_snapshot(gp: &GasParams, wave: WavePattern, snapshot: FieldSnapshot) -> Result<Self> {
        let gp = gp.validate()?;
        let n = snapshot.grid.n();
        if [snapshot.v.len(), snapshot.u.len(), snapshot.theta.len(), snapshot.z.len()].iter().any(|&len| len != n) {
            return Err(Error::InvalidScenario(format!("snapshot arrays must all have {n} entries")));
        }
        Ok(Self::from_parts(gp, wave, snapshot))
    }

    fn from_parts(gp: GasParams, wave: WavePattern, snapshot: FieldSnapshot) -> Self {
        let n = snapshot.grid.n();
        Self { gp, wave, snapshot, steps: 0, z_violations: 0, scratch: Scratch::new(n) }
    }

    pub fn gas(&self) -> &GasParams {
        &self.gp
    }

    pub fn wave(&self) -> &WavePattern {
        &self.wave
    }

    pub fn snapshot(&self) -> &FieldSnapshot {
        &self.snapshot
    }

    pub fn t(&self) -> f64 {
        self.snapshot.t
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Number of steps after which some `z` left `[0, 1]` by more than
    /// [`Z_BOUNDS_TOL`]. Values are never clamped.
    pub fn z_violations(&self) -> u64 {
        self.z_violations
    }

    /// Smooth wave sampled on the solver grid at the current time.
    pub fn profile(&self) -> Result<WaveProfile> {
        self.wave.sample_smooth(self.snapshot.t, &self.snapshot.grid)
    }

    /// Largest stable explicit step scaled by `cfl`.
    ///
    /// Minimum over nodes of the acoustic, viscous, conductive, diffusive and
    /// reactive limits.
    pub fn stable_dt(&self, cfl: f64) -> f64 {
        let gp = &self.gp;
        let s = &self.snapshot;
        let dx = s.grid.dx();
        let mut dt = f64::INFINITY;
        for i in 0..s.grid.n() {
            let (v, u, th) = (s.v[i], s.u[i], s.theta[i]);
            let c = (-gp.p_tilde_v_at(v, th)).sqrt();
            let candidates = [
                dx / (u.abs() + c),
                dx * dx * v * gp.e_theta(v, th) / (2.0 * gp.kappa(v, th)),
                dx * dx * v / (2.0 * gp.mu),
                dx * dx * v * v / (2.0 * gp.d),
                1.0 / gp.phi(th),
            ];
            for cand in candidates {
                dt = dt.min(cand);
            }
        }
        cfl * dt
    }

    /// One Heun step of size `dt`.
    pub fn step(&mut self, dt: f64) -> Result<()> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::Domain(format!("time step must be > 0, got {dt}")));
        }
        let t1 = self.snapshot.t + dt;
        let mut stage = self.scratch.stage.take().unwrap_or_else(|| self.snapshot.clone());

        compute_rates(&self.gp, &self.snapshot, &mut self.scratch);
        let r = &self.scratch.rates;
        let s = &self.snapshot;
        for i in 1..s.grid.n() - 1 {
            stage.v[i] = s.v[i] + dt * r.v[i];
            stage.u[i] = s.u[i] + dt * r.u[i];
            stage.theta[i] = s.theta[i] + dt * r.theta[i];
            stage.z[i] = s.z[i] + dt * r.z[i];
        }
        stage.t = t1;
        apply_boundary(&self.wave, &mut stage)?;
        check_finite_positive(&stage)?;

        // Heun: average of the old state and a second Euler step from the predictor
        compute_rates(&self.gp, &stage, &mut self.scratch);
        let r = &self.scratch.rates;
        let s = &mut self.snapshot;
        for i in 1..s.grid.n() - 1 {
            s.v[i] = 0.5 * (s.v[i] + stage.v[i] + dt * r.v[i]);
            s.u[i] = 0.5 * (s.u[i] + stage.u[i] + dt * r.u[i]);
            s.theta[i] = 0.5 * (s.theta[i] + stage.theta[i] + dt * r.theta[i]);
            s.z[i] = 0.5 * (s.z[i] + stage.z[i] + dt * r.z[i]);
        }
        s.t = t1;
        self.scratch.stage = Some(stage);
        apply_boundary(&self.wave, &mut self.snapshot)?;
        check_finite_positive(&self.snapshot)?;

        self.steps += 1;
        if self.snapshot.z.iter().any(|&z| z < -Z_BOUNDS_TOL || z > 1.0 + Z_BOUNDS_TOL) {
            self.z_violations += 1;
        }
        Ok(())
    }

    /// Forces the time stamp, used to land exactly on output times.
    fn set_time(&mut self, t: f64) {
        self.snapshot.t = t;
    }
}

fn apply_boundary(wave: &WavePattern, s: &mut FieldSnapshot) -> Result<()> {
    let n = s.grid.n();
    for i in [0, n - 1] {
        let w = wave.smooth(s.t, s.grid.x(i))?;
        s.v[i] = w.v;
        s.u[i] = w.u;
        s.theta[i] = w.theta;
        s.z[i] = 0.0;
    }
    Ok(())
}

/// Semi-discrete right-hand side at the interior nodes of `s`, written to
/// `sc.rates`.
fn compute_rates(gp: &GasParams, s: &FieldSnapshot, sc: &mut Scratch) {
    let n = s.grid.n();
    let dx = s.grid.dx();

    for i in 0..n {
        sc.p[i] = gp.p(s.v[i], s.theta[i]);
        sc.kappa[i] = gp.kappa(s.v[i], s.theta[i]);
        sc.phi[i] = gp.phi(s.theta[i]);
    }
    for j in 0..n - 1 {
        let v_avg = 0.5 * (s.v[j] + s.v[j + 1]);
        let k_avg = 0.5 * (sc.kappa[j] + sc.kappa[j + 1]);
        sc.flux_u[j] = gp.mu * (s.u[j + 1] - s.u[j]) / (dx * v_avg);
        sc.flux_theta[j] = k_avg * (s.theta[j + 1] - s.theta[j]) / (dx * v_avg);
        sc.flux_z[j] = gp.d * (s.z[j + 1] - s.z[j]) / (dx * v_avg * v_avg);
    }

    let r = &mut sc.rates;
    for i in 1..n - 1 {
        let (v, th, z) = (s.v[i], s.theta[i], s.z[i]);
        let ux = (s.u[i + 1] - s.u[i - 1]) / (2.0 * dx);
        let phi = sc.phi[i];
        r.v[i] = ux;
        r.u[i] = -(sc.p[i + 1] - sc.p[i - 1]) / (2.0 * dx) + (sc.flux_u[i] - sc.flux_u[i - 1]) / dx;
        let heat = -th * gp.p_theta(v, th) * ux
            + (sc.flux_theta[i] - sc.flux_theta[i - 1]) / dx
            + gp.mu * ux * ux / v
            + gp.heat_release * phi * z;
        r.theta[i] = heat / gp.e_theta(v, th);
        r.z[i] = (sc.flux_z[i] - sc.flux_z[i - 1]) / dx - phi * z;
    }
}

fn check_finite_positive(s: &FieldSnapshot) -> Result<()> {
    for i in 0..s.grid.n() {
        let bad = if !(s.v[i] > 0.0) {
            Some(format!("v = {}", s.v[i]))
        } else if !(s.theta[i] > 0.0) {
            Some(format!("theta = {}", s.theta[i]))
        } else if !s.u[i].is_finite() || !s.v[i].is_finite() || !s.theta[i].is_finite() {
            Some("non-finite velocity, volume or temperature".to_string())
        } else if !s.z[i].is_finite() {
            Some(format!("z = {}", s.z[i]))
        } else {
            None
        };
        if let Some(what) = bad {
            return Err(Error::BlowUp { t: s.t, cell: i, what });
        }
    }
    Ok(())
}

/// Time stepping controls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSettings {
    pub t_end: f64,
    pub cfl: f64,
    pub output_interval: f64,
    #[serde(default)]
    pub snapshot_times: Vec<f64>,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self { t_end: 10.0, cfl: 0.4, output_interval: 1.0, snapshot_times: Vec::new() }
    }
}

impl RunSettings {
    pub fn violations(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            out.push(("t_end", format!("must be >= 0, got {}", self.t_end)));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            out.push(("cfl", format!("must lie in (0, 1], got {}", self.cfl)));
        }
        if !(self.output_interval > 0.0 && self.output_interval.is_finite()) {
            out.push(("output_interval", format!("must be > 0, got {}", self.output_interval)));
        }
        for (k, &t) in self.snapshot_times.iter().enumerate() {
            if !(t >= 0.0 && t <= self.t_end) {
                out.push(("snapshot_times", format!("entry {k} = {t} lies outside [0, t_end]")));
            }
        }
        out
    }

    /// Record times: multiples of the interval below `t_end`, then `t_end`.
    pub fn output_times(&self) -> Vec<f64> {
        let mut out = vec![0.0];
        let mut k = 1u64;
        loop {
            let t = k as f64 * self.output_interval;
            if t >= self.t_end - 1e-9 * self.output_interval {
                break;
            }
            out.push(t);
            k += 1;
        }
        if self.t_end > 0.0 {
            out.push(self.t_end);
        }
        out
    }
}

/// Records gathered by [`run`]; `error` is set when the run aborted.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub records: Vec<DiagnosticsRecord>,
    pub error: Option<Error>,
}

/// Advances `state` to `settings.t_end`, landing exactly on every output and
/// snapshot time. `on_snapshot` receives the fields and the smooth wave at
/// each requested snapshot time.
pub fn run<F>(state: &mut SimulationState, settings: &RunSettings, mut on_snapshot: F) -> RunOutcome
where
    F: FnMut(&FieldSnapshot, &WaveProfile) -> Result<()>,
{
    let mut records = Vec::new();
    let result = run_inner(state, settings, &mut records, &mut on_snapshot);
    RunOutcome { records, error: result.err() }
}

fn run_inner<F>(
    state: &mut SimulationState,
    settings: &RunSettings,
    records: &mut Vec<DiagnosticsRecord>,
    on_snapshot: &mut F,
) -> Result<()>
where
    F: FnMut(&FieldSnapshot, &WaveProfile) -> Result<()>,
{
    if let Some((path, msg)) = settings.violations().into_iter().next() {
        return Err(Error::InvalidScenario(format!("time.{path} {msg}")));
    }
    let outputs = settings.output_times();
    let mut snaps: Vec<f64> = settings.snapshot_times.clone();
    snaps.sort_by(f64::total_cmp);
    snaps.dedup();

    let mut stops: Vec<f64> = outputs.iter().chain(snaps.iter()).copied().collect();
    stops.sort_by(f64::total_cmp);
    stops.dedup();

    let mut observe = |state: &SimulationState, records: &mut Vec<DiagnosticsRecord>| -> Result<()> {
        let t = state.t();
        let want_record = outputs.contains(&t);
        let want_snapshot = snaps.contains(&t);
        if !(want_record || want_snapshot) {
            return Ok(());
        }
        let profile = state.profile()?;
        if want_record {
            records.push(diagnostics::record(state.wave(), state.snapshot(), &profile)?);
        }
        if want_snapshot {
            on_snapshot(state.snapshot(), &profile)?;
        }
        Ok(())
    };

    for &stop in &stops {
        while state.t() < stop {
            let dt = state.stable_dt(settings.cfl);
            let remaining = stop - state.t();
            if dt >= remaining {
                state.step(remaining)?;
                state.set_time(stop);
            } else {
                state.step(dt)?;
            }
        }
        observe(state, records)?;
    }
    Ok(())
}
