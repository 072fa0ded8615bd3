//! Scalar functionals of a solution snapshot measured against the smooth
//! wave and the exact fan.
//!
//! Perturbations are written `δv = v − V`, `δu = u − U`, `δθ = θ − Θ`.

use serde::{Deserialize, Serialize};

use crate::numerics;
use crate::solver::FieldSnapshot;
use crate::thermo::GasParams;
use crate::waves::{WavePattern, WavePoint, WaveProfile};
use crate::{Error, Result};

/// Column names of a [`DiagnosticsRecord`] in output order.
pub const RECORD_COLUMNS: [&str; 15] = [
    "t",
    "sup_v",
    "sup_u",
    "sup_s",
    "sup_z",
    "eta_total",
    "dissipation",
    "h1_perturbation",
    "min_v",
    "max_v",
    "min_theta",
    "max_theta",
    "min_z",
    "max_z",
    "reactant_mass",
];

/// Diagnostics at one output time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub sup_v: f64,
    pub sup_u: f64,
    pub sup_s: f64,
    pub sup_z: f64,
    pub eta_total: f64,
    pub dissipation: f64,
    pub h1_perturbation: f64,
    pub min_v: f64,
    pub max_v: f64,
    pub min_theta: f64,
    pub max_theta: f64,
    pub min_z: f64,
    pub max_z: f64,
    pub reactant_mass: f64,
}

impl DiagnosticsRecord {
    /// Values in [`RECORD_COLUMNS`] order.
    pub fn values(&self) -> [f64; 15] {
        [
            self.t,
            self.sup_v,
            self.sup_u,
            self.sup_s,
            self.sup_z,
            self.eta_total,
            self.dissipation,
            self.h1_perturbation,
            self.min_v,
            self.max_v,
            self.min_theta,
            self.max_theta,
            self.min_z,
            self.max_z,
            self.reactant_mass,
        ]
    }
}

/// Sup-norm distances to the fan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FanDistance {
    pub v: f64,
    pub u: f64,
    pub s: f64,
    pub z: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub min_v: f64,
    pub max_v: f64,
    pub min_theta: f64,
    pub max_theta: f64,
    pub min_z: f64,
    pub max_z: f64,
    pub reactant_mass: f64,
}

/// `Φ(x) = x − ln x − 1` for `x > 0`.
pub fn phi_bregman(x: f64) -> f64 {
    x - x.ln() - 1.0
}

/// Relative entropy density of `cell` with respect to `wave`.
pub fn relative_entropy_density(gp: &GasParams, cell: WavePoint, wave: WavePoint) -> Result<f64> {
    if !(cell.v > 0.0 && cell.theta > 0.0 && wave.v > 0.0 && wave.theta > 0.0) {
        return Err(Error::Domain(format!(
            "relative entropy needs positive volumes and temperatures, got cell ({}, {}) and wave ({}, {})",
            cell.v, cell.theta, wave.v, wave.theta
        )));
    }
    let (v, u, th) = (cell.v, cell.u, cell.theta);
    let (vv, uu, tt) = (wave.v, wave.u, wave.theta);
    let du = u - uu;
    let dth = th - tt;
    Ok(gp.cv * tt * phi_bregman(th / tt)
        + gp.r * tt * phi_bregman(v / vv)
        + 0.5 * du * du
        + gp.rad * v * dth * dth / 3.0 * (3.0 * th * th + 2.0 * th * tt + tt * tt))
}

fn check_aligned(snapshot: &FieldSnapshot, profile: &WaveProfile) -> Result<()> {
    if snapshot.grid != profile.grid {
        return Err(Error::Internal("snapshot and wave profile live on different grids".into()));
    }
    if snapshot.t != profile.t {
        return Err(Error::Internal(format!(
            "snapshot at t = {} compared with wave profile at t = {}",
            snapshot.t, profile.t
        )));
    }
    Ok(())
}

fn cell(s: &FieldSnapshot, i: usize) -> WavePoint {
    WavePoint { v: s.v[i], u: s.u[i], theta: s.theta[i] }
}

/// Trapezoidal `∫ η dx`.
pub fn total_relative_entropy(gp: &GasParams, snapshot: &FieldSnapshot, profile: &WaveProfile) -> Result<f64> {
    check_aligned(snapshot, profile)?;
    let eta = (0..snapshot.grid.n())
        .map(|i| relative_entropy_density(gp, cell(snapshot, i), profile.point(i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(numerics::trapezoid(&eta, snapshot.grid.dx()))
}

/// Central differences inside, one-sided differences at the two ends.
pub fn derivative(values: &[f64], dx: f64) -> Vec<f64> {
    let n = values.len();
    (0..n)
        .map(|i| {
            if i == 0 {
                (values[1] - values[0]) / dx
            } else if i == n - 1 {
                (values[n - 1] - values[n - 2]) / dx
            } else {
                (values[i + 1] - values[i - 1]) / (2.0 * dx)
            }
        })
        .collect()
}

fn difference(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `∫ μΘ(δu_x)²/(vθ) + κ(v,θ)Θ(δθ_x)²/(vθ²) dx`.
pub fn dissipation_rate(gp: &GasParams, snapshot: &FieldSnapshot, profile: &WaveProfile) -> Result<f64> {
    check_aligned(snapshot, profile)?;
    let dx = snapshot.grid.dx();
    let du_x = derivative(&difference(&snapshot.u, &profile.u), dx);
    let dth_x = derivative(&difference(&snapshot.theta, &profile.theta), dx);
    let integrand: Vec<f64> = (0..snapshot.grid.n())
        .map(|i| {
            let (v, th, big_th) = (snapshot.v[i], snapshot.theta[i], profile.theta[i]);
            gp.mu * big_th * du_x[i] * du_x[i] / (v * th)
                + gp.kappa(v, th) * big_th * dth_x[i] * dth_x[i] / (v * th * th)
        })
        .collect();
    Ok(numerics::trapezoid(&integrand, dx))
}

/// Discrete H¹ norm of `(δv, δu, δθ)`.
pub fn h1_perturbation(snapshot: &FieldSnapshot, profile: &WaveProfile) -> Result<f64> {
    check_aligned(snapshot, profile)?;
    let dx = snapshot.grid.dx();
    let mut total = 0.0;
    for (a, b) in [(&snapshot.v, &profile.v), (&snapshot.u, &profile.u), (&snapshot.theta, &profile.theta)] {
        let d = difference(a, b);
        let dd = derivative(&d, dx);
        let sq: Vec<f64> = d.iter().zip(&dd).map(|(x, y)| x * x + y * y).collect();
        total += numerics::trapezoid(&sq, dx);
    }
    Ok(total.sqrt())
}

/// Max over nodes of `|v − V^R|`, `|u − U^R|`, `|s − s̄|` and `|z|` with the
/// fan evaluated at `ξ = x/t`.
pub fn sup_distance_to_fan(pattern: &WavePattern, snapshot: &FieldSnapshot) -> Result<FanDistance> {
    let gp = pattern.gas();
    let s_bar = pattern.riemann().s_bar;
    let fan = pattern.sample_fan(snapshot.t, &snapshot.grid)?;
    let mut d = FanDistance { v: 0.0, u: 0.0, s: 0.0, z: 0.0 };
    for i in 0..snapshot.grid.n() {
        d.v = d.v.max((snapshot.v[i] - fan.v[i]).abs());
        d.u = d.u.max((snapshot.u[i] - fan.u[i]).abs());
        d.s = d.s.max((gp.s(snapshot.v[i], snapshot.theta[i]) - s_bar).abs());
        d.z = d.z.max(snapshot.z[i].abs());
    }
    Ok(d)
}

pub fn bounds_report(snapshot: &FieldSnapshot) -> Bounds {
    let min = |a: &[f64]| a.iter().copied().fold(f64::INFINITY, f64::min);
    let max = |a: &[f64]| a.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Bounds {
        min_v: min(&snapshot.v),
        max_v: max(&snapshot.v),
        min_theta: min(&snapshot.theta),
        max_theta: max(&snapshot.theta),
        min_z: min(&snapshot.z),
        max_z: max(&snapshot.z),
        reactant_mass: numerics::trapezoid(&snapshot.z, snapshot.grid.dx()),
    }
}

/// All diagnostics of `snapshot`; `profile` is the smooth wave at the same
/// time on the same grid.
pub fn record(pattern: &WavePattern, snapshot: &FieldSnapshot, profile: &WaveProfile) -> Result<DiagnosticsRecord> {
    let gp = pattern.gas();
    let fan = sup_distance_to_fan(pattern, snapshot)?;
    let b = bounds_report(snapshot);
    Ok(DiagnosticsRecord {
        t: snapshot.t,
        sup_v: fan.v,
        sup_u: fan.u,
        sup_s: fan.s,
        sup_z: fan.z,
        eta_total: total_relative_entropy(gp, snapshot, profile)?,
        dissipation: dissipation_rate(gp, snapshot, profile)?,
        h1_perturbation: h1_perturbation(snapshot, profile)?,
        min_v: b.min_v,
        max_v: b.max_v,
        min_theta: b.min_theta,
        max_theta: b.max_theta,
        min_z: b.min_z,
        max_z: b.max_z,
        reactant_mass: b.reactant_mass,
    })
}
