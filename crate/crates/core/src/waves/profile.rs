//! The exact rarefaction fan and its smooth approximation built from two
//! Burgers solutions.

use rayon::prelude::*;

use super::burgers::{default_tol, BurgersSpec};
use super::riemann::{self, invert_char_speed_between, MidState, RiemannData, CURVE_QUAD_TOL};
use crate::grid::Grid1D;
use crate::thermo::{self, EntropyState, Family, GasParams, DEFAULT_ENTROPY_TOL};
use crate::{Error, Result};

const INVERSION_TOL: f64 = 1e-14;
const TABLE_NODES: usize = 65;

/// Smoothing options of the approximate wave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveOptions {
    /// Smoothing parameter ε; `None` uses the wave strength δ.
    pub eps: Option<f64>,
    /// Tail exponent q of the Burgers data.
    pub q: f64,
}

impl Default for WaveOptions {
    fn default() -> Self {
        Self { eps: None, q: 2.0 }
    }
}

/// `(V, U, Θ)` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavePoint {
    pub v: f64,
    pub u: f64,
    pub theta: f64,
}

/// Wave components sampled on a grid at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveProfile {
    pub t: f64,
    pub grid: Grid1D,
    pub v: Vec<f64>,
    pub u: Vec<f64>,
    pub theta: Vec<f64>,
    pub v_m: f64,
    pub u_m: f64,
    pub theta_m: f64,
}

impl WaveProfile {
    pub fn point(&self, i: usize) -> WavePoint {
        WavePoint { v: self.v[i], u: self.u[i], theta: self.theta[i] }
    }
}

/// Cumulative `∫ √(−p̃_v(ξ, s̄)) dξ` on a fixed set of nodes, so that curve
/// evaluations only integrate over one short sub-interval.
#[derive(Debug, Clone)]
struct IsentropeTable {
    gp: GasParams,
    s: f64,
    nodes: Vec<f64>,
    primitive: Vec<f64>,
}

impl IsentropeTable {
    fn new(gp: GasParams, s: f64, lo: f64, hi: f64) -> Result<Self> {
        let nodes = if lo == hi { vec![lo] } else { thermo::linspace(lo, hi, TABLE_NODES) };
        let mut primitive = Vec::with_capacity(nodes.len());
        let mut acc = 0.0;
        primitive.push(0.0);
        for w in nodes.windows(2) {
            acc += riemann::isentrope_integral(&gp, s, w[0], w[1], 1e-13)?;
            primitive.push(acc);
        }
        Ok(Self { gp, s, nodes, primitive })
    }

    /// `∫_{nodes[0]}^{v} c`.
    fn primitive(&self, v: f64) -> Result<f64> {
        let k = if self.nodes.len() == 1 {
            0
        } else {
            let h = self.nodes[1] - self.nodes[0];
            (((v - self.nodes[0]) / h).round().max(0.0) as usize).min(self.nodes.len() - 1)
        };
        let node = self.nodes[k];
        if node == v {
            return Ok(self.primitive[k]);
        }
        let rest = riemann::isentrope_integral(&self.gp, self.s, node, v, CURVE_QUAD_TOL * 1e-2)?;
        Ok(self.primitive[k] + rest)
    }
}

/// Everything needed to evaluate the exact fan and the smooth wave of one
/// Riemann configuration. Construction does the expensive one-off work
/// (intermediate state, end speeds, isentrope table).
#[derive(Debug, Clone)]
pub struct WavePattern {
    gp: GasParams,
    rd: RiemannData,
    mid: MidState,
    theta_minus: f64,
    theta_plus: f64,
    burgers1: BurgersSpec,
    burgers3: BurgersSpec,
    table: IsentropeTable,
    prim_minus: f64,
    prim_mid: f64,
}

impl WavePattern {
    pub fn new(gp: &GasParams, rd: &RiemannData, opts: WaveOptions) -> Result<Self> {
        let mid = rd.mid();
        let s = rd.s_bar;
        let theta_at = |v: f64| thermo::temperature_from_entropy(gp, EntropyState::new(v, s)?, DEFAULT_ENTROPY_TOL);
        let speed = |f: Family, v: f64| thermo::char_speed(gp, f, EntropyState::new(v, s)?);

        let eps = match opts.eps {
            Some(e) => e,
            None if rd.delta > 0.0 => rd.delta,
            None => 1.0,
        };
        let burgers1 = BurgersSpec::new(speed(Family::One, rd.left.v)?, speed(Family::One, mid.v)?, eps, opts.q)?;
        let burgers3 = BurgersSpec::new(speed(Family::Three, mid.v)?, speed(Family::Three, rd.right.v)?, eps, opts.q)?;

        let lo = rd.left.v.min(rd.right.v).min(mid.v);
        let hi = rd.left.v.max(rd.right.v).max(mid.v);
        let table = IsentropeTable::new(*gp, s, lo, hi)?;
        let prim_minus = table.primitive(rd.left.v)?;
        let prim_mid = table.primitive(mid.v)?;

        Ok(Self {
            gp: *gp,
            rd: *rd,
            mid,
            theta_minus: theta_at(rd.left.v)?,
            theta_plus: theta_at(rd.right.v)?,
            burgers1,
            burgers3,
            table,
            prim_minus,
            prim_mid,
        })
    }

    pub fn gas(&self) -> &GasParams {
        &self.gp
    }

    pub fn riemann(&self) -> &RiemannData {
        &self.rd
    }

    pub fn mid(&self) -> MidState {
        self.mid
    }

    pub fn burgers(&self, family: Family) -> &BurgersSpec {
        match family {
            Family::One => &self.burgers1,
            Family::Three => &self.burgers3,
        }
    }

    fn theta_of(&self, v: f64) -> Result<f64> {
        if v == self.rd.left.v {
            Ok(self.theta_minus)
        } else if v == self.rd.right.v {
            Ok(self.theta_plus)
        } else if v == self.mid.v {
            Ok(self.mid.theta)
        } else {
            thermo::temperature_from_entropy(&self.gp, EntropyState::new(v, self.rd.s_bar)?, DEFAULT_ENTROPY_TOL)
        }
    }

    /// Volume on the `family` wave whose characteristic speed is ω, clamped
    /// to the wave's end states.
    fn volume_for_speed(&self, family: Family, omega: f64) -> Result<f64> {
        let (spec, v_from, v_to) = match family {
            Family::One => (&self.burgers1, self.rd.left.v, self.mid.v),
            Family::Three => (&self.burgers3, self.mid.v, self.rd.right.v),
        };
        if spec.is_degenerate() || omega <= spec.w_minus() {
            Ok(v_from)
        } else if omega >= spec.w_plus() {
            Ok(v_to)
        } else {
            invert_char_speed_between(&self.gp, family, omega, self.rd.s_bar, v_from, v_to, INVERSION_TOL)
        }
    }

    /// Velocity on the 1-curve through the left state.
    fn u_one(&self, v: f64) -> Result<f64> {
        if v == self.rd.left.v {
            return Ok(self.rd.left.u);
        }
        Ok(self.rd.left.u + self.table.primitive(v)? - self.prim_minus)
    }

    /// Velocity on the 3-curve through the intermediate state.
    fn u_three(&self, v: f64) -> Result<f64> {
        if v == self.mid.v {
            return Ok(self.mid.u);
        }
        Ok(self.mid.u - (self.table.primitive(v)? - self.prim_mid))
    }

    /// Exact self-similar solution at `ξ = x/t`.
    pub fn fan(&self, xi: f64) -> Result<WavePoint> {
        let left = self.rd.left;
        let right = self.rd.right;
        if xi <= self.burgers1.w_minus() {
            return Ok(WavePoint { v: left.v, u: left.u, theta: self.theta_minus });
        }
        if xi < self.burgers1.w_plus() {
            let v = self.volume_for_speed(Family::One, xi)?;
            return Ok(WavePoint { v, u: self.u_one(v)?, theta: self.theta_of(v)? });
        }
        if xi <= self.burgers3.w_minus() {
            return Ok(WavePoint { v: self.mid.v, u: self.mid.u, theta: self.mid.theta });
        }
        if xi < self.burgers3.w_plus() {
            let v = self.volume_for_speed(Family::Three, xi)?;
            return Ok(WavePoint { v, u: self.u_three(v)?, theta: self.theta_of(v)? });
        }
        Ok(WavePoint { v: right.v, u: right.u, theta: self.theta_plus })
    }

    /// Fan at `(t, x)`. At `t = 0` the sign of `x` selects the far field and
    /// `x = 0` is sent to `ξ = 0`.
    pub fn fan_at(&self, t: f64, x: f64) -> Result<WavePoint> {
        if t > 0.0 {
            self.fan(x / t)
        } else if x < 0.0 {
            self.fan(f64::NEG_INFINITY)
        } else if x > 0.0 {
            self.fan(f64::INFINITY)
        } else {
            self.fan(0.0)
        }
    }

    /// Smooth approximate wave `(V, U, Θ)(t, x)`, built from the Burgers
    /// solutions at time `t + 1`.
    pub fn smooth(&self, t: f64, x: f64) -> Result<WavePoint> {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!("wave time must be >= 0, got {t}")));
        }
        let tau = t + 1.0;
        let tol = default_tol(x);
        let w1 = self.burgers1.eval(tau, x, tol)?;
        let w3 = self.burgers3.eval(tau, x, tol)?;
        let v1 = self.volume_for_speed(Family::One, w1)?;
        let v3 = self.volume_for_speed(Family::Three, w3)?;
        let u1 = self.u_one(v1)?;
        let u3 = self.u_three(v3)?;
        let v = v1 + v3 - self.mid.v;
        let u = u1 + u3 - self.mid.u;
        Ok(WavePoint { v, u, theta: self.theta_of(v)? })
    }

    pub fn sample_smooth(&self, t: f64, grid: &Grid1D) -> Result<WaveProfile> {
        self.sample(t, grid, |x| self.smooth(t, x))
    }

    pub fn sample_fan(&self, t: f64, grid: &Grid1D) -> Result<WaveProfile> {
        self.sample(t, grid, |x| self.fan_at(t, x))
    }

    fn sample<F>(&self, t: f64, grid: &Grid1D, f: F) -> Result<WaveProfile>
    where
        F: Fn(f64) -> Result<WavePoint> + Sync,
    {
        let points: Vec<WavePoint> = (0..grid.n())
            .into_par_iter()
            .map(|i| f(grid.x(i)))
            .collect::<Result<_>>()?;
        Ok(WaveProfile {
            t,
            grid: *grid,
            v: points.iter().map(|p| p.v).collect(),
            u: points.iter().map(|p| p.u).collect(),
            theta: points.iter().map(|p| p.theta).collect(),
            v_m: self.mid.v,
            u_m: self.mid.u,
            theta_m: self.mid.theta,
        })
    }
}

pub fn smooth_wave_eval(gp: &GasParams, rd: &RiemannData, opts: WaveOptions, t: f64, x: f64) -> Result<WavePoint> {
    WavePattern::new(gp, rd, opts)?.smooth(t, x)
}

pub fn riemann_fan_eval(gp: &GasParams, rd: &RiemannData, xi: f64) -> Result<WavePoint> {
    WavePattern::new(gp, rd, WaveOptions::default())?.fan(xi)
}

/// Max-norm distance between the smooth wave at time `t` and the fan, taken
/// over `ξ` samples (`x = ξ t`).
pub fn smooth_to_fan_distance(pattern: &WavePattern, t: f64, xis: &[f64]) -> Result<f64> {
    let d: Vec<f64> = xis
        .par_iter()
        .map(|&xi| {
            let a = pattern.smooth(t, xi * t)?;
            let b = pattern.fan(xi)?;
            Ok((a.v - b.v).abs().max((a.u - b.u).abs()).max((a.theta - b.theta).abs()))
        })
        .collect::<Result<_>>()?;
    Ok(d.into_iter().fold(0.0, f64::max))
}

/// Discrete L² norm squared of `∂V/∂x` for a sampled profile.
pub fn volume_gradient_l2_squared(profile: &WaveProfile) -> f64 {
    let dx = profile.grid.dx();
    profile.v.windows(2).map(|w| ((w[1] - w[0]) / dx).powi(2)).sum::<f64>() * dx
}
