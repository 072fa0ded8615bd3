//! Constitutive laws of a radiative, reactive gas.
//!
//! The state equations are the ideal polytropic laws plus a Stefan-Boltzmann
//! radiative part,
//!
//! ```text
//! p(v, θ) = Rθ/v + aθ⁴/3
//! e(v, θ) = C_v θ + a v θ⁴
//! s(v, θ) = C_v ln θ + (4/3) a v θ³ + R ln v
//! ```
//!
//! Writing the pressure in terms of volume and entropy, p̃(v, s) = p(v, θ̃(v, s)),
//! requires inverting s for θ. Everything that involves p̃ goes through that
//! inversion once and then uses closed-form partials of p and s in (v, θ).

use serde::{Deserialize, Serialize};

use crate::numerics::{self, RootOptions};
use crate::{Error, Result};

/// Default relative tolerance on the entropy residual when inverting for θ.
pub const DEFAULT_ENTROPY_TOL: f64 = 1e-12;

const THETA_MIN: f64 = 1e-12;
const THETA_MAX: f64 = 1e12;

/// Physical constants of the model.
///
/// All quantities are dimensionless.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasParams {
    /// Perfect gas constant R.
    #[serde(rename = "R")]
    pub r: f64,
    /// Specific heat at constant volume.
    #[serde(rename = "Cv")]
    pub cv: f64,
    /// Radiation constant a.
    #[serde(rename = "a")]
    pub rad: f64,
    /// Viscosity μ.
    #[serde(rename = "mu")]
    pub mu: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    /// Temperature exponent of the conductivity.
    pub b: f64,
    /// Species diffusion coefficient.
    pub d: f64,
    /// Heat release per unit reactant.
    #[serde(rename = "lambda_heat")]
    pub heat_release: f64,
    /// Arrhenius prefactor K.
    #[serde(rename = "K")]
    pub rate_prefactor: f64,
    /// Activation energy A.
    #[serde(rename = "A")]
    pub activation: f64,
    /// Temperature exponent β of the reaction rate.
    #[serde(rename = "beta")]
    pub rate_exponent: f64,
}

impl Default for GasParams {
    fn default() -> Self {
        Self {
            r: 1.0,
            cv: 1.5,
            rad: 0.0,
            mu: 1.0,
            kappa1: 1.0,
            kappa2: 0.1,
            b: 3.0,
            d: 1.0,
            heat_release: 1.0,
            rate_prefactor: 1.0,
            activation: 1.0,
            rate_exponent: 0.0,
        }
    }
}

impl GasParams {
    /// Ideal polytropic gas with `C_v = 3R/2` and no radiation.
    pub fn ideal(r: f64) -> Self {
        Self {
            r,
            cv: 1.5 * r,
            rad: 0.0,
            ..Self::default()
        }
    }

    pub fn with_radiation(mut self, a: f64) -> Self {
        self.rad = a;
        self
    }

    /// Lists every violated positivity constraint as `(field, message)`.
    pub fn violations(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        let mut positive = |name: &'static str, x: f64| {
            if !(x > 0.0 && x.is_finite()) {
                out.push((name, format!("must be a finite number > 0, got {x}")));
            }
        };
        positive("R", self.r);
        positive("Cv", self.cv);
        positive("mu", self.mu);
        positive("kappa1", self.kappa1);
        positive("b", self.b);
        positive("d", self.d);
        let mut nonneg = |name: &'static str, x: f64| {
            if !(x >= 0.0 && x.is_finite()) {
                out.push((name, format!("must be a finite number >= 0, got {x}")));
            }
        };
        nonneg("a", self.rad);
        nonneg("kappa2", self.kappa2);
        nonneg("lambda_heat", self.heat_release);
        nonneg("K", self.rate_prefactor);
        nonneg("A", self.activation);
        nonneg("beta", self.rate_exponent);
        out
    }

    pub fn validate(self) -> Result<Self> {
        let bad = self.violations();
        if bad.is_empty() {
            Ok(self)
        } else {
            let msg: Vec<String> = bad.into_iter().map(|(k, m)| format!("{k}: {m}")).collect();
            Err(Error::Domain(msg.join("; ")))
        }
    }

    // Raw (v, θ) kernels. Callers guarantee v, θ > 0.

    #[inline]
    pub fn p(&self, v: f64, theta: f64) -> f64 {
        self.r * theta / v + self.rad * theta.powi(4) / 3.0
    }

    #[inline]
    pub fn e(&self, v: f64, theta: f64) -> f64 {
        self.cv * theta + self.rad * v * theta.powi(4)
    }

    #[inline]
    pub fn s(&self, v: f64, theta: f64) -> f64 {
        self.cv * theta.ln() + 4.0 / 3.0 * self.rad * v * theta.powi(3) + self.r * v.ln()
    }

    /// ∂p/∂θ, which equals ∂s/∂v (Maxwell relation).
    #[inline]
    pub fn p_theta(&self, v: f64, theta: f64) -> f64 {
        self.r / v + 4.0 / 3.0 * self.rad * theta.powi(3)
    }

    #[inline]
    pub fn p_v(&self, v: f64, theta: f64) -> f64 {
        -self.r * theta / (v * v)
    }

    #[inline]
    pub fn s_v(&self, v: f64, theta: f64) -> f64 {
        4.0 / 3.0 * self.rad * theta.powi(3) + self.r / v
    }

    #[inline]
    pub fn s_theta(&self, v: f64, theta: f64) -> f64 {
        self.cv / theta + 4.0 * self.rad * v * theta * theta
    }

    #[inline]
    pub fn e_theta(&self, v: f64, theta: f64) -> f64 {
        self.cv + 4.0 * self.rad * v * theta.powi(3)
    }

    #[inline]
    pub fn kappa(&self, v: f64, theta: f64) -> f64 {
        self.kappa1 + self.kappa2 * v * theta.powf(self.b)
    }

    #[inline]
    pub fn phi(&self, theta: f64) -> f64 {
        let base = self.rate_prefactor * (-self.activation / theta).exp();
        if self.rate_exponent == 0.0 {
            base
        } else {
            base * theta.powf(self.rate_exponent)
        }
    }

    /// ∂p̃/∂v at the entropy of (v, θ): p_v − p_θ s_v / s_θ.
    #[inline]
    pub fn p_tilde_v_at(&self, v: f64, theta: f64) -> f64 {
        let p_th = self.p_theta(v, theta);
        self.p_v(v, theta) - p_th * p_th / self.s_theta(v, theta)
    }

    /// Second partials of p̃ by repeated implicit differentiation through θ̃.
    ///
    /// Returns `(p̃_vv, p̃_vs, p̃_ss)` evaluated at the entropy of (v, θ).
    pub fn p_tilde_second_partials_at(&self, v: f64, theta: f64) -> (f64, f64, f64) {
        let (r, cv, a) = (self.r, self.cv, self.rad);
        let p_th = self.p_theta(v, theta);
        let s_th = self.s_theta(v, theta);
        let p_vv = 2.0 * r * theta / (v * v * v);
        let p_vth = -r / (v * v);
        let p_thth = 4.0 * a * theta * theta;
        let s_thv = 4.0 * a * theta * theta;
        let s_thth = -cv / (theta * theta) + 8.0 * a * v * theta;

        // P(v, θ) = p_v − p_θ²/s_θ is p̃_v expressed in (v, θ)
        let dp_dv = p_vv - 2.0 * p_th * p_vth / s_th + p_th * p_th * s_thv / (s_th * s_th);
        let dp_dth = p_vth - 2.0 * p_th * p_thth / s_th + p_th * p_th * s_thth / (s_th * s_th);
        let theta_v = -p_th / s_th;
        let tilde_vv = dp_dv + dp_dth * theta_v;
        let tilde_vs = dp_dth / s_th;
        let tilde_ss = (p_thth / s_th - p_th * s_thth / (s_th * s_th)) / s_th;
        (tilde_vv, tilde_vs, tilde_ss)
    }
}

/// A thermodynamic state in (v, θ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoState {
    v: f64,
    theta: f64,
}

impl ThermoState {
    pub fn new(v: f64, theta: f64) -> Result<Self> {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Domain(format!("specific volume must be > 0, got {v}")));
        }
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(Error::Domain(format!("temperature must be > 0, got {theta}")));
        }
        Ok(Self { v, theta })
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// A thermodynamic state in (v, s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyState {
    v: f64,
    s: f64,
}

impl EntropyState {
    pub fn new(v: f64, s: f64) -> Result<Self> {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Domain(format!("specific volume must be > 0, got {v}")));
        }
        if !s.is_finite() {
            return Err(Error::Domain(format!("entropy must be finite, got {s}")));
        }
        Ok(Self { v, s })
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn s(&self) -> f64 {
        self.s
    }
}

/// Characteristic family of the reduced Euler system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// λ₁ = −√(−p̃_v), left-moving.
    One,
    /// λ₃ = +√(−p̃_v), right-moving.
    Three,
}

impl Family {
    pub fn sign(self) -> f64 {
        match self {
            Family::One => -1.0,
            Family::Three => 1.0,
        }
    }
}

/// Second derivatives of p̃(v, s) and the resulting convexity verdict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HessianReport {
    pub p_vv: f64,
    pub p_vs: f64,
    pub p_ss: f64,
    pub det: f64,
    pub convex: bool,
}

impl HessianReport {
    /// `p_vv p_ss − p_vs²` from the stored partials, for comparison with `det`.
    pub fn reconstructed_det(&self) -> f64 {
        self.p_vv * self.p_ss - self.p_vs * self.p_vs
    }
}

pub fn pressure(gp: &GasParams, st: ThermoState) -> f64 {
    gp.p(st.v, st.theta)
}

pub fn internal_energy(gp: &GasParams, st: ThermoState) -> f64 {
    gp.e(st.v, st.theta)
}

pub fn entropy(gp: &GasParams, st: ThermoState) -> f64 {
    gp.s(st.v, st.theta)
}

/// θ̃(v, s): the unique temperature with `s(v, θ) = s`.
///
/// Solved in ln θ, where the entropy is increasing and convex, by a bracketed
/// Newton iteration. The bracket is grown geometrically from θ = 1 and may not
/// leave [1e-12, 1e12].
pub fn temperature_from_entropy(gp: &GasParams, es: EntropyState, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be > 0, got {tol}")));
    }
    let (v, s) = (es.v, es.s);
    let shift = gp.r * v.ln() - s;
    let rad = 4.0 / 3.0 * gp.rad * v;
    let resid = |y: f64| gp.cv * y + rad * (3.0 * y).exp() + shift;
    let f_tol = tol * s.abs().max(1.0);

    let (lo, hi) = numerics::expand_bracket_increasing(resid, 0.0, 1.0, THETA_MIN.ln(), THETA_MAX.ln())
        .map_err(|e| Error::NoConvergence(format!("temperature bracket for (v={v}, s={s}): {e}")))?;
    if lo == hi {
        return Ok(lo.exp());
    }
    let y = numerics::newton_bisect(
        |y| {
            let e3 = (3.0 * y).exp();
            (gp.cv * y + rad * e3 + shift, gp.cv + 3.0 * rad * e3)
        },
        lo,
        hi,
        RootOptions {
            x_tol: 4.0 * f64::EPSILON * (1.0 + lo.abs().max(hi.abs())),
            f_tol,
            max_iter: 200,
        },
    )
    .map_err(|e| Error::NoConvergence(format!("temperature from entropy (v={v}, s={s}): {e}")))?;
    Ok(y.exp())
}

pub fn p_tilde(gp: &GasParams, es: EntropyState) -> Result<f64> {
    let theta = temperature_from_entropy(gp, es, DEFAULT_ENTROPY_TOL)?;
    Ok(gp.p(es.v, theta))
}

/// ∂p̃/∂v at fixed entropy. Strictly negative for valid states.
pub fn p_tilde_v(gp: &GasParams, es: EntropyState) -> Result<f64> {
    let theta = temperature_from_entropy(gp, es, DEFAULT_ENTROPY_TOL)?;
    Ok(gp.p_tilde_v_at(es.v, theta))
}

/// ∂p̃/∂s at fixed volume: p_θ / s_θ.
pub fn p_tilde_s(gp: &GasParams, es: EntropyState) -> Result<f64> {
    let theta = temperature_from_entropy(gp, es, DEFAULT_ENTROPY_TOL)?;
    Ok(gp.p_theta(es.v, theta) / gp.s_theta(es.v, theta))
}

pub fn p_tilde_hessian(gp: &GasParams, es: EntropyState) -> Result<HessianReport> {
    let theta = temperature_from_entropy(gp, es, DEFAULT_ENTROPY_TOL)?;
    Ok(hessian_at(gp, es.v, theta))
}

/// Hessian of p̃ at the entropy of the state (v, θ).
///
/// `p_vv`, `p_ss` and `det` use the expanded polynomial forms in (v, θ);
/// `p_vs` comes from implicit differentiation.
pub fn hessian_at(gp: &GasParams, v: f64, theta: f64) -> HessianReport {
    let (r, cv, a) = (gp.r, gp.cv, gp.rad);
    let s_th = gp.s_theta(v, theta);
    let theta_s = 1.0 / s_th;
    let (r2, r3) = (r * r, r * r * r);
    let (cv2, cv3) = (cv * cv, cv * cv * cv);
    let (a2, a3, a4) = (a * a, a * a * a, a * a * a * a);
    let th2 = theta * theta;
    let th4 = th2 * th2;
    let th7 = th4 * th2 * theta;
    let th10 = th7 * th2 * theta;

    let p_vv = (1.0 / s_th.powi(3))
        * ((cv * r3 + 3.0 * cv2 * r2 + 2.0 * cv3 * r) / (v.powi(3) * th2)
            + (40.0 * a * cv * r2 + 28.0 * a * cv2 * r - 8.0 * a * r3) * theta / (v * v)
            + (496.0 * a2 * cv * r + 192.0 * a2 * r2) * th4 / (3.0 * v)
            + (640.0 * a3 * cv + 7488.0 * a3 * r) * th7 / 27.0
            + 1792.0 * a4 * v * th10 / 27.0);

    let p_ss = (theta_s * theta_s / s_th)
        * (cv * r / (v * th2) + (16.0 * a * cv / 3.0 - 8.0 * a * r) * theta + 16.0 * a2 * v * th4 / 3.0);

    let det = (theta_s * theta_s / (s_th * s_th))
        * ((cv * r3 + cv2 * r2) / (th2 * v.powi(4))
            + (32.0 * a * cv2 * r - 52.0 * a * cv * r2 - 24.0 * a * r3) * theta / (3.0 * v.powi(3))
            + (448.0 * a2 * cv * r - 1200.0 * a2 * r2) * th4 / (9.0 * v * v)
            - 320.0 * a3 * r * th7 / (9.0 * v)
            - 256.0 * a4 * th10 / 9.0);

    let (_, p_vs, _) = gp.p_tilde_second_partials_at(v, theta);

    HessianReport {
        p_vv,
        p_vs,
        p_ss,
        det,
        convex: p_vv > 0.0 && p_ss > 0.0 && det >= 0.0,
    }
}

/// λ₁ or λ₃ at (v, s).
pub fn char_speed(gp: &GasParams, family: Family, es: EntropyState) -> Result<f64> {
    let pv = p_tilde_v(gp, es)?;
    if !(pv < 0.0) {
        return Err(Error::Internal(format!(
            "p_tilde_v = {pv} is not negative at v = {}, s = {}",
            es.v, es.s
        )));
    }
    Ok(family.sign() * (-pv).sqrt())
}

pub fn reaction_rate(gp: &GasParams, theta: f64) -> f64 {
    gp.phi(theta)
}

pub fn conductivity(gp: &GasParams, st: ThermoState) -> f64 {
    gp.kappa(st.v, st.theta)
}

/// Tests convexity of p̃ on a tensor grid of (v, θ).
pub fn convex_on_grid(gp: &GasParams, vs: &[f64], thetas: &[f64]) -> bool {
    vs.iter()
        .all(|&v| thetas.iter().all(|&th| hessian_at(gp, v, th).convex))
}

/// Largest radiation constant (to within `tol`) for which p̃ stays convex on
/// the grid, found by bisection on `[0, a_max]`.
///
/// Returns `None` if p̃ is not convex even at `a = 0`, and `Some(a_max)` if it
/// is convex everywhere up to `a_max`.
pub fn convexity_threshold(gp: &GasParams, vs: &[f64], thetas: &[f64], a_max: f64, tol: f64) -> Option<f64> {
    let at = |a: f64| convex_on_grid(&gp.with_radiation(a), vs, thetas);
    if !at(0.0) {
        return None;
    }
    if at(a_max) {
        return Some(a_max);
    }
    let (mut lo, mut hi) = (0.0, a_max);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if at(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

/// `n` evenly spaced points on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn st(v: f64, th: f64) -> ThermoState {
        ThermoState::new(v, th).unwrap()
    }

    fn es(v: f64, s: f64) -> EntropyState {
        EntropyState::new(v, s).unwrap()
    }

    fn gas(r: f64, cv: f64, a: f64) -> GasParams {
        GasParams { r, cv, rad: a, ..GasParams::default() }
    }

    #[test]
    fn pressure_examples() {
        assert!((pressure(&gas(1.0, 1.5, 0.0), st(2.0, 3.0)) - 1.5).abs() < 1e-15);
        assert!((pressure(&gas(1.0, 1.5, 3.0), st(1.0, 1.0)) - 2.0).abs() < 1e-15);
        assert_eq!(pressure(&gas(2.5, 1.5, 0.0), st(1.0, 0.7)), 2.5 * 0.7);
    }

    #[test]
    fn energy_examples() {
        assert!((internal_energy(&gas(1.0, 1.5, 0.0), st(7.0, 2.0)) - 3.0).abs() < 1e-15);
        assert!((internal_energy(&gas(1.0, 1.5, 1.0), st(1.0, 1.0)) - 2.5).abs() < 1e-15);
        for v in [0.1, 1.0, 10.0] {
            assert_eq!(internal_energy(&gas(1.0, 1.5, 0.0), st(v, 2.0)), 3.0);
        }
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(&gas(1.0, 1.5, 0.0), st(1.0, 1.0)), 0.0);
        assert!((entropy(&gas(1.0, 1.5, 0.0), st(E, E)) - 2.5).abs() < 1e-15);
        assert!((entropy(&gas(0.3, 7.0, 3.0), st(1.0, 1.0)) - 4.0).abs() < 1e-15);
    }

    #[test]
    fn nonpositive_states_are_domain_errors() {
        assert!(matches!(ThermoState::new(0.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(ThermoState::new(1.0, -1.0), Err(Error::Domain(_))));
        assert!(matches!(EntropyState::new(-1.0, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn temperature_inversion_examples() {
        let g = gas(1.0, 1.5, 0.0);
        let th = temperature_from_entropy(&g, es(1.0, 1.5), 1e-12).unwrap();
        assert!((th - E).abs() < 1e-11);
        let th = temperature_from_entropy(&g, es(E, 1.0), 1e-12).unwrap();
        assert!((th - 1.0).abs() < 1e-11);
        let g = gas(1.0, 1.5, 0.1);
        let s = entropy(&g, st(1.0, 1.0));
        let th = temperature_from_entropy(&g, es(1.0, s), 1e-12).unwrap();
        assert!((th - 1.0).abs() < 1e-11);
    }

    #[test]
    fn temperature_inversion_overflow_guard() {
        // a = 0 would need θ = exp(100/1.5) far beyond the guard
        let r = temperature_from_entropy(&gas(1.0, 1.5, 0.0), es(1.0, 100.0), 1e-12);
        assert!(matches!(r, Err(Error::NoConvergence(_))));
        assert!(temperature_from_entropy(&gas(1.0, 1.5, 0.0), es(1.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn p_tilde_ideal_gas_closed_form() {
        let g = gas(1.0, 1.5, 0.0);
        assert!((p_tilde(&g, es(1.0, 0.0)).unwrap() - 1.0).abs() < 1e-12);
        assert!((p_tilde(&g, es(2.0, 0.0)).unwrap() - 0.314_980_262_473_718_3).abs() < 1e-12);
        let g = gas(1.0, 1.5, 0.2);
        let s = entropy(&g, st(1.7, 0.6));
        assert!((p_tilde(&g, es(1.7, s)).unwrap() - pressure(&g, st(1.7, 0.6))).abs() < 1e-12);
    }

    #[test]
    fn p_tilde_v_examples() {
        let g = gas(1.0, 1.5, 0.0);
        assert!((p_tilde_v(&g, es(1.0, 0.0)).unwrap() + 5.0 / 3.0).abs() < 1e-12);
        assert!((p_tilde_v(&g, es(2.0, 0.0)).unwrap() + 0.262_483_552_061_431_9).abs() < 1e-12);

        let g = gas(1.0, 1.5, 0.1);
        let s = entropy(&g, st(1.0, 1.0));
        let h = 1e-5;
        let fd = (p_tilde(&g, es(1.0 + h, s)).unwrap() - p_tilde(&g, es(1.0 - h, s)).unwrap()) / (2.0 * h);
        let exact = p_tilde_v(&g, es(1.0, s)).unwrap();
        assert!(((fd - exact) / exact).abs() < 1e-6, "fd {fd} exact {exact}");
    }

    #[test]
    fn ideal_gas_p_vv_two_closed_forms_agree() {
        let g = gas(1.0, 1.5, 0.0);
        let h = p_tilde_hessian(&g, es(1.0, 0.0)).unwrap();
        let gamma = 5.0 / 3.0;
        let closed = gamma * (gamma + 1.0);
        assert!((h.p_vv - closed).abs() < 1e-12);
        assert!((h.p_vv - 15.0 / 3.375).abs() < 1e-12);
        let (vv, _, _) = g.p_tilde_second_partials_at(1.0, 1.0);
        assert!((vv - closed).abs() < 1e-12);
    }

    #[test]
    fn ideal_gas_determinant_closed_form() {
        let (r, cv) = (1.0, 1.5);
        let g = gas(r, cv, 0.0);
        for &(v, th) in &[(0.3, 0.4), (1.0, 1.0), (4.0, 2.5)] {
            let h = hessian_at(&g, v, th);
            let s_th = cv / th;
            let expect = (1.0 / s_th.powi(4)) * (cv * r.powi(3) + cv * cv * r * r) / (th * th * v.powi(4));
            assert!(((h.det - expect) / expect).abs() < 1e-13);
            assert!(h.convex);
        }
    }

    #[test]
    fn p9_matches_reconstructed_determinant() {
        for a in [0.0, 1e-3, 0.1, 1.0] {
            let g = gas(1.0, 1.5, a);
            for v in linspace(0.5, 2.0, 5) {
                for th in linspace(0.5, 2.0, 5) {
                    let h = hessian_at(&g, v, th);
                    let scale = (h.p_vv * h.p_ss).abs().max(h.p_vs * h.p_vs);
                    assert!((h.reconstructed_det() - h.det).abs() <= 1e-6 * scale, "a={a} v={v} th={th}");
                }
            }
        }
    }

    #[test]
    fn chain_rule_and_polynomial_forms_agree() {
        for a in [0.0, 1e-3, 0.1, 2.0] {
            let g = gas(1.0, 1.5, a);
            for v in linspace(0.3, 3.0, 6) {
                for th in linspace(0.3, 3.0, 6) {
                    let h = hessian_at(&g, v, th);
                    let (vv, _, ss) = g.p_tilde_second_partials_at(v, th);
                    assert!((vv - h.p_vv).abs() <= 1e-10 * h.p_vv.abs().max(1e-8));
                    assert!((ss - h.p_ss).abs() <= 1e-10 * h.p_ss.abs().max(1e-8));
                }
            }
        }
    }

    #[test]
    fn char_speed_examples() {
        let g = gas(1.0, 1.5, 0.0);
        let l3 = char_speed(&g, Family::Three, es(1.0, 0.0)).unwrap();
        assert!((l3 - (5.0f64 / 3.0).sqrt()).abs() < 1e-12);
        let l1 = char_speed(&g, Family::One, es(1.0, 0.0)).unwrap();
        assert_eq!(l1, -l3);
        let mut prev = f64::INFINITY;
        for v in linspace(0.2, 5.0, 50) {
            let l = char_speed(&g, Family::Three, es(v, 0.0)).unwrap();
            assert!(l < prev);
            prev = l;
        }
    }

    #[test]
    fn reaction_rate_examples() {
        let mut g = GasParams { rate_prefactor: 1.0, activation: 0.0, rate_exponent: 0.0, ..GasParams::default() };
        assert_eq!(reaction_rate(&g, 0.37), 1.0);
        g = GasParams { rate_prefactor: 2.0, activation: 1.0, rate_exponent: 1.0, ..g };
        assert!((reaction_rate(&g, 1.0) - 2.0 / E).abs() < 1e-15);
        assert!(reaction_rate(&g, 1e-3) < 1e-300);
    }

    #[test]
    fn conductivity_examples() {
        let g = GasParams { kappa1: 1.0, kappa2: 0.0, ..GasParams::default() };
        assert_eq!(conductivity(&g, st(3.0, 9.0)), 1.0);
        let g = GasParams { kappa1: 1.0, kappa2: 2.0, b: 3.0, ..GasParams::default() };
        assert!((conductivity(&g, st(3.0, 2.0)) - 49.0).abs() < 1e-12);
        assert!(conductivity(&g, st(3.0, 2.1)) > conductivity(&g, st(3.0, 2.0)));
    }

    #[test]
    fn maxwell_relation_is_exact() {
        let g = gas(1.3, 2.0, 0.07);
        for v in linspace(0.1, 10.0, 7) {
            for th in linspace(0.1, 10.0, 7) {
                assert_eq!(g.p_theta(v, th), g.s_v(v, th));
            }
        }
    }

    #[test]
    fn parameter_validation_lists_all_violations() {
        let g = GasParams { r: -1.0, mu: 0.0, rate_exponent: -2.0, ..GasParams::default() };
        let bad: Vec<_> = g.violations().into_iter().map(|(k, _)| k).collect();
        assert_eq!(bad, vec!["R", "mu", "beta"]);
        assert!(GasParams::default().validate().is_ok());
    }

    #[test]
    fn threshold_bisection_brackets_flip() {
        let g = gas(1.0, 1.5, 0.0);
        let grid = linspace(0.5, 2.0, 5);
        let a_star = convexity_threshold(&g, &grid, &grid, 1.0, 1e-9).unwrap();
        assert!(convex_on_grid(&g.with_radiation(a_star), &grid, &grid));
        assert!(!convex_on_grid(&g.with_radiation(a_star + 2e-9), &grid, &grid));
    }
}
