//! Rarefaction curves of the reduced Euler system at a common entropy and the
//! exact centred Riemann fan.

use crate::numerics::{self, NumericError, RootOptions};
use crate::thermo::{self, EntropyState, Family, GasParams, DEFAULT_ENTROPY_TOL};
use crate::{Error, Result};

/// Absolute tolerance of the curve quadratures.
pub const CURVE_QUAD_TOL: f64 = 1e-10;

const V_MIN: f64 = 1e-8;
const V_MAX: f64 = 1e8;

/// A far-field state `(v, u, θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FarState {
    pub v: f64,
    pub u: f64,
    pub theta: f64,
}

impl FarState {
    pub fn new(v: f64, u: f64, theta: f64) -> Self {
        Self { v, u, theta }
    }
}

/// The constant state between the 1-wave and the 3-wave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MidState {
    pub v: f64,
    pub u: f64,
    pub theta: f64,
}

/// Far-field data of a composite 1-rarefaction / 3-rarefaction pattern.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannData {
    pub left: FarState,
    pub right: FarState,
    /// Common entropy of both far fields.
    pub s_bar: f64,
    /// Wave strength `|v₋ − v₊| + |u₋ − u₊|`.
    pub delta: f64,
    mid: MidState,
}

impl RiemannData {
    /// Validates the far fields and solves for the intermediate state.
    ///
    /// The two far-field entropies must agree to `entropy_tol`; their mean is
    /// used as `s̄`.
    pub fn new(gp: &GasParams, left: FarState, right: FarState, entropy_tol: f64) -> Result<Self> {
        let mut bad = Vec::new();
        for (name, st) in [("minus", left), ("plus", right)] {
            if !(st.v > 0.0 && st.v.is_finite()) {
                bad.push(format!("v_{name} must be > 0, got {}", st.v));
            }
            if !(st.theta > 0.0 && st.theta.is_finite()) {
                bad.push(format!("theta_{name} must be > 0, got {}", st.theta));
            }
            if !st.u.is_finite() {
                bad.push(format!("u_{name} must be finite, got {}", st.u));
            }
        }
        if !bad.is_empty() {
            return Err(Error::Domain(bad.join("; ")));
        }
        let s_minus = gp.s(left.v, left.theta);
        let s_plus = gp.s(right.v, right.theta);
        if !((s_minus - s_plus).abs() <= entropy_tol) {
            return Err(Error::InvalidScenario(format!(
                "far-field entropies differ: s_minus = {s_minus}, s_plus = {s_plus}; \
                 rarefaction data requires s_plus = s_minus = s_bar to within {entropy_tol}"
            )));
        }
        let s_bar = 0.5 * (s_minus + s_plus);
        let delta = (left.v - right.v).abs() + (left.u - right.u).abs();
        let mid = solve_intermediate(gp, left, right, s_bar)?;
        Ok(Self { left, right, s_bar, delta, mid })
    }

    pub fn mid(&self) -> MidState {
        self.mid
    }
}

/// Lagrangian sound speed `√(−p̃_v(v, s))`.
pub fn sound_speed(gp: &GasParams, v: f64, s: f64) -> Result<f64> {
    let pv = thermo::p_tilde_v(gp, EntropyState::new(v, s)?)?;
    Ok((-pv).sqrt())
}

fn sound_speed_or_nan(gp: &GasParams, v: f64, s: f64) -> f64 {
    sound_speed(gp, v, s).unwrap_or(f64::NAN)
}

/// `∫_{v0}^{v} √(−p̃_ξ(ξ, s)) dξ` by adaptive Gauss-Legendre.
pub fn isentrope_integral(gp: &GasParams, s: f64, v0: f64, v: f64, tol: f64) -> Result<f64> {
    numerics::integrate(|xi| sound_speed_or_nan(gp, xi, s), v0, v, tol).map_err(Error::from)
}

/// Velocity on the `family` rarefaction curve through `(v0, u0)` at volume `v`.
pub fn rarefaction_curve_u(gp: &GasParams, family: Family, anchor: (f64, f64), s_bar: f64, v: f64) -> Result<f64> {
    let (v0, u0) = anchor;
    if !(v > 0.0 && v0 > 0.0) {
        return Err(Error::Domain(format!("curve volumes must be > 0, got v0 = {v0}, v = {v}")));
    }
    let integral = isentrope_integral(gp, s_bar, v0, v, CURVE_QUAD_TOL)?;
    Ok(match family {
        Family::One => u0 + integral,
        Family::Three => u0 - integral,
    })
}

/// The volume `v` with `λ_family(v, s̄) = ω`.
///
/// Solved in `ln v` on `ln(−p̃_v) = ln ω²`, which decreases in `v` wherever
/// p̃ is convex in v. The bracket is grown from v = 1 inside [1e-8, 1e8].
pub fn invert_char_speed(gp: &GasParams, family: Family, omega: f64, s_bar: f64, tol: f64) -> Result<f64> {
    check_speed_sign(family, omega)?;
    let target = (omega * omega).ln();
    let resid = |y: f64| target - log_sound2(gp, y.exp(), s_bar);
    let (lo, hi) = numerics::expand_bracket_increasing(resid, 0.0, 0.5, V_MIN.ln(), V_MAX.ln())
        .map_err(|e| Error::Domain(format!("characteristic speed {omega} outside the attainable range: {e}")))?;
    invert_in_log_bracket(gp, omega, s_bar, lo, hi, tol)
}

/// As [`invert_char_speed`] with the root known to lie in `[v_a, v_b]`
/// (either order). Endpoint values are returned exactly when ω sits on them.
pub(crate) fn invert_char_speed_between(
    gp: &GasParams,
    family: Family,
    omega: f64,
    s_bar: f64,
    v_a: f64,
    v_b: f64,
    tol: f64,
) -> Result<f64> {
    check_speed_sign(family, omega)?;
    let (lo, hi) = (v_a.min(v_b).ln(), v_a.max(v_b).ln());
    match invert_in_log_bracket(gp, omega, s_bar, lo, hi, tol) {
        Ok(v) => Ok(v),
        Err(Error::Domain(_)) => {
            // ω within rounding of an end speed: take the closer end
            let target = (omega * omega).ln();
            let r_lo = (target - log_sound2(gp, lo.exp(), s_bar)).abs();
            let r_hi = (target - log_sound2(gp, hi.exp(), s_bar)).abs();
            if !(r_lo.min(r_hi) <= 1e-9) {
                return Err(Error::Domain(format!(
                    "characteristic speed {omega} not attained on [{}, {}]",
                    lo.exp(),
                    hi.exp()
                )));
            }
            Ok(if r_lo <= r_hi { v_a.min(v_b) } else { v_a.max(v_b) })
        }
        Err(e) => Err(e),
    }
}

fn check_speed_sign(family: Family, omega: f64) -> Result<()> {
    let ok = match family {
        Family::One => omega < 0.0,
        Family::Three => omega > 0.0,
    };
    if ok && omega.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("speed {omega} is not attainable by family {family:?}")))
    }
}

fn log_sound2(gp: &GasParams, v: f64, s: f64) -> f64 {
    match EntropyState::new(v, s).and_then(|es| thermo::p_tilde_v(gp, es)) {
        Ok(pv) if pv < 0.0 => (-pv).ln(),
        _ => f64::NAN,
    }
}

fn invert_in_log_bracket(gp: &GasParams, omega: f64, s_bar: f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if lo == hi {
        return Ok(lo.exp());
    }
    let target = (omega * omega).ln();
    let y = numerics::newton_bisect(
        |y| {
            let v = y.exp();
            let theta = match EntropyState::new(v, s_bar)
                .and_then(|es| thermo::temperature_from_entropy(gp, es, DEFAULT_ENTROPY_TOL))
            {
                Ok(th) => th,
                Err(_) => return (f64::NAN, f64::NAN),
            };
            let pv = gp.p_tilde_v_at(v, theta);
            let (pvv, _, _) = gp.p_tilde_second_partials_at(v, theta);
            // d/dy [target − ln(−p̃_v)] = −v p̃_vv / p̃_v
            (target - (-pv).ln(), -v * pvv / pv)
        },
        lo,
        hi,
        RootOptions { x_tol: 1e-15 * (1.0 + lo.abs().max(hi.abs())), f_tol: tol, max_iter: 200 },
    )
    .map_err(|e| match e {
        NumericError::NotBracketed { .. } => {
            Error::Domain(format!("characteristic speed {omega} is not bracketed: {e}"))
        }
        other => Error::from(other),
    })?;
    Ok(y.exp())
}

/// Solves `u₋ + ∫_{v₋}^{v_m} c − ∫_{v_m}^{v₊} c = u₊` for the intermediate
/// state and checks rarefaction admissibility (`v_m ≥ max(v₋, v₊)`).
pub fn intermediate_state(gp: &GasParams, rd: &RiemannData) -> Result<MidState> {
    solve_intermediate(gp, rd.left, rd.right, rd.s_bar)
}

fn solve_intermediate(gp: &GasParams, left: FarState, right: FarState, s_bar: f64) -> Result<MidState> {
    let c_plus = isentrope_integral(gp, s_bar, left.v, right.v, CURVE_QUAD_TOL)?;
    let base = left.u - right.u - c_plus;
    // g(v) = u₋ − u₊ + 2∫_{v₋}^{v} c − ∫_{v₋}^{v₊} c, increasing in v
    let g = |v: f64| -> Result<f64> { Ok(base + 2.0 * isentrope_integral(gp, s_bar, left.v, v, CURVE_QUAD_TOL)?) };

    let v_lo = left.v.max(right.v);
    let g_lo = g(v_lo)?;
    let slack = 1e-9 * (1.0 + left.u.abs().max(right.u.abs()));
    let v_m = if g_lo.abs() <= slack {
        v_lo
    } else if g_lo > 0.0 {
        return Err(Error::NotRarefaction(format!(
            "the wave curves meet below max(v_minus, v_plus) = {v_lo} (g = {g_lo}); \
             the data needs a shock"
        )));
    } else {
        let v_cap = 1e4 * v_lo;
        let mut v_hi = 2.0 * v_lo;
        let mut a = v_lo;
        loop {
            let gh = g(v_hi)?;
            if gh >= 0.0 {
                break;
            }
            if v_hi >= v_cap {
                return Err(Error::NotRarefaction(format!(
                    "no intermediate state below v = {v_cap}: the rarefactions reach vacuum"
                )));
            }
            a = v_hi;
            v_hi = (2.0 * v_hi).min(v_cap);
        }
        // Newton on the accumulated integral from the bracket's left end
        let g_a = g(a)?;
        numerics::newton_bisect(
            |v| match isentrope_integral(gp, s_bar, a, v, CURVE_QUAD_TOL) {
                Ok(i) => (g_a + 2.0 * i, 2.0 * sound_speed_or_nan(gp, v, s_bar)),
                Err(_) => (f64::NAN, f64::NAN),
            },
            a,
            v_hi,
            RootOptions { x_tol: 1e-14 * v_hi, f_tol: 1e-13, max_iter: 200 },
        )?
    };

    let u_m = rarefaction_curve_u(gp, Family::One, (left.v, left.u), s_bar, v_m)?;
    let theta_m = thermo::temperature_from_entropy(gp, EntropyState::new(v_m, s_bar)?, DEFAULT_ENTROPY_TOL)?;
    if u_m < left.u - slack || right.u < u_m - slack {
        return Err(Error::NotRarefaction(format!(
            "admissibility violated: u_minus = {}, u_m = {u_m}, u_plus = {}",
            left.u, right.u
        )));
    }
    Ok(MidState { v: v_m, u: u_m, theta: theta_m })
}
