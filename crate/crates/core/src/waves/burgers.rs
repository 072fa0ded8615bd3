//! Inviscid Burgers equation with smooth monotone data, solved exactly along
//! characteristics.

use std::f64::consts::FRAC_PI_2;

use crate::numerics::{self, RootOptions};
use crate::{Error, Result};

/// Smooth increasing initial data
/// `w₀(x) = (w₊+w₋)/2 + (w₊−w₋)/2 · K_q ∫₀^{εx} (1+y²)^{−q} dy`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurgersSpec {
    w_minus: f64,
    w_plus: f64,
    eps: f64,
    q: f64,
    kq: f64,
}

impl BurgersSpec {
    /// Equal end states are accepted and give constant data.
    pub fn new(w_minus: f64, w_plus: f64, eps: f64, q: f64) -> Result<Self> {
        if !(w_minus.is_finite() && w_plus.is_finite() && w_minus <= w_plus) {
            return Err(Error::Domain(format!(
                "Burgers end states must satisfy w_minus <= w_plus, got ({w_minus}, {w_plus})"
            )));
        }
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::Domain(format!("smoothing parameter must be > 0, got {eps}")));
        }
        if !(q > 1.5 && q.is_finite()) {
            return Err(Error::Domain(format!("tail exponent must be > 3/2, got {q}")));
        }
        let kq = 1.0 / tail_integral(q, FRAC_PI_2)?;
        Ok(Self { w_minus, w_plus, eps, q, kq })
    }

    pub fn w_minus(&self) -> f64 {
        self.w_minus
    }

    pub fn w_plus(&self) -> f64 {
        self.w_plus
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn kq(&self) -> f64 {
        self.kq
    }

    pub fn is_degenerate(&self) -> bool {
        self.w_minus == self.w_plus
    }

    /// `w₀(x)`.
    pub fn initial(&self, x: f64) -> f64 {
        let mean = 0.5 * (self.w_plus + self.w_minus);
        if self.is_degenerate() {
            return mean;
        }
        let half = 0.5 * (self.w_plus - self.w_minus);
        let value = mean + half * self.kq * self.kernel_integral(self.eps * x);
        value.clamp(self.w_minus, self.w_plus)
    }

    /// `w₀'(x)`.
    pub fn initial_slope(&self, x: f64) -> f64 {
        let z = self.eps * x;
        0.5 * (self.w_plus - self.w_minus) * self.kq * self.eps * (1.0 + z * z).powf(-self.q)
    }

    /// `∫₀^z (1+y²)^{−q} dy`, odd in z.
    fn kernel_integral(&self, z: f64) -> f64 {
        if self.q == 2.0 {
            0.5 * (z / (1.0 + z * z) + z.atan())
        } else {
            let mag = tail_integral(self.q, z.abs().atan()).unwrap_or(f64::NAN);
            mag.copysign(z)
        }
    }

    /// Exact solution `w(t, x)` of `w_t + w w_x = 0`.
    ///
    /// The foot `x₀` of the characteristic through (t, x) solves
    /// `x₀ + t w₀(x₀) = x`; the left side is increasing in `x₀` and the root is
    /// bracketed by `[x − t w₊, x − t w₋]`.
    pub fn eval(&self, t: f64, x: f64, tol: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!("Burgers time must be >= 0, got {t}")));
        }
        if self.is_degenerate() {
            return Ok(self.w_minus);
        }
        if t == 0.0 {
            return Ok(self.initial(x));
        }
        let lo = x - t * self.w_plus;
        let hi = x - t * self.w_minus;
        // for large t the tails of w₀ saturate in floating point and the
        // sign change at an endpoint can be lost to rounding
        if lo + t * self.initial(lo) - x >= 0.0 {
            return Ok(self.initial(lo));
        }
        if hi + t * self.initial(hi) - x <= 0.0 {
            return Ok(self.initial(hi));
        }
        let x0 = numerics::newton_bisect(
            |x0| (x0 + t * self.initial(x0) - x, 1.0 + t * self.initial_slope(x0)),
            lo,
            hi,
            RootOptions { x_tol: tol, f_tol: 0.0, max_iter: 300 },
        )
        .map_err(|e| Error::Internal(format!("Burgers characteristic through (t={t}, x={x}): {e}")))?;
        let w = self.initial(x0);
        if !w.is_finite() {
            return Err(Error::Internal(format!("non-finite Burgers value at (t={t}, x={x})")));
        }
        Ok(w)
    }

    /// Centred rarefaction `ω^R(ξ)` of the Riemann problem with states w₋, w₊.
    pub fn rarefaction(&self, xi: f64) -> f64 {
        xi.clamp(self.w_minus, self.w_plus)
    }
}

/// `∫₀^{atan z} cos^{2q−2}φ dφ`, which equals `∫₀^z (1+y²)^{−q} dy`.
fn tail_integral(q: f64, upper_angle: f64) -> Result<f64> {
    if q == 2.0 {
        // closed form of ∫ cos² = (φ + sin φ cos φ)/2
        return Ok(0.5 * (upper_angle + upper_angle.sin() * upper_angle.cos()));
    }
    let p = 2.0 * q - 2.0;
    numerics::integrate(|phi: f64| phi.cos().max(0.0).powf(p), 0.0, upper_angle, 1e-15).map_err(Error::from)
}

pub fn burgers_initial(spec: &BurgersSpec, x: f64) -> f64 {
    spec.initial(x)
}

pub fn burgers_eval(spec: &BurgersSpec, t: f64, x: f64, tol: f64) -> Result<f64> {
    spec.eval(t, x, tol)
}

/// Default characteristic tolerance `1e-12 (1 + |x|)`.
pub fn default_tol(x: f64) -> f64 {
    1e-12 * (1.0 + x.abs())
}
