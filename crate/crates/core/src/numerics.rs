//! Scalar root finding and quadrature shared by the thermodynamic and wave code.
//!
//! Everything here is deterministic: the same inputs always take the same
//! sequence of iterations, which the bit-exact output contract relies on.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("root not bracketed: f({lo}) = {f_lo}, f({hi}) = {f_hi}")]
    NotBracketed { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("bracket expansion left [{lower}, {upper}]")]
    BracketOverflow { lower: f64, upper: f64 },
    #[error("iteration limit reached near x = {last_x}")]
    IterationLimit { last_x: f64 },
    #[error("non-finite function value at x = {x}")]
    NonFinite { x: f64 },
    #[error("adaptive quadrature did not reach tolerance {tol} on [{a}, {b}]")]
    Quadrature { a: f64, b: f64, tol: f64 },
}

impl From<NumericError> for crate::Error {
    fn from(e: NumericError) -> Self {
        crate::Error::NoConvergence(e.to_string())
    }
}

/// Stopping rules for [`newton_bisect`].
#[derive(Debug, Clone, Copy)]
pub struct RootOptions {
    /// Absolute step / bracket width at which iteration stops.
    pub x_tol: f64,
    /// Residual magnitude at which iteration stops.
    pub f_tol: f64,
    pub max_iter: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            x_tol: 1e-14,
            f_tol: 0.0,
            max_iter: 200,
        }
    }
}

/// Safeguarded Newton iteration inside a sign-change bracket.
///
/// `f` returns the residual and its derivative. Newton steps that leave the
/// current bracket, or fail to halve the residual, are replaced by bisection,
/// so convergence only needs continuity and a sign change on `[lo, hi]`.
pub fn newton_bisect<F>(mut f: F, lo: f64, hi: f64, opts: RootOptions) -> Result<f64, NumericError>
where
    F: FnMut(f64) -> (f64, f64),
{
    let (f_lo, _) = f(lo);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    let (f_hi, _) = f(hi);
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if !f_lo.is_finite() || !f_hi.is_finite() || f_lo.signum() == f_hi.signum() {
        return Err(NumericError::NotBracketed { lo, hi, f_lo, f_hi });
    }
    // neg is the end with negative residual
    let (mut neg, mut pos) = if f_lo < 0.0 { (lo, hi) } else { (hi, lo) };
    let mut x = 0.5 * (lo + hi);
    let mut last_abs = f64::INFINITY;

    for _ in 0..opts.max_iter {
        let (fx, dfx) = f(x);
        if !fx.is_finite() {
            return Err(NumericError::NonFinite { x });
        }
        if fx.abs() <= opts.f_tol || fx == 0.0 {
            return Ok(x);
        }
        if fx < 0.0 {
            neg = x;
        } else {
            pos = x;
        }
        let (a, b) = if neg < pos { (neg, pos) } else { (pos, neg) };

        let newton = x - fx / dfx;
        let use_newton = dfx.is_finite()
            && dfx != 0.0
            && newton > a
            && newton < b
            && fx.abs() <= 0.5 * last_abs;
        let next = if use_newton { newton } else { 0.5 * (a + b) };
        last_abs = fx.abs();

        if (next - x).abs() <= opts.x_tol || (b - a) <= opts.x_tol {
            return Ok(next);
        }
        x = next;
    }
    Err(NumericError::IterationLimit { last_x: x })
}

/// Finds `[lo, hi]` with a sign change of an increasing function by geometric
/// expansion around `x0`, never leaving `[lower, upper]`.
pub fn expand_bracket_increasing<F>(
    mut f: F,
    x0: f64,
    step0: f64,
    lower: f64,
    upper: f64,
) -> Result<(f64, f64), NumericError>
where
    F: FnMut(f64) -> f64,
{
    let f0 = f(x0);
    if !f0.is_finite() {
        return Err(NumericError::NonFinite { x: x0 });
    }
    if f0 == 0.0 {
        return Ok((x0, x0));
    }
    let mut step = step0;
    let mut anchor = x0;
    for _ in 0..200 {
        if f0 < 0.0 {
            let probe = (anchor + step).min(upper);
            let fp = f(probe);
            if fp >= 0.0 {
                return Ok((anchor, probe));
            }
            if probe >= upper {
                break;
            }
            anchor = probe;
        } else {
            let probe = (anchor - step).max(lower);
            let fp = f(probe);
            if fp <= 0.0 {
                return Ok((probe, anchor));
            }
            if probe <= lower {
                break;
            }
            anchor = probe;
        }
        step *= 2.0;
    }
    Err(NumericError::BracketOverflow { lower, upper })
}

const GL10_NODES: [f64; 5] = [
    0.148_874_338_981_631_21,
    0.433_395_394_129_247_19,
    0.679_409_568_299_024_41,
    0.865_063_366_688_984_51,
    0.973_906_528_517_171_72,
];
const GL10_WEIGHTS: [f64; 5] = [
    0.295_524_224_714_752_87,
    0.269_266_719_309_996_36,
    0.219_086_362_515_982_04,
    0.149_451_349_150_580_59,
    0.066_671_344_308_688_14,
];

/// Ten-point Gauss-Legendre rule on `[a, b]`.
pub fn gauss_legendre10<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for (node, w) in GL10_NODES.iter().zip(GL10_WEIGHTS.iter()) {
        acc += w * (f(mid - half * node) + f(mid + half * node));
    }
    acc * half
}

/// Adaptive composite Gauss-Legendre quadrature to an absolute tolerance.
///
/// An interval is accepted when the ten-point rule on it agrees with the sum
/// over its two halves; otherwise both halves are refined with half the budget.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64) -> Result<f64, NumericError> {
    if a == b {
        return Ok(0.0);
    }
    let whole = gauss_legendre10(&mut f, a, b);
    let value = refine(&mut f, a, b, whole, abs_tol, 0)?;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(NumericError::Quadrature { a, b, tol: abs_tol })
    }
}

fn refine<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64, NumericError> {
    let mid = 0.5 * (a + b);
    let left = gauss_legendre10(f, a, mid);
    let right = gauss_legendre10(f, mid, b);
    let split = left + right;
    if (split - whole).abs() <= tol {
        return Ok(split);
    }
    if depth >= 40 || !split.is_finite() {
        return Err(NumericError::Quadrature { a, b, tol });
    }
    Ok(refine(f, a, mid, left, 0.5 * tol, depth + 1)? + refine(f, mid, b, right, 0.5 * tol, depth + 1)?)
}

/// Composite trapezoid rule for samples on a uniform grid.
pub fn trapezoid(values: &[f64], dx: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => {
            let inner: f64 = values[1..n - 1].iter().sum();
            dx * (inner + 0.5 * (values[0] + values[n - 1]))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_weights_sum_to_interval_length() {
        let s: f64 = GL10_WEIGHTS.iter().sum::<f64>() * 2.0;
        assert!((s - 2.0).abs() < 1e-15);
    }

    #[test]
    fn gl_is_exact_for_degree_19() {
        let v = gauss_legendre10(&mut |x: f64| x.powi(19) + x.powi(18), -1.0, 1.0);
        assert!((v - 2.0 / 19.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_quadrature_handles_peaked_integrand() {
        // integral of 1/(1+100x^2) over [-1,1] = atan(10)/5
        let v = integrate(|x| 1.0 / (1.0 + 100.0 * x * x), -1.0, 1.0, 1e-12).unwrap();
        assert!((v - 10f64.atan() / 5.0).abs() < 1e-11);
    }

    #[test]
    fn newton_bisect_finds_sqrt2() {
        let r = newton_bisect(|x| (x * x - 2.0, 2.0 * x), 0.0, 3.0, RootOptions::default()).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn newton_bisect_survives_flat_derivative() {
        // cube root has f' -> 0 at the root; bisection fallback keeps it inside
        let r = newton_bisect(|x| (x.powi(3), 3.0 * x * x), -1.0, 2.0, RootOptions::default()).unwrap();
        assert!(r.abs() < 1e-4);
    }

    #[test]
    fn unbracketed_root_is_reported() {
        let e = newton_bisect(|x| (x * x + 1.0, 2.0 * x), -1.0, 1.0, RootOptions::default());
        assert!(matches!(e, Err(NumericError::NotBracketed { .. })));
    }

    #[test]
    fn bracket_expansion_both_directions() {
        let (lo, hi) = expand_bracket_increasing(|x| x - 37.0, 0.0, 1.0, -1e3, 1e3).unwrap();
        assert!(lo <= 37.0 && hi >= 37.0);
        let (lo, hi) = expand_bracket_increasing(|x| x + 37.0, 0.0, 1.0, -1e3, 1e3).unwrap();
        assert!(lo <= -37.0 && hi >= -37.0);
        assert!(expand_bracket_increasing(|x| x - 1e9, 0.0, 1.0, -1e3, 1e3).is_err());
    }

    #[test]
    fn trapezoid_exact_for_linear() {
        let xs: Vec<f64> = (0..11).map(|i| i as f64 * 0.1).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x + 1.0).collect();
        assert!((trapezoid(&ys, 0.1) - 2.5).abs() < 1e-14);
    }
}
