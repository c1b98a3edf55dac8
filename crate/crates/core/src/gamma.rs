//! Gamma-function family used by the Lommel series and the integral routes.

use crate::error::{NumericError, Result};

const MAX_ITER: usize = 10_000;
const REL_TARGET: f64 = 1e-15;

/// `true` when `a` is a pole of Γ, i.e. `a ∈ {0, −1, −2, …}`.
pub fn is_gamma_pole(a: f64) -> bool {
    a <= 0.0 && a == a.floor()
}

/// `1/Γ(a)`, equal to exactly `0` at the poles of Γ.
pub fn reciprocal_gamma(a: f64) -> f64 {
    if a.is_nan() {
        return f64::NAN;
    }
    if is_gamma_pole(a) {
        return 0.0;
    }
    if a > -170.0 {
        let g = libm::tgamma(a);
        if g.is_finite() {
            return 1.0 / g;
        }
    }
    match ln_reciprocal_gamma(a) {
        Some((ln, sign)) => sign * (ln).exp(),
        None => 0.0,
    }
}

/// `(ln|1/Γ(a)|, sign(1/Γ(a)))`, or `None` at a pole.
pub fn ln_reciprocal_gamma(a: f64) -> Option<(f64, f64)> {
    if is_gamma_pole(a) {
        return None;
    }
    let (lg, sign) = libm::lgamma_r(a);
    Some((-lg, if sign < 0 { -1.0 } else { 1.0 }))
}

/// `ln Γ(a)` for `a > 0`.
pub fn ln_gamma(a: f64) -> f64 {
    libm::lgamma_r(a).0
}

/// Lower incomplete gamma function `γ(a, x) = ∫₀ˣ e^{−u} u^{a−1} du`.
pub fn lower_incomplete_gamma(a: f64, x: f64) -> Result<f64> {
    check_args(a, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(ln_lower_incomplete_gamma(a, x)?.exp())
}

/// `ln γ(a, x)` for `a > 0`, `x > 0`. Stays finite when `γ` itself would
/// overflow or underflow.
///
/// Series expansion for `x < a + 1`, Lentz continued fraction for the
/// complement otherwise.
pub fn ln_lower_incomplete_gamma(a: f64, x: f64) -> Result<f64> {
    check_args(a, x)?;
    if x == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if x < a + 1.0 {
        let sum = lower_series(a, x)?;
        Ok(a * x.ln() - x + sum.ln())
    } else {
        let q = upper_regularized_cf(a, x)?;
        Ok(ln_gamma(a) + (-q).ln_1p())
    }
}

/// `ln(γ(a, y) · y^{−a} e^{y})`, which tends to `−ln a` as `y → 0`.
///
/// Keeping the `y^a e^{−y}` factor outside lets callers combine it
/// analytically with other powers instead of cancelling large logarithms.
pub fn ln_lower_gamma_scaled(a: f64, y: f64) -> Result<f64> {
    check_args(a, y)?;
    if y == 0.0 {
        return Ok(-a.ln());
    }
    if y < a + 1.0 {
        Ok(lower_series(a, y)?.ln())
    } else {
        Ok(ln_lower_incomplete_gamma(a, y)? - a * y.ln() + y)
    }
}

/// Regularized lower incomplete gamma `P(a, x) = γ(a, x)/Γ(a)`.
pub fn regularized_lower_gamma(a: f64, x: f64) -> Result<f64> {
    check_args(a, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x < a + 1.0 {
        let sum = lower_series(a, x)?;
        Ok((a * x.ln() - x - ln_gamma(a) + sum.ln()).exp())
    } else {
        Ok(1.0 - upper_regularized_cf(a, x)?)
    }
}

fn check_args(a: f64, x: f64) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(NumericError::domain(format!(
            "incomplete gamma needs a > 0, got a = {a}"
        )));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(NumericError::domain(format!(
            "incomplete gamma needs finite x >= 0, got x = {x}"
        )));
    }
    Ok(())
}

// Σ_{n≥0} x^n / (a (a+1) ⋯ (a+n)), so that γ(a,x) = x^a e^{−x} · Σ.
fn lower_series(a: f64, x: f64) -> Result<f64> {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut denom = a;
    for _ in 0..MAX_ITER {
        denom += 1.0;
        term *= x / denom;
        sum += term;
        if term.abs() < sum.abs() * REL_TARGET * 0.1 {
            return Ok(sum);
        }
    }
    Err(NumericError::NotConverged {
        estimate: sum,
        error: term.abs(),
        evals: MAX_ITER,
    })
}

// Q(a, x) = Γ(a, x)/Γ(a) by the modified Lentz algorithm.
fn upper_regularized_cf(a: f64, x: f64) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < REL_TARGET * 0.1 {
            return Ok((a * x.ln() - x - ln_gamma(a)).exp() * h);
        }
    }
    Err(NumericError::NotConverged {
        estimate: h,
        error: f64::NAN,
        evals: MAX_ITER,
    })
}
