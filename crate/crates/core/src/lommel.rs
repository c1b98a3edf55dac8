//! The normalised modified Lommel function of the first kind,
//!
//! ```text
//! t̃_{μ,ν}(x) = Σ_{k≥0} (x/2)^{μ+2k+1} / [Γ(k + (μ−ν+3)/2) Γ(k + (μ+ν+3)/2)],
//! ```
//!
//! together with the unnormalised `t_{μ,ν}`, the modified Struve function
//! `L_ν = t̃_{ν,ν}`, and the recurrence, asymptotic and ratio facts used by
//! the bounds.
//!
//! Series are summed in scaled form: every term is a mantissa times
//! `exp(offset)`, so neither large orders nor large `x` overflow an
//! intermediate. Results that do fit in an `f64` are returned as plain values;
//! [`ln_lommel_t_tilde`] gives the log-magnitude for callers that need to
//! go past `e^{709}`.

use serde::{Deserialize, Serialize};

use crate::error::{NumericError, Result};
use crate::gamma::{is_gamma_pole, ln_reciprocal_gamma, reciprocal_gamma};

/// Largest argument of `exp` that stays finite.
pub const LN_MAX: f64 = 709.782_712_893_384;

const MAX_TERMS: usize = 20_000;
const STOP_REL: f64 = 1e-17;

/// An order pair `(μ, ν)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LommelParams {
    pub mu: f64,
    pub nu: f64,
}

impl LommelParams {
    pub fn new(mu: f64, nu: f64) -> Self {
        LommelParams { mu, nu }
    }

    /// `μ + ν > −2`: the weighted integral converges at the origin.
    pub fn integrable(&self) -> bool {
        self.mu + self.nu > -2.0
    }

    /// `μ + ν > −2` and `μ − ν ≥ −3`: the integrand is positive.
    pub fn positive_integrand(&self) -> bool {
        self.integrable() && self.mu - self.nu >= -3.0
    }

    /// `μ > −1/2`, `1/2 ≤ ν < μ + 1`: `t̃_{μ,ν} < t̃_{μ−1,ν−1}` holds.
    pub fn monotone_regime(&self) -> bool {
        self.mu > -0.5 && 0.5 <= self.nu && self.nu < self.mu + 1.0
    }

    /// `(μ + n, ν + n)`.
    pub fn shifted(&self, n: f64) -> Self {
        LommelParams::new(self.mu + n, self.nu + n)
    }

    /// The two gamma arguments `(μ−ν+3)/2` and `(μ+ν+3)/2` of the series.
    pub fn series_gamma_args(&self) -> (f64, f64) {
        (
            (self.mu - self.nu + 3.0) / 2.0,
            (self.mu + self.nu + 3.0) / 2.0,
        )
    }
}

/// Value, absolute error estimate, and the number of series terms or
/// function evaluations that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub terms_or_evals: usize,
}

/// A signed value stored as `sign · exp(ln_abs)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledValue {
    pub ln_abs: f64,
    pub sign: f64,
    pub rel_error: f64,
    pub terms: usize,
}

impl ScaledValue {
    pub fn zero() -> Self {
        ScaledValue {
            ln_abs: f64::NEG_INFINITY,
            sign: 0.0,
            rel_error: 0.0,
            terms: 0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * self.ln_abs.exp()
        }
    }

    fn into_eval(self, what: &str) -> Result<EvalResult> {
        if self.ln_abs > LN_MAX {
            return Err(NumericError::Overflow(format!(
                "{what} exceeds f64 range (ln|value| = {:.3})",
                self.ln_abs
            )));
        }
        let value = self.to_f64();
        Ok(EvalResult {
            value,
            abs_error_estimate: (value.abs() * self.rel_error).max(0.0),
            terms_or_evals: self.terms,
        })
    }
}

/// Running sum of terms `mantissa · e^{offset}` kept relative to a moving
/// reference exponent.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ScaledSum {
    reference: f64,
    acc: f64,
    abs_acc: f64,
}

impl ScaledSum {
    pub(crate) fn new() -> Self {
        ScaledSum {
            reference: f64::NEG_INFINITY,
            acc: 0.0,
            abs_acc: 0.0,
        }
    }

    pub(crate) fn add(&mut self, mantissa: f64, offset: f64) {
        if mantissa == 0.0 {
            return;
        }
        if offset > self.reference {
            let shrink = (self.reference - offset).exp();
            self.acc *= shrink;
            self.abs_acc *= shrink;
            self.reference = offset;
        }
        let scaled = self.in_units(mantissa, offset);
        self.acc += scaled;
        self.abs_acc += scaled.abs();
    }

    /// `mantissa · e^{offset}` expressed in units of the current reference.
    pub(crate) fn in_units(&self, mantissa: f64, offset: f64) -> f64 {
        if offset == self.reference {
            mantissa
        } else {
            mantissa * (offset - self.reference).exp()
        }
    }

    /// `ln|sum|`.
    pub(crate) fn ln_abs(&self) -> f64 {
        self.reference + self.acc.abs().ln()
    }

    pub(crate) fn sign(&self) -> f64 {
        if self.acc == 0.0 {
            0.0
        } else {
            self.acc.signum()
        }
    }

    /// `Σ|terms| / |Σ terms|`.
    pub(crate) fn condition(&self) -> f64 {
        if self.acc == 0.0 {
            f64::INFINITY
        } else {
            self.abs_acc / self.acc.abs()
        }
    }

    /// `|term| / |sum|` for a term given in the same scaled form.
    pub(crate) fn relative(&self, mantissa: f64, offset: f64) -> f64 {
        (self.in_units(mantissa, offset) / self.acc).abs()
    }
}

/// Sum `Σ_{k≥k₀} (x/2)^{p₀+2k} / [Γ(k+a) Γ(k+b)]` in scaled arithmetic.
///
/// Terms where `k+a` or `k+b` is a pole of Γ vanish; summation starts at the
/// first index where both are regular.
pub(crate) fn scaled_power_series(power0: f64, a: f64, b: f64, x: f64) -> Result<ScaledValue> {
    let k0 = first_regular_index(a).max(first_regular_index(b));
    let (ln_ra, sa) = ln_reciprocal_gamma(k0 as f64 + a).expect("regular index");
    let (ln_rb, sb) = ln_reciprocal_gamma(k0 as f64 + b).expect("regular index");
    let lead_power = power0 + 2.0 * k0 as f64;

    if x == 0.0 {
        return if lead_power > 0.0 {
            Ok(ScaledValue::zero())
        } else if lead_power == 0.0 {
            Ok(ScaledValue {
                ln_abs: ln_ra + ln_rb,
                sign: sa * sb,
                rel_error: 4.0 * f64::EPSILON,
                terms: 1,
            })
        } else {
            Err(NumericError::domain(format!(
                "series has a negative leading power {lead_power} and diverges at x = 0"
            )))
        };
    }

    let half = 0.5 * x;
    let ln_half = half.ln();
    let q = half * half;

    let mut offset = lead_power * ln_half + ln_ra + ln_rb;
    let mut mantissa = sa * sb;
    let lead_ln_err = f64::EPSILON * (lead_power * ln_half).abs();
    let mut sum = ScaledSum::new();

    let mut k = k0;
    let mut terms = 0usize;
    loop {
        sum.add(mantissa, offset);
        terms += 1;

        let ka = k as f64 + a;
        let kb = k as f64 + b;
        let ratio = q / (ka * kb);
        mantissa *= ratio;
        k += 1;

        let m = mantissa.abs();
        if m != 0.0 && !(1e-200..=1e200).contains(&m) {
            offset += m.ln();
            mantissa = mantissa.signum();
        }

        // Past both poles the ratio magnitude decreases monotonically, so
        // |T_{k+1}| ρ/(1−ρ) bounds the whole remaining tail.
        let rho = ratio.abs();
        if ka > 0.0 && kb > 0.0 && rho < 1.0 {
            let tail_rel = sum.relative(mantissa, offset) / (1.0 - rho);
            if tail_rel < STOP_REL {
                let rounding = 4.0 * f64::EPSILON * terms as f64 * sum.condition();
                return Ok(ScaledValue {
                    ln_abs: sum.ln_abs(),
                    sign: sum.sign(),
                    rel_error: tail_rel + rounding + lead_ln_err + 4.0 * f64::EPSILON,
                    terms,
                });
            }
        }
        if terms >= MAX_TERMS {
            return Err(NumericError::NotConverged {
                estimate: sum.sign() * sum.ln_abs().exp(),
                error: f64::NAN,
                evals: terms,
            });
        }
    }
}

fn first_regular_index(a: f64) -> usize {
    if is_gamma_pole(a) {
        (1.0 - a) as usize
    } else {
        0
    }
}

fn check_x(x: f64) -> Result<()> {
    if x.is_nan() || x < 0.0 || x.is_infinite() {
        Err(NumericError::domain(format!(
            "argument must be finite and nonnegative, got x = {x}"
        )))
    } else {
        Ok(())
    }
}

/// `t̃_{μ,ν}(x)` in scaled form; never overflows.
pub fn ln_lommel_t_tilde(p: LommelParams, x: f64) -> Result<ScaledValue> {
    check_x(x)?;
    let (a, b) = p.series_gamma_args();
    scaled_power_series(p.mu + 1.0, a, b, x)
}

/// The normalised modified Lommel function `t̃_{μ,ν}(x)`.
pub fn lommel_t_tilde(p: LommelParams, x: f64) -> Result<EvalResult> {
    ln_lommel_t_tilde(p, x)?.into_eval("t̃_{μ,ν}(x)")
}

/// `2^{μ−1} Γ((μ−ν+1)/2) Γ((μ+ν+1)/2)`, the factor between `t` and `t̃`.
pub fn normalisation_factor(p: LommelParams) -> Result<f64> {
    let g1 = (p.mu - p.nu + 1.0) / 2.0;
    let g2 = (p.mu + p.nu + 1.0) / 2.0;
    if is_gamma_pole(g1) || is_gamma_pole(g2) {
        return Err(NumericError::domain(format!(
            "normalisation factor of t_{{{},{}}} sits on a pole of Γ",
            p.mu, p.nu
        )));
    }
    let factor = 2f64.powf(p.mu - 1.0) / (reciprocal_gamma(g1) * reciprocal_gamma(g2));
    if !factor.is_finite() {
        return Err(NumericError::Overflow(
            "normalisation factor is not finite".into(),
        ));
    }
    Ok(factor)
}

/// The unnormalised modified Lommel function `t_{μ,ν}(x)`.
pub fn lommel_t(p: LommelParams, x: f64) -> Result<EvalResult> {
    let factor = normalisation_factor(p)?;
    let tilde = lommel_t_tilde(p, x)?;
    let value = factor * tilde.value;
    if !value.is_finite() {
        return Err(NumericError::Overflow("t_{μ,ν}(x) exceeds f64 range".into()));
    }
    Ok(EvalResult {
        value,
        abs_error_estimate: factor.abs() * tilde.abs_error_estimate
            + 4.0 * f64::EPSILON * value.abs(),
        terms_or_evals: tilde.terms_or_evals,
    })
}

/// The modified Struve function `L_ν(x)` from its own series
/// `Σ (x/2)^{ν+2k+1} / [Γ(k+3/2) Γ(k+ν+3/2)]`.
///
/// `Γ(k+3/2)` is carried by the exact recurrence `Γ(k+5/2) = (k+3/2)Γ(k+3/2)`
/// with `Γ(3/2) = √π/2`, so the only library gamma call is `Γ(ν+3/2)`.
pub fn struve_l(nu: f64, x: f64) -> Result<EvalResult> {
    check_x(x)?;
    let b = nu + 1.5;
    let k0 = first_regular_index(b);
    if x == 0.0 {
        let lead = nu + 1.0 + 2.0 * k0 as f64;
        return if lead > 0.0 {
            Ok(EvalResult {
                value: 0.0,
                abs_error_estimate: 0.0,
                terms_or_evals: 0,
            })
        } else {
            ln_lommel_t_tilde(LommelParams::new(nu, nu), x)?.into_eval("L_ν(0)")
        };
    }

    // ln Γ(k0 + 3/2) = ln(√π/2) + Σ_{j<k0} ln(j + 3/2)
    let mut ln_g32 = (std::f64::consts::PI.sqrt() / 2.0).ln();
    for j in 0..k0 {
        ln_g32 += (j as f64 + 1.5).ln();
    }
    let (ln_rb, sb) = ln_reciprocal_gamma(k0 as f64 + b).expect("regular index");
    let half = 0.5 * x;
    let q = half * half;
    let mut offset = (nu + 1.0 + 2.0 * k0 as f64) * half.ln() - ln_g32 + ln_rb;
    let mut term = sb;

    let mut sum = ScaledSum::new();
    let mut n = 0usize;
    let mut k = k0 as f64;
    loop {
        sum.add(term, offset);
        n += 1;
        let ratio = q / ((k + 1.5) * (k + b));
        term *= ratio;
        k += 1.0;
        if term.abs() > 1e200 || (term != 0.0 && term.abs() < 1e-200) {
            offset += term.abs().ln();
            term = term.signum();
        }
        if k + b > 0.0 && ratio.abs() < 0.5 {
            let rel_next = sum.relative(term, offset);
            if rel_next < 0.5 * STOP_REL {
                let value = ScaledValue {
                    ln_abs: sum.ln_abs(),
                    sign: sum.sign(),
                    rel_error: 2.0 * rel_next
                        + 4.0 * f64::EPSILON * n as f64 * sum.condition()
                        + f64::EPSILON * offset.abs().min(1e3),
                    terms: n,
                };
                return value.into_eval("L_ν(x)");
            }
        }
        if n >= MAX_TERMS {
            return Err(NumericError::NotConverged {
                estimate: sum.sign() * sum.ln_abs().exp(),
                error: f64::NAN,
                evals: n,
            });
        }
    }
}

/// `a_{μ,ν}(x) = (x/2)^μ / [Γ((μ−ν+1)/2) Γ((μ+ν+3)/2)]`, the inhomogeneous
/// term of the three-term recurrence.
pub fn a_term(p: LommelParams, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(NumericError::domain(format!("a_term needs x > 0, got {x}")));
    }
    let r1 = reciprocal_gamma((p.mu - p.nu + 1.0) / 2.0);
    let r2 = reciprocal_gamma((p.mu + p.nu + 3.0) / 2.0);
    if r1 == 0.0 || r2 == 0.0 {
        return Ok(0.0);
    }
    Ok((0.5 * x).powf(p.mu) * r1 * r2)
}

/// The four terms `[t̃_{μ−1,ν−1}, t̃_{μ+1,ν+1}, (2ν/x) t̃_{μ,ν}, a_{μ,ν}]`
/// of the recurrence `t̃_{μ−1,ν−1} − t̃_{μ+1,ν+1} = (2ν/x) t̃_{μ,ν} + a_{μ,ν}`.
pub fn recurrence_terms(p: LommelParams, x: f64) -> Result<[f64; 4]> {
    let lower = lommel_t_tilde(p.shifted(-1.0), x)?.value;
    let upper = lommel_t_tilde(p.shifted(1.0), x)?.value;
    let mid = lommel_t_tilde(p, x)?.value;
    Ok([lower, upper, 2.0 * p.nu / x * mid, a_term(p, x)?])
}

/// `t̃_{μ−1,ν−1}(x) − t̃_{μ+1,ν+1}(x) − (2ν/x) t̃_{μ,ν}(x) − a_{μ,ν}(x)`.
pub fn recurrence_residual(p: LommelParams, x: f64) -> Result<f64> {
    let [lower, upper, mid, inhom] = recurrence_terms(p, x)?;
    Ok(lower - upper - mid - inhom)
}

/// Two-term small-`x` form
/// `(x/2)^{μ+1} / [Γ((μ−ν+3)/2) Γ((μ+ν+3)/2)] · (1 + x²/((μ+3)² − ν²))`,
/// valid for `μ > −3`, `|ν| < μ + 3`.
pub fn small_x_asymptotic(p: LommelParams, x: f64) -> Result<f64> {
    if !(p.mu > -3.0 && p.nu.abs() < p.mu + 3.0) {
        return Err(NumericError::domain(format!(
            "small-x asymptotic needs μ > −3 and |ν| < μ + 3, got ({}, {})",
            p.mu, p.nu
        )));
    }
    if !(x > 0.0) {
        return Err(NumericError::domain(format!("x must be positive, got {x}")));
    }
    let (a, b) = p.series_gamma_args();
    let lead = (0.5 * x).powf(p.mu + 1.0) * reciprocal_gamma(a) * reciprocal_gamma(b);
    let denom = (p.mu + 3.0).powi(2) - p.nu * p.nu;
    Ok(lead * (1.0 + x * x / denom))
}

/// Large-`x` form `e^x / √(2πx)`, shared by every order.
pub fn large_x_asymptotic(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(NumericError::domain(format!("x must be positive, got {x}")));
    }
    let ln = x - 0.5 * (2.0 * std::f64::consts::PI * x).ln();
    if ln > LN_MAX {
        return Err(NumericError::Overflow(format!(
            "e^x/√(2πx) overflows at x = {x}"
        )));
    }
    Ok(ln.exp())
}

/// Lower bound on `t̃_{μ,ν}(x) / t̃_{μ−1,ν−1}(x)` for `μ > −1`, `0 ≤ ν < μ + 1`.
///
/// `sharp = true`: `x / (μ + 1/2 + √((ν+1/2)² + x²))`;
/// `sharp = false`: the weaker `x / (μ + ν + 1 + x)`.
pub fn ratio_lower_bound(p: LommelParams, x: f64, sharp: bool) -> Result<f64> {
    if !(p.mu > -1.0 && 0.0 <= p.nu && p.nu < p.mu + 1.0) {
        return Err(NumericError::domain(format!(
            "ratio bound needs μ > −1 and 0 ≤ ν < μ + 1, got ({}, {})",
            p.mu, p.nu
        )));
    }
    if !(x > 0.0) {
        return Err(NumericError::domain(format!("x must be positive, got {x}")));
    }
    Ok(if sharp {
        x / (p.mu + 0.5 + (p.nu + 0.5).hypot(x))
    } else {
        x / (p.mu + p.nu + 1.0 + x)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn p(mu: f64, nu: f64) -> LommelParams {
        LommelParams::new(mu, nu)
    }

    #[test]
    fn classification() {
        assert!(p(0.0, 0.0).positive_integrand());
        assert!(!p(-1.0, -1.0).integrable());
        assert!(p(-1.0, 2.0).positive_integrand());
        assert!(!p(-1.0, 2.1).positive_integrand());
        assert!(p(1.0, 0.5).monotone_regime());
        assert!(!p(1.0, 2.0).monotone_regime());
        assert!(!p(-0.5, 0.5).monotone_regime());
    }

    #[test]
    fn zero_argument() {
        assert_eq!(lommel_t_tilde(p(0.0, 0.0), 0.0).unwrap().value, 0.0);
        assert_eq!(lommel_t(p(0.0, 0.0), 0.0).unwrap().value, 0.0);
        assert_eq!(struve_l(0.0, 0.0).unwrap().value, 0.0);
        // μ = −1: leading term (x/2)^0 / [Γ(1−ν/2) Γ(1+ν/2)]
        let v = lommel_t_tilde(p(-1.0, 0.0), 0.0).unwrap().value;
        assert!((v - 1.0).abs() < 1e-15);
        assert!(lommel_t_tilde(p(-1.5, 0.0), 0.0).is_err());
    }

    #[test]
    fn negative_argument_rejected() {
        assert!(matches!(
            lommel_t_tilde(p(0.0, 0.0), -1.0),
            Err(NumericError::Domain(_))
        ));
        assert!(struve_l(0.0, -0.1).is_err());
    }

    #[test]
    fn overflow_is_reported() {
        let err = lommel_t_tilde(p(1.0, 1.0), 800.0).unwrap_err();
        assert!(matches!(err, NumericError::Overflow(_)));
        let scaled = ln_lommel_t_tilde(p(1.0, 1.0), 800.0).unwrap();
        let expect = 800.0 - 0.5 * (2.0 * PI * 800.0).ln();
        assert!((scaled.ln_abs - expect).abs() < 5e-3);
        assert!(large_x_asymptotic(720.0).is_err());
    }

    #[test]
    fn struve_half_order_closed_form() {
        for &x in &[0.01, 0.3, 1.0, 4.0, 17.0] {
            // cosh x − 1 = 2 sinh²(x/2), free of cancellation
            let exact = (2.0 / (PI * x)).sqrt() * 2.0 * (0.5 * x).sinh().powi(2);
            let got = struve_l(0.5, x).unwrap().value;
            assert!((got / exact - 1.0).abs() < 1e-13, "x={x}: {got} vs {exact}");
        }
    }

    #[test]
    fn struve_matches_general_series() {
        for &nu in &[-0.4, 0.0, 0.5, 1.0, 3.7, 12.0] {
            for &x in &[0.05, 1.0, 8.0, 40.0] {
                let a = struve_l(nu, x).unwrap();
                let b = lommel_t_tilde(p(nu, nu), x).unwrap();
                let tol = a.abs_error_estimate + b.abs_error_estimate;
                assert!(
                    (a.value - b.value).abs() <= tol,
                    "ν={nu} x={x}: {} vs {} (tol {tol:e})",
                    a.value,
                    b.value
                );
            }
        }
    }

    #[test]
    fn a_term_values() {
        let v = a_term(p(0.0, 0.0), 3.3).unwrap();
        assert!((v - 2.0 / PI).abs() < 1e-15);
        assert_eq!(a_term(p(1.0, 2.0), 2.0).unwrap(), 0.0);
        assert!(a_term(p(1.0, 2.0), 0.0).is_err());
    }

    #[test]
    fn small_x_substitution() {
        let v = small_x_asymptotic(p(0.0, 0.0), 0.1).unwrap();
        // Γ(3/2)² = π/4
        let expect = 0.05 / (PI / 4.0) * (1.0 + 0.01 / 9.0);
        assert!((v - expect).abs() < 1e-16);
        assert!(small_x_asymptotic(p(-3.5, 0.0), 0.1).is_err());
        assert!(small_x_asymptotic(p(0.0, 3.0), 0.1).is_err());
    }

    #[test]
    fn small_x_leading_order() {
        let q = p(1.0, 0.5);
        let t = lommel_t_tilde(q, 1e-3).unwrap().value;
        let s = small_x_asymptotic(q, 1e-3).unwrap();
        assert!((t / s - 1.0).abs() < 1e-6);
    }

    #[test]
    fn large_x_value() {
        let v = large_x_asymptotic(1.0).unwrap();
        assert!((v - 1.084_437_551_419_227_5).abs() < 1e-12);
    }

    #[test]
    fn large_x_approach() {
        let q = p(1.0, 1.0);
        let r60 = lommel_t_tilde(q, 60.0).unwrap().value / large_x_asymptotic(60.0).unwrap();
        let r120 = lommel_t_tilde(q, 120.0).unwrap().value / large_x_asymptotic(120.0).unwrap();
        assert!((r60 - 1.0).abs() < 0.02);
        assert!((r120 - 1.0).abs() < (r60 - 1.0).abs());
    }

    #[test]
    fn ratio_bound_values() {
        let v = ratio_lower_bound(p(1.0, 0.5), 2.0, false).unwrap();
        assert!((v - 2.0 / 4.5).abs() < 1e-15);
        let far = ratio_lower_bound(p(1.0, 0.0), 1e9, true).unwrap();
        assert!((far - 1.0).abs() < 1e-8);
        assert!(ratio_lower_bound(p(-1.0, 0.0), 1.0, true).is_err());
        assert!(ratio_lower_bound(p(1.0, 2.0), 1.0, false).is_err());
    }

    #[test]
    fn unnormalised_ratio_identity() {
        // t_{μ+1,ν+1}/t̃_{μ+1,ν+1} = (μ+ν+1) t_{μ,ν}/t̃_{μ,ν}
        let q = p(1.0, 0.5);
        let x = 3.0;
        let lhs = lommel_t(q.shifted(1.0), x).unwrap().value
            / lommel_t_tilde(q.shifted(1.0), x).unwrap().value;
        let rhs = (q.mu + q.nu + 1.0) * lommel_t(q, x).unwrap().value
            / lommel_t_tilde(q, x).unwrap().value;
        assert!((lhs / rhs - 1.0).abs() < 1e-14);
    }

    #[test]
    fn lommel_t_pole_prefactor() {
        // (μ−ν+1)/2 = 0
        assert!(matches!(
            lommel_t(p(1.0, 2.0), 1.0),
            Err(NumericError::Domain(_))
        ));
    }

    #[test]
    fn pole_in_series_coefficients() {
        // μ − ν = −3 puts the first coefficient on a pole; the series then
        // starts one index later.
        let q = p(0.0, 3.0);
        let x = 1.7;
        let got = lommel_t_tilde(q, x).unwrap().value;
        let mut expect = 0.0;
        for k in 1..40 {
            let kf = k as f64;
            expect += (0.5 * x).powf(2.0 * kf + 1.0)
                * reciprocal_gamma(kf)
                * reciprocal_gamma(kf + 3.0);
        }
        assert!((got / expect - 1.0).abs() < 1e-14);
    }
}
