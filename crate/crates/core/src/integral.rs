//! The weighted integral `I(μ,ν,β,x) = ∫₀ˣ e^{−βu} u^ν t̃_{μ,ν}(u) du`.
//!
//! Three independent routes:
//!
//! * adaptive Gauss–Kronrod quadrature of the integrand,
//! * the exact formula at `β = 1`,
//! * term-wise integration of the power series, which turns every term into a
//!   lower incomplete gamma function (a pure power when `β = 0`).
//!
//! Internally everything is computed for the normalised integral
//! `F = e^{βx} x^{−w} ∫₀ˣ e^{−βu} u^w t̃(u) du` in log form, which keeps large
//! `x` from overflowing and is what the bounds compare against.

use serde::{Deserialize, Serialize};

use crate::error::{NumericError, Result};
use crate::gamma::{
    ln_lower_gamma_scaled, ln_reciprocal_gamma, lower_incomplete_gamma, reciprocal_gamma,
};
use crate::lommel::{ln_lommel_t_tilde, EvalResult, LommelParams, ScaledSum, LN_MAX};
use crate::quadrature::{integrate, Tolerance};

/// Tail target for the series route to be preferred over quadrature.
pub const SERIES_TOLERANCE: f64 = 1e-12;
/// Term budget for the series route inside [`normalized_f`].
pub const SERIES_MAX_TERMS: usize = 500;
/// Relative tolerance used when [`normalized_f`] falls back to quadrature.
pub const QUADRATURE_TOLERANCE: f64 = 1e-12;
/// Smallest relative tolerance the quadrature route accepts.
pub const MIN_QUADRATURE_TOLERANCE: f64 = 1e-13;

const MAX_PANELS: usize = 4000;

/// One weighted-integral evaluation `(μ, ν, β, x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralSpec {
    pub mu: f64,
    pub nu: f64,
    pub beta: f64,
    pub x: f64,
}

impl IntegralSpec {
    /// Validates `μ + ν > −2`, `0 ≤ β ≤ 1`, `x > 0`; `β = 1` additionally
    /// needs `μ > −3/2`, `−1/2 < ν < μ + 1`.
    pub fn new(mu: f64, nu: f64, beta: f64, x: f64) -> Result<Self> {
        let spec = IntegralSpec { mu, nu, beta, x };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let IntegralSpec { mu, nu, beta, x } = *self;
        if !(mu.is_finite() && nu.is_finite()) {
            return Err(NumericError::domain("orders must be finite"));
        }
        if !(mu + nu > -2.0) {
            return Err(NumericError::domain(format!(
                "integral diverges at 0: μ + ν = {} ≤ −2",
                mu + nu
            )));
        }
        if !(0.0..=1.0).contains(&beta) {
            return Err(NumericError::domain(format!("β must lie in [0, 1], got {beta}")));
        }
        if beta == 1.0 && !closed_form_domain(mu, nu) {
            return Err(NumericError::domain(
                "β = 1 requires μ > −3/2 and −1/2 < ν < μ + 1",
            ));
        }
        if !(x > 0.0 && x.is_finite()) {
            return Err(NumericError::domain(format!("x must be positive, got {x}")));
        }
        Ok(())
    }

    pub fn params(&self) -> LommelParams {
        LommelParams::new(self.mu, self.nu)
    }

    pub fn with_x(&self, x: f64) -> Self {
        IntegralSpec { x, ..*self }
    }

    pub fn with_beta(&self, beta: f64) -> Self {
        IntegralSpec { beta, ..*self }
    }

    /// `∫₀ˣ e^{−βu} u^ν t̃_{μ,ν}(u) du`.
    pub fn primary(&self) -> WeightedIntegral {
        WeightedIntegral {
            order: self.params(),
            weight: self.nu,
            beta: self.beta,
            x: self.x,
        }
    }

    /// `∫₀ˣ e^{−βu} u^ν t̃_{μ+1,ν+1}(u) du`, the target of the sharper lower
    /// bounds.
    pub fn shifted(&self) -> WeightedIntegral {
        WeightedIntegral {
            order: self.params().shifted(1.0),
            weight: self.nu,
            beta: self.beta,
            x: self.x,
        }
    }
}

/// `∫₀ˣ e^{−βu} u^{weight} t̃_{order}(u) du` with the weight exponent
/// decoupled from the order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedIntegral {
    pub order: LommelParams,
    pub weight: f64,
    pub beta: f64,
    pub x: f64,
}

impl WeightedIntegral {
    /// Exponent of the integrand's leading power at the origin.
    fn origin_power(&self) -> f64 {
        self.order.mu + self.weight + 1.0
    }

    fn check(&self) -> Result<()> {
        if !(self.origin_power() > -1.0) {
            return Err(NumericError::domain(format!(
                "integrand ~ u^{} is not integrable at 0",
                self.origin_power()
            )));
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(NumericError::domain(format!(
                "β must lie in [0, 1], got {}",
                self.beta
            )));
        }
        if !(self.x > 0.0 && self.x.is_finite()) {
            return Err(NumericError::domain(format!("x must be positive, got {}", self.x)));
        }
        Ok(())
    }

    /// `ln` of `e^{βx} x^{−w}`, the normalisation from raw to `F`.
    fn ln_normaliser(&self) -> f64 {
        self.beta * self.x - self.weight * self.x.ln()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Quadrature,
    GammaSeries,
    ClosedForm,
}

/// The normalised integral `F = e^{βx} x^{−w} ∫ …`.
///
/// When `F` itself does not fit in an `f64` (`log_form = true`), `value` is
/// `+∞` and only `ln_value` is meaningful.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizedF {
    pub value: f64,
    pub ln_value: f64,
    pub log_form: bool,
    pub rel_error_estimate: f64,
    pub route: Route,
    pub terms_or_evals: usize,
}

impl NormalizedF {
    fn from_ln(ln_value: f64, rel_error_estimate: f64, route: Route, n: usize) -> Self {
        let log_form = ln_value > LN_MAX;
        NormalizedF {
            value: if log_form { f64::INFINITY } else { ln_value.exp() },
            ln_value,
            log_form,
            rel_error_estimate,
            route,
            terms_or_evals: n,
        }
    }

    /// Converts back to the raw integral.
    fn to_raw(self, w: &WeightedIntegral) -> Result<EvalResult> {
        let ln_raw = self.ln_value - w.ln_normaliser();
        if ln_raw > LN_MAX {
            return Err(NumericError::Overflow(format!(
                "integral exceeds f64 range (ln I = {ln_raw:.3})"
            )));
        }
        let value = ln_raw.exp();
        Ok(EvalResult {
            value,
            abs_error_estimate: value * self.rel_error_estimate,
            terms_or_evals: self.terms_or_evals,
        })
    }
}

/// Quadrature route for `F`.
///
/// The integrand is divided by its value at `u = x`, so the quadrature sees
/// `e^{β(x−u)} (u/x)^w t̃(u)/t̃(x)`, bounded by a modest constant for every `x`.
/// For `−1 < μ+w+1 < 0` the singular head `[0, min(x,1)]` is mapped by
/// `u = t^{1/p}`, `p = μ+w+2`, which makes the integrand bounded there.
pub fn normalized_quadrature(w: &WeightedIntegral, tol: f64) -> Result<NormalizedF> {
    w.check()?;
    if !(tol >= MIN_QUADRATURE_TOLERANCE) {
        return Err(NumericError::domain(format!(
            "quadrature tolerance must be ≥ {MIN_QUADRATURE_TOLERANCE:e}, got {tol:e}"
        )));
    }
    let x = w.x;
    let end = ln_lommel_t_tilde(w.order, x)?;
    let ln_ref = if end.sign == 0.0 { 0.0 } else { end.ln_abs };
    let ln_x = x.ln();

    let f = |u: f64| -> f64 {
        match ln_lommel_t_tilde(w.order, u) {
            Ok(t) if t.sign != 0.0 => {
                t.sign * (t.ln_abs - ln_ref + w.beta * (x - u) + w.weight * (u.ln() - ln_x)).exp()
            }
            Ok(_) => 0.0,
            Err(_) => f64::NAN,
        }
    };

    let tolerance = Tolerance::relative(tol);
    let p = w.origin_power() + 1.0;
    let (mut total, mut err, mut evals, mut ok) = (0.0, 0.0, 0usize, true);
    let body_start = if p < 1.0 {
        let head = x.min(1.0);
        let g = |t: f64| -> f64 {
            let u = t.powf(1.0 / p);
            if u == 0.0 {
                return 0.0;
            }
            f(u) * ((1.0 - p) * u.ln()).exp() / p
        };
        let r = integrate(g, 0.0, head.powf(p), tolerance, MAX_PANELS);
        total += r.value;
        err += r.abs_error;
        evals += r.evals;
        ok &= r.converged;
        head
    } else {
        0.0
    };
    if body_start < x {
        let r = integrate(f, body_start, x, tolerance, MAX_PANELS);
        total += r.value;
        err += r.abs_error;
        evals += r.evals;
        ok &= r.converged;
    }
    if !total.is_finite() {
        return Err(NumericError::domain("integrand evaluation failed"));
    }
    if !ok {
        return Err(NumericError::NotConverged {
            estimate: total * ln_ref.exp(),
            error: err * ln_ref.exp(),
            evals,
        });
    }
    if total <= 0.0 {
        return Err(NumericError::domain(
            "integral is not positive; normalised form needs a positive integrand",
        ));
    }
    let rel = err / total + end.rel_error;
    Ok(NormalizedF::from_ln(ln_ref + total.ln(), rel, Route::Quadrature, evals))
}

/// `I(spec)` by adaptive quadrature with relative tolerance `tol ≥ 1e−13`.
pub fn integral_quadrature(spec: &IntegralSpec, tol: f64) -> Result<EvalResult> {
    spec.validate()?;
    let w = spec.primary();
    normalized_quadrature(&w, tol)?.to_raw(&w)
}

/// Outcome of the incomplete-gamma series route.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesOutcome {
    pub f: NormalizedF,
    /// Bound on the neglected tail, relative to the partial sum.
    pub tail_rel: f64,
    /// Set when the tail bound is still above [`SERIES_TOLERANCE`] at `kmax`.
    pub slow_convergence: bool,
}

/// Series route for `F`:
///
/// ```text
/// ∫₀ˣ e^{−βu} u^w t̃_{μ,ν}(u) du
///   = Σ_k 2^{−(μ+2k+1)} β^{−s_k} γ(s_k, βx) / [Γ(k+(μ−ν+3)/2) Γ(k+(μ+ν+3)/2)],
///   s_k = μ + w + 2k + 2,
/// ```
///
/// with `β^{−s} γ(s, βx)` replaced by `x^s / s` when `β = 0`. The term ratio is
/// bounded by `(x/2)² / [(k+a)(k+b)]`, which gives the tail bound.
pub fn normalized_gamma_series(w: &WeightedIntegral, kmax: usize) -> Result<SeriesOutcome> {
    w.check()?;
    if kmax == 0 {
        return Err(NumericError::domain("kmax must be at least 1"));
    }
    let (a, b) = w.order.series_gamma_args();
    let mu = w.order.mu;
    let x = w.x;
    let y = w.beta * x;
    let ln_x = x.ln();
    let q = 0.25 * x * x;

    let mut sum = ScaledSum::new();
    let mut tail_rel = f64::INFINITY;
    let mut terms = 0usize;
    let mut k = 0usize;
    while terms < kmax {
        let kf = k as f64;
        let (ka, kb) = (kf + a, kf + b);
        if let (Some((ra, sa)), Some((rb, sb))) = (ln_reciprocal_gamma(ka), ln_reciprocal_gamma(kb)) {
            let s = mu + w.weight + 2.0 * kf + 2.0;
            // e^{βx} x^{−w} · 2^{−(μ+2k+1)} β^{−s} γ(s, βx)
            //   = 2 (x/2)^{μ+2k+2} · [γ(s,y) y^{−s} e^{y}]
            let ln_term = std::f64::consts::LN_2 + (mu + 2.0 * kf + 2.0) * (ln_x - std::f64::consts::LN_2)
                + ln_lower_gamma_scaled(s, y)?
                + ra
                + rb;
            sum.add(sa * sb, ln_term);
            terms += 1;
            let rho = q / (ka * kb);
            if ka > 0.0 && kb > 0.0 && rho < 1.0 {
                tail_rel = sum.relative(1.0, ln_term) * rho / (1.0 - rho);
                if tail_rel < 1e-17 {
                    break;
                }
            } else {
                tail_rel = f64::INFINITY;
            }
        }
        k += 1;
    }
    if sum.sign() <= 0.0 {
        return Err(NumericError::domain(
            "series sum is not positive; normalised form needs a positive integrand",
        ));
    }
    let rel = tail_rel.min(1.0) + 8.0 * f64::EPSILON * terms as f64 * sum.condition();
    Ok(SeriesOutcome {
        f: NormalizedF::from_ln(sum.ln_abs(), rel, Route::GammaSeries, terms),
        tail_rel,
        slow_convergence: !(tail_rel <= SERIES_TOLERANCE),
    })
}

/// `I(spec)` by the incomplete-gamma series, at most `kmax` terms.
pub fn integral_gamma_series(spec: &IntegralSpec, kmax: usize) -> Result<(EvalResult, SeriesOutcome)> {
    spec.validate()?;
    let w = spec.primary();
    let outcome = normalized_gamma_series(&w, kmax)?;
    Ok((outcome.f.to_raw(&w)?, outcome))
}

fn closed_form_domain(mu: f64, nu: f64) -> bool {
    mu > -1.5 && -0.5 < nu && nu < mu + 1.0
}

/// The exact value of `∫₀ˣ e^{−u} u^ν t̃_{μ,ν}(u) du`:
///
/// ```text
/// e^{−x} x^{ν+1} (t̃_{μ,ν}(x) + t̃_{μ+1,ν+1}(x)) / (2ν+1)
///   − γ(μ+ν+2, x) / [2^μ (2ν+1) Γ((μ−ν+1)/2) Γ((μ+ν+3)/2)]
/// ```
///
/// for `μ > −3/2`, `−1/2 < ν < μ + 1`.
pub fn integral_closed_form_beta1(mu: f64, nu: f64, x: f64) -> Result<f64> {
    if !closed_form_domain(mu, nu) {
        return Err(NumericError::domain(format!(
            "closed form needs μ > −3/2 and −1/2 < ν < μ + 1, got ({mu}, {nu})"
        )));
    }
    if !(x > 0.0) {
        return Err(NumericError::domain(format!("x must be positive, got {x}")));
    }
    let p = LommelParams::new(mu, nu);
    let t0 = ln_lommel_t_tilde(p, x)?;
    let t1 = ln_lommel_t_tilde(p.shifted(1.0), x)?;
    // ln(t0 + t1); both positive in this domain
    let hi = t0.ln_abs.max(t1.ln_abs);
    let ln_sum = hi + ((t0.ln_abs - hi).exp() + (t1.ln_abs - hi).exp()).ln();
    let head = (-x + (nu + 1.0) * x.ln() + ln_sum).exp() / (2.0 * nu + 1.0);
    let coeff = reciprocal_gamma((mu - nu + 1.0) / 2.0) * reciprocal_gamma((mu + nu + 3.0) / 2.0)
        / (2f64.powf(mu) * (2.0 * nu + 1.0));
    let tail = coeff * lower_incomplete_gamma(mu + nu + 2.0, x)?;
    Ok(head - tail)
}

/// `|f'(x) − e^{−x} x^ν t̃_{μ,ν}(x)|` with `f` the closed form and `f'` its
/// central difference at step `h`.
pub fn closed_form_derivative_check(mu: f64, nu: f64, x: f64, h: f64) -> Result<f64> {
    if !(h > 0.0 && h < x) {
        return Err(NumericError::domain(format!("need 0 < h < x, got h = {h}")));
    }
    let fp = integral_closed_form_beta1(mu, nu, x + h)?;
    let fm = integral_closed_form_beta1(mu, nu, x - h)?;
    let derivative = (fp - fm) / (2.0 * h);
    let t = crate::lommel::lommel_t_tilde(LommelParams::new(mu, nu), x)?.value;
    Ok((derivative - (-x).exp() * x.powf(nu) * t).abs())
}

/// `F` by the best available route: the series when its tail bound reaches
/// [`SERIES_TOLERANCE`] within [`SERIES_MAX_TERMS`] terms, quadrature
/// otherwise.
pub fn normalized_integral(w: &WeightedIntegral) -> Result<NormalizedF> {
    match normalized_gamma_series(w, SERIES_MAX_TERMS) {
        Ok(out) if !out.slow_convergence => Ok(out.f),
        _ => normalized_quadrature(w, QUADRATURE_TOLERANCE),
    }
}

/// `F_{μ,ν,β}(x) = e^{βx} x^{−ν} I(spec)`.
pub fn normalized_f(spec: &IntegralSpec) -> Result<NormalizedF> {
    spec.validate()?;
    normalized_integral(&spec.primary())
}

/// `I(spec)` through the route chosen by [`normalized_f`].
pub fn integral(spec: &IntegralSpec) -> Result<EvalResult> {
    let w = spec.primary();
    normalized_f(spec)?.to_raw(&w)
}

/// Raw integral for an arbitrary weighted target, best route.
pub fn weighted_integral(w: &WeightedIntegral) -> Result<EvalResult> {
    normalized_integral(w)?.to_raw(w)
}
