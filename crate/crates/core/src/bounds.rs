//! Closed-form upper and lower bounds for the weighted integral.
//!
//! Every bound has the shape `e^{−βx} x^ν · N`, where `N` is a combination of
//! `t̃` values and the constant `B`. `N` (the normalised bound) is what gets
//! compared with `F = e^{βx} x^{−ν} I`. It is carried as `(ln|N|, sign)` so
//! that no intermediate overflows.

use std::cmp::Ordering;
use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{NumericError, Result};
use crate::gamma::{ln_lower_gamma_scaled, ln_reciprocal_gamma, reciprocal_gamma};
use crate::integral::IntegralSpec;
use crate::lommel::{ln_lommel_t_tilde, LommelParams, ScaledSum, ScaledValue};

/// Five terms of the series lower bound.
pub const DEFAULT_TRUNCATION: usize = 4;

const SQRT_17: f64 = 4.123_105_625_617_661;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Upper,
    Lower,
}

/// Which integral a bound estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    /// `∫₀ˣ e^{−βu} u^ν t̃_{μ,ν}(u) du`
    Primary,
    /// `∫₀ˣ e^{−βu} u^ν t̃_{μ+1,ν+1}(u) du`
    Shifted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BoundKind {
    UbLemmaSmallx,
    UbLemmaLargex,
    UbThm2A,
    UbThm2Sqrt17,
    LbBasic,
    LbRefined,
    LbSqrt17,
    LbSeries,
    LbPropBasic,
    LbPropRefined,
    LbPropSqrt17,
    StruveUbA,
    StruveUbSqrt8,
    StruveLb,
    PriorUbGau1,
    PriorUbGau2,
    CombinedCnu,
}

impl BoundKind {
    pub const ALL: [BoundKind; 17] = [
        BoundKind::UbLemmaSmallx,
        BoundKind::UbLemmaLargex,
        BoundKind::UbThm2A,
        BoundKind::UbThm2Sqrt17,
        BoundKind::LbBasic,
        BoundKind::LbRefined,
        BoundKind::LbSqrt17,
        BoundKind::LbSeries,
        BoundKind::LbPropBasic,
        BoundKind::LbPropRefined,
        BoundKind::LbPropSqrt17,
        BoundKind::StruveUbA,
        BoundKind::StruveUbSqrt8,
        BoundKind::StruveLb,
        BoundKind::PriorUbGau1,
        BoundKind::PriorUbGau2,
        BoundKind::CombinedCnu,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            BoundKind::UbLemmaSmallx => "UB_LEMMA_SMALLX",
            BoundKind::UbLemmaLargex => "UB_LEMMA_LARGEX",
            BoundKind::UbThm2A => "UB_THM2_A",
            BoundKind::UbThm2Sqrt17 => "UB_THM2_SQRT17",
            BoundKind::LbBasic => "LB_BASIC",
            BoundKind::LbRefined => "LB_REFINED",
            BoundKind::LbSqrt17 => "LB_SQRT17",
            BoundKind::LbSeries => "LB_SERIES",
            BoundKind::LbPropBasic => "LB_PROP_BASIC",
            BoundKind::LbPropRefined => "LB_PROP_REFINED",
            BoundKind::LbPropSqrt17 => "LB_PROP_SQRT17",
            BoundKind::StruveUbA => "STRUVE_UB_A",
            BoundKind::StruveUbSqrt8 => "STRUVE_UB_SQRT8",
            BoundKind::StruveLb => "STRUVE_LB",
            BoundKind::PriorUbGau1 => "PRIOR_UB_GAU1",
            BoundKind::PriorUbGau2 => "PRIOR_UB_GAU2",
            BoundKind::CombinedCnu => "COMBINED_CNU",
        }
    }

    /// Case-insensitive inverse of [`BoundKind::tag`].
    pub fn from_tag(tag: &str) -> Option<Self> {
        BoundKind::ALL
            .into_iter()
            .find(|k| k.tag().eq_ignore_ascii_case(tag.trim()))
    }

    pub fn side(self) -> Side {
        use BoundKind::*;
        match self {
            UbLemmaSmallx | UbLemmaLargex | UbThm2A | UbThm2Sqrt17 | StruveUbA | StruveUbSqrt8
            | PriorUbGau1 | PriorUbGau2 | CombinedCnu => Side::Upper,
            _ => Side::Lower,
        }
    }

    pub fn target(self) -> Target {
        use BoundKind::*;
        match self {
            LbPropBasic | LbPropRefined | LbPropSqrt17 => Target::Shifted,
            _ => Target::Primary,
        }
    }

    /// Parameter hypotheses, including `0 < β < 1`. The lemma bounds also
    /// need an admissible `x*`, checked in [`evaluate_bound`].
    pub fn hypotheses_hold(self, mu: f64, nu: f64, beta: f64) -> bool {
        use BoundKind::*;
        if !(beta > 0.0 && beta < 1.0) {
            return false;
        }
        match self {
            UbLemmaSmallx | UbLemmaLargex | UbThm2A | UbThm2Sqrt17 => {
                mu > -1.5 && -0.5 < nu && nu < mu + 1.0
            }
            LbBasic | LbPropBasic => mu > -1.0 && -mu - 1.0 < nu && nu <= 0.0,
            LbRefined | LbPropRefined => mu > 0.5 && 1.5 <= nu && nu < mu + 1.0,
            LbSqrt17 | LbPropSqrt17 => mu > -0.5 && 0.5 < nu && nu < mu + 1.0,
            LbSeries => mu > -2.5 && -mu - 2.0 < nu && nu <= mu + 3.0,
            StruveUbA | StruveUbSqrt8 | CombinedCnu => mu == nu && nu > -0.5,
            StruveLb => mu == nu && nu > 0.5,
            PriorUbGau1 | PriorUbGau2 => mu > -0.5 && 0.5 <= nu && nu < mu + 1.0,
        }
    }
}

impl std::fmt::Display for BoundKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

/// Optional inputs: `x*` for the lemma bounds, truncation index `K` for the
/// series lower bound.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundOptions {
    pub xstar: Option<f64>,
    pub truncation_k: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub kind: BoundKind,
    pub side: Side,
    pub target: Target,
    pub in_domain: bool,
    /// `x*` actually used by the lemma bounds.
    pub xstar: Option<f64>,
    /// `N`, the multiplier of `e^{−βx} x^ν`; infinite once `ln|N|` leaves f64.
    pub normalized: f64,
    pub ln_abs_normalized: f64,
    pub sign: f64,
    /// The bound itself, `e^{−βx} x^ν N`.
    pub value: f64,
}

impl BoundResult {
    fn outside(kind: BoundKind) -> Self {
        BoundResult {
            kind,
            side: kind.side(),
            target: kind.target(),
            in_domain: false,
            xstar: None,
            normalized: f64::NAN,
            ln_abs_normalized: f64::NAN,
            sign: f64::NAN,
            value: f64::NAN,
        }
    }

    /// Orders two in-domain results by the signed normalised value.
    pub fn cmp_normalized(&self, other: &Self) -> Ordering {
        signed_cmp((self.sign, self.ln_abs_normalized), (other.sign, other.ln_abs_normalized))
    }
}

fn signed_cmp(a: (f64, f64), b: (f64, f64)) -> Ordering {
    match a.0.total_cmp(&b.0) {
        Ordering::Equal if a.0 > 0.0 => a.1.total_cmp(&b.1),
        Ordering::Equal if a.0 < 0.0 => b.1.total_cmp(&a.1),
        ord => ord,
    }
}

/// `A_{μ,ν} = (μ−ν)/2 + √((μ−ν)² + 8(μ+ν+3))/2`.
pub fn const_a(mu: f64, nu: f64) -> Result<f64> {
    let d = mu - nu;
    let disc = d * d + 8.0 * (mu + nu + 3.0);
    if !(disc >= 0.0) {
        return Err(NumericError::domain(format!(
            "A_{{μ,ν}} needs a nonnegative discriminant, got {disc}"
        )));
    }
    Ok(0.5 * d + 0.5 * disc.sqrt())
}

/// `ln B` and the sign of `B`, normalised by `e^{−βx} x^ν`:
/// `e^{βx} x^{−ν} B = x^{μ+1} G(μ+ν+1, βx) / [2^μ Γ((μ−ν+1)/2) Γ((μ+ν+3)/2)]`
/// with `G(s, y) = γ(s, y) y^{−s} e^{y}`.
fn ln_b_normalized(mu: f64, nu: f64, beta: f64, x: f64) -> Result<(f64, f64)> {
    check_b_args(mu, nu, beta, x)?;
    let g1 = ln_reciprocal_gamma((mu - nu + 1.0) / 2.0);
    let g2 = ln_reciprocal_gamma((mu + nu + 3.0) / 2.0);
    let (Some((l1, s1)), Some((l2, s2))) = (g1, g2) else {
        return Ok((f64::NEG_INFINITY, 0.0));
    };
    let lg = ln_lower_gamma_scaled(mu + nu + 1.0, beta * x)?;
    let ln = (mu + 1.0) * x.ln() + lg + l1 + l2 - mu * std::f64::consts::LN_2;
    Ok((ln, s1 * s2))
}

fn check_b_args(mu: f64, nu: f64, beta: f64, x: f64) -> Result<()> {
    if !(mu + nu + 1.0 > 0.0) {
        return Err(NumericError::domain(format!(
            "B needs μ + ν > −1, got μ + ν = {}",
            mu + nu
        )));
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(NumericError::domain(format!("B needs 0 < β < 1, got {beta}")));
    }
    if !(x >= 0.0 && x.is_finite()) {
        return Err(NumericError::domain(format!("B needs x ≥ 0, got {x}")));
    }
    Ok(())
}

/// `B_{μ,ν,β}(x) = β^{−μ−ν−1} γ(μ+ν+1, βx) / [2^μ Γ((μ−ν+1)/2) Γ((μ+ν+3)/2)]`.
pub fn const_b(mu: f64, nu: f64, beta: f64, x: f64) -> Result<f64> {
    check_b_args(mu, nu, beta, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    let (ln, sign) = ln_b_normalized(mu, nu, beta, x)?;
    Ok(sign * (ln - beta * x + nu * x.ln()).exp())
}

/// `M_{μ,ν,β}(x*) = max{(μ+ν+3+2x*)/(2ν+1), x*/((1−β)x*−1)}` for
/// `x* > 1/(1−β)`.
pub fn const_m(mu: f64, nu: f64, beta: f64, xstar: f64) -> Result<f64> {
    if !((1.0 - beta) * xstar > 1.0) {
        return Err(NumericError::domain(format!(
            "M needs x* > 1/(1−β) = {}, got {xstar}",
            1.0 / (1.0 - beta)
        )));
    }
    let first = (mu + nu + 3.0 + 2.0 * xstar) / (2.0 * nu + 1.0);
    let second = xstar / ((1.0 - beta) * xstar - 1.0);
    Ok(first.max(second))
}

/// `A_{μ,ν} < (3+√17)/2`, i.e. the `A` upper bound beats the `√17` one.
pub fn sharper_a_predicate(mu: f64, nu: f64) -> bool {
    const_a(mu, nu).map_or(false, |a| a < 0.5 * (3.0 + SQRT_17))
}

/// `C_ν`: `2(ν+1)` for `ν ≥ 1/2`, `2ν+3+√(2(2ν+3))` for `|ν| < 1/2`.
pub fn combined_c_nu(nu: f64) -> Result<f64> {
    if nu >= 0.5 {
        Ok(2.0 * (nu + 1.0))
    } else if nu.abs() < 0.5 {
        Ok(2.0 * nu + 3.0 + (2.0 * (2.0 * nu + 3.0)).sqrt())
    } else {
        Err(NumericError::domain(format!("C_ν needs ν > −1/2, got {nu}")))
    }
}

fn tilde(mu: f64, nu: f64, x: f64) -> Result<ScaledValue> {
    ln_lommel_t_tilde(LommelParams::new(mu, nu), x)
}

/// Accumulates `Σ cᵢ · e^{ℓᵢ}` without leaving log space.
struct Combination(ScaledSum);

impl Combination {
    fn new() -> Self {
        Combination(ScaledSum::new())
    }

    fn add_tilde(&mut self, coef: f64, t: &ScaledValue) {
        if t.sign != 0.0 {
            self.0.add(coef * t.sign, t.ln_abs);
        }
    }

    fn add_ln(&mut self, coef: f64, (ln, sign): (f64, f64)) {
        if sign != 0.0 {
            self.0.add(coef * sign, ln);
        }
    }

    fn finish(self) -> (f64, f64) {
        (self.0.ln_abs(), self.0.sign())
    }
}

fn upper_shifted(coef: f64, mu: f64, nu: f64, x: f64) -> Result<(f64, f64)> {
    let mut c = Combination::new();
    c.add_tilde(coef, &tilde(mu + 1.0, nu + 1.0, x)?);
    Ok(c.finish())
}

/// `[(1 − q/x) t̃_{μ,ν}(x) − e^{βx} x^{−ν} B] / (1−β)`.
fn refined_lower(q: f64, b: (f64, f64), mu: f64, nu: f64, beta: f64, x: f64) -> Result<(f64, f64)> {
    let inv = 1.0 / (1.0 - beta);
    let mut c = Combination::new();
    c.add_tilde((1.0 - q / x) * inv, &tilde(mu, nu, x)?);
    c.add_ln(-inv, b);
    Ok(c.finish())
}

/// `q` of the refined lower bounds, `2ν c′ / ((2ν−1)(1−β))`, where `c′` is
/// the numerator of the upper-bound constant used for the integral at
/// `(μ−1, ν−1)`.
fn refined_coefficient(upper_numerator: f64, nu: f64, beta: f64) -> f64 {
    2.0 * nu * upper_numerator / ((2.0 * nu - 1.0) * (1.0 - beta))
}

/// `ln` of the Struve-form constant `γ(2ν+1,βx)/(√π 2^ν β^{2ν+1} Γ(ν+3/2))`,
/// normalised by `e^{−βx} x^ν`.
fn ln_struve_b_normalized(nu: f64, beta: f64, x: f64) -> Result<(f64, f64)> {
    let s = 2.0 * nu + 1.0;
    let lg = ln_lower_gamma_scaled(s, beta * x)?;
    let (lr, sr) = ln_reciprocal_gamma(nu + 1.5).expect("ν > −1/2 keeps Γ(ν+3/2) regular");
    let ln = (nu + 1.0) * x.ln() + lg + lr - 0.5 * PI.ln() - nu * std::f64::consts::LN_2;
    Ok((ln, sr))
}

/// `Σ_{k=0}^{K} β^k t̃_{μ+k+1,ν+k+1}(x)`.
fn series_lower(mu: f64, nu: f64, beta: f64, x: f64, k_max: usize) -> Result<(f64, f64)> {
    let mut c = Combination::new();
    let mut weight = 1.0;
    for k in 0..=k_max {
        let shift = k as f64 + 1.0;
        c.add_tilde(weight, &tilde(mu + shift, nu + shift, x)?);
        weight *= beta;
    }
    Ok(c.finish())
}

fn lemma_xstar(kind: BoundKind, spec: &IntegralSpec, given: Option<f64>) -> Option<f64> {
    let x = spec.x;
    let critical = 1.0 / (1.0 - spec.beta);
    match (kind, given) {
        (BoundKind::UbLemmaSmallx, Some(s)) => (s > 0.0 && x <= s).then_some(s),
        (BoundKind::UbLemmaSmallx, None) => Some(x),
        (BoundKind::UbLemmaLargex, Some(s)) => (s > critical && x >= s).then_some(s),
        (BoundKind::UbLemmaLargex, None) => {
            if x >= 2.0 * critical {
                Some(2.0 * critical)
            } else if x > critical {
                Some(x)
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Evaluate one bound. Outside its hypotheses the result has
/// `in_domain = false` and NaN values; numerical failures are errors.
///
/// Default `x*`: `x` itself for the small-`x` lemma bound; for the large-`x`
/// one `2/(1−β)` when `x ≥ 2/(1−β)`, else `x` when `x > 1/(1−β)`.
pub fn evaluate_bound(kind: BoundKind, spec: &IntegralSpec, opts: &BoundOptions) -> Result<BoundResult> {
    spec.validate()?;
    let IntegralSpec { mu, nu, beta, x } = *spec;
    if !kind.hypotheses_hold(mu, nu, beta) {
        return Ok(BoundResult::outside(kind));
    }
    let mut xstar = None;
    let inv = 1.0 / (1.0 - beta);
    let (ln_abs, sign) = match kind {
        BoundKind::UbLemmaSmallx | BoundKind::UbLemmaLargex => {
            let Some(s) = lemma_xstar(kind, spec, opts.xstar) else {
                return Ok(BoundResult::outside(kind));
            };
            xstar = Some(s);
            let coef = if kind == BoundKind::UbLemmaSmallx {
                (mu + nu + 3.0 + 2.0 * s) / (2.0 * nu + 1.0)
            } else {
                const_m(mu, nu, beta, s)?
            };
            upper_shifted(coef, mu, nu, x)?
        }
        BoundKind::UbThm2A | BoundKind::StruveUbA => {
            let coef = (mu + nu + 3.0 + const_a(mu, nu)?) / ((2.0 * nu + 1.0) * (1.0 - beta));
            upper_shifted(coef, mu, nu, x)?
        }
        BoundKind::UbThm2Sqrt17 => {
            let coef = (mu + nu + 0.5 * (9.0 + SQRT_17)) / ((2.0 * nu + 1.0) * (1.0 - beta));
            upper_shifted(coef, mu, nu, x)?
        }
        BoundKind::StruveUbSqrt8 => {
            let coef = (2.0 * nu + 3.0 + 2.0 * SQRT_2) / ((2.0 * nu + 1.0) * (1.0 - beta));
            upper_shifted(coef, mu, nu, x)?
        }
        BoundKind::LbBasic | BoundKind::LbPropBasic => {
            refined_lower(0.0, ln_b_normalized(mu, nu, beta, x)?, mu, nu, beta, x)?
        }
        BoundKind::LbRefined | BoundKind::LbPropRefined => {
            let q = refined_coefficient(2.0 * nu, nu, beta);
            refined_lower(q, ln_b_normalized(mu, nu, beta, x)?, mu, nu, beta, x)?
        }
        BoundKind::LbSqrt17 | BoundKind::LbPropSqrt17 => {
            let q = refined_coefficient(mu + nu + 0.5 * (5.0 + SQRT_17), nu, beta);
            refined_lower(q, ln_b_normalized(mu, nu, beta, x)?, mu, nu, beta, x)?
        }
        BoundKind::StruveLb => {
            let q = refined_coefficient(2.0 * nu + 1.0 + 2.0 * SQRT_2, nu, beta);
            refined_lower(q, ln_struve_b_normalized(nu, beta, x)?, mu, nu, beta, x)?
        }
        BoundKind::LbSeries => {
            let k = opts.truncation_k.unwrap_or(DEFAULT_TRUNCATION);
            series_lower(mu, nu, beta, x, k)?
        }
        BoundKind::PriorUbGau1 => {
            let coef = 2.0 * (nu + 1.0) / ((2.0 * nu + 1.0) * (1.0 - beta));
            upper_shifted(coef, mu, nu, x)?
        }
        BoundKind::PriorUbGau2 => {
            let mut c = Combination::new();
            c.add_tilde(inv, &tilde(mu, nu, x)?);
            c.finish()
        }
        BoundKind::CombinedCnu => {
            let coef = combined_c_nu(nu)? / ((2.0 * nu + 1.0) * (1.0 - beta));
            let mut c = Combination::new();
            c.add_tilde(coef, &tilde(mu, nu, x)?);
            c.finish()
        }
    };
    Ok(finish(kind, xstar, ln_abs, sign, beta, nu, x))
}

fn finish(kind: BoundKind, xstar: Option<f64>, ln_abs: f64, sign: f64, beta: f64, nu: f64, x: f64) -> BoundResult {
    let to_value = |ln: f64| if sign == 0.0 { 0.0 } else { sign * ln.exp() };
    BoundResult {
        kind,
        side: kind.side(),
        target: kind.target(),
        in_domain: true,
        xstar,
        normalized: to_value(ln_abs),
        ln_abs_normalized: ln_abs,
        sign,
        value: to_value(ln_abs - beta * x + nu * x.ln()),
    }
}

/// Normalised `(lower, upper)` pair
/// `(Σ_{k=0}^{K} β^k t̃_{μ+k+1,ν+k+1}(x), t̃_{μ,ν}(x)/(1−β))`
/// for `μ > −1/2`, `1/2 ≤ ν < μ+1`, `0 < β < 1`.
pub fn two_sided_envelope(spec: &IntegralSpec, k: usize) -> Result<(f64, f64)> {
    spec.validate()?;
    let IntegralSpec { mu, nu, beta, x } = *spec;
    if !BoundKind::PriorUbGau2.hypotheses_hold(mu, nu, beta) {
        return Err(NumericError::domain(format!(
            "envelope needs μ > −1/2, 1/2 ≤ ν < μ+1, 0 < β < 1; got ({mu}, {nu}, {beta})"
        )));
    }
    let (ln_lo, s_lo) = series_lower(mu, nu, beta, x, k)?;
    let upper = tilde(mu, nu, x)?.to_f64() / (1.0 - beta);
    Ok((s_lo * ln_lo.exp(), upper))
}

/// The normalised three-term upper bound that precedes the `2(ν+1)` form:
/// `[2(ν+1) t̃_{μ+1,ν+1} − t̃_{μ+3,ν+3} − x^{μ+2}/(2^{μ+2}(μ+ν+2)Γ((μ−ν+1)/2)Γ((μ+ν+5)/2))] / ((2ν+1)(1−β))`.
pub fn prior_three_term(spec: &IntegralSpec) -> Result<f64> {
    spec.validate()?;
    let IntegralSpec { mu, nu, beta, x } = *spec;
    if !BoundKind::PriorUbGau1.hypotheses_hold(mu, nu, beta) {
        return Err(NumericError::domain(format!(
            "three-term bound needs μ > −1/2, 1/2 ≤ ν < μ+1, 0 < β < 1; got ({mu}, {nu}, {beta})"
        )));
    }
    let mut c = Combination::new();
    c.add_tilde(2.0 * (nu + 1.0), &tilde(mu + 1.0, nu + 1.0, x)?);
    c.add_tilde(-1.0, &tilde(mu + 3.0, nu + 3.0, x)?);
    let r = reciprocal_gamma((mu - nu + 1.0) / 2.0) * reciprocal_gamma((mu + nu + 5.0) / 2.0);
    if r != 0.0 {
        let ln = (mu + 2.0) * (0.5 * x).ln() - (mu + nu + 2.0).ln() + r.abs().ln();
        c.add_ln(-1.0, (ln, r.signum()));
    }
    let (ln, sign) = c.finish();
    Ok(sign * ln.exp() / ((2.0 * nu + 1.0) * (1.0 - beta)))
}

fn best(spec: &IntegralSpec, opts: &BoundOptions, side: Side) -> Result<Option<BoundResult>> {
    let mut chosen: Option<BoundResult> = None;
    for kind in BoundKind::ALL {
        if kind.side() != side || kind.target() != Target::Primary {
            continue;
        }
        let r = evaluate_bound(kind, spec, opts)?;
        if !r.in_domain {
            continue;
        }
        let better = match &chosen {
            None => true,
            Some(c) => match side {
                Side::Upper => r.cmp_normalized(c) == Ordering::Less,
                Side::Lower => r.cmp_normalized(c) == Ordering::Greater,
            },
        };
        if better {
            chosen = Some(r);
        }
    }
    Ok(chosen)
}

/// Smallest in-domain upper bound on the primary integral; ties go to the
/// earlier kind.
pub fn best_upper(spec: &IntegralSpec, opts: &BoundOptions) -> Result<Option<BoundResult>> {
    best(spec, opts, Side::Upper)
}

/// Largest in-domain lower bound on the primary integral; ties go to the
/// earlier kind.
pub fn best_lower(spec: &IntegralSpec, opts: &BoundOptions) -> Result<Option<BoundResult>> {
    best(spec, opts, Side::Lower)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::lower_incomplete_gamma;

    fn spec(mu: f64, nu: f64, beta: f64, x: f64) -> IntegralSpec {
        IntegralSpec::new(mu, nu, beta, x).unwrap()
    }

    fn eval(kind: BoundKind, s: &IntegralSpec) -> BoundResult {
        evaluate_bound(kind, s, &BoundOptions::default()).unwrap()
    }

    #[test]
    fn tags_round_trip() {
        for k in BoundKind::ALL {
            assert_eq!(BoundKind::from_tag(k.tag()), Some(k));
            let json = serde_json::to_string(&k).unwrap();
            assert_eq!(json, format!("\"{}\"", k.tag()));
        }
        assert_eq!(BoundKind::from_tag("lb_series"), Some(BoundKind::LbSeries));
        assert_eq!(BoundKind::from_tag("nope"), None);
    }

    #[test]
    fn constant_a_values() {
        assert!((const_a(0.0, 0.0).unwrap() - 6f64.sqrt()).abs() < 1e-15);
        assert!((const_a(1.0, 1.0).unwrap() - 10f64.sqrt()).abs() < 1e-15);
        assert!((const_a(0.0, -1.0).unwrap() - 0.5 * (1.0 + SQRT_17)).abs() < 1e-15);
        for &nu in &[-0.4, 0.0, 0.3, 2.0] {
            let a = const_a(nu, nu).unwrap();
            assert!((a - (2.0 * (2.0 * nu + 3.0)).sqrt()).abs() < 1e-14);
        }
        assert!(const_a(-10.0, -10.0).is_err());
    }

    #[test]
    fn constant_m_values() {
        assert_eq!(const_m(1.0, 0.5, 0.5, 4.0).unwrap(), 6.25);
        assert_eq!(const_m(0.0, 0.0, 0.25, 2.0).unwrap(), 7.0);
        assert!(const_m(0.0, 0.0, 0.5, 2.0).is_err());
        // second argument tends to 1/(1−β), so the first one wins eventually
        let m = const_m(0.0, 0.0, 0.5, 1e6).unwrap();
        assert_eq!(m, 3.0 + 2e6);
    }

    #[test]
    fn constant_b_values() {
        assert_eq!(const_b(1.0, 0.0, 0.5, 0.0).unwrap(), 0.0);
        assert!(const_b(1.0, 0.0, 0.5, 1e-8).unwrap() < 1e-15);
        assert!(const_b(-1.0, -0.5, 0.5, 1.0).is_err());
        assert!(const_b(1.0, 0.0, 1.0, 1.0).is_err());
        // (1, 0, 0.5, 2): γ(2, 1)/(0.5² · 2 · Γ(1) Γ(2))
        let g = lower_incomplete_gamma(2.0, 1.0).unwrap();
        let expect = g / (0.25 * 2.0);
        assert!((const_b(1.0, 0.0, 0.5, 2.0).unwrap() / expect - 1.0).abs() < 1e-14);
        let mut last = 0.0;
        for i in 1..40 {
            let b = const_b(2.0, 0.7, 0.3, i as f64 * 0.5).unwrap();
            assert!(b > last);
            last = b;
        }
    }

    #[test]
    fn struve_constant_matches_general_b() {
        for &(nu, beta, x) in &[(0.75, 0.25, 3.0), (2.0, 0.5, 10.0), (4.5, 0.9, 0.3)] {
            let (l1, s1) = ln_b_normalized(nu, nu, beta, x).unwrap();
            let (l2, s2) = ln_struve_b_normalized(nu, beta, x).unwrap();
            assert_eq!(s1, s2);
            assert!((l1 - l2).abs() < 1e-13 * l1.abs().max(1.0));
        }
    }

    #[test]
    fn struve_reductions() {
        for &(nu, beta, x) in &[(-0.3, 0.25, 2.0), (0.0, 0.5, 7.0), (2.5, 0.75, 30.0)] {
            let s = spec(nu, nu, beta, x);
            let general = eval(BoundKind::UbThm2A, &s);
            let struve = eval(BoundKind::StruveUbA, &s);
            assert!(general.in_domain && struve.in_domain);
            assert_eq!(general.normalized, struve.normalized);
            assert_eq!(general.value, struve.value);
        }
        for &(nu, beta, x) in &[(0.75, 0.25, 20.0), (3.0, 0.5, 60.0)] {
            let s = spec(nu, nu, beta, x);
            let struve = eval(BoundKind::StruveLb, &s);
            let q = refined_coefficient(2.0 * nu + 1.0 + 2.0 * SQRT_2, nu, beta);
            let (ln, sign) =
                refined_lower(q, ln_b_normalized(nu, nu, beta, x).unwrap(), nu, nu, beta, x).unwrap();
            assert_eq!(sign, struve.sign);
            assert!((ln - struve.ln_abs_normalized).abs() < 1e-12);
        }
    }

    #[test]
    fn refined_coefficient_pattern() {
        // the three refined lower bounds share q = 2ν c′/((2ν−1)(1−β))
        let (mu, nu, beta) = (3.0, 2.0, 0.4);
        let q7 = refined_coefficient(2.0 * nu, nu, beta);
        assert!((q7 - 4.0 * nu * nu / ((2.0 * nu - 1.0) * (1.0 - beta))).abs() < 1e-14);
        let q8 = refined_coefficient(mu + nu + 0.5 * (5.0 + SQRT_17), nu, beta);
        let printed = 2.0 * nu * (mu + nu + 0.5 * (5.0 + SQRT_17)) / ((2.0 * nu - 1.0) * (1.0 - beta));
        assert!((q8 - printed).abs() < 1e-14);
    }

    #[test]
    fn domain_gating_is_exact() {
        // LB_BASIC: μ > −1, −μ−1 < ν ≤ 0
        assert!(BoundKind::LbBasic.hypotheses_hold(0.0, 0.0, 0.5));
        assert!(!BoundKind::LbBasic.hypotheses_hold(-1.0, 0.0, 0.5));
        assert!(!BoundKind::LbBasic.hypotheses_hold(0.0, -1.0, 0.5));
        // LB_REFINED: μ > 1/2, 3/2 ≤ ν < μ+1
        assert!(BoundKind::LbRefined.hypotheses_hold(1.0, 1.5, 0.5));
        assert!(!BoundKind::LbRefined.hypotheses_hold(0.5, 1.4, 0.5));
        assert!(!BoundKind::LbRefined.hypotheses_hold(1.0, 2.0, 0.5));
        // LB_SQRT17: strict 1/2 < ν
        assert!(!BoundKind::LbSqrt17.hypotheses_hold(1.0, 0.5, 0.5));
        // LB_SERIES: ν ≤ μ+3 inclusive
        assert!(BoundKind::LbSeries.hypotheses_hold(0.0, 3.0, 0.5));
        assert!(!BoundKind::LbSeries.hypotheses_hold(0.0, 3.0 + 1e-15, 0.5));
        // gauge constraints on β
        assert!(!BoundKind::PriorUbGau2.hypotheses_hold(1.0, 1.0, 0.0));
        assert!(!BoundKind::PriorUbGau2.hypotheses_hold(1.0, 1.0, 1.0));
        assert!(!BoundKind::StruveUbA.hypotheses_hold(1.0, 1.0 + 1e-12, 0.5));
        let r = eval(BoundKind::LbRefined, &spec(0.0, 1.5, 0.5, 2.0));
        assert!(!r.in_domain && r.value.is_nan());
    }

    #[test]
    fn lemma_xstar_regimes() {
        let s = spec(1.0, 0.5, 0.5, 3.0);
        let r = eval(BoundKind::UbLemmaLargex, &s);
        assert!(r.in_domain);
        assert_eq!(r.xstar, Some(3.0));
        let r = eval(BoundKind::UbLemmaLargex, &s.with_x(1.5));
        assert!(!r.in_domain);
        let r = eval(BoundKind::UbLemmaLargex, &s.with_x(10.0));
        assert_eq!(r.xstar, Some(4.0));
        let opts = BoundOptions { xstar: Some(2.0), ..Default::default() };
        assert!(!evaluate_bound(BoundKind::UbLemmaSmallx, &s, &opts).unwrap().in_domain);
        let opts = BoundOptions { xstar: Some(5.0), ..Default::default() };
        let r = evaluate_bound(BoundKind::UbLemmaSmallx, &s, &opts).unwrap();
        assert_eq!(r.xstar, Some(5.0));
    }

    #[test]
    fn sharper_predicate() {
        assert!(sharper_a_predicate(0.0, 0.4));
        assert_eq!(
            sharper_a_predicate(2.5, 3.0),
            const_a(2.5, 3.0).unwrap() < 0.5 * (3.0 + SQRT_17)
        );
        for i in -49..50 {
            let nu = i as f64 / 100.0;
            assert!(sharper_a_predicate(nu, nu));
        }
        let s = spec(0.0, 0.0, 0.5, 4.0);
        assert!(eval(BoundKind::UbThm2A, &s).normalized < eval(BoundKind::UbThm2Sqrt17, &s).normalized);
    }

    #[test]
    fn envelope_grows_with_k() {
        let s = spec(0.5, 1.0, 0.25, 5.0);
        let mut last = 0.0;
        for k in 0..8 {
            let (lo, up) = two_sided_envelope(&s, k).unwrap();
            assert!(lo > last && lo < up);
            last = lo;
        }
        let (lo, _) = two_sided_envelope(&s, 4).unwrap();
        assert_eq!(lo, eval(BoundKind::LbSeries, &s).normalized);
        assert!(two_sided_envelope(&spec(0.5, 0.2, 0.25, 5.0), 4).is_err());
    }

    #[test]
    fn three_term_below_simplified() {
        for &(mu, nu, beta, x) in &[(0.5, 1.0, 0.25, 0.5), (3.0, 1.0, 0.5, 10.0), (12.0, 10.0, 0.5, 40.0)] {
            let s = spec(mu, nu, beta, x);
            let three = prior_three_term(&s).unwrap();
            let simple = eval(BoundKind::PriorUbGau1, &s).normalized;
            assert!(three < simple, "{three} {simple}");
        }
    }

    #[test]
    fn raw_and_normalized_agree() {
        let s = spec(1.0, 0.5, 0.25, 5.0);
        let r = eval(BoundKind::PriorUbGau2, &s);
        let t = tilde(1.0, 0.5, 5.0).unwrap().to_f64();
        assert!((r.normalized - t / 0.75).abs() < 1e-14 * r.normalized);
        let raw = (-0.25f64 * 5.0).exp() * 5f64.powf(0.5) * t / 0.75;
        assert!((r.value / raw - 1.0).abs() < 1e-14);
    }

    #[test]
    fn large_x_stays_finite_in_log_form() {
        let r = eval(BoundKind::PriorUbGau2, &spec(1.0, 0.5, 0.25, 900.0));
        assert!(r.in_domain && r.ln_abs_normalized.is_finite());
        assert!(r.normalized.is_infinite());
    }

    #[test]
    fn best_selectors() {
        let s = spec(0.5, 1.0, 0.25, 25.0);
        let opts = BoundOptions::default();
        let up = best_upper(&s, &opts).unwrap().unwrap();
        let lo = best_lower(&s, &opts).unwrap().unwrap();
        assert_eq!(up.side, Side::Upper);
        assert_eq!(lo.target, Target::Primary);
        for k in BoundKind::ALL {
            let r = evaluate_bound(k, &s, &opts).unwrap();
            if r.in_domain && r.target == Target::Primary {
                match r.side {
                    Side::Upper => assert!(r.normalized >= up.normalized),
                    Side::Lower => assert!(r.normalized <= lo.normalized),
                }
            }
        }
    }
}
