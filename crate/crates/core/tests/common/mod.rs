//! Extended-precision reference implementations (MPFR, 200 bits) shared by
//! the integration tests. They sum the defining series directly and never
//! call into the crate.

#![allow(dead_code)]

use rug::ops::Pow;
use rug::Float;

pub const PREC: u32 = 200;

pub fn mp(v: f64) -> Float {
    Float::with_val(PREC, v)
}

fn is_pole(a: &Float) -> bool {
    *a <= 0 && a.is_integer()
}

/// `1/Γ(a)` with the pole convention.
pub fn mp_rgamma(a: &Float) -> Float {
    if is_pole(a) {
        mp(0.0)
    } else {
        Float::with_val(PREC, a.gamma_ref()).recip()
    }
}

/// `Σ (x/2)^{μ+2k+1} / [Γ(k+(μ−ν+3)/2) Γ(k+(μ+ν+3)/2)]` summed until terms
/// drop below `2^{−PREC}` of the partial sum once they decrease.
pub fn mp_tilde(mu: f64, nu: f64, x: f64) -> Float {
    let half = mp(x) / 2u32;
    let a = (mp(mu) - nu + 3u32) / 2u32;
    let b = (mp(mu) + nu + 3u32) / 2u32;
    let mut sum = mp(0.0);
    let mut k = 0u32;
    loop {
        let ka = Float::with_val(PREC, &a + k);
        let kb = Float::with_val(PREC, &b + k);
        let power = Float::with_val(PREC, &half).pow(mp(mu) + 2 * k + 1u32);
        let term = power * mp_rgamma(&ka) * mp_rgamma(&kb);
        sum += &term;
        let past_peak = f64::from(k) > x && ka > 1 && kb > 1;
        if past_peak && term.clone().abs() < sum.clone().abs() * mp(2f64.powi(-190)) {
            break;
        }
        k += 1;
        assert!(k < 100_000, "oracle series did not converge");
    }
    sum
}

/// `γ(a, x) = Γ(a) − Γ(a, x)`.
pub fn mp_lower_gamma(a: f64, x: f64) -> Float {
    let ga = mp(a).gamma();
    let upper = mp(a).gamma_inc(&mp(x));
    ga - upper
}

pub fn rel_err(approx: f64, exact: &Float) -> f64 {
    let e = exact.to_f64();
    ((approx - e) / e).abs()
}

/// Parameter grid on which every series coefficient is positive.
pub fn standard_grid() -> Vec<(f64, f64, f64)> {
    let mut out = Vec::new();
    for &mu in &[-1.25, -0.5, 0.0, 0.5, 1.0, 2.5, 5.0, 9.5, 15.0] {
        for &nu in &[-1.0, -0.4, 0.0, 0.5, 1.0, 2.0, 5.0, 10.0] {
            if mu - nu >= -3.0 && mu + nu > -2.0 {
                for &x in &[0.01, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 30.0] {
                    out.push((mu, nu, x));
                }
            }
        }
    }
    out
}
