use std::f64::consts::{FRAC_PI_4, PI};

use crate::{Error, Result};

/// Ai(0) = 3^{-2/3}/Γ(2/3)
const AI0: f64 = 0.355_028_053_887_817_2;
/// -Ai'(0) = 3^{-1/3}/Γ(1/3)
const AIP0: f64 = 0.258_819_403_792_806_8;

/// Below this the oscillatory asymptotic expansion is used.
const NEG_SWITCH: f64 = -7.5;
/// Above this `Ai` is taken from `K_{1/3}` by continued fraction.
const POS_SWITCH: f64 = 3.0;

const SERIES_TERMS: usize = 200;

/// Airy function of the first kind.
///
/// Three regimes:
/// * `x < -7.5`: Poincaré asymptotic expansion, truncated at its smallest term
/// * `-7.5 ≤ x ≤ 3`: Maclaurin series
/// * `x > 3`: `Ai(x) = √(x/3)·K_{1/3}(ζ)/π`, `ζ = 2x^{3/2}/3`, with `K_{1/3}`
///   from Steed's continued fraction (the convergent resummation of the
///   decaying asymptotic series)
///
/// Across each switch the two neighbouring branches agree to about 1e-11
/// relative to the local magnitude of `Ai` (its envelope `π^{-1/2}|x|^{-1/4}`
/// on the oscillatory side).
pub fn airy_ai(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < NEG_SWITCH {
        asymptotic_negative(x)
    } else if x <= POS_SWITCH {
        maclaurin(x)
    } else {
        bessel_k_route(x)
    }
}

pub(super) fn maclaurin(x: f64) -> f64 {
    let x3 = x * x * x;
    let mut f = 1.0;
    let mut f_term = 1.0;
    let mut g = x;
    let mut g_term = x;
    for k in 1..SERIES_TERMS {
        let k3 = (3 * k) as f64;
        f_term *= x3 / ((k3 - 1.0) * k3);
        g_term *= x3 / (k3 * (k3 + 1.0));
        f += f_term;
        g += g_term;
        if f_term.abs() <= 1e-17 * f.abs() && g_term.abs() <= 1e-17 * g.abs() {
            break;
        }
    }
    AI0 * f - AIP0 * g
}

/// Coefficients `u_k` of the Airy asymptotic expansions.
fn asymptotic_coefficients() -> [f64; 40] {
    let mut u = [0.0; 40];
    u[0] = 1.0;
    for k in 1..u.len() {
        let kf = k as f64;
        u[k] = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / (216.0 * kf * (2.0 * kf - 1.0));
    }
    u
}

pub(super) fn asymptotic_negative(x: f64) -> f64 {
    let z = -x;
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    let u = asymptotic_coefficients();
    let mut p = 0.0;
    let mut q = 0.0;
    let mut last = f64::INFINITY;
    let mut power = 1.0;
    for (k, &uk) in u.iter().enumerate() {
        let term = uk * power;
        if term >= last {
            break;
        }
        last = term;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        power /= zeta;
    }
    let phase = zeta - FRAC_PI_4;
    (phase.cos() * p + phase.sin() * q) / (PI.sqrt() * z.powf(0.25))
}

fn bessel_k_route(x: f64) -> f64 {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    (x / 3.0).sqrt() * bessel_k_third(zeta) / PI
}

/// `K_{1/3}(z)` for `z ≥ 2` by Steed's algorithm (Temme's CF2).
fn bessel_k_third(z: f64) -> f64 {
    const NU: f64 = 1.0 / 3.0;
    let mut b = 2.0 * (1.0 + z);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - NU * NU;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..10_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-16 {
            break;
        }
    }
    (PI / (2.0 * z)).sqrt() * (-z).exp() / s
}

/// k-th zero of `Ai` on the negative axis, `a_1 ≈ -2.338` closest to 0.
///
/// The asymptotic zero formula brackets the root; bisection refines it well
/// below 1e-10.
pub fn airy_zero(k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::invalid("k", "Airy zeros are indexed from 1"));
    }
    let t = 3.0 * PI * (4.0 * k as f64 - 1.0) / 8.0;
    let t2 = t.powi(-2);
    let estimate = -t.powf(2.0 / 3.0)
        * (1.0 + t2 * (5.0 / 48.0 - t2 * (5.0 / 36.0 - t2 * 77_125.0 / 82_944.0)));
    // a quarter of the local zero spacing π/√|a|
    let half_width = (0.25 * PI / estimate.abs().sqrt()).min(0.3);
    let mut lo = estimate - half_width;
    let mut hi = estimate + half_width;
    let mut f_lo = airy_ai(lo);
    let f_hi = airy_ai(hi);
    if f_lo * f_hi > 0.0 {
        return Err(Error::NoConvergence(format!("bracketing of Airy zero {k}")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 4.0 * f64::EPSILON * mid.abs() {
            break;
        }
        let f_mid = airy_ai(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
