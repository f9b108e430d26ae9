use rug::ops::Pow;
use rug::{Float, Integer};

use super::bernoulli::default_table;
use super::constants::{ln_const, LnConst};
use super::signed::SignedLog;
use super::{optimal_truncation, rational_to_float, shift_threshold, PrecisionContext, MAX_SHIFT_ATTEMPTS, next_threshold};
use crate::error::{Error, Result};

fn nonpositive_integer(z: &Float) -> bool {
    z.is_integer() && *z <= 0
}

/// Number of unit shifts that lift `z` to at least `threshold`.
fn shift_count(z: &Float, threshold: u32) -> u32 {
    if *z >= threshold {
        0
    } else {
        let gap = Float::with_val(z.prec(), threshold - z.clone());
        gap.ceil().to_f64() as u32
    }
}

/// ln Gamma(w) for large w by the Stirling series, optimally truncated.
fn stirling(w: &Float, ctx: &PrecisionContext) -> Option<Float> {
    let prec = ctx.bits();
    let table = default_table();
    let w_sq = Float::with_val(prec, w * w);
    let mut w_pow = w.clone();
    let tail = optimal_truncation(prec, &ctx.eps(), |k| {
        let b = table.get(2 * k).ok()?;
        let denom = (2 * k as u64) * (2 * k as u64 - 1);
        let t = rational_to_float(b, prec) / &w_pow / denom;
        w_pow *= &w_sq;
        Some(t)
    })?;
    let half_ln_2pi = Float::with_val(prec, ln_const(LnConst::TwoPi, prec) / 2u32);
    let w_half = Float::with_val(prec, w - 0.5f64);
    Some(w_half * w.clone().ln() - w + half_ln_2pi + tail)
}

/// ln Gamma(z) for z > 0.
pub fn ln_gamma(z: &Float, ctx: &PrecisionContext) -> Result<Float> {
    if *z <= 0 {
        return Err(Error::Domain(format!("ln_gamma needs z > 0, got {}", z.to_f64())));
    }
    let prec = ctx.bits();
    let z = Float::with_val(prec, z);
    let mut threshold = shift_threshold(ctx);
    for _ in 0..MAX_SHIFT_ATTEMPTS {
        let n = shift_count(&z, threshold);
        let w = Float::with_val(prec, &z + n);
        if let Some(value) = stirling(&w, ctx) {
            let mut product = Float::with_val(prec, 1);
            for j in 0..n {
                product *= Float::with_val(prec, &z + j);
            }
            return Ok(value - product.ln());
        }
        threshold = next_threshold(threshold);
    }
    Err(Error::PrecisionUnderflow("Stirling series did not reach the requested precision".into()))
}

/// Gamma(z) for z > 0.
pub fn gamma_fn(z: &Float, ctx: &PrecisionContext) -> Result<Float> {
    Ok(ln_gamma(z, ctx)?.exp())
}

/// Gamma(z) as sign and log-magnitude for any real z that is not a pole.
pub fn gamma_signed(z: &Float, ctx: &PrecisionContext) -> Result<SignedLog> {
    if nonpositive_integer(z) {
        return Err(Error::Domain(format!("Gamma has a pole at {}", z.to_f64())));
    }
    if *z > 0 {
        return Ok(SignedLog::new(1, ln_gamma(z, ctx)?));
    }
    // Reflection: Gamma(z) Gamma(1 - z) = pi / sin(pi z)
    let prec = ctx.bits();
    let pi = Float::with_val(prec, rug::float::Constant::Pi);
    let sin = Float::with_val(prec, &pi * z).sin();
    let one_minus = Float::with_val(prec, 1 - z.clone());
    let log_abs = pi.ln() - sin.clone().abs().ln() - ln_gamma(&one_minus, ctx)?;
    Ok(SignedLog::new(if sin.is_sign_negative() { -1 } else { 1 }, log_abs))
}

/// Hurwitz zeta(s, a) = sum_{n>=0} (n + a)^(-s) for integer s >= 2 and any
/// real `a` that is not a nonpositive integer. Direct summation up to a
/// shift, then an Euler-Maclaurin tail.
pub fn hurwitz_zeta(s: u32, a: &Float, ctx: &PrecisionContext) -> Result<Float> {
    if s < 2 {
        return Err(Error::Domain(format!("hurwitz_zeta needs s >= 2, got {s}")));
    }
    if nonpositive_integer(a) {
        return Err(Error::Domain(format!("hurwitz_zeta has a pole at a = {}", a.to_f64())));
    }
    let prec = ctx.bits();
    let a = Float::with_val(prec, a);
    let table = default_table();
    let mut threshold = shift_threshold(ctx);
    for _ in 0..MAX_SHIFT_ATTEMPTS {
        let n = shift_count(&a, threshold);
        let x = Float::with_val(prec, &a + n);
        let x_sq = Float::with_val(prec, &x * &x);
        let x_pow_s = Float::with_val(prec, (&x).pow(s));
        // term_k = B_2k / (2k)! * s (s+1) ... (s+2k-2) * x^(-s-2k+1)
        let mut rising = Integer::from(s);
        let mut fact = Integer::from(2);
        let mut x_pow = Float::with_val(prec, &x_pow_s * &x);
        let tail = optimal_truncation(prec, &ctx.eps(), |k| {
            if k > 1 {
                let kk = 2 * k as u32;
                rising *= (s + kk - 3) * (s + kk - 2);
                fact *= (kk - 1) * kk;
                x_pow *= &x_sq;
            }
            let b = table.get(2 * k).ok()?;
            let coeff = rational_to_float(b, prec) * Float::with_val(prec, &rising) / Float::with_val(prec, &fact);
            Some(coeff / &x_pow)
        });
        if let Some(tail) = tail {
            let integral = Float::with_val(prec, &x / &x_pow_s) / (s - 1);
            let half = Float::with_val(prec, x_pow_s.clone().recip() / 2u32);
            let mut direct = Float::with_val(prec, 0);
            for j in 0..n {
                let t = Float::with_val(prec, &a + j);
                direct += t.pow(s).recip();
            }
            return Ok(direct + integral + half + tail);
        }
        threshold = next_threshold(threshold);
    }
    Err(Error::PrecisionUnderflow("Euler-Maclaurin tail did not converge".into()))
}

fn digamma_real(z: &Float, ctx: &PrecisionContext) -> Result<Float> {
    let prec = ctx.bits();
    let z = Float::with_val(prec, z);
    let table = default_table();
    let mut threshold = shift_threshold(ctx);
    for _ in 0..MAX_SHIFT_ATTEMPTS {
        let n = shift_count(&z, threshold);
        let x = Float::with_val(prec, &z + n);
        let x_sq = Float::with_val(prec, &x * &x);
        let mut x_pow = x_sq.clone();
        // psi(x) ~ ln x - 1/(2x) - sum B_2k / (2k x^2k)
        let tail = optimal_truncation(prec, &ctx.eps(), |k| {
            let b = table.get(2 * k).ok()?;
            let t = rational_to_float(b, prec) / &x_pow / (2 * k as u32);
            x_pow *= &x_sq;
            Some(t)
        });
        if let Some(tail) = tail {
            let mut value = x.clone().ln() - Float::with_val(prec, x.clone().recip() / 2u32) - tail;
            for j in 0..n {
                value -= Float::with_val(prec, &z + j).recip();
            }
            return Ok(value);
        }
        threshold = next_threshold(threshold);
    }
    Err(Error::PrecisionUnderflow("digamma expansion did not converge".into()))
}

/// Polygamma psi_p(z) for any real z that is not a nonpositive integer.
pub fn polygamma_real(p: u32, z: &Float, ctx: &PrecisionContext) -> Result<Float> {
    if nonpositive_integer(z) {
        return Err(Error::Domain(format!("polygamma has a pole at {}", z.to_f64())));
    }
    if p == 0 {
        return digamma_real(z, ctx);
    }
    // psi_p(z) = (-1)^(p+1) p! zeta(p+1, z)
    let zeta = hurwitz_zeta(p + 1, z, ctx)?;
    let fact = Integer::from(Integer::factorial(p));
    let value = zeta * Float::with_val(ctx.bits(), &fact);
    Ok(if p % 2 == 0 { -value } else { value })
}

/// Polygamma psi_p(z) for z > 0 and p <= 6.
pub fn polygamma(p: u32, z: &Float, ctx: &PrecisionContext) -> Result<Float> {
    if p > 6 {
        return Err(Error::Domain(format!("polygamma order {p} exceeds 6")));
    }
    if *z <= 0 {
        return Err(Error::Domain(format!("polygamma needs z > 0, got {}", z.to_f64())));
    }
    polygamma_real(p, z, ctx)
}
