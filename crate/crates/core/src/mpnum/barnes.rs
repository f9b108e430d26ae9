use rug::Float;

use super::bernoulli::default_table;
use super::constants::{constant, ln_const, LnConst, NamedConstant};
use super::gamma::{gamma_signed, ln_gamma, polygamma_real};
use super::signed::SignedLog;
use super::{next_threshold, optimal_truncation, rational_to_float, shift_threshold, PrecisionContext, MAX_SHIFT_ATTEMPTS};
use crate::error::{Error, Result};

/// log G(z + 1) for large z:
/// z^2/2 ln z - 3z^2/4 + z/2 ln 2pi - ln z / 12 + zeta'(-1)
///   + sum_k B_{2k+2} / (4k(k+1) z^2k)
fn asymptotic(z: &Float, ctx: &PrecisionContext) -> Result<Option<Float>> {
    let prec = ctx.bits();
    let table = default_table();
    let z_sq = Float::with_val(prec, z * z);
    let mut z_pow = z_sq.clone();
    let tail = optimal_truncation(prec, &ctx.eps(), |k| {
        let b = table.get(2 * k + 2).ok()?;
        let denom = 4 * (k as u64) * (k as u64 + 1);
        let t = rational_to_float(b, prec) / &z_pow / denom;
        z_pow *= &z_sq;
        Some(t)
    });
    let Some(tail) = tail else { return Ok(None) };
    let ln_z = z.clone().ln();
    let quad = Float::with_val(prec, &z_sq * &ln_z) / 2u32 - Float::with_val(prec, &z_sq * 3u32) / 4u32;
    let lin = Float::with_val(prec, z * ln_const(LnConst::TwoPi, prec)) / 2u32;
    let log_term = Float::with_val(prec, &ln_z / 12u32);
    Ok(Some(quad + lin - log_term + constant(NamedConstant::ZetaPrimeMinus1, ctx)? + tail))
}

/// ln G(x) for x > 0, with G the Barnes G-function (G(1) = 1,
/// G(x + 1) = Gamma(x) G(x)).
pub fn log_barnes_g(x: &Float, ctx: &PrecisionContext) -> Result<Float> {
    if *x <= 0 {
        return Err(Error::Domain(format!("log_barnes_g needs x > 0, got {}", x.to_f64())));
    }
    let prec = ctx.bits();
    let x = Float::with_val(prec, x);
    let mut threshold = shift_threshold(ctx);
    for _ in 0..MAX_SHIFT_ATTEMPTS {
        let n = if x >= threshold + 1 {
            0
        } else {
            Float::with_val(prec, threshold + 1 - x.clone()).ceil().to_f64() as u32
        };
        let z = Float::with_val(prec, &x + n) - 1u32;
        if let Some(value) = asymptotic(&z, ctx)? {
            if n == 0 {
                return Ok(value);
            }
            // sum_{j<n} ln Gamma(x+j) = n ln Gamma(x) + sum_{i<=n-2} (n-1-i) ln(x+i)
            let mut gammas = ln_gamma(&x, ctx)? * n;
            for i in 0..n.saturating_sub(1) {
                gammas += Float::with_val(prec, &x + i).ln() * (n - 1 - i);
            }
            return Ok(value - gammas);
        }
        threshold = next_threshold(threshold);
    }
    Err(Error::PrecisionUnderflow("Barnes G expansion did not converge".into()))
}

/// G(x) for any real x, as sign and log-magnitude. Exact zero at the
/// nonpositive integers.
pub fn barnes_g(x: &Float, ctx: &PrecisionContext) -> Result<SignedLog> {
    let prec = ctx.bits();
    if *x > 0 {
        return Ok(SignedLog::new(1, log_barnes_g(x, ctx)?));
    }
    if x.is_integer() {
        return Ok(SignedLog::zero(prec));
    }
    // G(x) = G(x + m) / prod_{j<m} Gamma(x + j)
    let m = Float::with_val(prec, -x.clone()).ceil().to_f64() as u32 + 1;
    let shifted = Float::with_val(prec, x + m);
    let mut acc = SignedLog::new(1, log_barnes_g(&shifted, ctx)?);
    for j in 0..m {
        acc = acc.div(&gamma_signed(&Float::with_val(prec, x + j), ctx)?);
    }
    Ok(acc)
}

/// d^order/dw^order ln G(w). Order 0 needs w > 0; higher orders accept any
/// real w away from the nonpositive integers (the log-derivative is then
/// that of |G|).
pub fn log_barnes_g_derivative(order: u32, w: &Float, ctx: &PrecisionContext) -> Result<Float> {
    let prec = ctx.bits();
    if order == 0 {
        return log_barnes_g(w, ctx);
    }
    if w.is_integer() && *w <= 0 {
        return Err(Error::Domain(format!("ln G is singular at {}", w.to_f64())));
    }
    let w_minus = Float::with_val(prec, w - 1u32);
    if order == 1 {
        let half_ln_2pi = Float::with_val(prec, ln_const(LnConst::TwoPi, prec) / 2u32);
        let psi = polygamma_real(0, w, ctx)?;
        return Ok(half_ln_2pi - 0.5f64 - &w_minus + w_minus.clone() * psi);
    }
    // (p-1) psi_{p-2}(w) + (w-1) psi_{p-1}(w) - [p == 2]
    let lower = polygamma_real(order - 2, w, ctx)? * (order - 1);
    let upper = polygamma_real(order - 1, w, ctx)? * w_minus;
    let mut value = lower + upper;
    if order == 2 {
        value -= 1u32;
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpnum::agreeing_digits;

    #[test]
    fn small_integer_values() {
        let c = PrecisionContext::new(40).unwrap();
        // G(1) = G(2) = G(3) = 1, G(4) = 2, G(5) = 12, G(6) = 288
        for (x, g) in [(1u32, 1u32), (2, 1), (3, 1), (4, 2), (5, 12), (6, 288)] {
            let v = log_barnes_g(&c.float(x), &c).unwrap();
            let expect = c.float(g).ln();
            assert!((v - expect).abs() < c.tolerance(1), "G({x})");
        }
    }

    #[test]
    fn half_argument() {
        // ln G(1/2) = ln 2 / 24 - ln pi / 4 + 3/2 zeta'(-1)
        let c = PrecisionContext::new(50).unwrap();
        let v = log_barnes_g(&c.float(0.5), &c).unwrap();
        let p = c.bits();
        let zp = constant(NamedConstant::ZetaPrimeMinus1, &c).unwrap();
        let expect = ln_const(LnConst::Two, p) / 24u32 - ln_const(LnConst::Pi, p) / 4u32 + zp * 1.5f64;
        assert!(agreeing_digits(&v, &expect, 100) >= 49);
    }

    #[test]
    fn zeros_and_signs_on_negative_axis() {
        let c = PrecisionContext::new(30).unwrap();
        assert!(barnes_g(&c.float(0), &c).unwrap().is_zero());
        assert!(barnes_g(&c.float(-3), &c).unwrap().is_zero());
        // G(x + 1) = Gamma(x) G(x) at x = -1/2
        let x = c.float(-0.5);
        let lhs = barnes_g(&c.float(0.5), &c).unwrap();
        let rhs = gamma_signed(&x, &c).unwrap().mul(&barnes_g(&x, &c).unwrap());
        assert_eq!(lhs.sign, rhs.sign);
        assert!((lhs.log_abs - rhs.log_abs).abs() < c.tolerance(1));
    }

    #[test]
    fn first_derivative_at_one() {
        // (ln G)'(1) = ln(2 pi)/2 - 1/2
        let c = PrecisionContext::new(40).unwrap();
        let v = log_barnes_g_derivative(1, &c.float(1), &c).unwrap();
        let expect = ln_const(LnConst::TwoPi, c.bits()) / 2u32 - 0.5f64;
        assert!(agreeing_digits(&v, &expect, 100) >= 39);
    }
}
