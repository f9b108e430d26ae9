use rug::ops::Pow;
use rug::{Float, Rational};

use super::amplitude::{log_a0_derivative, SectorW};
use crate::error::{Error, Result};
use crate::exact::ThetaValue;
use crate::mpnum::{hurwitz_zeta, PrecisionContext};
use crate::special_products::factorial;

/// sum_{k>=1} k / (k + b)^p = zeta(p-1, 1+b) - b zeta(p, 1+b), for b > -1.
fn weighted_tail(p: u32, b: &Float, ctx: &PrecisionContext) -> Result<Float> {
    let prec = ctx.bits();
    let a = Float::with_val(prec, b + 1u32);
    Ok(hurwitz_zeta(p - 1, &a, ctx)? - Float::with_val(prec, b * hurwitz_zeta(p, &a, ctx)?))
}

/// Both sides of the zero-sum identity at alpha:
///
/// lhs = sum over zeros a_n of m_n / (a_n - alpha)^p, with zeros at 2 pi n and
/// 2 pi n +- 2 pi / 3 of multiplicity |n|;
/// rhs = -(1/(p-1)!) d^p/dz^p ln A_0(z) at z = alpha.
///
/// Needs p in 3..=6 and |alpha| < 4 pi / 3 (the zero-free strip around 0).
pub fn zero_sum_check(p: u32, alpha: &ThetaValue, ctx: &PrecisionContext) -> Result<(Float, Float)> {
    if !(3..=6).contains(&p) {
        return Err(Error::InvalidParams(format!("zero-sum power p = {p} must lie in 3..=6")));
    }
    let prec = ctx.bits();
    let w = SectorW::from_theta(alpha, prec);
    if w.is_zero_of_a0() {
        return Err(Error::ZeroOfAmplitude);
    }
    if w.value.clone().abs() >= Rational::from((2, 3)) {
        return Err(Error::Domain(format!("alpha = {alpha} must satisfy |alpha| < 4 pi / 3")));
    }
    // zeros 2 pi (n + delta) with delta in {0, 1/3, -1/3}; b = delta - w
    let mut lhs = Float::with_val(prec, 0);
    for delta in [Rational::new(), Rational::from((1, 3)), Rational::from((-1, 3))] {
        let d = Float::with_val(prec, &delta);
        let b_pos = Float::with_val(prec, &d - &w.value);
        let b_neg = Float::with_val(prec, &w.value + &d);
        lhs += weighted_tail(p, &b_pos, ctx)?;
        let neg = weighted_tail(p, &b_neg, ctx)?;
        if p % 2 == 0 {
            lhs += neg;
        } else {
            lhs -= neg;
        }
    }
    let two_pi = Float::with_val(prec, rug::float::Constant::Pi) * 2u32;
    lhs /= two_pi.pow(p);

    let fact = Float::with_val(prec, factorial(p as usize - 1));
    let rhs = -log_a0_derivative(p, alpha, ctx)? / fact;
    Ok((lhs, rhs))
}
