use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::exact::ThetaValue;
use crate::mpnum::{
    barnes_g, constant, ln_const, ln_gamma, log_barnes_g_derivative, LnConst, NamedConstant, PrecisionContext,
    SignedLog,
};

/// Shifts c in the six Barnes factors G(c + w) G(c - w).
pub(crate) fn g_shifts() -> [Rational; 3] {
    [Rational::from(1), Rational::from((4, 3)), Rational::from((2, 3))]
}

/// w = theta / (2 pi), kept exact when theta is a rational multiple of pi.
#[derive(Clone, Debug)]
pub struct SectorW {
    pub value: Float,
    pub exact: Option<Rational>,
}

impl SectorW {
    pub fn from_theta(theta: &ThetaValue, prec: u32) -> Self {
        match theta.as_pi_multiple() {
            Some(r) => Self::exact(Rational::from(r / 2u32), prec),
            None => {
                let pi = Float::with_val(prec, rug::float::Constant::Pi);
                Self { value: theta.to_float(prec) / pi / 2u32, exact: None }
            }
        }
    }

    pub fn exact(w: Rational, prec: u32) -> Self {
        Self { value: Float::with_val(prec, &w), exact: Some(w) }
    }

    /// w + n (the sector theta + 2 pi n).
    pub fn shifted(&self, n: i64) -> Self {
        match &self.exact {
            Some(r) => Self::exact(Rational::from(r + n), self.value.prec()),
            None => Self { value: Float::with_val(self.value.prec(), &self.value + n), exact: None },
        }
    }

    /// |w|; every even function of theta is evaluated at |w| so that
    /// mirrored sectors give bit-identical results.
    pub fn abs(&self) -> Self {
        Self { value: self.value.clone().abs(), exact: self.exact.clone().map(|r| r.abs()) }
    }

    /// theta / pi = 2w
    pub fn theta_over_pi(&self) -> Float {
        Float::with_val(self.value.prec(), &self.value * 2u32)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// c + sign * w as a float, rounded once from the exact value when available.
    fn arg(&self, c: &Rational, sign: i32, prec: u32) -> Float {
        match &self.exact {
            Some(w) => Float::with_val(prec, if sign > 0 { Rational::from(c + w) } else { Rational::from(c - w) }),
            None => {
                let cf = Float::with_val(prec, c);
                if sign > 0 {
                    cf + &self.value
                } else {
                    cf - &self.value
                }
            }
        }
    }

    /// Whether A_0 vanishes here (some c +- w is a nonpositive integer).
    pub fn is_zero_of_a0(&self) -> bool {
        let Some(w) = &self.exact else {
            return false;
        };
        g_shifts().iter().any(|c| {
            [Rational::from(c + w), Rational::from(c - w)].iter().any(|x| *x.denom() == 1 && *x <= 0)
        })
    }
}

/// ln of 2^(11/36) 3^(1/36) pi^(1/3) exp(-19 zeta'(-1) / 3) Gamma(1/6)^(-2/3).
pub(crate) fn ln_a0_prefactor(ctx: &PrecisionContext) -> Result<Float> {
    let prec = ctx.bits();
    let zp = constant(NamedConstant::ZetaPrimeMinus1, ctx)?;
    let lg = ln_gamma(&Float::with_val(prec, Rational::from((1, 6))), ctx)?;
    Ok(ln_const(LnConst::Two, prec) * Rational::from((11, 36)) + ln_const(LnConst::Three, prec) / 36u32
        + ln_const(LnConst::Pi, prec) / 3u32
        - zp * Rational::from((19, 3))
        - lg * Rational::from((2, 3)))
}

/// prod_c G(c + w) G(c - w), signed.
pub(crate) fn g_product(w: &SectorW, ctx: &PrecisionContext) -> Result<SignedLog> {
    let prec = ctx.bits();
    let mut acc = SignedLog::new(1, Float::with_val(prec, 0));
    for c in g_shifts() {
        for sign in [1, -1] {
            acc = acc.mul(&barnes_g(&w.arg(&c, sign, prec), ctx)?);
            if acc.is_zero() {
                return Ok(acc);
            }
        }
    }
    Ok(acc)
}

/// A_0 at sector angle w, signed.
pub fn a0_signed(w: &SectorW, ctx: &PrecisionContext) -> Result<SignedLog> {
    let w = w.abs();
    if w.is_zero_of_a0() {
        return Ok(SignedLog::zero(ctx.bits()));
    }
    let g = g_product(&w, ctx)?;
    if g.is_zero() {
        return Ok(g);
    }
    Ok(g.mul(&SignedLog::new(1, ln_a0_prefactor(ctx)?)))
}

/// The leading amplitude A_0(theta).
pub fn amplitude_a0(theta: &ThetaValue, ctx: &PrecisionContext) -> Result<Float> {
    Ok(a0_signed(&SectorW::from_theta(theta, ctx.bits()), ctx)?.to_float())
}

/// d^order/dtheta^order ln |A_0(theta)|.
pub fn log_a0_derivative(order: u32, theta: &ThetaValue, ctx: &PrecisionContext) -> Result<Float> {
    let prec = ctx.bits();
    let w = SectorW::from_theta(theta, prec);
    if w.is_zero_of_a0() {
        return Err(Error::ZeroOfAmplitude);
    }
    if order == 0 {
        let a = a0_signed(&w, ctx)?;
        return Ok(a.log_abs);
    }
    let mut acc = Float::with_val(prec, 0);
    for c in g_shifts() {
        acc += log_barnes_g_derivative(order, &w.arg(&c, 1, prec), ctx)?;
        let minus = log_barnes_g_derivative(order, &w.arg(&c, -1, prec), ctx)?;
        if order % 2 == 0 {
            acc += minus;
        } else {
            acc -= minus;
        }
    }
    let two_pi = Float::with_val(prec, rug::float::Constant::Pi) * 2u32;
    Ok(acc / two_pi.pow(order))
}

/// A_0^(order)(theta) / A_0(theta) for order 1 or 2.
pub fn log_deriv_a0(theta: &ThetaValue, order: u32, ctx: &PrecisionContext) -> Result<Float> {
    match order {
        1 => log_a0_derivative(1, theta, ctx),
        2 => {
            let d1 = log_a0_derivative(1, theta, ctx)?;
            let d2 = log_a0_derivative(2, theta, ctx)?;
            Ok(d2 + d1.square())
        }
        _ => Err(Error::InvalidParams(format!("log_deriv_a0 supports orders 1 and 2, got {order}"))),
    }
}

/// A_0(theta + 2 pi) / A_0(theta) at rational w = theta / 2 pi, exactly:
/// prod_c Gamma(c + w) / Gamma(c - w - 1), paired into rising factorials.
/// Returns `None` when the Gamma arguments do not pair up by integers.
pub fn sector_ratio_exact(w: &Rational) -> Option<Rational> {
    let nums: Vec<Rational> = g_shifts().iter().map(|c| Rational::from(c + w)).collect();
    let mut dens: Vec<Rational> = g_shifts().iter().map(|c| Rational::from(c - w) - 1u32).collect();
    if dens.iter().any(|d| *d.denom() == 1 && *d <= 0) {
        // A_0(theta + 2 pi) = 0
        return Some(Rational::new());
    }
    if nums.iter().any(|x| *x.denom() == 1 && *x <= 0) {
        return None;
    }
    let mut ratio = Rational::from(1);
    for x in nums {
        let pos = dens.iter().position(|d| Rational::from(&x - d).denom() == &1)?;
        let d = dens.swap_remove(pos);
        let k = Rational::from(&x - &d).numer().to_i64()?;
        // Gamma(d + k) / Gamma(d)
        if k >= 0 {
            for i in 0..k {
                ratio *= Rational::from(&d + i);
            }
        } else {
            for i in 0..-k {
                ratio /= Rational::from(&x + i);
            }
        }
    }
    Some(ratio)
}
