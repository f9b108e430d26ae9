//! Arbitrary-precision reals and the special functions the asymptotic
//! expansion needs.
//!
//! MPFR (through `rug`) supplies correctly rounded elementary operations.
//! Everything built on top of that (Bernoulli numbers, Euler's constant,
//! zeta values, Gamma, polygamma and the Barnes G-function) is evaluated
//! here with explicit truncation control.

mod barnes;
mod bernoulli;
mod constants;
mod gamma;
mod signed;

use std::cmp::Ordering;

use rug::ops::Pow;
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use barnes::{barnes_g, log_barnes_g, log_barnes_g_derivative};
pub use bernoulli::{bernoulli, BernoulliTable, DEFAULT_BERNOULLI_CAP};
pub use constants::{constant, constant_routes, NamedConstant};
pub use gamma::{gamma_fn, gamma_signed, hurwitz_zeta, ln_gamma, polygamma, polygamma_real};
pub use signed::SignedLog;

pub(crate) use constants::{ln_const, LnConst};

/// log2(10)
pub const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Upper bound on working digits accepted by [`PrecisionContext`].
pub const MAX_DIGITS: u32 = 200_000;

/// Working decimal precision plus guard digits.
///
/// All module outputs aim to be correct to `digits` decimal digits; the
/// `guard` digits absorb accumulated rounding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrecisionContext {
    digits: u32,
    guard: u32,
}

impl PrecisionContext {
    pub const DEFAULT_GUARD: u32 = 10;
    pub const MIN_DIGITS: u32 = 16;

    pub fn new(digits: u32) -> Result<Self> {
        Self::with_guard(digits, Self::DEFAULT_GUARD)
    }

    pub fn with_guard(digits: u32, guard: u32) -> Result<Self> {
        if digits < Self::MIN_DIGITS {
            return Err(Error::InvalidPrecision(format!(
                "digits = {digits} is below the minimum of {}",
                Self::MIN_DIGITS
            )));
        }
        if guard == 0 {
            return Err(Error::InvalidPrecision("guard must be positive".into()));
        }
        if digits.saturating_add(guard) > MAX_DIGITS {
            return Err(Error::PrecisionUnderflow(format!(
                "{} digits requested, at most {MAX_DIGITS} supported",
                digits + guard
            )));
        }
        Ok(Self { digits, guard })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn guard(&self) -> u32 {
        self.guard
    }

    /// Binary precision covering `digits + guard` decimal digits.
    pub fn bits(&self) -> u32 {
        digits_to_bits(self.digits + self.guard)
    }

    /// Same guard, `factor` times the digits.
    pub fn scaled(&self, factor: u32) -> Self {
        Self { digits: self.digits.saturating_mul(factor).min(MAX_DIGITS - self.guard), guard: self.guard }
    }

    /// Context with `extra` more working digits.
    pub fn widened(&self, extra: u32) -> Self {
        Self { digits: (self.digits + extra).min(MAX_DIGITS - self.guard), guard: self.guard }
    }

    pub fn float<T>(&self, value: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.bits(), value)
    }

    /// 10^(-(digits + guard)): the truncation target for internal series.
    pub fn eps(&self) -> Float {
        pow10(-((self.digits + self.guard) as i64), self.bits())
    }

    /// 10^(-digits + slack): the comparison tolerance used by tests and checks.
    pub fn tolerance(&self, slack: i64) -> Float {
        pow10(slack - self.digits as i64, self.bits())
    }
}

pub fn digits_to_bits(digits: u32) -> u32 {
    (digits as f64 * LOG2_10).ceil() as u32 + 4
}

/// 10^exp at the given binary precision.
pub fn pow10(exp: i64, prec: u32) -> Float {
    let ten = Float::with_val(prec, 10);
    ten.pow(exp as i32)
}

pub fn rational_to_float(q: &Rational, prec: u32) -> Float {
    Float::with_val(prec, q)
}

/// Number of leading decimal digits on which `a` and `b` agree, measured
/// relative to `max(|a|, |b|)`. Returns `cap` when they are identical.
pub fn agreeing_digits(a: &Float, b: &Float, cap: u32) -> u32 {
    let prec = a.prec().max(b.prec());
    let diff = Float::with_val(prec, a - b).abs();
    if diff.is_zero() {
        return cap;
    }
    let scale = match a.clone().abs().partial_cmp(&b.clone().abs()) {
        Some(Ordering::Less) => b.clone().abs(),
        _ => a.clone().abs(),
    };
    if scale.is_zero() {
        return 0;
    }
    let rel = Float::with_val(prec, &diff / &scale);
    let digits = -rel.log10().to_f64();
    if digits <= 0.0 {
        0
    } else {
        (digits.floor() as u32).min(cap)
    }
}

/// |a - b| <= tol * max(1, |a|)
pub fn close_rel(a: &Float, b: &Float, tol: &Float) -> bool {
    let prec = a.prec().max(b.prec());
    let diff = Float::with_val(prec, a - b).abs();
    let scale = a.clone().abs().max(&Float::with_val(prec, 1));
    diff <= Float::with_val(prec, tol * &scale)
}

/// Sums asymptotic-series terms `term(1), term(2), ...` until one drops
/// below `eps` in magnitude. Returns `None` when the terms stop decreasing
/// first (the optimal truncation point is too coarse) or when `term`
/// declines to produce a value; callers respond by shifting the argument.
pub(crate) fn optimal_truncation<F>(prec: u32, eps: &Float, mut term: F) -> Option<Float>
where
    F: FnMut(usize) -> Option<Float>,
{
    let mut sum = Float::with_val(prec, 0);
    let mut prev: Option<Float> = None;
    for k in 1.. {
        let t = term(k)?;
        let mag = t.clone().abs();
        if let Some(p) = &prev {
            if mag > *p {
                return None;
            }
        }
        sum += &t;
        if mag < *eps {
            return Some(sum);
        }
        prev = Some(mag);
    }
    unreachable!()
}

/// Initial shift threshold for asymptotic expansions: max(30, digits/2).
pub(crate) fn shift_threshold(ctx: &PrecisionContext) -> u32 {
    30.max((ctx.digits() + ctx.guard()) / 2)
}

/// Number of shifts tried before giving up on an asymptotic expansion.
pub(crate) const MAX_SHIFT_ATTEMPTS: u32 = 12;
/// Next shift threshold after an expansion failed to converge.
pub(crate) fn next_threshold(current: u32) -> u32 {
    current + current / 2 + 16
}
