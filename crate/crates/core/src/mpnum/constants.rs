use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rug::{Float, Integer};
use serde::{Deserialize, Serialize};

use super::bernoulli::default_table;
use super::gamma::hurwitz_zeta;
use super::{agreeing_digits, optimal_truncation, rational_to_float, PrecisionContext, MAX_SHIFT_ATTEMPTS, next_threshold};
use crate::error::{Error, Result};

/// Constants that appear in the recognized amplitudes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedConstant {
    Pi,
    EulerGamma,
    Zeta3,
    ZetaPrimeMinus1,
}

impl NamedConstant {
    pub const ALL: [NamedConstant; 4] =
        [NamedConstant::Pi, NamedConstant::EulerGamma, NamedConstant::Zeta3, NamedConstant::ZetaPrimeMinus1];

    pub fn name(&self) -> &'static str {
        match self {
            NamedConstant::Pi => "pi",
            NamedConstant::EulerGamma => "euler_gamma",
            NamedConstant::Zeta3 => "zeta3",
            NamedConstant::ZetaPrimeMinus1 => "zeta_prime_minus1",
        }
    }
}

impl std::str::FromStr for NamedConstant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NamedConstant::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown constant {s:?}")))
    }
}

type CacheKey = (NamedConstant, u32, u32);

fn cache() -> &'static Mutex<HashMap<CacheKey, Float>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Float>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The constant to `ctx.digits()` digits. Each value is computed by two
/// independent routes; disagreement is reported as an error.
pub fn constant(name: NamedConstant, ctx: &PrecisionContext) -> Result<Float> {
    let key = (name, ctx.digits(), ctx.guard());
    if let Some(v) = cache().lock().expect("constant cache poisoned").get(&key) {
        return Ok(v.clone());
    }
    let (a, b) = constant_routes(name, ctx)?;
    let agreed = agreeing_digits(&a, &b, ctx.digits() + ctx.guard());
    if agreed < ctx.digits() {
        return Err(Error::ConstantMismatch { name: name.name(), agreed, digits: ctx.digits() });
    }
    cache().lock().expect("constant cache poisoned").entry(key).or_insert_with(|| a.clone());
    Ok(a)
}

/// Both routes for a constant, uncached.
pub fn constant_routes(name: NamedConstant, ctx: &PrecisionContext) -> Result<(Float, Float)> {
    Ok(match name {
        NamedConstant::Pi => (Float::with_val(ctx.bits(), rug::float::Constant::Pi), pi_machin(ctx)),
        NamedConstant::EulerGamma => (euler_brent_mcmillan(ctx), euler_maclaurin_harmonic(ctx)?),
        NamedConstant::Zeta3 => (zeta3_central_binomial(ctx), hurwitz_zeta(3, &ctx.float(1), ctx)?),
        NamedConstant::ZetaPrimeMinus1 => (zeta_prime_minus1_glaisher(ctx)?, zeta_prime_minus1_functional(ctx)?),
    })
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum LnConst {
    Two,
    Three,
    Pi,
    TwoPi,
}

/// Logarithms of small constants (MPFR logarithm).
pub(crate) fn ln_const(which: LnConst, prec: u32) -> Float {
    let pi = || Float::with_val(prec, rug::float::Constant::Pi);
    match which {
        LnConst::Two => Float::with_val(prec, rug::float::Constant::Log2),
        LnConst::Three => Float::with_val(prec, 3).ln(),
        LnConst::Pi => pi().ln(),
        LnConst::TwoPi => (pi() * 2u32).ln(),
    }
}

/// arctan(1/m) by its Taylor series.
fn arctan_inverse(m: u32, prec: u32) -> Float {
    let eps = Float::with_val(prec, Float::i_exp(1, -(prec as i32)));
    let x = Float::with_val(prec, m).recip();
    let x_sq = Float::with_val(prec, &x * &x);
    let mut power = x.clone();
    let mut sum = Float::with_val(prec, 0);
    for k in 0u32.. {
        let term = Float::with_val(prec, &power / (2 * k + 1));
        if k % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        if term < eps {
            break;
        }
        power *= &x_sq;
    }
    sum
}

/// pi = 16 arctan(1/5) - 4 arctan(1/239)
fn pi_machin(ctx: &PrecisionContext) -> Float {
    let prec = ctx.bits() + 16;
    let pi = arctan_inverse(5, prec) * 16u32 - arctan_inverse(239, prec) * 4u32;
    Float::with_val(ctx.bits(), pi)
}

/// Brent-McMillan: gamma = U/V - with U, V the Bessel-type sums below,
/// error about pi * exp(-4n).
fn euler_brent_mcmillan(ctx: &PrecisionContext) -> Float {
    let digits = (ctx.digits() + ctx.guard()) as f64;
    let n = (digits * std::f64::consts::LN_10 / 4.0).ceil() as u32 + 2;
    // Terms reach about exp(2n) before decaying.
    let prec = ctx.bits() + (3.0 * n as f64).ceil() as u32 + 32;
    let kmax = (3.6 * n as f64).ceil() as u32 + 4;
    let n_sq = Float::with_val(prec, n) * n;
    let mut a = -Float::with_val(prec, n).ln();
    let mut b = Float::with_val(prec, 1);
    let mut u = a.clone();
    let mut v = b.clone();
    for k in 1..=kmax {
        b = b * &n_sq / (k * k);
        a = (a * &n_sq / k + &b) / k;
        u += &a;
        v += &b;
    }
    Float::with_val(ctx.bits(), u / v)
}

/// gamma = H_{N-1} - ln N + 1/(2N) + sum_k B_2k / (2k N^2k)
fn euler_maclaurin_harmonic(ctx: &PrecisionContext) -> Result<Float> {
    let prec = ctx.bits();
    let table = default_table();
    let mut n = (0.4 * (ctx.digits() + ctx.guard()) as f64).ceil() as u32 + 10;
    for _ in 0..MAX_SHIFT_ATTEMPTS {
        let nf = Float::with_val(prec, n);
        let n_sq = Float::with_val(prec, &nf * &nf);
        let mut n_pow = n_sq.clone();
        let tail = optimal_truncation(prec, &ctx.eps(), |k| {
            let b = table.get(2 * k).ok()?;
            let t = rational_to_float(b, prec) / &n_pow / (2 * k as u32);
            n_pow *= &n_sq;
            Some(t)
        });
        if let Some(tail) = tail {
            let mut harmonic = Float::with_val(prec, 0);
            for j in 1..n {
                harmonic += Float::with_val(prec, j).recip();
            }
            let half_inv = Float::with_val(prec, nf.clone().recip() / 2u32);
            return Ok(harmonic - nf.ln() + half_inv + tail);
        }
        n = next_threshold(n);
    }
    Err(Error::PrecisionUnderflow("harmonic Euler-Maclaurin did not converge".into()))
}

/// zeta(3) = 5/2 sum_{n>=1} (-1)^(n+1) / (n^3 C(2n, n))
fn zeta3_central_binomial(ctx: &PrecisionContext) -> Float {
    let prec = ctx.bits() + 16;
    let eps = Float::with_val(prec, Float::i_exp(1, -(prec as i32)));
    let mut central = Integer::from(1);
    let mut sum = Float::with_val(prec, 0);
    for n in 1u32.. {
        // C(2n, n) = C(2n-2, n-1) * (2n)(2n-1) / n^2
        central *= 2 * (2 * n - 1);
        central /= n;
        let denom = Float::with_val(prec, &central) * Float::with_val(prec, n).square().mul_add(&Float::with_val(prec, n), &Float::with_val(prec, 0));
        let term = denom.recip();
        if n % 2 == 1 {
            sum += &term;
        } else {
            sum -= &term;
        }
        if term < eps {
            break;
        }
    }
    Float::with_val(ctx.bits(), sum * 5u32 / 2u32)
}

/// ln A (Glaisher) from the hyperfactorial expansion
/// sum_{k<=N} k ln k = (N^2/2 + N/2 + 1/12) ln N - N^2/4 + ln A
///                     - sum_k B_{2k+2} / (2k (2k+1) (2k+2) N^2k)
/// and zeta'(-1) = 1/12 - ln A.
fn zeta_prime_minus1_glaisher(ctx: &PrecisionContext) -> Result<Float> {
    let prec = ctx.bits();
    let table = default_table();
    let mut n = (0.4 * (ctx.digits() + ctx.guard()) as f64).ceil() as u32 + 10;
    for _ in 0..MAX_SHIFT_ATTEMPTS {
        let nf = Float::with_val(prec, n);
        let n_sq = Float::with_val(prec, &nf * &nf);
        let mut n_pow = n_sq.clone();
        let tail = optimal_truncation(prec, &ctx.eps(), |k| {
            let b = table.get(2 * k + 2).ok()?;
            let kk = 2 * k as u64;
            let t = rational_to_float(b, prec) / &n_pow / (kk * (kk + 1) * (kk + 2));
            n_pow *= &n_sq;
            Some(t)
        });
        if let Some(tail) = tail {
            let mut hyper = Float::with_val(prec, 0);
            for k in 2..=n {
                hyper += Float::with_val(prec, k).ln() * k;
            }
            let poly = Float::with_val(prec, &n_sq / 2u32) + Float::with_val(prec, &nf / 2u32) + Float::with_val(prec, 12).recip();
            let ln_a = hyper - poly * nf.ln() + Float::with_val(prec, &n_sq / 4u32) + tail;
            return Ok(Float::with_val(prec, 12).recip() - ln_a);
        }
        n = next_threshold(n);
    }
    Err(Error::PrecisionUnderflow("hyperfactorial expansion did not converge".into()))
}

/// zeta'(-1) = (1 - gamma - ln 2pi)/12 + zeta'(2) / (2 pi^2), with
/// zeta'(2) = -sum ln n / n^2 by Euler-Maclaurin.
fn zeta_prime_minus1_functional(ctx: &PrecisionContext) -> Result<Float> {
    let prec = ctx.bits();
    let table = default_table();
    let euler = constant(NamedConstant::EulerGamma, ctx)?;
    let pi = constant(NamedConstant::Pi, ctx)?;
    let mut n = (0.4 * (ctx.digits() + ctx.guard()) as f64).ceil() as u32 + 10;
    for _ in 0..MAX_SHIFT_ATTEMPTS {
        let nf = Float::with_val(prec, n);
        let ln_n = nf.clone().ln();
        let n_sq = Float::with_val(prec, &nf * &nf);
        let mut n_pow = Float::with_val(prec, &n_sq * &nf);
        let mut harmonic = Float::with_val(prec, 0);
        // tail_k = B_2k N^(-2k-1) (ln N - H_2k + 1)
        let tail = optimal_truncation(prec, &ctx.eps(), |k| {
            let b = table.get(2 * k).ok()?;
            let kk = 2 * k as u32;
            harmonic += Float::with_val(prec, kk - 1).recip() + Float::with_val(prec, kk).recip();
            let bracket = Float::with_val(prec, &ln_n - &harmonic) + 1u32;
            let t = rational_to_float(b, prec) * bracket / &n_pow;
            n_pow *= &n_sq;
            Some(t)
        });
        if let Some(tail) = tail {
            let mut direct = Float::with_val(prec, 0);
            for j in 2..n {
                let jf = Float::with_val(prec, j);
                direct += jf.clone().ln() / jf.square();
            }
            let integral = Float::with_val(prec, &ln_n + 1u32) / &nf;
            let half = Float::with_val(prec, &ln_n / &n_sq) / 2u32;
            let zeta_prime_2 = -(direct + integral + half + tail);
            let ln_2pi = ln_const(LnConst::TwoPi, prec);
            let head = (Float::with_val(prec, 1) - &euler - ln_2pi) / 12u32;
            let pi_sq = Float::with_val(prec, &pi * &pi);
            return Ok(head + zeta_prime_2 / (pi_sq * 2u32));
        }
        n = next_threshold(n);
    }
    Err(Error::PrecisionUnderflow("zeta'(2) expansion did not converge".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str, prec: u32) -> Float {
        Float::with_val(prec, Float::parse(s).unwrap())
    }

    #[test]
    fn euler_gamma_30_digits() {
        let c = PrecisionContext::new(30).unwrap();
        let g = constant(NamedConstant::EulerGamma, &c).unwrap();
        let expect = parse("0.577215664901532860606512090082", c.bits());
        assert!(agreeing_digits(&g, &expect, 60) >= 30);
    }

    #[test]
    fn zeta_prime_minus1_20_digits() {
        let c = PrecisionContext::new(20).unwrap();
        let v = constant(NamedConstant::ZetaPrimeMinus1, &c).unwrap();
        let expect = parse("-0.16542114370045092921", c.bits());
        assert!(agreeing_digits(&v, &expect, 60) >= 19);
    }

    #[test]
    fn routes_agree_and_match_mpfr() {
        for digits in [30, 60, 100] {
            let c = PrecisionContext::new(digits).unwrap();
            for name in NamedConstant::ALL {
                let (a, b) = constant_routes(name, &c).unwrap();
                assert!(agreeing_digits(&a, &b, 1000) >= digits, "{} at {digits}", name.name());
            }
            let euler = Float::with_val(c.bits(), rug::float::Constant::Euler);
            assert!(agreeing_digits(&constant(NamedConstant::EulerGamma, &c).unwrap(), &euler, 1000) >= digits);
            let z3 = Float::with_val(c.bits(), 3).zeta();
            assert!(agreeing_digits(&constant(NamedConstant::Zeta3, &c).unwrap(), &z3, 1000) >= digits);
        }
    }

    #[test]
    fn constant_names_round_trip() {
        for name in NamedConstant::ALL {
            assert_eq!(name.name().parse::<NamedConstant>().unwrap(), name);
        }
    }
}
