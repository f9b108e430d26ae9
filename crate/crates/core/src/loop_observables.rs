//! Loop-model and percolation observables on the cylinder: the number N of
//! loops surrounding a point (mean and variance) and the probability that
//! no loop surrounds it, phi(L, pi/2), which is the wrapping (even L) or
//! spanning (odd L) probability of the critical percolation cluster.

use rug::{Float, Rational};
use serde::Serialize;

use crate::asymptotics::Parity;
use crate::error::{Error, Result};
use crate::exact::{char_poly, CosineForm, ThetaValue};
use crate::mpnum::{constant, ln_const, ln_gamma, polygamma, LnConst, NamedConstant, PrecisionContext};
use crate::special_products::{htsasm_count, loop_probabilities_from_form, phi_from_form};

/// Mean and variance of N for one L, plus the no-loop probability.
#[derive(Clone, Debug, Serialize)]
pub struct LoopStats {
    pub l: usize,
    pub parity: Parity,
    #[serde(serialize_with = "float_string")]
    pub mean_n: Float,
    #[serde(serialize_with = "float_string")]
    pub var_n: Float,
    #[serde(serialize_with = "float_string")]
    pub wrap_prob: Float,
}

fn float_string<S: serde::Serializer>(v: &Float, s: S) -> std::result::Result<S::Ok, S::Error> {
    let digits = ((v.prec() as f64) / std::f64::consts::LOG2_10).floor() as usize;
    s.serialize_str(&v.to_string_radix(10, Some(digits.max(1))))
}

/// Exact mean and variance of N from the factorial moments of P(L, m):
/// E[N] = phi_u(1), E[N(N-1)] = phi_uu(1) with phi = sum_m P(L, m) u^m.
pub fn loop_moments_exact(form: &CosineForm) -> Result<(Rational, Rational)> {
    let p = loop_probabilities_from_form(form)?;
    let mut mean = Rational::new();
    let mut second = Rational::new();
    for (m, q) in p.probs.iter().enumerate() {
        let m = m as u64;
        mean += Rational::from(q * m);
        if m >= 2 {
            second += Rational::from(q * (m * (m - 1)));
        }
    }
    let var = second + &mean - Rational::from(mean.square_ref());
    Ok((mean, var))
}

/// The same moments from theta-derivatives of D at pi/3. With u = 2 cos theta,
/// phi_theta = -sqrt 3 phi_u and phi_thetatheta = 3 phi_uu - phi_u there; odd
/// L carries the extra factor h = 1 / (2 cos(theta/2)).
pub fn loop_moments_via_theta(form: &CosineForm, ctx: &PrecisionContext) -> Result<(Float, Float)> {
    let wctx = ctx.widened(10);
    let prec = wctx.bits();
    let theta = ThetaValue::pi_multiple(1, 3)?;
    let d = form.derivatives(&theta, 2, &wctx)?;
    let a_sq = Float::with_val(prec, htsasm_count(form.l())?.square());
    let (phi1, phi2) = if form.is_odd() {
        // h = 1/(2c), h' = s/(4c^2), h'' = (1/(2c) + s^2/c^3)/4 at c = cos(pi/6), s = sin(pi/6)
        let c = Float::with_val(prec, 3).sqrt() / 2u32;
        let s = Float::with_val(prec, 0.5);
        let h = Float::with_val(prec, c.clone() * 2u32).recip();
        let h1 = Float::with_val(prec, &s / Float::with_val(prec, c.square_ref())) / 4u32;
        let c3 = Float::with_val(prec, c.square_ref()) * &c;
        let h2 = (Float::with_val(prec, &h) + Float::with_val(prec, s.square_ref()) / c3) / 4u32;
        let p1 = Float::with_val(prec, &h1 * &d[0]) + Float::with_val(prec, &h * &d[1]);
        let p2 = Float::with_val(prec, &h2 * &d[0]) + Float::with_val(prec, &h1 * &d[1]) * 2u32
            + Float::with_val(prec, &h * &d[2]);
        (p1, p2)
    } else {
        (d[1].clone(), d[2].clone())
    };
    let phi1 = phi1 / &a_sq;
    let phi2 = phi2 / &a_sq;
    let sqrt3 = Float::with_val(prec, 3).sqrt();
    let phi_u = -Float::with_val(prec, &phi1 / &sqrt3);
    let phi_uu = (phi2 + &phi_u) / 3u32;
    let var = Float::with_val(prec, &phi_uu + &phi_u) - Float::with_val(prec, phi_u.square_ref());
    Ok((Float::with_val(ctx.bits(), phi_u), Float::with_val(ctx.bits(), var)))
}

/// Exact E[N] for L, as a float.
pub fn mean_loops_exact(l: usize, ctx: &PrecisionContext) -> Result<Float> {
    let (mean, _) = loop_moments_exact(&CosineForm::new(&char_poly(l)?)?)?;
    Ok(Float::with_val(ctx.bits(), mean))
}

/// Exact Var N for L, as a float.
pub fn var_loops_exact(l: usize, ctx: &PrecisionContext) -> Result<Float> {
    let (_, var) = loop_moments_exact(&CosineForm::new(&char_poly(l)?)?)?;
    Ok(Float::with_val(ctx.bits(), var))
}

fn check_size(l: usize) -> Result<()> {
    if l < 2 {
        return Err(Error::InvalidSize(l));
    }
    Ok(())
}

/// gamma + ln(4L)
fn log_scale(l: usize, ctx: &PrecisionContext) -> Result<Float> {
    let prec = ctx.bits();
    let g = constant(NamedConstant::EulerGamma, ctx)?;
    Ok(g + Float::with_val(prec, 4 * l as u64).ln())
}

/// E[N] ~ (gamma + ln 4L) / (2 sqrt 3 pi), minus 1/6 for odd L.
pub fn mean_loops_asym(l: usize, parity: Parity, ctx: &PrecisionContext) -> Result<Float> {
    check_size(l)?;
    let prec = ctx.bits();
    let pi = constant(NamedConstant::Pi, ctx)?;
    let denom = Float::with_val(prec, 3).sqrt() * pi * 2u32;
    let mut v = log_scale(l, ctx)? / denom;
    if parity.is_odd() {
        v -= Rational::from((1, 6));
    }
    Ok(v)
}

/// Var N ~ c_p - (1 + ln 3)/(2 pi^2) + psi_1(1/6)/(18 pi^2)
///   + (2/(3 sqrt 3 pi) - 1/(2 pi^2)) (gamma + ln 4L),
/// with c_p = -1/9 (even) or -2/9 (odd).
pub fn var_loops_asym(l: usize, parity: Parity, ctx: &PrecisionContext) -> Result<Float> {
    check_size(l)?;
    let prec = ctx.bits();
    let pi = constant(NamedConstant::Pi, ctx)?;
    let pi_sq = Float::with_val(prec, pi.square_ref());
    let sqrt3 = Float::with_val(prec, 3).sqrt();
    let psi = polygamma(1, &Float::with_val(prec, Rational::from((1, 6))), ctx)?;
    let base = if parity.is_odd() { Rational::from((-2, 9)) } else { Rational::from((-1, 9)) };
    let one_plus_ln3 = ln_const(LnConst::Three, prec) + 1u32;
    let slope = Float::with_val(prec, 2u32) / Float::with_val(prec, &sqrt3 * &pi) / 3u32
        - Float::with_val(prec, pi_sq.clone() * 2u32).recip();
    Ok(Float::with_val(prec, base) - one_plus_ln3 / Float::with_val(prec, &pi_sq * 2u32)
        + psi / Float::with_val(prec, &pi_sq * 18u32)
        + slope * log_scale(l, ctx)?)
}

/// Amplitude of the no-loop probability:
/// 2^(23/72) 3^(-5/48) pi^(1/4) exp(-zeta'(-1)/4) Gamma(1/4)^(-1/2), times sqrt(3/2) for odd L.
pub fn wrap_prefactor(parity: Parity, ctx: &PrecisionContext) -> Result<Float> {
    let prec = ctx.bits();
    let zp = constant(NamedConstant::ZetaPrimeMinus1, ctx)?;
    let lg = ln_gamma(&Float::with_val(prec, Rational::from((1, 4))), ctx)?;
    let mut ln = ln_const(LnConst::Two, prec) * Rational::from((23, 72)) - ln_const(LnConst::Three, prec) * Rational::from((5, 48))
        + ln_const(LnConst::Pi, prec) / 4u32
        - zp / 4u32
        - lg / 2u32;
    if parity.is_odd() {
        ln += Float::with_val(prec, ln_const(LnConst::Three, prec) - ln_const(LnConst::Two, prec)) / 2u32;
    }
    Ok(ln.exp())
}

/// Leading asymptotics of phi(L, pi/2): prefactor times L^(-5/48).
pub fn wrap_probability_asym(l: usize, parity: Parity, ctx: &PrecisionContext) -> Result<Float> {
    check_size(l)?;
    let prec = ctx.bits();
    let power = Float::with_val(prec, l as u64).ln() * Rational::from((-5, 48));
    Ok(wrap_prefactor(parity, ctx)? * power.exp())
}

/// phi(L, pi/2) from exact data.
pub fn wrap_probability_exact(form: &CosineForm, ctx: &PrecisionContext) -> Result<Float> {
    phi_from_form(form, &ThetaValue::pi_multiple(1, 2)?, ctx)
}

/// All three observables from exact data.
pub fn loop_stats_exact(form: &CosineForm, ctx: &PrecisionContext) -> Result<LoopStats> {
    let (mean, var) = loop_moments_exact(form)?;
    Ok(LoopStats {
        l: form.l(),
        parity: Parity::of(form.l()),
        mean_n: Float::with_val(ctx.bits(), mean),
        var_n: Float::with_val(ctx.bits(), var),
        wrap_prob: wrap_probability_exact(form, ctx)?,
    })
}

/// All three observables from the asymptotic formulas.
pub fn loop_stats_asym(l: usize, ctx: &PrecisionContext) -> Result<LoopStats> {
    let parity = Parity::of(l);
    Ok(LoopStats {
        l,
        parity,
        mean_n: mean_loops_asym(l, parity, ctx)?,
        var_n: var_loops_asym(l, parity, ctx)?,
        wrap_prob: wrap_probability_asym(l, parity, ctx)?,
    })
}
