use rug::{Float, Rational};

use super::amplitude::{g_product, SectorW};
use super::rpoly::RPolynomialTable;
use super::series::ln_htsasm_sq_asym;
use super::{AsymptoticParams, Parity};
use crate::error::{Error, Result};
use crate::exact::ThetaValue;
use crate::mpnum::{constant, ln_const, LnConst, NamedConstant, PrecisionContext, SignedLog};

/// One sector term f(L, theta) with its truncation diagnostic.
#[derive(Clone, Debug)]
pub struct FTerm {
    pub value: SignedLog,
    /// |R_2k(theta) / L^2k| for the last included k (zero when k_max = 0).
    pub last_correction: Float,
}

/// The winding sum and its diagnostics.
#[derive(Clone, Debug)]
pub struct DAsym {
    pub value: SignedLog,
    /// Largest magnitude in the outermost sector pair, relative to |D|
    /// (or to the largest term when the sum cancels exactly).
    pub last_pair: Float,
    /// Last R-correction of the n = 0 sector.
    pub last_correction: Float,
}

/// Extra digits so that an absolute log error of 10^-digits survives
/// magnitudes up to L^2.
fn working_ctx(l: &Float, ctx: &PrecisionContext) -> PrecisionContext {
    let size = l.to_f64().abs().max(2.0);
    ctx.widened((2.0 * size.log10()).ceil() as u32 + 2)
}

fn ln_f_prefactor(ctx: &PrecisionContext) -> Result<Float> {
    let prec = ctx.bits();
    let zp = constant(NamedConstant::ZetaPrimeMinus1, ctx)?;
    Ok(Float::with_val(prec, ln_const(LnConst::Two, prec) - ln_const(LnConst::Three, prec)) / 12u32 - zp * 5u32)
}

fn ln_base(prec: u32) -> Float {
    Float::with_val(prec, ln_const(LnConst::Three, prec) * 1.5f64) - ln_const(LnConst::Two, prec) * 2u32
}

fn r_value(table: &RPolynomialTable, k: usize, w: &SectorW, prec: u32) -> Float {
    match &w.exact {
        Some(r) => Float::with_val(prec, table.eval_exact(k, &Rational::from(r * 2u32))),
        None => table.eval(k, &w.theta_over_pi()),
    }
}

/// f at sector angle w (taken as |w|), in the given working context.
fn f_sector(l: &Float, w: &SectorW, params: &AsymptoticParams, ctx: &PrecisionContext) -> Result<FTerm> {
    let prec = ctx.bits();
    let w = w.abs();
    let zero = || FTerm { value: SignedLog::zero(prec), last_correction: Float::with_val(prec, 0) };
    if w.is_zero_of_a0() {
        return Ok(zero());
    }
    let g = g_product(&w, ctx)?;
    if g.is_zero() {
        return Ok(zero());
    }
    let ln_l = Float::with_val(prec, l.ln_ref());
    let l_sq = Float::with_val(prec, l.square_ref());
    let w_sq = Float::with_val(prec, w.value.square_ref());
    let power = Float::with_val(prec, Rational::from((7, 36))) - w_sq * 3u32;
    let mut log = ln_f_prefactor(ctx)? + Float::with_val(prec, &l_sq * ln_base(prec)) + power * &ln_l + &g.log_abs;

    let table = RPolynomialTable::get();
    let mut l_pow = Float::with_val(prec, 1);
    let mut last = Float::with_val(prec, 0);
    for k in 1..=params.k_max {
        l_pow *= &l_sq;
        last = r_value(table, k, &w, prec) / &l_pow;
        log += &last;
    }
    Ok(FTerm { value: SignedLog::new(g.sign, log), last_correction: last.abs() })
}

/// f(L, theta) including the corrections R_2k(theta) / L^2k for k <= k_max.
pub fn f_term(l: &Float, theta: &ThetaValue, params: &AsymptoticParams, ctx: &PrecisionContext) -> Result<FTerm> {
    if *l < 2 {
        return Err(Error::Domain(format!("f_term needs L >= 2, got {}", l.to_f64())));
    }
    let wctx = working_ctx(l, ctx);
    let w = SectorW::from_theta(theta, wctx.bits());
    f_sector(&Float::with_val(wctx.bits(), l), &w, params, &wctx)
}

fn check_theta(theta: &ThetaValue, prec: u32) -> Result<()> {
    let ok = match theta.as_pi_multiple() {
        Some(r) => r > -1 && r <= 1,
        None => {
            let x = theta.to_float(prec);
            let pi = Float::with_val(prec, rug::float::Constant::Pi);
            x > Float::with_val(prec, -&pi) && x <= pi
        }
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Domain(format!("theta = {theta} is outside (-pi, pi]")))
    }
}

/// sum_n (-1)^(n L) f(L, theta + 2 pi n) over |n| <= n_max (and n = -n_max-1
/// for theta != 0, so that sectors n and -1-n pair up). The parity fixes the
/// sign pattern; `l` may be any real >= 2.
pub fn winding_sum(
    l: &Float,
    parity: Parity,
    theta: &ThetaValue,
    params: &AsymptoticParams,
    ctx: &PrecisionContext,
) -> Result<DAsym> {
    if *l < 2 {
        return Err(Error::Domain(format!("winding sum needs L >= 2, got {}", l.to_f64())));
    }
    let wctx = working_ctx(l, ctx);
    let prec = wctx.bits();
    check_theta(theta, prec)?;
    let w0 = SectorW::from_theta(theta, prec).abs();
    if params.n_max == 0 && w0.value > 0.25 {
        return Err(Error::InvalidParams("n_max must be at least 1 when |theta| > pi/2".into()));
    }
    let l = Float::with_val(prec, l);
    let n_max = params.n_max as i64;
    let lo = if w0.is_zero() { -n_max } else { -n_max - 1 };

    let mut terms = Vec::new();
    let mut last_correction = Float::with_val(prec, 0);
    for n in lo..=n_max {
        let t = f_sector(&l, &w0.shifted(n), params, &wctx)?;
        if n == 0 {
            last_correction = t.last_correction.clone();
        }
        let v = if parity.is_odd() && n % 2 != 0 { t.value.neg() } else { t.value };
        terms.push(v);
    }
    let value = SignedLog::sum(&terms, prec);

    let outer = [terms.first().expect("nonempty"), terms.last().expect("nonempty")];
    let outer_max = outer.iter().filter(|t| !t.is_zero()).map(|t| t.log_abs.clone()).reduce(|a, b| a.max(&b));
    let reference = if value.is_zero() {
        terms.iter().filter(|t| !t.is_zero()).map(|t| t.log_abs.clone()).reduce(|a, b| a.max(&b))
    } else {
        Some(value.log_abs.clone())
    };
    let last_pair = match (outer_max, reference) {
        (Some(o), Some(r)) => (o - r).exp(),
        _ => Float::with_val(prec, 0),
    };
    Ok(DAsym { value, last_pair, last_correction })
}

/// Asymptotic D(L, theta) for integer L >= 2 and theta in (-pi, pi].
pub fn d_asym(l: usize, theta: &ThetaValue, params: &AsymptoticParams, ctx: &PrecisionContext) -> Result<DAsym> {
    if l < 2 {
        return Err(Error::InvalidSize(l));
    }
    winding_sum(&Float::with_val(64, l as u32), Parity::of(l), theta, params, ctx)
}

/// Asymptotic phi(L, theta): the winding sum divided by the A_HT^2
/// expansion (truncated at the same order), and by 2 cos(theta/2) for odd L.
pub fn phi_asym(
    l: &Float,
    theta: &ThetaValue,
    parity: Parity,
    params: &AsymptoticParams,
    ctx: &PrecisionContext,
) -> Result<Float> {
    if l.is_integer() {
        let is_odd = l.to_integer().expect("finite").is_odd();
        if is_odd != parity.is_odd() {
            return Err(Error::InvalidParams(format!("L = {} does not have {parity} parity", l.to_f64())));
        }
    }
    let wctx = working_ctx(l, ctx);
    let prec = wctx.bits();
    let half_cos = theta.cos_scaled(&Rational::from((1, 2)), 0, prec) * 2u32;
    if parity.is_odd() && half_cos.is_zero() {
        return Err(Error::OddPole);
    }
    let d = winding_sum(l, parity, theta, params, ctx)?;
    if d.value.is_zero() {
        return Ok(Float::with_val(ctx.bits(), 0));
    }
    let ln_norm = ln_htsasm_sq_asym(&Float::with_val(prec, l), parity, 2 * params.k_max, &wctx)?;
    let mut phi = SignedLog::new(d.value.sign, Float::with_val(prec, &d.value.log_abs - ln_norm)).to_float();
    if parity.is_odd() {
        phi /= half_cos;
    }
    Ok(Float::with_val(ctx.bits(), phi))
}

/// |asym / exact - 1| computed through the log ratio.
pub fn relative_error(asym: &SignedLog, exact: &Float) -> Float {
    let prec = asym.prec().max(exact.prec());
    let ex = SignedLog::from_float(exact);
    if asym.is_zero() || ex.is_zero() {
        return if asym.is_zero() && ex.is_zero() { Float::with_val(prec, 0) } else { Float::with_val(prec, 1) };
    }
    let ratio = Float::with_val(prec, &asym.log_abs - &ex.log_abs).exp_m1();
    if asym.sign == ex.sign {
        ratio.abs()
    } else {
        Float::with_val(prec, ratio + 2u32).abs()
    }
}
