use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::asymptotics::{phi_asym, AsymptoticParams, Parity};
use crate::error::{Error, Result};
use crate::exact::{CharPolyCache, CosineForm, ThetaValue};
use crate::mpnum::PrecisionContext;
use crate::special_products::htsasm_count;

/// Which quantity the derivative fit targets.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LhsMode {
    /// d^j/dtheta^j [phi(L, theta) L^(3 theta^2 / 4 pi^2 - 1/12)]
    #[default]
    DerivativeOfScaled,
    /// L^(3 theta^2 / 4 pi^2 - 1/12) d^j/dtheta^j phi(L, theta)
    ScaledDerivative,
}

/// Maximum theta-derivative order of the fit.
pub const MAX_FIT_DERIVATIVE: usize = 2;

/// phi and its first `order` theta-derivatives from exact coefficients.
fn phi_derivatives(form: &CosineForm, theta: &ThetaValue, order: usize, ctx: &PrecisionContext) -> Result<Vec<Float>> {
    let prec = ctx.bits();
    let d = form.derivatives(theta, order, ctx)?;
    let a_sq = Float::with_val(prec, htsasm_count(form.l())?.square());
    if !form.is_odd() {
        return Ok(d.into_iter().map(|v| v / &a_sq).collect());
    }
    // h = 1 / (2 cos(theta/2)) and its derivatives
    let c = theta.cos_scaled(&Rational::from((1, 2)), 0, prec);
    let s = theta.cos_scaled(&Rational::from((1, 2)), 3, prec);
    if c.is_zero() {
        return Err(Error::OddPole);
    }
    let c_sq = Float::with_val(prec, c.square_ref());
    let h0 = Float::with_val(prec, &c * 2u32).recip();
    let h1 = Float::with_val(prec, &s / &c_sq) / 4u32;
    let h2 = (Float::with_val(prec, &h0) + Float::with_val(prec, s.square_ref()) / (c_sq * &c)) / 4u32;
    let h = [h0, h1, h2];
    let binom = [[1u32, 0, 0], [1, 1, 0], [1, 2, 1]];
    let mut out = Vec::with_capacity(order + 1);
    for j in 0..=order {
        let mut acc = Float::with_val(prec, 0);
        for i in 0..=j {
            acc += Float::with_val(prec, &h[i] * &d[j - i]) * binom[j][i];
        }
        out.push(acc / &a_sq);
    }
    Ok(out)
}

/// Derivatives of L^(3 theta^2 / 4 pi^2 - 1/12) up to second order.
fn power_derivatives(l: usize, theta: &ThetaValue, order: usize, prec: u32) -> Vec<Float> {
    let pi = Float::with_val(prec, rug::float::Constant::Pi);
    let pi_sq = Float::with_val(prec, pi.square_ref());
    let th = theta.to_float(prec);
    let ln_l = Float::with_val(prec, l as u64).ln();
    let e = Float::with_val(prec, th.square_ref()) * 3u32 / Float::with_val(prec, &pi_sq * 4u32) - Rational::from((1, 12));
    let base = Float::with_val(prec, &e * &ln_l).exp();
    let e1 = Float::with_val(prec, &th * &ln_l) * 3u32 / Float::with_val(prec, &pi_sq * 2u32);
    let e2 = Float::with_val(prec, &ln_l * 3u32) / Float::with_val(prec, &pi_sq * 2u32);
    let mut out = vec![base.clone()];
    if order >= 1 {
        out.push(Float::with_val(prec, &base * &e1));
    }
    if order >= 2 {
        out.push(base * (e2 + Float::with_val(prec, e1.square_ref())));
    }
    out
}

fn combine(phi: &[Float], power: &[Float], order: usize, mode: LhsMode, prec: u32) -> Float {
    match mode {
        LhsMode::ScaledDerivative => Float::with_val(prec, &phi[order] * &power[0]),
        LhsMode::DerivativeOfScaled => {
            let binom = [[1u32, 0, 0], [1, 1, 0], [1, 2, 1]];
            let mut acc = Float::with_val(prec, 0);
            for i in 0..=order {
                acc += Float::with_val(prec, &phi[i] * &power[order - i]) * binom[order][i];
            }
            acc
        }
    }
}

/// The fit's left-hand side from exact data.
pub fn compute_lhs(
    form: &CosineForm,
    theta: &ThetaValue,
    order: usize,
    mode: LhsMode,
    ctx: &PrecisionContext,
) -> Result<Float> {
    if order > MAX_FIT_DERIVATIVE {
        return Err(Error::DerivativeCap(order));
    }
    let phi = phi_derivatives(form, theta, order, ctx)?;
    let power = power_derivatives(form.l(), theta, order, ctx.bits());
    Ok(combine(&phi, &power, order, mode, ctx.bits()))
}

/// Supplies left-hand-side values for the fit.
pub trait LhsSource {
    fn lhs(&self, l: usize, theta: &ThetaValue, order: usize, mode: LhsMode, ctx: &PrecisionContext) -> Result<Float>;
}

/// Exact data read from a coefficient cache (a missing entry is an error).
#[derive(Clone, Debug)]
pub struct CachedExactData {
    pub cache: CharPolyCache,
}

impl LhsSource for CachedExactData {
    fn lhs(&self, l: usize, theta: &ThetaValue, order: usize, mode: LhsMode, ctx: &PrecisionContext) -> Result<Float> {
        let form = CosineForm::new(&self.cache.load(l)?)?;
        compute_lhs(&form, theta, order, mode, ctx)
    }
}

/// Exact data from preloaded cosine forms.
#[derive(Clone, Debug, Default)]
pub struct ExactData {
    forms: Vec<CosineForm>,
}

impl ExactData {
    pub fn new(forms: Vec<CosineForm>) -> Self {
        Self { forms }
    }
}

impl LhsSource for ExactData {
    fn lhs(&self, l: usize, theta: &ThetaValue, order: usize, mode: LhsMode, ctx: &PrecisionContext) -> Result<Float> {
        let form = self.forms.iter().find(|f| f.l() == l).ok_or(Error::MissingEntry(l))?;
        compute_lhs(form, theta, order, mode, ctx)
    }
}

/// Synthetic data from the asymptotic expansion (order 0 only), with all
/// amplitudes known in closed form.
#[derive(Clone, Copy, Debug, Default)]
pub struct SyntheticData {
    pub params: AsymptoticParams,
}

impl LhsSource for SyntheticData {
    fn lhs(&self, l: usize, theta: &ThetaValue, order: usize, _mode: LhsMode, ctx: &PrecisionContext) -> Result<Float> {
        if order != 0 {
            return Err(Error::InvalidParams("synthetic data supports derivative order 0 only".into()));
        }
        let prec = ctx.bits();
        let phi = phi_asym(&Float::with_val(prec, l as u32), theta, Parity::of(l), &self.params, ctx)?;
        let power = power_derivatives(l, theta, 0, prec);
        Ok(phi * &power[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::char_poly;

    fn form(l: usize) -> CosineForm {
        CosineForm::new(&char_poly(l).unwrap()).unwrap()
    }

    #[test]
    fn two_at_pi_third() {
        let c = PrecisionContext::new(30).unwrap();
        let th = ThetaValue::pi_multiple(1, 3).unwrap();
        let v = compute_lhs(&form(2), &th, 0, LhsMode::default(), &c).unwrap();
        assert!((v - 1u32).abs() < 1e-28);
    }

    #[test]
    fn first_derivative_vanishes_at_zero() {
        let c = PrecisionContext::new(30).unwrap();
        for l in [4usize, 6, 7] {
            for mode in [LhsMode::DerivativeOfScaled, LhsMode::ScaledDerivative] {
                let v = compute_lhs(&form(l), &ThetaValue::zero(), 1, mode, &c).unwrap();
                assert!(v.abs() < 1e-28);
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let c = PrecisionContext::new(60).unwrap();
        let f = form(7);
        let at = |t: &Float, o: usize| compute_lhs(&f, &ThetaValue::radians(t.clone()), o, LhsMode::DerivativeOfScaled, &c).unwrap();
        let x = c.float(0.7);
        let h = c.float(1e-20);
        for o in 0..2 {
            let hi = at(&Float::with_val(c.bits(), &x + &h), o);
            let lo = at(&Float::with_val(c.bits(), &x - &h), o);
            let fd = (hi - lo) / Float::with_val(c.bits(), &h * 2u32);
            assert!((fd - at(&x, o + 1)).abs() < 1e-30);
        }
    }
}
