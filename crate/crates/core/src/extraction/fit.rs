use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Float, Rational};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::data::{LhsMode, LhsSource, MAX_FIT_DERIVATIVE};
use crate::asymptotics::Parity;
use crate::error::{Error, Result};
use crate::exact::ThetaValue;
use crate::intrel::{find_relation, NamedValue, RelationOutcome};
use crate::mpnum::PrecisionContext;

/// Estimates need this many stable digits before relation search.
pub const MIN_RECOGNITION_DIGITS: u32 = 6;

/// Sectors {0, -1, 1}, plus the next sector on the side theta leans toward
/// once |theta| > 2 pi / 3.
pub fn default_sectors(theta: &ThetaValue) -> Vec<i64> {
    let t = theta.to_float(64).to_f64() / std::f64::consts::PI;
    let beyond = match theta.as_pi_multiple() {
        Some(r) => Rational::from(r.abs_ref()) > Rational::from((2, 3)),
        None => t.abs() > 2.0 / 3.0,
    };
    match (beyond, t < 0.0) {
        (false, _) => vec![0, -1, 1],
        (true, false) => vec![0, -1, 1, -2],
        (true, true) => vec![0, 1, -1, 2],
    }
}

/// Structure of the fit ansatz.
#[derive(Clone, Debug, PartialEq)]
pub struct FitModel {
    pub theta: ThetaValue,
    pub derivative_order: usize,
    pub mode: LhsMode,
    pub sectors: Vec<i64>,
    /// Correction orders per sector.
    pub k_terms: usize,
    /// Highest power of ln L per exponent.
    pub log_powers: usize,
    /// Restrict k to even values.
    pub even_only: bool,
    /// Merge terms with identical exponents instead of rejecting the model.
    pub merge_collisions: bool,
    pub parity: Parity,
}

impl FitModel {
    pub fn new(theta: ThetaValue, derivative_order: usize) -> Self {
        Self {
            sectors: default_sectors(&theta),
            theta,
            derivative_order,
            mode: LhsMode::default(),
            k_terms: 8,
            log_powers: derivative_order,
            even_only: true,
            merge_collisions: true,
            parity: Parity::Even,
        }
    }

    fn exponent(&self, n: i64, k: usize, prec: u32) -> (Float, Option<Rational>) {
        let shift = Rational::from(3 * n * n) + Rational::from(k as u64);
        match self.theta.as_pi_multiple() {
            Some(r) => {
                let e = shift + r * Rational::from(3 * n);
                (Float::with_val(prec, &e), Some(e))
            }
            None => {
                let pi = Float::with_val(prec, rug::float::Constant::Pi);
                let t = Float::with_val(prec, self.theta.to_float(prec) / pi) * (3 * n);
                (t + shift, None)
            }
        }
    }

    /// The distinct basis terms in sector-major order.
    pub fn terms(&self, prec: u32) -> Result<Vec<FitTerm>> {
        if self.derivative_order > MAX_FIT_DERIVATIVE {
            return Err(Error::DerivativeCap(self.derivative_order));
        }
        if self.sectors.is_empty() || self.k_terms == 0 {
            return Err(Error::InvalidParams("fit model has no terms".into()));
        }
        let mut seen = self.sectors.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != self.sectors.len() {
            return Err(Error::InvalidParams("repeated sector in fit model".into()));
        }
        let step = if self.even_only { 2 } else { 1 };
        let tol = Float::with_val(prec, Float::i_exp(1, -(prec as i32) / 2));
        let mut terms: Vec<FitTerm> = Vec::new();
        let mut collisions = Vec::new();
        for &n in &self.sectors {
            for k in (0..self.k_terms).map(|i| i * step) {
                let (value, exact) = self.exponent(n, k, prec);
                for log in 0..=self.log_powers {
                    let hit = terms.iter_mut().find(|t| {
                        t.log == log
                            && match (&t.exact, &exact) {
                                (Some(a), Some(b)) => a == b,
                                _ => Float::with_val(prec, &t.exponent - &value).abs() < tol,
                            }
                    });
                    match hit {
                        Some(t) if self.merge_collisions => t.merged.push(FitTerm::label(n, k, log)),
                        Some(t) => collisions.push((t.key(), FitTerm::label(n, k, log))),
                        None => terms.push(FitTerm { n, k, log, exponent: value.clone(), exact: exact.clone(), merged: vec![] }),
                    }
                }
            }
        }
        if !collisions.is_empty() {
            return Err(Error::DegenerateModel { pairs: collisions });
        }
        Ok(terms)
    }
}

/// One basis function L^(-exponent) (ln L)^log.
#[derive(Clone, Debug, PartialEq)]
pub struct FitTerm {
    pub n: i64,
    pub k: usize,
    pub log: usize,
    pub exponent: Float,
    pub exact: Option<Rational>,
    /// Labels of other (n, k) terms sharing this basis function.
    pub merged: Vec<String>,
}

impl FitTerm {
    fn label(n: i64, k: usize, log: usize) -> String {
        format!("n={n},k={k},log={log}")
    }

    pub fn key(&self) -> String {
        Self::label(self.n, self.k, self.log)
    }

    fn eval(&self, l: usize, prec: u32) -> Float {
        let ln_l = Float::with_val(prec, l as u64).ln();
        let pow = (Float::with_val(prec, &self.exponent * &ln_l) * -1i32).exp();
        pow * ln_l.pow(self.log as u32)
    }
}

/// A fitted coefficient and its window-to-window agreement.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Estimate {
    #[serde(skip)]
    pub n: i64,
    #[serde(skip)]
    pub k: usize,
    #[serde(skip)]
    pub log: usize,
    #[serde(serialize_with = "float_string")]
    pub value: Float,
    pub stable_digits: u32,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub merged: Vec<String>,
}

impl Estimate {
    pub fn key(&self) -> String {
        FitTerm::label(self.n, self.k, self.log)
    }
}

fn float_string<S: Serializer>(v: &Float, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string_radix(10, Some(30)))
}

fn estimate_map<S: Serializer>(v: &[Estimate], s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut m = s.serialize_map(Some(v.len()))?;
    for e in v {
        m.serialize_entry(&e.key(), e)?;
    }
    m.end()
}

/// Outcome of a fit.
///
/// `residual` is the misfit of the primary solve at the largest L left out
/// of both windows, relative to max(1, |data|). `stability` is the number
/// of digits on which the two windows agree for the leading coefficient
/// (n=0, k=0, log=0), measured against max(1, |value|).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitResult {
    pub window: Vec<usize>,
    #[serde(serialize_with = "estimate_map")]
    pub estimates: Vec<Estimate>,
    #[serde(serialize_with = "float_string")]
    pub residual: Float,
    pub stability: u32,
}

impl FitResult {
    /// Estimate for (n, k, log), also found through merged labels.
    pub fn get(&self, n: i64, k: usize, log: usize) -> Option<&Estimate> {
        let label = FitTerm::label(n, k, log);
        self.estimates.iter().find(|e| e.key() == label || e.merged.contains(&label))
    }

    pub fn leading(&self) -> &Estimate {
        &self.estimates[0]
    }
}

fn stable_digits(a: &Float, b: &Float, cap: u32) -> u32 {
    let prec = a.prec();
    let diff = Float::with_val(prec, a - b).abs();
    if diff.is_zero() {
        return cap;
    }
    let scale = Float::with_val(prec, a.abs_ref()).max(&Float::with_val(prec, b.abs_ref())).max(&Float::with_val(prec, 1));
    let d = -(diff / scale).log10().to_f64();
    if d <= 0.0 {
        0
    } else {
        (d.floor() as u32).min(cap)
    }
}

/// Gaussian elimination with column equilibration and partial pivoting.
fn solve(mut a: Vec<Vec<Float>>, mut b: Vec<Float>, prec: u32) -> Result<Vec<Float>> {
    let n = b.len();
    let scales: Vec<Float> = (0..n)
        .map(|j| a.iter().map(|r| Float::with_val(prec, r[j].abs_ref())).fold(Float::with_val(prec, 0), |m, x| m.max(&x)))
        .collect();
    if scales.iter().any(Float::is_zero) {
        return Err(Error::SingularSystem);
    }
    for row in a.iter_mut() {
        for (x, s) in row.iter_mut().zip(&scales) {
            *x /= s;
        }
    }
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].clone().abs().partial_cmp(&a[j][col].clone().abs()).expect("finite"))
            .expect("nonempty");
        if a[piv][col].is_zero() {
            return Err(Error::SingularSystem);
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = Float::with_val(prec, &a[r][col] / &a[col][col]);
            if f.is_zero() {
                continue;
            }
            for c in col..n {
                let t = Float::with_val(prec, &f * &a[col][c]);
                a[r][c] -= t;
            }
            let t = Float::with_val(prec, &f * &b[col]);
            b[r] -= t;
        }
    }
    let mut x = vec![Float::with_val(prec, 0); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            acc -= Float::with_val(prec, &a[r][c] * &x[c]);
        }
        x[r] = acc / &a[r][r];
    }
    Ok(x.into_iter().zip(&scales).map(|(v, s)| v / s).collect())
}

/// Fits the model on the largest available L.
///
/// With U basis terms, the first solve uses the U largest L and the second
/// the U values below the largest; the residual is taken at the next L.
pub fn fit_amplitudes<S: LhsSource + Sync>(
    l_values: &[usize],
    model: &FitModel,
    source: &S,
    ctx: &PrecisionContext,
) -> Result<FitResult> {
    let wctx = ctx.scaled(2);
    let prec = wctx.bits();
    let terms = model.terms(prec)?;
    let u = terms.len();
    let mut ls: Vec<usize> = l_values.to_vec();
    ls.sort_unstable_by(|a, b| b.cmp(a));
    ls.dedup();
    if ls.len() < u + 2 {
        return Err(Error::InsufficientData { needed: u + 2, got: ls.len() });
    }
    if let Some(&bad) = ls.iter().find(|&&l| Parity::of(l) != model.parity || l < 2) {
        return Err(Error::InvalidParams(format!("L = {bad} does not match the {} fit model", model.parity)));
    }
    let used = &ls[..u + 2];
    let data: Vec<Float> = used
        .par_iter()
        .map(|&l| source.lhs(l, &model.theta, model.derivative_order, model.mode, &wctx))
        .collect::<Result<_>>()?;
    let rows: Vec<Vec<Float>> = used.par_iter().map(|&l| terms.iter().map(|t| t.eval(l, prec)).collect()).collect();

    let primary = solve(rows[..u].to_vec(), data[..u].to_vec(), prec)?;
    let shifted = solve(rows[1..=u].to_vec(), data[1..=u].to_vec(), prec)?;

    let probe = u + 1;
    let model_value = rows[probe].iter().zip(&primary).fold(Float::with_val(prec, 0), |acc, (x, c)| acc + Float::with_val(prec, x * c));
    let scale = Float::with_val(prec, data[probe].abs_ref()).max(&Float::with_val(prec, 1));
    let residual = Float::with_val(ctx.bits(), (model_value - &data[probe]).abs() / scale);

    let cap = ctx.digits();
    let estimates: Vec<Estimate> = terms
        .iter()
        .zip(primary.iter().zip(&shifted))
        .map(|(t, (a, b))| Estimate {
            n: t.n,
            k: t.k,
            log: t.log,
            value: Float::with_val(ctx.bits(), a),
            stable_digits: stable_digits(a, b, cap),
            merged: t.merged.clone(),
        })
        .collect();
    let stability = estimates[0].stable_digits;
    Ok(FitResult { window: ls[..=u].to_vec(), estimates, residual, stability })
}

/// Integer-relation search on a fitted coefficient.
///
/// The estimate must be stable to at least [`MIN_RECOGNITION_DIGITS`]; the
/// relation search works at the stable digit count, and basis values
/// should be supplied at higher precision than that.
pub fn recognize(estimate: &Estimate, basis: &[NamedValue]) -> Result<RelationOutcome> {
    if estimate.stable_digits < MIN_RECOGNITION_DIGITS {
        return Err(Error::InsufficientStability { needed: MIN_RECOGNITION_DIGITS, got: estimate.stable_digits });
    }
    find_relation(&estimate.value, basis, estimate.stable_digits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::{amplitude_a0, log_a0_derivative, AsymptoticParams};
    use crate::exact::{char_poly, CosineForm};
    use crate::extraction::{ExactData, SyntheticData};

    fn exact_data(ls: impl Iterator<Item = usize>) -> ExactData {
        let forms = ls.collect::<Vec<_>>().par_iter().map(|&l| CosineForm::new(&char_poly(l).unwrap()).unwrap()).collect();
        ExactData::new(forms)
    }

    #[test]
    fn collisions_merge_or_reject() {
        let mut m = FitModel::new(ThetaValue::zero(), 0);
        let terms = m.terms(128).unwrap();
        // sectors +1 and -1 share every exponent at theta = 0
        assert_eq!(terms.len(), 2 * 8);
        assert_eq!(terms[8].merged, vec!["n=1,k=0,log=0".to_string()]);
        m.merge_collisions = false;
        assert!(matches!(m.terms(128), Err(Error::DegenerateModel { .. })));
    }

    #[test]
    fn default_sectors_grow_past_two_thirds() {
        assert_eq!(default_sectors(&ThetaValue::pi_multiple(2, 3).unwrap()), vec![0, -1, 1]);
        assert_eq!(default_sectors(&ThetaValue::pi_multiple(3, 4).unwrap()), vec![0, -1, 1, -2]);
        assert_eq!(default_sectors(&ThetaValue::pi_multiple(-3, 4).unwrap()), vec![0, 1, -1, 2]);
    }

    #[test]
    fn too_few_points() {
        let m = FitModel::new(ThetaValue::pi_multiple(1, 3).unwrap(), 0);
        let ctx = PrecisionContext::new(20).unwrap();
        let err = fit_amplitudes(&[10, 12], &m, &SyntheticData::default(), &ctx).unwrap_err();
        assert!(matches!(err, Error::InsufficientData { got: 2, .. }));
    }

    #[test]
    fn synthetic_closed_loop() {
        let ctx = PrecisionContext::new(40).unwrap();
        let theta = ThetaValue::pi_multiple(1, 4).unwrap();
        let mut m = FitModel::new(theta.clone(), 0);
        m.k_terms = 6;
        let ls: Vec<usize> = (40..=160).step_by(4).collect();
        let fit = fit_amplitudes(&ls, &m, &SyntheticData { params: AsymptoticParams::default() }, &ctx).unwrap();
        let a0 = amplitude_a0(&theta, &ctx).unwrap();
        assert!(Float::with_val(ctx.bits(), &fit.leading().value - &a0).abs() < 1e-10, "{}", fit.leading().value);
        assert!(fit.stability >= 10);
    }

    #[test]
    fn exact_fit_at_pi_third() {
        let ctx = PrecisionContext::new(40).unwrap();
        let theta = ThetaValue::pi_multiple(1, 3).unwrap();
        let src = exact_data((20..=64).step_by(2));
        let ls: Vec<usize> = (20..=64).step_by(2).collect();
        let m = FitModel::new(theta.clone(), 0);
        let fit = fit_amplitudes(&ls, &m, &src, &ctx).unwrap();
        assert!(Float::with_val(ctx.bits(), &fit.leading().value - 1u32).abs() < 1e-8);

        let d = fit_amplitudes(&ls, &FitModel::new(theta.clone(), 1), &src, &ctx).unwrap();
        let want = log_a0_derivative(1, &theta, &ctx).unwrap();
        assert!(Float::with_val(ctx.bits(), &d.leading().value - &want).abs() < 1e-5, "{}", d.leading().value);
        // the derivative of the scaled ratio has no ln L term in sector 0
        assert!(d.get(0, 0, 1).unwrap().value.clone().abs() < 1e-4);
    }
}
