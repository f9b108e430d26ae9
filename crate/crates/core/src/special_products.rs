//! Product formulas for alternating sign matrix counts, the exact values of
//! D at multiples of pi/3, the generating function phi and the loop-number
//! distribution P(L, m).

use std::sync::{OnceLock, RwLock};

use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{char_poly, CosineForm, QuadraticValue, ThetaValue};
use crate::mpnum::PrecisionContext;

fn factorial_table() -> &'static RwLock<Vec<Integer>> {
    static TABLE: OnceLock<RwLock<Vec<Integer>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![Integer::from(1)]))
}

/// n!, memoized.
pub fn factorial(n: usize) -> Integer {
    if let Some(v) = factorial_table().read().expect("factorial table poisoned").get(n) {
        return v.clone();
    }
    let mut table = factorial_table().write().expect("factorial table poisoned");
    while table.len() <= n {
        let next = Integer::from(table.last().expect("table starts non-empty") * table.len() as u64);
        table.push(next);
    }
    table[n].clone()
}

fn integral(q: Rational, what: impl FnOnce() -> String) -> Result<Integer> {
    if *q.denom() == 1 {
        Ok(q.into_numer_denom().0)
    } else {
        Err(Error::NonIntegral(what()))
    }
}

/// A(n) = prod_{k<n} (3k+1)! / (k+n)!, the number of n x n alternating sign matrices.
pub fn asm_count(n: usize) -> Result<Integer> {
    if n == 0 {
        return Err(Error::InvalidSize(0));
    }
    let mut q = Rational::from(1);
    for k in 0..n {
        q *= Rational::from((factorial(3 * k + 1), factorial(k + n)));
    }
    integral(q, || format!("A({n})"))
}

/// A_HT(L), the number of L x L half-turn symmetric alternating sign matrices.
pub fn htsasm_count(l: usize) -> Result<Integer> {
    if l == 0 {
        return Err(Error::InvalidSize(0));
    }
    let mut q = Rational::from(1);
    if l % 2 == 0 {
        q *= 2u32;
        for k in 1..l / 2 {
            let num = Integer::from(3) * factorial(k - 1) * factorial(k) * factorial(3 * k - 1) * factorial(3 * k + 2);
            let den = Integer::from(4) * factorial(2 * k - 1).square() * factorial(2 * k + 1).square();
            q *= Rational::from((num, den));
        }
    } else {
        for j in 1..=(l - 1) / 2 {
            let num = Integer::from(4) * factorial(j).square() * factorial(3 * j).square();
            let den = Integer::from(3) * Integer::from(factorial(2 * j).square()).square();
            q *= Rational::from((num, den));
        }
    }
    integral(q, || format!("A_HT({l})"))
}

/// Closed form of D(L, p pi/3) for p in 0..=3.
pub fn exact_special_value(l: usize, p: i64) -> Result<QuadraticValue> {
    if l == 0 {
        return Err(Error::InvalidSize(0));
    }
    let even = l % 2 == 0;
    Ok(match p {
        0 => QuadraticValue::rational(Rational::from((htsasm_count(2 * l)?, asm_count(l)?))),
        1 => {
            let sq = htsasm_count(l)?.square();
            if even {
                QuadraticValue::rational(sq)
            } else {
                QuadraticValue::times_sqrt3(sq)
            }
        }
        2 => QuadraticValue::rational(asm_count(l)?),
        3 if even => QuadraticValue::rational(Integer::from(asm_count(l / 2)?.square()).square()),
        3 => QuadraticValue::rational(0),
        _ => return Err(Error::InvalidSpecialIndex(p)),
    })
}

/// True when theta is an odd multiple of pi (the odd-L pole of phi).
fn at_odd_pi(theta: &ThetaValue, prec: u32) -> bool {
    match theta.as_pi_multiple() {
        Some(r) => r.denom() == &1 && r.numer().is_odd(),
        None => theta.cos_scaled(&Rational::from((1, 2)), 0, prec).is_zero(),
    }
}

/// phi(L, theta) from a precomputed cosine form.
pub fn phi_from_form(form: &CosineForm, theta: &ThetaValue, ctx: &PrecisionContext) -> Result<Float> {
    let l = form.l();
    let prec = ctx.bits();
    if form.is_odd() && at_odd_pi(theta, prec) {
        return Err(Error::OddPole);
    }
    let a_sq = Float::with_val(prec, htsasm_count(l)?.square());
    let d = form.eval(theta, ctx);
    if form.is_odd() {
        let half_cos = theta.cos_scaled(&Rational::from((1, 2)), 0, prec) * 2u32;
        Ok(d / half_cos / a_sq)
    } else {
        Ok(d / a_sq)
    }
}

/// phi(L, theta) = D / A_HT^2 (even L) or D / (2 cos(theta/2) A_HT^2) (odd L).
pub fn phi_exact(l: usize, theta: &ThetaValue, ctx: &PrecisionContext) -> Result<Float> {
    phi_from_form(&CosineForm::new(&char_poly(l)?)?, theta, ctx)
}

/// Exact loop-number distribution P(L, 0..=floor(L/2)).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LoopProbabilityVector {
    pub l: usize,
    #[serde(serialize_with = "rational_strings")]
    pub probs: Vec<Rational>,
}

impl LoopProbabilityVector {
    /// Indices m with P(L, m) < 0.
    pub fn negative_entries(&self) -> Vec<usize> {
        self.probs.iter().enumerate().filter(|(_, p)| **p < 0).map(|(m, _)| m).collect()
    }
}

fn rational_strings<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|q| format!("{}/{}", q.numer(), q.denom())))
}

/// P(L, m) = a_m / A_HT(L)^2 with a_m the coefficients of D in powers of
/// u = 2 cos(theta) (after removing 2 cos(theta/2) for odd L).
pub fn loop_probabilities_from_form(form: &CosineForm) -> Result<LoopProbabilityVector> {
    let a_sq = htsasm_count(form.l())?.square();
    let probs: Vec<Rational> = form.u_poly().iter().map(|a| Rational::from((a.clone(), a_sq.clone()))).collect();
    let total: Rational = probs.iter().fold(Rational::new(), |acc, p| acc + p);
    if total != 1 {
        return Err(Error::InvariantViolation(format!("P(L={}, m) sum to {total}", form.l())));
    }
    Ok(LoopProbabilityVector { l: form.l(), probs })
}

pub fn loop_probabilities(l: usize) -> Result<LoopProbabilityVector> {
    loop_probabilities_from_form(&CosineForm::new(&char_poly(l)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let a: Vec<_> = (1..=6).map(|n| asm_count(n).unwrap()).collect();
        assert_eq!(a, [1, 2, 7, 42, 429, 7436]);
        let h: Vec<_> = (1..=6).map(|l| htsasm_count(l).unwrap()).collect();
        assert_eq!(h, [1, 2, 3, 10, 25, 140]);
    }

    #[test]
    fn table_entries() {
        assert_eq!(exact_special_value(4, 3).unwrap(), QuadraticValue::rational(16));
        assert_eq!(exact_special_value(3, 3).unwrap(), QuadraticValue::rational(0));
        assert_eq!(exact_special_value(2, 1).unwrap(), QuadraticValue::rational(4));
        assert_eq!(exact_special_value(3, 1).unwrap(), QuadraticValue::times_sqrt3(9));
        assert!(matches!(exact_special_value(2, 4), Err(Error::InvalidSpecialIndex(4))));
    }

    #[test]
    fn phi_small() {
        let c = PrecisionContext::new(30).unwrap();
        assert_eq!(phi_exact(2, &ThetaValue::pi_multiple(1, 3).unwrap(), &c).unwrap(), 1);
        assert_eq!(phi_exact(1, &ThetaValue::zero(), &c).unwrap(), 1);
        assert_eq!(phi_exact(2, &ThetaValue::pi_multiple(1, 2).unwrap(), &c).unwrap(), 0.75);
        assert!(matches!(phi_exact(3, &ThetaValue::pi_multiple(1, 1).unwrap(), &c), Err(Error::OddPole)));
        assert!(matches!(phi_exact(3, &ThetaValue::pi_multiple(-3, 1).unwrap(), &c), Err(Error::OddPole)));
    }

    #[test]
    fn probabilities_small() {
        let p2 = loop_probabilities(2).unwrap();
        assert_eq!(p2.probs, [Rational::from((3, 4)), Rational::from((1, 4))]);
        assert_eq!(loop_probabilities(1).unwrap().probs, [Rational::from(1)]);
        let json = serde_json::to_string(&p2).unwrap();
        assert_eq!(json, r#"{"l":2,"probs":["3/4","1/4"]}"#);
    }
}
