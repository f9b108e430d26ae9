use std::fmt;
use std::str::FromStr;

use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use super::amplitude::sector_ratio_exact;
use super::rpoly::{RPolynomialTable, MAX_K};
use super::Parity;
use crate::error::{Error, Result};
use crate::exact::ThetaValue;
use crate::mpnum::{bernoulli, constant, ln_const, ln_gamma, LnConst, NamedConstant, PrecisionContext};

/// Coefficients of L^(-j), j = 0..=order, in the large-L expansion of
/// ln G(sL + c) after removing the terms in L^2, L, ln L and the constant.
/// Entry 0 is always zero.
pub fn log_g_series(s: &Rational, c: &Rational, order: usize) -> Result<Vec<Rational>> {
    let d = Rational::from(c - 1u32);
    let ratio = Rational::from(&d / s);
    // ell_i: coefficient of t^i in ln(1 + ratio t)
    let mut ell = vec![Rational::new(); order + 3];
    let mut pow = Rational::from(1);
    for (i, e) in ell.iter_mut().enumerate().skip(1) {
        pow *= &ratio;
        let mut term = Rational::from(&pow / i as u64);
        if i % 2 == 0 {
            term = -term;
        }
        *e = term;
    }
    let s_sq = Rational::from(s * s);
    let two_sd = Rational::from(s * &d) * 2u32;
    let d_sq = Rational::from(&d * &d);
    let mut out = vec![Rational::new(); order + 1];
    for (j, o) in out.iter_mut().enumerate().skip(1) {
        let mut v = Rational::from(&s_sq * &ell[j + 2]) + Rational::from(&two_sd * &ell[j + 1]) + Rational::from(&d_sq * &ell[j]);
        v /= 2u32;
        v -= Rational::from(&ell[j] / 12u32);
        for k in 1..=j / 2 {
            let beta = bernoulli(2 * k + 2)? / (4 * k as u64 * (k as u64 + 1));
            let i = (j - 2 * k) as u32;
            let mut binom = Integer::from(Integer::binomial_u(2 * k as u32 + i - 1, i));
            if i % 2 == 1 {
                binom = -binom;
            }
            let s_pow = pow_rational(s, -(2 * k as i32));
            let r_pow = pow_rational(&ratio, i as i32);
            v += beta * s_pow * binom * r_pow;
        }
        *o = v;
    }
    Ok(out)
}

fn pow_rational(x: &Rational, n: i32) -> Rational {
    let mut acc = Rational::from(1);
    for _ in 0..n.unsigned_abs() {
        acc *= x;
    }
    if n < 0 {
        acc.recip()
    } else {
        acc
    }
}

/// Barnes G arguments L/2 + c and multiplicities whose product is A_HT(L)
/// up to elementary factors.
fn htsasm_g_terms(parity: Parity) -> Vec<(Rational, i64)> {
    let r = |n: i64, d: u64| Rational::from((n, d));
    match parity {
        Parity::Even => vec![
            (r(0, 1), 1),
            (r(1, 1), 1),
            (r(0, 1), 1),
            (r(1, 3), 1),
            (r(2, 3), 1),
            (r(1, 1), 1),
            (r(4, 3), 1),
            (r(5, 3), 1),
            (r(0, 1), -2),
            (r(1, 2), -2),
            (r(1, 1), -2),
            (r(3, 2), -2),
        ],
        Parity::Odd => vec![
            (r(3, 2), 2),
            (r(5, 6), 2),
            (r(7, 6), 2),
            (r(3, 2), 2),
            (r(1, 1), -4),
            (r(3, 2), -4),
        ],
    }
}

/// Coefficients a_j (j = 0..=order, a_0 = 0) in
/// A_HT(L)^2 ~ K (3 sqrt 3 / 4)^(L^2) L^(1/9) exp(sum_j a_j L^(-j)).
pub fn htsasm_sq_log_series(parity: Parity, order: usize) -> Result<Vec<Rational>> {
    let half = Rational::from((1, 2));
    let mut out = vec![Rational::new(); order + 1];
    for (c, mult) in htsasm_g_terms(parity) {
        let s = log_g_series(&half, &c, order)?;
        for (o, v) in out.iter_mut().zip(s) {
            *o += v * (2 * mult);
        }
    }
    Ok(out)
}

/// ln K for the A_HT^2 asymptotics:
/// K = (2/3)^(1/12) 2^(-11/36) 3^(-1/36) pi^(-1/3) exp(4 zeta'(-1)/3) Gamma(1/6)^(2/3),
/// divided by sqrt 3 for odd L.
pub(crate) fn ln_htsasm_constant(parity: Parity, ctx: &PrecisionContext) -> Result<Float> {
    let prec = ctx.bits();
    let ln2 = ln_const(LnConst::Two, prec);
    let ln3 = ln_const(LnConst::Three, prec);
    let zp = constant(NamedConstant::ZetaPrimeMinus1, ctx)?;
    let lg = ln_gamma(&Float::with_val(prec, Rational::from((1, 6))), ctx)?;
    let mut v = Float::with_val(prec, &ln2 - &ln3) / 12u32 - Float::with_val(prec, &ln2 * Rational::from((11, 36)))
        - Float::with_val(prec, &ln3 / 36u32)
        - ln_const(LnConst::Pi, prec) / 3u32
        + zp * Rational::from((4, 3))
        + lg * Rational::from((2, 3));
    if parity.is_odd() {
        v -= ln3 / 2u32;
    }
    Ok(v)
}

/// ln of the large-L expansion of A_HT(L)^2 truncated after L^(-order).
pub fn ln_htsasm_sq_asym(l: &Float, parity: Parity, order: usize, ctx: &PrecisionContext) -> Result<Float> {
    let prec = ctx.bits();
    let coeffs = htsasm_sq_log_series(parity, order)?;
    let ln_l = Float::with_val(prec, l.ln_ref());
    let inv = Float::with_val(prec, l.recip_ref());
    let mut tail = Float::with_val(prec, 0);
    for c in coeffs.iter().skip(1).rev() {
        tail += c;
        tail *= &inv;
    }
    let base = Float::with_val(prec, ln_const(LnConst::Three, prec) * 1.5f64) - ln_const(LnConst::Two, prec) * 2u32;
    let l_sq = Float::with_val(prec, l.square_ref());
    Ok(ln_htsasm_constant(parity, ctx)? + l_sq * base + ln_l / 9u32 + tail)
}

/// exp of a series sum_{k>=1} p_k u^k, truncated at u^order.
fn exp_series(p: &[Rational], order: usize) -> Vec<Rational> {
    let mut e = vec![Rational::new(); order + 1];
    e[0] = Rational::from(1);
    for n in 1..=order {
        let mut acc = Rational::new();
        for k in 1..=n.min(p.len() - 1) {
            acc += Rational::from(&p[k] * &e[n - k]) * k as u64;
        }
        e[n] = acc / n as u64;
    }
    e
}

/// The three angles with published even-L series for phi.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpecialPoint {
    Theta0,
    Theta2Pi3,
    ThetaPi,
}

impl SpecialPoint {
    pub const ALL: [SpecialPoint; 3] = [SpecialPoint::Theta0, SpecialPoint::Theta2Pi3, SpecialPoint::ThetaPi];

    pub fn name(self) -> &'static str {
        match self {
            SpecialPoint::Theta0 => "theta0",
            SpecialPoint::Theta2Pi3 => "theta2pi3",
            SpecialPoint::ThetaPi => "thetapi",
        }
    }

    /// theta / pi
    pub fn theta_over_pi(self) -> Rational {
        match self {
            SpecialPoint::Theta0 => Rational::new(),
            SpecialPoint::Theta2Pi3 => Rational::from((2, 3)),
            SpecialPoint::ThetaPi => Rational::from(1),
        }
    }

    pub fn theta(self) -> ThetaValue {
        let r = self.theta_over_pi();
        ThetaValue::pi_multiple(r.numer().to_i64().expect("small"), r.denom().to_u64().expect("small"))
            .expect("valid angle")
    }

    /// Power of L multiplying the series: 1/12 - 3 theta^2 / (4 pi^2).
    pub fn l_exponent(self) -> Rational {
        let x = self.theta_over_pi();
        Rational::from((1, 12)) - Rational::from(&x * &x) * Rational::from((3, 4))
    }
}

impl fmt::Display for SpecialPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SpecialPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SpecialPoint::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown special point {s:?} (theta0, theta2pi3, thetapi)")))
    }
}

const THETA0: [(&str, &str); 8] = [
    ("1", "1"),
    ("127", "5184"),
    ("-2041055", "53747712"),
    ("107538127903", "835884417024"),
    ("-13294838545991999", "17332899271409664"),
    ("645434518069131955571", "89853749822987698176"),
    ("-272944577297197688875376083", "2794811034494209364066304"),
    ("26385460676926169502575757887765", "14488300402817981343319719936"),
];

const THETA2PI3: [(&str, &str); 8] = [
    ("1", "1"),
    ("7", "576"),
    ("-23983", "663552"),
    ("16317695", "127401984"),
    ("-225307455655", "293534171136"),
    ("1215802858094435", "169075682574336"),
    ("-19038476800109154745", "194775186325635072"),
    ("204450994938396835527815", "112190507323565801472"),
];

const THETAPI: [(&str, &str); 8] = [
    ("1", "1"),
    ("-8", "81"),
    ("464", "6561"),
    ("-228352", "1594323"),
    ("77553152", "129140163"),
    ("-45379702784", "10460353203"),
    ("122234658136064", "2541865828329"),
    ("-156017791843041280", "205891132094649"),
];

/// Published coefficients of L^(-2j), j = 0..=7, of phi at `which`, relative
/// to the leading term.
pub fn special_series_coefficients(which: SpecialPoint) -> Vec<Rational> {
    let table = match which {
        SpecialPoint::Theta0 => &THETA0,
        SpecialPoint::Theta2Pi3 => &THETA2PI3,
        SpecialPoint::ThetaPi => &THETAPI,
    };
    table
        .iter()
        .map(|(n, d)| Rational::from((n.parse::<Integer>().expect("literal"), d.parse::<Integer>().expect("literal"))))
        .collect()
}

/// Leading constant of phi at `which`:
/// 3^(1/12) 2^(-5/36) e^(-zeta'(-1)), 2^(31/36) 3^(-5/12) pi Gamma(1/3)^(-2) e^(-zeta'(-1)),
/// 2^(8/3) pi^2 / (3 Gamma(1/3)^4).
pub fn special_leading_constant(which: SpecialPoint, ctx: &PrecisionContext) -> Result<Float> {
    let prec = ctx.bits();
    let ln2 = ln_const(LnConst::Two, prec);
    let ln3 = ln_const(LnConst::Three, prec);
    let ln_pi = ln_const(LnConst::Pi, prec);
    let zp = constant(NamedConstant::ZetaPrimeMinus1, ctx)?;
    let lg3 = ln_gamma(&Float::with_val(prec, Rational::from((1, 3))), ctx)?;
    let ln = match which {
        SpecialPoint::Theta0 => ln3 / 12u32 - ln2 * Rational::from((5, 36)) - zp,
        SpecialPoint::Theta2Pi3 => {
            ln2 * Rational::from((31, 36)) - ln3 * Rational::from((5, 12)) + ln_pi - lg3 * 2u32 - zp
        }
        SpecialPoint::ThetaPi => ln2 * Rational::from((8, 3)) - ln3 + ln_pi * 2u32 - lg3 * 4u32,
    };
    Ok(ln.exp())
}

/// The published series for phi(L, theta) at `which`, truncated after
/// L^(-2 order), including the leading constant and the power
/// L^(1/12 - 3 theta^2 / 4 pi^2).
pub fn special_series(which: SpecialPoint, l: &Float, order: usize, ctx: &PrecisionContext) -> Result<Float> {
    if order > MAX_K {
        return Err(Error::InvalidParams(format!("series order {order} exceeds {MAX_K}")));
    }
    if *l <= 0 {
        return Err(Error::Domain("L must be positive".into()));
    }
    let prec = ctx.bits();
    let coeffs = special_series_coefficients(which);
    let inv_sq = Float::with_val(prec, l.square_ref()).recip();
    let mut sum = Float::with_val(prec, 0);
    for c in coeffs[..=order].iter().rev() {
        sum *= &inv_sq;
        sum += c;
    }
    let power = Float::with_val(prec, l.ln_ref()) * which.l_exponent();
    Ok(special_leading_constant(which, ctx)? * power.exp() * sum)
}

/// Relative series of phi at `which` (coefficients of L^(-2j), j = 0..=order),
/// assembled exactly from the R_2k polynomials, the A_HT^2 expansion and,
/// at theta = pi, the sectors n = 1 and n = -2 (relative weight
/// A_0(3 pi) / A_0(pi) L^(-6)).
pub fn symbolic_phi_series(which: SpecialPoint, order: usize) -> Result<Vec<Rational>> {
    if order > MAX_K {
        return Err(Error::InvalidParams(format!("series order {order} exceeds {MAX_K}")));
    }
    let a = htsasm_sq_log_series(Parity::Even, 2 * order)?;
    let table = RPolynomialTable::get();
    let exponent_series = |x: &Rational| -> Vec<Rational> {
        let mut p = vec![Rational::new(); order + 1];
        for (k, pk) in p.iter_mut().enumerate().skip(1) {
            *pk = table.eval_exact(k, x) - &a[2 * k];
        }
        p
    };
    let x = which.theta_over_pi();
    let mut out = exp_series(&exponent_series(&x), order);
    if which == SpecialPoint::ThetaPi {
        let w = Rational::from(&x / 2u32);
        let r1 = sector_ratio_exact(&w).expect("integer-spaced Gamma arguments at theta = pi");
        let shifted = exp_series(&exponent_series(&Rational::from(&x + 2u32)), order);
        for j in 3..=order {
            out[j] += Rational::from(&r1 * &shifted[j - 3]);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpnum::agreeing_digits;
    use crate::special_products::htsasm_count;

    #[test]
    fn htsasm_series_second_coefficient() {
        let a = htsasm_sq_log_series(Parity::Even, 4).unwrap();
        assert_eq!(a[2], Rational::from((-19, 972)));
    }

    #[test]
    fn htsasm_series_has_no_odd_powers() {
        for parity in [Parity::Even, Parity::Odd] {
            let a = htsasm_sq_log_series(parity, 15).unwrap();
            for j in (1..=15).step_by(2) {
                assert_eq!(a[j], 0, "{parity} j={j}");
            }
        }
    }

    #[test]
    fn htsasm_asymptotics_match_exact_counts() {
        let c = PrecisionContext::new(40).unwrap();
        for l in [60usize, 61] {
            let exact = Float::with_val(c.bits(), htsasm_count(l).unwrap().square()).ln();
            let asym = ln_htsasm_sq_asym(&c.float(l as u32), Parity::of(l), 14, &c).unwrap();
            let diff = (exact - asym).abs();
            assert!(diff < 1e-22, "L={l}: {diff}");
        }
    }

    #[test]
    fn second_order_coefficients() {
        let expect = [(SpecialPoint::Theta0, (127, 5184)), (SpecialPoint::Theta2Pi3, (7, 576)), (SpecialPoint::ThetaPi, (-8, 81))];
        for (p, q) in expect {
            assert_eq!(symbolic_phi_series(p, 1).unwrap()[1], Rational::from(q), "{p}");
            assert_eq!(special_series_coefficients(p)[1], Rational::from(q));
        }
    }

    #[test]
    fn symbolic_series_reproduces_published_table() {
        for p in SpecialPoint::ALL {
            assert_eq!(symbolic_phi_series(p, MAX_K).unwrap(), special_series_coefficients(p), "{p}");
        }
    }

    #[test]
    fn leading_constants_are_amplitudes() {
        let c = PrecisionContext::new(40).unwrap();
        for p in SpecialPoint::ALL {
            let mut a0 = super::super::amplitude_a0(&p.theta(), &c).unwrap();
            if p == SpecialPoint::ThetaPi {
                a0 *= 2u32;
            }
            let k = special_leading_constant(p, &c).unwrap();
            assert!(agreeing_digits(&a0, &k, 60) >= 38, "{p}");
        }
    }

    #[test]
    fn names_round_trip() {
        for p in SpecialPoint::ALL {
            assert_eq!(p.name().parse::<SpecialPoint>().unwrap(), p);
        }
        assert!("theta1".parse::<SpecialPoint>().is_err());
    }
}
