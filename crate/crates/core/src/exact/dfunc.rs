use std::fmt;

use rug::{Float, Integer, Rational};

use super::charpoly::CharPolyRecord;
use super::theta::ThetaValue;
use crate::error::{Error, Result};
use crate::mpnum::PrecisionContext;

/// Largest derivative order accepted by [`CosineForm::derivatives`].
pub const MAX_DERIVATIVE_ORDER: usize = 8;

/// Exact number of the form `rational` or `rational * sqrt(3)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticValue {
    pub rational: Rational,
    pub sqrt3: bool,
}

impl QuadraticValue {
    pub fn rational(q: impl Into<Rational>) -> Self {
        Self { rational: q.into(), sqrt3: false }
    }

    pub fn times_sqrt3(q: impl Into<Rational>) -> Self {
        Self { rational: q.into(), sqrt3: true }
    }

    pub fn is_zero(&self) -> bool {
        self.rational == 0
    }

    pub fn to_float(&self, prec: u32) -> Float {
        let v = Float::with_val(prec, &self.rational);
        if self.sqrt3 {
            v * Float::with_val(prec, 3).sqrt()
        } else {
            v
        }
    }
}

impl fmt::Display for QuadraticValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sqrt3 && self.rational != 0 {
            write!(f, "{}*sqrt(3)", self.rational)
        } else {
            write!(f, "{}", self.rational)
        }
    }
}

/// D(L, theta) = exp(-i theta L/2) det(B + exp(i theta) I), held as the
/// palindromic coefficients c'_k of det(B + z I) and as a polynomial in
/// u = 2 cos(theta).
///
/// Even L: D = c'_{L/2} + sum_{j>=1} c'_{L/2+j} V_j(u), V_j(2 cos t) = 2 cos(j t).
/// Odd L:  D = 2 cos(theta/2) sum_{m>=0} c'_{(L+1)/2+m} W_m(u),
///         W_m(2 cos t) = cos((m + 1/2) t) / cos(t/2).
#[derive(Clone, Debug)]
pub struct CosineForm {
    l: usize,
    plus: Vec<Integer>,
    u_poly: Vec<Integer>,
}

impl CosineForm {
    pub fn new(record: &CharPolyRecord) -> Result<Self> {
        record.validate()?;
        let plus = record.plus_coeffs();
        let l = record.l;
        let u_poly = if l % 2 == 0 {
            let half = l / 2;
            let basis = chebyshev_basis(half, &[Integer::from(2)], &[Integer::new(), Integer::from(1)]);
            let mut acc = vec![Integer::new(); half + 1];
            acc[0] += &plus[half];
            for (j, v) in basis.iter().enumerate().skip(1) {
                add_scaled(&mut acc, v, &plus[half + j]);
            }
            acc
        } else {
            let top = (l - 1) / 2;
            let start = (l + 1) / 2;
            let basis = chebyshev_basis(top, &[Integer::from(1)], &[Integer::from(-1), Integer::from(1)]);
            let mut acc = vec![Integer::new(); top + 1];
            for (m, w) in basis.iter().enumerate() {
                add_scaled(&mut acc, w, &plus[start + m]);
            }
            acc
        };
        Ok(Self { l, plus, u_poly })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn is_odd(&self) -> bool {
        self.l % 2 == 1
    }

    /// c'_0 .. c'_L
    pub fn plus_coeffs(&self) -> &[Integer] {
        &self.plus
    }

    /// Monomial coefficients a_m of the u-polynomial: D = sum a_m u^m for even
    /// L, D = 2 cos(theta/2) sum a_m u^m for odd L.
    pub fn u_poly(&self) -> &[Integer] {
        &self.u_poly
    }

    fn working_bits(&self, ctx: &PrecisionContext) -> u32 {
        ctx.bits() + 32 + 2 * (usize::BITS - self.l.leading_zeros())
    }

    /// D(L, theta).
    pub fn eval(&self, theta: &ThetaValue, ctx: &PrecisionContext) -> Float {
        let prec = self.working_bits(ctx);
        let one = Rational::from(1);
        let u = theta.cos_scaled(&one, 0, prec) * 2u32;
        let value = if self.is_odd() {
            let start = (self.l + 1) / 2;
            let sum = recurrence_sum(&self.plus[start..], &u, Float::with_val(prec, 1), Float::with_val(prec, &u - 1u32));
            let half_cos = theta.cos_scaled(&Rational::from((1, 2)), 0, prec) * 2u32;
            sum * half_cos
        } else {
            let half = self.l / 2;
            let v2 = Float::with_val(prec, &u * &u) - 2u32;
            let sum = recurrence_sum(&self.plus[half + 1..], &u, u.clone(), v2);
            Float::with_val(prec, &self.plus[half]) + sum
        };
        Float::with_val(ctx.bits(), value)
    }

    /// D, D', ..., D^(max_order) by analytic differentiation of
    /// sum_k c'_k cos((k - L/2) theta).
    pub fn derivatives(&self, theta: &ThetaValue, max_order: usize, ctx: &PrecisionContext) -> Result<Vec<Float>> {
        if max_order > MAX_DERIVATIVE_ORDER {
            return Err(Error::DerivativeCap(max_order));
        }
        let prec = self.working_bits(ctx);
        let mut out = vec![Float::with_val(prec, 0); max_order + 1];
        let half = Rational::from((self.l as i64, 2u64));
        for (k, c) in self.plus.iter().enumerate() {
            let omega = Rational::from(k as i64) - &half;
            if omega < 0 {
                // paired with the mirrored positive frequency below
                continue;
            }
            let weight = if omega == 0 { Integer::from(c) } else { Integer::from(c * 2u32) };
            let omega_f = Float::with_val(prec, &omega);
            let mut power = Float::with_val(prec, 1);
            for (n, slot) in out.iter_mut().enumerate() {
                let term = theta.cos_scaled(&omega, n as u32, prec) * &power;
                *slot += term * &weight;
                power *= &omega_f;
            }
        }
        Ok(out.into_iter().map(|v| Float::with_val(ctx.bits(), v)).collect())
    }

    /// (Re, Im) of sum_k c'_k exp(i (k - L/2) theta) summed term by term
    /// without using the coefficient symmetry.
    pub fn eval_complex(&self, theta: &ThetaValue, ctx: &PrecisionContext) -> (Float, Float) {
        let prec = self.working_bits(ctx);
        let half = Rational::from((self.l as i64, 2u64));
        let mut re = Float::with_val(prec, 0);
        let mut im = Float::with_val(prec, 0);
        for (k, c) in self.plus.iter().enumerate() {
            let omega = Rational::from(k as i64) - &half;
            re += theta.cos_scaled(&omega, 0, prec) * c;
            im += theta.cos_scaled(&omega, 3, prec) * c;
        }
        (Float::with_val(ctx.bits(), re), Float::with_val(ctx.bits(), im))
    }

    /// D(L, p pi / 3) exactly: u = 2 cos(p pi/3) is an integer and the odd-L
    /// prefactor 2 cos(p pi/6) is in {0, +-1, +-2, +-sqrt 3}.
    pub fn exact_at_pi_third(&self, p: i64) -> QuadraticValue {
        let r = p.rem_euclid(6);
        let u = Integer::from([2, 1, -1, -2, -1, 1][r as usize]);
        let poly_value = horner(&self.u_poly, &u);
        if !self.is_odd() {
            return QuadraticValue::rational(poly_value);
        }
        // 2 cos(p pi / 6) for p mod 12
        let (factor, sqrt3) = match p.rem_euclid(12) {
            0 => (2, false),
            1 => (1, true),
            2 => (1, false),
            3 | 9 => (0, false),
            4 => (-1, false),
            5 => (-1, true),
            6 => (-2, false),
            7 => (-1, true),
            8 => (-1, false),
            10 => (1, false),
            11 => (1, true),
            _ => unreachable!(),
        };
        QuadraticValue { rational: Rational::from(poly_value * factor), sqrt3: sqrt3 && factor != 0 }
    }
}

fn horner(poly: &[Integer], x: &Integer) -> Integer {
    let mut acc = Integer::new();
    for c in poly.iter().rev() {
        acc *= x;
        acc += c;
    }
    acc
}

fn add_scaled(acc: &mut [Integer], poly: &[Integer], scale: &Integer) {
    for (a, p) in acc.iter_mut().zip(poly) {
        *a += Integer::from(p * scale);
    }
}

/// Polynomials P_0 .. P_top in u with P_{j+1} = u P_j - P_{j-1}.
fn chebyshev_basis(top: usize, p0: &[Integer], p1: &[Integer]) -> Vec<Vec<Integer>> {
    let width = top + 2;
    let pad = |p: &[Integer]| {
        let mut v = p.to_vec();
        v.resize(width, Integer::new());
        v
    };
    let mut basis = vec![pad(p0)];
    if top >= 1 {
        basis.push(pad(p1));
    }
    for j in 1..top {
        let mut next = vec![Integer::new(); width];
        for i in 0..width - 1 {
            next[i + 1] += &basis[j][i];
        }
        for i in 0..width {
            next[i] -= &basis[j - 1][i];
        }
        basis.push(next);
    }
    for b in &mut basis {
        b.truncate(top + 1);
    }
    basis
}

/// sum_j coeffs[j] P_j(u) with P_0, P_1 given and P_{j+1} = u P_j - P_{j-1}.
fn recurrence_sum(coeffs: &[Integer], u: &Float, p0: Float, p1: Float) -> Float {
    let prec = u.prec();
    let mut acc = Float::with_val(prec, 0);
    let (mut prev, mut cur) = (p0, p1);
    for c in coeffs {
        acc += Float::with_val(prec, &prev * c);
        let next = Float::with_val(prec, u * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    acc
}
