use std::fmt;

use rug::Float;

/// A real number stored as `sign * exp(log_abs)`.
///
/// Used wherever magnitudes such as `(3*sqrt(3)/4)^(L^2)` would overflow a
/// fixed exponent range. `sign == 0` encodes an exact zero.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedLog {
    pub sign: i8,
    pub log_abs: Float,
}

impl SignedLog {
    pub fn zero(prec: u32) -> Self {
        Self { sign: 0, log_abs: Float::with_val(prec, rug::float::Special::NegInfinity) }
    }

    pub fn new(sign: i8, log_abs: Float) -> Self {
        if sign == 0 {
            let prec = log_abs.prec();
            return Self::zero(prec);
        }
        Self { sign: sign.signum(), log_abs }
    }

    pub fn from_float(x: &Float) -> Self {
        if x.is_zero() {
            return Self::zero(x.prec());
        }
        let sign = if x.is_sign_negative() { -1 } else { 1 };
        Self { sign, log_abs: x.clone().abs().ln() }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn prec(&self) -> u32 {
        self.log_abs.prec()
    }

    pub fn to_float(&self) -> Float {
        match self.sign {
            0 => Float::with_val(self.prec(), 0),
            s => {
                let v = self.log_abs.clone().exp();
                if s < 0 {
                    -v
                } else {
                    v
                }
            }
        }
    }

    pub fn mul(&self, other: &SignedLog) -> SignedLog {
        if self.is_zero() || other.is_zero() {
            return SignedLog::zero(self.prec());
        }
        SignedLog::new(self.sign * other.sign, Float::with_val(self.prec(), &self.log_abs + &other.log_abs))
    }

    pub fn div(&self, other: &SignedLog) -> SignedLog {
        assert!(!other.is_zero(), "division by an exact zero");
        if self.is_zero() {
            return self.clone();
        }
        SignedLog::new(self.sign * other.sign, Float::with_val(self.prec(), &self.log_abs - &other.log_abs))
    }

    pub fn neg(&self) -> SignedLog {
        SignedLog { sign: -self.sign, log_abs: self.log_abs.clone() }
    }

    /// Natural log of |self| minus natural log of |other|, i.e. log |self/other|.
    pub fn log_ratio(&self, other: &SignedLog) -> Float {
        Float::with_val(self.prec(), &self.log_abs - &other.log_abs)
    }

    /// Sums terms in log space, factoring out the largest magnitude.
    ///
    /// Terms whose magnitudes are bitwise equal are combined before the
    /// general sum, so exact pairwise cancellation yields an exact zero.
    pub fn sum(terms: &[SignedLog], prec: u32) -> SignedLog {
        let mut groups: Vec<(Float, i32)> = Vec::new();
        for t in terms.iter().filter(|t| !t.is_zero()) {
            if let Some(g) = groups.iter_mut().find(|g| g.0 == t.log_abs) {
                g.1 += t.sign as i32;
            } else {
                groups.push((t.log_abs.clone(), t.sign as i32));
            }
        }
        groups.retain(|g| g.1 != 0);
        let Some(max) = groups.iter().map(|g| g.0.clone()).reduce(|a, b| if a > b { a } else { b }) else {
            return SignedLog::zero(prec);
        };
        let mut acc = Float::with_val(prec, 0);
        for (log_abs, mult) in &groups {
            let scaled = Float::with_val(prec, log_abs - &max).exp();
            acc += scaled * *mult;
        }
        if acc.is_zero() {
            return SignedLog::zero(prec);
        }
        let sign = if acc.is_sign_negative() { -1 } else { 1 };
        SignedLog { sign, log_abs: acc.abs().ln() + max }
    }
}

impl fmt::Display for SignedLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => write!(f, "{}exp({})", if s < 0 { "-" } else { "" }, self.log_abs.to_string_radix(10, Some(20))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_pair_cancellation_gives_zero() {
        let p = 128;
        let a = SignedLog::new(1, Float::with_val(p, 1000.25));
        let b = a.neg();
        let c = SignedLog::new(1, Float::with_val(p, 3.5));
        let d = c.neg();
        assert!(SignedLog::sum(&[a, c, b, d], p).is_zero());
    }

    #[test]
    fn sum_matches_direct_addition() {
        let p = 128;
        let xs = [2.5f64, -1.25, 7.0];
        let terms: Vec<_> = xs.iter().map(|x| SignedLog::from_float(&Float::with_val(p, *x))).collect();
        let s = SignedLog::sum(&terms, p).to_float();
        assert!((s.to_f64() - 8.25).abs() < 1e-30);
    }
}
