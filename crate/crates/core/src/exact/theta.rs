use std::fmt;
use std::str::FromStr;

use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// An angle, either an exact rational multiple of pi or a raw real in radians.
#[derive(Clone, Debug, PartialEq)]
pub enum ThetaValue {
    /// theta = (p / q) pi with gcd(|p|, q) = 1 and q > 0.
    PiMultiple { p: i64, q: u64 },
    Radians(Float),
}

impl ThetaValue {
    pub fn pi_multiple(p: i64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::Parse("theta denominator must be positive".into()));
        }
        let g = Integer::from(p.unsigned_abs()).gcd(&Integer::from(q)).to_u64().unwrap_or(1).max(1);
        Ok(ThetaValue::PiMultiple { p: p / g as i64, q: q / g })
    }

    pub fn zero() -> Self {
        ThetaValue::PiMultiple { p: 0, q: 1 }
    }

    pub fn radians(x: Float) -> Self {
        ThetaValue::Radians(x)
    }

    pub fn as_pi_multiple(&self) -> Option<Rational> {
        match self {
            ThetaValue::PiMultiple { p, q } => Some(Rational::from((*p, *q))),
            ThetaValue::Radians(_) => None,
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            ThetaValue::PiMultiple { p, q } => ThetaValue::PiMultiple { p: -p, q: *q },
            ThetaValue::Radians(x) => ThetaValue::Radians(-x.clone()),
        }
    }

    /// The angle in radians at binary precision `prec`.
    pub fn to_float(&self, prec: u32) -> Float {
        match self {
            ThetaValue::PiMultiple { p, q } => {
                let pi = Float::with_val(prec, rug::float::Constant::Pi);
                pi * Rational::from((*p, *q))
            }
            ThetaValue::Radians(x) => Float::with_val(prec, x),
        }
    }

    /// cos(omega * theta + quarter_turns * pi / 2), exact at multiples of
    /// pi/6 when theta is a rational multiple of pi.
    pub fn cos_scaled(&self, omega: &Rational, quarter_turns: u32, prec: u32) -> Float {
        match self {
            ThetaValue::PiMultiple { p, q } => {
                let r = Rational::from(omega * Rational::from((*p, *q))) + Rational::from((quarter_turns, 2u32));
                cos_pi_rational(&r, prec)
            }
            ThetaValue::Radians(x) => {
                let arg = Float::with_val(prec, x * omega);
                let pi = Float::with_val(prec, rug::float::Constant::Pi);
                let shift = Float::with_val(prec, &pi * quarter_turns) / 2u32;
                (arg + shift).cos()
            }
        }
    }
}

/// cos(r pi) for rational r; exact (up to the final rounding of sqrt 3) when
/// r is a multiple of 1/6.
pub fn cos_pi_rational(r: &Rational, prec: u32) -> Float {
    // reduce r modulo 2 into [0, 2)
    let two = Rational::from(2);
    let turns = Rational::from(r / &two).floor();
    let reduced = Rational::from(r - Rational::from(&turns * &two));
    let six = Rational::from(&reduced * 6u32);
    if *six.denom() == 1 {
        let k = six.numer().to_u32().expect("reduced angle lies in [0, 12)");
        let half_sqrt3 = || Float::with_val(prec, 3).sqrt() / 2u32;
        return match k {
            0 => Float::with_val(prec, 1),
            1 | 11 => half_sqrt3(),
            2 | 10 => Float::with_val(prec, 0.5),
            3 | 9 => Float::with_val(prec, 0),
            4 | 8 => Float::with_val(prec, -0.5),
            5 | 7 => -half_sqrt3(),
            6 => Float::with_val(prec, -1),
            _ => unreachable!(),
        };
    }
    let pi = Float::with_val(prec, rug::float::Constant::Pi);
    (pi * reduced).cos()
}

impl fmt::Display for ThetaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThetaValue::PiMultiple { p, q } => write!(f, "{p}/{q}"),
            ThetaValue::Radians(x) => write!(f, "{}", x.to_string_radix(10, None)),
        }
    }
}

/// "P/Q" parses as (P/Q) pi; anything else as a decimal number of radians.
impl FromStr for ThetaValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: i64 = p.trim().parse().map_err(|_| Error::Parse(format!("bad theta numerator in {s:?}")))?;
            let q: u64 = q.trim().parse().map_err(|_| Error::Parse(format!("bad theta denominator in {s:?}")))?;
            return ThetaValue::pi_multiple(p, q);
        }
        let parsed = Float::parse(s).map_err(|e| Error::Parse(format!("bad theta {s:?}: {e}")))?;
        // 512 bits covers any decimal a user types on a command line
        Ok(ThetaValue::Radians(Float::with_val(512, parsed)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_fraction() {
        assert_eq!(ThetaValue::pi_multiple(2, 6).unwrap(), ThetaValue::PiMultiple { p: 1, q: 3 });
        assert_eq!(ThetaValue::pi_multiple(-4, 2).unwrap(), ThetaValue::PiMultiple { p: -2, q: 1 });
        assert_eq!(ThetaValue::pi_multiple(0, 5).unwrap(), ThetaValue::PiMultiple { p: 0, q: 1 });
        assert!(ThetaValue::pi_multiple(1, 0).is_err());
    }

    #[test]
    fn exact_cosines() {
        let p = 200;
        assert_eq!(cos_pi_rational(&Rational::from((1, 3)), p), 0.5);
        assert_eq!(cos_pi_rational(&Rational::from((-2, 3)), p), -0.5);
        assert_eq!(cos_pi_rational(&Rational::from((7, 2)), p), 0);
        assert_eq!(cos_pi_rational(&Rational::from(5), p), -1);
        let generic = cos_pi_rational(&Rational::from((1, 5)), p);
        assert!((generic.to_f64() - (std::f64::consts::PI / 5.0).cos()).abs() < 1e-15);
    }

    #[test]
    fn parse_forms() {
        assert_eq!("1/3".parse::<ThetaValue>().unwrap(), ThetaValue::PiMultiple { p: 1, q: 3 });
        assert!(matches!("1.25".parse::<ThetaValue>().unwrap(), ThetaValue::Radians(_)));
        assert!("x/3".parse::<ThetaValue>().is_err());
    }
}
