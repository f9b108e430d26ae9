use rayon::prelude::*;
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use super::matrix::pascal_matrix;
use crate::error::{Error, Result};

/// Exact coefficients of det(B - x I) = sum_k c_k x^k for the L x L Pascal matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharPolyRecord {
    pub l: usize,
    #[serde(with = "integer_strings")]
    pub coeffs: Vec<Integer>,
}

impl CharPolyRecord {
    /// Checks c_0 = 1, c_L = (-1)^L and c_{L-j} = (-1)^L c_j.
    pub fn validate(&self) -> Result<()> {
        let l = self.l;
        if l == 0 {
            return Err(Error::InvalidSize(0));
        }
        if self.coeffs.len() != l + 1 {
            return Err(Error::InvariantViolation(format!("expected {} coefficients, found {}", l + 1, self.coeffs.len())));
        }
        if self.coeffs[0] != 1 {
            return Err(Error::InvariantViolation(format!("c_0 = {} (expected 1)", self.coeffs[0])));
        }
        let odd = l % 2 == 1;
        let top = if odd { -1 } else { 1 };
        if self.coeffs[l] != top {
            return Err(Error::InvariantViolation(format!("c_{l} = {} (expected {top})", self.coeffs[l])));
        }
        for j in 0..=l / 2 {
            let mirrored = if odd { -self.coeffs[j].clone() } else { self.coeffs[j].clone() };
            if self.coeffs[l - j] != mirrored {
                return Err(Error::InvariantViolation(format!("c_{} != (-1)^L c_{j}", l - j)));
            }
        }
        Ok(())
    }

    /// Coefficients of det(B + z I) = sum_k c'_k z^k, i.e. c'_k = (-1)^k c_k.
    pub fn plus_coeffs(&self) -> Vec<Integer> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 1 { -c.clone() } else { c.clone() })
            .collect()
    }

    /// det(B - x I) at an integer point.
    pub fn evaluate(&self, x: &Integer) -> Integer {
        let mut acc = Integer::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }
}

/// Characteristic polynomial det(B - x I) of the L x L Pascal matrix.
///
/// The determinant is evaluated exactly at x = 0..=L by Bareiss elimination
/// (in parallel) and the polynomial recovered by Newton forward-difference
/// interpolation over the rationals, followed by an integrality check.
pub fn char_poly(l: usize) -> Result<CharPolyRecord> {
    let b = pascal_matrix(l)?;
    let samples: Vec<Integer> =
        (0..=l).into_par_iter().map(|x| b.shifted_diagonal(&Integer::from(-(x as i64))).determinant()).collect();
    let coeffs = interpolate_integer_points(&samples)?;
    let record = CharPolyRecord { l, coeffs };
    record.validate()?;
    Ok(record)
}

/// Monomial coefficients of the unique degree-n polynomial through
/// (0, v_0), ..., (n, v_n), required to be integral.
pub(crate) fn interpolate_integer_points(values: &[Integer]) -> Result<Vec<Integer>> {
    let n = values.len();
    let mut diffs = values.to_vec();
    let mut leading = Vec::with_capacity(n);
    for k in 0..n {
        leading.push(diffs[0].clone());
        for i in 0..n - k - 1 {
            diffs[i] = Integer::from(&diffs[i + 1] - &diffs[i]);
        }
    }
    // p(x) = sum_k Delta^k v_0 * x(x-1)...(x-k+1) / k!
    let mut coeffs = vec![Rational::new(); n];
    let mut falling = vec![Integer::from(1)];
    let mut factorial = Integer::from(1);
    for (k, delta) in leading.iter().enumerate() {
        if k > 0 {
            factorial *= k as u32;
            // falling *= (x - (k - 1))
            let shift = Integer::from(k - 1);
            let mut next = vec![Integer::new(); falling.len() + 1];
            for (i, f) in falling.iter().enumerate() {
                next[i + 1] += f;
                next[i] -= Integer::from(f * &shift);
            }
            falling = next;
        }
        let scale = Rational::from((delta.clone(), factorial.clone()));
        for (i, f) in falling.iter().enumerate() {
            coeffs[i] += Rational::from(&scale * f);
        }
    }
    coeffs
        .into_iter()
        .enumerate()
        .map(|(i, q)| {
            if *q.denom() == 1 {
                Ok(q.into_numer_denom().0)
            } else {
                Err(Error::NonIntegral(format!("interpolated coefficient x^{i} = {q}")))
            }
        })
        .collect()
}

mod integer_strings {
    use rug::Integer;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Integer], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|i| i.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Integer>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter().map(|s| s.parse::<Integer>().map_err(serde::de::Error::custom)).collect()
    }
}
