use std::sync::OnceLock;

use rug::Rational;

use crate::error::{Error, Result};

/// Largest Bernoulli index available through [`bernoulli`].
pub const DEFAULT_BERNOULLI_CAP: usize = 200;

/// Exact Bernoulli numbers B_0, B_2, ..., B_cap (B_1 is never needed here).
#[derive(Clone, Debug)]
pub struct BernoulliTable {
    even: Vec<Rational>,
    cap: usize,
}

impl BernoulliTable {
    /// Builds the table with the Akiyama-Tanigawa transform.
    pub fn new(cap: usize) -> Self {
        let mut row: Vec<Rational> = Vec::with_capacity(cap + 1);
        let mut even = Vec::with_capacity(cap / 2 + 1);
        for m in 0..=cap {
            row.push(Rational::from((1, m as u64 + 1)));
            for j in (1..=m).rev() {
                let diff = Rational::from(&row[j - 1] - &row[j]);
                row[j - 1] = diff * j as u32;
            }
            if m % 2 == 0 {
                even.push(row[0].clone());
            }
        }
        let table = Self { even, cap };
        assert_eq!(table.even[1], Rational::from((1, 6)), "B_2 anchor");
        if cap >= 4 {
            assert_eq!(table.even[2], Rational::from((-1, 30)), "B_4 anchor");
        }
        table
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// B_n for even n (B_n = 0 for odd n > 1, so only even indices are stored).
    pub fn get(&self, n: usize) -> Result<&Rational> {
        if n % 2 == 1 {
            return Err(Error::Domain(format!("only even Bernoulli indices are tabulated, got {n}")));
        }
        if n > self.cap {
            return Err(Error::BernoulliCap { index: n, cap: self.cap });
        }
        Ok(&self.even[n / 2])
    }
}

pub(crate) fn default_table() -> &'static BernoulliTable {
    static TABLE: OnceLock<BernoulliTable> = OnceLock::new();
    TABLE.get_or_init(|| BernoulliTable::new(DEFAULT_BERNOULLI_CAP))
}

/// Exact B_n for even n up to [`DEFAULT_BERNOULLI_CAP`].
pub fn bernoulli(n: usize) -> Result<Rational> {
    default_table().get(n).cloned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Integer;

    fn binomial(n: u32, k: u32) -> Integer {
        Integer::from(Integer::binomial_u(n, k))
    }

    /// Independent oracle: sum_{j=0}^{m} C(m+1, j) B_j = 0 with B_1 = -1/2.
    fn bernoulli_by_recurrence(max: usize) -> Vec<Rational> {
        let mut b: Vec<Rational> = vec![Rational::from(1)];
        for m in 1..=max {
            let mut acc = Rational::new();
            for (j, bj) in b.iter().enumerate() {
                acc += Rational::from(bj * binomial(m as u32 + 1, j as u32));
            }
            b.push(-acc / (m as u32 + 1));
        }
        b
    }

    #[test]
    fn anchors() {
        assert_eq!(bernoulli(2).unwrap(), Rational::from((1, 6)));
        assert_eq!(bernoulli(4).unwrap(), Rational::from((-1, 30)));
        assert_eq!(bernoulli(12).unwrap(), Rational::from((-691, 2730)));
    }

    #[test]
    fn matches_recurrence_oracle() {
        let oracle = bernoulli_by_recurrence(80);
        for n in (0..=80).step_by(2) {
            assert_eq!(bernoulli(n).unwrap(), oracle[n], "B_{n}");
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(bernoulli(202), Err(Error::BernoulliCap { .. })));
        assert!(bernoulli(200).is_ok());
    }
}
