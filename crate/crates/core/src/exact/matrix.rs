use std::fmt;

use rug::Integer;

use crate::error::{Error, Result};

/// Dense square matrix of exact integers, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    n: usize,
    entries: Vec<Integer>,
}

impl ExactMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Integer) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for s in 0..n {
                entries.push(f(r, s));
            }
        }
        Self { n, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Integer>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParams("matrix rows must form a square".into()));
        }
        Ok(Self { n, entries: rows.into_iter().flatten().collect() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, s: usize) -> &Integer {
        &self.entries[r * self.n + s]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Integer]> {
        self.entries.chunks(self.n.max(1))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|r| (0..r).all(|s| self.get(r, s) == self.get(s, r)))
    }

    /// `self + shift * I`
    pub fn shifted_diagonal(&self, shift: &Integer) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            out.entries[i * self.n + i] += shift;
        }
        out
    }

    /// Principal submatrix on the given (sorted) index set.
    pub fn principal_minor(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), |r, s| self.get(idx[r], idx[s]).clone())
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Integer {
        bareiss_det(self.entries.clone(), self.n)
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(Integer::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// The L x L symmetric Pascal matrix, entry (r, s) = C(r+s-2, r-1) for 1-based r, s.
pub fn pascal_matrix(l: usize) -> Result<ExactMatrix> {
    if l == 0 {
        return Err(Error::InvalidSize(l));
    }
    Ok(ExactMatrix::from_fn(l, |r, s| Integer::from(Integer::binomial_u((r + s) as u32, r as u32))))
}

fn bareiss_det(mut a: Vec<Integer>, n: usize) -> Integer {
    if n == 0 {
        return Integer::from(1);
    }
    let mut sign = 1i32;
    let mut prev = Integer::from(1);
    for k in 0..n - 1 {
        if a[k * n + k] == 0 {
            let Some(pivot) = (k + 1..n).find(|&r| a[r * n + k] != 0) else {
                return Integer::new();
            };
            for c in 0..n {
                a.swap(k * n + c, pivot * n + c);
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let mut v = Integer::from(&a[i * n + j] * &a[k * n + k]);
                v -= Integer::from(&a[i * n + k] * &a[k * n + j]);
                v.div_exact_mut(&prev);
                a[i * n + j] = v;
            }
        }
        prev = a[k * n + k].clone();
    }
    let det = a[n * n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_rows(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| Integer::from(v)).collect()).collect()).unwrap()
    }

    #[test]
    fn small_pascal_matrices() {
        assert_eq!(pascal_matrix(1).unwrap(), int_rows(&[&[1]]));
        assert_eq!(pascal_matrix(2).unwrap(), int_rows(&[&[1, 1], &[1, 2]]));
        assert_eq!(pascal_matrix(3).unwrap(), int_rows(&[&[1, 1, 1], &[1, 2, 3], &[1, 3, 6]]));
        assert!(matches!(pascal_matrix(0), Err(Error::InvalidSize(0))));
    }

    #[test]
    fn bareiss_handles_zero_pivots() {
        let m = int_rows(&[&[0, 2, 1], &[3, 0, 4], &[1, 1, 0]]);
        // cofactor expansion: 0*(0-4) - 2*(0-4) + 1*(3-0) = 11
        assert_eq!(m.determinant(), 11);
        let singular = int_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(singular.determinant(), 0);
    }

    #[test]
    fn pascal_has_unit_determinant() {
        for l in 1..=12 {
            let b = pascal_matrix(l).unwrap();
            assert!(b.is_symmetric());
            assert_eq!(b.determinant(), 1, "L = {l}");
        }
    }
}
