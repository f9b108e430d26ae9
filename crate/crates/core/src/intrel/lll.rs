use rug::{Integer, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::ExactMatrix;

/// n linearly independent integer vectors of dimension d >= n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeBasis {
    #[serde(serialize_with = "integer_rows")]
    rows: Vec<Vec<Integer>>,
}

fn integer_rows<S: serde::Serializer>(rows: &[Vec<Integer>], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()))
}

fn dot(a: &[Integer], b: &[Integer]) -> Integer {
    a.iter().zip(b).fold(Integer::new(), |acc, (x, y)| acc + Integer::from(x * y))
}

impl LatticeBasis {
    pub fn new(rows: Vec<Vec<Integer>>) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(Error::InvalidParams("empty lattice basis".into()));
        };
        let d = first.len();
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidParams("lattice rows have different lengths".into()));
        }
        if rows.len() > d {
            return Err(Error::DependentBasis);
        }
        let n = rows.len();
        let gram = ExactMatrix::from_fn(n, |i, j| dot(&rows[i], &rows[j]));
        if gram.determinant() == 0 {
            return Err(Error::DependentBasis);
        }
        Ok(Self { rows })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| Integer::from(x)).collect()).collect())
    }

    pub fn rows(&self) -> &[Vec<Integer>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.rows[0].len()
    }

    /// Squared Euclidean norm of row i.
    pub fn norm_sq(&self, i: usize) -> Integer {
        dot(&self.rows[i], &self.rows[i])
    }

    /// Rational Gram-Schmidt data (mu, |b*_i|^2), computed from scratch.
    pub fn gram_schmidt(&self) -> (Vec<Vec<Rational>>, Vec<Rational>) {
        let n = self.len();
        let mut mu = vec![vec![Rational::new(); n]; n];
        let mut star: Vec<Vec<Rational>> = Vec::with_capacity(n);
        let mut b_sq = Vec::with_capacity(n);
        for i in 0..n {
            let mut v: Vec<Rational> = self.rows[i].iter().map(Rational::from).collect();
            for j in 0..i {
                let num = self.rows[i]
                    .iter()
                    .zip(&star[j])
                    .fold(Rational::new(), |acc, (x, y)| acc + Rational::from(x * y));
                let m = num / &b_sq[j];
                for (vk, sk) in v.iter_mut().zip(&star[j]) {
                    *vk -= Rational::from(&m * sk);
                }
                mu[i][j] = m;
            }
            let sq = v.iter().fold(Rational::new(), |acc, x| acc + Rational::from(x * x));
            b_sq.push(sq);
            star.push(v);
        }
        (mu, b_sq)
    }

    /// Whether the basis is size-reduced and satisfies the Lovasz condition.
    pub fn is_lll_reduced(&self, delta: &Rational) -> bool {
        let (mu, b_sq) = self.gram_schmidt();
        let half = Rational::from((1, 2));
        for i in 0..self.len() {
            for j in 0..i {
                if Rational::from(mu[i][j].abs_ref()) > half {
                    return false;
                }
            }
            if i > 0 {
                let m_sq = Rational::from(mu[i][i - 1].square_ref());
                if b_sq[i] < (Rational::from(delta - &m_sq)) * &b_sq[i - 1] {
                    return false;
                }
            }
        }
        true
    }
}

/// Reduced basis together with the unimodular U (output = U * input).
#[derive(Clone, Debug)]
pub struct LllOutput {
    pub basis: LatticeBasis,
    pub transform: Vec<Vec<Integer>>,
    pub swaps: usize,
}

impl LllOutput {
    /// Checks U * input == output and |det U| == 1 exactly.
    pub fn verify(&self, input: &LatticeBasis) -> bool {
        let n = input.len();
        let d = input.dim();
        for i in 0..n {
            for k in 0..d {
                let v = (0..n).fold(Integer::new(), |acc, j| acc + Integer::from(&self.transform[i][j] * &input.rows[j][k]));
                if v != self.basis.rows[i][k] {
                    return false;
                }
            }
        }
        let det = ExactMatrix::from_fn(n, |i, j| self.transform[i][j].clone()).determinant();
        det == 1 || det == -1
    }
}

/// Integral LLL reduction (all arithmetic on exact integers) with the
/// Lovasz parameter `delta` in (1/4, 1].
pub fn lll_reduce(basis: &LatticeBasis, delta: &Rational) -> Result<LllOutput> {
    if *delta <= Rational::from((1, 4)) || *delta > 1 {
        return Err(Error::InvalidParams(format!("LLL delta = {delta} must lie in (1/4, 1]")));
    }
    let n = basis.len();
    let mut b = basis.rows.clone();
    let mut h: Vec<Vec<Integer>> =
        (0..n).map(|i| (0..n).map(|j| Integer::from((i == j) as u32)).collect()).collect();
    // d[i] = Gram determinant of the first i vectors; lambda[i][j] = d[j+1] mu_ij
    let mut d = vec![Integer::new(); n + 1];
    let mut lambda = vec![vec![Integer::new(); n]; n];
    d[0] = Integer::from(1);
    d[1] = dot(&b[0], &b[0]);
    let (dp, dq) = (delta.numer().clone(), delta.denom().clone());
    let mut swaps = 0usize;
    let mut k = 1usize;
    let mut k_max = 0usize;

    while k < n {
        if k > k_max {
            k_max = k;
            for j in 0..=k {
                let mut u = dot(&b[k], &b[j]);
                for i in 0..j {
                    u = (Integer::from(&d[i + 1] * &u) - Integer::from(&lambda[k][i] * &lambda[j][i])) / &d[i];
                }
                if j < k {
                    lambda[k][j] = u;
                } else {
                    if u == 0 {
                        return Err(Error::DependentBasis);
                    }
                    d[k + 1] = u;
                }
            }
        }
        loop {
            reduce(k, k - 1, &mut b, &mut h, &mut lambda, &d);
            // Lovasz: d_k d_{k-2} >= delta d_{k-1}^2 - lambda^2 (1-based)
            let lhs = Integer::from(&d[k + 1] * &d[k - 1]) * &dq;
            let lam_sq = Integer::from(lambda[k][k - 1].square_ref());
            let rhs = Integer::from(d[k].square_ref()) * &dp - lam_sq * &dq;
            if lhs < rhs {
                swap(k, k_max, &mut b, &mut h, &mut lambda, &mut d);
                swaps += 1;
                k = k.saturating_sub(1).max(1);
            } else {
                for l in (0..k.saturating_sub(1)).rev() {
                    reduce(k, l, &mut b, &mut h, &mut lambda, &d);
                }
                k += 1;
                break;
            }
        }
    }
    Ok(LllOutput { basis: LatticeBasis { rows: b }, transform: h, swaps })
}

fn reduce(k: usize, l: usize, b: &mut [Vec<Integer>], h: &mut [Vec<Integer>], lambda: &mut [Vec<Integer>], d: &[Integer]) {
    let twice = Integer::from(lambda[k][l].abs_ref()) * 2u32;
    if twice <= d[l + 1] {
        return;
    }
    let q = Rational::from((lambda[k][l].clone(), d[l + 1].clone())).round().into_numer_denom().0;
    let (bl, hl) = (b[l].clone(), h[l].clone());
    for (x, y) in b[k].iter_mut().zip(&bl) {
        *x -= Integer::from(&q * y);
    }
    for (x, y) in h[k].iter_mut().zip(&hl) {
        *x -= Integer::from(&q * y);
    }
    lambda[k][l] -= Integer::from(&q * &d[l + 1]);
    for i in 0..l {
        let t = Integer::from(&q * &lambda[l][i]);
        lambda[k][i] -= t;
    }
}

fn swap(
    k: usize,
    k_max: usize,
    b: &mut [Vec<Integer>],
    h: &mut [Vec<Integer>],
    lambda: &mut [Vec<Integer>],
    d: &mut [Integer],
) {
    b.swap(k, k - 1);
    h.swap(k, k - 1);
    for j in 0..k.saturating_sub(1) {
        let t = std::mem::take(&mut lambda[k][j]);
        lambda[k][j] = std::mem::replace(&mut lambda[k - 1][j], t);
    }
    let lam = lambda[k][k - 1].clone();
    let big_b = (Integer::from(&d[k - 1] * &d[k + 1]) + Integer::from(lam.square_ref())) / &d[k];
    for i in k + 1..=k_max {
        let t = lambda[i][k].clone();
        lambda[i][k] = (Integer::from(&d[k + 1] * &lambda[i][k - 1]) - Integer::from(&lam * &t)) / &d[k];
        lambda[i][k - 1] = (Integer::from(&big_b * &t) + Integer::from(&lam * &lambda[i][k])) / &d[k + 1];
    }
    d[k] = big_b;
}
