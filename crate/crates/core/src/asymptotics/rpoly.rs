use std::sync::OnceLock;

use rug::{Float, Rational};

/// Highest published correction index k (R_2 .. R_14).
pub const MAX_K: usize = 7;

const R_COEFFS: [&[(i64, u64)]; MAX_K] = [
    &[(77, 15552), (7, 144), (-11, 64)],
    &[(-245, 559872), (-157, 12960), (-29, 1152), (181, 1280)],
    &[(1103, 40310784), (-1349, 244944), (3599, 31104), (-989, 6912), (-3275, 14336)],
    &[(793135, 4353564672), (116807, 2099520), (-101009, 279936), (-47479, 622080), (43171, 36864), (61621, 122880)],
    &[
        (-93651593, 130606940160),
        (-3740009, 10392624),
        (1868083, 1399680),
        (301091, 93312),
        (-1858513, 276480),
        (-1239773, 184320),
        (-1184171, 901120),
    ],
    &[
        (2884889645, 940369969152),
        (68061091601, 23213342880),
        (-110018569, 22674816),
        (-754814143, 16796160),
        (454871621, 10450944),
        (931652293, 9953280),
        (31193731, 884736),
        (23057581, 5963776),
    ],
    &[
        (-2213492219141, 135413275557888),
        (-2471502605, 76527504),
        (-83019415531, 7142567040),
        (30869634919, 45349632),
        (-10100916773, 44789760),
        (-96936237491, 62705664),
        (-35619671389, 39813120),
        (-105293315, 589824),
        (-453005291, 36700160),
    ],
];

/// The correction polynomials R_2k(theta), k = 1..7, stored by their
/// coefficients in x^2 where x = theta / pi (constant term first).
#[derive(Clone, Debug)]
pub struct RPolynomialTable {
    polys: Vec<Vec<Rational>>,
}

impl RPolynomialTable {
    pub fn get() -> &'static RPolynomialTable {
        static TABLE: OnceLock<RPolynomialTable> = OnceLock::new();
        TABLE.get_or_init(|| RPolynomialTable {
            polys: R_COEFFS.iter().map(|p| p.iter().map(|&(n, d)| Rational::from((n, d))).collect()).collect(),
        })
    }

    /// Coefficients of R_2k in powers of (theta/pi)^2.
    pub fn coefficients(&self, k: usize) -> &[Rational] {
        &self.polys[k - 1]
    }

    /// Degree of R_2k in theta.
    pub fn degree(&self, k: usize) -> usize {
        2 * (self.polys[k - 1].len() - 1)
    }

    /// R_2k at x = theta/pi, exactly.
    pub fn eval_exact(&self, k: usize, x: &Rational) -> Rational {
        let x_sq = Rational::from(x * x);
        let mut acc = Rational::new();
        for c in self.coefficients(k).iter().rev() {
            acc *= &x_sq;
            acc += c;
        }
        acc
    }

    /// R_2k at x = theta/pi.
    pub fn eval(&self, k: usize, x: &Float) -> Float {
        let prec = x.prec();
        let x_sq = Float::with_val(prec, x * x);
        let mut acc = Float::with_val(prec, 0);
        for c in self.coefficients(k).iter().rev() {
            acc *= &x_sq;
            acc += c;
        }
        acc
    }
}
