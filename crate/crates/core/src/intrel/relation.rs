use std::fmt;

use rug::{Float, Integer, Rational};
use serde::Serialize;

use super::lll::{lll_reduce, LatticeBasis};
use crate::error::{Error, Result};
use crate::mpnum::pow10;

/// A real constant with a display name.
#[derive(Clone, Debug)]
pub struct NamedValue {
    pub name: String,
    pub value: Float,
}

impl NamedValue {
    pub fn new(name: impl Into<String>, value: Float) -> Self {
        Self { name: name.into(), value }
    }
}

/// Integer relation sum_k b_k y_k + b_{n+1} x = 0, normalized so that
/// b_{n+1} > 0 and the coefficients are coprime.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationCandidate {
    #[serde(serialize_with = "integer_strings")]
    pub coefficients: Vec<Integer>,
    pub names: Vec<String>,
    /// |sum b_k y_k + b_{n+1} x| at full input precision.
    #[serde(serialize_with = "float_string")]
    pub quality: Float,
    /// Decimal digits used for the lattice embedding.
    pub scale: u32,
}

fn integer_strings<S: serde::Serializer>(v: &[Integer], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

fn float_string<S: serde::Serializer>(v: &Float, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string_radix(10, Some(6)))
}

impl RelationCandidate {
    /// The target x expressed through the ys: x = -sum b_k y_k / b_{n+1}.
    pub fn solution(&self) -> Vec<Rational> {
        let n = self.coefficients.len() - 1;
        let den = &self.coefficients[n];
        self.coefficients[..n].iter().map(|b| -Rational::from((b.clone(), den.clone()))).collect()
    }

    /// Largest |b_k|.
    pub fn height(&self) -> Integer {
        self.coefficients.iter().map(|b| Integer::from(b.abs_ref())).max().unwrap_or_default()
    }

    /// Residual |sum b_k y_k + b_{n+1} x| for fresh values.
    pub fn residual(&self, x: &Float, ys: &[Float]) -> Float {
        let prec = ys.iter().map(Float::prec).chain([x.prec()]).max().unwrap_or(64);
        let n = self.coefficients.len() - 1;
        let mut acc = Float::with_val(prec, x * &self.coefficients[n]);
        for (b, y) in self.coefficients[..n].iter().zip(ys) {
            acc += Float::with_val(prec, y * b);
        }
        acc.abs()
    }

    /// Whether the relation holds for `x`, `ys` to about `digits` digits.
    pub fn verify(&self, x: &Float, ys: &[Float], digits: u32) -> bool {
        let n = self.coefficients.len() as i64 - 1;
        let prec = x.prec();
        let scale = Float::with_val(prec, self.height()).max(&Float::with_val(prec, 1));
        let bound = pow10(-(digits as i64) + n + 2, prec) * scale;
        self.residual(x, ys) < bound
    }
}

impl fmt::Display for RelationCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.names.len();
        write!(f, "{}*x", self.coefficients[n])?;
        for (b, name) in self.coefficients[..n].iter().zip(&self.names) {
            if *b == 0 {
                continue;
            }
            let sign = if *b < 0 { '-' } else { '+' };
            write!(f, " {sign} {}*{name}", Integer::from(b.abs_ref()))?;
        }
        write!(f, " = 0")
    }
}

/// Result of a relation search: rejection is a normal outcome.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum RelationOutcome {
    Found(RelationCandidate),
    Rejected {
        /// Smallest max-norm of the tail among reduced vectors with a
        /// nonzero x coefficient.
        #[serde(serialize_with = "integer_string")]
        best_tail: Integer,
        scale: u32,
    },
}

fn integer_string<S: serde::Serializer>(v: &Integer, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl RelationOutcome {
    pub fn found(&self) -> Option<&RelationCandidate> {
        match self {
            RelationOutcome::Found(c) => Some(c),
            RelationOutcome::Rejected { .. } => None,
        }
    }
}

const MAX_TAIL: u32 = 1000;

/// floor(10^p v)
fn scaled_floor(v: &Float, p: u32) -> Result<Integer> {
    let prec = v.prec().max(crate::mpnum::digits_to_bits(p + 10));
    let s = Float::with_val(prec, v * pow10(p as i64, prec)).floor();
    s.to_integer().ok_or_else(|| Error::Domain("non-finite input to relation search".into()))
}

/// Integer relation search by lattice reduction on
/// v_i = e_i + floor(10^p y_i) e_{n+2}, v_{n+1} = e_{n+1} + floor(10^p x) e_{n+2}.
///
/// A reduced vector is accepted when its x coefficient is nonzero, its
/// tail is at most 10^3, its height at most 10^(p / 2n), and the relation
/// re-verifies on the full-precision inputs with residual below
/// 10^(-p+n+2) times the height.
pub fn find_relation(x: &Float, ys: &[NamedValue], p: u32) -> Result<RelationOutcome> {
    let targets = [x.clone()];
    let candidates: Vec<Vec<Float>> = ys.iter().map(|y| vec![y.value.clone()]).collect();
    let names: Vec<String> = ys.iter().map(|y| y.name.clone()).collect();
    search(&targets, &candidates, &names, p)
}

/// Relation f = sum b_k g_k observed through m linear functionals:
/// targets[r] = L_r f and candidates[k][r] = L_r g_k. Needs n > m.
pub fn find_function_relation(
    targets: &[Float],
    candidates: &[Vec<Float>],
    names: &[String],
    p: u32,
) -> Result<RelationOutcome> {
    let m = targets.len();
    let n = candidates.len();
    if n <= m {
        return Err(Error::InvalidParams(format!("need more candidates ({n}) than functionals ({m})")));
    }
    if candidates.iter().any(|c| c.len() != m) || names.len() != n {
        return Err(Error::InvalidParams("candidate matrix does not match the targets".into()));
    }
    search(targets, candidates, names, p)
}

fn search(targets: &[Float], candidates: &[Vec<Float>], names: &[String], p: u32) -> Result<RelationOutcome> {
    let m = targets.len();
    let n = candidates.len();
    if n == 0 || m == 0 {
        return Err(Error::InvalidParams("relation search needs at least one constant".into()));
    }
    if p < 2 * (n as u32 + 1) {
        return Err(Error::PrecisionTooLow(format!("{p} digits cannot decide a relation among {} constants", n + 1)));
    }
    let dim = n + 1 + m;
    let mut rows = Vec::with_capacity(n + 1);
    for (i, ys) in candidates.iter().enumerate() {
        let mut v = vec![Integer::new(); dim];
        v[i] = Integer::from(1);
        for (r, y) in ys.iter().enumerate() {
            v[n + 1 + r] = scaled_floor(y, p)?;
        }
        rows.push(v);
    }
    let mut v = vec![Integer::new(); dim];
    v[n] = Integer::from(1);
    for (r, x) in targets.iter().enumerate() {
        v[n + 1 + r] = scaled_floor(x, p)?;
    }
    rows.push(v);
    let reduced = lll_reduce(&LatticeBasis::new(rows)?, &Rational::from((3, 4)))?;

    let height_cap = pow10(((p as f64) / (2.0 * n as f64)).floor() as i64, 64).to_integer().unwrap_or_default();
    let mut best_tail: Option<Integer> = None;
    let mut found: Vec<RelationCandidate> = Vec::new();
    for row in reduced.basis.rows() {
        if row[n] == 0 {
            continue;
        }
        let tail = row[n + 1..].iter().map(|t| Integer::from(t.abs_ref())).max().unwrap_or_default();
        if best_tail.as_ref().map_or(true, |b| tail < *b) {
            best_tail = Some(tail.clone());
        }
        if tail > MAX_TAIL {
            continue;
        }
        let mut coeffs: Vec<Integer> = row[..=n].to_vec();
        let g = coeffs.iter().fold(Integer::new(), |acc, c| acc.gcd(c));
        for c in coeffs.iter_mut() {
            *c /= &g;
        }
        if coeffs[n] < 0 {
            for c in coeffs.iter_mut() {
                *c = -c.clone();
            }
        }
        let mut cand = RelationCandidate {
            coefficients: coeffs,
            names: names.to_vec(),
            quality: Float::new(64),
            scale: p,
        };
        if cand.height() > height_cap {
            continue;
        }
        let mut ok = true;
        let mut worst = Float::with_val(targets[0].prec(), 0);
        for r in 0..m {
            let ys: Vec<Float> = candidates.iter().map(|c| c[r].clone()).collect();
            ok &= cand.verify(&targets[r], &ys, p);
            worst = worst.max(&cand.residual(&targets[r], &ys));
        }
        if ok {
            cand.quality = worst;
            found.push(cand);
        }
    }
    let best = found.into_iter().min_by(|a, b| a.height().cmp(&b.height()));
    Ok(match best {
        Some(c) => RelationOutcome::Found(c),
        None => RelationOutcome::Rejected { best_tail: best_tail.unwrap_or_default(), scale: p },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpnum::{constant, ln_const, LnConst, NamedConstant, PrecisionContext};

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    #[test]
    fn recognizes_minus_log_two() {
        let c = PrecisionContext::new(40).unwrap();
        let ln2 = ln_const(LnConst::Two, c.bits());
        let x = -ln2.clone();
        let out = find_relation(&x, &[NamedValue::new("log2", ln2)], 30).unwrap();
        assert_eq!(out.found().unwrap().coefficients, ints(&[1, 1]));
    }

    #[test]
    fn planted_two_term_relation() {
        let c = PrecisionContext::new(40).unwrap();
        let g = constant(NamedConstant::EulerGamma, &c).unwrap();
        let ln2 = ln_const(LnConst::Two, c.bits());
        let x = Float::with_val(c.bits(), &g * 3u32) - Float::with_val(c.bits(), &ln2 * 7u32);
        let ys = [NamedValue::new("gamma", g), NamedValue::new("log2", ln2)];
        let out = find_relation(&x, &ys, 38).unwrap();
        let cand = out.found().unwrap();
        assert_eq!(cand.coefficients, ints(&[-3, 7, 1]));
        assert_eq!(cand.solution(), vec![Rational::from(3), Rational::from(-7)]);
        assert_eq!(cand.to_string(), "1*x - 3*gamma + 7*log2 = 0");
    }

    #[test]
    fn pi_against_gamma_is_rejected() {
        let c = PrecisionContext::new(40).unwrap();
        let pi = constant(NamedConstant::Pi, &c).unwrap();
        let g = constant(NamedConstant::EulerGamma, &c).unwrap();
        let out = find_relation(&pi, &[NamedValue::new("gamma", g)], 30).unwrap();
        assert!(matches!(out, RelationOutcome::Rejected { .. }));
    }

    #[test]
    fn function_relation_and_reduction_to_scalar() {
        let c = PrecisionContext::new(40).unwrap();
        let prec = c.bits();
        // g_k sampled at 3 points through functionals L_r g = g(t_r)
        let ts = [0.3f64, 1.1, 2.7];
        let sample = |k: usize, t: f64| {
            let tf = Float::with_val(prec, t);
            match k {
                0 => tf,
                1 => tf.square(),
                2 => tf.exp(),
                _ => tf.sin(),
            }
        };
        let candidates: Vec<Vec<Float>> = (0..4).map(|k| ts.iter().map(|&t| sample(k, t)).collect()).collect();
        let targets: Vec<Float> =
            (0..3).map(|r| Float::with_val(prec, &candidates[0][r] * 2u32) - Float::with_val(prec, &candidates[2][r] * 5u32)).collect();
        let names: Vec<String> = ["t", "t2", "exp", "sin"].iter().map(|s| s.to_string()).collect();
        let out = find_function_relation(&targets, &candidates, &names, 36).unwrap();
        assert_eq!(out.found().unwrap().coefficients, ints(&[-2, 0, 5, 0, 1]));

        let ys: Vec<NamedValue> = (0..4).map(|k| NamedValue::new(names[k].clone(), candidates[k][0].clone())).collect();
        let scalar = find_relation(&targets[0], &ys, 36).unwrap();
        let single = find_function_relation(&targets[..1], &candidates.iter().map(|c| vec![c[0].clone()]).collect::<Vec<_>>(), &names, 36)
            .unwrap();
        assert_eq!(scalar, single);
    }

    #[test]
    fn low_precision_is_an_error() {
        let x = Float::with_val(64, 1.5);
        assert!(matches!(find_relation(&x, &[NamedValue::new("one", Float::with_val(64, 1))], 3), Err(Error::PrecisionTooLow(_))));
    }
}
