//! End-to-end acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::sync::OnceLock;
use std::time::Instant;

use pascal_charpoly::asymptotics::{
    amplitude_a0, d_asym, log_deriv_a0, phi_asym, relative_error, special_leading_constant, symbolic_phi_series,
    zero_sum_check, AsymptoticParams, Parity, SpecialPoint,
};
use pascal_charpoly::exact::{char_poly, path_weight_oracle, CosineForm, ThetaValue};
use pascal_charpoly::extraction::{fit_amplitudes, ExactData, FitModel, SyntheticData};
use pascal_charpoly::intrel::{find_relation, NamedValue};
use pascal_charpoly::loop_observables::{loop_moments_exact, mean_loops_asym, wrap_prefactor};
use pascal_charpoly::mpnum::{constant, polygamma, pow10, NamedConstant, PrecisionContext};
use pascal_charpoly::special_products::exact_special_value;
use rug::ops::Pow;
use rug::{Float, Rational};

type Outcome = Result<String, String>;

const MAX_L: usize = 64;

fn forms() -> &'static Vec<CosineForm> {
    static FORMS: OnceLock<Vec<CosineForm>> = OnceLock::new();
    FORMS.get_or_init(|| (1..=MAX_L).map(|l| CosineForm::new(&char_poly(l).unwrap()).unwrap()).collect())
}

fn form(l: usize) -> &'static CosineForm {
    &forms()[l - 1]
}

fn pi_mult(p: i64, q: u64) -> ThetaValue {
    ThetaValue::pi_multiple(p, q).unwrap()
}

fn rel_diff(a: &Float, b: &Float) -> Float {
    let prec = a.prec().max(b.prec());
    let scale = Float::with_val(prec, b.abs_ref()).max(&Float::with_val(prec, 1));
    Float::with_val(prec, a - b).abs() / scale
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn exact_vs_closed_form() -> Outcome {
    let c = PrecisionContext::new(50).unwrap();
    let tol = c.tolerance(5);
    for l in 1..=24 {
        for p in 0..=3i64 {
            let theta = pi_mult(p, 3);
            let want = exact_special_value(l, p).map_err(|e| e.to_string())?;
            let f = form(l);
            if f.exact_at_pi_third(p) != want {
                return Err(format!("L={l} p={p}: exact values differ"));
            }
            let got = f.eval(&theta, &c);
            let ok = if want.is_zero() {
                got.is_zero()
            } else {
                let w = want.to_float(c.bits());
                Float::with_val(c.bits(), &got - &w).abs() / w.abs() < tol
            };
            if !ok {
                return Err(format!("L={l} p={p}: numeric value off"));
            }
        }
    }
    Ok("L <= 24, p = 0..3".into())
}

fn oracle_equivalence() -> Outcome {
    let c = PrecisionContext::new(40).unwrap();
    let grid = [
        pi_mult(0, 1),
        pi_mult(1, 6),
        pi_mult(1, 4),
        pi_mult(1, 3),
        pi_mult(1, 2),
        pi_mult(2, 3),
        pi_mult(1, 1),
        ThetaValue::radians(c.float(0.7)),
        ThetaValue::radians(c.float(-2.1)),
    ];
    let mut worst = c.float(0);
    for l in 1..=4 {
        let half = Rational::from((l as i64, 2u64));
        for theta in &grid {
            let (re, im) = path_weight_oracle(l, theta, &c).map_err(|e| e.to_string())?;
            // det(B + e^{i theta} I) = e^{i theta L / 2} D(L, theta)
            let d = form(l).eval(theta, &c);
            let re_want = Float::with_val(c.bits(), &d * theta.cos_scaled(&half, 0, c.bits()));
            let im_want = Float::with_val(c.bits(), &d * theta.cos_scaled(&half, 3, c.bits()));
            worst = worst.max(&rel_diff(&re, &re_want)).max(&rel_diff(&im, &im_want));
        }
    }
    check(worst < c.tolerance(5), format!("worst deviation {:.2e}", worst.to_f64()))
}

fn main_result_convergence() -> Outcome {
    let c = PrecisionContext::new(60).unwrap();
    let params = AsymptoticParams::new(6, 7).unwrap();
    let mut details = Vec::new();
    let mut ok = true;
    for (name, theta) in [("0", pi_mult(0, 1)), ("pi/2", pi_mult(1, 2)), ("2pi/3", pi_mult(2, 3))] {
        let errs: Vec<Float> = (8..=32usize)
            .map(|l| {
                let asym = d_asym(l, &theta, &params, &c).unwrap();
                relative_error(&asym.value, &form(l).eval(&theta, &c))
            })
            .collect();
        let monotone = errs.windows(2).all(|w| w[1] < w[0]);
        let (first, last) = (errs[0].to_f64(), errs[errs.len() - 1].to_f64());
        let factor = first / last;
        ok &= monotone && factor >= 1e6 && last < 1e-10;
        details.push(format!("theta={name}: {first:.1e} -> {last:.1e}"));
    }
    check(ok, details.join(", "))
}

/// Coefficients a_0..a_{n-1} of sum_j a_j x^j through the points (x_i, y_i).
fn polynomial_fit(xs: &[Float], ys: &[Float]) -> Vec<Float> {
    let n = xs.len();
    let prec = ys[0].prec();
    let mut m: Vec<Vec<Float>> = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let mut row: Vec<Float> = Vec::with_capacity(n + 1);
            let mut p = Float::with_val(prec, 1);
            for _ in 0..n {
                row.push(p.clone());
                p *= x;
            }
            row.push(y.clone());
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&a, &b| m[a][col].clone().abs().total_cmp(&m[b][col].clone().abs())).unwrap();
        m.swap(col, pivot);
        for r in col + 1..n {
            let f = Float::with_val(prec, &m[r][col] / &m[col][col]);
            for k in col..=n {
                let t = Float::with_val(prec, &m[col][k] * &f);
                m[r][k] -= t;
            }
        }
    }
    let mut out = vec![Float::with_val(prec, 0); n];
    for r in (0..n).rev() {
        let mut acc = m[r][n].clone();
        for k in r + 1..n {
            acc -= Float::with_val(prec, &m[r][k] * &out[k]);
        }
        out[r] = acc / &m[r][r];
    }
    out
}

fn series_coefficients() -> Outcome {
    let c = PrecisionContext::new(120).unwrap();
    let params = AsymptoticParams::default();
    let mut details = Vec::new();
    for (which, want) in [
        (SpecialPoint::Theta0, Rational::from((127, 5184))),
        (SpecialPoint::Theta2Pi3, Rational::from((7, 576))),
        (SpecialPoint::ThetaPi, Rational::from((-8, 81))),
    ] {
        let symbolic = symbolic_phi_series(which, 1).map_err(|e| e.to_string())?;
        if symbolic[1] != want {
            return Err(format!("{which}: symbolic coefficient {} != {want}", symbolic[1]));
        }
        // phi_asym / (C L^power) = sum_j a_j L^(-2j), sampled at real L
        let leading = special_leading_constant(which, &c).map_err(|e| e.to_string())?;
        let (xs, ys): (Vec<Float>, Vec<Float>) = (0..14)
            .map(|i| {
                let l = c.float(400 + 50 * i);
                let phi = phi_asym(&l, &which.theta(), Parity::Even, &params, &c).unwrap();
                let power = (Float::with_val(c.bits(), l.ln_ref()) * which.l_exponent()).exp();
                let y = phi / Float::with_val(c.bits(), &leading * &power);
                (Float::with_val(c.bits(), l.square_ref()).recip(), y)
            })
            .unzip();
        let a = polynomial_fit(&xs, &ys);
        let err = Float::with_val(c.bits(), &a[1] - Float::with_val(c.bits(), &want)).abs();
        if err > 1e-20 {
            return Err(format!("{which}: fitted coefficient off by {:.2e}", err.to_f64()));
        }
        details.push(format!("{which} {want} (fit {:.1e})", err.to_f64()));
    }
    Ok(details.join(", "))
}

struct Target {
    name: &'static str,
    value: fn(&PrecisionContext) -> Float,
    basis: fn(&PrecisionContext) -> Vec<NamedValue>,
    solution: &'static [(i64, i64)],
}

fn over_pi(c: &PrecisionContext, v: Float, power: u32) -> Float {
    let pi = constant(NamedConstant::Pi, c).unwrap();
    v / Float::with_val(c.bits(), (&pi).pow(power))
}

fn gamma_pi(c: &PrecisionContext, power: u32) -> NamedValue {
    NamedValue::new("gamma", over_pi(c, constant(NamedConstant::EulerGamma, c).unwrap(), power))
}

fn log_pi(c: &PrecisionContext, k: u32, power: u32) -> NamedValue {
    NamedValue::new(format!("log{k}"), over_pi(c, c.float(k).ln(), power))
}

fn targets() -> [Target; 4] {
    [
        Target {
            name: "A0'(pi/3)",
            value: |c| log_deriv_a0(&pi_mult(1, 3), 1, c).unwrap(),
            basis: |c| vec![gamma_pi(c, 1), log_pi(c, 2, 1)],
            solution: &[(-1, 2), (-1, 1)],
        },
        Target {
            name: "A0'/A0(2pi/3)",
            value: |c| log_deriv_a0(&pi_mult(2, 3), 1, c).unwrap(),
            basis: |c| vec![gamma_pi(c, 1), log_pi(c, 3, 1)],
            solution: &[(-1, 1), (-3, 2)],
        },
        Target {
            name: "A0'/A0(pi)",
            value: |c| log_deriv_a0(&pi_mult(1, 1), 1, c).unwrap(),
            basis: |c| vec![gamma_pi(c, 1), log_pi(c, 2, 1), log_pi(c, 3, 1)],
            solution: &[(-3, 2), (-3, 1), (-3, 2)],
        },
        Target {
            name: "A0''(0)/A0(0)",
            value: |c| log_deriv_a0(&pi_mult(0, 1), 2, c).unwrap(),
            basis: |c| {
                let third = |k: u32| Float::with_val(c.bits(), Rational::from((k, 3u32)));
                vec![
                    NamedValue::new("1", over_pi(c, c.float(1), 2)),
                    gamma_pi(c, 2),
                    log_pi(c, 3, 2),
                    NamedValue::new("psi1(1/3)", over_pi(c, polygamma(1, &third(1), c).unwrap(), 2)),
                    NamedValue::new("psi1(2/3)", over_pi(c, polygamma(1, &third(2), c).unwrap(), 2)),
                ]
            },
            solution: &[(-3, 2), (-3, 2), (-3, 2), (1, 6), (-1, 6)],
        },
    ]
}

fn constant_recognition() -> Outcome {
    let lo = PrecisionContext::new(40).unwrap();
    let hi = PrecisionContext::new(50).unwrap();
    for t in targets() {
        let outcome = find_relation(&(t.value)(&lo), &(t.basis)(&lo), 40).map_err(|e| e.to_string())?;
        let cand = outcome.found().ok_or_else(|| format!("{}: no relation found", t.name))?;
        let want: Vec<Rational> = t.solution.iter().map(|&(n, d)| Rational::from((n, d))).collect();
        if cand.solution() != want {
            return Err(format!("{}: recovered {:?}", t.name, cand.solution()));
        }
        let ys: Vec<Float> = (t.basis)(&hi).into_iter().map(|v| v.value).collect();
        if !cand.verify(&(t.value)(&hi), &ys, 50) {
            return Err(format!("{}: relation fails at 50 digits", t.name));
        }
    }
    Ok("four relations recovered at 40 digits, verified at 50".into())
}

fn zero_sum_identity() -> Outcome {
    let c = PrecisionContext::new(60).unwrap();
    let (lhs, rhs) = zero_sum_check(4, &pi_mult(0, 1), &c).map_err(|e| e.to_string())?;
    let diff = rel_diff(&lhs, &rhs);
    check(diff < pow10(-40, c.bits()), format!("lhs {:.12e}, difference {:.1e}", lhs.to_f64(), diff.to_f64()))
}

fn extraction_closed_loop() -> Outcome {
    let c = PrecisionContext::new(50).unwrap();
    let theta = pi_mult(1, 4);
    let mut synthetic = FitModel::new(theta.clone(), 0);
    synthetic.k_terms = 6;
    let ls: Vec<usize> = (40..=160).step_by(4).collect();
    let fit = fit_amplitudes(&ls, &synthetic, &SyntheticData::default(), &c).map_err(|e| e.to_string())?;
    let a0 = amplitude_a0(&theta, &c).map_err(|e| e.to_string())?;
    let syn_err = Float::with_val(c.bits(), &fit.leading().value - &a0).abs() / a0;
    if syn_err > 1e-10 {
        return Err(format!("synthetic A0 off by {:.1e}", syn_err.to_f64()));
    }

    let model = FitModel::new(pi_mult(1, 3), 1);
    let needed = model.terms(c.bits() * 2).map_err(|e| e.to_string())?.len() + 2;
    let ls: Vec<usize> = (2..=MAX_L).rev().step_by(2).take(needed).collect();
    let data = ExactData::new(ls.iter().map(|&l| form(l).clone()).collect());
    let fit = fit_amplitudes(&ls, &model, &data, &c).map_err(|e| e.to_string())?;
    let v = fit.leading().value.to_f64();
    check(
        (v + 0.31250).abs() <= 1e-5,
        format!("synthetic A0 rel. error {:.1e}; A0'(pi/3) fit {v:.10} ({} stable digits)", syn_err.to_f64(), fit.stability),
    )
}

fn loop_observables() -> Outcome {
    let c = PrecisionContext::new(40).unwrap();
    let (mean, var) = loop_moments_exact(form(2)).map_err(|e| e.to_string())?;
    if mean != Rational::from((1, 4)) || var != Rational::from((3, 16)) {
        return Err(format!("L=2 moments {mean}, {var}"));
    }
    // least-squares slope of ln |mean exact - mean asym| against ln L
    let points: Vec<(f64, f64)> = (8..=MAX_L)
        .step_by(2)
        .map(|l| {
            let exact = Float::with_val(c.bits(), &loop_moments_exact(form(l)).unwrap().0);
            let asym = mean_loops_asym(l, Parity::Even, &c).unwrap();
            ((l as f64).ln(), Float::with_val(c.bits(), &exact - &asym).abs().to_f64().ln())
        })
        .collect();
    let n = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let slope = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / points.iter().map(|(x, _)| (x - mx).powi(2)).sum::<f64>();
    let prefactor = wrap_prefactor(Parity::Even, &c).map_err(|e| e.to_string())?;
    let pre_err = (prefactor.to_f64() - 0.81099753).abs();
    check(
        (slope + 2.0).abs() <= 0.5 && pre_err < 5e-9,
        format!("decay exponent {:.3}, prefactor {:.10}", -slope, prefactor.to_f64()),
    )
}

fn special_function_suite() -> Outcome {
    for d in [30, 60] {
        if let Some(msg) = common::special_function_suite(d) {
            return Err(msg);
        }
    }
    Ok("digits 30 and 60".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("exact vs closed form", exact_vs_closed_form),
        ("path oracle equivalence", oracle_equivalence),
        ("asymptotic convergence", main_result_convergence),
        ("series coefficients", series_coefficients),
        ("constant recognition", constant_recognition),
        ("zero-sum identity", zero_sum_identity),
        ("extraction closed loop", extraction_closed_loop),
        ("loop observables", loop_observables),
        ("special-function suite", special_function_suite),
    ];
    forms();
    let results: Vec<(Outcome, f64)> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|(_, f)| {
                s.spawn(move || {
                    let start = Instant::now();
                    let out = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
                    (out, start.elapsed().as_secs_f64())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut failed = Vec::new();
    for (i, ((name, _), (out, secs))) in criteria.iter().zip(&results).enumerate() {
        let (tag, detail) = match out {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed.push(i + 1);
                ("FAIL", d)
            }
        };
        println!("criterion {}: {tag} {name} [{secs:.1}s] {detail}", i + 1);
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
