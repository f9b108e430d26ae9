//! Checks shared by the property tests and the acceptance suite.

#![allow(dead_code)]

use pascal_charpoly::mpnum::{
    agreeing_digits, barnes_g, constant_routes, gamma_fn, ln_gamma, log_barnes_g, polygamma, pow10, NamedConstant,
    PrecisionContext,
};
use rug::Float;

pub const RECURRENCE_GRID: [f64; 5] = [0.1, 0.5, 1.7, 7.3, 19.9];

/// Largest relative residual of G(z+1) = Gamma(z) G(z) and
/// Gamma(z+1) = z Gamma(z) over the grid, in log form.
pub fn recurrence_residual(ctx: &PrecisionContext) -> Float {
    let prec = ctx.bits();
    let mut worst = Float::with_val(prec, 0);
    for z in RECURRENCE_GRID {
        let z = ctx.float(z);
        let z1 = Float::with_val(prec, &z + 1u32);
        let lg1 = log_barnes_g(&z1, ctx).unwrap();
        let rhs = Float::with_val(prec, ln_gamma(&z, ctx).unwrap() + log_barnes_g(&z, ctx).unwrap());
        let scale = Float::with_val(prec, lg1.abs_ref()).max(&Float::with_val(prec, 1));
        worst = worst.max(&((lg1 - rhs).abs() / scale));

        let g1 = gamma_fn(&z1, ctx).unwrap();
        let g = gamma_fn(&z, ctx).unwrap() * &z;
        worst = worst.max(&(Float::with_val(prec, &g1 - &g).abs() / g1.abs()));

        // the signed route agrees with the log route on positive arguments
        let signed = barnes_g(&z, ctx).unwrap();
        assert_eq!(signed.sign, 1);
        worst = worst.max(&Float::with_val(prec, &signed.log_abs - log_barnes_g(&z, ctx).unwrap()).abs());
    }
    worst
}

/// Fewest digits on which the two evaluation routes of a named constant agree.
pub fn constant_route_agreement(ctx: &PrecisionContext) -> u32 {
    [NamedConstant::Pi, NamedConstant::EulerGamma, NamedConstant::Zeta3, NamedConstant::ZetaPrimeMinus1]
        .into_iter()
        .map(|c| {
            let (a, b) = constant_routes(c, ctx).unwrap();
            agreeing_digits(&a, &b, ctx.digits() + ctx.guard())
        })
        .min()
        .unwrap()
}

/// m-th derivative of ln Gamma at z by the centered (m+1)-point difference
/// on a 3x-precision evaluation.
fn ln_gamma_derivative_fd(m: u32, z: &Float, ctx: &PrecisionContext) -> Float {
    let wide = ctx.scaled(3);
    let prec = wide.bits();
    let h = pow10(-(ctx.digits() as i64) / 2, prec);
    let mut acc = Float::with_val(prec, 0);
    let mut binom = 1i64;
    for j in 0..=m {
        let offset = Float::with_val(prec, j as i64 * 2 - m as i64) / 2u32;
        let x = Float::with_val(prec, z + Float::with_val(prec, &offset * &h));
        let term = ln_gamma(&x, &wide).unwrap() * binom;
        if (m - j) % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
        binom = binom * (m - j) as i64 / (j + 1) as i64;
    }
    acc / h.pow(m)
}

use rug::ops::Pow;

/// Largest |polygamma(p, z) - finite difference| / max(1, |value|) for
/// p in 0..=2 over a small grid.
pub fn polygamma_fd_error(ctx: &PrecisionContext) -> Float {
    let prec = ctx.bits();
    let mut worst = Float::with_val(prec, 0);
    for z in [0.3, 1.0, 2.5, 9.75] {
        let z = ctx.float(z);
        for p in 0..=2u32 {
            let exact = polygamma(p, &z, ctx).unwrap();
            let fd = ln_gamma_derivative_fd(p + 1, &z, ctx);
            let scale = Float::with_val(prec, exact.abs_ref()).max(&Float::with_val(prec, 1));
            worst = worst.max(&(Float::with_val(prec, &exact - &fd).abs() / scale));
        }
    }
    worst
}

/// Fewest agreeing digits between values at d and 2d digits.
pub fn digit_doubling_agreement(digits: u32) -> u32 {
    let lo = PrecisionContext::new(digits).unwrap();
    let hi = PrecisionContext::new(2 * digits).unwrap();
    let values = |ctx: &PrecisionContext| {
        let z = ctx.float(1.7);
        vec![
            log_barnes_g(&z, ctx).unwrap(),
            ln_gamma(&z, ctx).unwrap(),
            polygamma(1, &z, ctx).unwrap(),
            constant_routes(NamedConstant::ZetaPrimeMinus1, ctx).unwrap().0,
        ]
    };
    values(&lo)
        .iter()
        .zip(values(&hi))
        .map(|(a, b)| agreeing_digits(a, &Float::with_val(a.prec(), &b), digits + lo.guard()))
        .min()
        .unwrap()
}

/// Criterion 9 at one precision: returns a failure description or None.
pub fn special_function_suite(digits: u32) -> Option<String> {
    let ctx = PrecisionContext::new(digits).unwrap();
    let rec = recurrence_residual(&ctx);
    if rec > ctx.tolerance(3) {
        return Some(format!("recurrence residual {:.3e} at {digits} digits", rec.to_f64()));
    }
    let routes = constant_route_agreement(&ctx);
    if routes < digits {
        return Some(format!("constant routes agree to {routes} of {digits} digits"));
    }
    let fd = polygamma_fd_error(&ctx);
    if fd > pow10(-(digits as i64) / 3, ctx.bits()) {
        return Some(format!("polygamma finite difference error {:.3e}", fd.to_f64()));
    }
    let doubling = digit_doubling_agreement(digits);
    if doubling < digits {
        return Some(format!("digit doubling keeps only {doubling} of {digits} digits"));
    }
    None
}
