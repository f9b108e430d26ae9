mod common;

use pascal_charpoly::mpnum::{
    gamma_fn, hurwitz_zeta, ln_gamma, log_barnes_g, polygamma, NamedConstant, PrecisionContext, SignedLog,
};
use pascal_charpoly::mpnum::constant;
use proptest::prelude::*;
use rug::Float;

#[test]
fn suite_at_30_and_60_digits() {
    for d in [30, 60] {
        if let Some(msg) = common::special_function_suite(d) {
            panic!("{msg}");
        }
    }
}

#[test]
fn values_are_bitwise_reproducible() {
    let ctx = PrecisionContext::new(45).unwrap();
    let z = ctx.float(3.25);
    assert_eq!(log_barnes_g(&z, &ctx).unwrap(), log_barnes_g(&z, &ctx).unwrap());
    assert_eq!(polygamma(2, &z, &ctx).unwrap(), polygamma(2, &z, &ctx).unwrap());
    let a = constant(NamedConstant::ZetaPrimeMinus1, &ctx).unwrap();
    let b = constant(NamedConstant::ZetaPrimeMinus1, &ctx).unwrap();
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn barnes_recurrence(z in 0.05f64..30.0) {
        let ctx = PrecisionContext::new(30).unwrap();
        let z = ctx.float(z);
        let lhs = log_barnes_g(&Float::with_val(ctx.bits(), &z + 1u32), &ctx).unwrap();
        let rhs = ln_gamma(&z, &ctx).unwrap() + log_barnes_g(&z, &ctx).unwrap();
        let scale = Float::with_val(ctx.bits(), lhs.abs_ref()).max(&ctx.float(1));
        prop_assert!(Float::with_val(ctx.bits(), &lhs - &rhs).abs() / scale < ctx.tolerance(3));
    }

    #[test]
    fn gamma_reflection(x in 0.05f64..0.95) {
        // Gamma(x) Gamma(1 - x) = pi / sin(pi x)
        let ctx = PrecisionContext::new(30).unwrap();
        let x = ctx.float(x);
        let one_minus = Float::with_val(ctx.bits(), 1u32 - &x);
        let prod = gamma_fn(&x, &ctx).unwrap() * gamma_fn(&one_minus, &ctx).unwrap();
        let pi = Float::with_val(ctx.bits(), rug::float::Constant::Pi);
        let want = Float::with_val(ctx.bits(), &pi / (Float::with_val(ctx.bits(), &pi * &x).sin()));
        prop_assert!(Float::with_val(ctx.bits(), &prod - &want).abs() / want < ctx.tolerance(3));
    }

    #[test]
    fn trigamma_is_hurwitz_zeta(z in 0.1f64..12.0) {
        let ctx = PrecisionContext::new(30).unwrap();
        let z = ctx.float(z);
        let a = polygamma(1, &z, &ctx).unwrap();
        let b = hurwitz_zeta(2, &z, &ctx).unwrap();
        prop_assert!(Float::with_val(ctx.bits(), &a - &b).abs() / a < ctx.tolerance(3));
    }

    #[test]
    fn signed_log_product(x in -50.0f64..50.0, y in -50.0f64..50.0) {
        prop_assume!(x.abs() > 1e-3 && y.abs() > 1e-3);
        let ctx = PrecisionContext::new(20).unwrap();
        let (fx, fy) = (ctx.float(x), ctx.float(y));
        let p = SignedLog::from_float(&fx).mul(&SignedLog::from_float(&fy)).to_float();
        let want = Float::with_val(ctx.bits(), &fx * &fy);
        prop_assert!(Float::with_val(ctx.bits(), &p - &want).abs() / want.abs() < ctx.tolerance(2));
    }
}
