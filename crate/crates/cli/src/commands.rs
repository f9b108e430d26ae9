use std::time::Instant;

use pascal_charpoly::asymptotics::{d_asym, phi_asym, relative_error, AsymptoticParams, Parity};
use pascal_charpoly::exact::{CharPolyCache, CosineForm, ThetaValue};
use pascal_charpoly::extraction::{fit_amplitudes, CachedExactData, FitModel, LhsMode};
use pascal_charpoly::intrel::{find_relation, NamedValue, RelationOutcome};
use pascal_charpoly::loop_observables::{loop_moments_exact, loop_stats_asym, loop_stats_exact};
use pascal_charpoly::mpnum::{constant, digits_to_bits, polygamma, NamedConstant, PrecisionContext};
use pascal_charpoly::special_products::{exact_special_value, loop_probabilities_from_form, phi_from_form};
use pascal_charpoly::{Error, Result};
use rug::{Float, Rational};

use crate::config::{CommandKind, LRange, RunConfig};
use crate::table::{Cell, Table};

fn rational_text(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

struct Env {
    ctx: PrecisionContext,
    cache: CharPolyCache,
    params: AsymptoticParams,
}

impl Env {
    fn new(c: &RunConfig) -> Result<Self> {
        Ok(Self {
            ctx: PrecisionContext::new(c.digits)?,
            cache: CharPolyCache::new(&c.cache_dir),
            params: AsymptoticParams::new(c.n_max, c.k_max)?,
        })
    }

    fn form(&self, l: usize) -> Result<CosineForm> {
        CosineForm::new(&self.cache.load_or_compute(l)?.0)
    }
}

fn theta(c: &RunConfig) -> Result<ThetaValue> {
    c.theta.as_deref().ok_or_else(|| Error::InvalidParams("missing theta".into()))?.parse()
}

fn range(c: &RunConfig) -> Result<LRange> {
    c.l.ok_or_else(|| Error::InvalidParams("missing L".into()))
}

pub fn run(c: &RunConfig) -> Result<Table> {
    let env = Env::new(c)?;
    match c.command {
        CommandKind::Charpoly => charpoly(c, &env),
        CommandKind::Eval => eval(c, &env),
        CommandKind::Compare => compare(c, &env),
        CommandKind::Special => special(c, &env),
        CommandKind::Extract => extract(c, &env),
        CommandKind::Relate => relate(c, &env),
        CommandKind::Loops => loops(c, &env),
        CommandKind::Probabilities => probabilities(c, &env),
    }
}

fn charpoly(c: &RunConfig, env: &Env) -> Result<Table> {
    let mut t = Table::new(&["L", "cached", "invariants", "digits_of_c_mid"]);
    for l in range(c)?.iter() {
        let start = Instant::now();
        let (record, hit) = env.cache.load_or_compute(l)?;
        record.validate()?;
        eprintln!("L={l} {} in {:.3}s", if hit { "cache hit" } else { "computed" }, start.elapsed().as_secs_f64());
        let mid = record.coeffs[l / 2].to_string().trim_start_matches('-').len();
        t.push(vec![Cell::Int(l as i64), Cell::Bool(hit), Cell::Text("ok".into()), Cell::Int(mid as i64)]);
    }
    Ok(t)
}

fn eval(c: &RunConfig, env: &Env) -> Result<Table> {
    let th = theta(c)?;
    let mut t = Table::new(&["L", "theta", "D", "phi"]);
    for l in range(c)?.iter() {
        let form = env.form(l)?;
        let d = form.eval(&th, &env.ctx);
        let phi = match phi_from_form(&form, &th, &env.ctx) {
            Ok(v) => Cell::Num(v),
            Err(Error::OddPole) => Cell::Text("pole".into()),
            Err(e) => return Err(e),
        };
        t.push(vec![Cell::Int(l as i64), Cell::Text(th.to_string()), Cell::Num(d), phi]);
    }
    Ok(t)
}

fn compare(c: &RunConfig, env: &Env) -> Result<Table> {
    let th = theta(c)?;
    let mut t = Table::new(&[
        "L",
        "sign_exact",
        "log_abs_D_exact",
        "sign_asym",
        "log_abs_D_asym",
        "rel_error",
        "last_pair",
        "phi_exact",
        "phi_asym",
        "exact_zero",
    ]);
    for l in range(c)?.iter() {
        if l < 2 {
            return Err(Error::InvalidParams("compare needs L >= 2".into()));
        }
        let form = env.form(l)?;
        let exact = form.eval(&th, &env.ctx);
        let asym = d_asym(l, &th, &env.params, &env.ctx)?;
        let sign = |x: i8| Cell::Int(x as i64);
        let exact_sign = if exact.is_zero() { 0 } else if exact.is_sign_negative() { -1 } else { 1 };
        let log_exact = if exact.is_zero() { Cell::Text("-inf".into()) } else { Cell::Num(Float::with_val(exact.prec(), exact.abs_ref()).ln()) };
        let log_asym = if asym.value.sign == 0 { Cell::Text("-inf".into()) } else { Cell::Num(asym.value.log_abs.clone()) };
        let both_zero = exact.is_zero() && asym.value.sign == 0;
        let err = if both_zero { Cell::Num(Float::new(64)) } else { Cell::Num(relative_error(&asym.value, &exact)) };
        let phi_e = match phi_from_form(&form, &th, &env.ctx) {
            Ok(v) => Cell::Num(v),
            Err(Error::OddPole) => Cell::Text("pole".into()),
            Err(e) => return Err(e),
        };
        let prec = env.ctx.bits();
        let phi_a = match phi_asym(&Float::with_val(prec, l as u32), &th, Parity::of(l), &env.params, &env.ctx) {
            Ok(v) => Cell::Num(v),
            Err(Error::OddPole) => Cell::Text("pole".into()),
            Err(e) => return Err(e),
        };
        t.push(vec![
            Cell::Int(l as i64),
            sign(exact_sign),
            log_exact,
            sign(asym.value.sign),
            log_asym,
            err,
            Cell::Num(asym.last_pair.clone()),
            phi_e,
            phi_a,
            Cell::Bool(both_zero),
        ]);
    }
    Ok(t)
}

fn special(c: &RunConfig, env: &Env) -> Result<Table> {
    let ps: Vec<i64> = match c.p {
        Some(p) => vec![p],
        None => (0..=3).collect(),
    };
    let mut t = Table::new(&["L", "p", "exact", "numeric", "matches"]);
    for l in range(c)?.iter() {
        let form = env.form(l)?;
        for &p in &ps {
            let exact = exact_special_value(l, p)?;
            let numeric = form.eval(&ThetaValue::pi_multiple(p, 3)?, &env.ctx);
            let matches = form.exact_at_pi_third(p) == exact;
            t.push(vec![Cell::Int(l as i64), Cell::Int(p), Cell::Text(exact.to_string()), Cell::Num(numeric), Cell::Bool(matches)]);
        }
    }
    Ok(t)
}

fn extract(c: &RunConfig, env: &Env) -> Result<Table> {
    let th = theta(c)?;
    let r = range(c)?;
    let order = c.order.unwrap_or(0);
    let mut model = FitModel::new(th, order);
    model.parity = Parity::of(r.end);
    model.mode = match c.mode.as_deref() {
        None | Some("derivative-of-scaled") => LhsMode::DerivativeOfScaled,
        Some("scaled-derivative") => LhsMode::ScaledDerivative,
        Some(m) => return Err(Error::InvalidParams(format!("unknown mode {m:?}"))),
    };
    if let Some(k) = c.k_terms {
        model.k_terms = k;
    }
    let terms = model.terms(digits_to_bits(2 * c.digits))?.len();
    let ls: Vec<usize> = r.iter().rev().filter(|&l| l >= 2 && Parity::of(l) == model.parity).take(terms + 2).collect();
    for &l in &ls {
        env.cache.load_or_compute(l)?;
    }
    let fit = fit_amplitudes(&ls, &model, &CachedExactData { cache: env.cache.clone() }, &env.ctx)?;
    let mut t = Table::new(&["term", "value", "stable_digits", "merged"]);
    for e in &fit.estimates {
        t.push(vec![Cell::Text(e.key()), Cell::Num(e.value.clone()), Cell::Int(e.stable_digits as i64), Cell::Text(e.merged.join(" "))]);
    }
    t.summary = vec![
        ("stability", Cell::Int(fit.stability as i64)),
        ("residual", Cell::Num(fit.residual.clone())),
        ("window", Cell::Text(fit.window.iter().map(usize::to_string).collect::<Vec<_>>().join(" "))),
    ];
    Ok(t)
}

/// Basis constant by name; "name/pi" divides by pi.
pub fn named_constant(name: &str, ctx: &PrecisionContext) -> Result<Float> {
    let prec = ctx.bits();
    if let Some(base) = name.strip_suffix("/pi") {
        return Ok(named_constant(base, ctx)? / constant(NamedConstant::Pi, ctx)?);
    }
    let third = |k: u32| Float::with_val(prec, k) / 3u32;
    Ok(match name {
        "1" => Float::with_val(prec, 1),
        "pi" => constant(NamedConstant::Pi, ctx)?,
        "gamma" => constant(NamedConstant::EulerGamma, ctx)?,
        "zeta3" => constant(NamedConstant::Zeta3, ctx)?,
        "zetaprime" => constant(NamedConstant::ZetaPrimeMinus1, ctx)?,
        "log2" => Float::with_val(prec, 2).ln(),
        "log3" => Float::with_val(prec, 3).ln(),
        "psi1_1_3" => polygamma(1, &third(1), ctx)?,
        "psi1_2_3" => polygamma(1, &third(2), ctx)?,
        _ => return Err(Error::Parse(format!("unknown constant {name:?}"))),
    })
}

fn relate(c: &RunConfig, env: &Env) -> Result<Table> {
    let basis_ctx = env.ctx.widened(20);
    let raw = c.x.as_deref().ok_or_else(|| Error::InvalidParams("missing x".into()))?;
    let parsed = Float::parse(raw).map_err(|e| Error::Parse(format!("bad x {raw:?}: {e}")))?;
    let x = Float::with_val(basis_ctx.bits(), parsed);
    let ys = c
        .consts
        .iter()
        .map(|n| Ok(NamedValue::new(n.clone(), named_constant(n, &basis_ctx)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut t = Table::new(&["status", "relation", "coefficients", "solution", "quality", "height"]);
    match find_relation(&x, &ys, c.digits)? {
        RelationOutcome::Found(cand) => {
            let coeffs = cand.coefficients.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(" ");
            let sol = cand.solution().iter().map(rational_text).collect::<Vec<_>>().join(" ");
            t.push(vec![
                Cell::Text("found".into()),
                Cell::Text(cand.to_string()),
                Cell::Text(coeffs),
                Cell::Text(sol),
                Cell::Num(cand.quality.clone()),
                Cell::Text(cand.height().to_string()),
            ]);
        }
        RelationOutcome::Rejected { best_tail, .. } => {
            t.push(vec![
                Cell::Text("rejected".into()),
                Cell::Text(String::new()),
                Cell::Text(String::new()),
                Cell::Text(String::new()),
                Cell::Text(String::new()),
                Cell::Text(best_tail.to_string()),
            ]);
        }
    }
    Ok(t)
}

fn loops(c: &RunConfig, env: &Env) -> Result<Table> {
    let mut t = Table::new(&[
        "L",
        "parity",
        "mean_exact",
        "var_exact",
        "mean",
        "var",
        "wrap_prob",
        "mean_asym",
        "var_asym",
        "wrap_prob_asym",
    ]);
    for l in range(c)?.iter() {
        if l < 2 {
            return Err(Error::InvalidParams("loops needs L >= 2".into()));
        }
        let form = env.form(l)?;
        let (mean, var) = loop_moments_exact(&form)?;
        let ex = loop_stats_exact(&form, &env.ctx)?;
        let asym = loop_stats_asym(l, &env.ctx)?;
        t.push(vec![
            Cell::Int(l as i64),
            Cell::Text(ex.parity.to_string()),
            Cell::Text(rational_text(&mean)),
            Cell::Text(rational_text(&var)),
            Cell::Num(ex.mean_n),
            Cell::Num(ex.var_n),
            Cell::Num(ex.wrap_prob),
            Cell::Num(asym.mean_n),
            Cell::Num(asym.var_n),
            Cell::Num(asym.wrap_prob),
        ]);
    }
    Ok(t)
}

fn probabilities(c: &RunConfig, env: &Env) -> Result<Table> {
    let mut t = Table::new(&["L", "m", "P"]);
    for l in range(c)?.iter() {
        let p = loop_probabilities_from_form(&env.form(l)?)?;
        for (m, q) in p.probs.iter().enumerate() {
            t.push(vec![Cell::Int(l as i64), Cell::Int(m as i64), Cell::Text(rational_text(q))]);
        }
    }
    Ok(t)
}
