use std::collections::HashSet;

use rug::{Float, Rational};

use super::theta::ThetaValue;
use crate::error::{Error, Result};
use crate::mpnum::PrecisionContext;

/// Enumeration becomes impractical beyond this size.
pub const MAX_ENUMERATION_SIZE: usize = 5;

type Point = (u32, u32);

/// All right/down lattice paths from (0, k) to (k, 0), as vertex lists.
fn paths_from(k: u32) -> Vec<Vec<Point>> {
    fn walk(at: Point, k: u32, trail: &mut Vec<Point>, out: &mut Vec<Vec<Point>>) {
        trail.push(at);
        if at == (k, 0) {
            out.push(trail.clone());
        } else {
            if at.0 < k {
                walk((at.0 + 1, at.1), k, trail, out);
            }
            if at.1 > 0 {
                walk((at.0, at.1 - 1), k, trail, out);
            }
        }
        trail.pop();
    }
    let mut out = Vec::new();
    walk((0, k), k, &mut Vec::new(), &mut out);
    out
}

/// Number of families of vertex-disjoint paths starting at exactly the
/// rows in `starts`.
fn count_families(starts: &[u32], all: &[Vec<Vec<Point>>], used: &mut HashSet<Point>) -> u64 {
    let Some((&k, rest)) = starts.split_first() else {
        return 1;
    };
    let mut total = 0;
    for path in &all[k as usize] {
        if path.iter().any(|p| used.contains(p)) {
            continue;
        }
        used.extend(path.iter().copied());
        total += count_families(rest, all, used);
        for p in path {
            used.remove(p);
        }
    }
    total
}

/// N_s: number of nonintersecting path configurations with s paths, over
/// all subsets of starting points (0, k), 0 <= k < L.
pub fn path_counts(l: usize) -> Result<Vec<u64>> {
    if l == 0 {
        return Err(Error::InvalidSize(0));
    }
    if l > MAX_ENUMERATION_SIZE {
        return Err(Error::EnumerationTooLarge(l));
    }
    let all: Vec<_> = (0..l as u32).map(paths_from).collect();
    let mut counts = vec![0u64; l + 1];
    for mask in 0u32..(1 << l) {
        let starts: Vec<u32> = (0..l as u32).filter(|k| mask & (1 << k) != 0).collect();
        counts[starts.len()] += count_families(&starts, &all, &mut HashSet::new());
    }
    Ok(counts)
}

/// sum over configurations of exp(i theta (L - s)), as (Re, Im).
pub fn path_weight_oracle(l: usize, theta: &ThetaValue, ctx: &PrecisionContext) -> Result<(Float, Float)> {
    let counts = path_counts(l)?;
    let prec = ctx.bits();
    let mut re = Float::with_val(prec, 0);
    let mut im = Float::with_val(prec, 0);
    for (s, n) in counts.iter().enumerate() {
        let power = Rational::from((l - s) as i64);
        re += theta.cos_scaled(&power, 0, prec) * *n;
        im += theta.cos_scaled(&power, 3, prec) * *n;
    }
    Ok((re, im))
}
