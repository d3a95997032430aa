use rayon::prelude::*;
use rug::Float;
use serde::Serialize;

use super::sieve::{PrimeStore, CHECKPOINT_STRIDE};
use crate::bounds::Kind;
use crate::error::{Error, Result};
use crate::numerics::{li_moderate, Enclosure};

/// A jump interval `[lo, hi]` on which the error may exceed the bound.
#[derive(Clone, Debug, Serialize)]
pub struct GapViolation {
    pub lo: u64,
    pub hi: u64,
    /// Upper bound for the supremum of the normalised error over the interval.
    pub error_sup: f64,
    /// Lower bound for the infimum of the bound over the interval.
    pub bound_inf: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointwiseReport {
    pub kind: Kind,
    pub x_max: u64,
    pub gaps_checked: u64,
    /// Largest `error_sup / bound_inf` seen, to double precision.
    pub max_ratio: f64,
    /// Largest `error_sup` seen, an upper bound for the normalised error on `[2, x_max]`.
    pub max_error: f64,
    pub violations: Vec<GapViolation>,
}

impl PointwiseReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A bound `ε(x)` given on `log x`; it receives an enclosure of the `log x`
/// range of a whole gap and must return an enclosure of `ε` over that range.
pub type BoundFn<'a> = dyn Fn(&Enclosure) -> Result<Enclosure> + Sync + 'a;

const PREC: u32 = 128;
const SPLITS: u64 = 64;

fn at(x: &Float) -> Enclosure {
    Enclosure::point(Float::with_val(PREC.max(x.prec()), x))
}

/// `sup ln x / x` over `[a, b]`, `a ≥ 2`: the function peaks at `e ∈ (2, 3)`.
fn sup_log_over_x(a: &Float, b: &Float) -> Result<Float> {
    let v = |x: &Float| -> Result<Float> { Ok(at(x).ln()?.div(&at(x))?.hi().clone()) };
    let e = Enclosure::from_i64(1, PREC).exp();
    Ok(if b <= e.lo() {
        v(b)?
    } else if a <= e.hi() {
        Enclosure::from_i64(-1, PREC).exp().hi().clone()
    } else {
        v(a)?
    })
}

fn log_range(a: &Float, b: &Float) -> Result<Enclosure> {
    Enclosure::new(at(a).ln()?.lo().clone(), at(b).ln()?.hi().clone())
}

/// `∫_a^b dt/ln t` between the midpoint and trapezoid rules; `1/ln t` is convex.
fn li_step(a: u64, b: u64, inv_log_a: &Enclosure, inv_log_b: &Enclosure) -> Result<Enclosure> {
    let h = Enclosure::from_u64(b - a, PREC);
    let m = Enclosure::point(Float::with_val(PREC, a + b) / 2u32);
    let lower = &h * &m.ln()?.recip()?;
    let upper = (&h * &(inv_log_a + inv_log_b)).mul_2exp(-1);
    Enclosure::new(lower.lo().clone(), upper.hi().clone())
}

#[derive(Default)]
struct BlockResult {
    gaps: u64,
    max_ratio: f64,
    max_error: f64,
    violations: Vec<GapViolation>,
}

fn ratio(sup: &Float, inf: &Float) -> f64 {
    if *inf > 0 {
        Float::with_val(53, sup / inf).to_f64()
    } else if *sup > 0 {
        f64::INFINITY
    } else {
        0.0
    }
}

/// A jump point `x = p^k` of the counting function.
struct Jump {
    x: u64,
    p: u64,
}

/// Checks `E_kind(x) ≤ ε(x)` for every `x ∈ [2, x_max]`.
///
/// `π`, `θ` and `ψ` are constant between consecutive jump points, so each
/// gap `[p, p')` is checked as a whole: the error's supremum is bounded from
/// its values at both ends and compared against the bound's infimum on the
/// gap. Gaps that fail for `π` are split into [`SPLITS`] pieces before a
/// violation is recorded.
pub fn verify_pointwise(store: &PrimeStore, kind: Kind, bound: &BoundFn<'_>, x_max: u64) -> Result<PointwiseReport> {
    if x_max > store.limit() {
        return Err(Error::AboveLimit { x: x_max.to_string(), limit: store.limit() });
    }
    if x_max < 2 {
        return Err(Error::Domain(format!("x_max = {x_max} is below 2")));
    }
    let blocks = x_max / CHECKPOINT_STRIDE + 1;
    let results: Vec<BlockResult> = (0..blocks)
        .into_par_iter()
        .map(|blk| check_block(store, kind, bound, x_max, blk * CHECKPOINT_STRIDE))
        .collect::<Result<_>>()?;
    let mut report = PointwiseReport { kind, x_max, gaps_checked: 0, max_ratio: 0.0, max_error: 0.0, violations: vec![] };
    for r in results {
        report.gaps_checked += r.gaps;
        report.max_ratio = report.max_ratio.max(r.max_ratio);
        report.max_error = report.max_error.max(r.max_error);
        report.violations.extend(r.violations);
    }
    Ok(report)
}

fn jumps(store: &PrimeStore, kind: Kind, lo: u64, hi: u64) -> Vec<Jump> {
    let mut out: Vec<Jump> = store.primes_between(lo, hi).into_iter().map(|p| Jump { x: p, p }).collect();
    if kind == Kind::Psi {
        out.extend(store.powers_between(lo, hi).map(|(pk, p)| Jump { x: pk, p }));
        out.sort_by_key(|j| j.x);
    }
    out
}

fn next_jump(store: &PrimeStore, kind: Kind, from: u64) -> Option<u64> {
    let p = store.next_prime(from);
    if kind == Kind::Psi {
        let q = store.powers_between(from, u64::MAX).next().map(|(pk, _)| pk);
        return match (p, q) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
    }
    p
}

fn check_block(store: &PrimeStore, kind: Kind, bound: &BoundFn<'_>, x_max: u64, s: u64) -> Result<BlockResult> {
    let e = (s + CHECKPOINT_STRIDE - 1).min(x_max);
    let js = jumps(store, kind, s.max(2), e);
    let Some(first) = js.first() else { return Ok(BlockResult::default()) };
    let follow = next_jump(store, kind, e + 1).unwrap_or(x_max).min(x_max);
    let counts = store.counts(first.x, PREC)?;
    let count = match kind {
        Kind::Pi => Enclosure::from_u64(counts.pi, PREC),
        Kind::Theta => counts.theta,
        Kind::Psi => counts.psi,
    };
    let end_of = |i: usize| js.get(i).map(|j| j.x).unwrap_or(follow).max(js[i - 1].x);

    if kind != Kind::Pi {
        let c = store.counts(js.last().unwrap().x, PREC)?;
        let count_last = if kind == Kind::Theta { c.theta } else { c.psi };
        let (lo_x, hi_x) = (Float::with_val(PREC, first.x), Float::with_val(PREC, end_of(js.len())));
        let err = (&count - &at(&hi_x)).hull(&(&count_last - &at(&lo_x))).abs();
        let sup = err.div(&at(&lo_x))?.hi().clone();
        let inf = bound(&log_range(&lo_x, &hi_x)?)?.lo().clone();
        if sup <= inf {
            return Ok(BlockResult { gaps: js.len() as u64, max_ratio: ratio(&sup, &inf), max_error: sup.to_f64(), violations: vec![] });
        }
        return check_gaps(bound, &js, follow, count);
    }

    // π: whole block, then chunks of CHUNK jumps, then single gaps
    let li_at = |x: u64| li_moderate(&Enclosure::from_u64(x, PREC), PREC);
    let mut out = BlockResult::default();
    let mut pending = vec![(0usize, js.len())];
    let mut li_cache: Vec<(usize, Enclosure)> = vec![(0, li_at(first.x)?)];
    while let Some((i0, i1)) = pending.pop() {
        let li_a = match li_cache.iter().find(|(i, _)| *i == i0) {
            Some((_, l)) => l.clone(),
            None => li_at(js[i0].x)?,
        };
        let b = end_of(i1);
        let (lo_x, hi_x) = (Float::with_val(PREC, js[i0].x), Float::with_val(PREC, b));
        let li_b = li_at(b)?;
        li_cache.push((i1, li_b.clone()));
        let c0 = Enclosure::from_u64(counts.pi + i0 as u64, PREC);
        let c1 = Enclosure::from_u64(counts.pi + i1 as u64 - 1, PREC);
        let err = (&c0 - &li_b).hull(&(&c1 - &li_a)).abs();
        let sup = Float::with_val(PREC, err.hi() * &sup_log_over_x(&lo_x, &hi_x)?);
        let inf = bound(&log_range(&lo_x, &hi_x)?)?.lo().clone();
        if sup <= inf {
            out.gaps += (i1 - i0) as u64;
            out.max_ratio = out.max_ratio.max(ratio(&sup, &inf));
            out.max_error = out.max_error.max(sup.to_f64());
        } else if i1 - i0 > CHUNK {
            let mut k = i1;
            while k > i0 {
                let j = k.saturating_sub(CHUNK).max(i0);
                pending.push((j, k));
                k = j;
            }
        } else {
            let r = check_gaps_pi(bound, &js[i0..i1], b, counts.pi + i0 as u64, li_a)?;
            out.gaps += r.gaps;
            out.max_ratio = out.max_ratio.max(r.max_ratio);
            out.max_error = out.max_error.max(r.max_error);
            out.violations.extend(r.violations);
        }
    }
    out.violations.sort_by_key(|v| v.lo);
    Ok(out)
}

/// Number of jumps per second-level interval check.
const CHUNK: usize = 128;

/// Gap-by-gap check of `θ` or `ψ`; `count` is the value at `js[0]`.
fn check_gaps(bound: &BoundFn<'_>, js: &[Jump], follow: u64, mut count: Enclosure) -> Result<BlockResult> {
    let mut out = BlockResult::default();
    for (i, j) in js.iter().enumerate() {
        if i > 0 {
            count = &count + &Enclosure::from_u64(j.p, PREC).ln()?;
        }
        let a = j.x;
        let b = js.get(i + 1).map(|n| n.x).unwrap_or(follow).max(a);
        let gap_logs = log_range(&Float::with_val(PREC, a), &Float::with_val(PREC, b))?;
        let bound_inf = bound(&gap_logs)?.lo().clone();
        let at = |x: u64| -> Result<Float> { Ok((&count - &Enclosure::from_u64(x, PREC)).abs().div(&Enclosure::from_u64(x, PREC))?.hi().clone()) };
        let sup = at(a)?.max(&at(b)?);
        out.gaps += 1;
        out.max_ratio = out.max_ratio.max(ratio(&sup, &bound_inf));
        out.max_error = out.max_error.max(sup.to_f64());
        if sup > bound_inf {
            out.violations.push(GapViolation { lo: a, hi: b, error_sup: sup.to_f64(), bound_inf: bound_inf.to_f64() });
        }
    }
    Ok(out)
}

/// Gap-by-gap check of `π` on `js`, the last gap ending at `end`; `pi0` and
/// `li0` are `π` and `Li` at `js[0]`.
fn check_gaps_pi(bound: &BoundFn<'_>, js: &[Jump], end: u64, pi0: u64, li0: Enclosure) -> Result<BlockResult> {
    let mut out = BlockResult::default();
    let mut li_a = li0;
    let mut inv_log_a = Enclosure::from_u64(js[0].x, PREC).ln()?.recip()?;
    for (i, j) in js.iter().enumerate() {
        let count = Enclosure::from_u64(pi0 + i as u64, PREC);
        let a = j.x;
        let b = js.get(i + 1).map(|n| n.x).unwrap_or(end).max(a);
        let ln_b = Enclosure::from_u64(b, PREC).ln()?;
        let inv_log_b = ln_b.recip()?;
        let ln_a = inv_log_a.recip()?;
        let bound_inf = bound(&Enclosure::new(ln_a.lo().clone(), ln_b.hi().clone())?)?.lo().clone();
        let li_b = if b == a { li_a.clone() } else { &li_a + &li_step(a, b, &inv_log_a, &inv_log_b)? };
        let err = (&count - &li_a).abs().max(&(&count - &li_b).abs());
        let sup = Float::with_val(PREC, err.hi() * &sup_log_over_x(&Float::with_val(PREC, a), &Float::with_val(PREC, b))?);
        let (sup, r, ok) = if sup > bound_inf { split_pi_gap(&count, a, b, bound)? } else { (sup.clone(), ratio(&sup, &bound_inf), true) };
        out.gaps += 1;
        out.max_ratio = out.max_ratio.max(r);
        out.max_error = out.max_error.max(sup.to_f64());
        if !ok {
            out.violations.push(GapViolation { lo: a, hi: b, error_sup: sup.to_f64(), bound_inf: bound_inf.to_f64() });
        }
        inv_log_a = inv_log_b;
        li_a = li_b;
    }
    Ok(out)
}

/// Re-checks a `π` gap on [`SPLITS`] sub-pieces with `Li` evaluated
/// directly; returns the refined supremum, ratio and verdict.
fn split_pi_gap(count: &Enclosure, a: u64, b: u64, bound: &BoundFn<'_>) -> Result<(Float, f64, bool)> {
    let (a, b) = (Float::with_val(PREC, a), Float::with_val(PREC, b));
    let h = Float::with_val(PREC, &b - &a) / SPLITS as u32;
    let pts: Vec<Float> = (0..=SPLITS).map(|k| Float::with_val(PREC, &h * k as u32) + &a).collect();
    let (mut sup_max, mut ratio_max, mut ok) = (Float::new(PREC), 0f64, true);
    for w in pts.windows(2) {
        let (x, y) = (&w[0], &w[1]);
        let lx = li_moderate(&at(x), PREC)?;
        let ly = li_moderate(&at(y), PREC)?;
        let err = (count - &lx).abs().max(&(count - &ly).abs());
        let sup = Float::with_val(PREC, err.hi() * &sup_log_over_x(x, y)?);
        let inf = bound(&log_range(x, y)?)?.lo().clone();
        ok &= sup <= inf;
        ratio_max = ratio_max.max(ratio(&sup, &inf));
        sup_max = sup_max.max(&sup);
    }
    Ok((sup_max, ratio_max, ok))
}
