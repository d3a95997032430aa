use rayon::prelude::*;
use rug::Float;

use crate::bounds::{AsymptoticBound, StepBoundTable};
use crate::error::{Error, Result};
use crate::numerics::{Enclosure, XReal};

/// A row whose step value is not certified below the curve.
#[derive(Clone, Debug)]
pub struct Violation {
    pub row: usize,
    /// Start of the checked span (the row start clipped to the range).
    pub span_lo: Enclosure,
    /// End of the checked span (the next row, or the range end).
    pub span_hi: Enclosure,
    pub step: XReal,
    /// Lower bound for the curve's minimum over the span.
    pub curve_min: XReal,
}

/// Outcome of comparing a step table against a curve on a `log x` range.
#[derive(Clone, Debug)]
pub struct DominanceReport {
    /// The step function lies below the curve on the whole range.
    pub holds: bool,
    pub first_violation: Option<Violation>,
    pub violations: Vec<Violation>,
    /// The weaker check: each step value against the curve at its row's left
    /// endpoint only.
    pub left_endpoint_holds: bool,
    pub rows_checked: usize,
    /// Part of the range below the first table row, which no row covers.
    pub uncovered_prefix: Option<(Enclosure, Enclosure)>,
}

/// Checks `step(L) ≤ curve(L)` for `L ∈ [lo, hi]`.
///
/// The curve `A(L/R)^B e^{−C√(L/R)}` is unimodal in `L`, so its minimum over
/// a row's span is at one of the two ends; every row is compared against that
/// minimum, rounded down.
pub fn dominates(table: &StepBoundTable, curve: &AsymptoticBound, lo: &Enclosure, hi: &Enclosure, prec: u32) -> Result<DominanceReport> {
    if !lo.certainly_lt(hi) {
        return Ok(DominanceReport {
            holds: true,
            first_violation: None,
            violations: vec![],
            left_endpoint_holds: true,
            rows_checked: 0,
            uncovered_prefix: None,
        });
    }
    if curve.b() < &0 {
        return Err(Error::Invalid("dominance needs B >= 0".into()));
    }
    let rows = table.rows();
    let uncovered_prefix = if lo.certainly_lt(table.first_log_x()) {
        Some((lo.clone(), table.first_log_x().clone()))
    } else {
        None
    };
    let first = match table.index_at(lo) {
        Ok(i) => i,
        Err(_) => 0,
    };
    let spans: Vec<(usize, Enclosure, Enclosure)> = (first..rows.len())
        .map_while(|i| {
            let start = if i == first && uncovered_prefix.is_none() { lo.max(&rows[i].log_x) } else { rows[i].log_x.clone() };
            if !start.certainly_lt(hi) {
                return None;
            }
            let end = match rows.get(i + 1) {
                Some(next) if next.log_x.certainly_lt(hi) => next.log_x.clone(),
                _ => hi.clone(),
            };
            Some((i, start, end))
        })
        .collect();
    let checked: Vec<(Option<Violation>, bool)> = spans
        .par_iter()
        .map(|(i, start, end)| {
            let at_start = curve.eval(start, prec)?;
            let at_end = curve.eval(end, prec)?;
            let min_lo = at_start.lo().clone().min(at_end.lo());
            let step = &rows[*i].eps;
            let left_ok = step <= at_start.lo();
            let violation = (step > &min_lo).then(|| Violation {
                row: *i,
                span_lo: start.clone(),
                span_hi: end.clone(),
                step: rows[*i].eps_up(),
                curve_min: Enclosure::point(Float::with_val(prec, &min_lo)).lower(),
            });
            Ok((violation, left_ok))
        })
        .collect::<Result<_>>()?;
    let violations: Vec<Violation> = checked.iter().filter_map(|(v, _)| v.clone()).collect();
    let left_endpoint_holds = checked.iter().all(|(_, ok)| *ok) && uncovered_prefix.is_none();
    Ok(DominanceReport {
        holds: violations.is_empty() && uncovered_prefix.is_none(),
        first_violation: violations.first().cloned(),
        violations,
        left_endpoint_holds,
        rows_checked: checked.len(),
        uncovered_prefix,
    })
}
