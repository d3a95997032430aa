use rug::Float;
use serde::Serialize;

use super::report::{Report, ReportRow};
use super::table_file::TableFile;
use crate::bounds::{parse_log_x, AsymptoticBound, ExactAnchor, Partition, StepBoundTable, StepRow};
use crate::conversions::{interval_bounds, AnchorDiscrepancy, ThetaIntegrals};
use crate::error::{Error, Result};
use crate::numerics::{Enclosure, XReal};

/// A row to regenerate, with the printed value to compare against if any.
#[derive(Clone, Debug)]
pub struct RegenTarget {
    pub label: String,
    pub printed: Option<String>,
}

impl RegenTarget {
    pub fn new(label: impl Into<String>, printed: Option<&str>) -> Self {
        RegenTarget { label: label.into(), printed: printed.map(str::to_string) }
    }
}

/// All rows of one value column of a printed table.
pub fn targets_from_table(file: &TableFile, column: usize) -> Vec<RegenTarget> {
    file.rows.iter().map(|r| RegenTarget::new(r.log_x.clone(), Some(&r.values[column]))).collect()
}

#[derive(Clone, Debug)]
pub struct RegenOptions {
    /// Every gap of the global grid is split into this many equal pieces.
    pub refinement: u32,
    /// Optional θ curve used where it beats the step table between rows.
    pub theta_asymptotic: Option<AsymptoticBound>,
    pub prec: u32,
}

impl Default for RegenOptions {
    fn default() -> Self {
        RegenOptions { refinement: 4, theta_asymptotic: None, prec: crate::numerics::DEFAULT_PRECISION }
    }
}

/// Relative window a regenerated value must fall in: `[p(1 − 10⁻²), p(1 + 10⁻³)]`.
pub const ABOVE_TOLERANCE: f64 = 1e-3;
pub const BELOW_TOLERANCE: f64 = 1e-2;

#[derive(Clone, Debug, Serialize)]
pub struct RegenRow {
    pub label: String,
    #[serde(skip)]
    pub log_x: Enclosure,
    #[serde(serialize_with = "ser_xreal")]
    pub value: XReal,
    pub printed: Option<String>,
    /// `value / printed − 1`, rounded to nearest.
    pub rel_diff: Option<f64>,
    pub within: Option<bool>,
}

fn ser_xreal<S: serde::Serializer>(x: &XReal, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_sci(6))
}

#[derive(Clone, Debug)]
pub struct Regenerated {
    pub table: StepBoundTable,
    pub rows: Vec<RegenRow>,
    pub grid_points: usize,
}

impl Regenerated {
    /// Rows whose printed value lies outside the tolerance window.
    pub fn mismatches(&self) -> Vec<&RegenRow> {
        self.rows.iter().filter(|r| r.within == Some(false)).collect()
    }

    pub fn report(&self, title: &str) -> Report {
        let mut report = Report::new(title, &["log_x", "regenerated", "printed", "rel_diff", "ok"]);
        for r in &self.rows {
            report.push(ReportRow {
                cells: vec![
                    r.label.clone(),
                    r.value.to_sci(5),
                    r.printed.clone().unwrap_or_else(|| "-".into()),
                    r.rel_diff.map(|d| format!("{d:+.3e}")).unwrap_or_else(|| "-".into()),
                    match r.within {
                        Some(true) => "yes".into(),
                        Some(false) => "NO".into(),
                        None => "-".into(),
                    },
                ],
                ok: r.within != Some(false),
            });
        }
        report
    }
}

fn sort_dedup(mut pts: Vec<Enclosure>) -> Vec<Enclosure> {
    pts.sort_by(|a, b| a.lo().partial_cmp(b.lo()).expect("finite abscissae"));
    let mut out: Vec<Enclosure> = Vec::with_capacity(pts.len());
    for p in pts {
        match out.last() {
            Some(q) if q.overlaps(&p) => {}
            _ => out.push(p),
        }
    }
    out
}

/// Regenerates numerical π bounds at `targets` (increasing) from a θ step table and an anchor.
///
/// One grid runs from `log x₀` through every θ row and every target up to the
/// largest target, and each gap is split `refinement`-fold. The bound at a
/// target at grid index `k` is the stitched maximum of the per-piece bounds
/// from `k` on, the last piece running to infinity.
pub fn regenerate_pi_table(theta: &StepBoundTable, anchor: &ExactAnchor, targets: &[RegenTarget], opts: &RegenOptions) -> Result<Regenerated> {
    let prec = opts.prec;
    if targets.is_empty() {
        return Err(Error::EmptyTable);
    }
    let l0 = anchor.log_x0.clone();
    let target_pts = targets.iter().map(|t| parse_log_x(&t.label, prec)).collect::<Result<Vec<_>>>()?;
    if let Some(t) = target_pts.iter().find(|t| t.certainly_lt(&l0)) {
        return Err(Error::PartitionNotCovered(format!("target log x = {t} lies below the anchor {l0}")));
    }
    let top = target_pts.iter().skip(1).fold(target_pts[0].clone(), |m, t| if m.certainly_lt(t) { t.clone() } else { m });
    let mut coarse: Vec<Enclosure> = theta
        .rows()
        .iter()
        .map(|r| r.log_x.clone())
        .filter(|p| l0.certainly_lt(p) && p.certainly_lt(&top))
        .collect();
    coarse.extend(target_pts.iter().filter(|p| l0.certainly_lt(p)).cloned());
    coarse.push(l0.clone());
    let coarse = sort_dedup(coarse);
    let grid = Partition::new(coarse)?.refine(opts.refinement)?;

    let eps_table = theta.refine_with_asymptotic(grid.points(), opts.theta_asymptotic.as_ref(), prec)?;
    let integrals = ThetaIntegrals::new(&eps_table, &grid, prec)?;
    let disc = AnchorDiscrepancy::from_anchor(anchor, prec)?;
    let pieces = interval_bounds(&disc, &integrals, 0, prec)?;
    let mut suffix = pieces.clone();
    for j in (0..suffix.len().saturating_sub(1)).rev() {
        suffix[j] = suffix[j].max(&suffix[j + 1]);
    }

    let mut rows = Vec::with_capacity(targets.len());
    let mut table_rows = Vec::with_capacity(targets.len());
    for (t, p) in targets.iter().zip(&target_pts) {
        let k = grid
            .points()
            .iter()
            .position(|g| g.overlaps(p))
            .ok_or_else(|| Error::PartitionNotCovered(format!("target {} is not a grid point", t.label)))?;
        let value = suffix[k].upper();
        let (rel_diff, within) = match &t.printed {
            Some(s) => {
                let printed = Float::with_val(prec, Float::parse(s).map_err(|e| Error::Invalid(format!("`{s}`: {e}")))?);
                let v = value.value();
                let ratio = Float::with_val(prec, v / &printed);
                let hi = Float::with_val(prec, &printed * (1.0 + ABOVE_TOLERANCE));
                let lo = Float::with_val(prec, &printed * (1.0 - BELOW_TOLERANCE));
                (Some(ratio.to_f64() - 1.0), Some(*v <= hi && *v >= lo))
            }
            None => (None, None),
        };
        table_rows.push(StepRow::new(p.clone(), value.value().clone(), format!("regenerated, refinement {}", opts.refinement)));
        rows.push(RegenRow { label: t.label.clone(), log_x: p.clone(), value, printed: t.printed.clone(), rel_diff, within });
    }
    Ok(Regenerated { table: StepBoundTable::new(crate::bounds::Kind::Pi, table_rows)?, rows, grid_points: grid.len() })
}

/// Regenerated rows as a table file, values rounded up to `sig` digits.
pub fn regenerated_table_file(regen: &Regenerated, source: &str, sig: usize) -> Result<TableFile> {
    let labels: Vec<String> = regen.rows.iter().map(|r| r.label.clone()).collect();
    TableFile::from_step_table(&regen.table, &labels, source, sig)
}
