use rug::float::Round;
use rug::Float;

use super::{AsymptoticBound, Kind};
use crate::error::{Error, Result};
use crate::numerics::{Enclosure, Rounding, XReal};

/// One row of a step table: `E_kind(x) ≤ eps` for every `x ≥ e^{log_x}`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepRow {
    pub log_x: Enclosure,
    /// Upper-rounded.
    pub eps: Float,
    pub provenance: String,
}

impl StepRow {
    pub fn new(log_x: Enclosure, eps: Float, provenance: impl Into<String>) -> Self {
        StepRow { log_x, eps, provenance: provenance.into() }
    }

    pub fn eps_up(&self) -> XReal {
        XReal::new(self.eps.clone(), Rounding::Up)
    }
}

/// Admissible numerical bound given as a step function of `log x`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepBoundTable {
    kind: Kind,
    rows: Vec<StepRow>,
}

impl StepBoundTable {
    /// Rows must be strictly increasing in `log_x`; the error names the
    /// offending (1-based) row.
    pub fn new(kind: Kind, rows: Vec<StepRow>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyTable);
        }
        for (i, w) in rows.windows(2).enumerate() {
            if !w[0].log_x.certainly_lt(&w[1].log_x) {
                return Err(Error::Order { line: i + 2 });
            }
        }
        if let Some(r) = rows.iter().find(|r| !(r.eps >= 0)) {
            return Err(Error::Invalid(format!("negative or NaN eps at log x = {}", r.log_x)));
        }
        Ok(StepBoundTable { kind, rows })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn rows(&self) -> &[StepRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn first_log_x(&self) -> &Enclosure {
        &self.rows[0].log_x
    }

    /// Index of the last row certainly at or below `log_x`.
    pub fn index_at(&self, log_x: &Enclosure) -> Result<usize> {
        let at_or_below = |r: &StepRow| r.log_x.hi() <= log_x.lo() || r.log_x == *log_x;
        let n = self.rows.partition_point(at_or_below);
        if n == 0 {
            return Err(Error::BelowTable {
                log_x: log_x.to_string(),
                first: self.rows[0].log_x.to_string(),
            });
        }
        Ok(n - 1)
    }

    /// `ε(log_x)`: the eps of the last row with `row.log_x ≤ log_x`.
    pub fn eval_step(&self, log_x: &Enclosure) -> Result<XReal> {
        Ok(self.rows[self.index_at(log_x)?].eps_up())
    }

    /// Rows whose eps exceeds that of the row before.
    pub fn non_monotone_rows(&self) -> Vec<usize> {
        self.rows.windows(2).enumerate().filter(|(_, w)| w[1].eps > w[0].eps).map(|(i, _)| i + 1).collect()
    }

    /// A finer table on `points`: at each point the smaller of the step value
    /// and, where `curve` is valid and already decreasing, the curve value.
    /// Both are valid for every larger `x`, hence so is their minimum.
    pub fn refine_with_asymptotic(&self, points: &[Enclosure], curve: Option<&AsymptoticBound>, prec: u32) -> Result<StepBoundTable> {
        if let Some(c) = curve {
            if c.kind() != self.kind {
                return Err(Error::Invalid(format!("a {} curve cannot refine a {} table", c.kind(), self.kind)));
            }
        }
        let start = match curve {
            Some(c) => Some(c.decreasing_threshold(prec)?.max(c.log_x0())),
            None => None,
        };
        let mut rows = Vec::with_capacity(points.len());
        for p in points {
            let i = self.index_at(p)?;
            let mut eps = self.rows[i].eps.clone();
            let mut provenance = self.rows[i].provenance.clone();
            if let (Some(c), Some(s)) = (curve, &start) {
                if s.certainly_le(p) {
                    let v = c.eval(p, prec)?;
                    if v.hi() < &eps {
                        eps = Float::with_val_round(prec, v.hi(), Round::Up).0;
                        provenance = "asymptotic".to_string();
                    }
                }
            }
            rows.push(StepRow::new(p.clone(), eps, provenance));
        }
        StepBoundTable::new(self.kind, rows)
    }
}
