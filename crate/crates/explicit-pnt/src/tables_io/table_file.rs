use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use rug::float::Round;
use rug::Float;

use crate::bounds::{parse_log_x, Kind, StepBoundTable, StepRow};
use crate::error::{Error, Result};

/// One data line: a log-scale abscissa, value columns and an optional comment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub line: usize,
    pub log_x: String,
    pub values: Vec<String>,
    pub comment: Option<String>,
}

/// A comma-separated table with `# key = value` header lines.
///
/// ```text
/// # kind = theta
/// # R = 5.5666305
/// # columns = log_x, eps_theta
/// # source = ...
/// 100, 2.0097e-12
/// ln(1e19), 1.9537e-8  # trailing comments are kept
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableFile {
    pub kind: Kind,
    pub r: String,
    pub columns: Vec<String>,
    pub source: String,
    pub rows: Vec<TableRow>,
}

impl TableFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut kind = None;
        let mut r = None;
        let mut columns: Option<Vec<String>> = None;
        let mut source = String::new();
        let mut rows = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(h) = trimmed.strip_prefix('#') {
                let Some((k, v)) = h.split_once('=') else { continue };
                let v = v.trim().to_string();
                match k.trim() {
                    "kind" => kind = Some(Kind::from_str(&v).map_err(|e| Error::Parse { line, msg: e.to_string() })?),
                    "R" => r = Some(v),
                    "columns" => columns = Some(v.split(',').map(|c| c.trim().to_string()).collect()),
                    "source" => source = v,
                    _ => {}
                }
                continue;
            }
            let (data, comment) = match trimmed.split_once('#') {
                Some((d, c)) => (d.trim(), Some(c.trim().to_string())),
                None => (trimmed, None),
            };
            let mut fields = data.split(',').map(|f| f.trim().to_string());
            let log_x = fields.next().unwrap_or_default();
            let values: Vec<String> = fields.collect();
            if log_x.is_empty() || values.is_empty() || values.iter().any(|v| v.is_empty()) {
                return Err(Error::Parse { line, msg: format!("expected `log_x, value[, ...]`, got `{data}`") });
            }
            rows.push(TableRow { line, log_x, values, comment });
        }
        let kind = kind.ok_or(Error::Parse { line: 1, msg: "missing `# kind = ...` header".into() })?;
        let columns = columns.unwrap_or_else(|| vec!["log_x".into(), format!("eps_{kind}")]);
        if let Some(row) = rows.iter().find(|row| row.values.len() + 1 != columns.len()) {
            return Err(Error::Parse {
                line: row.line,
                msg: format!("{} values for {} value columns", row.values.len(), columns.len() - 1),
            });
        }
        Ok(TableFile { kind, r: r.unwrap_or_else(|| crate::bounds::DEFAULT_R.into()), columns, source, rows })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        TableFile::parse(&std::fs::read_to_string(path)?)
    }

    pub fn format(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# kind = {}", self.kind).unwrap();
        writeln!(out, "# R = {}", self.r).unwrap();
        writeln!(out, "# columns = {}", self.columns.join(", ")).unwrap();
        if !self.source.is_empty() {
            writeln!(out, "# source = {}", self.source).unwrap();
        }
        for row in &self.rows {
            write!(out, "{}, {}", row.log_x, row.values.join(", ")).unwrap();
            match &row.comment {
                Some(c) => writeln!(out, "  # {c}").unwrap(),
                None => out.push('\n'),
            }
        }
        out
    }

    /// Index among the value columns, so `0` is the first column after `log_x`.
    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .skip(1)
            .position(|c| c == name)
            .ok_or_else(|| Error::Invalid(format!("no column `{name}` in [{}]", self.columns.join(", "))))
    }

    /// Step table from one value column, with values rounded up at `prec` bits.
    pub fn step_table(&self, column: usize, prec: u32) -> Result<StepBoundTable> {
        if self.rows.is_empty() {
            return Err(Error::EmptyTable);
        }
        let name = self.columns.get(column + 1).map(String::as_str).unwrap_or("");
        let kind = column_kind(name).unwrap_or(self.kind);
        let mut rows = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let bad = |msg: String| Error::Parse { line: row.line, msg };
            let log_x = parse_log_x(&row.log_x, prec).map_err(|e| bad(e.to_string()))?;
            let text = &row.values[column];
            let parsed = Float::parse(text).map_err(|e| bad(format!("`{text}`: {e}")))?;
            let eps = Float::with_val_round(prec, parsed, Round::Up).0;
            let provenance = row.comment.clone().unwrap_or_else(|| self.source.clone());
            rows.push((row.line, StepRow::new(log_x, eps, provenance)));
        }
        for w in rows.windows(2) {
            if !w[0].1.log_x.certainly_lt(&w[1].1.log_x) {
                return Err(Error::Order { line: w[1].0 });
            }
        }
        StepBoundTable::new(kind, rows.into_iter().map(|(_, r)| r).collect())
    }

    /// Inverse of [`TableFile::step_table`] for a single-column table; values
    /// are printed with `sig` significant digits so that reading them back at
    /// the table's precision gives at least the stored value.
    pub fn from_step_table(table: &StepBoundTable, log_x_labels: &[String], source: &str, sig: usize) -> Result<Self> {
        if log_x_labels.len() != table.len() {
            return Err(Error::Invalid("one label per row is needed".into()));
        }
        let rows = table
            .rows()
            .iter()
            .zip(log_x_labels)
            .enumerate()
            .map(|(i, (r, l))| TableRow {
                line: i + 5,
                log_x: l.clone(),
                values: vec![decimal_at_least(&r.eps, sig)],
                comment: None,
            })
            .collect();
        Ok(TableFile {
            kind: table.kind(),
            r: crate::bounds::DEFAULT_R.into(),
            columns: vec!["log_x".into(), format!("eps_{}", table.kind())],
            source: source.to_string(),
            rows,
        })
    }
}

/// The nearest `sig`-digit decimal when it re-ingests to `≥ eps`, else the
/// upward-rounded one. Keeps `format` then `step_table` idempotent.
fn decimal_at_least(eps: &Float, sig: usize) -> String {
    let near = crate::numerics::fmt_sci(eps, sig, Round::Nearest);
    let back = Float::parse(&near).map(|p| Float::with_val_round(eps.prec(), p, Round::Up).0);
    match back {
        Ok(b) if b >= *eps => near,
        _ => crate::numerics::fmt_sci(eps, sig, Round::Up),
    }
}

fn column_kind(name: &str) -> Option<Kind> {
    let rest = name.strip_prefix("eps_")?;
    Kind::from_str(rest.split('_').next()?).ok()
}

/// The first value column of a table file.
pub fn load_table(path: impl AsRef<Path>, prec: u32) -> Result<StepBoundTable> {
    TableFile::read(path)?.step_table(0, prec)
}

/// A named value column of a table file.
pub fn load_table_column(path: impl AsRef<Path>, column: &str, prec: u32) -> Result<StepBoundTable> {
    let file = TableFile::read(path)?;
    let idx = file.column_index(column)?;
    file.step_table(idx, prec)
}
