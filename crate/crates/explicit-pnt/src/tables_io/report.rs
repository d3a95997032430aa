use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportRow {
    pub cells: Vec<String>,
    pub ok: bool,
}

/// A titled table of results; `ok = false` on any row marks a violation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<ReportRow>,
}

impl Report {
    pub fn new(title: &str, columns: &[&str]) -> Self {
        Report { title: title.to_string(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: vec![] }
    }

    pub fn push(&mut self, row: ReportRow) {
        self.rows.push(row);
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.ok)
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.ok).count()
    }

    /// Aligned plain text. With no rows only the title and column header are printed.
    pub fn to_text(&self) -> String {
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.chars().count()).collect();
        for r in &self.rows {
            for (w, c) in widths.iter_mut().zip(&r.cells) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let mut s = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect::<Vec<_>>()
                .join("  ");
            s.truncate(s.trim_end().len());
            s.push('\n');
            s
        };
        let mut out = format!("# {}\n", self.title);
        out += &line(&self.columns);
        for r in &self.rows {
            out += &line(&r.cells);
        }
        if !self.rows.is_empty() {
            out += &format!("# {} rows, {} failing\n", self.rows.len(), self.failures());
        }
        out
    }

    pub fn to_json(&self) -> String {
        let summary = serde_json::json!({
            "title": self.title,
            "columns": self.columns,
            "rows": self.rows,
            "passed": self.passed(),
            "failures": self.failures(),
        });
        serde_json::to_string_pretty(&summary).expect("reports always serialise")
    }
}

/// Writes the text report to `out` and, if asked, the JSON summary to `summary`.
pub fn emit_report(report: &Report, out: &mut impl Write, summary: Option<&Path>) -> Result<()> {
    out.write_all(report.to_text().as_bytes())?;
    if let Some(path) = summary {
        std::fs::write(path, report.to_json() + "\n")?;
    }
    Ok(())
}
