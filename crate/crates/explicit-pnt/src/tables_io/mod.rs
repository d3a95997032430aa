//! Table and anchor files, regeneration of numerical π tables, and reports.

mod anchors;
mod regen;
mod report;
mod table_file;

pub use anchors::{load_anchor, AnchorFile, AnchorRecord, BUILTIN_ANCHORS};
pub use regen::{
    regenerate_pi_table, regenerated_table_file, targets_from_table, RegenOptions, RegenRow, RegenTarget, Regenerated, ABOVE_TOLERANCE,
    BELOW_TOLERANCE,
};
pub use report::{emit_report, Report, ReportRow};
pub use table_file::{load_table, load_table_column, TableFile, TableRow};
