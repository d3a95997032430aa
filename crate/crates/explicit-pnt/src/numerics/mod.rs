//! Certified real arithmetic and the special functions used by the
//! conversion formulas.

mod dawson;
mod expint;
mod xreal;

pub use dawson::dawson;
pub use expint::{ei, inv_log_sq_integral, j_integral, li2, li_moderate};
pub use xreal::{
    fmt_fixed, fmt_sci, with_precision_retry, xr_arith, ArithOp, Dir, Enclosure, LogMagnitude, Rounding, XReal,
    DEFAULT_PRECISION, MAX_PRECISION,
};
