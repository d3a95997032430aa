//! Exact prime data at desk scale: a segmented sieve with checkpoints, the
//! crossing point near 40.79, pointwise verification of bounds, and the
//! envelope used above the sieve range.

mod crossing;
mod envelope;
mod sieve;
mod verify;

pub use crossing::{crossing_anchor, crossing_derivative, crossing_discrepancy, crossing_is_monotone, crossing_point, theta_37};
pub use envelope::{buthe_envelope, buthe_envelope_slope, envelope_decreasing};
pub use sieve::{read_checkpoints, Checkpoint, Counts, Fixed, PrimeStore, CHECKPOINT_STRIDE, DEFAULT_LIMIT, FRAC_BITS, MAX_LIMIT};
pub use verify::{verify_pointwise, BoundFn, GapViolation, PointwiseReport};
