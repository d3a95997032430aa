use rug::Integer;

use crate::error::{Error, Result};
use crate::numerics::{li_moderate, Enclosure};

/// A point where `π`, `θ` and `Li` are known.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactAnchor {
    pub name: String,
    pub x0: Enclosure,
    pub log_x0: Enclosure,
    pub pi: Integer,
    pub theta: Enclosure,
    pub li: Enclosure,
    pub source: String,
    /// Whether the prime sieve can recompute `pi` and `theta`.
    pub oracle_verifiable: bool,
}

impl ExactAnchor {
    /// Assemble an anchor, computing `log x0` and checking that the given
    /// `Li(x0)` is consistent with a direct evaluation when `x0` is moderate.
    pub fn new(name: &str, x0: Enclosure, pi: Integer, theta: Enclosure, li: Enclosure, source: &str, oracle_verifiable: bool, prec: u32) -> Result<Self> {
        if x0.lo() < &2 {
            return Err(Error::Invalid(format!("anchor x0 = {x0} is below 2")));
        }
        if pi < 0 || theta.hi() < &0 {
            return Err(Error::Invalid(format!("anchor `{name}` has negative counts")));
        }
        if x0.hi().to_f64() <= 1e18 {
            let direct = li_moderate(&x0, prec)?;
            if !direct.overlaps(&li) {
                return Err(Error::Invalid(format!("anchor `{name}`: Li(x0) = {li} disagrees with {direct}")));
            }
        }
        let log_x0 = x0.lift(prec).ln()?;
        Ok(ExactAnchor {
            name: name.to_string(),
            x0,
            log_x0,
            pi,
            theta,
            li,
            source: source.to_string(),
            oracle_verifiable,
        })
    }
}
