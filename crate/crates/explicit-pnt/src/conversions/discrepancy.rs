use rug::Float;

use crate::bounds::ExactAnchor;
use crate::error::{Error, Result};
use crate::numerics::Enclosure;

/// `|(π(x₀) − Li(x₀))/(x₀/log x₀) − (θ(x₀) − x₀)/x₀|` at an anchor.
///
/// Multiplying by `x₀/log x₀` gives the unnormalised
/// `|π(x₀) − Li(x₀) − (θ(x₀) − x₀)/log x₀|`.
#[derive(Clone, Debug, PartialEq)]
pub struct AnchorDiscrepancy {
    pub log_x0: Enclosure,
    /// Non-negative enclosure of the absolute value.
    pub value: Enclosure,
    /// The signed quantity, when it is known.
    pub signed: Option<Enclosure>,
    pub source: String,
}

impl AnchorDiscrepancy {
    /// From exact values at a computable anchor.
    pub fn from_anchor(anchor: &ExactAnchor, prec: u32) -> Result<Self> {
        let wp = prec + 32;
        let x0 = anchor.x0.lift(wp);
        let l0 = anchor.log_x0.lift(wp);
        let pi = Enclosure::from_integer(&anchor.pi, wp);
        let pi_term = (&pi - &anchor.li).div(&x0.div(&l0)?)?;
        let theta_term = (&anchor.theta - &x0).div(&x0)?;
        let signed = (&pi_term - &theta_term).with_prec(prec);
        Ok(AnchorDiscrepancy {
            log_x0: anchor.log_x0.clone(),
            value: signed.abs(),
            signed: Some(signed),
            source: format!("anchor {}", anchor.name),
        })
    }

    /// From one-sided error bounds `|E_π(x₀)| ≤ eps_pi` and `|E_θ(x₀)| ≤ eps_theta`
    /// by the triangle inequality.
    pub fn from_error_bounds(log_x0: Enclosure, eps_pi: &Enclosure, eps_theta: &Enclosure, source: &str) -> Result<Self> {
        if eps_pi.lo() < &0 || eps_theta.lo() < &0 {
            return Err(Error::Invalid("error bounds must be non-negative".into()));
        }
        let sum = eps_pi + eps_theta;
        let value = Enclosure::new(Float::new(sum.prec()), sum.hi().clone())?;
        Ok(AnchorDiscrepancy { log_x0, value, signed: None, source: source.to_string() })
    }

    /// A vanishing discrepancy at `log_x0`, as at the crossing point.
    pub fn zero(log_x0: Enclosure, source: &str) -> Self {
        let p = log_x0.prec();
        AnchorDiscrepancy { log_x0, value: Enclosure::zero(p), signed: Some(Enclosure::zero(p)), source: source.to_string() }
    }

    /// `x₀/log x₀ · value`, the unnormalised form.
    pub fn unnormalised(&self, prec: u32) -> Result<Enclosure> {
        let l0 = self.log_x0.lift(prec);
        Ok(&self.value * &l0.exp().div(&l0)?)
    }
}
