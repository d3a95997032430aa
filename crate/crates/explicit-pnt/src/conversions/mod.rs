//! Conversions between ψ-, θ- and π-bounds.
//!
//! Asymptotic route: [`psi_to_theta_asymp`], [`theta_to_pi_asymp`] and their
//! composition. Numerical route: [`psi_to_theta_num`], [`mu_num`],
//! [`pi_num_on_interval`] and [`pi_num_stitched`].

mod asymptotic;
mod discrepancy;
mod dominance;
mod numerical;

pub use asymptotic::{mu_asymp, nu_asymp, psi_to_pi_asymp, psi_to_theta_asymp, theta_to_pi_asymp, MuAsymp, PrimePowerConstants};
pub use discrepancy::AnchorDiscrepancy;
pub use dominance::{dominates, DominanceReport, Violation};
pub use numerical::{
    interval_bounds, mu_num, mu_num_at, pi_num_on_interval, pi_num_stitched, pi_num_stitched_at, psi_to_theta_num, MuNum, TailBranch,
    ThetaIntegrals,
};
