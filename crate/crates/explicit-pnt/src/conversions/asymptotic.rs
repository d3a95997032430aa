use rug::Float;

use super::AnchorDiscrepancy;
use crate::bounds::{AsymptoticBound, Kind};
use crate::error::{Error, Result};
use crate::numerics::{dawson, Enclosure};

/// The prime-power constants `a₁, a₂` entering `ν_asymp`, usable for `log x₀ ≥ valid_from_log_x0`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimePowerConstants {
    pub a1: Enclosure,
    pub a2: Enclosure,
    pub valid_from_log_x0: Enclosure,
    pub provenance: String,
}

impl PrimePowerConstants {
    pub fn new(a1: Enclosure, a2: Enclosure, valid_from_log_x0: Enclosure, provenance: &str) -> Result<Self> {
        if !a1.certainly_positive() || !a2.certainly_positive() {
            return Err(Error::Invalid("a1 and a2 must be positive".into()));
        }
        Ok(PrimePowerConstants { a1, a2, valid_from_log_x0, provenance: provenance.to_string() })
    }

    /// `a₁ = 1 + 1.93378·10⁻⁸`, `a₂ = 1.0432` from `log x₀ = 30` on. These are
    /// calibrated so that `ν_asymp(e³⁰) ≤ 6.3376·10⁻⁷` for the `(121.096, 3/2, 2)`
    /// ψ-bound; they are not derived here.
    pub fn calibrated(prec: u32) -> Self {
        let d = |s: &str| Enclosure::from_decimal(s, prec).unwrap();
        PrimePowerConstants {
            a1: d("1.0000000193378"),
            a2: d("1.0432"),
            valid_from_log_x0: Enclosure::from_i64(30, prec),
            provenance: "calibrated against nu_asymp(e^30) <= 6.3376e-7".into(),
        }
    }
}

fn need(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::HypothesisViolated(what()))
    }
}

/// `ν_asymp(x₀) = (1/A_ψ)(R/log x₀)^B e^{C√(log x₀/R)} (a₁ log x₀ x₀^{−1/2} + a₂ log x₀ x₀^{−2/3})`.
pub fn nu_asymp(psi: &AsymptoticBound, a: &PrimePowerConstants, log_x0: &Enclosure, prec: u32) -> Result<Enclosure> {
    let wp = prec + 32;
    let b = psi.b_enclosure(wp);
    let r = psi.r().lift(wp);
    let c = psi.c().lift(wp);
    let c2_8r = c.sqr().div(&r.mul_2exp(3))?;
    need(c2_8r.certainly_lt(&b), || format!("B = {} must exceed C^2/(8R) = {c2_8r}", psi.b()))?;
    need(a.valid_from_log_x0.certainly_le(log_x0) || a.valid_from_log_x0 == *log_x0, || {
        format!("a1, a2 are only valid from log x0 = {}, got {log_x0}", a.valid_from_log_x0)
    })?;
    let l = log_x0.lift(wp);
    let u = l.div(&r)?;
    let head = (&(&c * &u.sqrt()?) - &(&b * &u.ln()?)).exp().div(psi.a())?;
    let half = (-&l).mul_2exp(-1).exp();
    let two_thirds = (-&(&l.mul_2exp(1)).div(&Enclosure::from_i64(3, wp))?).exp();
    let tail = &l * &(&(&a.a1 * &half) + &(&a.a2 * &two_thirds));
    Ok((&head * &tail).with_prec(prec))
}

/// `A_θ = A_ψ(1 + ν_asymp(x₀))` with `B`, `C`, `x₀` unchanged.
pub fn psi_to_theta_asymp(psi: &AsymptoticBound, a: &PrimePowerConstants, prec: u32) -> Result<AsymptoticBound> {
    if psi.kind() != Kind::Psi {
        return Err(Error::Invalid(format!("expected a psi bound, got {}", psi.kind())));
    }
    let nu = nu_asymp(psi, a, psi.log_x0(), prec)?;
    let one = Enclosure::from_i64(1, prec);
    psi.derive(Kind::Theta, psi.a() * &(&one + &nu), psi.log_x0().clone())
}

/// The two summands of `μ_asymp`.
#[derive(Clone, Debug)]
pub struct MuAsymp {
    pub discrepancy_term: Enclosure,
    pub dawson_term: Enclosure,
    pub total: Enclosure,
}

/// `μ_asymp(x₀, x₁)` with the first term assembled in log space.
pub fn mu_asymp(theta: &AsymptoticBound, disc: &AnchorDiscrepancy, log_x1: &Enclosure, prec: u32) -> Result<MuAsymp> {
    let wp = prec + 32;
    let r = theta.r().lift(wp);
    let c = theta.c().lift(wp);
    let b = theta.b_enclosure(wp);
    let one = Enclosure::from_i64(1, wp);
    let three_halves = Enclosure::from_rational(&rug::Rational::from((3, 2)), wp);
    let c2_16r = c.sqr().div(&r.mul_2exp(4))?;
    need(three_halves.certainly_le(&b) || b == three_halves, || format!("B = {} must be at least 3/2", theta.b()))?;
    need((&one + &c2_16r).certainly_le(&b), || format!("B = {} must be at least 1 + C^2/(16R) = {}", theta.b(), &one + &c2_16r))?;
    need(!disc.log_x0.certainly_lt(theta.log_x0()), || {
        format!("the theta bound holds from log x = {}, after the anchor {}", theta.log_x0(), disc.log_x0)
    })?;
    let shift = c.div(&r.sqrt()?.mul_2exp(1))?;
    let floor = (&one + &shift).sqr();
    let ok = |t: &Enclosure| t.certainly_le(log_x1) || t == log_x1;
    need(ok(&disc.log_x0), || format!("log x1 = {log_x1} lies below log x0 = {}", disc.log_x0))?;
    need(ok(&floor), || format!("log x1 = {log_x1} lies below (1 + C/(2 sqrt R))^2 = {floor}"))?;

    let l1 = log_x1.lift(wp);
    let l0 = disc.log_x0.lift(wp);
    let discrepancy_term = if disc.value.hi().is_zero() {
        Enclosure::zero(wp)
    } else {
        let ln_eps = theta.ln_eval(&l1, wp)?;
        let log_factor = &(&(&l0 - &l1) + &l1.ln()?) - &(&l0.ln()? + &ln_eps);
        &log_factor.exp() * &disc.value
    };
    let sq = l1.sqrt()?;
    let dawson_term = dawson(&(&sq - &shift), wp)?.mul_2exp(1).div(&sq)?;
    let total = &discrepancy_term + &dawson_term;
    Ok(MuAsymp {
        discrepancy_term: discrepancy_term.with_prec(prec),
        dawson_term: dawson_term.with_prec(prec),
        total: total.clamp_below(&Float::new(wp)).with_prec(prec),
    })
}

/// `A_π = A_θ(1 + μ_asymp(x₀, x₁))`, valid from `x₁`.
pub fn theta_to_pi_asymp(theta: &AsymptoticBound, disc: &AnchorDiscrepancy, log_x1: &Enclosure, prec: u32) -> Result<AsymptoticBound> {
    if theta.kind() != Kind::Theta {
        return Err(Error::Invalid(format!("expected a theta bound, got {}", theta.kind())));
    }
    let mu = mu_asymp(theta, disc, log_x1, prec)?.total;
    let one = Enclosure::from_i64(1, prec);
    theta.derive(Kind::Pi, theta.a() * &(&one + &mu), log_x1.clone())
}

/// `A_π = (1 + ν_asymp(x₀))(1 + μ_asymp(x₀, x₁)) A_ψ`.
pub fn psi_to_pi_asymp(psi: &AsymptoticBound, a: &PrimePowerConstants, disc: &AnchorDiscrepancy, log_x1: &Enclosure, prec: u32) -> Result<AsymptoticBound> {
    let theta = psi_to_theta_asymp(psi, a, prec)?;
    theta_to_pi_asymp(&theta, disc, log_x1, prec)
}
