use rayon::prelude::*;
use rug::Float;

use super::AnchorDiscrepancy;
use crate::bounds::{Kind, Partition, StepBoundTable};
use crate::error::{Error, Result};
use crate::numerics::{j_integral, Enclosure, XReal};

/// `ε_θ,num(x₀) = ε_ψ,num(x₀) + 1.00000002(x₀^{−1/2} + x₀^{−2/3} + x₀^{−4/5}) + 0.94(x₀^{−3/4} + x₀^{−5/6} + x₀^{−9/10})`.
///
/// The upper one-sided bound `(θ(x) − x)/x ≤ ε_ψ,num(x₀)` needs no correction.
pub fn psi_to_theta_num(eps_psi: &Enclosure, log_x0: &Enclosure, prec: u32) -> Result<XReal> {
    let wp = prec + 32;
    let ln2 = Enclosure::ln2(wp);
    if !ln2.certainly_lt(log_x0) {
        return Err(Error::Domain(format!("psi_to_theta_num needs x0 > 2, got log x0 = {log_x0}")));
    }
    let l = log_x0.lift(wp);
    let pw = |num: i64, den: i64| -> Result<Enclosure> {
        let k = Enclosure::from_i64(num, wp).div(&Enclosure::from_i64(den, wp))?;
        Ok((-&(&l * &k)).exp())
    };
    let c1 = Enclosure::from_decimal("1.00000002", wp)?;
    let c2 = Enclosure::from_decimal("0.94", wp)?;
    let s1 = &(&pw(1, 2)? + &pw(2, 3)?) + &pw(4, 5)?;
    let s2 = &(&pw(3, 4)? + &pw(5, 6)?) + &pw(9, 10)?;
    let r = &(eps_psi + &(&c1 * &s1)) + &(&c2 * &s2);
    Ok(r.with_prec(prec).upper())
}

/// Prefix sums `P_k = Σ_{i<k} ε_θ(e^{b_i}) ∫_{b_i}^{b_{i+1}} e^u/u² du` over a partition.
///
/// `P_k` is kept unshifted: MPFR's exponent range holds `e^{10⁸}`.
#[derive(Clone, Debug)]
pub struct ThetaIntegrals {
    points: Vec<Enclosure>,
    eps: Vec<Float>,
    prefix: Vec<Enclosure>,
}

impl ThetaIntegrals {
    /// Pieces are integrated in parallel and summed in order.
    pub fn new(table: &StepBoundTable, part: &Partition, prec: u32) -> Result<Self> {
        if table.kind() != Kind::Theta {
            return Err(Error::Invalid(format!("expected a theta table, got {}", table.kind())));
        }
        let points = part.points().to_vec();
        let eps = points
            .iter()
            .map(|b| match table.eval_step(b) {
                Ok(v) => Ok(v.into_float()),
                Err(Error::BelowTable { log_x, first }) => Err(Error::PartitionNotCovered(format!(
                    "breakpoint {log_x} lies below the first theta row {first}"
                ))),
                Err(e) => Err(e),
            })
            .collect::<Result<Vec<_>>>()?;
        let pieces: Vec<Enclosure> = (0..points.len().saturating_sub(1))
            .into_par_iter()
            .map(|i| {
                let (a, b) = (&points[i], &points[i + 1]);
                let j = j_integral(a, b, b, prec)?;
                Ok(&(&j * &b.lift(prec).exp()) * &Enclosure::point(eps[i].clone()))
            })
            .collect::<Result<_>>()?;
        let mut prefix = Vec::with_capacity(points.len());
        prefix.push(Enclosure::zero(prec));
        for p in &pieces {
            let next = prefix.last().unwrap() + p;
            prefix.push(next);
        }
        Ok(ThetaIntegrals { points, eps, prefix })
    }

    pub fn points(&self) -> &[Enclosure] {
        &self.points
    }

    /// `ε_θ` at breakpoint `k`.
    pub fn eps(&self, k: usize) -> &Float {
        &self.eps[k]
    }

    pub fn prefix(&self, k: usize) -> &Enclosure {
        &self.prefix[k]
    }
}

/// Which form of the tail term of `μ_num` applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailBranch {
    /// `x₂ ≤ x₁ log x₁`: `(log x₂/x₂) ∫_{x₁}^{x₂} dt/log²t`.
    Finite,
    /// `x₂ > x₁ log x₁` or `x₂ = ∞`: `1/(log x₁ + log log x₁ − 1)`.
    Infinite,
    /// `x₂` straddles `x₁ log x₁` within its enclosure; the larger of both.
    Both,
}

/// The three summands of `μ_num` and the branch used for the last.
#[derive(Clone, Debug)]
pub struct MuNum {
    pub discrepancy_term: Enclosure,
    pub sum_term: Enclosure,
    pub tail_term: Enclosure,
    pub total: Enclosure,
    pub eps_theta_x1: Float,
    pub branch: TailBranch,
}

/// `μ_num(x₀, x₁, x₂)` where `x₁` is breakpoint `k` of `integrals`.
/// `log_x2 = None` means `x₂ = ∞`.
pub fn mu_num_at(disc: &AnchorDiscrepancy, integrals: &ThetaIntegrals, k: usize, log_x2: Option<&Enclosure>, prec: u32) -> Result<MuNum> {
    let wp = prec + 32;
    let l1 = integrals.points[k].lift(wp);
    let l0 = disc.log_x0.lift(wp);
    let fourteen = Enclosure::from_i64(14, wp).ln()?;
    if l1.certainly_lt(&fourteen) {
        return Err(Error::HypothesisViolated(format!("log x1 = {l1} must be at least log 14")));
    }
    if !integrals.points[0].overlaps(&disc.log_x0) {
        return Err(Error::PartitionNotCovered(format!(
            "partition starts at {} but the anchor is at log x0 = {}",
            integrals.points[0], disc.log_x0
        )));
    }
    if let Some(l2) = log_x2 {
        if l2.certainly_lt(&l1) {
            return Err(Error::BranchMisuse(format!("log x2 = {l2} lies below log x1 = {l1}")));
        }
    }
    let eps1 = integrals.eps[k].clone();
    if eps1.is_zero() {
        return Err(Error::Invalid("theta bound vanishes at x1".into()));
    }
    let e1 = Enclosure::point(Float::with_val(wp, &eps1));
    let ln_l1 = l1.ln()?;
    let discrepancy_term = if disc.value.hi().is_zero() {
        Enclosure::zero(wp)
    } else {
        let log_factor = &(&(&l0 - &l1) + &ln_l1) - &(&l0.ln()? + &e1.ln()?);
        &log_factor.exp() * &disc.value
    };
    let sum_term = if k == 0 {
        Enclosure::zero(wp)
    } else {
        let scale = l1.div(&e1)?;
        &(&integrals.prefix[k].lift(wp) * &(-&l1).exp()) * &scale
    };
    let infinite = || -> Result<Enclosure> { (&(&l1 + &ln_l1) - &Enclosure::from_i64(1, wp)).recip() };
    let finite = |l2: &Enclosure| -> Result<Enclosure> {
        let l2 = l2.lift(wp);
        Ok(&l2 * &j_integral(&l1, &l2, &l2, wp)?)
    };
    let (tail_term, branch) = match log_x2 {
        None => (infinite()?, TailBranch::Infinite),
        Some(l2) => {
            let cut = &l1 + &ln_l1;
            if l2.certainly_le(&cut) || *l2 == cut {
                (finite(l2)?, TailBranch::Finite)
            } else if cut.certainly_lt(l2) {
                (infinite()?, TailBranch::Infinite)
            } else {
                (finite(l2)?.max(&infinite()?), TailBranch::Both)
            }
        }
    };
    let total = &(&discrepancy_term + &sum_term) + &tail_term;
    Ok(MuNum {
        discrepancy_term: discrepancy_term.with_prec(prec),
        sum_term: sum_term.with_prec(prec),
        tail_term: tail_term.with_prec(prec),
        total: total.clamp_below(&Float::new(wp)).with_prec(prec),
        eps_theta_x1: eps1,
        branch,
    })
}

/// `μ_num(x₀, x₁, x₂)` for a partition `b₁ = log x₀ < … < b_N = log x₁`.
pub fn mu_num(disc: &AnchorDiscrepancy, table: &StepBoundTable, part: &Partition, log_x1: &Enclosure, log_x2: Option<&Enclosure>, prec: u32) -> Result<MuNum> {
    if !part.last().overlaps(log_x1) {
        return Err(Error::PartitionNotCovered(format!("partition ends at {} instead of log x1 = {log_x1}", part.last())));
    }
    let integrals = ThetaIntegrals::new(table, part, prec)?;
    mu_num_at(disc, &integrals, part.len() - 1, log_x2, prec)
}

/// `ε_π,num(x₁, x₂) = ε_θ,num(x₁)(1 + μ_num(x₀, x₁, x₂))`, valid on `[x₁, x₂]`.
pub fn pi_num_on_interval(table: &StepBoundTable, part: &Partition, disc: &AnchorDiscrepancy, log_x1: &Enclosure, log_x2: Option<&Enclosure>, prec: u32) -> Result<XReal> {
    let mu = mu_num(disc, table, part, log_x1, log_x2, prec)?;
    Ok(eps_pi(&mu, prec).upper())
}

fn eps_pi(mu: &MuNum, prec: u32) -> Enclosure {
    let one = Enclosure::from_i64(1, prec);
    &Enclosure::point(mu.eps_theta_x1.clone()) * &(&one + &mu.total)
}

/// `max_i ε_π,num(e^{b'_i}, e^{b'_{i+1}})` over the subdivisions of `[log x₁, ∞)` whose
/// finite breakpoints are `grid.points()[k..]`; the last piece uses `x₂ = ∞`.
/// `grid` must start at `log x₀`.
pub fn pi_num_stitched_at(disc: &AnchorDiscrepancy, integrals: &ThetaIntegrals, k: usize, prec: u32) -> Result<XReal> {
    let vals = interval_bounds(disc, integrals, k, prec)?;
    let top = vals.iter().skip(1).fold(vals[0].clone(), |m, v| m.max(v));
    Ok(top.upper())
}

/// `ε_π,num(e^{b_j}, e^{b_{j+1}})` for every breakpoint `j ≥ from`, the last with `x₂ = ∞`.
pub fn interval_bounds(disc: &AnchorDiscrepancy, integrals: &ThetaIntegrals, from: usize, prec: u32) -> Result<Vec<Enclosure>> {
    let n = integrals.points.len();
    if from >= n {
        return Err(Error::Invalid(format!("breakpoint {from} out of range")));
    }
    (from..n)
        .into_par_iter()
        .map(|j| {
            let next = integrals.points.get(j + 1);
            Ok(eps_pi(&mu_num_at(disc, integrals, j, next, prec)?, prec))
        })
        .collect()
}

/// Stitched bound from a partition of `[log x₀, log x₁]` and subdivisions
/// `b'_1 = log x₁ < … < b'_{M−1}` of `[log x₁, ∞)`.
pub fn pi_num_stitched(table: &StepBoundTable, disc: &AnchorDiscrepancy, part: &Partition, subdivisions: &Partition, prec: u32) -> Result<XReal> {
    if !part.last().overlaps(subdivisions.first()) {
        return Err(Error::PartitionNotCovered(format!(
            "partition ends at {} but the subdivisions start at {}",
            part.last(),
            subdivisions.first()
        )));
    }
    let mut points = part.points().to_vec();
    points.extend(subdivisions.points()[1..].iter().cloned());
    let grid = Partition::new(points)?;
    let integrals = ThetaIntegrals::new(table, &grid, prec)?;
    pi_num_stitched_at(disc, &integrals, part.len() - 1, prec)
}
