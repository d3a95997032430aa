use rug::{Float, Integer};

use super::sieve::product;
use crate::bounds::{parse_rational, ExactAnchor};
use crate::error::{Error, Result};
use crate::numerics::{li_moderate, Enclosure};

/// Primes up to 40 by trial division; `π` and `θ` are constant on `[37, 41)`.
fn primes_to_40() -> Vec<u64> {
    (2..=40u64).filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)).collect()
}

/// `θ(37)`, the value of `θ` on `[37, 41)`.
pub fn theta_37(prec: u32) -> Result<Enclosure> {
    let p = product(primes_to_40().into_iter().map(Integer::from).collect());
    Enclosure::from_integer(&p, prec + 32).ln().map(|e| e.with_prec(prec))
}

/// `(π(x) − Li(x))/(x/log x) − (θ(x) − x)/x` for `x ∈ [37, 41)`.
pub fn crossing_discrepancy(x: &Enclosure, prec: u32) -> Result<Enclosure> {
    let lo = Enclosure::from_i64(37, prec);
    let hi = Enclosure::from_i64(41, prec);
    if x.certainly_lt(&lo) || !x.certainly_lt(&hi) {
        return Err(Error::Domain(format!("x = {x} is outside [37, 41)")));
    }
    let wp = prec + 32;
    let x = x.lift(wp);
    let pi = Enclosure::from_u64(primes_to_40().len() as u64, wp);
    let li = li_moderate(&x, wp)?;
    let lx = x.ln()?;
    let d = &(&(&pi - &li) * &lx).div(&x)? - &(&theta_37(wp)? - &x).div(&x)?;
    Ok(d.with_prec(prec))
}

/// Enclosure of the root of [`crossing_discrepancy`] in `(37, 41)`, of width
/// at most `2⁻⁹⁶`.
pub fn crossing_point(prec: u32) -> Result<Enclosure> {
    let prec = prec.max(128);
    let sign = |x: &Float| -> Result<Option<bool>> {
        let d = crossing_discrepancy(&Enclosure::point(x.clone()), prec)?;
        Ok(if d.certainly_positive() {
            Some(true)
        } else if d.hi() < &0 {
            Some(false)
        } else {
            None
        })
    };
    let mut a = Float::with_val(prec, 37);
    let mut b = Float::with_val(prec, Float::parse("40.999").unwrap());
    let sa = sign(&a)?.ok_or_else(|| Error::PrecisionExhausted("sign at 37".into()))?;
    if sign(&b)? != Some(!sa) {
        return Err(Error::Invalid("no sign change on [37, 41)".into()));
    }
    let tol = Float::with_val(prec, Float::i_exp(1, -96));
    while Float::with_val(prec, &b - &a) > tol {
        let m = Float::with_val(prec, &a + &b) / 2u32;
        match sign(&m)? {
            Some(s) if s == sa => a = m,
            Some(_) => b = m,
            None => {
                // the root is within rounding of m
                let eps = Float::with_val(prec, &b - &a) / 1024u32;
                let (l, h) = (Float::with_val(prec, &m - &eps), Float::with_val(prec, &m + &eps));
                if sign(&l)? == Some(sa) && sign(&h)? == Some(!sa) {
                    return Enclosure::new(l, h);
                }
                return Err(Error::PrecisionExhausted("crossing point bisection stalled".into()));
            }
        }
    }
    Enclosure::new(a, b)
}

/// Lower and upper bounds for the derivative of [`crossing_discrepancy`] on `[lo, hi]`.
pub fn crossing_derivative(lo: &Float, hi: &Float, prec: u32) -> Result<Enclosure> {
    let wp = prec + 32;
    let x = Enclosure::new(Float::with_val(wp, lo), Float::with_val(wp, hi))?;
    let li = li_moderate(&Enclosure::point(Float::with_val(wp, lo)), wp)?.hull(&li_moderate(&Enclosure::point(Float::with_val(wp, hi)), wp)?);
    let pi = Enclosure::from_u64(12, wp);
    let one = Enclosure::from_i64(1, wp);
    let x2 = x.sqr();
    let d = &(&(&(&pi - &li) * &(&one - &x.ln()?)).div(&x2)? - &x.recip()?) + &theta_37(wp)?.div(&x2)?;
    Ok(d.with_prec(prec))
}

/// Checks that the discrepancy is strictly monotone on `[37, 41]` by
/// bounding its derivative away from zero on `pieces` subintervals.
pub fn crossing_is_monotone(pieces: u32, prec: u32) -> Result<bool> {
    let step = Float::with_val(prec, 4) / pieces;
    let (mut neg, mut pos) = (true, true);
    for i in 0..pieces {
        let lo = Float::with_val(prec, &step * i) + 37u32;
        let hi = Float::with_val(prec, &step * (i + 1)) + 37u32;
        let d = crossing_derivative(&lo, &hi, prec)?;
        neg &= d.hi() < &0;
        pos &= d.lo() > &0;
    }
    Ok(neg || pos)
}

/// Anchor at a 20-digit decimal inside the crossing point enclosure, with
/// `π`, `θ` and `Li` evaluated there.
pub fn crossing_anchor(prec: u32) -> Result<ExactAnchor> {
    let root = crossing_point(prec)?;
    let mid = root.mid();
    let text = mid.to_string_radix(10, Some(20));
    let x0 = Enclosure::from_rational(&parse_rational(&text)?, prec);
    let li = li_moderate(&x0, prec)?;
    ExactAnchor::new(
        "crossing",
        x0,
        Integer::from(12),
        theta_37(prec)?,
        li,
        "computed: point in (37, 41) where (pi - Li)/(x/log x) equals (theta - x)/x",
        true,
        prec,
    )
}
