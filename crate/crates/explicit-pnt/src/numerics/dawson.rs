//! Dawson's function `D₊(y) = e^{-y²} ∫₀^y e^{t²} dt`.
//!
//! Small arguments use the positive series
//! `D₊(y) = e^{-y²} Σ y^{2n+1} / (n! (2n+1))`, which has no cancellation.
//! Large arguments use the asymptotic expansion with a remainder obtained
//! by integrating by parts down to `c = √(2n+1)`:
//!
//! ```text
//! D₊(y) ∈ S_n(y) − e^{c²−y²} S_n(c) + [0, c·e^{c²−y²}] + [0, (2n−1)!!/(2ⁿ y^{2n+1})]
//! S_n(t) = Σ_{k<n} (2k−1)!! / (2^{k+1} t^{2k+1})
//! ```

use rug::float::Round;
use rug::Float;

use super::xreal::{rnd, Enclosure};
use crate::error::{Error, Result};

/// Location of the maximum, `y* ≈ 0.924138873`, bracketed.
const ARGMAX_LO: &str = "0.9241388730";
const ARGMAX_HI: &str = "0.9241388731";
/// Upper bound for `max D₊ ≈ 0.5410442246`.
const MAX_UPPER: &str = "0.5410442247";

/// Enclosure of `D₊(y)` with relative width at most `2^{-prec/2}`.
pub fn dawson(y: &Enclosure, prec: u32) -> Result<Enclosure> {
    if y.lo() < &0 {
        return Err(Error::Domain(format!("dawson needs y >= 0, got {y}")));
    }
    if !y.is_finite() {
        return Err(Error::Domain("dawson of a non-finite argument".into()));
    }
    if y.is_point() {
        return dawson_point(y.lo(), prec);
    }
    let arg_lo = Float::with_val(64, Float::parse(ARGMAX_LO).unwrap());
    let arg_hi = Float::with_val(64, Float::parse(ARGMAX_HI).unwrap());
    let at_lo = dawson_point(y.lo(), prec)?;
    let at_hi = dawson_point(y.hi(), prec)?;
    if y.hi() <= &arg_lo {
        Ok(Enclosure::from_parts(at_lo.lo().clone(), at_hi.hi().clone()))
    } else if y.lo() >= &arg_hi {
        Ok(Enclosure::from_parts(at_hi.lo().clone(), at_lo.hi().clone()))
    } else {
        let top = rnd(prec, Float::parse(MAX_UPPER).unwrap(), Round::Up);
        let lo = at_lo.lo().clone().min(at_hi.lo());
        Ok(Enclosure::from_parts(lo, top))
    }
}

fn dawson_point(y: &Float, prec: u32) -> Result<Enclosure> {
    if y.is_zero() {
        return Ok(Enclosure::zero(prec));
    }
    let tol = (-(prec as f64) / 2.0).exp2();
    let y2 = y.to_f64() * y.to_f64();
    if y2 >= prec as f64 * std::f64::consts::LN_2 + 20.0 {
        if let Some(r) = asymptotic(y, prec) {
            if r.rel_width() <= tol {
                return Ok(r);
            }
        }
        if y2 > 1.0e6 {
            return Err(Error::PrecisionExhausted(format!("dawson({y}) at {prec} bits")));
        }
    }
    taylor(y, prec)?.check_rel_width(tol, "dawson")
}

fn taylor(y: &Float, prec: u32) -> Result<Enclosure> {
    let wp = prec + 48;
    let y = Enclosure::point(rnd(wp.max(y.prec()), y, Round::Nearest));
    let y2 = y.sqr();
    let y2_f = y2.hi().to_f64();
    let eps = Float::with_val(32, 1) >> (wp as i32);
    let mut term = y.clone();
    let mut sum = Enclosure::zero(wp);
    let mut n: u64 = 0;
    loop {
        sum = &sum + &term;
        // t_{m+1}/t_m ≤ y²/(m+1) ≤ 1/2 from here on, so the tail is at most t_n.
        if (n + 1) as f64 >= 2.0 * y2_f {
            let small = rnd(wp, term.hi() / sum.lo(), Round::Up) <= eps;
            if small {
                let tail = term.hi().clone();
                sum = sum.widen(&Float::new(wp), &tail);
                break;
            }
        }
        let num = Enclosure::from_u64(2 * n + 1, wp);
        let den = Enclosure::from_u64((n + 1) * (2 * n + 3), wp);
        term = (&(&term * &y2) * &num).div(&den)?;
        n += 1;
        if n > 50_000_000 {
            return Err(Error::PrecisionExhausted("dawson series did not converge".into()));
        }
    }
    let r = (&sum * &(-&y2).exp()).with_prec(prec);
    r.check_finite("dawson series")
}

fn asymptotic(y: &Float, prec: u32) -> Option<Enclosure> {
    let wp = prec + 32;
    let yy = Enclosure::point(rnd(wp.max(y.prec()), y, Round::Nearest));
    let y2 = yy.sqr();
    let y2_f = y2.lo().to_f64();
    let target = rnd(wp, Float::with_val(wp, 1) >> (prec as i32 / 2 + 12), Round::Down);
    // a_k = (2k−1)!!/(2^{k+1} y^{2k+1}); the truncation error after n terms is 2·a_n.
    let mut a = Enclosure::from_i64(1, wp).div(&yy.mul_2exp(1)).ok()?;
    let a0 = a.lo().clone();
    let mut s = Enclosure::zero(wp);
    let mut n: u64 = 0;
    loop {
        s = &s + &a;
        n += 1;
        a = (&a * &Enclosure::from_u64(2 * n - 1, wp)).div(&y2.mul_2exp(1)).ok()?;
        let trunc = a.mul_2exp(1);
        let rel = rnd(wp, trunc.hi() / &a0, Round::Up);
        if rel <= target {
            break;
        }
        if (2 * n + 3) as f64 >= y2_f * 0.75 {
            return None;
        }
    }
    let c2 = Enclosure::from_u64(2 * n + 1, wp);
    let c = c2.sqrt().ok()?;
    let mut sc = Enclosure::zero(wp);
    let mut b = Enclosure::from_i64(1, wp).div(&c.mul_2exp(1)).ok()?;
    for k in 0..n {
        sc = &sc + &b;
        b = (&b * &Enclosure::from_u64(2 * k + 1, wp)).div(&c2.mul_2exp(1)).ok()?;
    }
    let damp = (&c2 - &y2).exp();
    let head = &(&damp * &c);
    let trunc = a.mul_2exp(1);
    let mut r = &s - &(&damp * &sc);
    r = r.widen(&Float::new(wp), head.hi());
    r = r.widen(&Float::new(wp), trunc.hi());
    let r = r.clamp_below(&Float::new(wp)).with_prec(prec);
    r.is_finite().then_some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(y: &str) -> Enclosure {
        dawson(&Enclosure::from_decimal(y, 192).unwrap(), 192).unwrap()
    }

    #[test]
    fn zero_is_exact() {
        assert!(at("0").is_point());
    }

    #[test]
    fn both_branches_agree_at_the_cutoff() {
        let y = Float::with_val(192, 12);
        let t = taylor(&y, 192).unwrap();
        let a = asymptotic(&y, 192).unwrap();
        assert!(t.overlaps(&a), "{t} vs {a}");
    }

    #[test]
    fn straddling_the_maximum_uses_the_cap() {
        let y = Enclosure::new(Float::with_val(64, 0.9), Float::with_val(64, 0.95)).unwrap();
        let d = dawson(&y, 128).unwrap();
        assert!(d.hi().to_f64() < 0.541045);
        assert!(d.lo().to_f64() > 0.53);
    }
}
