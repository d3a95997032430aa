//! Exponential integral, offset logarithmic integral and the shifted integral
//! `J(a, b, s) = e^{-s} ∫_a^b e^u/u² du`.
//!
//! Two evaluation routes:
//!
//! * below a cutoff `u* ≈ p·ln 2 + 30` (p the target precision), the positive series
//!   `Ei(u) = γ + ln u + Σ uⁿ/(n·n!)` together with the antiderivative
//!   `∫ e^u/u² du = Ei(u) − e^u/u`;
//! * above it, repeated integration by parts,
//!   `∫_a^b e^u/u² du = [e^u Σ_{k<n} (k+1)!/u^{k+2}]_a^b + (n+1)! ∫_a^b e^u/u^{n+2} du`,
//!   whose remainder lies between `(n+1)!(e^b − e^a)/b^{n+2}` and
//!   `(n+1)!(e^b − e^a)/a^{n+2}`. Long ranges are cut at `a, 2a, 4a, …` so
//!   those two bounds stay within a factor of four.
//!
//! With `∫_{e^a}^{e^b} dt/log²t = ∫_a^b e^u/u² du` this is the quantity
//! `Li(e^b) − e^b/b − Li(e^a) + e^a/a`.

use std::sync::OnceLock;

use rug::float::Round;
use rug::Float;

use super::xreal::{rnd, Enclosure, MAX_PRECISION};
use crate::error::{Error, Result};

/// `Ei(u)` for `u > 0`.
pub fn ei(u: &Enclosure, prec: u32) -> Result<Enclosure> {
    if !(u.lo() > &0) {
        return Err(Error::Domain(format!("Ei needs u > 0, got {u}")));
    }
    let wp = prec + 32;
    let lo = ei_point(u.lo(), wp)?;
    let hi = if u.is_point() { lo.clone() } else { ei_point(u.hi(), wp)? };
    Ok(Enclosure::from_parts(lo.lo().clone(), hi.hi().clone()).with_prec(prec))
}

fn ei_point(u: &Float, wp: u32) -> Result<Enclosure> {
    let wp = wp.max(u.prec());
    let x = Enclosure::point(rnd(wp, u, Round::Nearest));
    let x_f = u.to_f64();
    let eps = Float::with_val(32, 1) >> (wp as i32);
    // p = uⁿ/n!, term = p/n
    let mut p = x.clone();
    let mut sum = Enclosure::zero(wp);
    let mut n: u64 = 1;
    loop {
        let term = p.div(&Enclosure::from_u64(n, wp))?;
        sum = &sum + &term;
        // term ratio u·n/(n+1)² ≤ u/(n+1) ≤ 1/2 from here on
        if (n + 1) as f64 >= 2.0 * x_f && rnd(wp, term.hi() / sum.lo(), Round::Up) <= eps {
            sum = sum.widen(&Float::new(wp), term.hi());
            break;
        }
        n += 1;
        p = (&p * &x).div(&Enclosure::from_u64(n, wp))?;
        if n > 100_000_000 {
            return Err(Error::PrecisionExhausted("Ei series did not converge".into()));
        }
    }
    Ok(&(&Enclosure::euler(wp) + &x.ln()?) + &sum)
}

fn li2_at(prec: u32) -> Result<Enclosure> {
    ei(&Enclosure::ln2(prec + 16), prec + 16).map(|e| e.with_prec(prec))
}

/// `li(2) = Ei(ln 2) ≈ 1.0451637801`, enclosed once at high precision.
pub fn li2(prec: u32) -> Result<Enclosure> {
    static CACHE: OnceLock<Enclosure> = OnceLock::new();
    const CACHED_PREC: u32 = MAX_PRECISION + 128;
    if prec > CACHED_PREC {
        return li2_at(prec);
    }
    if let Some(v) = CACHE.get() {
        return Ok(v.with_prec(prec));
    }
    let v = li2_at(CACHED_PREC)?;
    Ok(CACHE.get_or_init(|| v).with_prec(prec))
}

/// `Li(x) = ∫₂ˣ dt/log t` for `x ≥ 2`.
pub fn li_moderate(x: &Enclosure, prec: u32) -> Result<Enclosure> {
    if x.lo() < &2 {
        return Err(Error::Domain(format!("Li needs x >= 2, got {x}")));
    }
    if x.is_point() && x.lo() == &2 {
        return Ok(Enclosure::zero(prec));
    }
    let wp = prec + 32;
    let lx = x.with_prec(wp.max(x.prec())).ln()?;
    let li = &ei(&lx, wp)? - &li2(wp)?;
    Ok(li.clamp_below(&Float::new(wp)).with_prec(prec))
}

/// `J(a, b, s) = e^{-s} ∫_a^b e^u/u² du` for `1 < a ≤ b ≤ s`.
pub fn j_integral(a: &Enclosure, b: &Enclosure, s: &Enclosure, prec: u32) -> Result<Enclosure> {
    if !(a.lo() > &1) {
        return Err(Error::Domain(format!("j_integral needs a > 1, got {a}")));
    }
    if a.lo() > b.hi() {
        return Err(Error::Domain(format!("j_integral needs a <= b, got {a} > {b}")));
    }
    if s.hi() < b.lo() {
        return Err(Error::Domain(format!("j_integral needs s >= b, got {s} < {b}")));
    }
    j_shifted(a, b, s, prec)
}

/// `∫_{e^a}^{e^b} dt/log²t`, i.e. `J(a, b, 0)`.
pub fn inv_log_sq_integral(a: &Enclosure, b: &Enclosure, prec: u32) -> Result<Enclosure> {
    if !(a.lo() > &1) {
        return Err(Error::Domain(format!("integral of 1/log²t needs log a > 1, got {a}")));
    }
    if a.lo() > b.hi() {
        return Err(Error::Domain(format!("reversed range {a} > {b}")));
    }
    j_shifted(a, b, &Enclosure::zero(prec), prec)
}

/// [`j_integral`] without the `s ≥ b` restriction. The integral is increasing
/// in `b` and decreasing in `a` and `s`, which handles wide arguments.
pub(crate) fn j_shifted(a: &Enclosure, b: &Enclosure, s: &Enclosure, prec: u32) -> Result<Enclosure> {
    if a.is_point() && b.is_point() && s.is_point() {
        return j_point(a.lo(), b.lo(), s.lo(), prec);
    }
    let lo = if a.hi() >= b.lo() {
        Float::new(prec)
    } else {
        j_point(a.hi(), b.lo(), s.hi(), prec)?.lo().clone()
    };
    let hi = j_point(a.lo(), b.hi(), s.lo(), prec)?.hi().clone();
    Ok(Enclosure::from_parts(lo, hi))
}

/// Switch-over point between the series and integration by parts for a
/// target precision of `prec` bits.
fn cutoff(prec: u32) -> Float {
    Float::with_val(64, (prec as f64 * std::f64::consts::LN_2 + 30.0).ceil())
}

fn j_point(a: &Float, b: &Float, s: &Float, prec: u32) -> Result<Enclosure> {
    if a >= b {
        return Ok(Enclosure::zero(prec));
    }
    let cut = cutoff(prec);
    let r = if b <= &cut {
        refine(a, b, prec, |wp| series_piece(a, b, s, wp))?
    } else if a >= &cut {
        ibp_range(a, b, s, prec)?
    } else {
        let head = refine(a, &cut, prec, |wp| series_piece(a, &cut, s, wp))?;
        &head + &ibp_range(&cut, b, s, prec)?
    };
    r.with_prec(prec).check_finite("J integral")
}

/// Run `f` with enough guard bits to absorb the cancellation in
/// `F(b) − F(a)` when `b − a` is small.
fn refine(a: &Float, b: &Float, prec: u32, f: impl Fn(u32) -> Result<Enclosure>) -> Result<Enclosure> {
    let gap = rnd(53, b - a, Round::Down).to_f64();
    let ratio = (b.to_f64() / gap).max(1.0);
    let mut extra = ratio.log2().ceil() as u32 + b.to_f64().log2().max(0.0).ceil() as u32 + 16;
    let tol = (-(prec as f64) - 4.0).exp2();
    let mut last = None;
    for _ in 0..4 {
        let r = f(prec + 64 + extra)?;
        if r.rel_width() <= tol {
            return Ok(r);
        }
        last = Some(r);
        extra = extra * 2 + 64;
    }
    Ok(last.expect("at least one attempt"))
}

fn series_piece(a: &Float, b: &Float, s: &Float, wp: u32) -> Result<Enclosure> {
    let anti = |u: &Float| -> Result<Enclosure> {
        let x = Enclosure::point(rnd(wp.max(u.prec()), u, Round::Nearest));
        Ok(&ei_point(u, wp)? - &x.exp().div(&x)?)
    };
    let diff = &anti(b)? - &anti(a)?;
    let shift = Enclosure::point(rnd(wp.max(s.prec()), s, Round::Nearest));
    Ok((&diff * &(-&shift).exp()).clamp_below(&Float::new(wp)))
}

fn ibp_range(a: &Float, b: &Float, s: &Float, prec: u32) -> Result<Enclosure> {
    let mut total = Enclosure::zero(prec);
    let mut alpha = a.clone();
    while &alpha < b {
        let doubled = Float::with_val(alpha.prec(), &alpha * 2u32);
        let beta = if &doubled < b { doubled } else { b.clone() };
        let piece = refine(&alpha, &beta, prec, |wp| ibp_piece(&alpha, &beta, s, wp, prec))?;
        total = &total + &piece;
        alpha = beta;
    }
    Ok(total)
}

fn ibp_piece(alpha: &Float, beta: &Float, s: &Float, wp: u32, prec: u32) -> Result<Enclosure> {
    let p = wp.max(alpha.prec()).max(beta.prec()).max(s.prec());
    let al = Enclosure::point(rnd(p, alpha, Round::Nearest));
    let be = Enclosure::point(rnd(p, beta, Round::Nearest));
    let sh = Enclosure::point(rnd(p, s, Round::Nearest));
    let e_a = (&al - &sh).exp();
    let e_b = (&be - &sh).exp();
    let alpha_f = alpha.to_f64();
    // c_k(u) = (k+1)!/u^{k+2}
    let mut c_a = al.sqr().recip()?;
    let mut c_b = be.sqr().recip()?;
    let c0 = c_a.lo().clone();
    let eps = rnd(p, c0 >> (prec as i32 + 8), Round::Down);
    let mut s_a = Enclosure::zero(p);
    let mut s_b = Enclosure::zero(p);
    let mut k: u64 = 0;
    while c_a.hi() > &eps {
        if (k + 2) as f64 >= alpha_f {
            return Err(Error::PrecisionExhausted(format!("integration by parts stalls at u = {alpha}")));
        }
        s_a = &s_a + &c_a;
        s_b = &s_b + &c_b;
        let f = Enclosure::from_u64(k + 2, p);
        c_a = (&c_a * &f).div(&al)?;
        c_b = (&c_b * &f).div(&be)?;
        k += 1;
    }
    let rise = (&e_b - &e_a).clamp_below(&Float::new(p));
    let rem_lo = rnd(p, rise.lo() * c_b.lo(), Round::Down);
    let rem_hi = rnd(p, rise.hi() * c_a.hi(), Round::Up);
    let head = &(&e_b * &s_b) - &(&e_a * &s_a);
    Ok((&head + &Enclosure::from_parts(rem_lo, rem_hi)).clamp_below(&Float::new(p)))
}
