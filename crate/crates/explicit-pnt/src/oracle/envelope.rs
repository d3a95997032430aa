use rug::Float;

use crate::error::{Error, Result};
use crate::numerics::{Enclosure, XReal};

fn envelope(l: &Enclosure) -> Result<Enclosure> {
    let p = l.prec();
    let c = |s: &str| Enclosure::from_decimal(s, p);
    let poly = &(&c("1.95")? + &c("3.9")?.div(l)?) + &c("19.5")?.div(&l.sqr())?;
    Ok(&(-&l.mul_2exp(-1)).exp() * &poly)
}

/// `𝓔(x) = x^{−1/2}(1.95 + 3.9/log x + 19.5/log²x)` on `log x`, rounded up.
pub fn buthe_envelope(log_x: &Enclosure, prec: u32) -> Result<XReal> {
    let l = log_x.lift(prec + 16);
    if l.certainly_lt(&Enclosure::ln2(prec + 16)) {
        return Err(Error::Domain(format!("the envelope needs x >= 2, got log x = {log_x}")));
    }
    Ok(envelope(&l)?.with_prec(prec).upper())
}

/// Enclosure of `d𝓔/d(log x)` over a `log x` range, by interval evaluation.
pub fn buthe_envelope_slope(log_x: &Enclosure, prec: u32) -> Result<Enclosure> {
    let l = log_x.lift(prec + 16);
    let p = l.prec();
    let c = |s: &str| Enclosure::from_decimal(s, p);
    let half_poly = (&(&c("1.95")? + &c("3.9")?.div(&l)?) + &c("19.5")?.div(&l.sqr())?).mul_2exp(-1);
    let dpoly = &c("3.9")?.div(&l.sqr())? + &c("39")?.div(&l.powi(3)?)?;
    Ok((&(-&l.mul_2exp(-1)).exp() * &(-&(&half_poly + &dpoly))).with_prec(prec))
}

/// Checks on a grid of `points` log-spaced abscissae of `[x_lo, x_hi]` that
/// the envelope values strictly decrease and that its slope is negative on
/// every cell, so the envelope is decreasing on the whole range.
pub fn envelope_decreasing(x_lo: &Float, x_hi: &Float, points: usize, prec: u32) -> Result<bool> {
    if points < 2 || x_lo >= x_hi {
        return Err(Error::Invalid("need at least two points on a nonempty range".into()));
    }
    let lo = Enclosure::point(Float::with_val(prec, x_lo)).ln()?;
    let hi = Enclosure::point(Float::with_val(prec, x_hi)).ln()?;
    let grid: Vec<Enclosure> = (0..points)
        .map(|i| {
            let t = Enclosure::from_u64(i as u64, prec).div(&Enclosure::from_u64(points as u64 - 1, prec))?;
            Ok(&lo + &(&(&hi - &lo) * &t))
        })
        .collect::<Result<_>>()?;
    let mut prev: Option<Enclosure> = None;
    for w in grid.windows(2) {
        let cell = w[0].hull(&w[1]);
        if buthe_envelope_slope(&cell, prec)?.hi() >= &0 {
            return Ok(false);
        }
        let v = envelope(&w[0].lift(prec + 16))?;
        if let Some(p) = &prev {
            if !v.certainly_lt(p) {
                return Ok(false);
            }
        }
        prev = Some(v);
    }
    Ok(true)
}
