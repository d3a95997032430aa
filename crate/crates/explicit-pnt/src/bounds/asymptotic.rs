use std::fmt;

use rug::Rational;

use super::{parse_rational, Kind};
use crate::error::{Error, Result};
use crate::numerics::{Dir, Enclosure, XReal};

/// `E_kind(x) ≤ A (log x / R)^B exp(−C √(log x / R))` for `log x ≥ log_x0`.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticBound {
    kind: Kind,
    a: Enclosure,
    b: Rational,
    c: Enclosure,
    r: Enclosure,
    log_x0: Enclosure,
}

impl AsymptoticBound {
    pub fn new(kind: Kind, a: Enclosure, b: Rational, c: Enclosure, r: Enclosure, log_x0: Enclosure) -> Result<Self> {
        if !a.certainly_positive() {
            return Err(Error::Invalid(format!("A must be positive, got {a}")));
        }
        if !c.certainly_positive() {
            return Err(Error::Invalid(format!("C must be positive, got {c}")));
        }
        if !r.certainly_positive() {
            return Err(Error::Invalid(format!("R must be positive, got {r}")));
        }
        let ln2 = Enclosure::ln2(log_x0.prec().max(64));
        if log_x0.certainly_lt(&ln2) {
            return Err(Error::Invalid(format!("log x0 must be at least log 2, got {log_x0}")));
        }
        Ok(AsymptoticBound { kind, a, b, c, r, log_x0 })
    }

    /// Build from decimal strings; `b` may be a fraction such as `3/2`,
    /// `log_x0` may be `ln(...)`.
    pub fn parse(kind: Kind, a: &str, b: &str, c: &str, r: &str, log_x0: &str, prec: u32) -> Result<Self> {
        AsymptoticBound::new(
            kind,
            Enclosure::from_decimal(a, prec)?,
            parse_rational(b)?,
            Enclosure::from_decimal(c, prec)?,
            Enclosure::from_decimal(r, prec)?,
            super::parse_log_x(log_x0, prec)?,
        )
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn a(&self) -> &Enclosure {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn b_enclosure(&self, prec: u32) -> Enclosure {
        Enclosure::from_rational(&self.b, prec)
    }

    pub fn c(&self) -> &Enclosure {
        &self.c
    }

    pub fn r(&self) -> &Enclosure {
        &self.r
    }

    pub fn log_x0(&self) -> &Enclosure {
        &self.log_x0
    }

    /// Same shape with a new kind, constant and validity threshold.
    pub fn derive(&self, kind: Kind, a: Enclosure, log_x0: Enclosure) -> Result<Self> {
        AsymptoticBound::new(kind, a, self.b.clone(), self.c.clone(), self.r.clone(), log_x0)
    }

    /// Enclosure of the curve at `log_x`, with no validity check.
    pub fn eval(&self, log_x: &Enclosure, prec: u32) -> Result<Enclosure> {
        Ok(self.ln_eval(log_x, prec)?.exp())
    }

    /// Enclosure of `ln ε(log_x)`; stays finite where `ε` itself would underflow.
    pub fn ln_eval(&self, log_x: &Enclosure, prec: u32) -> Result<Enclosure> {
        let wp = prec + 16;
        let u = log_x.lift(wp).div(&self.r.lift(wp))?;
        let lnu = u.ln()?;
        let v = &(&self.a.lift(wp).ln()? + &(&self.b_enclosure(wp) * &lnu)) - &(&self.c * &u.sqrt()?);
        Ok(v.with_prec(prec))
    }

    /// Directed value of the curve. Below `log_x0` the value is still
    /// returned but a warning is logged.
    pub fn eval_asymp(&self, log_x: &Enclosure, dir: Dir, prec: u32) -> Result<XReal> {
        if log_x.certainly_lt(&self.log_x0) {
            log::warn!("evaluating a {} bound at log x = {log_x} below its threshold {}", self.kind, self.log_x0);
        }
        Ok(self.eval(log_x, prec)?.bound(dir))
    }

    /// `(A/R^B, B, C/√R)`, with the first rounded up and the last down, so
    /// that `A'(log x)^B exp(−C'√log x)` dominates the curve.
    pub fn to_plain_form(&self, prec: u32) -> Result<(XReal, Rational, XReal)> {
        let wp = prec + 16;
        let r = self.r.lift(wp);
        let a = self.a.lift(wp).div(&r.pow(&self.b_enclosure(wp))?)?;
        let c = self.c.lift(wp).div(&r.sqrt()?)?;
        Ok((a.with_prec(prec).upper(), self.b.clone(), c.with_prec(prec).lower()))
    }

    /// Upper bound on `4B²R/C²`, past which the curve decreases in `log x`.
    pub fn decreasing_threshold(&self, prec: u32) -> Result<Enclosure> {
        if self.b <= 0 {
            return Ok(Enclosure::zero(prec));
        }
        let wp = prec + 16;
        let t = (&(&self.b_enclosure(wp) * &self.c.lift(wp).recip()?).sqr() * &self.r).mul_2exp(2);
        Ok(t.with_prec(prec))
    }

    /// Whether the curve is certainly decreasing on `[log_x, ∞)`.
    pub fn decreasing_on(&self, log_x: &Enclosure, prec: u32) -> Result<bool> {
        Ok(self.decreasing_threshold(prec)?.certainly_le(log_x))
    }
}

impl fmt::Display for AsymptoticBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "E_{}(x) <= {} (log x/{})^{} exp(-{} sqrt(log x/{})) for log x >= {}",
            self.kind,
            self.a.upper().to_sci(8),
            self.r.mid().to_f64(),
            self.b,
            self.c.lower().to_sci(8),
            self.r.mid().to_f64(),
            self.log_x0.lower().to_sci(8),
        )
    }
}

/// Where `g(a,b,c,x) = x^{−a} (log x)^b e^{c√log x}` decreases in `x > 1`.
/// Thresholds are values of `log x`.
#[derive(Clone, Debug, PartialEq)]
pub enum Monotonicity {
    /// Decreasing for every `x > 1`.
    Always,
    /// Decreasing once `log x` exceeds the (upper-rounded) threshold.
    From(Enclosure),
    /// Decreasing only while `log x` stays below the (lower-rounded) threshold.
    Until(Enclosure),
    /// Never decreasing.
    Never,
}

/// With `u = √log x`, `x·(log g)' = −a + b/u² + c/(2u)`, whose sign is that of
/// `q(u) = −a u² + (c/2) u + b`.
pub fn decreasing_from(a: &Enclosure, b: &Enclosure, c: &Enclosure, prec: u32) -> Result<Monotonicity> {
    if a.lo() < &0 {
        return Err(Error::Invalid(format!("decreasing_from needs a >= 0, got {a}")));
    }
    if !c.certainly_positive() {
        return Err(Error::Invalid(format!("decreasing_from needs c > 0, got {c}")));
    }
    let wp = prec + 16;
    let (a, b, c) = (a.lift(wp), b.lift(wp), c.lift(wp));
    if a.hi().is_zero() {
        // q(u) = (c/2)u + b < 0 exactly when u < −2b/c
        if b.lo() >= &0 {
            return Ok(Monotonicity::Never);
        }
        let u = (-&b).mul_2exp(1).div(&c)?;
        let until = u.sqr().clamp_below(&rug::Float::new(wp)).with_prec(prec);
        return Ok(Monotonicity::Until(until));
    }
    let disc = &c.sqr().mul_2exp(-2) + &(&a * &b).mul_2exp(2);
    if disc.hi() < &0 {
        return Ok(Monotonicity::Always);
    }
    if !a.certainly_positive() {
        return Err(Error::Invalid(format!("a = {a} is neither certainly zero nor certainly positive")));
    }
    // largest root of q: c/(4a) + √(c²/4 + 4ab)/(2a)
    let root = disc.clamp_below(&rug::Float::new(wp)).sqrt()?;
    let u = &c.div(&a.mul_2exp(2))? + &root.div(&a.mul_2exp(1))?;
    if u.hi() <= &0 {
        return Ok(Monotonicity::Always);
    }
    let u = u.clamp_below(&rug::Float::new(wp));
    Ok(Monotonicity::From(u.sqr().with_prec(prec)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bound(a: &str) -> AsymptoticBound {
        AsymptoticBound::parse(Kind::Theta, a, "3/2", "2", super::super::DEFAULT_R, "ln(2)", 192).unwrap()
    }

    #[test]
    fn rejects_bad_constants() {
        assert!(AsymptoticBound::parse(Kind::Pi, "0", "1", "2", "5", "1", 64).is_err());
        assert!(AsymptoticBound::parse(Kind::Pi, "1", "1", "-2", "5", "1", 64).is_err());
        assert!(AsymptoticBound::parse(Kind::Pi, "1", "1", "2", "5", "0.5", 64).is_err());
    }

    #[test]
    fn threshold_is_four_b_squared_r_over_c_squared() {
        let t = bound("1").decreasing_threshold(128).unwrap();
        assert!((t.mid().to_f64() - 9.0 * 5.5666305 / 4.0).abs() < 1e-12);
    }

    #[test]
    fn plain_form_with_unit_r() {
        let b = AsymptoticBound::parse(Kind::Pi, "3.5", "3/2", "2", "1", "1", 128).unwrap();
        let (a, _, c) = b.to_plain_form(128).unwrap();
        assert_eq!(a.to_f64(), 3.5);
        assert_eq!(c.to_f64(), 2.0);
    }
}
