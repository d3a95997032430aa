//! Directed-rounding reals and interval enclosures on top of MPFR.
//!
//! MPFR keeps a binary exponent of roughly ±2³⁰, so magnitudes such as
//! `e^{-10⁸}` and `e^{10⁷}` are representable without special handling.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::float::{Constant, Round};
use rug::ops::{AssignRound, Pow};
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// Working precision used when the caller does not ask for one.
pub const DEFAULT_PRECISION: u32 = 192;
/// Largest precision reached by [`with_precision_retry`].
pub const MAX_PRECISION: u32 = 4096;

/// Requested rounding direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dir {
    Up,
    Down,
}

impl Dir {
    fn round(self) -> Round {
        match self {
            Dir::Up => Round::Up,
            Dir::Down => Round::Down,
        }
    }
}

/// Direction actually applied to an [`XReal`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rounding {
    Up,
    Down,
    Exact,
}

pub(crate) fn rnd<T>(prec: u32, val: T, r: Round) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, val, r).0
}

/// A single MPFR value tagged with the rounding direction that produced it.
///
/// An `Up` value is at least the quantity it stands for, a `Down` value at
/// most.
#[derive(Clone, Debug, PartialEq)]
pub struct XReal {
    value: Float,
    rounding: Rounding,
}

impl XReal {
    pub fn new(value: Float, rounding: Rounding) -> Self {
        XReal { value, rounding }
    }

    pub fn exact(value: Float) -> Self {
        XReal::new(value, Rounding::Exact)
    }

    pub fn value(&self) -> &Float {
        &self.value
    }

    pub fn rounding(&self) -> Rounding {
        self.rounding
    }

    pub fn into_float(self) -> Float {
        self.value
    }

    /// Nearest `f64` in the direction of the tag.
    pub fn to_f64(&self) -> f64 {
        match self.rounding {
            Rounding::Up => self.value.to_f64_round(Round::Up),
            Rounding::Down => self.value.to_f64_round(Round::Down),
            Rounding::Exact => self.value.to_f64(),
        }
    }

    /// Decimal rendering with `sig` significant digits, rounded in the tag
    /// direction so the printed value keeps the certificate.
    pub fn to_sci(&self, sig: usize) -> String {
        let r = match self.rounding {
            Rounding::Up => Round::Up,
            Rounding::Down => Round::Down,
            Rounding::Exact => Round::Nearest,
        };
        fmt_sci(&self.value, sig, r)
    }

    /// Fixed-point rendering with `decimals` digits after the point.
    pub fn to_fixed(&self, decimals: usize) -> String {
        let r = match self.rounding {
            Rounding::Up => Round::Up,
            Rounding::Down => Round::Down,
            Rounding::Exact => Round::Nearest,
        };
        fmt_fixed(&self.value, decimals, r)
    }

    /// Turn the value into a (possibly one-sided) enclosure of itself.
    pub fn as_point(&self) -> Enclosure {
        Enclosure::point(self.value.clone())
    }
}

impl fmt::Display for XReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.rounding {
            Rounding::Up => "up",
            Rounding::Down => "down",
            Rounding::Exact => "exact",
        };
        write!(f, "{} ({tag})", self.to_sci(f.precision().unwrap_or(10)))
    }
}

fn split_mpfr_decimal(s: &str) -> (bool, String, i64) {
    let (neg, s) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (mant, exp) = match s.find(['e', '@']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().unwrap_or(0)),
        None => (s, 0),
    };
    let (int, frac) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    let digits = format!("{int}{frac}");
    let point = int.len() as i64 + exp;
    let lead = digits.len() - digits.trim_start_matches('0').len();
    let digits = digits.trim_start_matches('0').to_string();
    (neg, digits, point - lead as i64)
}

/// `x` rendered as `d.ddde±N` with `sig` significant digits, rounded with `r`.
pub fn fmt_sci(x: &Float, sig: usize, r: Round) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let s = x.to_string_radix_round(10, Some(sig.max(1)), r);
    let (neg, digits, point) = split_mpfr_decimal(&s);
    let exp = point - 1;
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&digits[..1]);
    if digits.len() > 1 {
        out.push('.');
        out.push_str(&digits[1..]);
    }
    out.push_str(&format!("e{exp}"));
    out
}

/// `x` rendered with `decimals` digits after the decimal point, rounded with `r`.
pub fn fmt_fixed(x: &Float, decimals: usize, r: Round) -> String {
    if x.is_zero() || !x.is_finite() {
        return fmt_sci(x, decimals + 1, r);
    }
    let ten_pow = Float::with_val(64, 10).pow(decimals as u32);
    let scaled = rnd(x.prec() + 64, x * &ten_pow, r);
    let int = match scaled.to_integer_round(r) {
        Some((i, _)) => i,
        None => return fmt_sci(x, decimals + 1, r),
    };
    let neg = int < 0;
    let mut digits = int.abs().to_string();
    while digits.len() <= decimals {
        digits.insert(0, '0');
    }
    let split = digits.len() - decimals;
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&digits[..split]);
    if decimals > 0 {
        out.push('.');
        out.push_str(&digits[split..]);
    }
    out
}

/// A closed interval `[lo, hi]` that is guaranteed to contain a true value.
#[derive(Clone, Debug, PartialEq)]
pub struct Enclosure {
    lo: Float,
    hi: Float,
}

impl Enclosure {
    pub fn new(lo: Float, hi: Float) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::Invalid(format!("bad enclosure [{lo}, {hi}]")));
        }
        Ok(Enclosure { lo, hi })
    }

    pub(crate) fn from_parts(lo: Float, hi: Float) -> Self {
        debug_assert!(!(lo > hi), "inverted enclosure [{lo}, {hi}]");
        Enclosure { lo, hi }
    }

    pub fn point(x: Float) -> Self {
        Enclosure { lo: x.clone(), hi: x }
    }

    pub fn zero(prec: u32) -> Self {
        Enclosure::point(Float::new(prec))
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Enclosure::from_parts(rnd(prec, v, Round::Down), rnd(prec, v, Round::Up))
    }

    pub fn from_u64(v: u64, prec: u32) -> Self {
        Enclosure::from_parts(rnd(prec, v, Round::Down), rnd(prec, v, Round::Up))
    }

    pub fn from_integer(v: &Integer, prec: u32) -> Self {
        Enclosure::from_parts(rnd(prec, v, Round::Down), rnd(prec, v, Round::Up))
    }

    pub fn from_rational(v: &Rational, prec: u32) -> Self {
        Enclosure::from_parts(rnd(prec, v, Round::Down), rnd(prec, v, Round::Up))
    }

    /// The exact value of an `f64`.
    pub fn from_f64(v: f64, prec: u32) -> Self {
        Enclosure::from_parts(rnd(prec, v, Round::Down), rnd(prec, v, Round::Up))
    }

    /// Parse a decimal literal such as `5.5666305` or `2.0097e-12`.
    pub fn from_decimal(s: &str, prec: u32) -> Result<Self> {
        let s = s.trim();
        let parse = || Float::parse(s).map_err(|e| Error::Invalid(format!("`{s}`: {e}")));
        let lo = rnd(prec, parse()?, Round::Down);
        let hi = rnd(prec, parse()?, Round::Up);
        Enclosure::new(lo, hi)
    }

    pub fn ln2(prec: u32) -> Self {
        Enclosure::from_parts(rnd(prec, Constant::Log2, Round::Down), rnd(prec, Constant::Log2, Round::Up))
    }

    pub fn euler(prec: u32) -> Self {
        Enclosure::from_parts(rnd(prec, Constant::Euler, Round::Down), rnd(prec, Constant::Euler, Round::Up))
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn into_bounds(self) -> (Float, Float) {
        (self.lo, self.hi)
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    pub fn upper(&self) -> XReal {
        let tag = if self.is_point() { Rounding::Exact } else { Rounding::Up };
        XReal::new(self.hi.clone(), tag)
    }

    pub fn lower(&self) -> XReal {
        let tag = if self.is_point() { Rounding::Exact } else { Rounding::Down };
        XReal::new(self.lo.clone(), tag)
    }

    pub fn bound(&self, dir: Dir) -> XReal {
        match dir {
            Dir::Up => self.upper(),
            Dir::Down => self.lower(),
        }
    }

    pub fn mid(&self) -> Float {
        rnd(self.prec() + 1, &self.lo + &self.hi, Round::Nearest) / 2u32
    }

    /// Upper bound on `hi - lo`.
    pub fn width(&self) -> Float {
        rnd(self.prec(), &self.hi - &self.lo, Round::Up)
    }

    /// `width / min|x|`, or infinity when the enclosure touches zero.
    pub fn rel_width(&self) -> f64 {
        if self.is_point() {
            return 0.0;
        }
        if self.contains_zero() {
            return f64::INFINITY;
        }
        let mag = if self.lo > 0 { self.lo.clone() } else { -self.hi.clone() };
        rnd(53, self.width() / mag, Round::Up).to_f64()
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn contains(&self, x: &Float) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_enclosure(&self, o: &Enclosure) -> bool {
        self.lo <= o.lo && o.hi <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0 && self.hi >= 0
    }

    pub fn certainly_positive(&self) -> bool {
        self.lo > 0
    }

    pub fn certainly_lt(&self, o: &Enclosure) -> bool {
        self.hi < o.lo
    }

    pub fn certainly_le(&self, o: &Enclosure) -> bool {
        self.hi <= o.lo
    }

    pub fn overlaps(&self, o: &Enclosure) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    pub fn hull(&self, o: &Enclosure) -> Enclosure {
        Enclosure::from_parts(self.lo.clone().min(&o.lo), self.hi.clone().max(&o.hi))
    }

    /// Enclosure of `max(x, y)`.
    pub fn max(&self, o: &Enclosure) -> Enclosure {
        Enclosure::from_parts(self.lo.clone().max(&o.lo), self.hi.clone().max(&o.hi))
    }

    /// Enclosure of `min(x, y)`.
    pub fn min(&self, o: &Enclosure) -> Enclosure {
        Enclosure::from_parts(self.lo.clone().min(&o.lo), self.hi.clone().min(&o.hi))
    }

    pub fn abs(&self) -> Enclosure {
        if self.lo >= 0 {
            self.clone()
        } else if self.hi <= 0 {
            -self
        } else {
            let hi = (-self.lo.clone()).max(&self.hi);
            Enclosure::from_parts(Float::new(self.prec()), hi)
        }
    }

    /// Round outward to `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Enclosure {
        Enclosure::from_parts(rnd(prec, &self.lo, Round::Down), rnd(prec, &self.hi, Round::Up))
    }

    /// The same enclosure carried at no fewer than `prec` bits.
    pub fn lift(&self, prec: u32) -> Enclosure {
        if self.prec() >= prec {
            self.clone()
        } else {
            self.with_prec(prec)
        }
    }

    /// Widen by `[-below, +above]` (both taken as non-negative magnitudes).
    pub fn widen(&self, below: &Float, above: &Float) -> Enclosure {
        let p = self.prec();
        Enclosure::from_parts(rnd(p, &self.lo - below, Round::Down), rnd(p, &self.hi + above, Round::Up))
    }

    /// Replace the lower endpoint by `max(lo, floor)`; used when a quantity is
    /// known to be at least `floor` for analytic reasons.
    pub fn clamp_below(&self, floor: &Float) -> Enclosure {
        let lo = self.lo.clone().max(floor);
        let hi = self.hi.clone().max(floor);
        Enclosure::from_parts(lo, hi)
    }

    pub fn mul_2exp(&self, e: i32) -> Enclosure {
        Enclosure::from_parts(self.lo.clone() << e, self.hi.clone() << e)
    }

    pub fn sqr(&self) -> Enclosure {
        self * self
    }

    pub fn recip(&self) -> Result<Enclosure> {
        if self.contains_zero() {
            return Err(Error::Domain(format!("division by an enclosure containing 0: {self}")));
        }
        let p = self.prec();
        Ok(Enclosure::from_parts(
            rnd(p, self.hi.recip_ref(), Round::Down),
            rnd(p, self.lo.recip_ref(), Round::Up),
        ))
    }

    pub fn div(&self, o: &Enclosure) -> Result<Enclosure> {
        if o.contains_zero() {
            return Err(Error::Domain(format!("division by an enclosure containing 0: {o}")));
        }
        let p = self.prec().max(o.prec());
        if self.lo >= 0 && o.lo > 0 {
            return Ok(Enclosure::from_parts(
                rnd(p, &self.lo / &o.hi, Round::Down),
                rnd(p, &self.hi / &o.lo, Round::Up),
            ));
        }
        let cands = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let lo = cands.iter().map(|(a, b)| rnd(p, *a / *b, Round::Down)).reduce(|a, b| a.min(&b)).unwrap();
        let hi = cands.iter().map(|(a, b)| rnd(p, *a / *b, Round::Up)).reduce(|a, b| a.max(&b)).unwrap();
        Ok(Enclosure::from_parts(lo, hi))
    }

    pub fn sqrt(&self) -> Result<Enclosure> {
        if self.lo < 0 {
            return Err(Error::Domain(format!("sqrt of a possibly negative value {self}")));
        }
        let p = self.prec();
        Ok(Enclosure::from_parts(rnd(p, self.lo.sqrt_ref(), Round::Down), rnd(p, self.hi.sqrt_ref(), Round::Up)))
    }

    pub fn ln(&self) -> Result<Enclosure> {
        if !(self.lo > 0) {
            return Err(Error::Domain(format!("log of a possibly non-positive value {self}")));
        }
        let p = self.prec();
        Ok(Enclosure::from_parts(rnd(p, self.lo.ln_ref(), Round::Down), rnd(p, self.hi.ln_ref(), Round::Up)))
    }

    pub fn exp(&self) -> Enclosure {
        let p = self.prec();
        Enclosure::from_parts(rnd(p, self.lo.exp_ref(), Round::Down), rnd(p, self.hi.exp_ref(), Round::Up))
    }

    /// `self^e` for a positive base, computed as `exp(e·ln self)`.
    pub fn pow(&self, e: &Enclosure) -> Result<Enclosure> {
        if e.is_point() && e.lo.is_zero() {
            return Ok(Enclosure::from_i64(1, self.prec()));
        }
        Ok((&self.ln()? * e).exp())
    }

    /// `self^n` for a non-negative base and an integer exponent.
    pub fn powi(&self, n: i32) -> Result<Enclosure> {
        if self.lo < 0 {
            return Err(Error::Domain(format!("powi of a possibly negative base {self}")));
        }
        if n < 0 {
            return self.powi(-n)?.recip();
        }
        let p = self.prec();
        Ok(Enclosure::from_parts(
            rnd(p, (&self.lo).pow(n as u32), Round::Down),
            rnd(p, (&self.hi).pow(n as u32), Round::Up),
        ))
    }

    /// Fail with `PrecisionExhausted` if the enclosure lost finiteness.
    pub fn check_finite(self, what: &str) -> Result<Self> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::PrecisionExhausted(format!("{what} left the representable range: {self}")))
        }
    }

    /// Fail with `PrecisionExhausted` if the relative width exceeds `tol`.
    pub fn check_rel_width(self, tol: f64, what: &str) -> Result<Self> {
        let w = self.rel_width();
        if w <= tol {
            Ok(self)
        } else {
            Err(Error::PrecisionExhausted(format!("{what}: relative width {w:e} exceeds {tol:e}")))
        }
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = f.precision().unwrap_or(12);
        write!(f, "[{}, {}]", fmt_sci(&self.lo, sig, Round::Down), fmt_sci(&self.hi, sig, Round::Up))
    }
}

impl Add for &Enclosure {
    type Output = Enclosure;
    fn add(self, o: &Enclosure) -> Enclosure {
        let p = self.prec().max(o.prec());
        Enclosure::from_parts(rnd(p, &self.lo + &o.lo, Round::Down), rnd(p, &self.hi + &o.hi, Round::Up))
    }
}

impl Sub for &Enclosure {
    type Output = Enclosure;
    fn sub(self, o: &Enclosure) -> Enclosure {
        let p = self.prec().max(o.prec());
        Enclosure::from_parts(rnd(p, &self.lo - &o.hi, Round::Down), rnd(p, &self.hi - &o.lo, Round::Up))
    }
}

impl Mul for &Enclosure {
    type Output = Enclosure;
    fn mul(self, o: &Enclosure) -> Enclosure {
        let p = self.prec().max(o.prec());
        if self.lo >= 0 && o.lo >= 0 {
            return Enclosure::from_parts(rnd(p, &self.lo * &o.lo, Round::Down), rnd(p, &self.hi * &o.hi, Round::Up));
        }
        let cands = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let lo = cands.iter().map(|(a, b)| rnd(p, *a * *b, Round::Down)).reduce(|a, b| a.min(&b)).unwrap();
        let hi = cands.iter().map(|(a, b)| rnd(p, *a * *b, Round::Up)).reduce(|a, b| a.max(&b)).unwrap();
        Enclosure::from_parts(lo, hi)
    }
}

impl Neg for &Enclosure {
    type Output = Enclosure;
    fn neg(self) -> Enclosure {
        Enclosure::from_parts(-self.hi.clone(), -self.lo.clone())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Enclosure {
            type Output = Enclosure;
            fn $m(self, o: Enclosure) -> Enclosure {
                (&self).$m(&o)
            }
        }
        impl $tr<&Enclosure> for Enclosure {
            type Output = Enclosure;
            fn $m(self, o: &Enclosure) -> Enclosure {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Enclosure {
    type Output = Enclosure;
    fn neg(self) -> Enclosure {
        -&self
    }
}

/// A positive magnitude known only through its natural logarithm.
///
/// Values past `e^{700}` are never materialised; [`LogMagnitude::ln`] hands
/// back the stored logarithm untouched.
#[derive(Clone, Debug, PartialEq)]
pub struct LogMagnitude {
    log: Enclosure,
}

impl LogMagnitude {
    pub const MATERIALIZE_LIMIT: f64 = 700.0;

    pub fn from_log(log: Enclosure) -> Self {
        LogMagnitude { log }
    }

    pub fn ln(&self) -> &Enclosure {
        &self.log
    }

    /// `e^{log}` itself, refused above `e^{700}`.
    pub fn value(&self) -> Result<Enclosure> {
        if self.log.hi().to_f64() >= Self::MATERIALIZE_LIMIT {
            return Err(Error::Domain(format!(
                "x = e^{} is only available in log form",
                fmt_sci(self.log.hi(), 8, Round::Up)
            )));
        }
        Ok(self.log.exp())
    }
}

/// The operations accepted by [`xr_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Exp,
    Log,
    Sqrt,
}

/// Evaluate one operation on enclosures and return the endpoint for `dir`.
pub fn xr_arith(op: ArithOp, args: &[Enclosure], dir: Dir, prec: u32) -> Result<XReal> {
    let arity = match op {
        ArithOp::Exp | ArithOp::Log | ArithOp::Sqrt => 1,
        _ => 2,
    };
    if args.len() != arity {
        return Err(Error::Invalid(format!("{op:?} takes {arity} argument(s), got {}", args.len())));
    }
    if args.iter().any(|a| !a.is_finite()) {
        return Err(Error::Domain(format!("{op:?}: non-finite argument")));
    }
    let a: Vec<Enclosure> = args.iter().map(|x| x.with_prec(prec.max(x.prec()))).collect();
    let r = match op {
        ArithOp::Add => &a[0] + &a[1],
        ArithOp::Sub => &a[0] - &a[1],
        ArithOp::Mul => &a[0] * &a[1],
        ArithOp::Div => a[0].div(&a[1])?,
        ArithOp::Pow => a[0].pow(&a[1])?,
        ArithOp::Exp => a[0].exp(),
        ArithOp::Log => a[0].ln()?,
        ArithOp::Sqrt => a[0].sqrt()?,
    };
    let r = r.check_finite(&format!("{op:?}"))?.with_prec(prec);
    let v = rnd(prec, r.bound(dir).value(), dir.round());
    let tag = if r.is_point() { Rounding::Exact } else { r.bound(dir).rounding() };
    Ok(XReal::new(v, tag))
}

/// Run `f` at `start` bits, doubling on [`Error::PrecisionExhausted`] up to
/// [`MAX_PRECISION`].
pub fn with_precision_retry<T>(start: u32, mut f: impl FnMut(u32) -> Result<T>) -> Result<T> {
    let mut prec = start.max(32);
    loop {
        match f(prec) {
            Err(Error::PrecisionExhausted(msg)) if prec < MAX_PRECISION => {
                log::debug!("retrying at {} bits after: {msg}", prec * 2);
                prec = (prec * 2).min(MAX_PRECISION);
            }
            other => return other,
        }
    }
}
