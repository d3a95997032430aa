//! Admissible bounds for `E_ψ`, `E_θ` and `E_π`, in asymptotic and step form.

mod anchor;
mod asymptotic;
mod partition;
mod step;

use std::fmt;
use std::str::FromStr;

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::Enclosure;

pub use anchor::ExactAnchor;
pub use asymptotic::{decreasing_from, AsymptoticBound, Monotonicity};
pub use partition::Partition;
pub use step::{StepBoundTable, StepRow};

/// Zero-free region constant used unless overridden.
pub const DEFAULT_R: &str = "5.5666305";

/// Which prime-counting function a bound controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Psi,
    Theta,
    Pi,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Psi => "psi",
            Kind::Theta => "theta",
            Kind::Pi => "pi",
        })
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "psi" | "ψ" => Ok(Kind::Psi),
            "theta" | "θ" => Ok(Kind::Theta),
            "pi" | "π" => Ok(Kind::Pi),
            other => Err(Error::Invalid(format!("unknown kind `{other}`"))),
        }
    }
}

/// Parses an exact rational from `"3/2"`, `"1.503"`, `"-2"` or `"1e15"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Invalid(format!("`{s}` is not an exact rational"));
    if let Some((n, d)) = s.split_once('/') {
        let n: Integer = n.trim().parse().map_err(|_| bad())?;
        let d: Integer = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Rational::from((n, d)));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: Integer = format!("{int}{frac}0").parse().map_err(|_| bad())?;
    let scale = exp - frac.len() as i32 - 1;
    let mut r = Rational::from(digits);
    let pow10 = Integer::from(Integer::u_pow_u(10, scale.unsigned_abs()));
    if scale >= 0 {
        r *= pow10;
    } else {
        r /= pow10;
    }
    Ok(if neg { -r } else { r })
}

/// Parses a log-scale abscissa: either a decimal `L` or `ln(X)` for a decimal `X`.
pub fn parse_log_x(s: &str, prec: u32) -> Result<Enclosure> {
    let t = s.trim();
    if let Some(inner) = t.strip_prefix("ln(").and_then(|r| r.strip_suffix(')')) {
        let x = Enclosure::from_rational(&parse_rational(inner)?, prec + 16);
        return Ok(x.ln()?.with_prec(prec));
    }
    Ok(Enclosure::from_rational(&parse_rational(t)?, prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("3/2").unwrap(), Rational::from((3, 2)));
        assert_eq!(parse_rational("1.503").unwrap(), Rational::from((1503, 1000)));
        assert_eq!(parse_rational("1e15").unwrap(), Rational::from(Integer::from(Integer::u_pow_u(10, 15))));
        assert_eq!(parse_rational("-2.5e-1").unwrap(), Rational::from((-1, 4)));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn log_abscissae() {
        let l = parse_log_x("ln(1e19)", 128).unwrap();
        assert!((l.mid().to_f64() - 43.749116766).abs() < 1e-8);
        assert!(parse_log_x("100", 64).unwrap().is_point());
    }
}
