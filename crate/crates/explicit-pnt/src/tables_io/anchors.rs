use std::path::Path;

use rug::{Float, Integer};
use serde::{Deserialize, Serialize};

use crate::bounds::{parse_rational, ExactAnchor};
use crate::error::{Error, Result};
use crate::numerics::Enclosure;

/// The anchors shipped with the crate: `1e15` and `crossing`.
pub const BUILTIN_ANCHORS: &str = include_str!("../../../../tables/anchors.toml");

/// One `[[anchor]]` record. Decimal fields are strings so that no digits are
/// lost; `*_radius` widens the value on both sides.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnchorRecord {
    pub name: String,
    pub x0: String,
    #[serde(default)]
    pub x0_radius: Option<String>,
    pub pi: String,
    pub theta: String,
    #[serde(default)]
    pub theta_radius: Option<String>,
    pub li: String,
    #[serde(default)]
    pub li_radius: Option<String>,
    pub source: String,
    pub oracle_verifiable: bool,
}

/// The anchors file: a list of `[[anchor]]` tables.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AnchorFile {
    #[serde(rename = "anchor", default)]
    pub anchors: Vec<AnchorRecord>,
}

fn widened(value: &str, radius: Option<&str>, prec: u32) -> Result<Enclosure> {
    let v = Enclosure::from_rational(&parse_rational(value)?, prec);
    match radius {
        None => Ok(v),
        Some(r) => {
            let r = Enclosure::from_rational(&parse_rational(r)?, prec);
            Ok(v.widen(r.hi(), r.hi()))
        }
    }
}

impl AnchorRecord {
    pub fn to_anchor(&self, prec: u32) -> Result<ExactAnchor> {
        let pi: Integer = self
            .pi
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("anchor `{}`: pi = `{}` is not an integer", self.name, self.pi)))?;
        ExactAnchor::new(
            &self.name,
            widened(&self.x0, self.x0_radius.as_deref(), prec)?,
            pi,
            widened(&self.theta, self.theta_radius.as_deref(), prec)?,
            widened(&self.li, self.li_radius.as_deref(), prec)?,
            &self.source,
            self.oracle_verifiable,
            prec,
        )
    }

    /// Record for an anchor; values are written with `digits` significant
    /// digits and radii covering the enclosures plus the printing error.
    pub fn from_anchor(a: &ExactAnchor, digits: usize) -> Self {
        let show = |e: &Enclosure| {
            let mid = e.mid();
            let text = mid.to_string_radix(10, Some(digits));
            let printed = Float::with_val(e.prec(), Float::parse(&text).unwrap());
            let dist_lo = Float::with_val(e.prec(), &printed - e.lo()).abs();
            let dist_hi = Float::with_val(e.prec(), e.hi() - &printed).abs();
            let r = dist_lo.max(&dist_hi);
            let radius = if r.is_zero() { None } else { Some(crate::numerics::fmt_sci(&r, 3, rug::float::Round::Up)) };
            (text, radius)
        };
        let (x0, x0_radius) = show(&a.x0);
        let (theta, theta_radius) = show(&a.theta);
        let (li, li_radius) = show(&a.li);
        AnchorRecord {
            name: a.name.clone(),
            x0,
            x0_radius,
            pi: a.pi.to_string(),
            theta,
            theta_radius,
            li,
            li_radius,
            source: a.source.clone(),
            oracle_verifiable: a.oracle_verifiable,
        }
    }
}

impl AnchorFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse {
            line: e.span().map(|s| text[..s.start].lines().count().max(1)).unwrap_or(0),
            msg: e.message().to_string(),
        })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        AnchorFile::parse(&std::fs::read_to_string(path)?)
    }

    pub fn builtin() -> Self {
        AnchorFile::parse(BUILTIN_ANCHORS).expect("shipped anchors parse")
    }

    pub fn format(&self) -> String {
        toml::to_string(self).expect("anchor records always serialise")
    }

    pub fn get(&self, name: &str) -> Result<&AnchorRecord> {
        self.anchors
            .iter()
            .find(|a| a.name == name)
            .ok_or_else(|| Error::Invalid(format!("no anchor named `{name}`")))
    }
}

/// Reads the anchors file and returns the anchor called `name`.
pub fn load_anchor(path: impl AsRef<Path>, name: &str, prec: u32) -> Result<ExactAnchor> {
    AnchorFile::read(path)?.get(name)?.to_anchor(prec)
}
