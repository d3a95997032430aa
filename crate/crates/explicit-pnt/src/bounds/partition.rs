use rug::Float;

use crate::error::{Error, Result};
use crate::numerics::Enclosure;

/// Strictly increasing log-scale breakpoints `b₁ < … < b_N`.
///
/// A single point is allowed and describes the empty range `[b₁, b₁]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Partition {
    points: Vec<Enclosure>,
}

impl Partition {
    pub fn new(points: Vec<Enclosure>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Invalid("a partition needs at least one point".into()));
        }
        if let Some(i) = points.windows(2).position(|w| !w[0].certainly_lt(&w[1])) {
            return Err(Error::Invalid(format!(
                "partition points {} and {} are not strictly increasing",
                points[i],
                points[i + 1]
            )));
        }
        Ok(Partition { points })
    }

    /// `start`, every breakpoint of `interior` strictly between `start` and
    /// `end`, then `end`; each resulting gap is split into `refinement`
    /// equal pieces.
    pub fn from_grid(start: &Enclosure, end: &Enclosure, interior: &[Enclosure], refinement: u32) -> Result<Self> {
        if end.certainly_lt(start) {
            return Err(Error::Invalid(format!("partition end {end} lies below its start {start}")));
        }
        let mut coarse = vec![start.clone()];
        coarse.extend(interior.iter().filter(|p| start.certainly_lt(p) && p.certainly_lt(end)).cloned());
        if start != end {
            coarse.push(end.clone());
        }
        Partition::new(coarse)?.refine(refinement)
    }

    /// Split every gap into `k` equal pieces; `k ≤ 1` is the identity.
    pub fn refine(&self, k: u32) -> Result<Self> {
        if k <= 1 {
            return Ok(self.clone());
        }
        let mut out = Vec::with_capacity((self.points.len() - 1) * k as usize + 1);
        for w in self.points.windows(2) {
            out.push(w[0].clone());
            let p = w[0].prec().max(w[1].prec());
            let gap = &w[1] - &w[0];
            for j in 1..k {
                let frac = Enclosure::point(Float::with_val(p, j)).div(&Enclosure::point(Float::with_val(p, k)))?;
                let pt = &w[0] + &(&gap * &frac);
                // keep the break a single float so neighbouring pieces share it
                out.push(Enclosure::point(pt.mid()));
            }
        }
        out.push(self.points.last().unwrap().clone());
        Partition::new(out)
    }

    pub fn points(&self) -> &[Enclosure] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> &Enclosure {
        &self.points[0]
    }

    pub fn last(&self) -> &Enclosure {
        self.points.last().unwrap()
    }

    /// Consecutive pairs `(b_i, b_{i+1})`.
    pub fn pieces(&self) -> impl Iterator<Item = (&Enclosure, &Enclosure)> {
        self.points.windows(2).map(|w| (&w[0], &w[1]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: i64) -> Enclosure {
        Enclosure::from_i64(v, 64)
    }

    #[test]
    fn grid_keeps_interior_rows_and_refines() {
        let p = Partition::from_grid(&e(10), &e(20), &[e(5), e(12), e(15), e(25)], 2).unwrap();
        let v: Vec<f64> = p.points().iter().map(|x| x.mid().to_f64()).collect();
        assert_eq!(v, vec![10.0, 11.0, 12.0, 13.5, 15.0, 17.5, 20.0]);
    }

    #[test]
    fn single_point_is_allowed() {
        let p = Partition::from_grid(&e(10), &e(10), &[], 4).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.pieces().count(), 0);
    }

    #[test]
    fn rejects_disorder() {
        assert!(Partition::new(vec![e(2), e(2)]).is_err());
    }
}
