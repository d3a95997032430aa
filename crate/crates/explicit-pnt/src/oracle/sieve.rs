use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;
use rug::float::Round;
use rug::{Float, Integer};

use crate::error::{Error, Result};
use crate::numerics::Enclosure;

pub const DEFAULT_LIMIT: u64 = 100_000_000;
pub const MAX_LIMIT: u64 = 1_000_000_000;
/// Checkpoints are kept every `2¹⁶` integers.
pub const CHECKPOINT_STRIDE: u64 = 1 << 16;
/// Fractional bits of the fixed-point θ and ψ sums.
pub const FRAC_BITS: u32 = 96;

const WORDS_PER_SEGMENT: usize = (CHECKPOINT_STRIDE / 128) as usize;
const LOG_PREC: u32 = 192;
const CACHE_MAGIC: &[u8; 8] = b"EPNTCKPT";
const CACHE_VERSION: u32 = 1;

/// Outward-rounded fixed-point interval `[lo, hi]·2^{−96}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Fixed {
    pub lo: u128,
    pub hi: u128,
}

impl Fixed {
    fn from_enclosure(e: &Enclosure) -> Fixed {
        let to = |f: &Float, r: Round| -> u128 {
            let scaled = Float::with_val(f.prec(), f << FRAC_BITS);
            let (i, _) = scaled.to_integer_round(r).expect("finite log sum");
            i.to_u128().expect("log sum fits the fixed-point range")
        };
        Fixed { lo: to(e.lo(), Round::Down), hi: to(e.hi(), Round::Up) }
    }

    fn add(self, o: Fixed) -> Fixed {
        Fixed { lo: self.lo + o.lo, hi: self.hi + o.hi }
    }

    pub fn to_enclosure(self, prec: u32) -> Enclosure {
        let p = prec.max(128);
        let f = |v: u128| Float::with_val(p, Integer::from(v)) >> FRAC_BITS;
        Enclosure::new(f(self.lo), f(self.hi)).expect("ordered fixed-point interval")
    }
}

/// Cumulative sums over all integers below a checkpoint.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Checkpoint {
    pub pi: u64,
    pub theta: Fixed,
    pub psi: Fixed,
}

/// `π(x)` exactly, `θ(x)` and `ψ(x)` enclosed.
#[derive(Clone, Debug, PartialEq)]
pub struct Counts {
    pub pi: u64,
    pub theta: Enclosure,
    pub psi: Enclosure,
}

/// Primes up to `limit` as an odd-only bitset, with checkpoints every
/// [`CHECKPOINT_STRIDE`] integers.
#[derive(Clone, Debug)]
pub struct PrimeStore {
    limit: u64,
    bits: Vec<u64>,
    checkpoints: Vec<Checkpoint>,
    /// `(p^k, p)` for `k ≥ 2`, sorted by `p^k`.
    prime_powers: Vec<(u64, u64)>,
}

fn small_primes(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = vec![];
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Product of `v` by a balanced tree of multiplications.
pub(crate) fn product(mut v: Vec<Integer>) -> Integer {
    if v.is_empty() {
        return Integer::from(1);
    }
    while v.len() > 1 {
        v = v
            .chunks(2)
            .map(|c| match c {
                [a, b] => Integer::from(a * b),
                [a] => a.clone(),
                _ => unreachable!(),
            })
            .collect();
    }
    v.pop().unwrap()
}

fn ln_product(factors: Vec<Integer>) -> Result<Enclosure> {
    let p = product(factors);
    if p == 1 {
        return Ok(Enclosure::zero(LOG_PREC));
    }
    Enclosure::from_integer(&p, LOG_PREC).ln()
}

impl PrimeStore {
    /// Sieve up to `limit` (at most [`MAX_LIMIT`]).
    pub fn new(limit: u64) -> Result<Self> {
        Self::build(limit, None)
    }

    /// Like [`PrimeStore::new`], reusing checkpoints from `cache` when it
    /// matches `limit` and writing them there otherwise.
    pub fn with_cache(limit: u64, cache: impl AsRef<Path>) -> Result<Self> {
        let cache = cache.as_ref();
        let loaded = match std::fs::File::open(cache) {
            Ok(f) => read_checkpoints(f, limit).ok(),
            Err(_) => None,
        };
        let fresh = loaded.is_none();
        let store = Self::build(limit, loaded)?;
        if fresh {
            store.write_checkpoints(std::fs::File::create(cache)?)?;
        }
        Ok(store)
    }

    fn build(limit: u64, cached: Option<Vec<Checkpoint>>) -> Result<Self> {
        if limit < 2 || limit > MAX_LIMIT {
            return Err(Error::Invalid(format!("sieve limit must lie in [2, {MAX_LIMIT}], got {limit}")));
        }
        let base: Vec<u64> = small_primes((limit as f64).sqrt() as u64 + 2).into_iter().filter(|&q| q > 2).collect();
        let segments = (limit / CHECKPOINT_STRIDE + 1) as usize;
        let sieve_segment = |seg: usize| -> Vec<u64> {
            let s = seg as u64 * CHECKPOINT_STRIDE;
            let mut words = vec![!0u64; WORDS_PER_SEGMENT];
            for &q in &base {
                if q * q >= s + CHECKPOINT_STRIDE {
                    break;
                }
                let mut m = (q * q).max(s.div_ceil(q) * q);
                if m % 2 == 0 {
                    m += q;
                }
                while m < s + CHECKPOINT_STRIDE {
                    let i = ((m - s) / 2) as usize;
                    words[i / 64] &= !(1u64 << (i % 64));
                    m += 2 * q;
                }
            }
            if seg == 0 {
                words[0] &= !1;
            }
            if s + CHECKPOINT_STRIDE > limit + 1 {
                for i in 0..(CHECKPOINT_STRIDE / 2) as usize {
                    if s + 2 * i as u64 + 1 > limit {
                        words[i / 64] &= !(1u64 << (i % 64));
                    }
                }
            }
            words
        };
        let words: Vec<Vec<u64>> = (0..segments).into_par_iter().map(sieve_segment).collect();
        let bits: Vec<u64> = words.into_iter().flatten().collect();

        let mut prime_powers = vec![];
        for &p in std::iter::once(&2).chain(base.iter()) {
            let mut pk = p * p;
            while pk <= limit {
                prime_powers.push((pk, p));
                pk = match pk.checked_mul(p) {
                    Some(v) => v,
                    None => break,
                };
            }
        }
        prime_powers.sort_unstable();

        let mut store = PrimeStore { limit, bits, checkpoints: vec![], prime_powers };
        let checkpoints = match cached {
            Some(c) if c.len() == segments + 1 => c,
            _ => store.compute_checkpoints(segments)?,
        };
        store.checkpoints = checkpoints;
        Ok(store)
    }

    fn compute_checkpoints(&self, segments: usize) -> Result<Vec<Checkpoint>> {
        let per_segment: Vec<(u64, Fixed, Fixed)> = (0..segments)
            .into_par_iter()
            .map(|seg| {
                let s = seg as u64 * CHECKPOINT_STRIDE;
                let e = s + CHECKPOINT_STRIDE - 1;
                let primes = self.primes_between(s, e);
                let n = primes.len() as u64;
                let theta = ln_product(primes.into_iter().map(Integer::from).collect())?;
                let extra = ln_product(self.powers_between(s, e).map(|(_, p)| Integer::from(p)).collect())?;
                let theta_fx = Fixed::from_enclosure(&theta);
                Ok((n, theta_fx, theta_fx.add(Fixed::from_enclosure(&extra))))
            })
            .collect::<Result<_>>()?;
        let mut out = Vec::with_capacity(segments + 1);
        let mut acc = Checkpoint::default();
        out.push(acc);
        for (n, t, p) in per_segment {
            acc = Checkpoint { pi: acc.pi + n, theta: acc.theta.add(t), psi: acc.psi.add(p) };
            out.push(acc);
        }
        Ok(out)
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn checkpoints(&self) -> &[Checkpoint] {
        &self.checkpoints
    }

    pub fn is_prime(&self, n: u64) -> bool {
        if n == 2 {
            return true;
        }
        if n < 2 || n % 2 == 0 || n > self.limit {
            return false;
        }
        let i = (n / 2) as usize;
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    /// Primes in `[lo, hi]`, clipped to the limit.
    pub fn primes_between(&self, lo: u64, hi: u64) -> Vec<u64> {
        let hi = hi.min(self.limit);
        let mut out = vec![];
        if lo <= 2 && hi >= 2 {
            out.push(2);
        }
        if hi < 3 || lo > hi {
            return out;
        }
        let first = (lo.max(3) / 2) as usize;
        let last = ((hi - 1) / 2) as usize;
        let mut i = first;
        while i <= last {
            let w = self.bits[i / 64] >> (i % 64);
            if w == 0 {
                i = (i / 64 + 1) * 64;
                continue;
            }
            i += w.trailing_zeros() as usize;
            if i <= last {
                out.push(2 * i as u64 + 1);
            }
            i += 1;
        }
        out
    }

    /// Smallest prime `≥ n`, if one is at most the limit.
    pub fn next_prime(&self, n: u64) -> Option<u64> {
        let mut lo = n;
        while lo <= self.limit {
            let hi = lo.saturating_add(4096);
            if let Some(&p) = self.primes_between(lo, hi).first() {
                return Some(p);
            }
            lo = hi + 1;
        }
        None
    }

    /// Prime powers `(p^k, p)`, `k ≥ 2`, with `p^k` in `[lo, hi]`.
    pub fn powers_between(&self, lo: u64, hi: u64) -> impl Iterator<Item = (u64, u64)> + '_ {
        let start = self.prime_powers.partition_point(|&(pk, _)| pk < lo);
        self.prime_powers[start..].iter().copied().take_while(move |&(pk, _)| pk <= hi)
    }

    /// Exact `π(n)` with `θ(n)`, `ψ(n)` enclosed.
    pub fn counts(&self, n: u64, prec: u32) -> Result<Counts> {
        if n > self.limit {
            return Err(Error::AboveLimit { x: n.to_string(), limit: self.limit });
        }
        let seg = ((n + 1) / CHECKPOINT_STRIDE) as usize;
        let cp = self.checkpoints[seg];
        let s = seg as u64 * CHECKPOINT_STRIDE;
        let (mut pi, mut theta, mut psi) = (cp.pi, cp.theta.to_enclosure(prec), cp.psi.to_enclosure(prec));
        if s <= n {
            let primes = self.primes_between(s, n);
            pi += primes.len() as u64;
            let t = ln_product(primes.into_iter().map(Integer::from).collect())?;
            let extra = ln_product(self.powers_between(s, n).map(|(_, p)| Integer::from(p)).collect())?;
            theta = &theta + &t;
            psi = &(&psi + &t) + &extra;
        }
        Ok(Counts { pi, theta: theta.with_prec(prec.max(128)), psi: psi.with_prec(prec.max(128)) })
    }

    /// [`PrimeStore::counts`] at `⌊x⌋`.
    pub fn exact_counts(&self, x: &Float, prec: u32) -> Result<Counts> {
        if *x < 2 {
            return Err(Error::Domain(format!("exact counts need x >= 2, got {x}")));
        }
        let limit = Float::with_val(64, self.limit);
        if *x >= limit + 1u32 {
            return Err(Error::AboveLimit { x: x.to_string(), limit: self.limit });
        }
        let n = x.to_integer_round(Round::Down).and_then(|(i, _)| i.to_u64()).expect("x below the limit");
        self.counts(n, prec)
    }

    /// Recount `π`, `θ` and `ψ` up to `n` from the bitset alone.
    pub fn rescan(&self, n: u64, prec: u32) -> Result<Counts> {
        if n > self.limit {
            return Err(Error::AboveLimit { x: n.to_string(), limit: self.limit });
        }
        let primes = self.primes_between(0, n);
        let pi = primes.len() as u64;
        let theta = ln_product(primes.into_iter().map(Integer::from).collect())?;
        let extra = ln_product(self.powers_between(0, n).map(|(_, p)| Integer::from(p)).collect())?;
        let psi = &theta + &extra;
        Ok(Counts { pi, theta: theta.with_prec(prec), psi: psi.with_prec(prec) })
    }

    pub fn write_checkpoints(&self, mut w: impl Write) -> Result<()> {
        let mut buf = Vec::with_capacity(32 + self.checkpoints.len() * 72);
        buf.extend_from_slice(CACHE_MAGIC);
        buf.extend_from_slice(&CACHE_VERSION.to_le_bytes());
        buf.extend_from_slice(&self.limit.to_le_bytes());
        buf.extend_from_slice(&CHECKPOINT_STRIDE.to_le_bytes());
        buf.extend_from_slice(&(self.checkpoints.len() as u64).to_le_bytes());
        for c in &self.checkpoints {
            buf.extend_from_slice(&c.pi.to_le_bytes());
            for v in [c.theta.lo, c.theta.hi, c.psi.lo, c.psi.hi] {
                buf.extend_from_slice(&v.to_le_bytes());
            }
        }
        w.write_all(&buf)?;
        Ok(())
    }
}

/// Checkpoints from a cache written by [`PrimeStore::write_checkpoints`].
pub fn read_checkpoints(mut r: impl Read, limit: u64) -> Result<Vec<Checkpoint>> {
    let mut buf = vec![];
    r.read_to_end(&mut buf)?;
    let bad = |msg: &str| Error::Invalid(format!("checkpoint cache: {msg}"));
    let mut pos = 0usize;
    let mut take = |n: usize| -> Result<&[u8]> {
        let s = buf.get(pos..pos + n).ok_or_else(|| bad("truncated"))?;
        pos += n;
        Ok(s)
    };
    if take(8)? != CACHE_MAGIC {
        return Err(bad("bad magic"));
    }
    let u32_at = |s: &[u8]| u32::from_le_bytes(s.try_into().unwrap());
    let u64_at = |s: &[u8]| u64::from_le_bytes(s.try_into().unwrap());
    let u128_at = |s: &[u8]| u128::from_le_bytes(s.try_into().unwrap());
    if u32_at(take(4)?) != CACHE_VERSION {
        return Err(bad("unsupported version"));
    }
    if u64_at(take(8)?) != limit {
        return Err(bad("different limit"));
    }
    if u64_at(take(8)?) != CHECKPOINT_STRIDE {
        return Err(bad("different stride"));
    }
    let n = u64_at(take(8)?) as usize;
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let pi = u64_at(take(8)?);
        let mut v = [0u128; 4];
        for x in &mut v {
            *x = u128_at(take(16)?);
        }
        out.push(Checkpoint { pi, theta: Fixed { lo: v[0], hi: v[1] }, psi: Fixed { lo: v[2], hi: v[3] } });
    }
    Ok(out)
}
