//! Independent oracles used by the integration tests.
#![allow(dead_code)]

use rug::float::Round;
use rug::Float;

pub const P: u32 = 192;

pub fn fl(s: &str) -> Float {
    Float::with_val(256, Float::parse(s).unwrap())
}

/// True when `x` lies within relative distance `rel` of the enclosure. Frozen
/// constants carry about 40 digits, far coarser than a 192-bit enclosure.
pub fn near(x: &explicit_pnt::numerics::Enclosure, value: &str, rel: f64) -> bool {
    let v = fl(value);
    let slack = Float::with_val(256, &v * rel).abs();
    let lo = Float::with_val(256, x.lo() - &slack);
    let hi = Float::with_val(256, x.hi() + &slack);
    lo <= v && v <= hi
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Bracket for `∫_a^b f` when `f` is convex on `[a, b]`: the midpoint rule
/// undershoots and the trapezoid rule overshoots. A relative margin of
/// `1e-40` absorbs the rounding of the 256-bit evaluation.
pub fn convex_quad(f: impl Fn(&Float) -> Float, a: &Float, b: &Float, n: u32) -> (Float, Float) {
    let prec = 256;
    let h = Float::with_val(prec, b - a) / n;
    let mut trap = Float::with_val(prec, f(a) + f(b)) / 2u32;
    let mut mid = Float::new(prec);
    for i in 0..n {
        let left = Float::with_val(prec, a + Float::with_val(prec, &h * i));
        if i > 0 {
            trap += f(&left);
        }
        let m = Float::with_val(prec, &left + Float::with_val(prec, &h / 2u32));
        mid += f(&m);
    }
    let lo = Float::with_val(prec, &mid * &h) * Float::with_val(prec, 1.0 - 1e-40);
    let hi = Float::with_val(prec, &trap * &h) * Float::with_val(prec, 1.0 + 1e-40);
    (lo, hi)
}

/// `e^{-s} ∫_a^b e^u/u² du` by convex quadrature.
pub fn j_oracle(a: &Float, b: &Float, s: &Float, n: u32) -> (Float, Float) {
    convex_quad(
        |u| {
            let e = Float::with_val(256, u - s).exp();
            e / Float::with_val(256, u * u)
        },
        a,
        b,
        n,
    )
}

/// `Li(x) = ∫_{log 2}^{log x} e^u/u du` by convex quadrature.
pub fn li_oracle(x: &Float, n: u32) -> (Float, Float) {
    let a = Float::with_val(256, 2).ln();
    let b = Float::with_val(256, x).ln();
    convex_quad(|u| Float::with_val(256, u.exp_ref()) / u, &a, &b, n)
}

/// Dawson's function from the alternating series
/// `Σ (−1)ⁿ 2ⁿ y^{2n+1}/(2n+1)!!`, whose terms decrease once `2y² < 2n+3`;
/// the tail is then bounded by the first omitted term.
pub fn dawson_alternating(y: f64) -> (Float, Float) {
    let prec = 512;
    let y = Float::with_val(prec, y);
    let y2 = Float::with_val(prec, &y * &y);
    let mut term = y.clone();
    let mut sum = Float::new(prec);
    let mut n = 0u32;
    loop {
        if n % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        let next = Float::with_val(prec, &term * &y2) * 2u32 / (2 * n + 3);
        if (2 * n + 3) as f64 > 2.0 * y2.to_f64() && next < 1e-60 {
            let slack = next.clone();
            let lo = Float::with_val(prec, &sum - &slack);
            let hi = Float::with_val(prec, &sum + &slack);
            return (lo, hi);
        }
        term = next;
        n += 1;
    }
}

/// Primes up to `n` by trial division.
pub fn primes_trial(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| (2..).take_while(|d| d * d <= k).all(|d| k % d != 0)).collect()
}

pub fn to_f64_up(x: &Float) -> f64 {
    x.to_f64_round(Round::Up)
}
