mod common;

use common::*;
use explicit_pnt::numerics::*;
use explicit_pnt::Error;
use proptest::prelude::*;
use rug::Float;

fn e(s: &str) -> Enclosure {
    Enclosure::from_decimal(s, P).unwrap()
}

#[test]
fn exp_of_log_two_is_tight() {
    let l = xr_arith(ArithOp::Log, &[Enclosure::from_i64(2, 64)], Dir::Up, 64).unwrap();
    let lo = Enclosure::from_i64(2, 64).ln().unwrap();
    let two = lo.exp();
    assert!(two.contains(&Float::with_val(64, 2)));
    assert!(two.width() <= Float::with_val(64, 2f64.powi(-60)));
    assert!(l.value() >= lo.lo());
}

#[test]
fn sqrt_of_zero_is_exact_zero() {
    let r = xr_arith(ArithOp::Sqrt, &[Enclosure::zero(64)], Dir::Up, 64).unwrap();
    assert!(r.value().is_zero());
    assert_eq!(r.rounding(), Rounding::Exact);
}

#[test]
fn log_magnitudes_are_carried_symbolically() {
    let m = LogMagnitude::from_log(Enclosure::from_i64(100_000, 64));
    assert_eq!(m.ln(), &Enclosure::from_i64(100_000, 64));
    assert!(m.value().is_err());
}

#[test]
fn domain_errors() {
    assert!(matches!(e("-1").ln(), Err(Error::Domain(_))));
    assert!(matches!(e("-1").sqrt(), Err(Error::Domain(_))));
    let straddle = Enclosure::new(Float::with_val(64, -1), Float::with_val(64, 1)).unwrap();
    assert!(matches!(e("1").div(&straddle), Err(Error::Domain(_))));
    assert!(matches!(li_moderate(&e("1.5"), P), Err(Error::Domain(_))));
    assert!(matches!(dawson(&e("-0.1"), P), Err(Error::Domain(_))));
}

#[test]
fn extreme_magnitudes_do_not_overflow() {
    let big = Enclosure::from_i64(10_000_000, P).exp();
    let tiny = Enclosure::from_i64(-23_025_851, P).exp();
    assert!(big.is_finite() && big.lo() > &0);
    assert!(tiny.is_finite() && tiny.lo() > &0);
}

#[test]
fn dawson_at_its_maximum() {
    let d = dawson(&Enclosure::from_f64(0.92414, P), P).unwrap();
    let (lo, hi) = dawson_alternating(0.92414);
    assert!(d.lo() <= &hi && &lo <= d.hi(), "{d}");
    let d = dawson(&e("0.92414"), P).unwrap();
    assert!(near(&d, "0.54104422463449450858961844568301224", 1e-30));
    let peak = dawson(&e("0.924138873004591767"), P).unwrap();
    assert!(near(&peak, "0.541044224635181698472759330247", 1e-28));
}

#[test]
fn dawson_against_alternating_series() {
    for y in [0.1, 0.5, 1.0, 2.0, 3.5, 5.0] {
        let d = dawson(&Enclosure::from_f64(y, P), P).unwrap();
        let (lo, hi) = dawson_alternating(y);
        assert!(d.lo() <= &hi && &lo <= d.hi(), "y = {y}: {d}");
        assert!(d.rel_width() <= 2f64.powi(-96));
    }
}

#[test]
fn dawson_large_arguments() {
    let d = dawson(&e("100"), P).unwrap();
    assert!(near(&d, "0.0050002500375093782827273751376423339", 1e-30));
    assert!(d.rel_width() <= 2f64.powi(-96));
    // asymptotic oracle: 1/(2y) + 1/(4y³) + 3/(8y⁵) with next term as slack
    let y = 100f64;
    let head = 1.0 / (2.0 * y) + 1.0 / (4.0 * y.powi(3)) + 3.0 / (8.0 * y.powi(5));
    assert!((d.mid().to_f64() - head).abs() < 2.0 * 15.0 / (16.0 * y.powi(7)));
    // quadrature cross-check of e^{-y²}∫ e^{t²} dt over the last unit
    let (lo, hi) = convex_quad(
        |t| Float::with_val(256, Float::with_val(256, t * t) - 10_000u32).exp(),
        &fl("99"),
        &fl("100"),
        40_000,
    );
    let tail_slack = 99.0 * (-199f64).exp();
    assert!(d.lo().to_f64() <= hi.to_f64() + tail_slack && lo.to_f64() <= d.hi().to_f64());
    assert!(rel_diff(lo.to_f64(), d.mid().to_f64()) < 1e-4);
    for y in ["3163", "10000"] {
        let d = dawson(&e(y), P).unwrap();
        assert!(d.rel_width() <= 2f64.powi(-96), "{y}");
    }
    assert!(near(&dawson(&e("3163"), P).unwrap(), "0.00015807778216521860990620882244218", 1e-30));
}

#[test]
fn dawson_zero() {
    assert!(dawson(&Enclosure::zero(P), P).unwrap().hi().is_zero());
}

#[test]
fn j_integral_against_quadrature() {
    let l0 = Enclosure::from_i64(10, P).powi(15).unwrap().ln().unwrap();
    let j = j_integral(&l0, &e("100"), &e("100"), P).unwrap();
    assert!(near(&j, "0.00010206252774835711230035991846677517226", 1e-30));
    let (lo, hi) = j_oracle(&fl(&format!("{}", l0.mid())), &fl("100"), &fl("100"), 200_000);
    assert!(rel_diff(j.mid().to_f64(), lo.to_f64()) < 1e-8 && j.lo() <= &hi);

    let j = j_integral(&e("100"), &e("100.1"), &e("100.1"), P).unwrap();
    assert!(near(&j, "0.0000095065931054565054956899353289112350721840297548937", 1e-30));
    let (lo, hi) = j_oracle(&fl("100"), &fl("100.1"), &fl("100.1"), 2_000);
    assert!(j.lo() <= &hi && &lo <= j.hi());
    // (b−a)e^{a−s}/b² ≤ J ≤ (b−a)e^{b−s}/a²
    let sanity_lo = 0.1 * (-0.1f64).exp() / (100.1f64 * 100.1);
    let sanity_hi = 0.1 / (100.0f64 * 100.0);
    assert!(sanity_lo <= j.mid().to_f64() && j.mid().to_f64() <= sanity_hi);
}

#[test]
fn j_integral_frozen_values() {
    let cases = [
        ("2", "40", "40", "0.00065886278597513985413474125667614274216"),
        ("200", "300", "300", "0.000011185935970449299977657088023420693488"),
        ("100000", "100016", "100016", "0.000000000099969995524890510244922517016654"),
    ];
    for (a, b, s, v) in cases {
        let j = j_integral(&e(a), &e(b), &e(s), P).unwrap();
        assert!(near(&j, v, 1e-30), "J({a},{b},{s}) = {j}");
        assert!(j.rel_width() < 1e-50);
    }
}

#[test]
fn j_integral_preconditions() {
    assert!(j_integral(&e("5"), &e("5"), &e("5"), P).unwrap().hi().is_zero());
    assert!(matches!(j_integral(&e("0.5"), &e("5"), &e("5"), P), Err(Error::Domain(_))));
    assert!(matches!(j_integral(&e("6"), &e("5"), &e("6"), P), Err(Error::Domain(_))));
}

#[test]
fn li_values() {
    assert!(li_moderate(&e("2"), P).unwrap().hi().is_zero());
    let v = li_moderate(&e("100"), P).unwrap();
    assert!(near(&v, "29.080977803962137141057152449837571843", 1e-30));
    let (lo, hi) = li_oracle(&fl("100"), 100_000);
    assert!(v.lo() <= &hi && &lo <= v.hi());
    let v = li_moderate(&e("1e15"), P).unwrap();
    assert!(near(&v, "29844571475286.535901125773093201098", 1e-30));
    assert!(near(&li2(P).unwrap(), "1.0451637801174927848445888891946131365", 1e-30));
}

#[test]
fn retry_doubles_precision() {
    let mut seen = vec![];
    let r = with_precision_retry(192, |p| {
        seen.push(p);
        if p < 1000 {
            Err(Error::PrecisionExhausted("x".into()))
        } else {
            Ok(p)
        }
    });
    assert_eq!(r.unwrap(), 1536);
    assert_eq!(seen, vec![192, 384, 768, 1536]);
}

#[test]
fn formatting_respects_direction() {
    let x = e("121.09607671");
    assert_eq!(x.upper().to_fixed(4), "121.0961");
    assert_eq!(x.lower().to_fixed(4), "121.0960");
    assert_eq!(e("2.00971e-12").upper().to_sci(5), "2.0098e-12");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn directional_soundness(a in 0.01f64..1e6, b in 0.01f64..1e6, op in 0usize..8) {
        let ops = [ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Div, ArithOp::Pow, ArithOp::Exp, ArithOp::Log, ArithOp::Sqrt];
        let op = ops[op];
        let b = if op == ArithOp::Pow { b.ln() } else { b };
        let args: Vec<Enclosure> = match op {
            ArithOp::Exp => vec![Enclosure::from_f64(a.ln(), 64)],
            ArithOp::Log | ArithOp::Sqrt => vec![Enclosure::from_f64(a, 64)],
            _ => vec![Enclosure::from_f64(a, 64), Enclosure::from_f64(b, 64)],
        };
        let up = xr_arith(op, &args, Dir::Up, 64).unwrap();
        let down = xr_arith(op, &args, Dir::Down, 64).unwrap();
        let fine = xr_arith(op, &args, Dir::Up, 512).unwrap();
        prop_assert!(down.value() <= up.value());
        prop_assert!(down.value() <= fine.value() && fine.value() <= up.value());
    }

    #[test]
    fn dawson_ode_residual(y in 0.05f64..30.0) {
        let h = 1e-6;
        let d = |t: f64| dawson(&Enclosure::from_f64(t, P), P).unwrap();
        let (dm, d0, dp) = (d(y - h), d(y), d(y + h));
        let deriv = (dp.mid().to_f64() - dm.mid().to_f64()) / (2.0 * h);
        let residual = deriv + 2.0 * y * d0.mid().to_f64() - 1.0;
        // central difference error h²/6·|D'''| plus enclosure widths
        let tol = 1e-9 * (1.0 + y * y * y) + d0.rel_width() * 1e6;
        prop_assert!(residual.abs() <= tol, "y = {y}: residual {residual:e}");
    }

    #[test]
    fn dawson_decreasing_past_the_peak(y in 0.95f64..200.0, dy in 1e-6f64..5.0) {
        let a = dawson(&Enclosure::from_f64(y, P), P).unwrap();
        let b = dawson(&Enclosure::from_f64(y + dy, P), P).unwrap();
        prop_assert!(a.lo() >= b.hi() || a.overlaps(&b));
        prop_assert!(a.mid() > b.mid());
    }

    #[test]
    fn j_additivity(a in 1.01f64..400.0, w1 in 0.0f64..50.0, w2 in 0.0f64..50.0) {
        let (b, c) = (a + w1, a + w1 + w2);
        let s = Enclosure::from_f64(c, P);
        let ea = Enclosure::from_f64(a, P);
        let eb = Enclosure::from_f64(b, P);
        let ec = Enclosure::from_f64(c, P);
        let whole = j_integral(&ea, &ec, &s, P).unwrap();
        let parts = &j_integral(&ea, &eb, &s, P).unwrap() + &j_integral(&eb, &ec, &s, P).unwrap();
        prop_assert!(whole.overlaps(&parts), "{whole} vs {parts}");
    }

    #[test]
    fn li_consistent_with_j(a in 1.01f64..40.0, w in 0.0f64..20.0) {
        let b = (a + w).min(40.0);
        let ea = Enclosure::from_f64(a, P);
        let eb = Enclosure::from_f64(b, P);
        let li_diff = &li_moderate(&eb.exp(), P).unwrap() - &li_moderate(&ea.exp(), P).unwrap();
        let via_j = &(&eb.exp().div(&eb).unwrap() - &ea.exp().div(&ea).unwrap()) + &inv_log_sq_integral(&ea, &eb, P).unwrap();
        prop_assert!(li_diff.overlaps(&via_j), "{li_diff} vs {via_j}");
        prop_assert!(li_diff.width().to_f64() < 1e-30 * (1.0 + li_diff.hi().to_f64()));
    }
}
