mod common;

use common::{fl, near, P};
use explicit_pnt::bounds::*;
use explicit_pnt::numerics::{Dir, Enclosure, Rounding};
use explicit_pnt::tables_io::load_table;
use explicit_pnt::Error;
use proptest::prelude::*;
use rug::Float;

const R: &str = "5.5666305";

fn tables(name: &str) -> String {
    format!("{}/../../tables/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn curve(a: &str) -> AsymptoticBound {
    AsymptoticBound::parse(Kind::Pi, a, "3/2", "2", R, "ln(2)", P).unwrap()
}

fn lx(s: &str) -> Enclosure {
    parse_log_x(s, P).unwrap()
}

#[test]
fn eval_at_two() {
    let c = AsymptoticBound::parse(Kind::Theta, "121.0961", "3/2", "2", R, "ln(2)", P).unwrap();
    let v = c.eval(&lx("ln(2)"), P).unwrap();
    assert!(near(&v, "2.6271175216585928870258449420600473605941", 1e-35));
}

#[test]
fn eval_interpolation_row() {
    let v = curve("121.107").eval_asymp(&lx("100"), Dir::Up, P).unwrap();
    assert_eq!(v.rounding(), Rounding::Up);
    assert_eq!(v.to_sci(5), "1.9202e0");
}

#[test]
fn eval_tends_to_zero() {
    let c = curve("121.107");
    let mut prev = c.eval(&lx("100"), P).unwrap();
    for l in ["1000", "1e4", "1e5", "1e6", "1e7"] {
        let v = c.eval(&lx(l), P).unwrap();
        assert!(v.certainly_lt(&prev));
        prev = v;
    }
    assert!(prev.hi() < &Float::with_val(P, Float::parse("1e-1000").unwrap()));
}

#[test]
fn plain_form_values() {
    let (a, b, c) = curve("121.107").to_plain_form(P).unwrap();
    assert!(a.value() <= &fl("9.2211"));
    assert!(c.value() >= &fl("0.84768363"));
    assert_eq!(b, 3u32 / rug::Rational::from(2));
    assert!(a.value() >= &fl("9.2210558813513077691742668647662076"));
    let (a, _, _) = curve("121.0961").to_plain_form(P).unwrap();
    assert!(near(&a.as_point(), "9.2202259581502811624984842963859657818", 1e-35));
    assert!(near(&c.as_point(), "0.84768363366831927209446908509907679757", 1e-35));
}

#[test]
fn plain_form_with_unit_r() {
    let c = AsymptoticBound::parse(Kind::Pi, "7.5", "1.25", "0.75", "1", "1", P).unwrap();
    let (a, b, cc) = c.to_plain_form(P).unwrap();
    assert_eq!(a.to_f64(), 7.5);
    assert_eq!(b, rug::Rational::from((5, 4)));
    assert_eq!(cc.to_f64(), 0.75);
}

#[test]
fn threshold_of_headline_curve() {
    let t = curve("121.107").decreasing_threshold(P).unwrap();
    assert!(near(&t, "12.524918625", 1e-30));
    assert!(curve("121.107").decreasing_on(&lx("12.53"), P).unwrap());
    assert!(!curve("121.107").decreasing_on(&lx("12.52"), P).unwrap());
}

#[test]
fn decreasing_from_cases() {
    let e = |s: &str| Enclosure::from_decimal(s, P).unwrap();
    let c = Enclosure::from_i64(2, P).div(&e(R).sqrt().unwrap()).unwrap();
    assert_eq!(decreasing_from(&e("1"), &e("-0.5"), &c, P).unwrap(), Monotonicity::Always);
    assert_eq!(decreasing_from(&e("0.5"), &e("-1.5"), &c, P).unwrap(), Monotonicity::Always);
    match decreasing_from(&e("0"), &e("-1"), &e("2"), P).unwrap() {
        Monotonicity::Until(t) => assert!(t.contains(&fl("1"))),
        other => panic!("{other:?}"),
    }
    match decreasing_from(&e("1"), &e("4"), &e("2"), P).unwrap() {
        // q(u) = −u² + u + 4 has its positive root at (1 + √17)/2
        Monotonicity::From(t) => assert!(near(&t, "6.5615528128088302749107049279870385125735", 1e-30)),
        other => panic!("{other:?}"),
    }
    assert!(decreasing_from(&e("-1"), &e("1"), &e("1"), P).is_err());
}

#[test]
fn table3_lookups() {
    let t = load_table(tables("table3.csv"), P).unwrap();
    assert_eq!(t.kind(), Kind::Theta);
    let at100 = t.eval_step(&lx("100")).unwrap();
    assert!(at100.value() >= &fl("2.0097e-12"));
    assert!(at100.value() <= &fl("2.00970000000001e-12"));
    assert_eq!(t.eval_step(&lx("105")).unwrap().value(), at100.value());
    assert!(matches!(t.eval_step(&lx("1")), Err(Error::BelowTable { .. })));
}

#[test]
fn step_constructor_errors() {
    assert!(matches!(StepBoundTable::new(Kind::Pi, vec![]), Err(Error::EmptyTable)));
    let row = |l: i64| StepRow::new(Enclosure::from_i64(l, P), Float::with_val(P, 1), "t");
    assert!(matches!(StepBoundTable::new(Kind::Pi, vec![row(2), row(1)]), Err(Error::Order { line: 2 })));
    assert!(matches!(StepBoundTable::new(Kind::Pi, vec![row(1), row(1)]), Err(Error::Order { .. })));
}

#[test]
fn log_x_syntax() {
    assert!(lx("ln(1e15)").contains(&Float::with_val(P, Float::parse("1e15").unwrap()).ln()));
    assert_eq!(lx("100000").lo(), &100000);
    assert!(lx("ln(1e15)").rel_width() < 1e-50);
    assert!(parse_log_x("ln(-1)", P).is_err());
    assert!(parse_log_x("abc", P).is_err());
    assert_eq!(parse_rational("3/2").unwrap(), rug::Rational::from((3, 2)));
    assert_eq!(parse_rational("1e15").unwrap(), rug::Rational::from(10i64.pow(15)));
    assert_eq!(parse_rational("-1.503").unwrap(), rug::Rational::from((-1503, 1000)));
}

#[test]
fn partition_from_grid() {
    let rows: Vec<Enclosure> = [30, 40, 50, 60].iter().map(|&v| Enclosure::from_i64(v, P)).collect();
    let p = Partition::from_grid(&lx("35"), &lx("55"), &rows, 2).unwrap();
    let pts: Vec<f64> = p.points().iter().map(|e| e.mid().to_f64()).collect();
    assert_eq!(pts, vec![35.0, 37.5, 40.0, 45.0, 50.0, 52.5, 55.0]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eval_decreasing_past_threshold(l in 12.6f64..5e4, dl in 0.01f64..500.0) {
        let c = curve("121.107");
        let a = c.eval(&Enclosure::from_f64(l, P), P).unwrap();
        let b = c.eval(&Enclosure::from_f64(l + dl, P), P).unwrap();
        prop_assert!(b.hi() <= a.lo());
    }

    #[test]
    fn plain_form_dominates(l in 0.7f64..1e5) {
        let c = curve("121.107");
        let (a, b, cc) = c.to_plain_form(P).unwrap();
        let le = Enclosure::from_f64(l, P);
        let b = Enclosure::from_rational(&b, P);
        let plain = &(&a.as_point() * &le.pow(&b).unwrap()) * &(-&(&cc.as_point() * &le.sqrt().unwrap())).exp();
        // equal in exact arithmetic; the plain form must never be certainly smaller
        let direct = c.eval(&le, P).unwrap();
        prop_assert!(!plain.certainly_lt(&direct));
        prop_assert!(direct.lo() <= plain.hi());
    }

    #[test]
    fn step_right_continuity(i in 0usize..40, frac in 0.0f64..0.999) {
        let t = load_table(tables("table3.csv"), P).unwrap();
        let i = i % (t.len() - 1);
        let (a, b) = (&t.rows()[i].log_x, &t.rows()[i + 1].log_x);
        let inside = a + &(&(b - a) * &Enclosure::from_f64(frac, P));
        prop_assert_eq!(t.eval_step(a).unwrap().into_float(), t.eval_step(&inside).unwrap().into_float());
    }

    #[test]
    fn threshold_sign_test(a in 0.05f64..3.0, b in -3.0f64..3.0, c in 0.1f64..4.0) {
        let e = |v: f64| Enclosure::from_f64(v, P);
        let slope = |l: f64| -> f64 {
            let u = l.sqrt();
            -a + b / (u * u) + c / (2.0 * u)
        };
        if let Monotonicity::From(t) = decreasing_from(&e(a), &e(b), &e(c), P).unwrap() {
            let t = t.mid().to_f64();
            prop_assume!(t > 1e-3);
            prop_assert!(slope(t * (1.0 + 1e-3)) < 0.0);
            prop_assert!(slope(t * (1.0 - 1e-3)) > 0.0);
        }
    }
}
