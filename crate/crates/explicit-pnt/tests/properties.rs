mod common;

use common::{fl, j_oracle, primes_trial, P};
use explicit_pnt::bounds::*;
use explicit_pnt::conversions::*;
use explicit_pnt::numerics::{inv_log_sq_integral, li_moderate, Enclosure};
use explicit_pnt::oracle::{verify_pointwise, PrimeStore};
use explicit_pnt::tables_io::{load_table, AnchorFile};
use proptest::prelude::*;
use rug::Float;

const W: u32 = 256;

fn tables(name: &str) -> String {
    format!("{}/../../tables/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn e(v: u64) -> Enclosure {
    Enclosure::from_u64(v, W)
}

/// `π(x) − Li(x)` against its Stieltjes form from `x₀ = 3`:
/// `π(3) − Li(3) − (θ(3) − 3)/log 3 + (θ(x) − x)/log x + ∫₃ˣ (θ(t) − t)/(t log²t) dt`,
/// with `θ` exact and constant between primes.
#[test]
fn stieltjes_closure_to_1e6() {
    let store = PrimeStore::new(1_000_000).unwrap();
    let primes = store.primes_between(0, 1_000_000);
    let checks = [10u64, 97, 1000, 65_537, 123_456, 999_999, 1_000_000];
    let x0 = e(3);
    let l0 = x0.ln().unwrap();
    let theta0 = &e(2).ln().unwrap() + &e(3).ln().unwrap();
    let head = &(&e(2) - &li_moderate(&x0, W).unwrap()) - &(&theta0 - &x0).div(&l0).unwrap();

    // ∫ θ(t)/(t log²t) over [p, p') is θ(p)(1/log p − 1/log p')
    let mut theta = theta0.clone();
    let mut weighted = Enclosure::zero(W);
    let mut inv_prev = l0.recip().unwrap();
    let mut next_check = 0;
    let mut idx = 2; // primes[2] = 5
    let mut pi_count = 2u64;
    while next_check < checks.len() {
        let x = checks[next_check];
        let p = primes.get(idx).copied().filter(|&p| p <= x);
        let stop = p.unwrap_or(x);
        let inv = e(stop).ln().unwrap().recip().unwrap();
        weighted = &weighted + &(&theta * &(&inv_prev - &inv));
        inv_prev = inv;
        match p {
            Some(p) => {
                theta = &theta + &e(p).ln().unwrap();
                pi_count += 1;
                idx += 1;
            }
            None => {
                let xe = e(x);
                let lx = xe.ln().unwrap();
                let integral = &weighted - &inv_log_sq_integral(&l0, &lx, W).unwrap();
                let rhs = &(&head + &(&theta - &xe).div(&lx).unwrap()) + &integral;
                let lhs = &e(pi_count) - &li_moderate(&xe, W).unwrap();
                assert!(lhs.overlaps(&rhs), "x = {x}: {lhs} vs {rhs}");
                assert!((&lhs - &rhs).abs().hi() < &fl("1e-60"));
                next_check += 1;
            }
        }
    }
    assert_eq!(pi_count, 78_498);
    // the closure used the library's integral; cross-check it by quadrature
    let (lo, hi) = j_oracle(&fl("3").ln(), &fl("1e6").ln(), &Float::new(W), 200_000);
    let lib = inv_log_sq_integral(&l0, &e(1_000_000).ln().unwrap(), W).unwrap();
    assert!(lib.lo() <= &hi && lib.hi() >= &lo);
}

#[test]
fn theta_trial_division_small() {
    let store = PrimeStore::new(100_000).unwrap();
    assert_eq!(store.primes_between(0, 10_000), primes_trial(10_000));
}

fn theta_table() -> StepBoundTable {
    load_table(tables("theta.csv"), P).unwrap()
}

fn anchor_1e15() -> ExactAnchor {
    AnchorFile::builtin().get("1e15").unwrap().to_anchor(P).unwrap()
}

#[test]
fn theta_table_is_nonincreasing() {
    assert!(theta_table().non_monotone_rows().is_empty());
}

#[test]
fn finite_branch_just_below_the_edge() {
    let table = theta_table();
    let a = anchor_1e15();
    let disc = AnchorDiscrepancy::from_anchor(&a, P).unwrap();
    let rows: Vec<Enclosure> = table.rows().iter().map(|r| r.log_x.clone()).collect();
    for l1 in ["40", "100", "1000"] {
        let l1 = parse_log_x(l1, P).unwrap();
        let part = Partition::from_grid(&a.log_x0, &l1, &rows, 1).unwrap();
        let l2 = &(&l1 + &l1.ln().unwrap()) - &Enclosure::from_decimal("1e-6", P).unwrap();
        let fin = mu_num(&disc, &table, &part, &l1, Some(&l2), P).unwrap();
        let inf = mu_num(&disc, &table, &part, &l1, None, P).unwrap();
        assert_eq!(fin.branch, TailBranch::Finite);
        assert!(fin.total.certainly_lt(&inf.total));
    }
}

/// A θ bound turned into a π bound from the crossing anchor, checked against
/// every prime gap above `e¹⁰` up to `10⁸`.
#[test]
fn theta_to_pi_sound_at_desk_scale() {
    let theta = AsymptoticBound::parse(Kind::Theta, "121.0961", "3/2", "2", DEFAULT_R, "ln(2)", P).unwrap();
    let a = AnchorFile::builtin().get("crossing").unwrap().to_anchor(P).unwrap();
    let disc = AnchorDiscrepancy::from_anchor(&a, P).unwrap();
    let l1 = parse_log_x("10", P).unwrap();
    let pi = theta_to_pi_asymp(&theta, &disc, &l1, P).unwrap();
    let store = PrimeStore::new(100_000_000).unwrap();
    let huge = Enclosure::from_i64(1_000_000, 128);
    // the curve is unimodal, so its infimum on a range is at an end
    let bound = |r: &Enclosure| -> explicit_pnt::Result<Enclosure> {
        if r.lo() < &10 {
            return Ok(huge.clone());
        }
        let lo = pi.eval(&Enclosure::point(r.lo().clone()), 128)?;
        let hi = pi.eval(&Enclosure::point(r.hi().clone()), 128)?;
        Ok(lo.min(&hi))
    };
    assert!(verify_pointwise(&store, Kind::Pi, &bound, 100_000_000).unwrap().holds());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn li_minus_x_over_log_lemma(l in 1.884f64..41.45) {
        let x = Enclosure::from_f64(l, W).exp();
        prop_assume!(x.lo() >= &fl("6.58"));
        let lx = x.ln().unwrap();
        let li = li_moderate(&x, W).unwrap();
        let lhs = &li - &x.div(&lx).unwrap();
        let rhs = (&x - &Enclosure::from_decimal("6.58", W).unwrap()).div(&lx.sqr()).unwrap();
        prop_assert!(rhs.certainly_lt(&lhs));
        prop_assert!(rhs.lo() >= &0);
    }

    #[test]
    fn sum_term_never_grows_under_refinement(l1 in 40.0f64..400.0, extra in prop::collection::vec(0.0f64..1.0, 1..12)) {
        let table = theta_table();
        let a = anchor_1e15();
        let disc = AnchorDiscrepancy::from_anchor(&a, P).unwrap();
        let l1 = Enclosure::from_f64(l1, P);
        let rows: Vec<Enclosure> = table.rows().iter().map(|r| r.log_x.clone()).collect();
        let coarse = Partition::from_grid(&a.log_x0, &l1, &rows, 1).unwrap();
        let span = &l1 - &a.log_x0;
        let mut pts = coarse.points().to_vec();
        for f in &extra {
            let p = &a.log_x0 + &(&span * &Enclosure::from_f64(*f, P));
            if pts.iter().all(|q| !q.overlaps(&p)) && a.log_x0.certainly_lt(&p) && p.certainly_lt(&l1) {
                pts.push(p);
            }
        }
        pts.sort_by(|x, y| x.lo().partial_cmp(y.lo()).unwrap());
        let fine = Partition::new(pts).unwrap();
        let m0 = mu_num(&disc, &table, &coarse, &l1, None, P).unwrap();
        let m1 = mu_num(&disc, &table, &fine, &l1, None, P).unwrap();
        prop_assert!(m1.sum_term.lo() <= m0.sum_term.hi());
        prop_assert!(m1.total.hi() <= m0.total.hi() || m1.total.overlaps(&m0.total));
    }
}
