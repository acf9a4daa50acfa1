use num_traits::Zero;
use proptest::prelude::*;

use legendre_az::arith::{rat, valuation, LogSum, Prime, Rational};
use legendre_az::energy::{
    az_pairing, energy_nonarch, energy_nonarch_lower_bound, nonarch_cross_integral, nonarch_pairing_lower_bound, nonarch_self_integral, zero_sum, ArchConfig, EnergyValue,
    PairingConfig,
};
use legendre_az::lattes::{LegendreParam, Sigma};
use legendre_az::measures::interval_measure;
use legendre_az::par::Exec;

fn param() -> impl Strategy<Value = LegendreParam> {
    (-400i64..400, 1i64..400).prop_filter_map("admissible", |(n, d)| LegendreParam::new(rat(n, d)).ok())
}

fn odd_prime() -> impl Strategy<Value = Prime> {
    prop::sample::select(vec![3u64, 5, 7]).prop_map(|p| Prime::new(p).unwrap())
}

fn exact(t1: &LegendreParam, t2: &LegendreParam, p: Prime) -> Rational {
    match energy_nonarch(t1, t2, p).unwrap().value {
        EnergyValue::Exact(s) => s.coeff(p.get()),
        other => panic!("expected an exact value, got {other:?}"),
    }
}

fn small_arch() -> ArchConfig {
    ArchConfig { samples: 4000, seed: 9, ..ArchConfig::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn odd_energy_is_nonnegative_and_vanishes_only_for_equal_measures(t1 in param(), t2 in param(), p in odd_prime()) {
        let e = exact(&t1, &t2, p);
        prop_assert!(e >= Rational::zero());
        let (m1, m2) = (interval_measure(&t1, p).unwrap(), interval_measure(&t2, p).unwrap());
        let same = (m1.branch, &m1.center, &m1.lo, &m1.hi) == (m2.branch, &m2.center, &m2.lo, &m2.hi);
        prop_assert_eq!(e.is_zero(), same);
        prop_assert_eq!(e, exact(&t2, &t1, p));
    }

    #[test]
    fn closed_form_matches_integrated_potentials(t1 in param(), t2 in param(), p in odd_prime()) {
        prop_assume!(t1 != t2);
        let i12 = nonarch_cross_integral(&t1, &t2, p).unwrap();
        let i21 = nonarch_cross_integral(&t2, &t1, p).unwrap();
        let i11 = nonarch_self_integral(&t1, p).unwrap();
        let i22 = nonarch_self_integral(&t2, p).unwrap();
        let integrated = (i12.lo - i22.lo + i21.lo - i11.lo) / rat(2, 1);
        prop_assert_eq!(exact(&t1, &t2, p), integrated);
    }

    #[test]
    fn odd_energy_is_symmetric_under_s3(t1 in param(), t2 in param(), p in odd_prime()) {
        let e = exact(&t1, &t2, p);
        for s in Sigma::ALL {
            prop_assert_eq!(exact(&t1.apply(s), &t2.apply(s), p), e.clone(), "sigma = {}", s.name());
        }
    }

    #[test]
    fn square_root_of_the_energy_is_a_metric(t1 in param(), t2 in param(), t3 in param(), p in odd_prime()) {
        let d = |a: &LegendreParam, b: &LegendreParam| crate_f64(&exact(a, b, p)).sqrt();
        prop_assert!(d(&t1, &t3) <= d(&t1, &t2) + d(&t2, &t3) + 1e-12);
    }

    #[test]
    fn lower_bound_is_attained_away_from_the_cusp_at_one(t1 in param(), t2 in param(), p in odd_prime()) {
        let away = |t: &LegendreParam| valuation(&(t.t() - rat(1, 1)), p).unwrap() <= 0;
        prop_assume!(away(&t1) && away(&t2));
        let bound = energy_nonarch_lower_bound(&t1, &t2, p).unwrap().coeff(p.get());
        prop_assert_eq!(exact(&t1, &t2, p), bound);
    }

    #[test]
    fn dyadic_intervals_are_ordered(t1 in param(), t2 in param()) {
        let e = energy_nonarch(&t1, &t2, Prime::new(2).unwrap()).unwrap();
        let (lo, hi) = e.bounds();
        prop_assert!(0.0 <= lo && lo <= hi);
    }
}

fn crate_f64(x: &Rational) -> f64 {
    legendre_az::arith::rational_to_f64(x)
}

#[test]
fn cusp_depth_shadows_of_the_hybrid_limits() {
    // t = p against p^b (same cusp) and p^-b (opposite cusps)
    let p = Prime::new(3).unwrap();
    let t = LegendreParam::new(rat(3, 1)).unwrap();
    for b in [2i64, 3, 5] {
        let pb = 3i64.pow(b as u32);
        let same = LegendreParam::new(rat(pb, 1)).unwrap();
        let opposite = LegendreParam::new(rat(1, pb)).unwrap();
        assert_eq!(exact(&t, &same, p), rat((b - 1) * (b - 1), 6 * b), "b = {b}");
        assert_eq!(exact(&t, &opposite, p), rat(b + 1, 6), "b = {b}");
    }
}

#[test]
fn pairing_routes_agree() {
    let cfg = PairingConfig { arch: small_arch(), cross_check: false };
    for (a, b) in [("2", "3"), ("-1", "1/9"), ("17/5", "-4")] {
        let r = az_pairing(&LegendreParam::parse(a).unwrap(), &LegendreParam::parse(b).unwrap(), &cfg).unwrap();
        let alt = r.alternate.as_ref().unwrap();
        assert!(alt.agrees, "({a}, {b}): {} vs [{}, {}]", r.total, alt.lo, alt.hi);
        assert!(r.lower_confidence(3.0) > 0.0, "({a}, {b}): {}", r.total);
    }
    let t = LegendreParam::parse("5").unwrap();
    assert_eq!(az_pairing(&t, &t, &cfg).unwrap().total, 0.0);
}

#[test]
fn pairing_is_symmetric_at_finite_places() {
    let cfg = PairingConfig { arch: small_arch(), cross_check: false };
    let (a, b) = (LegendreParam::parse("7/2").unwrap(), LegendreParam::parse("-9").unwrap());
    let r1 = az_pairing(&a, &b, &cfg).unwrap();
    let r2 = az_pairing(&b, &a, &cfg).unwrap();
    let nonarch = |r: &legendre_az::energy::EnergyReport| {
        r.places.iter().filter(|e| e.place.prime().is_some()).fold(LogSum::zero(), |acc, e| match &e.value {
            EnergyValue::Exact(s) => &acc + s,
            _ => acc,
        })
    };
    assert_eq!(nonarch(&r1), nonarch(&r2));
}

#[test]
fn self_pairing_sums_to_zero() {
    let cfg = ArchConfig { samples: 8000, exec: Exec::Parallel, ..ArchConfig::default() };
    let z = zero_sum(&LegendreParam::parse("3").unwrap(), &cfg).unwrap();
    assert!(z.sigmas() <= 4.0, "{z:?}");
}

#[test]
fn effective_lower_bound_fixtures() {
    let r = rat(1, 16);
    let (a, b) = (LegendreParam::parse("2").unwrap(), LegendreParam::parse("3").unwrap());
    let lb = nonarch_pairing_lower_bound(&a, &b, &r).unwrap();
    // both 2 and 3 are good places; the 2-adic penalty makes the total negative
    assert_eq!(lb.good_places, vec![2, 3]);
    assert_eq!(lb.exact.coeff(2), rat(-127, 96));
    assert_eq!(lb.exact.coeff(3), rat(1, 96));
    assert!(lb.value < 0.0);
    let finite: f64 = [2u64, 3].iter().map(|p| energy_nonarch(&a, &b, Prime::new(*p).unwrap()).unwrap().bounds().0).sum();
    assert!(lb.value <= finite);
    let c = nonarch_pairing_lower_bound(&LegendreParam::parse("1/3").unwrap(), &b, &r).unwrap();
    assert_eq!(c.exact.coeff(3), rat(2, 96));
}
