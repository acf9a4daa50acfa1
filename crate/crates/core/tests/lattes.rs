use std::collections::BTreeSet;

use num_traits::{One, Zero};
use proptest::prelude::*;

use legendre_az::arith::{rat, ProjectivePointQ, Rational};
use legendre_az::lattes::{
    apply_F, apply_f, exact_order_polynomial, j_invariant, torsion_polynomial, ExtRational, LegendreParam, Sigma,
    TorsionPolynomial,
};
use legendre_az::poly::{rational_roots, Poly};

fn param() -> impl Strategy<Value = LegendreParam> {
    (-40i64..40, 1i64..20).prop_filter_map("admissible", |(n, d)| LegendreParam::new(rat(n, d)).ok())
}

fn point() -> impl Strategy<Value = Rational> {
    (-30i64..30, 1i64..15).prop_map(|(n, d)| rat(n, d))
}

fn dehomogenize(x: &ProjectivePointQ) -> ExtRational {
    match x.to_rational() {
        Some(r) => ExtRational::Finite(r),
        None => ExtRational::Infinity,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn iterates_agree_with_the_homogeneous_lift(t in param(), x in point()) {
        let mut affine = ExtRational::Finite(x.clone());
        let mut proj = ProjectivePointQ::from_rational(&x);
        for _ in 0..5 {
            affine = apply_f(&t, &affine);
            proj = apply_F(&t, &proj).unwrap().point;
            prop_assert_eq!(&affine, &dehomogenize(&proj));
        }
    }

    #[test]
    fn conjugacies(t in param(), x in point()) {
        // alpha(x) = 1 - x conjugates f_t to f_{1-t}
        let one = Rational::one();
        let alpha = |x: &ExtRational| match x {
            ExtRational::Finite(x) => ExtRational::Finite(&one - x),
            ExtRational::Infinity => ExtRational::Infinity,
        };
        let s = t.apply(Sigma::OneMinus);
        let fx = ExtRational::Finite(x.clone());
        prop_assert_eq!(apply_f(&s, &alpha(&fx)), alpha(&apply_f(&t, &fx)));
        // beta(x) = x / t satisfies f_{1/t} o beta = beta o f_t
        let beta = |x: &ExtRational| match x {
            ExtRational::Finite(x) => ExtRational::Finite(x / t.t()),
            ExtRational::Infinity => ExtRational::Infinity,
        };
        let u = t.apply(Sigma::Inverse);
        prop_assert_eq!(apply_f(&u, &beta(&fx)), beta(&apply_f(&t, &fx)));
    }

    #[test]
    fn j_is_invariant_under_the_symmetries(t in param()) {
        let j = j_invariant(&t);
        for s in Sigma::ALL {
            prop_assert_eq!(j_invariant(&t.apply(s)), j.clone());
        }
    }
}

#[test]
fn poles_are_the_two_torsion() {
    for t in ["2", "-7/3", "1/9"] {
        let t = LegendreParam::parse(t).unwrap();
        for x in [Rational::zero(), Rational::one(), t.t().clone()] {
            assert_eq!(apply_f(&t, &ExtRational::Finite(x)), ExtRational::Infinity);
        }
        assert_eq!(apply_f(&t, &ExtRational::Infinity), ExtRational::Infinity);
        // the denominator 4x(x-1)(x-t) has exactly these finite roots
        let x = Poly::x();
        let den = &(&x * &(&x - &Poly::one())) * &(&x - &Poly::constant(t.t().clone()));
        let roots: BTreeSet<Rational> = rational_roots(&den).into_iter().collect();
        let want: BTreeSet<Rational> = [Rational::zero(), Rational::one(), t.t().clone()].into_iter().collect();
        assert_eq!(roots, want);
    }
}

#[test]
fn torsion_degrees() {
    let t = LegendreParam::parse("17/5").unwrap();
    for n in 2..=12 {
        let p = torsion_polynomial(&t, n).unwrap();
        assert_eq!(p.poly.degree().unwrap(), TorsionPolynomial::expected_degree(n), "n = {n}");
    }
}

/// den^d T_n(num/den) for f_t = num/den and T_n of degree d.
fn pullback(t: &LegendreParam, tn: &Poly) -> Poly {
    let x = Poly::x();
    let tc = Poly::constant(t.t().clone());
    let num = (&(&x * &x) - &tc).pow(2);
    let den = (&(&x * &(&x - &Poly::one())) * &(&x - &tc)).scale(&rat(4, 1));
    let d = tn.degree().unwrap() as u32;
    tn.coeffs()
        .iter()
        .enumerate()
        .fold(Poly::zero(), |acc, (k, c)| &acc + &(&num.pow(k as u32) * &den.pow(d - k as u32)).scale(c))
}

#[test]
fn doubling_maps_2n_torsion_onto_n_torsion() {
    for t in ["-3", "17/5"] {
        let t = LegendreParam::parse(t).unwrap();
        let x = Poly::x();
        let two_torsion = &(&x * &(&x - &Poly::one())) * &(&x - &Poly::constant(t.t().clone()));
        let ramified = exact_order_polynomial(&t, 4).unwrap();
        for n in 2..=7u32 {
            let tn = torsion_polynomial(&t, n).unwrap().poly;
            let back = pullback(&t, &tn);
            // f^-1(x(E[n])) is x(E[2n]) minus the 2-torsion; when n is even the six
            // critical points of f, of exact order 4, appear twice
            let mut want = torsion_polynomial(&t, 2 * n).unwrap().poly.exact_div(&two_torsion).unwrap();
            if n % 2 == 0 {
                want = &want * &ramified;
            }
            assert_eq!(back.monic(), want.monic(), "n = {n}");
        }
    }
}
