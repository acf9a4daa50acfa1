use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use super::LegendreParam;
use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::poly::{complex_roots, gcd_degree_mod_p, Poly, RootOptions};

/// Default and hard cap for the torsion order.
pub const DEFAULT_MAX_ORDER: u32 = 16;
pub const HARD_MAX_ORDER: u32 = 24;

/// Monic polynomial over Q whose roots are the x-coordinates of the nonzero points
/// of order dividing n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionPolynomial {
    pub order: u32,
    pub poly: Poly,
}

impl TorsionPolynomial {
    /// (n^2 - 1)/2 for odd n, (n^2 + 2)/2 for even n.
    pub fn expected_degree(n: u32) -> usize {
        let n = n as usize;
        if n % 2 == 1 { (n * n - 1) / 2 } else { (n * n + 2) / 2 }
    }
}

/// Division polynomials of y^2 = x^3 - (1+t)x^2 + tx with the 2-torsion factor removed
/// at even index: psi_n = f_n for odd n and psi_n = psi_2 f_n for even n.
struct DivisionPolys {
    w: Poly,
    f: Vec<Poly>,
}

impl DivisionPolys {
    fn new(t: &Rational) -> Self {
        let q = |x: i64| Rational::from_integer(x.into());
        let b2 = -q(4) * (q(1) + t);
        let b4 = q(2) * t;
        let b6 = q(0);
        let b8 = -(t * t);
        let w = Poly::new(vec![b6.clone(), q(2) * &b4, b2.clone(), q(4)]);
        let f3 = Poly::new(vec![b8.clone(), q(3) * &b6, q(3) * &b4, b2.clone(), q(3)]);
        let f4 = Poly::new(vec![
            &b4 * &b8 - &b6 * &b6,
            &b2 * &b8 - &b4 * &b6,
            q(10) * &b8,
            q(10) * &b6,
            q(5) * &b4,
            b2.clone(),
            q(2),
        ]);
        DivisionPolys { w, f: vec![Poly::zero(), Poly::one(), Poly::one(), f3, f4] }
    }

    fn get(&mut self, n: usize) -> Poly {
        while self.f.len() <= n {
            let k = self.f.len();
            let m = k / 2;
            let f = &self.f;
            let next = if k % 2 == 1 {
                let w2 = &self.w * &self.w;
                let a = &f[m + 2] * &f[m].pow(3);
                let b = &f[m - 1] * &f[m + 1].pow(3);
                if m % 2 == 0 { &(&w2 * &a) - &b } else { &a - &(&w2 * &b) }
            } else {
                let a = &f[m + 2] * &f[m - 1].pow(2);
                let b = &f[m - 2] * &f[m + 1].pow(2);
                &f[m] * &(&a - &b)
            };
            self.f.push(next);
        }
        self.f[n].clone()
    }
}

/// Order-dividing torsion polynomial for 2 <= n <= HARD_MAX_ORDER.
pub fn torsion_polynomial(t: &LegendreParam, n: u32) -> Result<TorsionPolynomial> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("invalid torsion order {n}")));
    }
    if n > HARD_MAX_ORDER {
        return Err(Error::InvalidInput(format!("order {n} exceeds the cap {HARD_MAX_ORDER}")));
    }
    let mut d = DivisionPolys::new(t.t());
    let fnp = d.get(n as usize);
    let poly = if n % 2 == 0 { &d.w * &fnp } else { fnp };
    Ok(TorsionPolynomial { order: n, poly: poly.monic() })
}

fn mobius(n: u32) -> i32 {
    let (mut n, mut p, mut mu) = (n, 2, 1);
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 { -mu } else { mu }
}

/// Monic polynomial whose roots are x-coordinates of points of exact order n.
pub fn exact_order_polynomial(t: &LegendreParam, n: u32) -> Result<Poly> {
    let mut num = Poly::one();
    let mut den = Poly::one();
    for d in (2..=n).filter(|d| n % d == 0) {
        match mobius(n / d) {
            1 => num = &num * &torsion_polynomial(t, d)?.poly,
            -1 => den = &den * &torsion_polynomial(t, d)?.poly,
            _ => {}
        }
    }
    num.exact_div(&den)
        .map(|p| p.monic())
        .ok_or_else(|| Error::Compute(format!("exact-order quotient for n = {n} is not exact")))
}

/// Rational roots exactly plus the remaining roots as complex floats.
#[derive(Debug, Clone, Default, Serialize)]
pub struct RootSet {
    #[serde(serialize_with = "ser_rationals")]
    pub rational: Vec<Rational>,
    #[serde(serialize_with = "ser_complex")]
    pub complex: Vec<Complex64>,
}

fn ser_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

fn ser_complex<S: serde::Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|z| [z.re, z.im]))
}

impl RootSet {
    pub fn len(&self) -> usize {
        self.rational.len() + self.complex.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn extend(&mut self, other: &RootSet) {
        self.rational.extend(other.rational.iter().cloned());
        self.complex.extend(other.complex.iter().cloned());
        self.rational.sort();
        self.rational.dedup();
    }
}

/// Splits a square-free polynomial into exact rational roots and complex floating roots.
pub fn split_roots(p: &Poly) -> RootSet {
    let approx = complex_roots(p, RootOptions::default());
    let rational = crate::poly::rational_roots_from(p, &approx);
    let mut rest = p.clone();
    for r in &rational {
        rest = rest.exact_div(&Poly::linear_root(r)).expect("verified root");
    }
    let complex = if rational.is_empty() { approx } else { complex_roots(&rest, RootOptions::default()) };
    RootSet { rational, complex }
}

#[derive(Debug, Clone, Serialize)]
pub struct OrderEntry {
    pub n: u32,
    #[serde(serialize_with = "ser_rationals")]
    pub rational_roots: Vec<Rational>,
    #[serde(serialize_with = "ser_complex")]
    pub complex_roots: Vec<Complex64>,
}

/// Finite torsion images of order dividing n, for every n up to max_order.
/// Infinity, the image of the identity, belongs to every entry implicitly.
#[derive(Debug, Clone)]
pub struct TorsionCatalog {
    pub param: LegendreParam,
    pub max_order: u32,
    pub exact_order: BTreeMap<u32, RootSet>,
    pub dividing: BTreeMap<u32, RootSet>,
    /// Largest relative residual of a complex root against its order-dividing polynomial.
    pub max_residual: f64,
}

#[derive(Serialize)]
struct CatalogJson {
    t: String,
    max_order: u32,
    orders: Vec<OrderEntry>,
}

impl TorsionCatalog {
    pub fn to_json(&self) -> serde_json::Value {
        let orders = self
            .dividing
            .iter()
            .map(|(n, rs)| OrderEntry { n: *n, rational_roots: rs.rational.clone(), complex_roots: rs.complex.clone() })
            .collect();
        serde_json::to_value(CatalogJson { t: self.param.to_string(), max_order: self.max_order, orders })
            .expect("serializable")
    }

    /// Every finite image up to max_order, each listed once.
    pub fn all_finite(&self) -> RootSet {
        let mut out = RootSet::default();
        for rs in self.exact_order.values() {
            out.extend(rs);
        }
        out
    }
}

pub fn torsion_images(t: &LegendreParam, max_order: u32, exec: Exec) -> Result<TorsionCatalog> {
    if max_order < 2 {
        return Err(Error::InvalidInput("max_order must be at least 2".into()));
    }
    if max_order > HARD_MAX_ORDER {
        return Err(Error::InvalidInput(format!("max_order exceeds the cap {HARD_MAX_ORDER}")));
    }
    let orders: Vec<u32> = (2..=max_order).collect();
    let exact: Vec<Result<(RootSet, f64)>> = par::map(exec, &orders, |&n| {
        let p = exact_order_polynomial(t, n)?;
        let rs = split_roots(&p);
        let tp = torsion_polynomial(t, n)?;
        let res = rs
            .complex
            .iter()
            .map(|z| crate::poly::relative_residual(&tp.poly, *z))
            .fold(0.0, f64::max);
        Ok((rs, res))
    });
    let mut exact_order = BTreeMap::new();
    let mut max_residual: f64 = 0.0;
    for (n, r) in orders.iter().zip(exact) {
        let (rs, res) = r?;
        max_residual = max_residual.max(res);
        exact_order.insert(*n, rs);
    }
    let mut dividing = BTreeMap::new();
    for &n in &orders {
        let mut acc = RootSet::default();
        for d in (2..=n).filter(|d| n % d == 0) {
            acc.extend(&exact_order[&d]);
        }
        dividing.insert(n, acc);
    }
    Ok(TorsionCatalog { param: t.clone(), max_order, exact_order, dividing, max_residual })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommonTorsionMode {
    Exact,
    Numeric,
}

/// Common torsion images of two Legendre curves up to a torsion order.
#[derive(Debug, Clone, Serialize)]
pub struct CommonTorsion {
    #[serde(serialize_with = "ser_rationals")]
    pub rational: Vec<Rational>,
    #[serde(serialize_with = "ser_complex")]
    pub complex: Vec<Complex64>,
    /// Includes infinity.
    pub count: usize,
}

pub const NUMERIC_MATCH_TOL: f64 = 1e-9;

pub fn common_torsion_count(
    t1: &LegendreParam,
    t2: &LegendreParam,
    max_order: u32,
    mode: CommonTorsionMode,
    exec: Exec,
) -> Result<CommonTorsion> {
    if t1 == t2 {
        return Err(Error::IdenticalCurves);
    }
    if !(2..=HARD_MAX_ORDER).contains(&max_order) {
        return Err(Error::InvalidInput(format!("max_order must lie in 2..={HARD_MAX_ORDER}")));
    }
    let roots = match mode {
        CommonTorsionMode::Exact => common_exact(t1, t2, max_order, exec)?,
        CommonTorsionMode::Numeric => {
            let c1 = torsion_images(t1, max_order, exec)?.all_finite();
            let c2 = torsion_images(t2, max_order, exec)?.all_finite();
            let rational: Vec<Rational> = c1.rational.iter().filter(|r| c2.rational.contains(r)).cloned().collect();
            let close = |a: Complex64, b: Complex64| (a - b).norm() <= NUMERIC_MATCH_TOL * a.norm().max(1.0);
            let complex = c1
                .complex
                .iter()
                .filter(|z| c2.complex.iter().any(|w| close(**z, *w)))
                .cloned()
                .collect();
            RootSet { rational, complex }
        }
    };
    let count = roots.len() + 1;
    Ok(CommonTorsion { rational: roots.rational, complex: roots.complex, count })
}

/// Roots of gcd(prod_n T_n(t1), prod_m T_m(t2)), assembled from pairwise gcds of
/// exact-order factors, which have the same root set.
fn common_exact(t1: &LegendreParam, t2: &LegendreParam, max_order: u32, exec: Exec) -> Result<RootSet> {
    let orders: Vec<u32> = (2..=max_order).collect();
    let a: Vec<Result<Poly>> = par::map(exec, &orders, |&n| exact_order_polynomial(t1, n));
    let b: Vec<Result<Poly>> = par::map(exec, &orders, |&n| exact_order_polynomial(t2, n));
    let a: Vec<Poly> = a.into_iter().collect::<Result<_>>()?;
    let b: Vec<Poly> = b.into_iter().collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..a.len()).flat_map(|i| (0..b.len()).map(move |j| (i, j))).collect();
    let gcds = par::map(exec, &pairs, |&(i, j)| {
        if gcd_degree_mod_p(&a[i], &b[j]) == Some(0) {
            return None;
        }
        let g = a[i].gcd(&b[j]);
        (g.degree().unwrap_or(0) > 0).then_some(g)
    });
    let mut common = Poly::one();
    for g in gcds.into_iter().flatten() {
        common = common.lcm(&g);
    }
    if common.degree().unwrap_or(0) == 0 {
        return Ok(RootSet::default());
    }
    Ok(split_roots(&common.squarefree()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn tp(n: i64, d: i64) -> LegendreParam {
        LegendreParam::new(rat(n, d)).unwrap()
    }

    #[test]
    fn two_and_three_torsion() {
        let t = tp(2, 1);
        let p2 = torsion_polynomial(&t, 2).unwrap().poly;
        let expect2 = &(&Poly::x() * &Poly::linear_root(&rat(1, 1))) * &Poly::linear_root(&rat(2, 1));
        assert_eq!(p2, expect2);
        let p3 = torsion_polynomial(&t, 3).unwrap().poly;
        // 3x^4 - 12x^3 + 12x^2 - 4, made monic
        assert_eq!(p3, Poly::from_ints(&[-4, 0, 12, -12, 3]).monic());
        assert!(torsion_polynomial(&t, 1).is_err());
    }

    #[test]
    fn degrees() {
        let t = tp(-7, 3);
        for n in 2..=12 {
            let p = torsion_polynomial(&t, n).unwrap();
            assert_eq!(p.poly.degree().unwrap(), TorsionPolynomial::expected_degree(n), "n = {n}");
        }
    }

    #[test]
    fn mobius_values() {
        let got: Vec<i32> = (1..=12).map(mobius).collect();
        assert_eq!(got, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]);
    }
}
