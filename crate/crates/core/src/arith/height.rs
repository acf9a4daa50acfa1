use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{abs_v, ln_abs_bigint, ln_abs_rational, relevant_primes, valuation, LogSum, Place, Prime, Rational};
use crate::error::{Error, Result};

/// A point of P^1(Q) stored as coprime integers (z : w) with w >= 0 and (1 : 0) for infinity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjectivePointQ {
    z: BigInt,
    w: BigInt,
}

impl ProjectivePointQ {
    pub fn new(z: &Rational, w: &Rational) -> Result<Self> {
        if z.is_zero() && w.is_zero() {
            return Err(Error::InvalidProjectivePoint);
        }
        // clear denominators, then remove content
        let l = z.denom().lcm(w.denom());
        let zi = z.numer() * (&l / z.denom());
        let wi = w.numer() * (&l / w.denom());
        Ok(Self::from_integers(zi, wi))
    }

    fn from_integers(z: BigInt, w: BigInt) -> Self {
        let g = z.gcd(&w);
        let (mut z, mut w) = (z / &g, w / &g);
        if w.is_negative() || (w.is_zero() && z.is_negative()) {
            z = -z;
            w = -w;
        }
        Self { z, w }
    }

    pub fn from_rational(x: &Rational) -> Self {
        Self::from_integers(x.numer().clone(), x.denom().clone())
    }

    pub fn infinity() -> Self {
        Self { z: BigInt::one(), w: BigInt::zero() }
    }

    pub fn is_infinity(&self) -> bool {
        self.w.is_zero()
    }

    pub fn z(&self) -> &BigInt {
        &self.z
    }

    pub fn w(&self) -> &BigInt {
        &self.w
    }

    pub fn to_rational(&self) -> Option<Rational> {
        (!self.is_infinity()).then(|| Rational::new(self.z.clone(), self.w.clone()))
    }
}

/// h(z : w) = log max(|z|, |w|) for coprime integers.
pub fn weil_height(x: &ProjectivePointQ) -> f64 {
    let m = if x.z.abs() > x.w.abs() { x.z.abs() } else { x.w.abs() };
    ln_abs_bigint(&m)
}

/// sum_v log max(1, |t1|_v, |t2|_v).
pub fn height_a2(t1: &Rational, t2: &Rational) -> Result<f64> {
    let mut total = ln_abs_rational(t1).max(ln_abs_rational(t2)).max(0.0);
    let dens = [Rational::from_integer(t1.denom().clone()), Rational::from_integer(t2.denom().clone())];
    for p in relevant_primes(dens.iter())? {
        let p = Prime::new(p)?;
        let worst = [t1, t2]
            .iter()
            .filter(|x| !x.is_zero())
            .map(|x| -valuation(x, p).expect("nonzero"))
            .max()
            .unwrap_or(0)
            .max(0);
        total += worst as f64 * p.ln();
    }
    Ok(total)
}

/// sum_v log|x|_v; the finite part is assembled exactly before the single float conversion.
pub fn product_formula_check(x: &Rational) -> Result<f64> {
    if x.is_zero() {
        return Err(Error::ValuationOfZero);
    }
    let mut finite = LogSum::zero();
    for p in relevant_primes([x])? {
        let p = Prime::new(p)?;
        let e = -valuation(x, p)?;
        finite = &finite + &LogSum::single(p, Rational::from_integer(e.into()));
    }
    Ok(finite.to_f64() + abs_v(x, Place::Archimedean).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{parse_rational, rat};

    #[test]
    fn weil_height_examples() {
        let h = |s: &str| weil_height(&ProjectivePointQ::from_rational(&parse_rational(s).unwrap()));
        assert!((h("3/5") - 5f64.ln()).abs() < 1e-15);
        assert!((h("-4/6") - 3f64.ln()).abs() < 1e-15);
        assert_eq!(weil_height(&ProjectivePointQ::infinity()), 0.0);
    }

    #[test]
    fn height_a2_examples() {
        assert!((height_a2(&rat(2, 1), &rat(3, 1)).unwrap() - 3f64.ln()).abs() < 1e-15);
        assert!((height_a2(&rat(1, 2), &rat(3, 1)).unwrap() - 6f64.ln()).abs() < 1e-14);
        assert_eq!(height_a2(&rat(0, 1), &rat(0, 1)).unwrap(), 0.0);
    }

    #[test]
    fn product_formula_examples() {
        for x in [rat(6, 1), rat(1, 1), rat(-35, 4)] {
            assert!(product_formula_check(&x).unwrap().abs() < 1e-12);
        }
        assert!(product_formula_check(&rat(0, 1)).is_err());
    }

    #[test]
    fn projective_normalization() {
        let p = ProjectivePointQ::new(&rat(-2, 1), &rat(-4, 1)).unwrap();
        assert_eq!((p.z().clone(), p.w().clone()), (BigInt::from(1), BigInt::from(2)));
        assert!(ProjectivePointQ::new(&rat(0, 1), &rat(0, 1)).is_err());
        let inf = ProjectivePointQ::new(&rat(-3, 1), &rat(0, 1)).unwrap();
        assert!(inf.is_infinity() && inf.z() == &BigInt::from(1));
    }
}
