use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{valuation, Prime, Rational};
use crate::error::{Error, Result};

/// Default number of certified iteration steps; the enclosure width is v(Res)/(3 4^n).
pub const DEFAULT_PADIC_STEPS: u32 = 40;

/// Certified enclosure [lo, hi] of lambda_{t,p}(z) in units of log p, by iterating the
/// primitive integral lift b^2 F_t (t = a/b) modulo a power of p.
pub fn padic_lambda(t: &Rational, z: &Rational, p: Prime, steps: u32) -> Result<(Rational, Rational)> {
    let (a, b) = (t.numer().clone(), t.denom().clone());
    let pb = BigInt::from(p.get());
    let v_int = |x: &BigInt| -> i64 {
        if x.is_zero() {
            i64::MAX
        } else {
            valuation(&Rational::from_integer(x.clone()), p).expect("nonzero")
        }
    };
    let v_res = lift_resultant_valuation(t, p);
    let (m, n) = (z.numer().clone(), z.denom().clone());
    let mut prec: i64 = (v_res + 1) * (steps as i64 + 1) + 8;
    let mut modulus = pb.pow(prec as u32);
    let (mut x0, mut x1) = (m.mod_floor(&modulus), n.mod_floor(&modulus));
    let mut sum = Rational::zero();
    let mut weight = Rational::one();
    let quarter = Rational::new(BigInt::one(), BigInt::from(4));
    for _ in 0..steps {
        weight *= &quarter;
        let d = (&b * &x0 * &x0 - &a * &x1 * &x1).mod_floor(&modulus);
        let y0 = (&d * &d).mod_floor(&modulus);
        let y1 = (BigInt::from(4) * &b * &x0 * &x1 * (&x0 - &x1) * (&b * &x0 - &a * &x1)).mod_floor(&modulus);
        let val = v_int(&y0).min(v_int(&y1));
        if val >= prec {
            return Err(Error::Compute("p-adic iteration lost all precision".into()));
        }
        let scale = pb.pow(val as u32);
        prec -= val;
        modulus = pb.pow(prec as u32);
        x0 = (y0 / &scale).mod_floor(&modulus);
        x1 = (y1 / &scale).mod_floor(&modulus);
        sum -= &weight * Rational::from_integer(val.into());
    }
    let shift = Rational::from_integer(v_int(&n).into()) + Rational::new(BigInt::from(2 * v_int(&b)), BigInt::from(3));
    let tail = Rational::new(BigInt::from(v_res), BigInt::from(3)) * &weight;
    let hi = &sum + &shift;
    Ok((&hi - tail, hi))
}

/// Valuation of the resultant of the primitive integral lift b^2 F_t.
pub fn lift_resultant_valuation(t: &Rational, p: Prime) -> i64 {
    let a = t.numer().clone();
    let b = t.denom().clone();
    let v = |x: BigInt| valuation(&Rational::from_integer(x), p).expect("nonzero");
    8 * v(BigInt::from(2)) + 4 * v(a.clone()) + 4 * v(&a - &b) + 8 * v(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn good_reduction_is_log_plus() {
        let p = Prime::new(5).unwrap();
        let (lo, hi) = padic_lambda(&rat(2, 1), &rat(1, 5), p, 10).unwrap();
        assert_eq!((lo, hi), (rat(1, 1), rat(1, 1)));
        let (lo, hi) = padic_lambda(&rat(2, 1), &rat(3, 7), p, 10).unwrap();
        assert_eq!((lo, hi), (rat(0, 1), rat(0, 1)));
    }

    #[test]
    fn enclosure_contains_closed_form() {
        // t = 9 at p = 3, z = 3: the value is -3/4.
        let p = Prime::new(3).unwrap();
        let (lo, hi) = padic_lambda(&rat(9, 1), &rat(3, 1), p, 30).unwrap();
        assert!(lo <= rat(-3, 4) && rat(-3, 4) <= hi);
        assert!(&hi - &lo < rat(1, 1_000_000_000));
    }
}
