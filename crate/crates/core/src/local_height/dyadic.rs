//! The 2-adic Julia point of f_t in the potential-good-reduction regime.
//!
//! There f_t has a single totally invariant point zeta_t = zeta_{c,r} and
//! lambda_t(z) = log max(r, |z - c|). The radius is exact: a change of variable
//! x = c + u^2 x' gives good reduction with v(u) = v(Delta)/12, Delta = 16 t^2 (t-1)^2,
//! so log_2 r = -v(Delta)/6. The centre c may only exist in a ramified extension of Q_2;
//! the locator finds the best rational approximation by descending the tree of disks.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::padic_iter::{padic_lambda, DEFAULT_PADIC_STEPS};
use crate::arith::{valuation, Prime, Rational};
use crate::error::Result;

/// Levels of the disk tree explored before stopping.
const MAX_DEPTH: i64 = 64;

fn two() -> Prime {
    Prime::new(2).expect("2 is prime")
}

fn q(x: i64) -> Rational {
    Rational::from_integer(x.into())
}

/// zeta_t = zeta_{c, 2^log_radius}. `center` is a rational with |center - c| <= 2^center_log_error;
/// when `resolved`, center_log_error <= log_radius and zeta_t = zeta_{center, 2^log_radius}.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DyadicJulia {
    #[serde(serialize_with = "crate::arith::ser_rational")]
    pub center: Rational,
    #[serde(serialize_with = "crate::arith::ser_rational")]
    pub log_radius: Rational,
    #[serde(serialize_with = "crate::arith::ser_rational")]
    pub center_log_error: Rational,
    pub resolved: bool,
}

/// log_2 of the radius of zeta_t: -v_2(16 t^2 (t-1)^2) / 6.
pub fn dyadic_log_radius(t: &Rational) -> Result<Rational> {
    let p = two();
    let vd = 4 + 2 * valuation(t, p)? + 2 * valuation(&(t - q(1)), p)?;
    Ok(Rational::new((-vd).into(), 6.into()))
}

fn power_of_two(e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(BigInt::one() << e as usize)
    } else {
        Rational::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

pub fn locate_dyadic_julia(t: &Rational) -> Result<DyadicJulia> {
    let p = two();
    let log_r = dyadic_log_radius(t)?;
    // lambda_t(b) = max(log|b - c|, log r); descend while a child disk of radius 2^-(e+1) meets c
    let mut center = Rational::zero();
    let (_, mut best_hi) = padic_lambda(t, &center, p, DEFAULT_PADIC_STEPS)?;
    for e in -2..MAX_DEPTH {
        let child_log_r = q(-(e + 1));
        if child_log_r < log_r {
            break;
        }
        let sibling = &center + power_of_two(e);
        let mut next = None;
        for b in [center.clone(), sibling] {
            let (_, hi) = padic_lambda(t, &b, p, DEFAULT_PADIC_STEPS)?;
            if hi < best_hi {
                best_hi = hi.clone();
                center = b.clone();
            }
            if hi <= child_log_r && next.is_none() {
                next = Some(b);
            }
        }
        match next {
            Some(b) => center = b,
            None => break,
        }
    }
    let (_, hi) = padic_lambda(t, &center, p, DEFAULT_PADIC_STEPS)?;
    // the enclosure is tight; an upper end within the tail of log r means |center - c| <= r
    let resolved = &hi - &log_r < Rational::new(BigInt::one(), BigInt::from(1u64 << 40));
    let center_log_error = if resolved { log_r.clone() } else { hi };
    Ok(DyadicJulia { center, log_radius: log_r, center_log_error, resolved })
}

impl DyadicJulia {
    /// Certified enclosure of lambda_t(z) = max(log|z - c|, log r) at a rational z.
    pub fn lambda_at(&self, t: &Rational, z: &Rational) -> Result<(Rational, Rational)> {
        if self.resolved {
            let d = z - &self.center;
            let v = if d.is_zero() {
                self.log_radius.clone()
            } else {
                let l = q(-valuation(&d, two())?);
                if l > self.log_radius { l } else { self.log_radius.clone() }
            };
            return Ok((v.clone(), v));
        }
        let d = z - &self.center;
        if !d.is_zero() {
            // |z - c| = |z - center| once z lies outside the error disk
            let l = q(-valuation(&d, two())?);
            if l > self.center_log_error {
                let v = if l > self.log_radius { l } else { self.log_radius.clone() };
                return Ok((v.clone(), v));
            }
        }
        let (lo, hi) = padic_lambda(t, z, two(), DEFAULT_PADIC_STEPS)?;
        let lo = if lo < self.log_radius { self.log_radius.clone() } else { lo };
        Ok((lo, hi))
    }

    /// lambda_t at zeta_{c, 2^log_rho}, using lambda_t(zeta_{c,rho}) = max(lambda_t(c), log rho).
    pub fn lambda_at_type2(&self, t: &Rational, c: &Rational, log_rho: &Rational) -> Result<(Rational, Rational)> {
        let (lo, hi) = self.lambda_at(t, c)?;
        let mx = |a: Rational| if &a > log_rho { a } else { log_rho.clone() };
        Ok((mx(lo), mx(hi)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn radius_from_discriminant() {
        assert_eq!(dyadic_log_radius(&rat(2, 1)).unwrap(), rat(-1, 1));
        assert_eq!(dyadic_log_radius(&rat(1, 9)).unwrap(), rat(-5, 3));
        assert_eq!(dyadic_log_radius(&rat(1, 2)).unwrap(), rat(0, 1));
    }

    #[test]
    fn enclosures_respect_radius() {
        for t in [rat(2, 1), rat(3, 1), rat(-1, 1), rat(1, 9), rat(5, 3), rat(7, 1), rat(1, 2), rat(17, 5)] {
            let j = locate_dyadic_julia(&t).unwrap();
            for z in [rat(0, 1), rat(1, 1), rat(3, 7), j.center.clone()] {
                let (lo, hi) = padic_lambda(&t, &z, two(), 30).unwrap();
                assert!(hi >= j.log_radius, "t = {t}, z = {z}: {lo} {hi}");
            }
        }
    }

    #[test]
    fn centre_sits_in_a_ramified_extension() {
        // the nearest rational stays at a half-integral distance exponent strictly above log r
        for t in [rat(2, 1), rat(3, 1), rat(-1, 1), rat(1, 9), rat(17, 5), rat(-5, 3), rat(21, 1)] {
            let j = locate_dyadic_julia(&t).unwrap();
            assert!(!j.resolved);
            assert!(j.center_log_error > j.log_radius, "t = {t}");
            assert!((&j.center_log_error * rat(2, 1)).is_integer(), "t = {t}");
        }
    }
}
