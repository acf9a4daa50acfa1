use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};

use super::LegendreParam;
use crate::arith::{factor_integer, parse_rational, ProjectivePointQ, Rational};
use crate::error::{Error, Result};

/// A point of P^1(Q).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtRational {
    Finite(Rational),
    Infinity,
}

impl ExtRational {
    pub fn parse(s: &str) -> Result<Self> {
        if s.trim().eq_ignore_ascii_case("inf") {
            Ok(ExtRational::Infinity)
        } else {
            Ok(ExtRational::Finite(parse_rational(s)?))
        }
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtRational::Finite(x) => Some(x),
            ExtRational::Infinity => None,
        }
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Finite(x) => write!(f, "{x}"),
            ExtRational::Infinity => write!(f, "inf"),
        }
    }
}

/// A point of P^1(C).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtComplex {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            ExtComplex::Finite(z) => Some(z),
            ExtComplex::Infinity => None,
        }
    }

    /// Chordal distance on the Riemann sphere.
    pub fn chordal(self, other: ExtComplex) -> f64 {
        match (self, other) {
            (ExtComplex::Infinity, ExtComplex::Infinity) => 0.0,
            (ExtComplex::Finite(z), ExtComplex::Infinity) | (ExtComplex::Infinity, ExtComplex::Finite(z)) => {
                1.0 / (1.0 + z.norm_sqr()).sqrt()
            }
            (ExtComplex::Finite(z), ExtComplex::Finite(w)) => {
                (z - w).norm() / ((1.0 + z.norm_sqr()).sqrt() * (1.0 + w.norm_sqr()).sqrt())
            }
        }
    }
}

/// f_t(x) = (x^2 - t)^2 / (4x(x-1)(x-t)).
pub fn apply_f(t: &LegendreParam, x: &ExtRational) -> ExtRational {
    let Some(x) = x.finite() else { return ExtRational::Infinity };
    let t = t.t();
    let num = (x * x - t) * (x * x - t);
    let den = Rational::from_integer(4.into()) * x * (x - Rational::one()) * (x - t);
    if den.is_zero() {
        assert!(!num.is_zero(), "numerator and denominator of f_t vanish together");
        ExtRational::Infinity
    } else {
        ExtRational::Finite(num / den)
    }
}

pub fn apply_f_complex(t: Complex64, x: ExtComplex) -> ExtComplex {
    let Some(x) = x.finite() else { return ExtComplex::Infinity };
    let num = (x * x - t) * (x * x - t);
    let den = 4.0 * x * (x - 1.0) * (x - t);
    if den == Complex64::zero() {
        ExtComplex::Infinity
    } else {
        ExtComplex::Finite(num / den)
    }
}

/// F_t(z, w) = ((z^2 - t w^2)^2, 4zw(z - w)(z - t w)) before any normalization.
pub fn homogeneous_lift(t: &Rational, z: &Rational, w: &Rational) -> (Rational, Rational) {
    let four = Rational::from_integer(4.into());
    let a = z * z - t * w * w;
    (&a * &a, four * z * w * (z - w) * (z - t * w))
}

/// Result of one exact application of F_t.
#[derive(Debug, Clone)]
pub struct ExactImage {
    pub point: ProjectivePointQ,
    /// The raw image equals `scale` times the normalized coprime lift.
    pub scale: Rational,
    /// (p, v_p(scale)) for every prime with nonzero valuation.
    pub removed_content: Vec<(u64, i64)>,
}

#[allow(non_snake_case)]
pub fn apply_F(t: &LegendreParam, x: &ProjectivePointQ) -> Result<ExactImage> {
    let z = Rational::from_integer(x.z().clone());
    let w = Rational::from_integer(x.w().clone());
    let (a, b) = homogeneous_lift(t.t(), &z, &w);
    let point = ProjectivePointQ::new(&a, &b)?;
    let scale = if !point.z().is_zero() {
        &a / Rational::from_integer(point.z().clone())
    } else {
        &b / Rational::from_integer(point.w().clone())
    };
    let mut removed_content = Vec::new();
    for (p, e) in factor_integer(scale.numer())? {
        removed_content.push((p, e as i64));
    }
    for (p, e) in factor_integer(scale.denom())? {
        removed_content.push((p, -(e as i64)));
    }
    removed_content.sort_unstable();
    Ok(ExactImage { point, scale, removed_content })
}

/// One floating-point step of F_t rescaled to sup-norm 1; returns the image and log of the scale.
#[allow(non_snake_case)]
pub fn apply_F_float(t: Complex64, z: Complex64, w: Complex64) -> Result<((Complex64, Complex64), f64)> {
    if z == Complex64::zero() && w == Complex64::zero() {
        return Err(Error::InvalidProjectivePoint);
    }
    let a = z * z - t * w * w;
    let p = a * a;
    let q = 4.0 * z * w * (z - w) * (z - t * w);
    let m = p.norm().max(q.norm());
    Ok(((p / m, q / m), m.ln()))
}

/// j(t) = 256 (1 - t + t^2)^3 / ((1 - t)^2 t^2).
pub fn j_invariant(t: &LegendreParam) -> Rational {
    let t = t.t();
    let one = Rational::one();
    let u = &one - t + t * t;
    Rational::from_integer(BigInt::from(256)) * &u * &u * &u / ((&one - t) * (&one - t) * t * t)
}
