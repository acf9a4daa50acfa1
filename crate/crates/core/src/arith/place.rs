use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::{is_prime, rational_to_f64, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(&BigUint::from(p)) {
            Ok(Prime(p))
        } else {
            Err(Error::InvalidInput(format!("{p} is not prime")))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn ln(self) -> f64 {
        (self.0 as f64).ln()
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Finite(Prime),
    Archimedean,
}

impl Place {
    /// The weight r_v; identically 1 over Q.
    pub fn weight(&self) -> Rational {
        Rational::one()
    }

    pub fn prime(&self) -> Option<Prime> {
        match self {
            Place::Finite(p) => Some(*p),
            Place::Archimedean => None,
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Archimedean => write!(f, "inf"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for Place {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") {
            return Ok(Place::Archimedean);
        }
        let p: u64 = s
            .parse()
            .map_err(|_| Error::InvalidInput(format!("not a place: {s:?}")))?;
        Ok(Place::Finite(Prime::new(p)?))
    }
}

fn int_valuation(n: &BigInt, p: u64) -> i64 {
    let bp = BigInt::from(p);
    let mut m = n.abs();
    let mut v = 0;
    while (&m % &bp).is_zero() {
        m /= &bp;
        v += 1;
    }
    v
}

/// The exact p-adic valuation v_p(x).
pub fn valuation(x: &Rational, p: Prime) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::ValuationOfZero);
    }
    Ok(int_valuation(x.numer(), p.0) - int_valuation(x.denom(), p.0))
}

/// A normalized absolute value; finite places keep the exact exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AbsValue {
    Zero,
    /// |x|_p = p^exponent, so log|x|_p = exponent * log p.
    PAdic { prime: Prime, exponent: i64 },
    Real(f64),
}

impl AbsValue {
    pub fn to_f64(self) -> f64 {
        match self {
            AbsValue::Zero => 0.0,
            AbsValue::PAdic { prime, exponent } => (prime.0 as f64).powi(exponent as i32),
            AbsValue::Real(r) => r,
        }
    }

    pub fn ln(self) -> f64 {
        match self {
            AbsValue::Zero => f64::NEG_INFINITY,
            AbsValue::PAdic { prime, exponent } => exponent as f64 * prime.ln(),
            AbsValue::Real(r) => r.ln(),
        }
    }
}

pub fn abs_v(x: &Rational, v: Place) -> AbsValue {
    if x.is_zero() {
        return AbsValue::Zero;
    }
    match v {
        Place::Archimedean => AbsValue::Real(rational_to_f64(&x.abs())),
        Place::Finite(p) => AbsValue::PAdic {
            prime: p,
            exponent: -valuation(x, p).expect("nonzero"),
        },
    }
}
