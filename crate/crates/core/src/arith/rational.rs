use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Shorthand for the rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"n"`, `"n/d"` or `"-n/d"` in base 10.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("not a rational literal: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let ok = |x: &str, allow_sign: bool| {
        let body = if allow_sign {
            x.strip_prefix('-').or_else(|| x.strip_prefix('+')).unwrap_or(x)
        } else {
            x
        };
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
    };
    if !ok(num, true) || !ok(den, false) {
        return Err(bad());
    }
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::InvalidInput(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(n, d))
}

/// Natural log of |n| for arbitrarily large integers. Returns -inf for zero.
pub fn ln_abs_bigint(n: &BigInt) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    if bits < 1000 {
        if let Some(f) = n.abs().to_f64() {
            if f.is_finite() {
                return f.ln();
            }
        }
    }
    let shift = bits - 60;
    let top = (n.abs() >> shift).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of |x|; -inf for zero.
pub fn ln_abs_rational(x: &Rational) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    ln_abs_bigint(x.numer()) - ln_abs_bigint(x.denom())
}

/// Nearest double, robust to numerators and denominators beyond the f64 range.
pub fn rational_to_f64(x: &Rational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if let Some(f) = x.to_f64() {
        if f.is_finite() && f != 0.0 {
            return f;
        }
    }
    let sign = if x.numer().sign() == Sign::Minus { -1.0 } else { 1.0 };
    sign * ln_abs_rational(x).exp()
}

/// Serializes a rational as its "n/d" string.
pub fn ser_rational<S: serde::Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}
