use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{factor_integer, rational_to_f64, Prime, Rational};
use crate::error::Result;

/// An exact real of the form sum_p c_p log p with rational coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LogSum {
    terms: BTreeMap<u64, Rational>,
}

impl LogSum {
    pub fn zero() -> Self {
        Self::default()
    }

    /// coeff * log p
    pub fn single(p: Prime, coeff: Rational) -> Self {
        let mut s = Self::zero();
        s.add_term(p.get(), coeff);
        s
    }

    /// log|x| for a nonzero rational, written over its prime factors.
    pub fn ln_abs(x: &Rational) -> Result<Self> {
        let mut s = Self::zero();
        for (p, e) in factor_integer(x.numer())? {
            s.add_term(p, Rational::from_integer(e.into()));
        }
        for (p, e) in factor_integer(x.denom())? {
            s.add_term(p, -Rational::from_integer(e.into()));
        }
        Ok(s)
    }

    fn add_term(&mut self, p: u64, c: Rational) {
        let entry = self.terms.entry(p).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn coeff(&self, p: u64) -> Rational {
        self.terms.get(&p).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &Rational)> {
        self.terms.iter().map(|(p, c)| (*p, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let mut s = Self::zero();
        for (p, c) in &self.terms {
            s.add_term(*p, c * k);
        }
        s
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(p, c)| rational_to_f64(c) * (*p as f64).ln())
            .sum()
    }
}

impl Add for &LogSum {
    type Output = LogSum;
    fn add(self, rhs: &LogSum) -> LogSum {
        let mut s = self.clone();
        for (p, c) in &rhs.terms {
            s.add_term(*p, c.clone());
        }
        s
    }
}

impl Sub for &LogSum {
    type Output = LogSum;
    fn sub(self, rhs: &LogSum) -> LogSum {
        self + &(-rhs)
    }
}

impl Neg for &LogSum {
    type Output = LogSum;
    fn neg(self) -> LogSum {
        let mut s = LogSum::zero();
        for (p, c) in &self.terms {
            s.add_term(*p, -c.clone());
        }
        s
    }
}

impl fmt::Display for LogSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (p, c)) in self.terms.iter().enumerate() {
            let sep = if i == 0 {
                if c.is_negative() { "-" } else { "" }
            } else if c.is_negative() {
                " - "
            } else {
                " + "
            };
            write!(f, "{sep}{}*log({p})", c.abs())?;
        }
        Ok(())
    }
}

impl Serialize for LogSum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(self.terms.len()))?;
        for (p, c) in &self.terms {
            m.serialize_entry(&format!("log{p}"), &c.to_string())?;
        }
        m.end()
    }
}

/// A value known to lie in [lo, hi] * log p, endpoints exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogInterval {
    pub prime: Prime,
    pub lo: Rational,
    pub hi: Rational,
}

impl LogInterval {
    pub fn exact(prime: Prime, v: Rational) -> Self {
        Self { prime, lo: v.clone(), hi: v }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn lo_f64(&self) -> f64 {
        rational_to_f64(&self.lo) * self.prime.ln()
    }

    pub fn hi_f64(&self) -> f64 {
        rational_to_f64(&self.hi) * self.prime.ln()
    }
}
