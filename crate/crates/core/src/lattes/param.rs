use std::fmt;

use num_traits::{One, Zero};

use crate::arith::{parse_rational, Rational};
use crate::error::{Error, Result};

/// A Legendre parameter t in Q \ {0, 1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LegendreParam(Rational);

impl LegendreParam {
    pub fn new(t: Rational) -> Result<Self> {
        if t.is_zero() || t.is_one() {
            return Err(Error::InvalidParameter(t.to_string()));
        }
        Ok(Self(t))
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::new(parse_rational(s)?)
    }

    pub fn t(&self) -> &Rational {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        crate::arith::rational_to_f64(&self.0)
    }

    pub fn apply(&self, s: Sigma) -> LegendreParam {
        LegendreParam(s.apply(&self.0))
    }
}

impl fmt::Display for LegendreParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl serde::Serialize for LegendreParam {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

/// One of the three cusps 0, 1, infinity of the parameter line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cusp {
    Zero,
    One,
    Infinity,
}

/// The six elements of the S3 action on t generated by t -> 1-t and t -> 1/t.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sigma {
    Identity,
    /// t -> 1 - t
    OneMinus,
    /// t -> 1/t
    Inverse,
    /// t -> 1 - 1/t
    OneMinusInverse,
    /// t -> 1/(1 - t)
    InverseOneMinus,
    /// t -> t/(t - 1)
    TOverTMinusOne,
}

#[derive(Clone, Copy)]
enum Gen {
    A,
    B,
}

/// x -> a*x + b together with the additive constant of the local-height identity
/// lambda_t(x) = lambda_{sigma t}(a*x + b) + log|kappa|.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateChange {
    pub a: Rational,
    pub b: Rational,
    pub kappa: Rational,
}

impl CoordinateChange {
    pub fn apply(&self, x: &Rational) -> Rational {
        &self.a * x + &self.b
    }
}

impl Sigma {
    pub const ALL: [Sigma; 6] = [
        Sigma::Identity,
        Sigma::OneMinus,
        Sigma::Inverse,
        Sigma::OneMinusInverse,
        Sigma::InverseOneMinus,
        Sigma::TOverTMinusOne,
    ];

    fn word(self) -> &'static [Gen] {
        match self {
            Sigma::Identity => &[],
            Sigma::OneMinus => &[Gen::A],
            Sigma::Inverse => &[Gen::B],
            Sigma::OneMinusInverse => &[Gen::B, Gen::A],
            Sigma::InverseOneMinus => &[Gen::A, Gen::B],
            Sigma::TOverTMinusOne => &[Gen::B, Gen::A, Gen::B],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sigma::Identity => "t",
            Sigma::OneMinus => "1-t",
            Sigma::Inverse => "1/t",
            Sigma::OneMinusInverse => "1-1/t",
            Sigma::InverseOneMinus => "1/(1-t)",
            Sigma::TOverTMinusOne => "t/(t-1)",
        }
    }

    pub fn apply(self, t: &Rational) -> Rational {
        let mut t = t.clone();
        for g in self.word() {
            t = match g {
                Gen::A => Rational::one() - t,
                Gen::B => Rational::one() / t,
            };
        }
        t
    }

    fn from_action(image_of_seven: &Rational) -> Sigma {
        let seven = Rational::from_integer(7.into());
        *Sigma::ALL
            .iter()
            .find(|s| &s.apply(&seven) == image_of_seven)
            .expect("S3 is closed")
    }

    /// `self.then(other)` applies `self` first.
    pub fn then(self, other: Sigma) -> Sigma {
        let seven = Rational::from_integer(7.into());
        Sigma::from_action(&other.apply(&self.apply(&seven)))
    }

    pub fn inverse(self) -> Sigma {
        *Sigma::ALL
            .iter()
            .find(|s| self.then(**s) == Sigma::Identity)
            .expect("group")
    }

    /// The induced change of x-coordinate at parameter t.
    pub fn coordinate_change(self, t: &Rational) -> CoordinateChange {
        let mut cc = CoordinateChange { a: Rational::one(), b: Rational::zero(), kappa: Rational::one() };
        let mut t = t.clone();
        for g in self.word() {
            match g {
                Gen::A => {
                    cc.a = -cc.a;
                    cc.b = Rational::one() - cc.b;
                    t = Rational::one() - t;
                }
                Gen::B => {
                    cc.a /= &t;
                    cc.b /= &t;
                    cc.kappa *= &t;
                    t = Rational::one() / t;
                }
            }
        }
        cc
    }

    /// Where a parameter near cusp c is sent.
    pub fn cusp_image(self, c: Cusp) -> Cusp {
        let mut c = c;
        for g in self.word() {
            c = match (g, c) {
                (Gen::A, Cusp::Zero) => Cusp::One,
                (Gen::A, Cusp::One) => Cusp::Zero,
                (Gen::A, Cusp::Infinity) => Cusp::Infinity,
                (Gen::B, Cusp::Zero) => Cusp::Infinity,
                (Gen::B, Cusp::Infinity) => Cusp::Zero,
                (Gen::B, Cusp::One) => Cusp::One,
            };
        }
        c
    }
}
