//! Exact rationals, places of Q, normalized absolute values and naive heights.

mod factor;
mod height;
mod logsum;
mod place;
mod rational;

pub use factor::{factor_integer, is_prime, relevant_primes};
pub use height::{height_a2, product_formula_check, weil_height, ProjectivePointQ};
pub use logsum::{LogInterval, LogSum};
pub use place::{abs_v, valuation, AbsValue, Place, Prime};
pub use rational::{
    ln_abs_bigint, ln_abs_rational, parse_rational, rational_to_f64, rat, ser_rational, Rational,
};
