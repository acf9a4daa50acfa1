//! Mutual energies of discrete measures [F]_v, kept as exact combinations of logarithms.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::arith::{relevant_primes, valuation, LogSum, Place, Prime, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kernel {
    /// log|z - w|
    Archimedean,
    /// log of the Hsia kernel, equal to log|z - w|_p off the diagonal for classical points
    Hsia,
}

#[derive(Debug, Clone, Serialize)]
pub struct MutualEnergyValue {
    pub place: Place,
    pub value: f64,
    pub exact: LogSum,
    pub kernel: Kernel,
    pub diagonal_excluded: bool,
}

fn dedup(xs: &[Rational]) -> Result<Vec<Rational>> {
    if xs.is_empty() {
        return Err(Error::InvalidInput("sets must be nonempty".into()));
    }
    let mut v = xs.to_vec();
    v.sort();
    v.dedup();
    Ok(v)
}

/// ([F1], [F2])_v = -(1/|F1||F2|) sum over x != y of log|x - y|_v.
pub fn mutual_energy_discrete(f1: &[Rational], f2: &[Rational], v: Place) -> Result<MutualEnergyValue> {
    let (a, b) = (dedup(f1)?, dedup(f2)?);
    let mut total = LogSum::zero();
    for x in &a {
        for y in &b {
            let d = x - y;
            if d.is_zero() {
                continue;
            }
            let term = match v {
                Place::Archimedean => LogSum::ln_abs(&d)?,
                Place::Finite(p) => LogSum::single(p, Rational::from_integer((-valuation(&d, p)?).into())),
            };
            total = &total + &term;
        }
    }
    let n = Rational::from_integer(((a.len() * b.len()) as i64).into());
    let exact = total.scale(&(-Rational::from_integer(1.into()) / n));
    let kernel = if v == Place::Archimedean { Kernel::Archimedean } else { Kernel::Hsia };
    Ok(MutualEnergyValue { place: v, value: exact.to_f64(), exact, kernel, diagonal_excluded: true })
}

/// The mutual energy at every place where it can be nonzero, and the exact sum over places.
pub fn mutual_energy_all_places(f1: &[Rational], f2: &[Rational]) -> Result<(Vec<MutualEnergyValue>, LogSum)> {
    let (a, b) = (dedup(f1)?, dedup(f2)?);
    let diffs: Vec<Rational> = a.iter().flat_map(|x| b.iter().map(move |y| x - y)).filter(|d| !d.is_zero()).collect();
    let mut places: Vec<Place> = relevant_primes(diffs.iter())?
        .into_iter()
        .map(|p| Prime::new(p).map(Place::Finite))
        .collect::<Result<_>>()?;
    places.push(Place::Archimedean);
    let mut sum = LogSum::zero();
    let mut out = Vec::with_capacity(places.len());
    for v in places {
        let m = mutual_energy_discrete(&a, &b, v)?;
        sum = &sum + &m.exact;
        out.push(m);
    }
    Ok((out, sum))
}

/// Per-place values keyed by place, for reporting.
pub fn by_place(values: &[MutualEnergyValue]) -> BTreeMap<String, f64> {
    values.iter().map(|m| (m.place.to_string(), m.value)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn examples() {
        let f = [rat(0, 1), rat(1, 1)];
        assert_eq!(mutual_energy_discrete(&f, &f, Place::Archimedean).unwrap().value, 0.0);
        let f = [rat(0, 1), rat(2, 1)];
        let m = mutual_energy_discrete(&f, &f, Place::Archimedean).unwrap();
        assert!((m.value + 2f64.ln() / 2.0).abs() < 1e-15);
        let (_, s) = mutual_energy_all_places(&f, &f).unwrap();
        assert!(s.is_zero());
    }
}
