use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use serde::Serialize;

use super::arch::escape_rate_rational;
use super::nonarch::{nonarch_local_height, BerkovichPoint, NonArchLocalHeight};
use crate::arith::{rational_to_f64, relevant_primes, LogInterval, Place, Prime, Rational};
use crate::error::Result;
use crate::lattes::{ExtRational, LegendreParam};

/// One place's contribution lambda_{t,v}(x).
#[derive(Debug, Clone, Serialize)]
pub struct PlaceValue {
    pub place: Place,
    /// Exact coefficient of log p when the value is exact at a finite place.
    pub exact: Option<String>,
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CanonicalHeight {
    pub value: f64,
    pub error: f64,
    pub per_place: Vec<PlaceValue>,
}

/// Finite places where lambda_{t,v}(x) can be nonzero, always including 2.
pub fn height_places(t: &LegendreParam, x: Option<&Rational>) -> Result<BTreeSet<u64>> {
    let tm1 = t.t() - Rational::from_integer(1.into());
    let mut ps = relevant_primes([t.t(), &tm1].into_iter().chain(x))?;
    ps.insert(2);
    Ok(ps)
}

fn finite_value(iv: &LogInterval) -> PlaceValue {
    PlaceValue {
        place: Place::Finite(iv.prime),
        exact: iv.is_exact().then(|| iv.lo.to_string()),
        value: (iv.lo_f64() + iv.hi_f64()) / 2.0,
        error: (iv.hi_f64() - iv.lo_f64()) / 2.0,
    }
}

/// hat h_t(x) = sum over places of lambda_{t,v}(x); zero at infinity.
pub fn canonical_height(t: &LegendreParam, x: &ExtRational, tol: f64) -> Result<CanonicalHeight> {
    HeightEvaluator::new(t)?.eval(x, tol)
}

/// Canonical heights for one parameter, with the local models at the bad places built once.
#[derive(Debug, Clone)]
pub struct HeightEvaluator {
    param: LegendreParam,
    t: Complex64,
    models: BTreeMap<u64, NonArchLocalHeight>,
}

impl HeightEvaluator {
    pub fn new(t: &LegendreParam) -> Result<Self> {
        let mut models = BTreeMap::new();
        for p in height_places(t, None)? {
            models.insert(p, nonarch_local_height(t, Prime::new(p)?)?);
        }
        Ok(HeightEvaluator { param: t.clone(), t: Complex64::new(rational_to_f64(t.t()), 0.0), models })
    }

    pub fn eval(&self, x: &ExtRational, tol: f64) -> Result<CanonicalHeight> {
        let x = match x {
            ExtRational::Infinity => return Ok(CanonicalHeight { value: 0.0, error: 0.0, per_place: Vec::new() }),
            ExtRational::Finite(x) => x,
        };
        let mut per_place = Vec::new();
        let point = BerkovichPoint::Classical(x.clone());
        for p in height_places(&self.param, Some(x))? {
            let iv = match self.models.get(&p) {
                Some(m) => m.eval(&point)?,
                None => nonarch_local_height(&self.param, Prime::new(p)?)?.eval(&point)?,
            };
            per_place.push(finite_value(&iv));
        }
        let g = escape_rate_rational(self.t, x, tol)?;
        per_place.push(PlaceValue { place: Place::Archimedean, exact: None, value: g.value, error: g.certified_error });
        let value = per_place.iter().map(|v| v.value).sum();
        let error = per_place.iter().map(|v| v.error).sum();
        Ok(CanonicalHeight { value, error, per_place })
    }
}
