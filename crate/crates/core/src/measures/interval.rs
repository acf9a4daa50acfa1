use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::arith::{Prime, Rational};
use crate::error::Result;
use crate::lattes::{Cusp, LegendreParam};
use crate::local_height::{nonarch_local_height, NonArchModel, Regime};

/// Which ray of the Berkovich line the support lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// The path from 0 to infinity.
    ZeroInfinity,
    /// The path from 1 to infinity.
    CuspOne,
    /// The ray above the 2-adic Julia point.
    Julia,
}

/// The uniform measure on { zeta_{center, p^x} : lo <= x <= hi } in the hyperbolic metric.
/// Endpoints are exponents in units of log p; lo = hi is a point mass.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalMeasure {
    pub prime: Prime,
    pub branch: Branch,
    #[serde(serialize_with = "crate::arith::ser_rational")]
    pub center: Rational,
    #[serde(serialize_with = "crate::arith::ser_rational")]
    pub lo: Rational,
    #[serde(serialize_with = "crate::arith::ser_rational")]
    pub hi: Rational,
    /// The endpoint fixed by the tent action of f_t (the end at |t|).
    #[serde(serialize_with = "crate::arith::ser_rational")]
    pub fixed_end: Rational,
    /// False only for a 2-adic Julia point whose centre has no rational approximation
    /// within its radius; `center` is then the nearest rational found.
    pub resolved: bool,
}

impl IntervalMeasure {
    pub fn is_point_mass(&self) -> bool {
        self.lo == self.hi
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// The tent action of f_t on the support: the fixed end stays, the other end maps onto it.
    pub fn tent(&self, x: &Rational) -> Rational {
        let far = &self.fixed_end;
        let near = if far == &self.hi { &self.lo } else { &self.hi };
        let span = far - near;
        if span.is_zero() {
            return x.clone();
        }
        let r = (x - near) / &span;
        let two = Rational::from_integer(2.into());
        let r2 = (&two * r - Rational::from_integer(1.into())).abs();
        near + r2 * span
    }
}

/// The canonical measure mu_{t,p} of f_t at a finite place.
pub fn interval_measure(t: &LegendreParam, p: Prime) -> Result<IntervalMeasure> {
    let h = nonarch_local_height(t, p)?;
    Ok(match &h.model {
        NonArchModel::Spine(s) => {
            let branch = if s.base.is_zero() { Branch::ZeroInfinity } else { Branch::CuspOne };
            let fixed_end = match h.regime {
                Regime::Cusp(Cusp::Infinity) | Regime::DyadicExtreme(Cusp::Infinity) => s.support.1.clone(),
                _ => s.support.0.clone(),
            };
            IntervalMeasure {
                prime: p,
                branch,
                center: s.base.clone(),
                lo: s.support.0.clone(),
                hi: s.support.1.clone(),
                fixed_end,
                resolved: true,
            }
        }
        NonArchModel::Dyadic(j) => IntervalMeasure {
            prime: p,
            branch: Branch::Julia,
            center: j.center.clone(),
            lo: j.log_radius.clone(),
            hi: j.log_radius.clone(),
            fixed_end: j.log_radius.clone(),
            resolved: j.resolved,
        },
    })
}
