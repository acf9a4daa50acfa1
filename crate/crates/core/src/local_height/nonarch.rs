use num_traits::Zero;
use serde::Serialize;

use super::dyadic::{locate_dyadic_julia, DyadicJulia};
use super::piecewise::PiecewiseQuadratic;
use crate::arith::{valuation, LogInterval, Prime, Rational};
use crate::error::Result;
use crate::lattes::{Cusp, LegendreParam};

fn q(x: i64) -> Rational {
    Rational::from_integer(x.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    GoodReduction,
    Cusp(Cusp),
    DyadicExtreme(Cusp),
    DyadicMiddle,
}

/// A point of the Berkovich affine line of type I (radius zero) or type II.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BerkovichPoint {
    Classical(Rational),
    /// zeta_{center, p^log_radius}
    TypeII { center: Rational, log_radius: Rational },
}

impl BerkovichPoint {
    pub fn gauss() -> Self {
        BerkovichPoint::TypeII { center: Rational::zero(), log_radius: Rational::zero() }
    }

    pub fn center(&self) -> &Rational {
        match self {
            BerkovichPoint::Classical(c) | BerkovichPoint::TypeII { center: c, .. } => c,
        }
    }

    pub fn log_radius(&self) -> Option<&Rational> {
        match self {
            BerkovichPoint::Classical(_) => None,
            BerkovichPoint::TypeII { log_radius, .. } => Some(log_radius),
        }
    }
}

/// lambda_{t,p} on the segment from the base point (0 or 1) to infinity, as a function of
/// x = log_p |z - base|; the measure is uniform in x on `support`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpineModel {
    pub prime: Prime,
    pub base: Rational,
    pub potential: PiecewiseQuadratic<Rational>,
    pub support: (Rational, Rational),
}

impl SpineModel {
    /// Exponent coordinate of the retraction of a point to the spine; None means the base itself.
    pub fn retract(&self, point: &BerkovichPoint) -> Result<Option<Rational>> {
        let d = point.center() - &self.base;
        let from_center = if d.is_zero() { None } else { Some(-q(valuation(&d, self.prime)?)) };
        Ok(match (from_center, point.log_radius()) {
            (Some(a), Some(r)) => Some(if &a > r { a } else { r.clone() }),
            (a, None) => a,
            (None, Some(r)) => Some(r.clone()),
        })
    }

    pub fn eval(&self, point: &BerkovichPoint) -> Result<Rational> {
        Ok(match self.retract(point)? {
            Some(x) => self.potential.eval(&x),
            None => self.potential.pieces()[0][0].clone(),
        })
    }
}

/// The local height and canonical measure data of f_t at a finite place.
#[derive(Debug, Clone)]
pub struct NonArchLocalHeight {
    pub prime: Prime,
    pub param: LegendreParam,
    pub regime: Regime,
    pub model: NonArchModel,
}

#[derive(Debug, Clone)]
pub enum NonArchModel {
    Spine(SpineModel),
    Dyadic(DyadicJulia),
}

/// Potential for the cusp at infinity: breaks at delta and L - delta.
fn big_potential(l: &Rational, delta: &Rational) -> (PiecewiseQuadratic<Rational>, (Rational, Rational)) {
    let half = q(1) / q(2);
    let lo = delta.clone();
    let hi = l - delta;
    let flat = [l * &half, q(0), q(0)];
    let id = [q(0), q(1), q(0)];
    if lo == hi {
        return (PiecewiseQuadratic::new(vec![lo.clone()], vec![flat, id]), (lo, hi));
    }
    // (1/2)((x - delta)^2 / D + L) with D = L - 2 delta
    let d = &hi - &lo;
    let mid = [(delta * delta / &d + l) * &half, -(delta / &d), &half / &d];
    (PiecewiseQuadratic::new(vec![lo.clone(), hi.clone()], vec![flat, mid, id]), (lo, hi))
}

/// Potential for a cusp at the base point: breaks at L + delta and -delta.
fn small_potential(l: &Rational, delta: &Rational) -> (PiecewiseQuadratic<Rational>, (Rational, Rational)) {
    let half = q(1) / q(2);
    let lo = l + delta;
    let hi = -delta.clone();
    let flat = [l * &half, q(0), q(0)];
    let id = [q(0), q(1), q(0)];
    if lo == hi {
        return (PiecewiseQuadratic::new(vec![lo.clone()], vec![flat, id]), (lo, hi));
    }
    // (1/2)((x - s)^2 / D + L) with s = L + delta, D = -L - 2 delta
    let d = &hi - &lo;
    let s = lo.clone();
    let mid = [(&s * &s / &d + l) * &half, -(&s / &d), &half / &d];
    (PiecewiseQuadratic::new(vec![lo.clone(), hi.clone()], vec![flat, mid, id]), (lo, hi))
}

/// Classifies t at p and builds the closed form where one exists.
pub fn nonarch_local_height(t: &LegendreParam, p: Prime) -> Result<NonArchLocalHeight> {
    let tv = t.t();
    let l = -q(valuation(tv, p)?);
    let l1 = -q(valuation(&(tv - q(1)), p)?);
    let (delta, threshold) = if p.get() == 2 { (q(2), q(4)) } else { (q(0), q(0)) };
    let spine = |base: i64, (potential, support): (PiecewiseQuadratic<Rational>, (Rational, Rational))| {
        NonArchModel::Spine(SpineModel { base: q(base), potential, support, prime: p })
    };
    let extreme = |c: Cusp| if p.get() == 2 { Regime::DyadicExtreme(c) } else { Regime::Cusp(c) };
    let (regime, model) = if p.get() == 2 {
        if l >= threshold {
            (extreme(Cusp::Infinity), spine(0, big_potential(&l, &delta)))
        } else if l <= -threshold.clone() {
            (extreme(Cusp::Zero), spine(0, small_potential(&l, &delta)))
        } else if l1 <= -threshold.clone() {
            (extreme(Cusp::One), spine(1, small_potential(&l1, &delta)))
        } else {
            (Regime::DyadicMiddle, NonArchModel::Dyadic(locate_dyadic_julia(tv)?))
        }
    } else if l > Rational::zero() {
        (extreme(Cusp::Infinity), spine(0, big_potential(&l, &delta)))
    } else if l < Rational::zero() {
        (extreme(Cusp::Zero), spine(0, small_potential(&l, &delta)))
    } else if l1 < Rational::zero() {
        (extreme(Cusp::One), spine(1, small_potential(&l1, &delta)))
    } else {
        let g = PiecewiseQuadratic::max_with(q(0));
        (Regime::GoodReduction, spine(0, (g, (q(0), q(0)))))
    };
    Ok(NonArchLocalHeight { prime: p, param: t.clone(), regime, model })
}

impl NonArchLocalHeight {
    /// lambda_{t,p} at a point of the Berkovich affine line, in units of log p.
    pub fn eval(&self, point: &BerkovichPoint) -> Result<LogInterval> {
        match &self.model {
            NonArchModel::Spine(s) => Ok(LogInterval::exact(self.prime, s.eval(point)?)),
            NonArchModel::Dyadic(j) => {
                let (lo, hi) = match point {
                    BerkovichPoint::Classical(z) => j.lambda_at(self.param.t(), z)?,
                    BerkovichPoint::TypeII { center, log_radius } => {
                        j.lambda_at_type2(self.param.t(), center, log_radius)?
                    }
                };
                Ok(LogInterval { prime: self.prime, lo, hi })
            }
        }
    }

    pub fn spine(&self) -> Option<&SpineModel> {
        match &self.model {
            NonArchModel::Spine(s) => Some(s),
            NonArchModel::Dyadic(_) => None,
        }
    }
}

/// lambda_{t,p}(z) for rational z or a type II point.
pub fn local_height_nonarch(t: &LegendreParam, z: &BerkovichPoint, p: Prime) -> Result<LogInterval> {
    nonarch_local_height(t, p)?.eval(z)
}
