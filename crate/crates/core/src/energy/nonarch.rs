//! Local energies at finite places, exact in units of log p.

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::value::{EnergyValue, LocalEnergy};
use crate::arith::{valuation, LogInterval, LogSum, Place, Prime, Rational};
use crate::error::Result;
use crate::lattes::{Cusp, LegendreParam, Sigma};
use crate::local_height::{nonarch_local_height, NonArchLocalHeight, NonArchModel, PiecewiseQuadratic};

fn q(x: i64) -> Rational {
    Rational::from_integer(x.into())
}

fn max_r(a: Rational, b: Rational) -> Rational {
    if a >= b { a } else { b }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseTag {
    Identical,
    BothGood,
    OneGood,
    OppositeCusps,
    SameCusp,
    DyadicExtreme,
    DyadicMiddle,
    Archimedean,
}

/// Position of t at an odd prime: the cusp it reduces to and its depth l > 0.
fn cusp_depth(t: &Rational, p: Prime) -> Result<Option<(Cusp, Rational)>> {
    let l = -q(valuation(t, p)?);
    let l1 = -q(valuation(&(t - q(1)), p)?);
    Ok(if l > Rational::zero() {
        Some((Cusp::Infinity, l))
    } else if l < Rational::zero() {
        Some((Cusp::Zero, -l))
    } else if l1 < Rational::zero() {
        Some((Cusp::One, -l1))
    } else {
        None
    })
}

fn sigma_sending(pairs: &[(Cusp, Cusp)]) -> Sigma {
    *Sigma::ALL
        .iter()
        .find(|s| pairs.iter().all(|(from, to)| s.cusp_image(*from) == *to))
        .expect("S3 acts transitively on ordered pairs of cusps")
}

/// Closed form at p != 2, with the S3 element that moves the configuration to its normal form
/// (first cusp to infinity, second to 0).
fn closed_form(t1: &Rational, t2: &Rational, p: Prime) -> Result<(Rational, CaseTag, Sigma)> {
    let six = q(6);
    Ok(match (cusp_depth(t1, p)?, cusp_depth(t2, p)?) {
        (None, None) => (Rational::zero(), CaseTag::BothGood, Sigma::Identity),
        (Some((c, l)), None) | (None, Some((c, l))) => {
            (l / six, CaseTag::OneGood, sigma_sending(&[(c, Cusp::Infinity)]))
        }
        (Some((c1, l1)), Some((c2, l2))) if c1 != c2 => (
            (l1 + l2) / six,
            CaseTag::OppositeCusps,
            sigma_sending(&[(c1, Cusp::Infinity), (c2, Cusp::Zero)]),
        ),
        (Some((c, l1)), Some((_, l2))) => {
            let d = &l1 - &l2;
            let m = max_r(l1, l2);
            (&d * &d / (six * m), CaseTag::SameCusp, sigma_sending(&[(c, Cusp::Infinity)]))
        }
    })
}

/// An enclosure [lo, hi] in units of log p.
#[derive(Debug, Clone, PartialEq)]
struct Enc {
    lo: Rational,
    hi: Rational,
}

impl Enc {
    fn exact(v: Rational) -> Self {
        Enc { lo: v.clone(), hi: v }
    }
}

/// average of max(k, x) over the support.
fn avg_max(k: &Rational, support: &(Rational, Rational)) -> Rational {
    PiecewiseQuadratic::max_with(k.clone()).average(&support.0, &support.1)
}

/// Enclosure of lambda_{t_j}(base) for a dyadic model j.
fn dyadic_at(h: &NonArchLocalHeight, z: &Rational) -> Result<Enc> {
    let iv = h.eval(&crate::local_height::BerkovichPoint::Classical(z.clone()))?;
    Ok(Enc { lo: iv.lo, hi: iv.hi })
}

/// int lambda_i d mu_i
fn self_integral(h: &NonArchLocalHeight) -> Enc {
    match &h.model {
        NonArchModel::Spine(s) => Enc::exact(s.potential.average(&s.support.0, &s.support.1)),
        NonArchModel::Dyadic(j) => Enc::exact(j.log_radius.clone()),
    }
}

/// lambda_i(zeta_j) = log diam(zeta_i v zeta_j) for two Julia points, from rational test points:
/// if lambda_i(b) != lambda_j(b) the larger value is the answer, otherwise it bounds it above.
fn dyadic_pair(hi_: &NonArchLocalHeight, hj: &NonArchLocalHeight) -> Result<Enc> {
    let (NonArchModel::Dyadic(ji), NonArchModel::Dyadic(jj)) = (&hi_.model, &hj.model) else {
        unreachable!("dyadic_pair takes two Julia points")
    };
    let floor = max_r(ji.log_radius.clone(), jj.log_radius.clone());
    let mut best = Enc { lo: floor.clone(), hi: Rational::from_integer(i64::MAX.into()) };
    for b in [ji.center.clone(), jj.center.clone(), q(0), q(1)] {
        let (a, c) = (dyadic_at(hi_, &b)?, dyadic_at(hj, &b)?);
        let cand = if a.lo > c.hi {
            a
        } else if c.lo > a.hi {
            c
        } else {
            Enc { lo: floor.clone(), hi: max_r(a.hi, c.hi) }
        };
        best = Enc { lo: max_r(best.lo, cand.lo), hi: if cand.hi < best.hi { cand.hi } else { best.hi } };
    }
    Ok(best)
}

/// int lambda_i d mu_j
fn cross_integral(hi_: &NonArchLocalHeight, hj: &NonArchLocalHeight) -> Result<Enc> {
    Ok(match (&hi_.model, &hj.model) {
        (NonArchModel::Spine(si), NonArchModel::Spine(sj)) => {
            let g = if si.base == sj.base { si.potential.clone() } else { si.potential.clamp_below(&q(0)) };
            Enc::exact(g.average(&sj.support.0, &sj.support.1))
        }
        (NonArchModel::Spine(si), NonArchModel::Dyadic(_)) => {
            // the retraction of zeta_j to the spine of i sits at lambda_j(base_i); g_i is nondecreasing
            let k = dyadic_at(hj, &si.base)?;
            Enc { lo: si.potential.eval(&k.lo), hi: si.potential.eval(&k.hi) }
        }
        (NonArchModel::Dyadic(_), NonArchModel::Spine(sj)) => {
            // lambda_i(zeta_{b,p^x}) = max(lambda_i(b), x)
            let k = dyadic_at(hi_, &sj.base)?;
            Enc { lo: avg_max(&k.lo, &sj.support), hi: avg_max(&k.hi, &sj.support) }
        }
        (NonArchModel::Dyadic(_), NonArchModel::Dyadic(_)) => dyadic_pair(hi_, hj)?,
    })
}

/// int lambda_{t1,p} d mu_{t2,p}, in units of log p.
pub fn nonarch_cross_integral(t1: &LegendreParam, t2: &LegendreParam, p: Prime) -> Result<LogInterval> {
    let e = cross_integral(&nonarch_local_height(t1, p)?, &nonarch_local_height(t2, p)?)?;
    Ok(LogInterval { prime: p, lo: e.lo, hi: e.hi })
}

/// int lambda_{t,p} d mu_{t,p}, in units of log p.
pub fn nonarch_self_integral(t: &LegendreParam, p: Prime) -> Result<LogInterval> {
    let e = self_integral(&nonarch_local_height(t, p)?);
    Ok(LogInterval { prime: p, lo: e.lo, hi: e.hi })
}

/// E_p(t1, t2) by integrating the potentials against the measures; exact unless a 2-adic
/// Julia point is involved.
fn integrated_energy(t1: &LegendreParam, t2: &LegendreParam, p: Prime) -> Result<(Rational, Rational)> {
    let (h1, h2) = (nonarch_local_height(t1, p)?, nonarch_local_height(t2, p)?);
    let (i11, i22) = (self_integral(&h1), self_integral(&h2));
    let (i12, i21) = (cross_integral(&h1, &h2)?, cross_integral(&h2, &h1)?);
    let two = q(2);
    let lo = (&i12.lo - &i22.hi + &i21.lo - &i11.hi) / &two;
    let hi = (&i12.hi - &i22.lo + &i21.hi - &i11.lo) / &two;
    Ok((lo, hi))
}

pub fn energy_nonarch(t1: &LegendreParam, t2: &LegendreParam, p: Prime) -> Result<LocalEnergy> {
    let place = Place::Finite(p);
    if t1 == t2 {
        return Ok(LocalEnergy::exact(place, LogSum::zero(), CaseTag::Identical));
    }
    if p.get() != 2 {
        let (v, tag, sigma) = closed_form(t1.t(), t2.t(), p)?;
        let mut e = LocalEnergy::exact(place, LogSum::single(p, v), tag);
        e.normalized_by = Some(sigma.name());
        return Ok(e);
    }
    let (lo, hi) = integrated_energy(t1, t2, p)?;
    let bound = energy_nonarch_lower_bound(t1, t2, p)?.coeff(2);
    let lo = max_r(max_r(lo, Rational::zero()), bound);
    let extreme = nonarch_local_height(t1, p)?.spine().is_some() && nonarch_local_height(t2, p)?.spine().is_some();
    let tag = if extreme { CaseTag::DyadicExtreme } else { CaseTag::DyadicMiddle };
    Ok(if lo == hi {
        LocalEnergy::exact(place, LogSum::single(p, lo), tag)
    } else {
        LocalEnergy { place, value: EnergyValue::Interval(LogInterval { prime: p, lo, hi }), case_tag: tag, normalized_by: None }
    })
}

/// The three-row lower bound on E_p(t1, t2) plus (4/3) log|2|_p, exact.
pub fn energy_nonarch_lower_bound(t1: &LegendreParam, t2: &LegendreParam, p: Prime) -> Result<LogSum> {
    let l1 = -q(valuation(t1.t(), p)?);
    let l2 = -q(valuation(t2.t(), p)?);
    let d = &l1 - &l2;
    let (mn, mx) = if l1 <= l2 { (l1.clone(), l2.clone()) } else { (l2.clone(), l1.clone()) };
    let rhs = if mn > Rational::zero() {
        &d * &d / (q(6) * mx)
    } else if mx < Rational::zero() {
        &d * &d / (q(-6) * mn)
    } else {
        d.abs() / q(6)
    };
    let mut s = LogSum::single(p, rhs);
    if p.get() == 2 {
        s = &s + &LogSum::single(p, q(-4) / q(3));
    }
    Ok(s)
}
