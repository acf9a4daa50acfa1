//! Assembly of the height pairing from local energies, the zero-sum identity, and the
//! two pairing bounds: the upper bound through a finite set and the effective
//! non-archimedean lower bound.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::arch::{arch_detail, energy_arch_measure_difference, ArchConfig};
use super::nonarch::{energy_nonarch, nonarch_cross_integral, nonarch_self_integral, CaseTag};
use super::value::{EnergyValue, LocalEnergy};
use crate::arith::{rational_to_f64, relevant_primes, valuation, LogInterval, LogSum, Place, Prime, Rational};
use crate::error::{Error, Result};
use crate::lattes::{ExtComplex, ExtRational, LegendreParam};
use crate::local_height::{canonical_height, escape_rate_arch, escape_rate_rational, nonarch_local_height, BerkovichPoint};
use crate::measures::{Estimate, Radii};
use crate::par;

fn q(x: i64) -> Rational {
    Rational::from_integer(x.into())
}

fn complex(t: &LegendreParam) -> Complex64 {
    Complex64::new(t.to_f64(), 0.0)
}

/// Finite places where E_p(t1, t2) can be nonzero, always including 2.
pub fn pairing_places(t1: &LegendreParam, t2: &LegendreParam) -> Result<BTreeSet<u64>> {
    let one = q(1);
    let xs = [t1.t().clone(), t1.t() - &one, t2.t().clone(), t2.t() - &one];
    let mut ps = relevant_primes(xs.iter())?;
    ps.insert(2);
    Ok(ps)
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct PairingConfig {
    pub arch: ArchConfig,
    /// Also evaluate the archimedean energy through the empirical measure difference.
    pub cross_check: bool,
}

/// The total split by precision: exact log-combination, certified intervals, Monte-Carlo.
#[derive(Debug, Clone, Serialize)]
pub struct TotalSplit {
    pub exact: LogSum,
    pub exact_value: f64,
    pub interval_lo: f64,
    pub interval_hi: f64,
    pub mc_value: f64,
    pub mc_std_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// sum_v E_v with E_v = (1/2)(int (l1 - l2) dmu2 + int (l2 - l1) dmu1)
    LocalEnergies,
    /// sum_v int l1 dmu2, symmetrized
    CrossIntegrals,
}

#[derive(Debug, Clone, Serialize)]
pub struct RouteCheck {
    pub route: Route,
    pub lo: f64,
    pub hi: f64,
    pub std_error: f64,
    /// Whether the two routes agree within 3 combined standard errors plus interval widths.
    pub agrees: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnergyReport {
    pub t1: String,
    pub t2: String,
    pub places: Vec<LocalEnergy>,
    pub split: TotalSplit,
    /// exact + interval midpoint + Monte-Carlo mean
    pub total: f64,
    /// Bounds from the intervals, before Monte-Carlo error.
    pub total_lo: f64,
    pub total_hi: f64,
    pub std_error: f64,
    /// Interval half-width plus one standard error.
    pub total_err: f64,
    pub route: Route,
    pub alternate: Option<RouteCheck>,
    /// Archimedean energy from the empirical measure difference, when requested.
    pub arch_cross_check: Option<f64>,
    pub note: Option<String>,
}

impl EnergyReport {
    /// The local energy at a place, if reported.
    pub fn at(&self, v: Place) -> Option<&LocalEnergy> {
        self.places.iter().find(|e| e.place == v)
    }

    /// Lower end of the total minus k standard errors.
    pub fn lower_confidence(&self, k: f64) -> f64 {
        self.total_lo - k * self.std_error
    }
}

fn split(places: &[LocalEnergy]) -> TotalSplit {
    let mut s = TotalSplit {
        exact: LogSum::zero(),
        exact_value: 0.0,
        interval_lo: 0.0,
        interval_hi: 0.0,
        mc_value: 0.0,
        mc_std_error: 0.0,
    };
    let mut var = 0.0;
    for e in places {
        match &e.value {
            EnergyValue::Exact(v) => s.exact = &s.exact + v,
            EnergyValue::Interval(iv) => {
                s.interval_lo += iv.lo_f64();
                s.interval_hi += iv.hi_f64();
            }
            EnergyValue::MonteCarlo { value, std_error } => {
                s.mc_value += value;
                var += std_error * std_error;
            }
        }
    }
    s.exact_value = s.exact.to_f64();
    s.mc_std_error = var.sqrt();
    s
}

/// hat h_{t1} . hat h_{t2} = sum_v E_v(t1, t2), with the cross-integral route as a check.
pub fn az_pairing(t1: &LegendreParam, t2: &LegendreParam, cfg: &PairingConfig) -> Result<EnergyReport> {
    if t1 == t2 {
        return Ok(EnergyReport {
            t1: t1.to_string(),
            t2: t2.to_string(),
            places: vec![],
            split: split(&[]),
            total: 0.0,
            total_lo: 0.0,
            total_hi: 0.0,
            std_error: 0.0,
            total_err: 0.0,
            route: Route::LocalEnergies,
            alternate: None,
            arch_cross_check: None,
            note: Some("equality iff t1 = t2".into()),
        });
    }
    let primes: Vec<Prime> = pairing_places(t1, t2)?.into_iter().map(Prime::new).collect::<Result<_>>()?;
    let mut places: Vec<LocalEnergy> = Vec::new();
    let mut alt_lo = 0.0;
    let mut alt_hi = 0.0;
    for p in &primes {
        places.push(energy_nonarch(t1, t2, *p)?);
        let (a, b) = (nonarch_cross_integral(t1, t2, *p)?, nonarch_cross_integral(t2, t1, *p)?);
        alt_lo += (a.lo_f64() + b.lo_f64()) / 2.0;
        alt_hi += (a.hi_f64() + b.hi_f64()) / 2.0;
    }
    let d = arch_detail(complex(t1), complex(t2), &cfg.arch)?;
    places.push(LocalEnergy {
        place: Place::Archimedean,
        value: EnergyValue::MonteCarlo { value: d.energy.mean, std_error: d.energy.std_error },
        case_tag: CaseTag::Archimedean,
        normalized_by: None,
    });
    let s = split(&places);
    let total_lo = s.exact_value + s.interval_lo + s.mc_value;
    let total_hi = s.exact_value + s.interval_hi + s.mc_value;
    let std_error = s.mc_std_error;
    let alt_mean = (d.cross12.mean + d.cross21.mean) / 2.0;
    let alt_se = (d.cross12.std_error.powi(2) + d.cross21.std_error.powi(2)).sqrt() / 2.0;
    let (alt_lo, alt_hi) = (alt_lo + alt_mean, alt_hi + alt_mean);
    let slack = 3.0 * (alt_se.powi(2) + std_error.powi(2)).sqrt() + 1e-9;
    let agrees = alt_lo <= total_hi + slack && total_lo <= alt_hi + slack;
    let arch_cross_check = if cfg.cross_check {
        Some(energy_arch_measure_difference(complex(t1), complex(t2), &cfg.arch)?)
    } else {
        None
    };
    Ok(EnergyReport {
        t1: t1.to_string(),
        t2: t2.to_string(),
        split: s,
        total: (total_lo + total_hi) / 2.0,
        total_lo,
        total_hi,
        std_error,
        total_err: (total_hi - total_lo) / 2.0 + std_error,
        route: Route::LocalEnergies,
        alternate: Some(RouteCheck { route: Route::CrossIntegrals, lo: alt_lo, hi: alt_hi, std_error: alt_se, agrees }),
        arch_cross_check,
        note: None,
        places,
    })
}

/// sum_v int lambda_{t,v} d mu_{t,v}, which vanishes.
#[derive(Debug, Clone, Serialize)]
pub struct ZeroSum {
    /// (place, [lo, hi] in units of log p)
    pub nonarch: Vec<(u64, String, String)>,
    pub nonarch_lo: f64,
    pub nonarch_hi: f64,
    pub arch: Estimate,
    pub total_lo: f64,
    pub total_hi: f64,
    pub std_error: f64,
}

impl ZeroSum {
    /// Distance of the interval from 0 in standard errors.
    pub fn sigmas(&self) -> f64 {
        let off = if self.total_lo > 0.0 {
            self.total_lo
        } else if self.total_hi < 0.0 {
            -self.total_hi
        } else {
            0.0
        };
        off / self.std_error
    }
}

pub fn zero_sum(t: &LegendreParam, cfg: &ArchConfig) -> Result<ZeroSum> {
    let mut nonarch = Vec::new();
    let (mut lo, mut hi) = (0.0, 0.0);
    for p in pairing_places(t, t)? {
        let iv: LogInterval = nonarch_self_integral(t, Prime::new(p)?)?;
        lo += iv.lo_f64();
        hi += iv.hi_f64();
        nonarch.push((p, iv.lo.to_string(), iv.hi.to_string()));
    }
    let tc = complex(t);
    let mu = cfg.sample(tc, 0)?;
    let arch = mu.integrate(cfg.exec, |z| Ok(escape_rate_arch(tc, z, cfg.tol)?.value))?;
    Ok(ZeroSum {
        nonarch,
        nonarch_lo: lo,
        nonarch_hi: hi,
        total_lo: lo + arch.mean,
        total_hi: hi + arch.mean,
        std_error: arch.std_error,
        arch,
    })
}

/// Nodes of the trapezoid rule for circle averages of lambda_t.
pub const UPPER_BOUND_NODES: usize = 1024;

#[derive(Debug, Clone, Serialize)]
pub struct UpperBoundConfig {
    /// Regularization radii; None selects the default recipe with `arch_scale`.
    pub radii: Option<Radii>,
    /// The constant c in eta_inf = c * min{|t_i|^2, |t_i - 1|^2, |t_i|^-2}.
    pub arch_scale: f64,
    /// Replaces hat h_t(F) by this bound when given; must not be below the computed value.
    pub b: Option<f64>,
    pub tol: f64,
    pub nodes: usize,
}

impl Default for UpperBoundConfig {
    fn default() -> Self {
        UpperBoundConfig { radii: None, arch_scale: 0.05, b: None, tol: 1e-10, nodes: UPPER_BOUND_NODES }
    }
}

/// The bound on hat h_t . h_{F,eta} split into its parts.
#[derive(Debug, Clone, Serialize)]
pub struct ProjectionBound {
    pub t: String,
    pub height_of_set: f64,
    pub height_of_set_error: f64,
    /// sum over finite places of the regularization defect and -log eta / 2|F|
    pub nonarch: f64,
    pub arch: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct UpperBoundReport {
    pub set: Vec<String>,
    pub radii: Radii,
    pub custom_radii: bool,
    pub per_param: [ProjectionBound; 2],
    /// (sqrt P1 + sqrt P2)^2
    pub bound: f64,
}

fn projection_bound(t: &LegendreParam, set: &[Rational], radii: &Radii, cfg: &UpperBoundConfig) -> Result<ProjectionBound> {
    let n = set.len() as f64;
    let mut hf = 0.0;
    let mut hf_err = 0.0;
    for x in set {
        let h = canonical_height(t, &ExtRational::Finite(x.clone()), cfg.tol)?;
        hf += h.value / n;
        hf_err += h.error / n;
    }
    let height_of_set = match cfg.b {
        Some(b) if b + hf_err < hf => {
            return Err(Error::InvalidInput(format!("b = {b} is below the height of F at t = {t} ({hf})")));
        }
        Some(b) => b,
        None => hf,
    };
    // finite places: lambda_t(zeta_{x,eta}) - lambda_t(x), upper ends of the enclosures
    let mut ps: BTreeSet<u64> = pairing_places(t, t)?;
    ps.extend(radii.finite.keys().copied());
    let mut nonarch = 0.0;
    for p in ps {
        let prime = Prime::new(p)?;
        let h = nonarch_local_height(t, prime)?;
        let e = radii.log_finite(p);
        let mut s = 0.0;
        for x in set {
            let disk = h.eval(&BerkovichPoint::TypeII { center: x.clone(), log_radius: e.clone() })?;
            let point = h.eval(&BerkovichPoint::Classical(x.clone()))?;
            s += disk.hi_f64() - point.lo_f64();
        }
        nonarch += s / n - rational_to_f64(&e) * prime.ln() / (2.0 * n);
    }
    let tc = complex(t);
    let eta = radii.arch;
    let nodes = cfg.nodes.max(8);
    let per_point: Vec<Result<f64>> = par::map(crate::par::Exec::Parallel, set, |x| {
        let xc = Complex64::new(rational_to_f64(x), 0.0);
        let mut avg = 0.0;
        for k in 0..nodes {
            let z = xc + Complex64::from_polar(eta, 2.0 * PI * k as f64 / nodes as f64);
            avg += escape_rate_arch(tc, ExtComplex::Finite(z), cfg.tol)?.value;
        }
        Ok(avg / nodes as f64 - escape_rate_rational(tc, x, cfg.tol)?.value)
    });
    let mut arch = 0.0;
    for v in per_point {
        arch += v? / n;
    }
    arch -= eta.ln() / (2.0 * n);
    Ok(ProjectionBound {
        t: t.to_string(),
        height_of_set,
        height_of_set_error: hf_err,
        nonarch,
        arch,
        value: height_of_set + nonarch + arch,
    })
}

/// Triangle-inequality bound on hat h_{t1} . hat h_{t2} through h_{F,eta}.
pub fn pairing_upper_bound_via_set(
    t1: &LegendreParam,
    t2: &LegendreParam,
    set: &[Rational],
    cfg: &UpperBoundConfig,
) -> Result<UpperBoundReport> {
    if set.is_empty() {
        return Err(Error::InvalidInput("the finite set F must be nonempty".into()));
    }
    let mut f = set.to_vec();
    f.sort();
    f.dedup();
    let (radii, custom) = match &cfg.radii {
        Some(r) => (Radii { custom: true, ..r.clone() }, true),
        None => (Radii::for_pair(t1, t2, cfg.arch_scale)?, false),
    };
    let p1 = projection_bound(t1, &f, &radii, cfg)?;
    let p2 = projection_bound(t2, &f, &radii, cfg)?;
    let bound = (p1.value.max(0.0).sqrt() + p2.value.max(0.0).sqrt()).powi(2);
    Ok(UpperBoundReport {
        set: f.iter().map(|x| x.to_string()).collect(),
        radii,
        custom_radii: custom,
        per_param: [p1, p2],
        bound,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct NonArchLowerBound {
    pub exact: LogSum,
    pub value: f64,
    pub good_places: Vec<u64>,
}

/// (1/6) sum over good finite places of (r |log|t2/t1|_p| - 8 log+|1/2|_p), where p is good when
/// |log|t2/t1|_p| >= r max(|log|t1|_p|, |log|t2|_p|).
pub fn nonarch_pairing_lower_bound(t1: &LegendreParam, t2: &LegendreParam, r: &Rational) -> Result<NonArchLowerBound> {
    if !(r > &Rational::zero() && r <= &(q(1) / q(16))) {
        return Err(Error::InvalidInput(format!("r = {r} must lie in (0, 1/16]")));
    }
    if t1 == t2 {
        return Err(Error::IdenticalCurves);
    }
    let mut ps = relevant_primes([t1.t(), t2.t()].into_iter())?;
    ps.insert(2);
    let mut exact = LogSum::zero();
    let mut good_places = Vec::new();
    for p in ps {
        let prime = Prime::new(p)?;
        let v1 = q(valuation(t1.t(), prime)?);
        let v2 = q(valuation(t2.t(), prime)?);
        let d = (&v2 - &v1).abs();
        let m = if v1.abs() >= v2.abs() { v1.abs() } else { v2.abs() };
        if d < r * m {
            continue;
        }
        good_places.push(p);
        let penalty = if p == 2 { q(8) } else { q(0) };
        exact = &exact + &LogSum::single(prime, (r * d - penalty) / q(6));
    }
    Ok(NonArchLowerBound { value: exact.to_f64(), exact, good_places })
}
