use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use crate::arith::{rational_to_f64, relevant_primes, valuation, Prime, Rational};
use crate::error::{Error, Result};
use crate::lattes::LegendreParam;

/// Nodes of the periodic trapezoid rule on a circle.
pub const CIRCLE_NODES: usize = 4096;

/// Regularization radii eta_v, equal to 1 at every place not listed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Radii {
    /// log_p eta_p for the listed primes.
    #[serde(serialize_with = "ser_exponents")]
    pub finite: BTreeMap<u64, Rational>,
    /// eta at the archimedean place.
    pub arch: f64,
    /// Set when the radii do not follow the default recipe.
    pub custom: bool,
}

fn ser_exponents<S: serde::Serializer>(m: &BTreeMap<u64, Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut out = s.serialize_map(Some(m.len()))?;
    for (p, e) in m {
        out.serialize_entry(p, &e.to_string())?;
    }
    out.end()
}

impl Radii {
    pub fn unit() -> Self {
        Radii { finite: BTreeMap::new(), arch: 1.0, custom: true }
    }

    /// log_p eta_p
    pub fn log_finite(&self, p: u64) -> Rational {
        self.finite.get(&p).cloned().unwrap_or_else(Rational::zero)
    }

    /// eta_p = min{1, |t1(t1-1)|_p, |t2(t2-1)|_p} and
    /// eta_inf = c * min_i min{|t_i|^2, |t_i - 1|^2, |t_i|^-2}.
    pub fn for_pair(t1: &LegendreParam, t2: &LegendreParam, c: f64) -> Result<Self> {
        let one = Rational::from_integer(1.into());
        let prods: Vec<Rational> = [t1, t2].iter().map(|t| t.t() * (t.t() - &one)).collect();
        let mut finite = BTreeMap::new();
        for p in relevant_primes(prods.iter())? {
            let prime = Prime::new(p)?;
            let mut e = Rational::zero();
            for x in &prods {
                let l = Rational::from_integer((-valuation(x, prime)?).into());
                if l < e {
                    e = l;
                }
            }
            if !e.is_zero() {
                finite.insert(p, e);
            }
        }
        let arch = [t1, t2]
            .iter()
            .map(|t| {
                let a = rational_to_f64(t.t()).abs();
                let b = (rational_to_f64(t.t()) - 1.0).abs();
                (a * a).min(b * b).min(1.0 / (a * a))
            })
            .fold(f64::INFINITY, f64::min);
        Ok(Radii { finite, arch: c * arch, custom: false })
    }
}

/// The adelic measure m_{F,eta}: uniform on zeta_{x, eta_v} (finite v) or on circles of
/// radius eta_inf about x in F, with the normalizing constants alpha_v.
#[derive(Debug, Clone, Serialize)]
pub struct DiscreteAdelicMeasure {
    #[serde(serialize_with = "ser_rationals")]
    pub support: Vec<Rational>,
    pub radii: Radii,
    /// alpha_p in units of log p, at every prime where it can be nonzero.
    #[serde(serialize_with = "ser_exponents")]
    pub alpha_finite: BTreeMap<u64, Rational>,
    pub alpha_arch: f64,
}

fn ser_rationals<S: serde::Serializer>(xs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| x.to_string()))
}

/// Mean over the circle |z - y| = r of log max(|z - x|, r).
pub fn circle_log_max(x: Complex64, y: Complex64, r: f64) -> f64 {
    let d = (x - y).norm();
    if d >= 2.0 * r {
        return d.ln();
    }
    let n = CIRCLE_NODES;
    (0..n)
        .map(|k| {
            let z = y + Complex64::from_polar(r, 2.0 * PI * k as f64 / n as f64);
            (z - x).norm().max(r).ln()
        })
        .sum::<f64>()
        / n as f64
}

impl DiscreteAdelicMeasure {
    /// Primes where the finite-place part can differ from the Gauss point mass.
    pub fn places(&self) -> BTreeSet<u64> {
        self.alpha_finite.keys().copied().collect()
    }

    /// The finite-place measure at p as a list of points zeta_{x, p^e}, deduplicated.
    pub fn finite_points(&self, p: Prime) -> Result<Vec<(Rational, Rational)>> {
        let e = self.radii.log_finite(p.get());
        let mut pts: Vec<(Rational, Rational)> = Vec::new();
        for x in &self.support {
            let dup = pts.iter().try_fold(false, |acc, (c, _)| -> Result<bool> {
                let d = x - c;
                Ok(acc || d.is_zero() || Rational::from_integer((-valuation(&d, p)?).into()) <= e)
            })?;
            if !dup {
                pts.push((x.clone(), e.clone()));
            }
        }
        Ok(pts)
    }
}

/// Builds m_{F,eta} and its normalizing constants.
pub fn regularize_discrete(support: &[Rational], radii: &Radii) -> Result<DiscreteAdelicMeasure> {
    if support.is_empty() {
        return Err(Error::InvalidInput("the finite set F must be nonempty".into()));
    }
    if !(radii.arch > 0.0) {
        return Err(Error::InvalidInput("archimedean radius must be positive".into()));
    }
    let mut set: Vec<Rational> = support.to_vec();
    set.sort();
    set.dedup();
    let n = Rational::from_integer((set.len() as i64).into());
    let diffs: Vec<Rational> = set
        .iter()
        .flat_map(|x| set.iter().map(move |y| x - y))
        .filter(|d| !d.is_zero())
        .collect();
    let mut primes = relevant_primes(diffs.iter())?;
    primes.extend(radii.finite.keys().copied());
    let mut alpha_finite = BTreeMap::new();
    for p in primes {
        let prime = Prime::new(p)?;
        let e = radii.log_finite(p);
        let mut sum = Rational::zero();
        for x in &set {
            for y in &set {
                let d = x - y;
                let l = if d.is_zero() { e.clone() } else { Rational::from_integer((-valuation(&d, prime)?).into()) };
                sum += if l > e { l } else { e.clone() };
            }
        }
        let two = Rational::from_integer(2.into());
        alpha_finite.insert(p, -sum / (two * &n * &n));
    }
    let pts: Vec<Complex64> = set.iter().map(|x| Complex64::new(rational_to_f64(x), 0.0)).collect();
    let mut s = 0.0;
    for x in &pts {
        for y in &pts {
            s += circle_log_max(*x, *y, radii.arch);
        }
    }
    let nf = set.len() as f64;
    Ok(DiscreteAdelicMeasure { support: set, radii: radii.clone(), alpha_finite, alpha_arch: -s / (2.0 * nf * nf) })
}
