//! Archimedean local energy by Monte-Carlo integration against sampled measures.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::nonarch::CaseTag;
use super::value::{EnergyValue, LocalEnergy};
use crate::arith::Place;
use crate::error::{Error, Result};
use crate::lattes::ExtComplex;
use crate::local_height::escape_rate_arch;
use crate::measures::{sample_mu_backward, sample_mu_torsion, Estimate, SampledMeasure, DEFAULT_BURN_IN};
use crate::par::{self, Exec};

pub const DEFAULT_SAMPLES: usize = 20_000;
/// Points used by the optional measure-difference cross-check; its cost is quadratic.
pub const CROSS_CHECK_POINTS: usize = 1500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sampler {
    Backward,
    Torsion,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ArchConfig {
    pub samples: usize,
    pub seed: u64,
    pub sampler: Sampler,
    /// Backward-orbit length, or tree depth for the torsion sampler.
    pub depth: u32,
    pub tol: f64,
    #[serde(skip)]
    pub exec: Exec,
}

impl Default for ArchConfig {
    fn default() -> Self {
        ArchConfig {
            samples: DEFAULT_SAMPLES,
            seed: 0,
            sampler: Sampler::Backward,
            depth: DEFAULT_BURN_IN,
            tol: 1e-10,
            exec: Exec::Parallel,
        }
    }
}

impl ArchConfig {
    pub fn sample(&self, t: Complex64, stream: u64) -> Result<SampledMeasure> {
        match self.sampler {
            Sampler::Backward => {
                sample_mu_backward(t, self.samples, self.seed.wrapping_add(stream.wrapping_mul(0x9E37_79B9)), self.depth, self.exec)
            }
            Sampler::Torsion => sample_mu_torsion(t, self.depth),
        }
    }
}

/// Means of lambda_{t1} and lambda_{t2} over a sample of one measure.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PairIntegrals {
    /// int lambda_{t1} d mu
    pub first: Estimate,
    /// int lambda_{t2} d mu
    pub second: Estimate,
    /// int (lambda_{t1} - lambda_{t2}) d mu
    pub difference: Estimate,
}

pub(crate) fn pair_integrals(t1: Complex64, t2: Complex64, mu: &SampledMeasure, cfg: &ArchConfig) -> Result<PairIntegrals> {
    let vals: Result<Vec<(f64, f64)>> = par::map(cfg.exec, &mu.points, |z| {
        let a = escape_rate_arch(t1, *z, cfg.tol)?.value;
        let b = escape_rate_arch(t2, *z, cfg.tol)?.value;
        Ok((a, b))
    })
    .into_iter()
    .collect();
    let vals = vals?;
    let first: Vec<f64> = vals.iter().map(|v| v.0).collect();
    let second: Vec<f64> = vals.iter().map(|v| v.1).collect();
    let diff: Vec<f64> = vals.iter().map(|v| v.0 - v.1).collect();
    Ok(PairIntegrals {
        first: Estimate::from_values(&first),
        second: Estimate::from_values(&second),
        difference: Estimate::from_values(&diff),
    })
}

/// Full archimedean output: the energy and the two cross integrals.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ArchDetail {
    pub energy: Estimate,
    /// int lambda_{t1} d mu_{t2}
    pub cross12: Estimate,
    pub cross21: Estimate,
}

pub(crate) fn arch_detail(t1: Complex64, t2: Complex64, cfg: &ArchConfig) -> Result<ArchDetail> {
    let mu1 = cfg.sample(t1, 1)?;
    let mu2 = cfg.sample(t2, 2)?;
    let on2 = pair_integrals(t1, t2, &mu2, cfg)?;
    let on1 = pair_integrals(t1, t2, &mu1, cfg)?;
    // E = (int (l1 - l2) dmu2 + int (l2 - l1) dmu1) / 2
    let mean = (on2.difference.mean - on1.difference.mean) / 2.0;
    let se = (on2.difference.std_error.powi(2) + on1.difference.std_error.powi(2)).sqrt() / 2.0;
    Ok(ArchDetail { energy: Estimate { mean, std_error: se }, cross12: on2.first, cross21: on1.second })
}

fn check(t: Complex64) -> Result<()> {
    if t.norm() == 0.0 || (t - 1.0).norm() == 0.0 || !t.is_finite() {
        return Err(Error::InvalidParameter(t.to_string()));
    }
    Ok(())
}

/// E_inf(t1, t2) with its Monte-Carlo standard error.
pub fn energy_arch(t1: Complex64, t2: Complex64, cfg: &ArchConfig) -> Result<LocalEnergy> {
    check(t1)?;
    check(t2)?;
    if t1 == t2 {
        return Ok(LocalEnergy::exact(Place::Archimedean, crate::arith::LogSum::zero(), CaseTag::Identical));
    }
    let d = arch_detail(t1, t2, cfg)?;
    Ok(LocalEnergy {
        place: Place::Archimedean,
        value: EnergyValue::MonteCarlo { value: d.energy.mean, std_error: d.energy.std_error },
        case_tag: CaseTag::Archimedean,
        normalized_by: None,
    })
}

/// (1/2)(mu1 - mu2, mu1 - mu2) from the empirical measures, dropping the diagonal.
/// A biased but independent estimate of E_inf used only as a cross-check.
pub fn energy_arch_measure_difference(t1: Complex64, t2: Complex64, cfg: &ArchConfig) -> Result<f64> {
    let small = ArchConfig { samples: cfg.samples.min(CROSS_CHECK_POINTS), ..*cfg };
    let a = small.sample(t1, 11)?;
    let b = small.sample(t2, 12)?;
    let fin = |m: &SampledMeasure| -> Vec<Complex64> { m.points.iter().filter_map(|z| ExtComplex::finite(*z)).collect() };
    let (a, b) = (fin(&a), fin(&b));
    let mean_log = |x: &[Complex64], y: &[Complex64]| -> f64 {
        let rows = par::map(cfg.exec, x, |z| {
            y.iter().map(|w| (z - w).norm()).filter(|d| *d > 0.0).map(f64::ln).sum::<f64>()
        });
        rows.iter().sum::<f64>() / (x.len() * y.len()) as f64
    };
    // (nu, nu) = -int int log|z - w|
    Ok(-0.5 * (mean_log(&a, &a) - 2.0 * mean_log(&a, &b) + mean_log(&b, &b)))
}
