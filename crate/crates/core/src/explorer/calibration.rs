use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::energy::ArchConfig;
use crate::error::{Error, Result};
use crate::lattes::{ExtComplex, LegendreParam};
use crate::measures::{sample_mu_backward, SampledMeasure};

pub const CALIBRATION_VERSION: u32 = 1;
/// Samples a ball must hold before its mass is trusted for the linear extrapolation.
pub const BALL_SAMPLES: usize = 100;

/// Empirical constants for one epsilon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsilonEntry {
    pub eps: f64,
    /// eps' = eps / 32, below the eps / 16 the derivation requires.
    pub eps_prime: f64,
    /// Largest ladder value 2^-k passing the regularization test at eps'.
    pub c_eps_prime: f64,
    /// Worst normalized regularization error seen at c_eps_prime.
    pub worst_ratio: f64,
    /// C(eps) from c(eps') through the small-set derivation, worst case |S| = 3.
    pub c_hat: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub version: u32,
    pub alpha: f64,
    /// Grid minimum of the pairing, when a scan was supplied.
    pub delta_hat: Option<f64>,
    /// Lower-envelope intercept, when a fit was supplied.
    pub beta_hat: Option<f64>,
    pub entries: Vec<EpsilonEntry>,
    pub params: Vec<String>,
    pub samples: usize,
    pub seed: u64,
    pub procedure: String,
}

impl Calibration {
    /// Hex sha256 of the compact JSON encoding.
    pub fn sha256(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("serializable");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path).map_err(|e| {
            Error::MissingCalibration(format!("{}: {e}; create one with `legendre-az fit --calibrate {}`", path.display(), path.display()))
        })?;
        let c: Calibration = serde_json::from_str(&s).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
        if c.version != CALIBRATION_VERSION {
            return Err(Error::MissingCalibration(format!("calibration version {} is not {CALIBRATION_VERSION}", c.version)));
        }
        Ok(c)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let s = serde_json::to_string_pretty(self).expect("serializable");
        std::fs::write(path, s).map_err(|e| Error::Compute(format!("{}: {e}", path.display())))
    }

    pub fn entry(&self, eps: f64) -> Result<&EpsilonEntry> {
        self.entries.iter().find(|e| (e.eps - eps).abs() <= 1e-12 * eps.abs().max(1.0)).ok_or_else(|| {
            Error::MissingCalibration(format!(
                "no entry for eps = {eps}; rerun `legendre-az fit --calibrate <path> --eps {eps}` to add it"
            ))
        })
    }
}

/// max{log|t|^-1, log|t-1|^-1, log|t|, 1}
pub fn regularization_scale(t: Complex64) -> f64 {
    let a = t.norm().ln();
    let b = (t - 1.0).norm().ln();
    (-a).max(-b).max(a).max(1.0)
}

/// min{|t|^2, |t-1|^2, |t|^-2}
pub fn regularization_base(t: Complex64) -> f64 {
    let a = t.norm_sqr();
    let b = (t - 1.0).norm_sqr();
    a.min(b).min(1.0 / a)
}

/// Upper estimate of (mu_t, [x]) - (mu_t, [x]_r) = int max(0, log r - log|z - x|) dmu_t(z).
///
/// By the layer-cake formula this is int_0^r mu(B(x, s)) ds / s. Below the radius rho where
/// the sample ball holds BALL_SAMPLES points, mu(B(x, s)) is bounded by mu(B(x, rho)) s / rho.
fn regularization_error(mu: &SampledMeasure, x: Complex64, r: f64) -> f64 {
    let mut d: Vec<f64> = mu
        .points
        .iter()
        .filter_map(|z| match z {
            ExtComplex::Finite(z) => Some((z - x).norm()),
            ExtComplex::Infinity => None,
        })
        .collect();
    d.sort_by(f64::total_cmp);
    let n = mu.points.len() as f64;
    let k = BALL_SAMPLES.min(d.len());
    let rho = d[k - 1];
    if r >= rho {
        let direct: f64 = d.iter().take_while(|&&s| s < r).map(|s| (r / s.max(1e-300)).ln()).sum::<f64>() / n;
        let tail = k as f64 / n;
        return direct.max(tail * r / rho);
    }
    (k as f64 / n) * r / rho
}

/// Worst normalized regularization error for the scale c over singletons drawn from mu_t and {0, 1, t}.
pub fn regularization_ratio(t: Complex64, c: f64, mu: &SampledMeasure, probes: &[Complex64]) -> f64 {
    let r = c * regularization_base(t);
    let m = regularization_scale(t);
    probes.iter().map(|&x| regularization_error(mu, x, r) / m).fold(0.0, f64::max)
}

/// Largest c = 2^-k (k <= 60) whose regularization ratio stays below eps on every parameter.
pub fn calibrate_c(eps: f64, params: &[LegendreParam], arch: &ArchConfig, probes_per_param: usize) -> Result<(f64, f64)> {
    let mut cases = Vec::new();
    for (i, t) in params.iter().enumerate() {
        let tc = Complex64::new(t.to_f64(), 0.0);
        let mu = sample_mu_backward(tc, arch.samples, arch.seed.wrapping_add(2 * i as u64), arch.depth, arch.exec)?;
        let probe_mu = sample_mu_backward(tc, probes_per_param, arch.seed.wrapping_add(2 * i as u64 + 1), arch.depth, arch.exec)?;
        let mut probes: Vec<Complex64> = probe_mu.points.iter().filter_map(|z| z.finite()).collect();
        probes.extend([Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), tc]);
        cases.push((tc, mu, probes));
    }
    for k in 0..=60 {
        let c = 2f64.powi(-k);
        let worst = cases.iter().map(|(t, mu, pr)| regularization_ratio(*t, c, mu, pr)).fold(0.0, f64::max);
        if worst < eps {
            return Ok((c, worst));
        }
    }
    Err(Error::Compute(format!("no scale down to 2^-60 meets eps = {eps}")))
}

/// C(eps) large enough that 32/|F| + 16 eps' and (16 log 2 - 2 log c(eps'))/|F| + 8 eps' log 2
/// both stay below eps + C/|S| for every |S| >= 3, |F| = |S| - 1, with eps' = eps / 32.
pub fn c_hat_from(eps: f64, c_eps_prime: f64) -> f64 {
    let ep = eps / 32.0;
    let ln2 = std::f64::consts::LN_2;
    let need = |s: f64| {
        let f = s - 1.0;
        let a = 32.0 / f + 16.0 * ep - eps;
        let b = (16.0 * ln2 - 2.0 * c_eps_prime.ln()) / f + 8.0 * ep * ln2 - eps;
        s * a.max(b)
    };
    // both terms are decreasing in |S|, so |S| = 3 is the worst case
    need(3.0).max(0.0)
}

/// Builds a calibration file for the given epsilons.
pub fn calibrate(
    eps_list: &[f64],
    params: &[LegendreParam],
    arch: &ArchConfig,
    probes_per_param: usize,
    delta_hat: Option<f64>,
    beta_hat: Option<f64>,
) -> Result<Calibration> {
    if eps_list.is_empty() || eps_list.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::InvalidInput("epsilons must be positive".into()));
    }
    if params.is_empty() {
        return Err(Error::InvalidInput("calibration needs at least one parameter".into()));
    }
    let mut entries = Vec::new();
    for &eps in eps_list {
        let eps_prime = eps / 32.0;
        let (c, worst) = calibrate_c(eps_prime, params, arch, probes_per_param)?;
        entries.push(EpsilonEntry { eps, eps_prime, c_eps_prime: c, worst_ratio: worst, c_hat: c_hat_from(eps, c) });
    }
    Ok(Calibration {
        version: CALIBRATION_VERSION,
        alpha: 1.0 / 512.0,
        delta_hat,
        beta_hat,
        entries,
        params: params.iter().map(|t| t.to_string()).collect(),
        samples: arch.samples,
        seed: arch.seed,
        procedure: "c(eps'): largest 2^-k with sup over probe singletons F of |(mu_t,[F]) - (mu_t,[F]_r)| / \
                    max(log|t|^-1, log|t-1|^-1, log|t|, 1) < eps' at r = c min(|t|^2, |t-1|^2, |t|^-2), \
                    probes drawn from mu_t plus 0, 1, t; C(eps) from c(eps/32) at |S| = 3"
            .into(),
    })
}
