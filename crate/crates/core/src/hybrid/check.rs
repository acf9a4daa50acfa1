use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{limit_energy_opposite_cusp, limit_energy_same_cusp, phi_hat};
use crate::energy::{energy_arch, ArchConfig};
use crate::error::{Error, Result};
use crate::lattes::ExtComplex;
use crate::local_height::phi;
use crate::measures::sample_mu_backward;
use crate::par::{self, Exec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CuspPairing {
    Same,
    Opposite,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum Mode {
    /// sup over an a-grid of |phi(t, z_a) - phihat(a)|
    Potential,
    /// largest deviation of the annulus masses from 1/n
    Measure,
    /// E_inf / log|t|^-1 against the limit energy; the second parameter is t^b (same cusp)
    /// or |t|^-b (opposite cusp)
    Energy { cusp: CuspPairing, b: f64 },
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct HybridConfig {
    pub arch: ArchConfig,
    /// a-grid over [grid_lo, grid_hi] for the potential mode
    pub grid_lo: f64,
    pub grid_hi: f64,
    pub grid_points: usize,
    /// argument of the ray z_a = |t|^a e^{i theta}
    pub ray_angle: f64,
    pub annuli: usize,
}

impl Default for HybridConfig {
    fn default() -> Self {
        HybridConfig {
            arch: ArchConfig::default(),
            grid_lo: -1.0,
            grid_hi: 2.0,
            grid_points: 61,
            ray_angle: 0.7,
            annuli: 5,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub t: String,
    pub measured: f64,
    pub predicted: f64,
    /// absolute for the potential and measure modes, relative for the energy mode
    pub deviation: f64,
    pub ratio: Option<f64>,
    pub std_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceTable {
    pub mode: Mode,
    pub rows: Vec<ConvergenceRow>,
    /// last deviation below the first, with at least half of the steps decreasing
    pub shrinking: bool,
    pub final_deviation: f64,
}

fn potential_row(t: Complex64, cfg: &HybridConfig) -> Result<ConvergenceRow> {
    let limit = phi_hat::<f64>();
    let r = t.norm();
    let n = cfg.grid_points.max(2);
    let mut worst: f64 = 0.0;
    for k in 0..n {
        let a = cfg.grid_lo + (cfg.grid_hi - cfg.grid_lo) * k as f64 / (n - 1) as f64;
        let z = Complex64::from_polar(r.powf(a), cfg.ray_angle);
        let v = phi(t, ExtComplex::Finite(z), cfg.arch.tol)?;
        let got = v.normalized.ok_or_else(|| Error::InvalidInput("|t| = 1 has no normalization".into()))?;
        worst = worst.max((got - limit.eval(&a)).abs());
    }
    Ok(ConvergenceRow { t: t.to_string(), measured: worst, predicted: 0.0, deviation: worst, ratio: None, std_error: 0.0 })
}

fn measure_row(t: Complex64, cfg: &HybridConfig) -> Result<ConvergenceRow> {
    let mu = sample_mu_backward(t, cfg.arch.samples, cfg.arch.seed, cfg.arch.depth, cfg.arch.exec)?;
    let n = cfg.annuli.max(1);
    let r = t.norm().min(1.0 / t.norm());
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let (lo, hi) = (r.powf((i + 1) as f64 / n as f64), r.powf(i as f64 / n as f64));
        let (lo, hi) = if t.norm() < 1.0 { (lo, hi) } else { (1.0 / hi, 1.0 / lo) };
        worst = worst.max((mu.mass_of_annulus(lo, hi) - 1.0 / n as f64).abs());
    }
    let predicted = 1.0 / n as f64;
    Ok(ConvergenceRow { t: t.to_string(), measured: worst, predicted, deviation: worst, ratio: None, std_error: 0.0 })
}

fn energy_row(t: Complex64, cusp: CuspPairing, b: f64, cfg: &HybridConfig) -> Result<ConvergenceRow> {
    let l = -t.norm().ln();
    let (s, predicted) = match cusp {
        CuspPairing::Same => (Complex64::from_polar(t.norm().powf(b), t.arg() * b), limit_energy_same_cusp(b)?),
        CuspPairing::Opposite => (Complex64::from_polar(t.norm().powf(-b), -t.arg()), limit_energy_opposite_cusp(b)?),
    };
    let e = energy_arch(s, t, &cfg.arch)?;
    let measured = e.value_f64() / l;
    let deviation = if predicted != 0.0 { (measured - predicted).abs() / predicted } else { measured.abs() };
    Ok(ConvergenceRow {
        t: t.to_string(),
        measured,
        predicted,
        deviation,
        ratio: (predicted != 0.0).then(|| measured / predicted),
        std_error: e.std_error() / l,
    })
}

/// Tabulates the deviation from the limit along a schedule of parameters tending to 0.
pub fn hybrid_convergence_check(mode: Mode, schedule: &[Complex64], cfg: &HybridConfig) -> Result<ConvergenceTable> {
    if schedule.is_empty() {
        return Err(Error::InvalidInput("empty schedule".into()));
    }
    if let Mode::Energy { b, .. } = mode {
        if !(b >= 1.0) {
            return Err(Error::InvalidInput(format!("b = {b} must be at least 1")));
        }
    }
    if schedule.windows(2).any(|w| w[1].norm() >= w[0].norm()) || schedule.last().is_some_and(|t| t.norm() >= 1.0) {
        log::warn!("schedule does not tend monotonically to the cusp at 0");
    }
    let rows: Result<Vec<ConvergenceRow>> = par::map(Exec::Parallel, schedule, |t| match mode {
        Mode::Potential => potential_row(*t, cfg),
        Mode::Measure => measure_row(*t, cfg),
        Mode::Energy { cusp, b } => energy_row(*t, cusp, b, cfg),
    })
    .into_iter()
    .collect();
    let rows = rows?;
    let first = rows[0].deviation;
    let final_deviation = rows[rows.len() - 1].deviation;
    let steps = rows.len().saturating_sub(1);
    let decreasing = rows.windows(2).filter(|w| w[1].deviation < w[0].deviation).count();
    let shrinking = steps == 0 || (final_deviation < first && 2 * decreasing >= steps);
    Ok(ConvergenceTable { mode, rows, shrinking, final_deviation })
}
