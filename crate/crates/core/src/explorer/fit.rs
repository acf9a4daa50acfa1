use serde::Serialize;

use super::scan::{scan_pairing_grid, ScanConfig, ScanRow};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct FitConfig {
    /// Slope tested against every data point.
    pub alpha: f64,
    /// Smallest accepted max(h) - min(h).
    pub min_spread: f64,
    /// Grids whose largest height falls below this are fitted with a warning.
    pub recommended_max_height: f64,
    /// Monte-Carlo allowance in standard errors.
    pub sigmas: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig { alpha: 1.0 / 512.0, min_spread: 1.0, recommended_max_height: 20.0, sigmas: 3.0 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FitResult {
    pub points: usize,
    pub slope_ls: f64,
    pub intercept_ls: f64,
    /// Lower envelope pairing >= alpha_hat h - beta_hat with alpha_hat the least-squares slope.
    pub alpha_hat: f64,
    pub beta_hat: f64,
    pub alpha: f64,
    pub max_height: f64,
    /// Rows whose upper end plus k sigma falls below alpha h - beta_hat.
    pub violations: Vec<(String, String)>,
    pub consistent: bool,
    pub note: &'static str,
}

/// Least-squares line and lower envelope of total against h(t1, t2).
pub fn fit_rows(rows: &[ScanRow], cfg: &FitConfig) -> Result<FitResult> {
    let data: Vec<&ScanRow> = rows.iter().filter(|r| r.is_ok() && r.h_t1t2.is_finite()).collect();
    if data.len() < 2 {
        return Err(Error::InvalidInput("fit needs at least two successful rows".into()));
    }
    let hs: Vec<f64> = data.iter().map(|r| r.h_t1t2).collect();
    let (hmin, hmax) = hs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &h| (a.min(h), b.max(h)));
    if hmax - hmin < cfg.min_spread {
        return Err(Error::InvalidInput(format!(
            "insufficient height spread: h ranges over [{hmin:.3}, {hmax:.3}], need at least {}",
            cfg.min_spread
        )));
    }
    if hmax < cfg.recommended_max_height {
        log::warn!("largest height {hmax:.2} is below {}; the fit is a desk-scale consistency check", cfg.recommended_max_height);
    }
    let n = data.len() as f64;
    let mh = hs.iter().sum::<f64>() / n;
    let mp = data.iter().map(|r| r.total).sum::<f64>() / n;
    let sxy: f64 = data.iter().map(|r| (r.h_t1t2 - mh) * (r.total - mp)).sum();
    let sxx: f64 = hs.iter().map(|h| (h - mh).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = mp - slope * mh;
    let beta_hat = data.iter().map(|r| slope * r.h_t1t2 - r.total).fold(f64::NEG_INFINITY, f64::max);
    let violations: Vec<(String, String)> = data
        .iter()
        .filter(|r| r.upper_confidence(cfg.sigmas) < cfg.alpha * r.h_t1t2 - beta_hat)
        .map(|r| (r.t1.clone(), r.t2.clone()))
        .collect();
    Ok(FitResult {
        points: data.len(),
        slope_ls: slope,
        intercept_ls: intercept,
        alpha_hat: slope,
        beta_hat,
        alpha: cfg.alpha,
        max_height: hmax,
        consistent: violations.is_empty(),
        violations,
        note: "empirical lower envelope on a finite grid; consistency only",
    })
}

/// Scans the grid, then fits.
pub fn asymptotic_fit(scan: &ScanConfig, cfg: &FitConfig) -> Result<FitResult> {
    let result = scan_pairing_grid(scan, None)?;
    fit_rows(&result.rows, cfg)
}
