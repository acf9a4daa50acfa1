use std::path::PathBuf;

use serde::Serialize;

use super::calibration::Calibration;
use super::grid::GridSpec;
use crate::arith::{height_a2, Place, Prime};
use crate::energy::{az_pairing, EnergyReport, EnergyValue, PairingConfig};
use crate::error::{Error, Result};
use crate::lattes::LegendreParam;
use crate::par::{self, Exec};

#[derive(Debug, Clone, Serialize)]
pub struct ScanConfig {
    pub grid: GridSpec,
    pub both_orders: bool,
    pub pairing: PairingConfig,
    pub exec: Exec,
    pub csv_out: Option<PathBuf>,
    pub json_out: Option<PathBuf>,
}

impl ScanConfig {
    pub fn new(grid: GridSpec) -> Self {
        ScanConfig { grid, both_orders: false, pairing: PairingConfig::default(), exec: Exec::Parallel, csv_out: None, json_out: None }
    }
}

/// One CSV row. Failed pairs carry NaN values and an error message.
#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    pub t1: String,
    pub t2: String,
    pub h_t1t2: f64,
    #[serde(rename = "E_p2_lo")]
    pub e_p2_lo: f64,
    #[serde(rename = "E_p2_hi")]
    pub e_p2_hi: f64,
    /// Exact energies at the odd places.
    #[serde(rename = "E_nonarch_exact")]
    pub e_nonarch_exact: f64,
    #[serde(rename = "E_arch")]
    pub e_arch: f64,
    #[serde(rename = "E_arch_se")]
    pub e_arch_se: f64,
    pub total: f64,
    pub total_err: f64,
    #[serde(skip)]
    pub report: Option<EnergyReport>,
    #[serde(skip)]
    pub error: Option<String>,
}

impl ScanRow {
    fn failed(t1: &LegendreParam, t2: &LegendreParam, h: f64, e: &Error) -> Self {
        ScanRow {
            t1: t1.to_string(),
            t2: t2.to_string(),
            h_t1t2: h,
            e_p2_lo: f64::NAN,
            e_p2_hi: f64::NAN,
            e_nonarch_exact: f64::NAN,
            e_arch: f64::NAN,
            e_arch_se: f64::NAN,
            total: f64::NAN,
            total_err: f64::NAN,
            report: None,
            error: Some(e.to_string()),
        }
    }

    fn from_report(h: f64, r: EnergyReport) -> Self {
        let two = Place::Finite(Prime::new(2).expect("prime"));
        let (e_p2_lo, e_p2_hi) = r.at(two).map(|e| e.bounds()).unwrap_or((0.0, 0.0));
        let mut odd = 0.0;
        for e in &r.places {
            if e.place != two && e.place != Place::Archimedean {
                if let EnergyValue::Exact(v) = &e.value {
                    odd += v.to_f64();
                }
            }
        }
        let arch = r.at(Place::Archimedean);
        ScanRow {
            t1: r.t1.clone(),
            t2: r.t2.clone(),
            h_t1t2: h,
            e_p2_lo,
            e_p2_hi,
            e_nonarch_exact: odd,
            e_arch: arch.map_or(0.0, |e| e.value_f64()),
            e_arch_se: arch.map_or(0.0, |e| e.std_error()),
            total: r.total,
            total_err: r.total_err,
            report: Some(r),
            error: None,
        }
    }

    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }

    /// total_hi plus k standard errors.
    pub fn upper_confidence(&self, k: f64) -> f64 {
        match &self.report {
            Some(r) => r.total_hi + k * r.std_error,
            None => f64::NAN,
        }
    }

    /// total_lo minus k standard errors.
    pub fn lower_confidence(&self, k: f64) -> f64 {
        match &self.report {
            Some(r) => r.lower_confidence(k),
            None => f64::NAN,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanSummary {
    pub pairs: usize,
    pub failed: usize,
    /// Smallest total on the grid: an empirical estimate only, never a bound.
    pub min_total: f64,
    pub min_total_err: f64,
    pub argmin: Option<(String, String)>,
    /// Rows whose lower end sits above zero by more than three standard errors.
    pub positive_beyond_3sigma: usize,
    pub calibration_sha256: Option<String>,
    pub note: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanResult {
    pub rows: Vec<ScanRow>,
    pub summary: ScanSummary,
}

pub const SCAN_NOTE: &str = "grid minimum of the pairing: an empirical estimate of the uniform lower constant, not a bound";

/// Evaluates the pairing on every grid pair in grid order. Failed pairs are logged and flagged.
pub fn scan_pairing_grid(cfg: &ScanConfig, calibration: Option<&Calibration>) -> Result<ScanResult> {
    let pairs = cfg.grid.pairs(cfg.both_orders)?;
    let rows = par::map(cfg.exec, &pairs, |(t1, t2)| {
        let h = height_a2(t1.t(), t2.t()).unwrap_or(f64::NAN);
        match az_pairing(t1, t2, &cfg.pairing) {
            Ok(r) => ScanRow::from_report(h, r),
            Err(e) => {
                log::warn!("pair ({t1}, {t2}) failed: {e}");
                ScanRow::failed(t1, t2, h, &e)
            }
        }
    });
    let summary = summarize(&rows, calibration);
    let result = ScanResult { rows, summary };
    if let Some(path) = &cfg.csv_out {
        let f = std::fs::File::create(path).map_err(|e| Error::Compute(format!("{}: {e}", path.display())))?;
        write_csv(&result.rows, f)?;
    }
    if let Some(path) = &cfg.json_out {
        let s = serde_json::to_string_pretty(&result).map_err(|e| Error::Compute(e.to_string()))?;
        std::fs::write(path, s).map_err(|e| Error::Compute(format!("{}: {e}", path.display())))?;
    }
    Ok(result)
}

pub fn summarize(rows: &[ScanRow], calibration: Option<&Calibration>) -> ScanSummary {
    let ok: Vec<&ScanRow> = rows.iter().filter(|r| r.is_ok()).collect();
    let best = ok.iter().min_by(|a, b| a.total.total_cmp(&b.total));
    ScanSummary {
        pairs: rows.len(),
        failed: rows.len() - ok.len(),
        min_total: best.map_or(f64::NAN, |r| r.total),
        min_total_err: best.map_or(f64::NAN, |r| r.total_err),
        argmin: best.map(|r| (r.t1.clone(), r.t2.clone())),
        positive_beyond_3sigma: ok.iter().filter(|r| r.lower_confidence(3.0) > 0.0).count(),
        calibration_sha256: calibration.map(|c| c.sha256()),
        note: SCAN_NOTE,
    }
}

/// Writes rows under the fixed header t1,t2,h_t1t2,E_p2_lo,E_p2_hi,E_nonarch_exact,E_arch,E_arch_se,total,total_err.
pub fn write_csv<W: std::io::Write>(rows: &[ScanRow], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in rows {
        wr.serialize(r).map_err(|e| Error::Compute(e.to_string()))?;
    }
    wr.flush().map_err(|e| Error::Compute(e.to_string()))?;
    Ok(())
}
