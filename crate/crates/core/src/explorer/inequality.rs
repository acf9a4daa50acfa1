use serde::Serialize;

use super::calibration::Calibration;
use super::small::small_point_search;
use crate::arith::height_a2;
use crate::energy::{az_pairing, PairingConfig};
use crate::error::{Error, Result};
use crate::lattes::LegendreParam;
use crate::par::Exec;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct InequalityConfig {
    pub pairing: PairingConfig,
    pub h_max: u64,
    pub tol: f64,
    pub exec: Exec,
}

impl Default for InequalityConfig {
    fn default() -> Self {
        InequalityConfig { pairing: PairingConfig::default(), h_max: 30, tol: 1e-9, exec: Exec::Parallel }
    }
}

/// Both sides of hhat_{t1} . hhat_{t2} <= 4b + (eps + C(eps)/|S|)(h(t1, t2) + 1).
#[derive(Debug, Clone, Serialize)]
pub struct SetInequalityReport {
    pub t1: String,
    pub t2: String,
    pub eps: f64,
    pub b: f64,
    pub lhs: f64,
    pub lhs_err: f64,
    /// Size of the rational slice of S(b, t1, t2); the true set can only be larger, which lowers the right side.
    pub set_size: usize,
    pub h: f64,
    pub c_hat: f64,
    pub rhs: f64,
    /// rhs - lhs
    pub margin: f64,
    /// margin + 3 sigma >= 0
    pub consistent: bool,
    pub calibration_sha256: String,
    pub note: &'static str,
}

/// Evaluates both sides with the calibrated C(eps). Reports consistency, never a proof.
pub fn verify_set_inequality(
    t1: &LegendreParam,
    t2: &LegendreParam,
    eps: f64,
    b: f64,
    calibration: Option<&Calibration>,
    cfg: &InequalityConfig,
) -> Result<SetInequalityReport> {
    if t1 == t2 {
        return Err(Error::IdenticalCurves);
    }
    let cal = calibration.ok_or_else(|| {
        Error::MissingCalibration("pass a calibration file; create one with `legendre-az fit --calibrate <path> --eps <eps>`".into())
    })?;
    let entry = cal.entry(eps)?;
    let report = az_pairing(t1, t2, &cfg.pairing)?;
    let set = small_point_search(t1, t2, b, cfg.h_max, cfg.tol, cfg.exec)?;
    let h = height_a2(t1.t(), t2.t())?;
    let s = set.points.len();
    let rhs = 4.0 * b + (eps + entry.c_hat / s as f64) * (h + 1.0);
    let margin = rhs - report.total;
    Ok(SetInequalityReport {
        t1: t1.to_string(),
        t2: t2.to_string(),
        eps,
        b,
        lhs: report.total,
        lhs_err: report.total_err,
        set_size: s,
        h,
        c_hat: entry.c_hat,
        rhs,
        margin,
        consistent: margin + 3.0 * report.total_err >= 0.0,
        calibration_sha256: cal.sha256(),
        note: "consistency check with empirically calibrated constants, not a proof",
    })
}
