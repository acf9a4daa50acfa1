//! Experiment harness: pairing scans over Farey grids, the lower-envelope fit, small-point
//! searches on rational slices, and the calibration file of empirical constants.
//!
//! Every constant produced here is measured on a finite grid. Reports cite the sha256 of
//! the calibration file they used.

mod calibration;
mod fit;
mod grid;
mod inequality;
mod scan;
mod small;

pub use calibration::{
    c_hat_from, calibrate, calibrate_c, regularization_base, regularization_ratio, regularization_scale, Calibration,
    EpsilonEntry, CALIBRATION_VERSION,
};
pub use fit::{asymptotic_fit, fit_rows, FitConfig, FitResult};
pub use grid::{farey_params, GridSpec};
pub use inequality::{verify_set_inequality, InequalityConfig, SetInequalityReport};
pub use scan::{scan_pairing_grid, summarize, write_csv, ScanConfig, ScanResult, ScanRow, ScanSummary, SCAN_NOTE};
pub use small::{small_point_search, SmallPoint, SmallPointResult, SLICE_LABEL};
