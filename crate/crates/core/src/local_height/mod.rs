//! Local height functions lambda_{t,v} at every place and the canonical height.

mod arch;
mod canonical;
mod dyadic;
mod nonarch;
mod padic_iter;
mod piecewise;

pub use arch::{
    escape_rate_arch, escape_rate_homogeneous, escape_rate_rational, phi, ArchConstants, ArchEscapeRate, PhiValue,
};
pub use canonical::{canonical_height, height_places, CanonicalHeight, HeightEvaluator, PlaceValue};
pub use dyadic::{dyadic_log_radius, locate_dyadic_julia, DyadicJulia};
pub use nonarch::{
    local_height_nonarch, nonarch_local_height, BerkovichPoint, NonArchLocalHeight, NonArchModel, Regime, SpineModel,
};
pub use padic_iter::{lift_resultant_valuation, padic_lambda, DEFAULT_PADIC_STEPS};
pub use piecewise::{PiecewiseQuadratic, Quad, Scalar};
