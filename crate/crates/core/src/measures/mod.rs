//! Canonical measures at every place, archimedean samplers, and discrete adelic measures.

mod discrete;
mod interval;
mod sampled;

pub use discrete::{circle_log_max, regularize_discrete, DiscreteAdelicMeasure, Radii, CIRCLE_NODES};
pub use interval::{interval_measure, Branch, IntervalMeasure};
pub use sampled::{
    forward_defect, sample_mu_backward, sample_mu_torsion, Estimate, Provenance, SampledMeasure, BACKWARD_ROOT,
    DEFAULT_BURN_IN, MAX_TORSION_DEPTH,
};
