//! Local energies, the height pairing and its bounds.

mod arch;
mod mutual;
mod nonarch;
mod pairing;
mod value;

pub use arch::{
    energy_arch, energy_arch_measure_difference, ArchConfig, Sampler, CROSS_CHECK_POINTS, DEFAULT_SAMPLES,
};
pub use mutual::{by_place, mutual_energy_all_places, mutual_energy_discrete, Kernel, MutualEnergyValue};
pub use nonarch::{energy_nonarch, energy_nonarch_lower_bound, nonarch_cross_integral, nonarch_self_integral, CaseTag};
pub use pairing::{
    az_pairing, nonarch_pairing_lower_bound, pairing_places, pairing_upper_bound_via_set, zero_sum, EnergyReport,
    NonArchLowerBound, PairingConfig, ProjectionBound, Route, RouteCheck, TotalSplit, UpperBoundConfig,
    UpperBoundReport, ZeroSum, UPPER_BOUND_NODES,
};
pub use value::{EnergyValue, LocalEnergy};
