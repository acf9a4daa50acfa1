//! The Legendre family, its Lattes maps and their torsion.

mod halving;
mod map;
mod param;
mod resultant;
mod torsion;

pub use halving::{preimage_branch, preimages};
#[allow(non_snake_case)]
pub use map::{
    apply_F, apply_F_float, apply_f, apply_f_complex, homogeneous_lift, j_invariant, ExactImage, ExtComplex,
    ExtRational,
};
pub use resultant::{lift_coefficients, resultant_data, ResultantData};
pub use param::{CoordinateChange, Cusp, LegendreParam, Sigma};
pub use torsion::{
    common_torsion_count, exact_order_polynomial, split_roots, torsion_images, torsion_polynomial, CommonTorsion,
    CommonTorsionMode, OrderEntry, RootSet, TorsionCatalog, TorsionPolynomial, DEFAULT_MAX_ORDER, HARD_MAX_ORDER,
    NUMERIC_MATCH_TOL,
};
