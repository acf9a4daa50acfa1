//! Canonical heights, local energies and the Arakelov-Zhang pairing for the Legendre
//! family E_t : y^2 = x(x-1)(x-t) over Q, through the Lattes map f_t.

pub mod arith;
pub mod energy;
pub mod error;
pub mod explorer;
pub mod hybrid;
pub mod lattes;
pub mod local_height;
pub mod measures;
pub mod par;
pub mod poly;

pub use error::{Error, Result};
