//! Quadrature, total variation and extremum search on the real line.

mod extremum;
mod quadrature;
mod special;
mod variation;

pub use extremum::{sup_inf, ExtReal, ExtremumReport, ExtremumSearch};
pub use quadrature::{expanded_radius, gaussian_radius, integrate_interval, integrate_real_line, DecayHint, Quadrature, QuadratureResult};
pub use special::{erfc_tail, erfcx};
pub use variation::{partition_variation, sign_changes, total_variation};
