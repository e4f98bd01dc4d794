//! Conformal deformations `g_s = (1 + s phi) g_W` of Wilking's metric.
//!
//! The potential `phi = - sum chi_i psi_i` is minus the squared `g_W`
//! distance to each orbit of flat-plane pairs, cut off outside a tube. To
//! first order in `s` a flat plane `X ^ Y` of `g_W` gains curvature
//! `-1/2 Hess phi(X, X) - 1/2 Hess phi(Y, Y)`, which is positive as soon as
//! the plane leaves the orbit.

mod checks;
mod deform;
mod potential;
mod search;

pub use checks::{flat_configuration_checks, flat_plane_pair, orbit_point, FlatCheckConfig, FlatConfiguration};
pub use deform::{
    deformed_metric, df_ds_positivity, f_eval, first_variation_sec, hess_phi, hessian_identity_check, min_ricci,
    ricci_matrix, DeformConfig, DeformedChart, DeformedPoint,
};
pub use potential::{
    bump, orbit_tangent_normal, FlatOrbit, OrbitTube, PotentialField, PotentialSupport, CHORDAL_STRETCH,
};
pub use search::*;
