//! Closed-form and numerical analytics: spectral radii and ruin-chain
//! generating functions.

mod ruin;
mod spectral;

pub use ruin::{
    expected_frozen, fapprox_lower, first_visit_series, radius, RuinChain, Side, Target,
};
pub use spectral::{
    ball, ball_kernel, isoperimetric_ratio, path_spectral_radius, radial_kernel, rho_homogeneous,
    rho_subdivision, rho_tree_lower_bounds, spectral_radius_finite, spectral_radius_with,
    SpectralEstimate, SubstochasticMatrix, DEFAULT_MAX_ITER, DEFAULT_TOL,
};
