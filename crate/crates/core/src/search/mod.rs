//! Certifying transience of the frog model on trees with stretches and
//! bushes, and the sweep over the one-child probability.

mod certify;
mod conditions;
mod sweep;

pub use certify::{
    certify_bush_case, certify_stretch_case, certify_with_density_factor, BushParams, ConditionFlags, DminRule, SearchCaps, SearchRecord,
};
pub use conditions::{
    check_mixed, check_n_feasible, check_type2, check_type3, check_type3_bush, eta_bound_no_stretch, gamma_for_eta,
    max_feasible_n, mu_ceiling, stretch_angle, stretch_series, truncation_ratio, MixedCheck,
};
pub use sweep::{p1_grid, plateaus, sweep_cd, write_plot_data, write_sweep_csv, Plateau, SweepConfig, SweepResult, SweepRow};
pub(crate) use sweep::fmt_real;
