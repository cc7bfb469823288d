//! Separable-potential approximation of the contact model: form factors,
//! the scale-dependent coupling, the charge operator at finite range and the
//! convergence diagnostics of its resolvent.

mod form_factor;
mod identity;
mod model;
mod operators;
mod study;

pub use form_factor::{chi_constants, integrate_half_line, r_func, ChiConstants, FormFactor, FormProfile};
pub use model::{default_study_params, eps_ceiling, g_eps, lambda1, nu_eps, EpsModel};
pub use operators::{
    assemble_diag_eps, assemble_off_eps, channel_integrals, channel_table, complex_multiplier, gamma_eps_assemble,
    j_eps, j_eps_gaussian_position, kernel_off_eps, nu_matrix, nu_values, off_eps_lower_bound_margins,
    off_eps_norm_bound, position_form, resolvent_kernel_6d, windowed_nu_matrix, yukawa, ChannelIntegrals,
};
pub use identity::{
    adjoint_exchange, adjoint_source_limit_gap, adjoint_source_matrix, b_direct, b_eps_identity_check, b_exchange,
    b_matrix, conjugated_gamma, kk_resolvent, IdentityCheck, KkResolvent,
};
pub use study::{
    convergence_study, source_battery, uniform_bound_check, RateReport, StudyRow, UniformBound, UniformRow,
};
