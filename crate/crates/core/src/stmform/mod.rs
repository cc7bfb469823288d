//! The regularized charge operator and its quadratic form, sector by sector.

mod kernels;
mod operator;
mod params;
mod reg1;
mod solve;

pub use kernels::{
    angular_quadrature, kernel_diag, kernel_off, kernel_off_by_quadrature, kernel_reg2, kernel_reg2_by_quadrature,
    reg2_cell, reg2_diagonal,
};
pub use operator::{
    assemble_diag, assemble_gamma, assemble_gamma_with, assemble_off, assemble_reg1, assemble_reg2,
    assemble_reg_transform, hankel_multiplier, operator_weights, phi_eval, RegScheme, SectorAssembler, SectorCharge,
    SectorOperator,
};
pub(crate) use operator::symmetrize as symmetrize_matrix;
pub use params::{
    a_eff, coercive_lambda, coercivity_margin, lambda0, CoercivityMargin, CutoffKind, CutoffProfile, ModelParams,
};
pub use reg1::reg1_apply;
pub use solve::{
    f_lambda_correction, greens_asymptotic_check, hardy_check, lambda_kernel, lambda_kernel_matrix, log_log_slope,
    solve_charge, solve_with_operator, t_operator_apply,
    ChargeSolution, GreensRow,
};
