//! Partial-wave symbols of the charge form on the real Mellin line and on
//! the shifted lines `k + i/2` and `k + i`, their integral oracles, and the
//! critical constants of the model.

mod constants;
mod moments;
mod oracle;
mod ratio;
mod real_line;
mod scan;
mod shifted;

pub use constants::{critical_constants, CriticalConstants};
pub use moments::{b_coeff, legendre_moments};
pub use oracle::{s_off_oracle, s_off_one_shift_oracle, s_reg_oracle, s_reg_one_shift_oracle};
pub use real_line::{s_off, s_reg, s_total, theta_f};
pub use scan::{critical_gamma_by_scan, scan_min, symbol_value, SymbolKind};
pub use shifted::{
    half_shift_swave_explicit, q1_symbol, q2_symbol, q_t_symbols, s_half_shift, s_off_half_shift, s_off_one_shift,
    s_one_shift, s_reg_half_shift, s_reg_one_shift, QSymbols,
};

/// One sampled symbol value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolPoint<T> {
    pub l: usize,
    pub k: T,
    pub value: T,
}
