//! Quadrature rules, special functions, logarithmic grids and the log-variable
//! transforms used to diagonalize and evaluate sector forms.

mod bessel;
mod gamma;
mod gauss;
mod grid;
mod hankel;
mod legendre;
mod mellin;
mod panels;

pub use bessel::{bessel_k0, bessel_k1, bessel_k2, spherical_bessel_j_all};
pub use gamma::ln_gamma_complex;
pub use gauss::{cached_rule, rule_as, QuadratureRule};
pub use grid::LogRadialGrid;
pub use hankel::{sine_transform_swave, LogHankel};
pub use legendre::{legendre_p, legendre_p_all, legendre_q, legendre_q_all_zm1, legendre_q_zm1};
pub use mellin::{inverse_mellin_sharp, mellin_sharp, MellinSpectrum};
pub use panels::RadialPanels;
