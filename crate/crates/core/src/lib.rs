//! Numerics for the regularized three-boson contact Hamiltonian.
//!
//! The crate evaluates the partial-wave symbols of the charge form, assembles
//! the charge operator on logarithmic momentum grids, searches for bound
//! states and Thomas collapse, and builds the separable-potential
//! approximation together with its convergence diagnostics.
//!
//! Scalar-level routines (quadrature, special functions, symbols) are generic
//! over [`Real`]; dense operators are assembled in `f64`.

pub mod error;
pub mod quadspec;
pub mod separable;
pub mod spectrum;
pub mod stmform;
pub mod symbols;
pub mod testing;

pub use error::{Error, Result};

/// Crate version, recorded in run reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

use num_traits::{Float, FloatConst, FromPrimitive};
use std::fmt::Debug;

/// Floating point type usable by the generic numerical kernels.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static {
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Conversion from an index or count.
    #[inline]
    fn idx(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Gauss–Legendre rule in double precision.
pub type Rule = quadspec::QuadratureRule<f64>;
/// Logarithmic radial grid in double precision.
pub type Grid = quadspec::LogRadialGrid<f64>;
/// Gauss–Legendre rule in single precision.
pub type Rule32 = quadspec::QuadratureRule<f32>;
/// Logarithmic radial grid in single precision.
pub type Grid32 = quadspec::LogRadialGrid<f32>;
/// Complex double.
pub type C64 = num_complex::Complex<f64>;
