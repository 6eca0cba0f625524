//! Arbitrary-precision numerics near the hard edge of biorthogonal
//! ensembles whose second interaction uses square roots (`θ = 1/2`).
//!
//! The crate is organised bottom-up:
//!
//! * [`mp`]: arbitrary-precision scalars, gamma, quadrature, cubic roots, LDU.
//! * [`specfun`]: `0F2` series, Wright's generalized Bessel function and the
//!   Frobenius bases of the two third-order ODEs.
//! * [`meijer`]: Meijer G-functions of type `G^{m,0}_{0,3}` on any sheet.
//! * [`rhframe`]: the 3x3 model Riemann-Hilbert matrices and their identities.
//! * [`kernel`]: the limiting hard-edge kernel by two independent formulas.
//! * [`equilibrium`]: equilibrium measures, g-functions and scaling constants.
//! * [`finiten`]: finite-n biorthogonal ensembles and the scaling experiment.
//! * [`cli`]: the command-line front end.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cli;
pub mod equilibrium;
pub mod error;
pub mod finiten;
pub mod kernel;
pub mod meijer;
pub mod mp;
pub mod rhframe;
pub mod specfun;

pub use error::{Error, Result};
pub use mp::{Mat3, PComplex, PReal, Precision};
