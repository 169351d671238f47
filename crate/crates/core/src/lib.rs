//! Gaussian states of a damped quantum oscillator: closed-form and numeric
//! propagation, relative entropy to the stationary state, entropy
//! production, the position-representation eigensystem, and selection of the
//! position diffusion coefficient by extremizing the entropy production.
//!
//! Everything is dimensionless: times in units of `1/w`, positions in units
//! of `x0 = 1/sqrt(2 m w)`.

pub mod dxx_solver;
pub mod dynamics;
pub mod entropy;
pub mod error;
pub mod gaussian_state;
pub mod poly;
pub mod search;
pub mod spectral;

pub use dxx_solver::{classify_and_solve, ExtremumKind, ExtremumResult, InitialConditionFamily, Regime};
pub use dynamics::{
    dekker_min, high_temp_coefficients, propagate_analytic, propagate_numeric, steady_state, BathCoefficients,
    ModelCoefficients,
};
pub use entropy::{entropy_production, relative_entropy};
pub use error::{Error, Result};
pub use gaussian_state::{coherent_state, thermal_state, GaussianCVector};
