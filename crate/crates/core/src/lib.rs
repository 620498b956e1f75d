//! Spectral Galerkin solvers for the two-sided fractional diffusion equation
//! with drift,
//!
//! ```text
//! -(p D^α u + q D^{α*} u) + d u' = h  on (-1, 1),   u(±1) = 0,
//! ```
//!
//! where `D^α = D I^{n-α} D^{n-1}` is built from left Riemann–Liouville
//! integrals and `D^{α*}` is its right-sided mirror.
//!
//! The core is generic over [`scalar::Real`] (implemented for `f32` and `f64`);
//! the aliases below fix the scalar to `f64`.

pub mod assembly;
pub mod error;
pub mod experiments;
pub mod fraccalc;
pub mod numerics;
pub mod orthopoly;
pub mod problems;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type QuadratureRule = orthopoly::QuadratureRule<f64>;
pub type Gjf = fraccalc::Gjf<f64>;
pub type PowerSum = fraccalc::PowerSum<f64>;
pub type FracOrder = fraccalc::FracOrder<f64>;
pub type Evaluable = fraccalc::Evaluable<f64>;
pub type DiffusionSpec = fraccalc::DiffusionSpec<f64>;
pub type AssembledSystem = assembly::AssembledSystem<f64>;
pub type NumericalSolution = numerics::NumericalSolution<f64>;
pub type ProblemSpec = problems::ProblemSpec<f64>;
