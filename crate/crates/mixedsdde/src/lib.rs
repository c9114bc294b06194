//! A numerical laboratory for mixed stochastic delay differential equations
//! driven jointly by a Wiener process and a Hölder-continuous process such as
//! fractional Brownian motion with H > 1/2.
//!
//! The crate is organised bottom-up: grids and sampled paths, driver
//! synthesis, the pathwise norm machinery, fractional-calculus integrals,
//! the delay-equation solvers, and finally the replicated experiment studies
//! exposed through the `mixedsdde` binary.

pub mod driver_paths;
pub mod error;
pub mod experiments;
pub mod fractional_integrals;
pub mod grid;
pub mod holder_norms;
pub mod sdde_solver;

pub use error::{Error, Result};
