//! Rarefaction waves of a viscous, heat-conducting, radiative and reactive
//! gas in Lagrangian coordinates.
//!
//! The crate builds the exact Riemann fan and its smooth Burgers-based
//! approximation, integrates the full Navier-Stokes system with an explicit
//! finite-difference scheme and evaluates the stability diagnostics.

pub mod cli;
pub mod config;
pub mod diagnostics;
pub mod error;
pub mod grid;
pub mod numerics;
pub mod output;
pub mod solver;
pub mod thermo;
pub mod waves;

pub use error::{Error, Result};
pub use grid::Grid1D;
pub use thermo::{EntropyState, Family, GasParams, HessianReport, ThermoState};
