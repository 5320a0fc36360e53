//! Energy-consistent discontinuous Galerkin discretisation of the isothermal
//! Euler–Korteweg (`mu = 0`) and Navier–Stokes–Korteweg (`mu > 0`) systems
//! in one space dimension.
//!
//! The system is written in mixed form with a chemical-potential-like
//! auxiliary `tau` and a lifted density gradient `q`:
//!
//! ```text
//! rho_t + (rho v)_x                                         = 0
//! rho v_t + (rho v v)_x - (rho v)_x v + rho tau_x
//!         - 1/2 rho (v^2)_x - mu v_xx                       = 0
//! tau - W'(rho) + gamma q_x - 1/2 v^2                       = 0
//! q - rho_x                                                 = 0
//! ```
//!
//! with `v = 0` and `q = 0` on the boundary. The fully discrete scheme is a
//! Crank–Nicolson type midpoint rule combined with face fluxes chosen so that
//! mass is conserved and the discrete energy
//! `E = ∫ W(rho) + 1/2 rho v^2 + gamma/2 q^2` changes exactly by the
//! interior-penalty viscous dissipation.
//!
//! Module map:
//!
//! * [`mesh`]: uniform 1D partitions and their faces.
//! * [`quadrature`], [`space`]: Gauss rules and the broken nodal polynomial space.
//! * [`physics`]: the double-well potential, pressure, energy and reference solutions.
//! * [`scheme`]: fluxes, the SIP viscous form, residual/Jacobian assembly and the flux audit.
//! * [`solver`]: banded LU and Newton iteration.
//! * [`driver`]: time marching, diagnostics, error measurement and EOC sweeps.
//! * [`config`], [`output`]: the plain-text run configuration, presets and CSV writers.
//! * [`cli`]: the `nsk-dg` command-line front end.

// Index loops mirror the quadrature sums; negated comparisons also reject NaN.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod driver;
pub mod dual;
pub mod error;
pub mod mesh;
pub mod output;
pub mod physics;
pub mod quadrature;
pub mod scheme;
pub mod solver;
pub mod space;

pub use error::{Error, Result};
