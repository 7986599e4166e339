//! Minimal average standardized Riesz pair-energies of N-point
//! configurations on the unit sphere.
//!
//! The standardized pair-energy of two sphere points a chordal distance r
//! apart is `V_s(r) = (r^-s - 1)/s`, with the logarithmic kernel `-ln r` as
//! the s -> 0 branch. Averaging over the N(N-1)/2 pairs of a configuration
//! and minimizing over configurations defines `v_s(N)`, whose second
//! discrete derivative in N partitions the integers into sets of local
//! concavity and convexity. This crate computes, analyzes, and validates
//! those quantities:
//!
//! * [`kernel`]: pair energies, configuration averages, potentials, point
//!   energies, gradients, and the exact identities between them.
//! * [`shapes`] / [`exact`]: the small-N optimizers with exact coordinates,
//!   closed forms for `v_s(N)` and its second differences, the
//!   height-adjusted square pyramid, critical exponents, and an exact
//!   rational positivity certificate.
//! * [`minimize`]: multi-start projected-gradient search producing putative
//!   minimal energies for general N.
//! * [`concavity`] / [`catalog`]: discrete-derivative analysis, convexity
//!   sets, signed indicators, set statistics, and the embedded experimental
//!   convexity sets (the "magic numbers").
//! * [`asympt`] / [`zeta`]: continuum constants, rigorous second-derivative
//!   bounds, hexagonal-lattice zeta values, and conjectured large-N
//!   expansion evaluators.
//! * [`nets`]: Sobol' points, the Lambert lift, and spherical-net energy
//!   curves.
//! * [`io`] / [`validate`] / [`cli`]: CSV formats, the validation pipeline,
//!   and the command-line front end.
//!
//! The `examples/` directory holds one runnable example per capability; the
//! `riesz-sphere` binary exposes the same operations as subcommands.

pub mod asympt;
pub mod catalog;
pub mod cli;
pub mod concavity;
pub mod error;
pub mod exact;
pub mod geom;
pub mod io;
pub mod kernel;
pub mod minimize;
pub mod nets;
pub mod shapes;
pub mod table;
pub mod validate;
pub mod zeta;

pub use error::{Error, Result};
pub use geom::{chordal_distance, Configuration, UnitVector, Vec3};
pub use table::EnergyTable;
