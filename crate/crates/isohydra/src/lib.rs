//! Construction and verification of deformed radial Coulomb potentials.
//!
//! Starting from the effective radial potential `V_l(r) = l(l+1)/r^2 - 2/r`
//! (dimensionless units, bound energies `-1/n^2`), this crate builds
//!
//! * a two-parameter family of potentials strictly isospectral to `V_{l-2}`,
//!   together with all of its bound eigenfunctions,
//! * the one-parameter limit generated from the ground state of `V_{l-1}`,
//! * an almost-isospectral intermediate family whose spectrum is missing a
//!   single level,
//!
//! and then checks every claimed spectrum by direct numerical solution of the
//! radial Schrödinger problem with two independent eigensolvers.
//!
//! Module layout mirrors the construction: [`numerics`] holds grids, special
//! functions, quadrature and the Numerov stepper; [`hydrogen`] the undeformed
//! problem; [`seeds`] the pair of seed solutions everything is built from;
//! [`families`] the deformed potentials and their eigenfunctions;
//! [`factorization`] the first-order chain; [`spectralcheck`] the independent
//! verification machinery; [`cli`] the command-line front end.

pub mod cli;
pub mod error;
pub mod factorization;
pub mod families;
pub mod hydrogen;
pub mod numerics;
pub mod seeds;
pub mod spectralcheck;

pub use error::{Error, Result};
pub use numerics::{FunctionTable, Grid, GridScheme, ToleranceConfig};
