//! Numerical laboratory for b-Beltrami vector fields on flat and
//! asymptotically flat b-manifolds.
//!
//! The crate builds b-Beltrami fields from eigenfunctions of the flat torus
//! Laplacian, verifies the structural identities they satisfy (split-coordinate
//! Beltrami system, b-divergence, contact volume, eigenfunction identity of
//! the exceptional Hamiltonian), integrates their trajectories in stiffness-free
//! charts, and runs censuses of escape orbits, singular periodic orbits and
//! generalized singular periodic orbits near the critical surface.
//!
//! Modules:
//! - [`bfield`]: trig-polynomial fields and metrics, PDE residual checks.
//! - [`spectral`]: flat-torus eigenspaces, Morse audits, discrete
//!   Laplace–Beltrami operator.
//! - [`dynamics`]: adaptive orbit integration and orbit classification.
//! - [`census`]: equilibrium classification and orbit-counting reports.
//! - [`cli`]: reproducible experiment drivers behind the `bbeltrami` binary.
//!
//! See the `examples/` directory for one runnable example per capability.

pub mod bfield;
pub mod census;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod spectral;

pub use error::{Error, Result};
