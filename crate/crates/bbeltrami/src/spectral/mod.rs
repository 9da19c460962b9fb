//! Flat-torus eigenspace enumeration, eigenfunction sampling, Morse and
//! zero-set audits, and a discrete Laplace–Beltrami operator for verifying
//! the eigenfunction identity of the exceptional Hamiltonian.

pub mod basis;
pub mod laplace;
pub mod morse;

pub use basis::{
    enumerate_eigenspace, lattice_circle_count, sample_eigenfunction, EigenspaceBasis,
};
pub use laplace::{
    eigen_residual_check, exact_laplace_beltrami, DiscreteLaplaceBeltrami, EigenResidual, GridFn,
};
pub use morse::{morse_audit, torus_dist, CriticalIndex, CriticalPoint, MorseAudit};
