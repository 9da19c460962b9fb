//! Field and metric representations on the flat charts, construction of
//! symmetric b-Beltrami fields from Hamiltonians, and residual checks of the
//! defining PDE identities.

pub mod field;
pub mod metric;
pub mod residual;
pub mod trig;

pub use field::{Field, FieldCore, FieldSpec, GlobalTorusField, GlobalVariant, SymmetricBField};
pub use metric::SurfaceMetric;
pub use residual::{
    beltrami_residual, contact_check, divergence_residual, exact_eigen_identity_residual,
    BeltramiResidual, ContactReport,
};
pub use trig::{Phase, Term, TrigPolynomial};
