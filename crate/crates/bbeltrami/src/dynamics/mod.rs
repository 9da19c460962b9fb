//! Trajectory integration for both field families, with a log-z chart to
//! remove stiffness near the critical surface, first-integral monitoring,
//! and numerical limit-set estimation.

pub mod classify;
pub mod solver;
pub mod trajectory;

pub use classify::{
    classify_orbit, limit_set_estimate, ClassifyOpts, DirectionReport, EndpointLock,
    LimitDirection, LimitSetDescriptor, OrbitVerdict, VerdictKind,
};
pub use solver::{integrate_adaptive, SolverOpts};
pub use trajectory::{
    closed_form_vertical_z, dist_to_z, integrate, sector_of, ChartKind, IntegrateOpts, Sample,
    TerminationReason, Trajectory, ZSector,
};
