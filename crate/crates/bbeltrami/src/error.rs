//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("curl eigenvalue must be nonzero")]
    ZeroLambda,

    #[error(
        "not an eigenfunction of the stated eigenvalue: mode ({},{}) is off the shell k1^2+k2^2 = {shell}",
        mode[0], mode[1]
    )]
    OffShellMode { mode: [i32; 2], shell: i64 },

    #[error("lambda^2 = {lambda_sq} is not an admissible integer eigenvalue")]
    NonIntegerShell { lambda_sq: f64 },

    #[error("empty eigenspace: {mu} is not a sum of two integer squares")]
    EmptyEigenspace { mu: u32 },

    #[error("surface metric is not positive definite at grid node (x={x:.6}, y={y:.6}): h11={h11:.6}, det={det:.6}")]
    NotPositiveDefinite { x: f64, y: f64, h11: f64, det: f64 },

    #[error("field vanishes as a b-section at (x={x:.6}, y={y:.6}): |X|^2 = {norm_sq:.3e}")]
    FieldVanishes { x: f64, y: f64, norm_sq: f64 },

    #[error("Newton non-convergence: {} gradient-zero seed cells unresolved (first at cell ({},{})); raise the grid resolution", cells.len(), cells[0].0, cells[0].1)]
    NewtonNonConvergence { cells: Vec<(usize, usize)> },

    #[error("audit is not Morse with regular zero set (is_morse={is_morse}, zero_set_regular={zero_set_regular})")]
    NonMorseAudit { is_morse: bool, zero_set_regular: bool },

    #[error("start point is out of the field chart: |z| = {z_abs:.3e} >= eps = {eps:.3e}")]
    OutOfChart { z_abs: f64, eps: f64 },

    #[error("start point lies on the critical surface; set on_z to integrate the surface restriction")]
    StartOnCriticalSurface,

    #[error("on_z integration requires a start on the critical surface, got z = {z:.3e}")]
    StartOffCriticalSurface { z: f64 },

    #[error("step size underflow at t = {t:.6e} (h = {h:.3e})")]
    StepSizeUnderflow { t: f64, h: f64 },

    #[error("grid resolution {n} below the minimum {min}")]
    GridTooCoarse { n: usize, min: usize },

    #[error("exceptional Hamiltonian is identically zero on the critical surface")]
    HamiltonianIdenticallyZero,

    #[error("nonconstant eigenfunction must change sign, got range [{min:.6}, {max:.6}]")]
    ZeroMeanViolated { min: f64, max: f64 },

    #[error("orbit verification failed: {0}")]
    VerificationFailed(String),

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
