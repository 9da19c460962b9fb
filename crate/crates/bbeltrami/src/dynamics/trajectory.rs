//! Orbit integration for both field families with a stiffness-free log chart.
//!
//! Off the critical surface the z-coordinate is replaced by a chart variable
//! w in which the symmetric systems become
//!
//! ```text
//! (ẋ, ẏ, ẇ) = (X_x, X_y, X_z)          w = log|z|            (chart fields)
//! (ẋ, ẏ, ẇ) = (X_x, X_y, X_z)          w = log tan(z/2)      (T³ fields)
//! ```
//!
//! so the approach to Z is a drift in w rather than a stiff decay in z. Both
//! Z components of the global model sit at w = ∓∞ of their sector, and the
//! runs terminate on configurable w-bounds (numerical arrival at Z, or chart
//! exit for the chart model). Direct z-integration is also available for
//! cross-checking the charts against each other.

use serde::{Deserialize, Serialize};

use crate::bfield::Field;
use crate::error::{Error, Result};

use super::solver::{integrate_adaptive, SolverOpts};

/// Which coordinates the integrator advances.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChartKind {
    /// Raw (x, y, z).
    Direct,
    /// (x, y, w) with the sector's log map.
    LogZ,
    /// 2D restriction to the critical surface (z frozen).
    OnSurface,
}

/// Connected component of the complement of Z containing the orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZSector {
    /// Chart model, z > 0.
    ChartPos,
    /// Chart model, z < 0.
    ChartNeg,
    /// Global model, z ∈ (0, π).
    GlobalLower,
    /// Global model, z ∈ (π, 2π).
    GlobalUpper,
}

impl ZSector {
    /// z ↦ w.
    pub fn w_of(&self, z: f64) -> f64 {
        match self {
            ZSector::ChartPos => z.ln(),
            ZSector::ChartNeg => (-z).ln(),
            ZSector::GlobalLower => (z / 2.0).tan().ln(),
            ZSector::GlobalUpper => (((std::f64::consts::TAU - z) / 2.0).tan()).ln(),
        }
    }

    /// w ↦ z.
    pub fn z_of(&self, w: f64) -> f64 {
        match self {
            ZSector::ChartPos => w.exp(),
            ZSector::ChartNeg => -w.exp(),
            ZSector::GlobalLower => 2.0 * w.exp().atan(),
            ZSector::GlobalUpper => std::f64::consts::TAU - 2.0 * w.exp().atan(),
        }
    }

    /// Component of Z reached as w → −∞.
    pub fn floor_component(&self) -> f64 {
        0.0
    }

    /// Component of Z reached as w → +∞ for the global sectors.
    pub fn ceiling_component(&self) -> Option<f64> {
        match self {
            ZSector::ChartPos | ZSector::ChartNeg => None,
            ZSector::GlobalLower | ZSector::GlobalUpper => Some(std::f64::consts::PI),
        }
    }
}

/// Why an integration stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminationReason {
    TimeLimit,
    /// Came within `z_floor` of the w → −∞ component of Z.
    ZFloor,
    /// Came within `z_floor` of the w → +∞ component (global sectors).
    ZCeiling,
    /// Left the chart |z| < ε of a chart-model field.
    ChartExit,
    /// Velocity numerically zero (fixed point).
    EquilibriumLock,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct IntegrateOpts {
    pub rtol: f64,
    pub atol: f64,
    pub chart: ChartKind,
    /// Integrate the 2D surface restriction from a start on Z.
    pub on_z: bool,
    /// Distance to Z that counts as numerical arrival.
    pub z_floor: f64,
    pub max_step: f64,
}

impl Default for IntegrateOpts {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            chart: ChartKind::LogZ,
            on_z: false,
            z_floor: 1e-8,
            max_step: 0.25,
        }
    }
}

/// One accepted sample with the first-integral monitor H = −X_z(x, y).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub h: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub chart: ChartKind,
    pub sector: Option<ZSector>,
    pub termination: TerminationReason,
}

impl Trajectory {
    pub fn first(&self) -> &Sample {
        self.samples.first().expect("trajectory has samples")
    }

    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory has samples")
    }

    /// max over samples of |H(t) − H(0)|.
    pub fn h_drift(&self) -> f64 {
        let h0 = self.first().h;
        self.samples
            .iter()
            .fold(0.0_f64, |m, s| m.max((s.h - h0).abs()))
    }

    /// log|z| monitor where applicable (off-surface samples).
    pub fn log_abs_z(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.z.abs().ln()).collect()
    }

    /// Component of Z the terminal sample arrived at, if the run ended on a
    /// floor or ceiling event.
    pub fn terminal_component(&self) -> Option<f64> {
        let sector = self.sector?;
        match self.termination {
            TerminationReason::ZFloor => Some(sector.floor_component()),
            TerminationReason::ZCeiling => sector.ceiling_component(),
            _ => None,
        }
    }
}

/// Sector of an off-surface point, or an error describing why integration
/// cannot start there.
pub fn sector_of(field: &Field, z: f64) -> Result<ZSector> {
    match field {
        Field::Symmetric(f) => {
            if z == 0.0 {
                Err(Error::StartOnCriticalSurface)
            } else if z.abs() >= f.eps() {
                Err(Error::OutOfChart {
                    z_abs: z.abs(),
                    eps: f.eps(),
                })
            } else if z > 0.0 {
                Ok(ZSector::ChartPos)
            } else {
                Ok(ZSector::ChartNeg)
            }
        }
        Field::Global(_) => {
            let zw = z.rem_euclid(std::f64::consts::TAU);
            if zw == 0.0 || zw == std::f64::consts::PI {
                Err(Error::StartOnCriticalSurface)
            } else if zw < std::f64::consts::PI {
                Ok(ZSector::GlobalLower)
            } else {
                Ok(ZSector::GlobalUpper)
            }
        }
    }
}

/// Distance in z from a point to the nearest component of Z.
pub fn dist_to_z(field: &Field, z: f64) -> f64 {
    match field {
        Field::Symmetric(_) => z.abs(),
        Field::Global(_) => {
            let zw = z.rem_euclid(std::f64::consts::TAU);
            let d0 = zw.min(std::f64::consts::TAU - zw);
            let dpi = (zw - std::f64::consts::PI).abs();
            d0.min(dpi)
        }
    }
}

/// Closed-form z(t) of the reduced vertical equation ż = a·sin z on (0, 2π),
/// the motion above a surface equilibrium of the global model. In the sector
/// chart this is just w(t) = w₀ + a·t.
pub fn closed_form_vertical_z(a: f64, z0: f64, t: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let z0 = z0.rem_euclid(tau);
    assert!(
        z0 != 0.0 && z0 != std::f64::consts::PI,
        "start must be off the critical surface"
    );
    if z0 < std::f64::consts::PI {
        let w0 = (z0 / 2.0).tan().ln();
        2.0 * (w0 + a * t).exp().atan()
    } else {
        let w0 = (((tau - z0) / 2.0).tan()).ln();
        tau - 2.0 * (w0 + a * t).exp().atan()
    }
}

/// Integrate an orbit of `field` from `start` over `t_span` (backward when
/// t₁ < t₀). Starts must be off Z unless `opts.on_z` requests the surface
/// restriction.
pub fn integrate(
    field: &Field,
    start: [f64; 3],
    t_span: (f64, f64),
    opts: &IntegrateOpts,
) -> Result<Trajectory> {
    let core = field.core();
    let ham = |x: f64, y: f64| -core.xz().eval(x, y);
    let solver = SolverOpts {
        rtol: opts.rtol,
        atol: opts.atol,
        max_step: opts.max_step,
        max_steps: SolverOpts::default().max_steps,
    };

    if opts.on_z {
        let on_component = match field {
            Field::Symmetric(_) => start[2] == 0.0,
            Field::Global(_) => {
                let zw = start[2].rem_euclid(std::f64::consts::TAU);
                zw == 0.0 || zw == std::f64::consts::PI
            }
        };
        if !on_component {
            return Err(Error::StartOffCriticalSurface { z: start[2] });
        }
        let mut samples = Vec::new();
        let mut termination = TerminationReason::TimeLimit;
        let rhs = |_t: f64, y: &[f64; 2]| core.surface_velocity(y[0], y[1]);
        integrate_adaptive(
            rhs,
            t_span.0,
            [start[0], start[1]],
            t_span.1,
            &solver,
            |t, y| {
                samples.push(Sample {
                    t,
                    x: y[0],
                    y: y[1],
                    z: start[2],
                    h: ham(y[0], y[1]),
                });
                let [vx, vy] = core.surface_velocity(y[0], y[1]);
                if vx.abs().max(vy.abs()) < 1e-14 {
                    termination = TerminationReason::EquilibriumLock;
                    return true;
                }
                false
            },
        )?;
        return Ok(Trajectory {
            samples,
            chart: ChartKind::OnSurface,
            sector: None,
            termination,
        });
    }

    let sector = sector_of(field, start[2])?;
    let mut samples = Vec::new();
    let mut termination = TerminationReason::TimeLimit;

    match opts.chart {
        ChartKind::OnSurface => unreachable!("on_z flag drives the surface path"),
        ChartKind::LogZ => {
            let w_floor = sector.w_of(match field {
                Field::Symmetric(_) => opts.z_floor.copysign(start[2]),
                Field::Global(_) => opts.z_floor,
            });
            let w_ceiling = match field {
                // Chart exit at |z| = ε.
                Field::Symmetric(f) => f.eps().ln(),
                // Numerical arrival at the opposite component.
                Field::Global(_) => sector.w_of(std::f64::consts::PI - opts.z_floor),
            };
            let rhs = |_t: f64, y: &[f64; 3]| {
                let [vx, vy] = core.surface_velocity(y[0], y[1]);
                [vx, vy, core.xz().eval(y[0], y[1])]
            };
            let w0 = sector.w_of(start[2]);
            integrate_adaptive(
                rhs,
                t_span.0,
                [start[0], start[1], w0],
                t_span.1,
                &solver,
                |t, y| {
                    let z = sector.z_of(y[2]);
                    samples.push(Sample {
                        t,
                        x: y[0],
                        y: y[1],
                        z,
                        h: ham(y[0], y[1]),
                    });
                    if y[2] <= w_floor {
                        termination = TerminationReason::ZFloor;
                        return true;
                    }
                    if y[2] >= w_ceiling {
                        termination = match field {
                            Field::Symmetric(_) => TerminationReason::ChartExit,
                            Field::Global(_) => TerminationReason::ZCeiling,
                        };
                        return true;
                    }
                    let v = rhs(t, y);
                    if v[0].abs().max(v[1].abs()).max(v[2].abs()) < 1e-14 {
                        termination = TerminationReason::EquilibriumLock;
                        return true;
                    }
                    false
                },
            )?;
        }
        ChartKind::Direct => {
            let rhs = |_t: f64, y: &[f64; 3]| {
                let [vx, vy] = core.surface_velocity(y[0], y[1]);
                let zfac = match field {
                    Field::Symmetric(_) => y[2],
                    Field::Global(_) => y[2].sin(),
                };
                [vx, vy, zfac * core.xz().eval(y[0], y[1])]
            };
            integrate_adaptive(rhs, t_span.0, start, t_span.1, &solver, |t, y| {
                samples.push(Sample {
                    t,
                    x: y[0],
                    y: y[1],
                    z: y[2],
                    h: ham(y[0], y[1]),
                });
                if dist_to_z(field, y[2]) <= opts.z_floor {
                    // Label the event by the component, matching the log chart.
                    termination = match field {
                        Field::Symmetric(_) => TerminationReason::ZFloor,
                        Field::Global(_) => {
                            let zw = y[2].rem_euclid(std::f64::consts::TAU);
                            if (zw - std::f64::consts::PI).abs() <= opts.z_floor {
                                TerminationReason::ZCeiling
                            } else {
                                TerminationReason::ZFloor
                            }
                        }
                    };
                    return true;
                }
                if let Field::Symmetric(f) = field {
                    if y[2].abs() >= f.eps() {
                        termination = TerminationReason::ChartExit;
                        return true;
                    }
                }
                false
            })?;
        }
    }

    Ok(Trajectory {
        samples,
        chart: opts.chart,
        sector: Some(sector),
        termination,
    })
}
