//! Critical-point audit of scalar functions on T²: Newton iteration on ∇f = 0
//! seeded from gradient sign-change cells, Hessian classification, Morse and
//! zero-set-regularity verdicts.

use serde::{Deserialize, Serialize};

use crate::bfield::TrigPolynomial;
use crate::error::{Error, Result};

/// Newton tolerance on ‖∇f‖∞ relative to the gradient scale.
const NEWTON_TOL: f64 = 1e-12;
const MAX_NEWTON_ITERS: usize = 50;
/// Newton steps are clamped to this length to keep iterates near their seed.
const MAX_NEWTON_STEP: f64 = 0.5;
/// Minimum grid for seeding.
pub const MIN_AUDIT_GRID: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalIndex {
    Min,
    Saddle,
    Max,
    /// |det Hess| below tolerance; present only in non-Morse audits.
    Degenerate,
}

/// One converged critical point of the audited function.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub x: f64,
    pub y: f64,
    pub value: f64,
    pub hessian_det: f64,
    pub index: CriticalIndex,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MorseAudit {
    pub critical_points: Vec<CriticalPoint>,
    pub is_morse: bool,
    pub zero_set_regular: bool,
    pub min_abs_critical_value: f64,
    pub min_abs_hessian_det: f64,
    pub grid_n: usize,
    /// Base tolerance; Hessian threshold is `tol`·‖f‖-scale, critical-value
    /// threshold is `tol`.
    pub tol: f64,
    pub hessian_threshold: f64,
    pub value_threshold: f64,
}

impl MorseAudit {
    pub fn counts(&self) -> (usize, usize, usize, usize) {
        let mut c = (0, 0, 0, 0);
        for p in &self.critical_points {
            match p.index {
                CriticalIndex::Min => c.0 += 1,
                CriticalIndex::Saddle => c.1 += 1,
                CriticalIndex::Max => c.2 += 1,
                CriticalIndex::Degenerate => c.3 += 1,
            }
        }
        c
    }

    /// #min − #saddle + #max; zero on T² for Morse functions.
    pub fn euler_characteristic(&self) -> i64 {
        let (mins, saddles, maxs, _) = self.counts();
        mins as i64 - saddles as i64 + maxs as i64
    }
}

/// Audit the critical set of `f` on an n×n seeding grid.
///
/// Newton runs from every cell where both gradient components change sign;
/// converged roots are deduplicated at torus distance 2π/(4n) and classified
/// by their exact Hessian. Unresolved seeds are a hard error so a too-coarse
/// grid cannot silently drop equilibria.
pub fn morse_audit(f: &TrigPolynomial, grid_n: usize, tol: f64) -> Result<MorseAudit> {
    if grid_n < MIN_AUDIT_GRID {
        return Err(Error::GridTooCoarse {
            n: grid_n,
            min: MIN_AUDIT_GRID,
        });
    }
    assert!(tol > 0.0, "tolerance must be positive");

    let gx = f.dx();
    let gy = f.dy();
    let fxx = gx.dx();
    let fxy = gx.dy();
    let fyy = gy.dy();

    let h = std::f64::consts::TAU / grid_n as f64;
    let sample = |g: &TrigPolynomial| -> Vec<f64> {
        let mut v = vec![0.0; grid_n * grid_n];
        for j in 0..grid_n {
            for i in 0..grid_n {
                v[j * grid_n + i] = g.eval(i as f64 * h, j as f64 * h);
            }
        }
        v
    };
    let gx_grid = sample(&gx);
    let gy_grid = sample(&gy);
    let grad_scale = gx_grid
        .iter()
        .chain(&gy_grid)
        .fold(0.0_f64, |m, v| m.max(v.abs()))
        .max(1e-300);
    let newton_tol = NEWTON_TOL * grad_scale.max(1.0);

    let mut roots: Vec<(f64, f64)> = Vec::new();
    let mut unresolved: Vec<(usize, usize)> = Vec::new();
    let dedup_radius = std::f64::consts::TAU / (4.0 * grid_n as f64);

    for j in 0..grid_n {
        for i in 0..grid_n {
            let corners = [
                (i, j),
                ((i + 1) % grid_n, j),
                (i, (j + 1) % grid_n),
                ((i + 1) % grid_n, (j + 1) % grid_n),
            ];
            let spans_zero = |grid: &[f64]| {
                let vals = corners.map(|(a, b)| grid[b * grid_n + a]);
                let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
                let max = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                min <= 0.0 && 0.0 <= max
            };
            if !(spans_zero(&gx_grid) && spans_zero(&gy_grid)) {
                continue;
            }
            let seed = ((i as f64 + 0.5) * h, (j as f64 + 0.5) * h);
            match newton(&gx, &gy, &fxx, &fxy, &fyy, seed, newton_tol) {
                Some((x, y)) => {
                    let (x, y) = (wrap(x), wrap(y));
                    if !roots
                        .iter()
                        .any(|&(rx, ry)| torus_dist(rx, ry, x, y) < dedup_radius)
                    {
                        roots.push((x, y));
                    }
                }
                None => unresolved.push((i, j)),
            }
        }
    }

    if !unresolved.is_empty() {
        return Err(Error::NewtonNonConvergence { cells: unresolved });
    }

    let scale = f.max_abs_on_grid(grid_n).max(1e-300);
    let hessian_threshold = tol * scale;
    let value_threshold = tol;

    roots.sort_by(|a, b| a.partial_cmp(b).expect("finite roots"));
    let critical_points: Vec<CriticalPoint> = roots
        .into_iter()
        .map(|(x, y)| {
            let det = fxx.eval(x, y) * fyy.eval(x, y) - fxy.eval(x, y).powi(2);
            let index = if det.abs() <= hessian_threshold {
                CriticalIndex::Degenerate
            } else if det < 0.0 {
                CriticalIndex::Saddle
            } else if fxx.eval(x, y) > 0.0 {
                CriticalIndex::Min
            } else {
                CriticalIndex::Max
            };
            CriticalPoint {
                x,
                y,
                value: f.eval(x, y),
                hessian_det: det,
                index,
            }
        })
        .collect();

    let min_abs_hessian_det = critical_points
        .iter()
        .map(|p| p.hessian_det.abs())
        .fold(f64::INFINITY, f64::min);
    let min_abs_critical_value = critical_points
        .iter()
        .map(|p| p.value.abs())
        .fold(f64::INFINITY, f64::min);
    let is_morse = !critical_points.is_empty() && min_abs_hessian_det > hessian_threshold;
    let zero_set_regular =
        !critical_points.is_empty() && min_abs_critical_value > value_threshold;

    Ok(MorseAudit {
        critical_points,
        is_morse,
        zero_set_regular,
        min_abs_critical_value,
        min_abs_hessian_det,
        grid_n,
        tol,
        hessian_threshold,
        value_threshold,
    })
}

/// Damped Newton on ∇f = 0 with a pseudo-inverse fallback for singular
/// Hessians (degenerate critical circles still converge component-wise).
#[allow(clippy::too_many_arguments)]
fn newton(
    gx: &TrigPolynomial,
    gy: &TrigPolynomial,
    fxx: &TrigPolynomial,
    fxy: &TrigPolynomial,
    fyy: &TrigPolynomial,
    seed: (f64, f64),
    newton_tol: f64,
) -> Option<(f64, f64)> {
    let (mut x, mut y) = seed;
    for _ in 0..MAX_NEWTON_ITERS {
        let g = [gx.eval(x, y), gy.eval(x, y)];
        if g[0].abs().max(g[1].abs()) <= newton_tol {
            return Some((x, y));
        }
        let (a, b, c) = (fxx.eval(x, y), fxy.eval(x, y), fyy.eval(x, y));
        let [mut dx, mut dy] = sym2_pinv_solve(a, b, c, [-g[0], -g[1]])?;
        let norm = dx.hypot(dy);
        if norm > MAX_NEWTON_STEP {
            dx *= MAX_NEWTON_STEP / norm;
            dy *= MAX_NEWTON_STEP / norm;
        }
        x += dx;
        y += dy;
    }
    None
}

/// Solve the symmetric system [[a, b], [b, c]]·d = rhs via the spectral
/// pseudo-inverse; eigenvalues below 1e-12 of the dominant one are dropped.
fn sym2_pinv_solve(a: f64, b: f64, c: f64, rhs: [f64; 2]) -> Option<[f64; 2]> {
    let mean = 0.5 * (a + c);
    let disc = (0.5 * (a - c)).hypot(b);
    let e1 = mean + disc;
    let e2 = mean - disc;
    let sv_tol = 1e-12 * e1.abs().max(e2.abs());
    if sv_tol == 0.0 {
        return None; // zero Hessian, no direction to move
    }
    // Eigenvector for e1 (the other is its rotation by π/2).
    let (v1, v2) = if b.abs() > (a - c).abs() * 1e-14 + 1e-300 {
        let v = [b, e1 - a];
        let n = v[0].hypot(v[1]);
        ([v[0] / n, v[1] / n], [-v[1] / n, v[0] / n])
    } else if a >= c {
        ([1.0, 0.0], [0.0, 1.0])
    } else {
        ([0.0, 1.0], [1.0, 0.0])
    };
    let p1 = rhs[0] * v1[0] + rhs[1] * v1[1];
    let p2 = rhs[0] * v2[0] + rhs[1] * v2[1];
    let c1 = if e1.abs() > sv_tol { p1 / e1 } else { 0.0 };
    let c2 = if e2.abs() > sv_tol { p2 / e2 } else { 0.0 };
    Some([c1 * v1[0] + c2 * v2[0], c1 * v1[1] + c2 * v2[1]])
}

pub(crate) fn wrap(t: f64) -> f64 {
    t.rem_euclid(std::f64::consts::TAU)
}

/// Distance on the torus (ℝ/2πℤ)².
pub fn torus_dist(x1: f64, y1: f64, x2: f64, y2: f64) -> f64 {
    circle_dist(x1, x2).hypot(circle_dist(y1, y2))
}

pub(crate) fn circle_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(std::f64::consts::TAU);
    d.min(std::f64::consts::TAU - d)
}
