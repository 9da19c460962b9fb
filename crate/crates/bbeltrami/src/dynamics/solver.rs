//! Embedded Dormand–Prince 5(4) integrator with adaptive step control.
//!
//! Plain explicit RK with the classic FSAL tableau; the observer sees every
//! accepted step and can stop the run (used for chart-exit and floor events).

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct SolverOpts {
    pub rtol: f64,
    pub atol: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for SolverOpts {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            max_step: 0.25,
            max_steps: 50_000_000,
        }
    }
}

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 5.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// 5th-order minus embedded 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

#[inline]
fn axpy<const D: usize>(y: &[f64; D], h: f64, terms: &[(f64, &[f64; D])]) -> [f64; D] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..D {
            out[i] += h * c * k[i];
        }
    }
    out
}

/// Integrate `y' = rhs(t, y)` from `t0` to `t_end` (either direction).
///
/// The observer receives every accepted `(t, y)` including the initial state;
/// returning `true` stops the run at that sample. Returns the final `(t, y)`.
pub fn integrate_adaptive<const D: usize>(
    rhs: impl Fn(f64, &[f64; D]) -> [f64; D],
    t0: f64,
    y0: [f64; D],
    t_end: f64,
    opts: &SolverOpts,
    mut observer: impl FnMut(f64, &[f64; D]) -> bool,
) -> Result<(f64, [f64; D])> {
    let direction = (t_end - t0).signum();
    if direction == 0.0 || observer(t0, &y0) {
        return Ok((t0, y0));
    }

    let mut t = t0;
    let mut y = y0;
    let mut k1 = rhs(t, &y);
    let mut h = initial_step(&rhs, t, &y, &k1, direction, opts);
    let mut rejected = false;

    for _ in 0..opts.max_steps {
        let remaining = t_end - t;
        if remaining * direction <= 0.0 {
            return Ok((t, y));
        }
        if h.abs() > remaining.abs() {
            h = remaining;
        }
        if h.abs() < 1e-14 * t.abs().max(1.0) {
            return Err(Error::StepSizeUnderflow { t, h });
        }

        let k2 = rhs(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = rhs(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(t + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = rhs(
            t + C5 * h,
            &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = rhs(
            t + h,
            &axpy(
                &y,
                h,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ),
        );
        let y_new = axpy(
            &y,
            h,
            &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
        );
        let k7 = rhs(t + h, &y_new);

        let mut err_sq = 0.0;
        for i in 0..D {
            let e = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i]
                    + E7 * k7[i]);
            let sc = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
            err_sq += (e / sc).powi(2);
        }
        let err = (err_sq / D as f64).sqrt();

        if err <= 1.0 {
            t += h;
            y = y_new;
            k1 = k7; // FSAL
            let stop = observer(t, &y);
            let fac = if err == 0.0 {
                FAC_MAX
            } else {
                (SAFETY * err.powf(-0.2)).clamp(FAC_MIN, if rejected { 1.0 } else { FAC_MAX })
            };
            h = (h * fac).clamp(-opts.max_step, opts.max_step);
            rejected = false;
            if stop {
                return Ok((t, y));
            }
        } else {
            let fac = (SAFETY * err.powf(-0.2)).clamp(FAC_MIN, 1.0);
            h *= fac;
            rejected = true;
        }
    }
    Err(Error::StepSizeUnderflow { t, h })
}

fn initial_step<const D: usize>(
    rhs: &impl Fn(f64, &[f64; D]) -> [f64; D],
    t: f64,
    y: &[f64; D],
    f0: &[f64; D],
    direction: f64,
    opts: &SolverOpts,
) -> f64 {
    // Scaled first-derivative heuristic, then one Euler probe of the second
    // derivative, as in standard adaptive starters.
    let sc = |i: usize| opts.atol + opts.rtol * y[i].abs();
    let d0 = (0..D).map(|i| (y[i] / sc(i)).powi(2)).sum::<f64>().sqrt();
    let d1 = (0..D).map(|i| (f0[i] / sc(i)).powi(2)).sum::<f64>().sqrt();
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let y1 = axpy(y, h0 * direction, &[(1.0, f0)]);
    let f1 = rhs(t + h0 * direction, &y1);
    let d2 = (0..D)
        .map(|i| ((f1[i] - f0[i]) / sc(i)).powi(2))
        .sum::<f64>()
        .sqrt()
        / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    direction * h1.min(100.0 * h0).min(opts.max_step)
}
