//! Riemannian metrics on the critical surface T².
//!
//! Near the critical surface the b-metric splits as dz²/z² + h, so all metric
//! data the residual checks need is the surface part h with trig-polynomial
//! coefficients.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::trig::TrigPolynomial;

/// Surface metric h = h₁₁dx² + 2h₁₂dxdy + h₂₂dy² on T².
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SurfaceMetric {
    pub h11: TrigPolynomial,
    pub h22: TrigPolynomial,
    pub h12: TrigPolynomial,
    #[serde(skip)]
    det: TrigPolynomial,
}

impl SurfaceMetric {
    /// The flat metric dx² + dy².
    pub fn flat() -> Self {
        Self::new(
            TrigPolynomial::constant(1.0),
            TrigPolynomial::constant(1.0),
            TrigPolynomial::zero(),
        )
    }

    pub fn new(h11: TrigPolynomial, h22: TrigPolynomial, h12: TrigPolynomial) -> Self {
        let det = h11.mul(&h22).sub(&h12.mul(&h12));
        Self { h11, h22, h12, det }
    }

    /// det h = h₁₁h₂₂ − h₁₂² as an exact trig polynomial.
    pub fn det(&self) -> &TrigPolynomial {
        &self.det
    }

    /// √det h at a point.
    pub fn sqrt_det(&self, x: f64, y: f64) -> f64 {
        self.det.eval(x, y).sqrt()
    }

    pub fn is_flat(&self) -> bool {
        self.h11 == TrigPolynomial::constant(1.0)
            && self.h22 == TrigPolynomial::constant(1.0)
            && self.h12.is_zero()
    }

    /// Positive-definiteness on an n×n validation grid: h₁₁ > 0 and det h > 0
    /// at every node.
    pub fn validate(&self, n: usize) -> Result<()> {
        let h = std::f64::consts::TAU / n as f64;
        for j in 0..n {
            for i in 0..n {
                let (x, y) = (i as f64 * h, j as f64 * h);
                let h11 = self.h11.eval(x, y);
                let det = self.det.eval(x, y);
                if h11 <= 0.0 || det <= 0.0 {
                    return Err(Error::NotPositiveDefinite { x, y, h11, det });
                }
            }
        }
        Ok(())
    }
}

impl Default for SurfaceMetric {
    fn default() -> Self {
        Self::flat()
    }
}

// Restore the cached determinant after deserialization.
impl SurfaceMetric {
    pub(crate) fn rebuild_cache(self) -> Self {
        Self::new(self.h11, self.h22, self.h12)
    }
}
