//! Flat-torus eigenspace enumeration and seeded eigenfunction sampling.
//!
//! The spectrum of the flat Laplacian on T² is {μ = |k|² : k ∈ ℤ²}; the real
//! eigenspace E_μ is spanned by cos(k·x), sin(k·x) with one representative k
//! per ±k class, so dim E_μ equals the number of lattice points on the circle
//! |k|² = μ.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::bfield::{Phase, TrigPolynomial};
use crate::error::{Error, Result};

/// Grid used for the sup-norm normalization estimate of sampled functions.
const NORMALIZATION_GRID: usize = 128;

/// Basis of the eigenspace E_μ of the flat torus Laplacian.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EigenspaceBasis {
    pub mu: u32,
    /// Lattice representatives with k₁² + k₂² = μ, one per ±k class,
    /// in lexicographic order; each satisfies k₁ > 0 or (k₁ = 0 ∧ k₂ > 0).
    pub modes: Vec<[i32; 2]>,
}

impl EigenspaceBasis {
    /// dim E_μ = 2·(number of representatives).
    pub fn dim(&self) -> usize {
        2 * self.modes.len()
    }

    /// Basis functions in deterministic order: cos(k·x), sin(k·x) per mode.
    pub fn functions(&self) -> Vec<TrigPolynomial> {
        let mut out = Vec::with_capacity(self.dim());
        for &[k1, k2] in &self.modes {
            out.push(TrigPolynomial::mode(k1, k2, Phase::Cos, 1.0));
            out.push(TrigPolynomial::mode(k1, k2, Phase::Sin, 1.0));
        }
        out
    }

    /// Linear combination Σ coeffs[i]·fᵢ in the order of [`functions`].
    ///
    /// [`functions`]: Self::functions
    pub fn combine(&self, coeffs: &[f64]) -> TrigPolynomial {
        assert_eq!(coeffs.len(), self.dim(), "coefficient length != dim");
        let mut f = TrigPolynomial::zero();
        for (i, &[k1, k2]) in self.modes.iter().enumerate() {
            f.add_term(k1, k2, Phase::Cos, coeffs[2 * i]);
            f.add_term(k1, k2, Phase::Sin, coeffs[2 * i + 1]);
        }
        f
    }
}

/// Exhaustive lattice search over |k₁|, |k₂| ≤ ⌈√μ⌉, one representative per
/// ±k class. Errors if no lattice point hits μ (e.g. μ = 3).
pub fn enumerate_eigenspace(mu: u32) -> Result<EigenspaceBasis> {
    assert!(mu >= 1, "mu must be >= 1");
    let bound = (mu as f64).sqrt().ceil() as i32;
    let mut modes = Vec::new();
    for k1 in 0..=bound {
        let start = if k1 == 0 { 1 } else { -bound };
        for k2 in start..=bound {
            if k1 as i64 * k1 as i64 + k2 as i64 * k2 as i64 == mu as i64 {
                modes.push([k1, k2]);
            }
        }
    }
    if modes.is_empty() {
        return Err(Error::EmptyEigenspace { mu });
    }
    modes.sort_unstable();
    Ok(EigenspaceBasis { mu, modes })
}

/// Number of lattice points with |k|² = μ by brute force over the lattice
/// square; independent oracle for `enumerate_eigenspace(mu).dim()`.
pub fn lattice_circle_count(mu: u32) -> usize {
    let bound = (mu as f64).sqrt().ceil() as i64;
    let mut count = 0;
    for k1 in -bound..=bound {
        for k2 in -bound..=bound {
            if k1 * k1 + k2 * k2 == mu as i64 {
                count += 1;
            }
        }
    }
    count
}

/// Σ aᵢfᵢ with aᵢ i.i.d. standard normal from a ChaCha generator seeded by
/// `seed`, normalized to unit sup-norm estimate.
pub fn sample_eigenfunction(basis: &EigenspaceBasis, seed: u64) -> TrigPolynomial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<f64> = (0..basis.dim())
        .map(|_| rng.sample::<f64, _>(StandardNormal))
        .collect();
    let f = basis.combine(&coeffs);
    let sup = f.max_abs_on_grid(NORMALIZATION_GRID);
    if sup > 0.0 {
        f.scale(1.0 / sup)
    } else {
        f
    }
}
