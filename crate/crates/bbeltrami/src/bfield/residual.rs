//! Residual checks of the defining identities on the critical surface.
//!
//! In split coordinates (x, y, z) with g = dz²/z² + h the b-Beltrami equation
//! λ ι_X μ_g = dα restricts on {z = 0} (components z-independent) to
//!
//! ```text
//! λ √det h · X_z = −∂_y(h₁₁X_x + h₁₂X_y) + ∂_x(h₁₂X_x + h₂₂X_y)
//! λ √det h · X_y = −∂_x X_z
//! λ √det h · X_x =  ∂_y X_z
//! ```
//!
//! The b-divergence with respect to μ_g = √det h dx∧dy∧dz/z is
//!
//! ```text
//! div_μ X = (1/√det h)·[∂_x(√det h·X_x) + ∂_y(√det h·X_y)] + z ∂_z X_z ,
//! ```
//!
//! obtained from L_X μ_g = d(ι_X μ_g): the third slot of ι_X μ_g is
//! √det h·X_z dx∧dy (the 1/z of the volume cancels the z of the field), so
//! its exterior derivative only contributes the z-derivative term. For the
//! symmetric model the components are z-independent and mixed partials cancel
//! term by term, so the field is exactly divergence free.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::field::SymmetricBField;
use super::metric::SurfaceMetric;
use super::trig::TrigPolynomial;

/// Minimum grid resolution for the residual sweeps.
pub const MIN_RESIDUAL_GRID: usize = 8;

/// Squared-norm floor below which the Reeb rescaling 1/‖X‖² is meaningless.
pub const NONVANISHING_TOL: f64 = 1e-8;

/// Max-norm residuals of the three split-coordinate equations.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct BeltramiResidual {
    /// λ√det h X_z + ∂_y(h₁₁X_x+h₁₂X_y) − ∂_x(h₁₂X_x+h₂₂X_y)
    pub curl_z: f64,
    /// λ√det h X_y + ∂_x X_z
    pub curl_y: f64,
    /// λ√det h X_x − ∂_y X_z
    pub curl_x: f64,
    pub grid_n: usize,
}

impl BeltramiResidual {
    pub fn max(&self) -> f64 {
        self.curl_z.max(self.curl_y).max(self.curl_x)
    }
}

/// Evaluate the three equations on an n×n mesh at z = 0 with exact trig
/// derivatives of the field and metric coefficients.
pub fn beltrami_residual(
    field: &SymmetricBField,
    metric: &SurfaceMetric,
    grid_n: usize,
) -> Result<BeltramiResidual> {
    check_grid(grid_n)?;
    let core = field.core();
    let lambda = core.lambda();
    let (xx, xy, xz) = (core.xx(), core.xy(), core.xz());

    // Covariant surface components a = h₁₁X_x + h₁₂X_y, b = h₁₂X_x + h₂₂X_y
    // are exact polynomials, as are their derivatives.
    let a = metric.h11.mul(xx).add(&metric.h12.mul(xy));
    let b = metric.h12.mul(xx).add(&metric.h22.mul(xy));
    let a_y = a.dy();
    let b_x = b.dx();
    let xz_x = xz.dx();
    let xz_y = xz.dy();

    let h = std::f64::consts::TAU / grid_n as f64;
    let (mut r1, mut r2, mut r3): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for j in 0..grid_n {
        for i in 0..grid_n {
            let (x, y) = (i as f64 * h, j as f64 * h);
            let rho = metric.sqrt_det(x, y);
            r1 = r1.max((lambda * rho * xz.eval(x, y) + a_y.eval(x, y) - b_x.eval(x, y)).abs());
            r2 = r2.max((lambda * rho * xy.eval(x, y) + xz_x.eval(x, y)).abs());
            r3 = r3.max((lambda * rho * xx.eval(x, y) - xz_y.eval(x, y)).abs());
        }
    }
    Ok(BeltramiResidual {
        curl_z: r1,
        curl_y: r2,
        curl_x: r3,
        grid_n,
    })
}

/// Max of |div_μ X| over an n×n mesh for the symmetric model (components
/// z-independent, so the z∂_z term vanishes identically):
/// div_μ X = ∂_x X_x + ∂_y X_y + (X_x ∂_x√det h + X_y ∂_y√det h)/√det h.
pub fn divergence_residual(
    field: &SymmetricBField,
    metric: &SurfaceMetric,
    grid_n: usize,
) -> Result<f64> {
    check_grid(grid_n)?;
    let core = field.core();
    let div_flat = core.xx().dx().add(&core.xy().dy());
    let h = std::f64::consts::TAU / grid_n as f64;
    let det = metric.det();
    let det_x = det.dx();
    let det_y = det.dy();
    let mut worst: f64 = 0.0;
    for j in 0..grid_n {
        for i in 0..grid_n {
            let (x, y) = (i as f64 * h, j as f64 * h);
            let mut d = div_flat.eval(x, y);
            if !metric.is_flat() {
                // ∂√det/√det = ∂det/(2 det)
                let dv = det.eval(x, y);
                d += (core.xx().eval(x, y) * det_x.eval(x, y)
                    + core.xy().eval(x, y) * det_y.eval(x, y))
                    / (2.0 * dv);
            }
            worst = worst.max(d.abs());
        }
    }
    Ok(worst)
}

/// Contact-volume density report for α = g(X,·).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ContactReport {
    /// min over the grid of |α∧dα / μ_g|; equals |λ|·min‖X‖² when the field
    /// solves the split system exactly.
    pub min_density: f64,
    /// min over the grid of ‖X‖²_g.
    pub min_norm_sq: f64,
    /// Range of the Reeb rescaling factor 1/‖X‖² on the grid.
    pub rescaling_min: f64,
    pub rescaling_max: f64,
    pub grid_n: usize,
}

/// Coefficient of α∧dα against the b-volume form on the grid at z = 0 (the
/// symmetric components are z-independent, so z = ±ε/2 gives the same value).
///
/// Signals a vanishing b-section if ‖X‖²_g drops below [`NONVANISHING_TOL`]
/// anywhere on the grid.
pub fn contact_check(
    field: &SymmetricBField,
    metric: &SurfaceMetric,
    grid_n: usize,
) -> Result<ContactReport> {
    check_grid(grid_n)?;
    let core = field.core();
    let (xx, xy, xz) = (core.xx(), core.xy(), core.xz());
    let a = metric.h11.mul(xx).add(&metric.h12.mul(xy));
    let b = metric.h12.mul(xx).add(&metric.h22.mul(xy));
    // α∧dα = [a ∂_y c − b ∂_x c + c(∂_x b − ∂_y a)] dx∧dy∧dz/z with c = X_z.
    let density_num = a
        .mul(&xz.dy())
        .sub(&b.mul(&xz.dx()))
        .add(&xz.mul(&b.dx().sub(&a.dy())));
    // ‖X‖²_g = a X_x + b X_y + X_z².
    let norm_sq = a.mul(xx).add(&b.mul(xy)).add(&xz.mul(xz));

    let h = std::f64::consts::TAU / grid_n as f64;
    let mut min_density = f64::INFINITY;
    let mut min_norm = f64::INFINITY;
    let mut max_norm: f64 = 0.0;
    for j in 0..grid_n {
        for i in 0..grid_n {
            let (x, y) = (i as f64 * h, j as f64 * h);
            let n2 = norm_sq.eval(x, y);
            if n2 < NONVANISHING_TOL {
                return Err(Error::FieldVanishes { x, y, norm_sq: n2 });
            }
            min_norm = min_norm.min(n2);
            max_norm = max_norm.max(n2);
            let dens = density_num.eval(x, y) / metric.sqrt_det(x, y);
            min_density = min_density.min(dens.abs());
        }
    }
    Ok(ContactReport {
        min_density,
        min_norm_sq: min_norm,
        rescaling_min: 1.0 / max_norm,
        rescaling_max: 1.0 / min_norm,
        grid_n,
    })
}

/// ‖ΔX_z + λ²X_z‖ computed term by term on the trig representation: exactly
/// zero for eigenfunctions, reported as the ℓ¹ coefficient norm otherwise.
pub fn exact_eigen_identity_residual(xz: &TrigPolynomial, lambda: f64) -> f64 {
    xz.laplacian().add(&xz.scale(lambda * lambda)).coeff_l1()
}

fn check_grid(n: usize) -> Result<()> {
    if n < MIN_RESIDUAL_GRID {
        return Err(Error::GridTooCoarse {
            n,
            min: MIN_RESIDUAL_GRID,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bfield::field::GlobalTorusField;
    use crate::bfield::trig::Phase;

    fn abc_chart(b: f64, c: f64) -> SymmetricBField {
        GlobalTorusField::abc(b, c).chart_field(1.0)
    }

    #[test]
    fn constructed_field_satisfies_split_system() {
        let f = abc_chart(1.0, 2.0);
        let r = beltrami_residual(&f, &SurfaceMetric::flat(), 32).unwrap();
        assert!(r.max() <= 1e-12, "residuals {r:?}");

        // A two-shell eigenfunction at λ² = 5.
        let mut xz = TrigPolynomial::mode(2, 1, Phase::Cos, 0.7);
        xz.add_term(1, -2, Phase::Sin, -1.3);
        let f = SymmetricBField::from_hamiltonian(5f64.sqrt(), xz, 1.0).unwrap();
        let r = beltrami_residual(&f, &SurfaceMetric::flat(), 32).unwrap();
        assert!(r.max() <= 1e-12, "residuals {r:?}");
    }

    #[test]
    fn perturbed_component_shows_up_in_residual() {
        // Xx + 0.1 cos x breaks the third equation by exactly 0.1·cos x.
        let f = abc_chart(1.0, 2.0);
        let xx = f
            .core()
            .xx()
            .add(&TrigPolynomial::mode(1, 0, Phase::Cos, 0.1));
        let broken = SymmetricBField::from_raw_components(
            1.0,
            xx,
            f.core().xy().clone(),
            f.core().xz().clone(),
            1.0,
        )
        .unwrap();
        let r = beltrami_residual(&broken, &SurfaceMetric::flat(), 32).unwrap();
        assert!(r.max() >= 0.05);
        assert!((r.curl_x - 0.1).abs() <= 1e-12);
    }

    #[test]
    fn constant_shift_of_xz_breaks_the_curl_z_equation() {
        // Shifting X_z by a constant (off the eigenvalue shell) leaves the
        // divergence untouched but the first split equation picks up exactly
        // λ·0.1 on the flat metric.
        let f = abc_chart(1.0, 2.0);
        let xz = f
            .core()
            .xz()
            .add(&TrigPolynomial::constant(0.1));
        let shifted = SymmetricBField::from_raw_components(
            1.0,
            f.core().xx().clone(),
            f.core().xy().clone(),
            xz,
            1.0,
        )
        .unwrap();
        let r = beltrami_residual(&shifted, &SurfaceMetric::flat(), 32).unwrap();
        assert!((r.curl_z - 0.1).abs() <= 1e-12);
        let d = divergence_residual(&shifted, &SurfaceMetric::flat(), 32).unwrap();
        assert!(d <= 1e-12);
    }

    #[test]
    fn constructed_fields_are_divergence_free() {
        let d = divergence_residual(&abc_chart(1.0, 2.0), &SurfaceMetric::flat(), 32).unwrap();
        assert!(d <= 1e-12);

        let mut xz = TrigPolynomial::mode(2, 1, Phase::Cos, 0.7);
        xz.add_term(1, 2, Phase::Sin, 0.4);
        let f = SymmetricBField::from_hamiltonian(5f64.sqrt(), xz, 1.0).unwrap();
        let d = divergence_residual(&f, &SurfaceMetric::flat(), 32).unwrap();
        assert!(d <= 1e-12);
    }

    #[test]
    fn broken_surface_component_has_nonzero_divergence() {
        let f = abc_chart(1.0, 2.0);
        let xx = f
            .core()
            .xx()
            .add(&TrigPolynomial::mode(1, 0, Phase::Sin, 0.1));
        let broken = SymmetricBField::from_raw_components(
            1.0,
            xx,
            f.core().xy().clone(),
            f.core().xz().clone(),
            1.0,
        )
        .unwrap();
        let d = divergence_residual(&broken, &SurfaceMetric::flat(), 32).unwrap();
        assert!((d - 0.1).abs() <= 1e-12);
    }

    #[test]
    fn contact_density_positive_for_nondegenerate_abc() {
        // ‖X‖² = 4cos²y + sin²x + (2 sin y + cos x)² attains minimum 1 at
        // (π, π/2) and (0, 3π/2); the grid with N ≡ 0 (mod 4) hits both.
        let rep = contact_check(&abc_chart(1.0, 2.0), &SurfaceMetric::flat(), 64).unwrap();
        assert!((rep.min_density - 1.0).abs() <= 1e-9);
        assert!((rep.min_norm_sq - 1.0).abs() <= 1e-9);
        assert!((rep.rescaling_max - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn vanishing_sections_are_rejected() {
        let zero =
            SymmetricBField::from_hamiltonian(1.0, TrigPolynomial::zero(), 1.0).unwrap();
        assert!(matches!(
            contact_check(&zero, &SurfaceMetric::flat(), 16),
            Err(Error::FieldVanishes { .. })
        ));
        // |B| = |C| puts a zero of the b-section at (π, π/2).
        let err = contact_check(&abc_chart(1.0, 1.0), &SurfaceMetric::flat(), 64).unwrap_err();
        match err {
            Error::FieldVanishes { x, y, norm_sq } => {
                assert!(norm_sq < 1e-12);
                let near = |p: f64, q: f64| (p - q).abs() < 1e-9;
                assert!(
                    (near(x, std::f64::consts::PI) && near(y, std::f64::consts::FRAC_PI_2))
                        || (near(x, 0.0) && near(y, 1.5 * std::f64::consts::PI)),
                    "unexpected zero location ({x}, {y})"
                );
            }
            other => panic!("expected FieldVanishes, got {other}"),
        }
    }

    #[test]
    fn contact_minimum_is_translation_invariant_on_aligned_shifts() {
        let n = 64usize;
        let h = std::f64::consts::TAU / n as f64;
        let f = abc_chart(1.0, 2.0);
        let base = contact_check(&f, &SurfaceMetric::flat(), n).unwrap();
        let shifted_xz = f.core().xz().translate(5.0 * h, 11.0 * h);
        let g = SymmetricBField::from_hamiltonian(1.0, shifted_xz, 1.0).unwrap();
        let moved = contact_check(&g, &SurfaceMetric::flat(), n).unwrap();
        assert!((base.min_density - moved.min_density).abs() <= 1e-8);
    }

    #[test]
    fn exact_identity_residual_is_zero_on_shell() {
        let f = abc_chart(1.0, 2.0);
        assert_eq!(exact_eigen_identity_residual(f.core().xz(), 1.0), 0.0);
        let off = TrigPolynomial::mode(2, 0, Phase::Cos, 1.0);
        assert!(exact_eigen_identity_residual(&off, 1.0) > 1.0);
    }
}
