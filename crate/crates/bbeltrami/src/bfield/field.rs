//! b-Beltrami vector fields on the flat chart T²×(−ε,ε) and on T³.
//!
//! An asymptotically symmetric field commutes with the normal b-vector field,
//! so its components are independent of z and it is determined by the curl
//! eigenvalue λ and the third component X_z(x, y):
//!
//! ```text
//! X = (1/λ) ∂_y X_z ∂_x − (1/λ) ∂_x X_z ∂_y + z X_z ∂_z
//! ```
//!
//! with X_z an eigenfunction of the flat Laplacian, ΔX_z + λ²X_z = 0. The
//! global T³ family replaces the z-factor by sin z, with the disconnected
//! critical surface {z=0} ∪ {z=π}.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::trig::{Phase, TrigPolynomial};

/// Shared field data: curl eigenvalue and exact component polynomials.
#[derive(Clone, Debug)]
pub struct FieldCore {
    lambda: f64,
    xz: TrigPolynomial,
    xx: TrigPolynomial,
    xy: TrigPolynomial,
}

impl FieldCore {
    fn new(lambda: f64, xz: TrigPolynomial) -> Result<Self> {
        if lambda == 0.0 {
            return Err(Error::ZeroLambda);
        }
        let shell = lambda * lambda;
        let shell_int = shell.round();
        if (shell - shell_int).abs() > 1e-9 || shell_int < 1.0 {
            return Err(Error::NonIntegerShell { lambda_sq: shell });
        }
        if let Some(&mode) = xz.off_shell_modes(shell_int as i64).first() {
            return Err(Error::OffShellMode {
                mode,
                shell: shell_int as i64,
            });
        }
        let xx = xz.dy().scale(1.0 / lambda);
        let xy = xz.dx().scale(-1.0 / lambda);
        Ok(Self { lambda, xz, xx, xy })
    }

    /// Components supplied directly, bypassing the eigenfunction shell check
    /// and the derivative construction. Intended for residual experiments on
    /// deliberately broken fields.
    pub fn from_raw_components(
        lambda: f64,
        xx: TrigPolynomial,
        xy: TrigPolynomial,
        xz: TrigPolynomial,
    ) -> Result<Self> {
        if lambda == 0.0 {
            return Err(Error::ZeroLambda);
        }
        Ok(Self { lambda, xz, xx, xy })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Third component X_z(x, y); the exceptional Hamiltonian is −X_z.
    pub fn xz(&self) -> &TrigPolynomial {
        &self.xz
    }

    pub fn xx(&self) -> &TrigPolynomial {
        &self.xx
    }

    pub fn xy(&self) -> &TrigPolynomial {
        &self.xy
    }

    /// Exceptional Hamiltonian H = −X_z.
    pub fn hamiltonian(&self) -> TrigPolynomial {
        self.xz.scale(-1.0)
    }

    /// Restriction of the field to the critical surface (ẋ, ẏ).
    pub fn surface_velocity(&self, x: f64, y: f64) -> [f64; 2] {
        [self.xx.eval(x, y), self.xy.eval(x, y)]
    }
}

/// Asymptotically symmetric b-Beltrami field on the flat chart T²×(−ε, ε).
#[derive(Clone, Debug)]
pub struct SymmetricBField {
    core: FieldCore,
    eps: f64,
}

impl SymmetricBField {
    /// Build the model field from the curl eigenvalue and the third component.
    ///
    /// Requires every mode of `xz` to sit on the eigenvalue shell
    /// k₁² + k₂² = λ², so that ΔX_z + λ²X_z = 0 holds term by term.
    pub fn from_hamiltonian(lambda: f64, xz: TrigPolynomial, eps: f64) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(Error::InvalidSpec(
                "chart half-width eps must be positive".into(),
            ));
        }
        Ok(Self {
            core: FieldCore::new(lambda, xz)?,
            eps,
        })
    }

    pub fn from_raw_components(
        lambda: f64,
        xx: TrigPolynomial,
        xy: TrigPolynomial,
        xz: TrigPolynomial,
        eps: f64,
    ) -> Result<Self> {
        Ok(Self {
            core: FieldCore::from_raw_components(lambda, xx, xy, xz)?,
            eps,
        })
    }

    pub fn core(&self) -> &FieldCore {
        &self.core
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Velocity (ẋ, ẏ, ż) = (X_x, X_y, z·X_z) at a chart point.
    pub fn velocity(&self, x: f64, y: f64, z: f64) -> Result<[f64; 3]> {
        if z.abs() >= self.eps {
            return Err(Error::OutOfChart {
                z_abs: z.abs(),
                eps: self.eps,
            });
        }
        let [vx, vy] = self.core.surface_velocity(x, y);
        Ok([vx, vy, z * self.core.xz.eval(x, y)])
    }
}

/// Which global T³ family a field belongs to.
#[derive(Clone, Debug)]
pub enum GlobalVariant {
    /// The b-analogue of the ABC family: X = C cos y ∂_x + B sin x ∂_y +
    /// (C sin y + B cos x) sin z ∂_z. `degenerate_amplitudes` records |B| = |C|
    /// (the field then vanishes somewhere as a b-section).
    Abc {
        b: f64,
        c: f64,
        degenerate_amplitudes: bool,
    },
    /// Globally symmetric field (1/λ)∂_yH ∂_x − (1/λ)∂_xH ∂_y + H sin z ∂_z.
    Symmetric,
}

/// b-Beltrami field on the globally flat b-manifold (T³, {z=0}∪{z=π}).
#[derive(Clone, Debug)]
pub struct GlobalTorusField {
    core: FieldCore,
    variant: GlobalVariant,
}

impl GlobalTorusField {
    /// The b-ABC field with constants B, C (curl eigenvalue 1).
    pub fn abc(b: f64, c: f64) -> Self {
        let mut xz = TrigPolynomial::zero();
        xz.add_term(0, 1, Phase::Sin, c); // C sin y
        xz.add_term(1, 0, Phase::Cos, b); // B cos x
        let core = FieldCore::new(1.0, xz).expect("modes (0,1),(1,0) sit on the shell 1");
        Self {
            core,
            variant: GlobalVariant::Abc {
                b,
                c,
                degenerate_amplitudes: b.abs() == c.abs(),
            },
        }
    }

    /// Globally symmetric field with third component `h·sin z`; requires
    /// Δh + λ²h = 0 term by term.
    pub fn globally_symmetric(lambda: f64, h: TrigPolynomial) -> Result<Self> {
        Ok(Self {
            core: FieldCore::new(lambda, h)?,
            variant: GlobalVariant::Symmetric,
        })
    }

    pub fn core(&self) -> &FieldCore {
        &self.core
    }

    pub fn variant(&self) -> &GlobalVariant {
        &self.variant
    }

    /// Velocity (ẋ, ẏ, ż) = (X_x, X_y, sin z·X_z) at any point of T³.
    pub fn velocity(&self, x: f64, y: f64, z: f64) -> [f64; 3] {
        let [vx, vy] = self.core.surface_velocity(x, y);
        [vx, vy, z.sin() * self.core.xz.eval(x, y)]
    }

    /// Recast near {z = 0} where sin z ≈ z: the same field data viewed as a
    /// chart field, for residual checks of the split-coordinate system.
    pub fn chart_field(&self, eps: f64) -> SymmetricBField {
        SymmetricBField {
            core: self.core.clone(),
            eps,
        }
    }
}

/// Either field family behind one handle.
#[derive(Clone, Debug)]
pub enum Field {
    Symmetric(SymmetricBField),
    Global(GlobalTorusField),
}

impl Field {
    pub fn core(&self) -> &FieldCore {
        match self {
            Field::Symmetric(f) => f.core(),
            Field::Global(f) => f.core(),
        }
    }

    pub fn lambda(&self) -> f64 {
        self.core().lambda()
    }

    pub fn velocity(&self, x: f64, y: f64, z: f64) -> Result<[f64; 3]> {
        match self {
            Field::Symmetric(f) => f.velocity(x, y, z),
            Field::Global(f) => Ok(f.velocity(x, y, z)),
        }
    }

    /// z-levels of the critical surface components.
    pub fn z_components(&self) -> &'static [f64] {
        match self {
            Field::Symmetric(_) => &[0.0],
            Field::Global(_) => &[0.0, std::f64::consts::PI],
        }
    }

    pub fn to_spec(&self) -> FieldSpec {
        match self {
            Field::Symmetric(f) => FieldSpec::Symmetric {
                lambda: f.core.lambda,
                xz: f.core.xz.clone(),
                eps: f.eps,
            },
            Field::Global(f) => match &f.variant {
                GlobalVariant::Abc { b, c, .. } => FieldSpec::abc(*b, *c),
                GlobalVariant::Symmetric => {
                    FieldSpec::globally_symmetric(f.core.lambda, f.core.xz.clone())
                }
            },
        }
    }
}

impl From<SymmetricBField> for Field {
    fn from(f: SymmetricBField) -> Self {
        Field::Symmetric(f)
    }
}

impl From<GlobalTorusField> for Field {
    fn from(f: GlobalTorusField) -> Self {
        Field::Global(f)
    }
}

/// JSON interchange document for fields. The chart family serializes as
/// `{"lambda": .., "Xz": [terms], "eps": ..}`; the global family carries a
/// `variant` discriminator.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Abc {
        #[serde(rename = "variant", with = "abc_tag")]
        _tag: (),
        #[serde(rename = "B")]
        b: f64,
        #[serde(rename = "C")]
        c: f64,
    },
    GloballySymmetric {
        #[serde(rename = "variant", with = "gs_tag")]
        _tag: (),
        lambda: f64,
        #[serde(rename = "H")]
        h: TrigPolynomial,
    },
    Symmetric {
        lambda: f64,
        #[serde(rename = "Xz")]
        xz: TrigPolynomial,
        eps: f64,
    },
}

macro_rules! tag_module {
    ($name:ident, $value:literal) => {
        mod $name {
            use serde::{Deserialize, Deserializer, Serializer};

            pub fn serialize<S: Serializer>(_: &(), s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str($value)
            }

            pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(), D::Error> {
                let v = String::deserialize(d)?;
                if v == $value {
                    Ok(())
                } else {
                    Err(serde::de::Error::custom(format!(
                        "expected variant \"{}\", got \"{v}\"",
                        $value
                    )))
                }
            }
        }
    };
}

tag_module!(abc_tag, "bABC");
tag_module!(gs_tag, "globallySymmetric");

#[allow(non_upper_case_globals)]
impl FieldSpec {
    pub fn abc(b: f64, c: f64) -> Self {
        FieldSpec::Abc { _tag: (), b, c }
    }

    pub fn globally_symmetric(lambda: f64, h: TrigPolynomial) -> Self {
        FieldSpec::GloballySymmetric { _tag: (), lambda, h }
    }

    /// Validate and build the field.
    pub fn build(&self) -> Result<Field> {
        match self {
            FieldSpec::Abc { b, c, .. } => Ok(GlobalTorusField::abc(*b, *c).into()),
            FieldSpec::GloballySymmetric { lambda, h, .. } => {
                Ok(GlobalTorusField::globally_symmetric(*lambda, h.clone())?.into())
            }
            FieldSpec::Symmetric { lambda, xz, eps } => {
                Ok(SymmetricBField::from_hamiltonian(*lambda, xz.clone(), *eps)?.into())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn abc_xz(b: f64, c: f64) -> TrigPolynomial {
        let mut xz = TrigPolynomial::zero();
        xz.add_term(0, 1, Phase::Sin, c);
        xz.add_term(1, 0, Phase::Cos, b);
        xz
    }

    #[test]
    fn from_hamiltonian_reproduces_abc_components() {
        // λ=1, Xz = C sin y + B cos x → Xx = C cos y, Xy = B sin x
        let f = SymmetricBField::from_hamiltonian(1.0, abc_xz(1.0, 2.0), 1.0).unwrap();
        for &(x, y) in &[(0.0, 0.0), (0.7, 1.9), (PI, FRAC_PI_2)] {
            let [vx, vy] = f.core().surface_velocity(x, y);
            assert!((vx - 2.0 * y.cos()).abs() < 1e-14);
            assert!((vy - 1.0 * x.sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn from_hamiltonian_zero_gives_zero_field() {
        let f = SymmetricBField::from_hamiltonian(1.0, TrigPolynomial::zero(), 1.0).unwrap();
        let v = f.velocity(0.3, 1.0, 0.5).unwrap();
        assert_eq!(v, [0.0, 0.0, 0.0]);
    }

    #[test]
    fn from_hamiltonian_single_high_mode() {
        // λ=2, Xz = cos(2x): Xx = 0, Xy = sin(2x); at (π/4, 0): (0, 1, 0)
        let xz = TrigPolynomial::mode(2, 0, Phase::Cos, 1.0);
        let f = SymmetricBField::from_hamiltonian(2.0, xz, 1.0).unwrap();
        let v = f.velocity(PI / 4.0, 0.0, 0.0).unwrap();
        assert!(v[0].abs() < 1e-14);
        assert!((v[1] - 1.0).abs() < 1e-14);
        assert!(v[2].abs() < 1e-14);
    }

    #[test]
    fn off_shell_mode_is_rejected() {
        let xz = TrigPolynomial::mode(2, 0, Phase::Cos, 1.0);
        let err = SymmetricBField::from_hamiltonian(1.0, xz, 1.0).unwrap_err();
        assert!(matches!(
            err,
            Error::OffShellMode { mode: [2, 0], shell: 1 }
        ));
        assert!(SymmetricBField::from_hamiltonian(0.0, TrigPolynomial::zero(), 1.0).is_err());
    }

    #[test]
    fn abc_velocity_matches_hand_evaluation() {
        let f = GlobalTorusField::abc(1.0, 2.0);
        // (0, π/2, π/2): (2cos(π/2), sin 0, (2+1)·sin(π/2)) = (0, 0, 3)
        let v = f.velocity(0.0, FRAC_PI_2, FRAC_PI_2);
        assert!(v[0].abs() < 1e-14 && v[1].abs() < 1e-14);
        assert!((v[2] - 3.0).abs() < 1e-14);
        // (π, 3π/2, π/2): (0, 0, (−2−1)·1) = (0, 0, −3)
        let v = f.velocity(PI, 1.5 * PI, FRAC_PI_2);
        assert!(v[0].abs() < 1e-12 && v[1].abs() < 1e-12);
        assert!((v[2] + 3.0).abs() < 1e-12);
    }

    #[test]
    fn third_component_vanishes_on_critical_surface() {
        let f = GlobalTorusField::abc(1.0, 2.0);
        for &z in &[0.0, PI] {
            for i in 0..10 {
                let (x, y) = (0.63 * i as f64, 1.17 * i as f64);
                assert!(f.velocity(x, y, z)[2].abs() < 1e-14);
            }
        }
        let s = SymmetricBField::from_hamiltonian(1.0, abc_xz(1.0, 2.0), 1.0).unwrap();
        assert_eq!(s.velocity(0.4, 2.0, 0.0).unwrap()[2], 0.0);
    }

    #[test]
    fn chart_velocity_rejects_out_of_chart_points() {
        let f = SymmetricBField::from_hamiltonian(1.0, abc_xz(1.0, 2.0), 0.5).unwrap();
        assert!(matches!(
            f.velocity(0.0, 0.0, 0.5),
            Err(Error::OutOfChart { .. })
        ));
    }

    #[test]
    fn degenerate_amplitudes_are_flagged_not_rejected() {
        let f = GlobalTorusField::abc(1.0, 1.0);
        match f.variant() {
            GlobalVariant::Abc {
                degenerate_amplitudes,
                ..
            } => assert!(degenerate_amplitudes),
            _ => unreachable!(),
        }
    }

    #[test]
    fn field_spec_json_round_trips() {
        let sym = SymmetricBField::from_hamiltonian(1.0, abc_xz(1.0, 2.0), 1.0).unwrap();
        let spec = Field::from(sym).to_spec();
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(
            json,
            r#"{"lambda":1.0,"Xz":[{"k":[0,1],"phase":"sin","amp":2.0},{"k":[1,0],"phase":"cos","amp":1.0}],"eps":1.0}"#
        );
        let back: FieldSpec = serde_json::from_str(&json).unwrap();
        assert!(matches!(back, FieldSpec::Symmetric { .. }));
        back.build().unwrap();

        let abc = FieldSpec::abc(1.0, 2.0);
        let json = serde_json::to_string(&abc).unwrap();
        assert_eq!(json, r#"{"variant":"bABC","B":1.0,"C":2.0}"#);
        let back: FieldSpec = serde_json::from_str(&json).unwrap();
        assert!(matches!(back, FieldSpec::Abc { .. }));

        let gs = FieldSpec::globally_symmetric(1.0, abc_xz(1.0, 2.0));
        let json = serde_json::to_string(&gs).unwrap();
        let back: FieldSpec = serde_json::from_str(&json).unwrap();
        assert!(matches!(back, FieldSpec::GloballySymmetric { .. }));
        back.build().unwrap();
    }

    #[test]
    fn bad_spec_surfaces_offending_mode() {
        let json = r#"{"lambda":1.0,"Xz":[{"k":[2,0],"phase":"cos","amp":1.0}],"eps":1.0}"#;
        let spec: FieldSpec = serde_json::from_str(json).unwrap();
        let err = spec.build().unwrap_err();
        assert!(err.to_string().contains("(2,0)"));
    }
}
