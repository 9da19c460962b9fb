//! Real trigonometric polynomials on the 2-torus with exact calculus.
//!
//! A `TrigPolynomial` is a finite sum `Σ a_m cos(k₁x + k₂y) + b_m sin(k₁x + k₂y)`
//! with integer wave vectors and period 2π in both variables. Derivatives,
//! products and translations stay inside the representation, so PDE identities
//! can be checked without discretization error.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Phase of a single mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Cos,
    Sin,
}

/// One stored mode, as it appears in the JSON interchange format.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    /// Wave vector (k₁, k₂).
    pub k: [i32; 2],
    pub phase: Phase,
    pub amp: f64,
}

/// Finite real trigonometric polynomial on T² = (ℝ/2πℤ)².
///
/// Canonical form: wave vectors live in the half lattice
/// `k₁ > 0 ∨ (k₁ = 0 ∧ k₂ ≥ 0)` (using `cos(-k·x) = cos(k·x)` and
/// `sin(-k·x) = -sin(k·x)`), the zero mode is stored only with cos phase,
/// and no term has amplitude exactly zero.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrigPolynomial {
    terms: BTreeMap<(i32, i32, Phase), f64>,
}

impl TrigPolynomial {
    /// The zero polynomial.
    pub fn zero() -> Self {
        Self::default()
    }

    /// The constant polynomial `c`.
    pub fn constant(c: f64) -> Self {
        let mut p = Self::zero();
        p.add_term(0, 0, Phase::Cos, c);
        p
    }

    /// Single mode `amp · phase(k₁x + k₂y)`, canonicalized.
    pub fn mode(k1: i32, k2: i32, phase: Phase, amp: f64) -> Self {
        let mut p = Self::zero();
        p.add_term(k1, k2, phase, amp);
        p
    }

    /// Build from interchange terms; equal modes accumulate.
    pub fn from_terms(terms: impl IntoIterator<Item = Term>) -> Self {
        let mut p = Self::zero();
        for t in terms {
            p.add_term(t.k[0], t.k[1], t.phase, t.amp);
        }
        p
    }

    /// Add `amp · phase(k₁x + k₂y)` in place, keeping the canonical form.
    pub fn add_term(&mut self, k1: i32, k2: i32, phase: Phase, amp: f64) {
        if amp == 0.0 {
            return;
        }
        let (k1, k2, phase, amp) = canonicalize(k1, k2, phase, amp);
        if k1 == 0 && k2 == 0 && phase == Phase::Sin {
            return; // sin(0) ≡ 0
        }
        let entry = self.terms.entry((k1, k2, phase)).or_insert(0.0);
        *entry += amp;
        if *entry == 0.0 {
            self.terms.remove(&(k1, k2, phase));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Iterate stored modes in canonical (deterministic) order.
    pub fn terms(&self) -> impl Iterator<Item = Term> + '_ {
        self.terms.iter().map(|(&(k1, k2, phase), &amp)| Term {
            k: [k1, k2],
            phase,
            amp,
        })
    }

    /// Coefficient of the constant (mean) mode.
    pub fn mean(&self) -> f64 {
        self.terms.get(&(0, 0, Phase::Cos)).copied().unwrap_or(0.0)
    }

    /// Evaluate at a point (2π-periodic in both variables).
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for (&(k1, k2, phase), &amp) in &self.terms {
            let arg = k1 as f64 * x + k2 as f64 * y;
            acc += match phase {
                Phase::Cos => amp * arg.cos(),
                Phase::Sin => amp * arg.sin(),
            };
        }
        acc
    }

    /// Exact partial derivative ∂/∂x.
    pub fn dx(&self) -> Self {
        self.derivative(0)
    }

    /// Exact partial derivative ∂/∂y.
    pub fn dy(&self) -> Self {
        self.derivative(1)
    }

    fn derivative(&self, axis: usize) -> Self {
        let mut out = Self::zero();
        for (&(k1, k2, phase), &amp) in &self.terms {
            let k = if axis == 0 { k1 } else { k2 };
            if k == 0 {
                continue;
            }
            match phase {
                // d/dx cos(k·x) = -k₁ sin(k·x)
                Phase::Cos => out.add_term(k1, k2, Phase::Sin, -amp * k as f64),
                // d/dx sin(k·x) = k₁ cos(k·x)
                Phase::Sin => out.add_term(k1, k2, Phase::Cos, amp * k as f64),
            }
        }
        out
    }

    /// Exact flat Laplacian ∂²ₓₓ + ∂²ᵧᵧ (each mode scales by -|k|²).
    pub fn laplacian(&self) -> Self {
        let mut out = Self::zero();
        for (&(k1, k2, phase), &amp) in &self.terms {
            let ksq = (k1 as i64 * k1 as i64 + k2 as i64 * k2 as i64) as f64;
            out.add_term(k1, k2, phase, -amp * ksq);
        }
        out
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut out = Self::zero();
        for (&(k1, k2, phase), &amp) in &self.terms {
            out.add_term(k1, k2, phase, amp * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(k1, k2, phase), &amp) in &other.terms {
            out.add_term(k1, k2, phase, amp);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    /// Exact product via product-to-sum identities; the result is again a
    /// trigonometric polynomial on the lattice of mode sums/differences.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&(a1, a2, pa), &amp_a) in &self.terms {
            for (&(b1, b2, pb), &amp_b) in &other.terms {
                let half = 0.5 * amp_a * amp_b;
                let sum = (a1 + b1, a2 + b2);
                let diff = (a1 - b1, a2 - b2);
                match (pa, pb) {
                    // cos A cos B = ½cos(A−B) + ½cos(A+B)
                    (Phase::Cos, Phase::Cos) => {
                        out.add_term(diff.0, diff.1, Phase::Cos, half);
                        out.add_term(sum.0, sum.1, Phase::Cos, half);
                    }
                    // sin A sin B = ½cos(A−B) − ½cos(A+B)
                    (Phase::Sin, Phase::Sin) => {
                        out.add_term(diff.0, diff.1, Phase::Cos, half);
                        out.add_term(sum.0, sum.1, Phase::Cos, -half);
                    }
                    // sin A cos B = ½sin(A+B) + ½sin(A−B)
                    (Phase::Sin, Phase::Cos) => {
                        out.add_term(sum.0, sum.1, Phase::Sin, half);
                        out.add_term(diff.0, diff.1, Phase::Sin, half);
                    }
                    // cos A sin B = ½sin(A+B) − ½sin(A−B)
                    (Phase::Cos, Phase::Sin) => {
                        out.add_term(sum.0, sum.1, Phase::Sin, half);
                        out.add_term(diff.0, diff.1, Phase::Sin, -half);
                    }
                }
            }
        }
        out
    }

    /// Rigid translation: returns g with g(x, y) = f(x + ax, y + ay).
    pub fn translate(&self, ax: f64, ay: f64) -> Self {
        let mut out = Self::zero();
        for (&(k1, k2, phase), &amp) in &self.terms {
            let shift = k1 as f64 * ax + k2 as f64 * ay;
            let (c, s) = (shift.cos(), shift.sin());
            match phase {
                // cos(k·x + φ) = cos φ cos(k·x) − sin φ sin(k·x)
                Phase::Cos => {
                    out.add_term(k1, k2, Phase::Cos, amp * c);
                    out.add_term(k1, k2, Phase::Sin, -amp * s);
                }
                // sin(k·x + φ) = sin φ cos(k·x) + cos φ sin(k·x)
                Phase::Sin => {
                    out.add_term(k1, k2, Phase::Cos, amp * s);
                    out.add_term(k1, k2, Phase::Sin, amp * c);
                }
            }
        }
        out
    }

    /// Drop modes with |amp| below `tol` (for cleaning rounding dust after
    /// long arithmetic chains; exact calculus paths never need it).
    pub fn prune(&self, tol: f64) -> Self {
        let mut out = Self::zero();
        for (&(k1, k2, phase), &amp) in &self.terms {
            if amp.abs() > tol {
                out.add_term(k1, k2, phase, amp);
            }
        }
        out
    }

    /// Sup-norm estimate: max |f| over an n×n uniform grid.
    pub fn max_abs_on_grid(&self, n: usize) -> f64 {
        let h = std::f64::consts::TAU / n as f64;
        let mut m: f64 = 0.0;
        for j in 0..n {
            for i in 0..n {
                m = m.max(self.eval(i as f64 * h, j as f64 * h).abs());
            }
        }
        m
    }

    /// ℓ¹ norm of the coefficient vector (a rigorous sup-norm upper bound).
    pub fn coeff_l1(&self) -> f64 {
        self.terms.values().map(|a| a.abs()).sum()
    }

    /// Largest |k_i| over stored modes.
    pub fn max_wavenumber(&self) -> i32 {
        self.terms
            .keys()
            .map(|&(k1, k2, _)| k1.abs().max(k2.abs()))
            .max()
            .unwrap_or(0)
    }

    /// Wave vectors violating the eigenvalue shell `k₁² + k₂² = mu`.
    pub fn off_shell_modes(&self, mu: i64) -> Vec<[i32; 2]> {
        self.terms
            .keys()
            .filter(|&&(k1, k2, _)| k1 as i64 * k1 as i64 + k2 as i64 * k2 as i64 != mu)
            .map(|&(k1, k2, _)| [k1, k2])
            .collect()
    }
}

fn canonicalize(k1: i32, k2: i32, phase: Phase, amp: f64) -> (i32, i32, Phase, f64) {
    if k1 > 0 || (k1 == 0 && k2 >= 0) {
        (k1, k2, phase, amp)
    } else {
        match phase {
            Phase::Cos => (-k1, -k2, phase, amp),
            Phase::Sin => (-k1, -k2, phase, -amp),
        }
    }
}

impl fmt::Display for TrigPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for t in self.terms() {
            if !first {
                write!(f, " {} ", if t.amp < 0.0 { "-" } else { "+" })?;
            } else if t.amp < 0.0 {
                write!(f, "-")?;
            }
            first = false;
            let a = t.amp.abs();
            if t.k == [0, 0] {
                write!(f, "{a}")?;
                continue;
            }
            let name = match t.phase {
                Phase::Cos => "cos",
                Phase::Sin => "sin",
            };
            write!(f, "{a}·{name}({})", fmt_arg(t.k))?;
        }
        Ok(())
    }
}

fn fmt_arg(k: [i32; 2]) -> String {
    let part = |k: i32, var: &str| -> Option<String> {
        match k {
            0 => None,
            1 => Some(var.to_string()),
            -1 => Some(format!("-{var}")),
            _ => Some(format!("{k}{var}")),
        }
    };
    match (part(k[0], "x"), part(k[1], "y")) {
        (Some(a), Some(b)) if !b.starts_with('-') => format!("{a}+{b}"),
        (Some(a), Some(b)) => format!("{a}{b}"),
        (Some(a), None) => a,
        (None, Some(b)) => b,
        (None, None) => "0".to_string(),
    }
}

impl Serialize for TrigPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.terms())
    }
}

impl<'de> Deserialize<'de> for TrigPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let terms = Vec::<Term>::deserialize(d)?;
        Ok(Self::from_terms(terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    #[test]
    fn canonical_form_folds_negative_modes() {
        // cos(-x+2y) = cos(x-2y), sin(-x+2y) = -sin(x-2y)
        let p = TrigPolynomial::mode(-1, 2, Phase::Cos, 1.0);
        let q = TrigPolynomial::mode(1, -2, Phase::Cos, 1.0);
        assert_eq!(p, q);
        let p = TrigPolynomial::mode(-1, 2, Phase::Sin, 1.0);
        let q = TrigPolynomial::mode(1, -2, Phase::Sin, -1.0);
        assert_eq!(p, q);
    }

    #[test]
    fn zero_amplitudes_are_never_stored() {
        let mut p = TrigPolynomial::mode(1, 0, Phase::Cos, 1.0);
        p.add_term(1, 0, Phase::Cos, -1.0);
        assert!(p.is_zero());
        p.add_term(0, 0, Phase::Sin, 5.0); // identically zero term
        assert!(p.is_zero());
    }

    #[test]
    fn eval_is_periodic() {
        let p = TrigPolynomial::from_terms([
            Term { k: [1, 0], phase: Phase::Cos, amp: -1.0 },
            Term { k: [0, 1], phase: Phase::Sin, amp: -2.0 },
            Term { k: [2, -3], phase: Phase::Sin, amp: 0.7 },
        ]);
        for &(x, y) in &[(0.3, 1.1), (4.0, 5.9), (-2.0, 0.0)] {
            assert!((p.eval(x + TAU, y) - p.eval(x, y)).abs() < 1e-12);
            assert!((p.eval(x, y + TAU) - p.eval(x, y)).abs() < 1e-12);
        }
    }

    #[test]
    fn mixed_partials_commute_exactly() {
        let p = TrigPolynomial::from_terms([
            Term { k: [2, 1], phase: Phase::Cos, amp: 1.5 },
            Term { k: [1, -2], phase: Phase::Sin, amp: -0.25 },
            Term { k: [0, 3], phase: Phase::Sin, amp: 2.0 },
        ]);
        assert_eq!(p.dx().dy(), p.dy().dx());
    }

    #[test]
    fn derivative_stays_on_eigenvalue_shell() {
        let p = TrigPolynomial::from_terms([
            Term { k: [2, 1], phase: Phase::Cos, amp: 1.0 },
            Term { k: [1, 2], phase: Phase::Sin, amp: -3.0 },
        ]);
        assert!(p.off_shell_modes(5).is_empty());
        assert!(p.dx().off_shell_modes(5).is_empty());
        assert!(p.dy().dy().off_shell_modes(5).is_empty());
    }

    #[test]
    fn product_matches_pointwise_product() {
        let p = TrigPolynomial::from_terms([
            Term { k: [1, 0], phase: Phase::Cos, amp: 2.0 },
            Term { k: [0, 2], phase: Phase::Sin, amp: -1.0 },
        ]);
        let q = TrigPolynomial::from_terms([
            Term { k: [0, 0], phase: Phase::Cos, amp: 1.0 },
            Term { k: [1, 1], phase: Phase::Sin, amp: 0.5 },
        ]);
        let prod = p.mul(&q);
        for j in 0..7 {
            for i in 0..7 {
                let (x, y) = (i as f64 * 0.9, j as f64 * 1.3);
                let want = p.eval(x, y) * q.eval(x, y);
                assert!((prod.eval(x, y) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn translation_matches_shifted_evaluation() {
        let p = TrigPolynomial::from_terms([
            Term { k: [1, 0], phase: Phase::Cos, amp: -1.0 },
            Term { k: [0, 1], phase: Phase::Sin, amp: -2.0 },
        ]);
        let t = p.translate(0.4, -1.7);
        for &(x, y) in &[(0.0, 0.0), (1.0, 2.0), (PI, PI / 3.0)] {
            assert!((t.eval(x, y) - p.eval(x + 0.4, y - 1.7)).abs() < 1e-12);
        }
    }

    #[test]
    fn laplacian_scales_modes_by_minus_k_squared() {
        let p = TrigPolynomial::mode(2, 1, Phase::Sin, 3.0);
        let lap = p.laplacian();
        assert_eq!(lap, p.scale(-5.0));
    }

    #[test]
    fn json_round_trip_uses_interchange_schema() {
        let p = TrigPolynomial::from_terms([
            Term { k: [0, 1], phase: Phase::Sin, amp: -2.0 },
            Term { k: [1, 0], phase: Phase::Cos, amp: -1.0 },
        ]);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(
            json,
            r#"[{"k":[0,1],"phase":"sin","amp":-2.0},{"k":[1,0],"phase":"cos","amp":-1.0}]"#
        );
        let back: TrigPolynomial = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }
}
