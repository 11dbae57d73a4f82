//! Orbits of constant group elements under h·g = h g h* (SL₂(ℂ)) and
//! h·g = h g hᵀ (SL₂(ℝ)).
//!
//! For g ∈ SL₂(ℂ) write g = U + V with U = (g + g†)/2 = t + x·τ and
//! V = (g − g†)/2 = i(T + X·τ). With ‖(t, x, y, z)‖² = −t² + x² + y² + z² and
//! I[g] = ½ tr(g (g⁻¹)†) one has ‖u‖² = −½(I + 1), ‖v‖² = −½(I − 1), ⟨u, v⟩ = 0.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{epsilon, tau1, tau2, tau3, Matrix2};
use crate::error::{Error, Result};

/// Tolerance for det g = 1.
pub const DET_TOLERANCE: f64 = 1e-10;
/// Width of the snapping band around the case boundaries I = ±1 and α ∈ {0, 1}.
pub const BOUNDARY_TOLERANCE: f64 = 1e-8;
/// Slack allowed above I = 1 before the input is declared inconsistent.
pub const I_EXCESS_TOLERANCE: f64 = 1e-9;

/// A vector of R^{3,1} with signature (−, +, +, +).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MinkowskiVec {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl MinkowskiVec {
    pub fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        MinkowskiVec { t, x, y, z }
    }

    pub fn dot(&self, o: &Self) -> f64 {
        -self.t * o.t + self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn norm2(&self) -> f64 {
        self.dot(self)
    }

    /// Euclidean length, used to detect the zero vector.
    pub fn euclidean(&self) -> f64 {
        (self.t * self.t + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.t, self.x, self.y, self.z]
    }

    /// t·Id + x τ₁ + y τ₂ + z τ₃.
    pub fn to_hermitian(&self) -> Matrix2 {
        Matrix2::identity().scale_re(self.t)
            + tau1().scale_re(self.x)
            + tau2().scale_re(self.y)
            + tau3().scale_re(self.z)
    }
}

/// Sign of a time component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sheet {
    Plus,
    Minus,
}

impl Sheet {
    fn of(t: f64) -> Self {
        if t >= 0.0 {
            Sheet::Plus
        } else {
            Sheet::Minus
        }
    }
}

impl fmt::Display for Sheet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sheet::Plus => "+",
            Sheet::Minus => "-",
        })
    }
}

fn require_unit_det(g: &Matrix2) -> Result<()> {
    let d = g.det();
    if (d - 1.0).norm() > DET_TOLERANCE {
        return Err(Error::NotUnimodular(d.to_string()));
    }
    Ok(())
}

/// I[g] = ½ tr(g (g⁻¹)†).
pub fn invariant_i(g: &Matrix2) -> Result<f64> {
    require_unit_det(g)?;
    let inv = g.adjugate().scale(g.det().inv());
    let val = (*g * inv.dagger()).trace() * 0.5;
    if val.im.abs() > 1e-10 * (1.0 + val.re.abs()) {
        return Err(Error::Shape(format!("I[g] has imaginary part {:e}", val.im)));
    }
    Ok(val.re)
}

fn hermitian_coords(h: &Matrix2) -> MinkowskiVec {
    let c = |m: Matrix2| (*h * m).trace().re * 0.5;
    MinkowskiVec::new(c(Matrix2::identity()), c(tau1()), c(tau2()), c(tau3()))
}

/// (u, v) with (g + g†)/2 = t + x·τ and (g − g†)/2 = i(T + X·τ).
pub fn decompose_minkowski(g: &Matrix2) -> Result<(MinkowskiVec, MinkowskiVec)> {
    require_unit_det(g)?;
    let u = (*g + g.dagger()).scale_re(0.5);
    let v = (*g - g.dagger()).scale(Complex64::new(0.0, -0.5));
    Ok((hermitian_coords(&u), hermitian_coords(&v)))
}

/// SL₂(ℂ) orbit types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrbitTagC {
    /// I = 1: Hermitian elements, one sheet of the two-sheeted hyperboloid.
    HermitianSheet(Sheet),
    /// −1 < I < 1.
    HyperboloidBundle(Sheet),
    /// I = −1 with u = 0.
    SkewHermitian,
    /// I = −1 with u null.
    NullConeBundle(Sheet),
    /// I < −1.
    OneSheet,
}

impl fmt::Display for OrbitTagC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbitTagC::HermitianSheet(s) => write!(f, "HermitianSheet({s})"),
            OrbitTagC::HyperboloidBundle(s) => write!(f, "HyperboloidBundle({s})"),
            OrbitTagC::SkewHermitian => f.write_str("SkewHermitian"),
            OrbitTagC::NullConeBundle(s) => write!(f, "NullConeBundle({s})"),
            OrbitTagC::OneSheet => f.write_str("OneSheet"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitClassC {
    pub tag: OrbitTagC,
    pub invariant: f64,
    /// Set when the invariant was snapped onto a case boundary it did not hit exactly.
    pub boundary: bool,
}

/// Snap `value` to `target` if within the boundary band; reports (hit, snapped-inexactly).
fn near(value: f64, target: f64) -> (bool, bool) {
    let d = (value - target).abs();
    (d <= BOUNDARY_TOLERANCE, d > 0.0 && d <= BOUNDARY_TOLERANCE)
}

pub fn classify_sl2c(g: &Matrix2) -> Result<OrbitClassC> {
    let i = invariant_i(g)?;
    if i > 1.0 + I_EXCESS_TOLERANCE {
        return Err(Error::InvariantAboveOne(i));
    }
    let (u, _) = decompose_minkowski(g)?;
    let sheet = Sheet::of(u.t);
    let (at_one, snap_one) = near(i, 1.0);
    let (at_minus, snap_minus) = near(i, -1.0);
    let (tag, boundary) = if at_one {
        (OrbitTagC::HermitianSheet(sheet), snap_one)
    } else if at_minus {
        if u.euclidean() <= BOUNDARY_TOLERANCE {
            (OrbitTagC::SkewHermitian, snap_minus || u.euclidean() > 0.0)
        } else {
            (OrbitTagC::NullConeBundle(sheet), snap_minus)
        }
    } else if i > -1.0 {
        (OrbitTagC::HyperboloidBundle(sheet), false)
    } else {
        (OrbitTagC::OneSheet, false)
    };
    Ok(OrbitClassC {
        tag,
        invariant: i,
        boundary,
    })
}

/// SL₂(ℝ) orbit types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrbitTagR {
    /// α = 0: symmetric elements.
    TwoSheet(Sheet),
    /// 0 < |α| < 1.
    Hyperboloid2(Sheet),
    /// |α| = 1 with u = 0.
    FixedPoint,
    /// |α| = 1 with u null.
    NullCone(Sheet),
    /// |α| > 1.
    OneSheet,
}

impl fmt::Display for OrbitTagR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbitTagR::TwoSheet(s) => write!(f, "TwoSheet({s})"),
            OrbitTagR::Hyperboloid2(s) => write!(f, "Hyperboloid2({s})"),
            OrbitTagR::FixedPoint => f.write_str("FixedPoint"),
            OrbitTagR::NullCone(s) => write!(f, "NullCone({s})"),
            OrbitTagR::OneSheet => f.write_str("OneSheet"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitClassR {
    pub tag: OrbitTagR,
    /// Skew part α = ½(g₁₂ − g₂₁), before folding its sign.
    pub alpha: f64,
    /// u = (t, x, y, 0) with U = ((t + x, y), (y, t − x)).
    pub u: MinkowskiVec,
    pub boundary: bool,
}

pub fn classify_sl2r(g: &Matrix2) -> Result<OrbitClassR> {
    if g.entries().iter().any(|e| e.im.abs() > 1e-12 * (1.0 + e.re.abs())) {
        return Err(Error::NotRealMatrix);
    }
    require_unit_det(g)?;
    let r = |i: usize, j: usize| g.get(i, j).re;
    let alpha = 0.5 * (r(0, 1) - r(1, 0));
    let sym = 0.5 * (r(0, 1) + r(1, 0));
    let u = MinkowskiVec::new(0.5 * (r(0, 0) + r(1, 1)), 0.5 * (r(0, 0) - r(1, 1)), sym, 0.0);
    let a = alpha.abs();
    let sheet = Sheet::of(u.t);
    let (at_zero, snap_zero) = near(a, 0.0);
    let (at_one, snap_one) = near(a, 1.0);
    let (tag, boundary) = if at_zero {
        (OrbitTagR::TwoSheet(sheet), snap_zero)
    } else if at_one {
        if u.euclidean() <= BOUNDARY_TOLERANCE {
            (OrbitTagR::FixedPoint, snap_one || u.euclidean() > 0.0)
        } else {
            (OrbitTagR::NullCone(sheet), snap_one)
        }
    } else if a < 1.0 {
        (OrbitTagR::Hyperboloid2(sheet), false)
    } else {
        (OrbitTagR::OneSheet, false)
    };
    Ok(OrbitClassR {
        tag,
        alpha,
        u,
        boundary,
    })
}

/// Which triple product defines the action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ActionFlavor {
    /// h g hᵀ.
    Transpose,
    /// h g h†.
    Dagger,
}

pub fn act(h: &Matrix2, g: &Matrix2, flavor: ActionFlavor) -> Result<Matrix2> {
    require_unit_det(h)?;
    Ok(match flavor {
        ActionFlavor::Transpose => *h * *g * h.transpose(),
        ActionFlavor::Dagger => *h * *g * h.dagger(),
    })
}

/// h ε hᵀ = det(h) ε, the reason α is invariant under the transpose action.
pub fn epsilon_image(h: &Matrix2) -> Matrix2 {
    *h * epsilon() * h.transpose()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::mat_exp2;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn i_tau3() -> Matrix2 {
        Matrix2::diag(c(0.0, 1.0), c(0.0, -1.0))
    }

    fn rot6() -> Matrix2 {
        Matrix2::diag(Complex64::from_polar(1.0, PI / 6.0), Complex64::from_polar(1.0, -PI / 6.0))
    }

    #[test]
    fn invariant_examples() {
        assert_eq!(invariant_i(&Matrix2::identity()).unwrap(), 1.0);
        assert!((invariant_i(&i_tau3()).unwrap() + 1.0).abs() < 1e-15);
        assert!((invariant_i(&rot6()).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(
            invariant_i(&Matrix2::identity().scale_re(2.0)),
            Err(Error::NotUnimodular(_))
        ));
    }

    #[test]
    fn decomposition_examples() {
        let (u, v) = decompose_minkowski(&Matrix2::identity()).unwrap();
        assert_eq!(u, MinkowskiVec::new(1.0, 0.0, 0.0, 0.0));
        assert_eq!(u.norm2(), -1.0);
        assert_eq!(v, MinkowskiVec::default());
        let (u, v) = decompose_minkowski(&i_tau3()).unwrap();
        assert_eq!(u, MinkowskiVec::default());
        assert_eq!(v, MinkowskiVec::new(0.0, 0.0, 0.0, 1.0));
        assert_eq!(v.norm2(), 1.0);
    }

    #[test]
    fn sl2c_classes() {
        let id = classify_sl2c(&Matrix2::identity()).unwrap();
        assert_eq!(id.tag, OrbitTagC::HermitianSheet(Sheet::Plus));
        assert!(!id.boundary);
        assert_eq!(classify_sl2c(&i_tau3()).unwrap().tag, OrbitTagC::SkewHermitian);
        let r = classify_sl2c(&rot6()).unwrap();
        assert_eq!(r.tag, OrbitTagC::HyperboloidBundle(Sheet::Plus));
        let minus = classify_sl2c(&Matrix2::identity().scale_re(-1.0)).unwrap();
        assert_eq!(minus.tag, OrbitTagC::HermitianSheet(Sheet::Minus));
        let deep = mat_exp2(&(tau1().scale(c(1.5, 0.0)) + tau3().scale(c(0.0, 1.2))));
        assert!(invariant_i(&deep).unwrap() <= 1.0 + 1e-9);
    }

    #[test]
    fn one_sheet_and_null_cone() {
        // g = iτ₃ exp(sτ₁): I = −cosh 2s < −1.
        let g = i_tau3() * mat_exp2(&tau1().scale_re(0.4));
        let cl = classify_sl2c(&g).unwrap();
        assert!((cl.invariant + (0.8f64).cosh()).abs() < 1e-14);
        assert_eq!(cl.tag, OrbitTagC::OneSheet);
        // g = iτ₃ + s(1 + τ₁) has det 1 and null u = (s, s, 0, 0).
        let g = Matrix2::new(c(0.5, 1.0), c(0.5, 0.0), c(0.5, 0.0), c(0.5, -1.0));
        let cl = classify_sl2c(&g).unwrap();
        assert!((cl.invariant + 1.0).abs() < 1e-12);
        assert_eq!(cl.tag, OrbitTagC::NullConeBundle(Sheet::Plus));
    }

    #[test]
    fn sl2r_classes() {
        let id = classify_sl2r(&Matrix2::identity()).unwrap();
        assert_eq!(id.tag, OrbitTagR::TwoSheet(Sheet::Plus));
        assert_eq!(id.alpha, 0.0);
        let e = classify_sl2r(&epsilon()).unwrap();
        assert_eq!(e.tag, OrbitTagR::FixedPoint);
        assert_eq!(e.alpha, 1.0);
        let d = classify_sl2r(&Matrix2::from_real(2.0, 0.0, 0.0, 0.5)).unwrap();
        assert_eq!(d.tag, OrbitTagR::TwoSheet(Sheet::Plus));
        assert_eq!(d.u, MinkowskiVec::new(1.25, 0.75, 0.0, 0.0));
        assert!((d.u.norm2() + 1.0).abs() < 1e-15);
        assert_eq!(classify_sl2r(&i_tau3()), Err(Error::NotRealMatrix));
        let big = classify_sl2r(&Matrix2::from_real(1.0, 2.0, -1.0, -1.0)).unwrap();
        assert!((big.alpha - 1.5).abs() < 1e-15);
        assert_eq!(big.tag, OrbitTagR::OneSheet);
    }

    #[test]
    fn act_identity_and_epsilon() {
        let g = rot6();
        assert_eq!(act(&Matrix2::identity(), &g, ActionFlavor::Dagger).unwrap(), g);
        let h = Matrix2::from_real(2.0, 1.0, 3.0, 2.0);
        assert!((epsilon_image(&h) - epsilon()).max_abs() < 1e-12);
        assert!(act(&Matrix2::identity().scale_re(3.0), &g, ActionFlavor::Transpose).is_err());
    }
}
