//! 2×2 complex matrix algebra.
//!
//! Pauli matrices, closed-form exponentials, Hermitian square roots and the
//! reality involution σ(z) = −1/z̄ on the Riemann sphere together with the
//! induced star operation g*(z) = g(σ(z))† on matrix loops.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// A 2×2 complex matrix, row-major.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Matrix2(pub [[Complex64; 2]; 2]);

impl fmt::Debug for Matrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            m[0][0], m[0][1], m[1][0], m[1][1]
        )
    }
}

impl Default for Matrix2 {
    fn default() -> Self {
        Self::zero()
    }
}

impl Matrix2 {
    pub const fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Matrix2([[a, b], [c, d]])
    }

    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub fn diag(a: Complex64, d: Complex64) -> Self {
        Self::new(a, ZERO, ZERO, d)
    }

    pub fn scalar(s: Complex64) -> Self {
        Self::diag(s, s)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[i][j]
    }

    pub fn det(&self) -> Complex64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let m = &self.0;
        Self::new(m[0][0].conj(), m[1][0].conj(), m[0][1].conj(), m[1][1].conj())
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Self::new(m[0][0], m[1][0], m[0][1], m[1][1])
    }

    pub fn conj(&self) -> Self {
        let m = &self.0;
        Self::new(m[0][0].conj(), m[0][1].conj(), m[1][0].conj(), m[1][1].conj())
    }

    /// Adjugate; equals the inverse when det = 1.
    pub fn adjugate(&self) -> Self {
        let m = &self.0;
        Self::new(m[1][1], -m[0][1], -m[1][0], m[0][0])
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.norm() == 0.0 || !d.is_finite() {
            return None;
        }
        Some(self.adjugate().scale(d.inv()))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let m = &self.0;
        Self::new(s * m[0][0], s * m[0][1], s * m[1][0], s * m[1][1])
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|c| c.is_finite())
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    /// Traceless part M − (tr M / 2)·Id.
    pub fn traceless_part(&self) -> Self {
        *self - Self::scalar(self.trace() * 0.5)
    }

    /// Distance from Hermiticity, ‖M − M†‖.
    pub fn hermiticity_defect(&self) -> f64 {
        (*self - self.dagger()).norm()
    }

    /// The four entries as a flat array, row-major.
    pub fn entries(&self) -> [Complex64; 4] {
        let m = &self.0;
        [m[0][0], m[0][1], m[1][0], m[1][1]]
    }

    pub fn from_entries(e: [Complex64; 4]) -> Self {
        Self::new(e[0], e[1], e[2], e[3])
    }
}

impl Add for Matrix2 {
    type Output = Matrix2;
    fn add(self, rhs: Matrix2) -> Matrix2 {
        let mut out = self;
        out += rhs;
        out
    }
}

impl AddAssign for Matrix2 {
    fn add_assign(&mut self, rhs: Matrix2) {
        for i in 0..2 {
            for j in 0..2 {
                self.0[i][j] += rhs.0[i][j];
            }
        }
    }
}

impl Sub for Matrix2 {
    type Output = Matrix2;
    fn sub(self, rhs: Matrix2) -> Matrix2 {
        self + (-rhs)
    }
}

impl Neg for Matrix2 {
    type Output = Matrix2;
    fn neg(self) -> Matrix2 {
        self.scale(-ONE)
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;
    fn mul(self, rhs: Matrix2) -> Matrix2 {
        let a = &self.0;
        let b = &rhs.0;
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Matrix2(out)
    }
}

impl Mul<Complex64> for Matrix2 {
    type Output = Matrix2;
    fn mul(self, rhs: Complex64) -> Matrix2 {
        self.scale(rhs)
    }
}

impl std::iter::Sum for Matrix2 {
    fn sum<It: Iterator<Item = Matrix2>>(iter: It) -> Matrix2 {
        iter.fold(Matrix2::zero(), |acc, m| acc + m)
    }
}

pub fn tau1() -> Matrix2 {
    Matrix2::new(ZERO, ONE, ONE, ZERO)
}

pub fn tau2() -> Matrix2 {
    Matrix2::new(ZERO, -I, I, ZERO)
}

pub fn tau3() -> Matrix2 {
    Matrix2::new(ONE, ZERO, ZERO, -ONE)
}

/// The rotation generator ε = iτ₂ = ((0, 1), (−1, 0)).
pub fn epsilon() -> Matrix2 {
    Matrix2::from_real(0.0, 1.0, -1.0, 0.0)
}

/// The classical Pauli matrices (τ₁, τ₂, τ₃).
#[derive(Debug, Clone, Copy)]
pub struct PauliBasis {
    pub tau1: Matrix2,
    pub tau2: Matrix2,
    pub tau3: Matrix2,
}

impl PauliBasis {
    pub fn new() -> Self {
        PauliBasis {
            tau1: tau1(),
            tau2: tau2(),
            tau3: tau3(),
        }
    }

    pub fn as_array(&self) -> [Matrix2; 3] {
        [self.tau1, self.tau2, self.tau3]
    }

    /// x₀·Id + x·τ for complex coefficients.
    pub fn combine(&self, x0: Complex64, x: [Complex64; 3]) -> Matrix2 {
        Matrix2::scalar(x0) + self.tau1 * x[0] + self.tau2 * x[1] + self.tau3 * x[2]
    }
}

impl Default for PauliBasis {
    fn default() -> Self {
        Self::new()
    }
}

/// sinh(s)/s, continuous through s = 0.
pub fn sinhc(s: Complex64) -> Complex64 {
    if s.norm() < 1e-4 {
        let s2 = s * s;
        ONE + s2 / 6.0 + s2 * s2 / 120.0
    } else {
        s.sinh() / s
    }
}

/// Matrix exponential by the 2×2 closed form.
///
/// With M = (tr M / 2)·Id + M₀ and s² = −det M₀,
/// exp(M) = e^{tr M/2} (cosh s · Id + sinhc(s) · M₀).
pub fn mat_exp2(m: &Matrix2) -> Matrix2 {
    let half_trace = m.trace() * 0.5;
    let m0 = *m - Matrix2::scalar(half_trace);
    let s = (-m0.det()).sqrt();
    let prefactor = half_trace.exp();
    (Matrix2::scalar(s.cosh()) + m0 * sinhc(s)) * prefactor
}

/// Hermitian positive-definite square root of a Hermitian positive-definite matrix.
pub fn hermitian_sqrt(h: &Matrix2) -> Result<Matrix2> {
    let defect = h.hermiticity_defect();
    if defect > 1e-12 * (1.0 + h.norm()) {
        return Err(Error::NotHermitian(defect));
    }
    let trace = h.trace().re;
    let det = h.det().re;
    if !(trace > 0.0 && det > 0.0) {
        return Err(Error::NotPositive { trace, det });
    }
    let root_det = det.sqrt();
    let denom = (trace + 2.0 * root_det).sqrt();
    Ok((*h + Matrix2::scalar(root_det.into())).scale_re(1.0 / denom))
}

/// A point of the Riemann sphere CP¹.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SpectralPoint {
    Finite(Complex64),
    Infinity,
}

impl SpectralPoint {
    pub fn finite(&self) -> Option<Complex64> {
        match self {
            SpectralPoint::Finite(z) => Some(*z),
            SpectralPoint::Infinity => None,
        }
    }
}

impl From<Complex64> for SpectralPoint {
    fn from(z: Complex64) -> Self {
        SpectralPoint::Finite(z)
    }
}

impl fmt::Display for SpectralPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralPoint::Finite(z) => write!(f, "{z}"),
            SpectralPoint::Infinity => write!(f, "∞"),
        }
    }
}

/// The reality involution σ(z) = −1/z̄, exchanging 0 and ∞.
pub fn sigma(z: SpectralPoint) -> SpectralPoint {
    match z {
        SpectralPoint::Infinity => SpectralPoint::Finite(ZERO),
        SpectralPoint::Finite(w) if w == ZERO => SpectralPoint::Infinity,
        SpectralPoint::Finite(w) => SpectralPoint::Finite(-w.conj().inv()),
    }
}

/// An open annulus r_inner < |z| < r_outer; r_inner = 0 or r_outer = ∞ allowed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Annulus {
    pub inner: f64,
    pub outer: f64,
}

impl Annulus {
    pub fn new(inner: f64, outer: f64) -> Self {
        Annulus { inner, outer }
    }

    /// The punctured plane ℂ*.
    pub fn punctured_plane() -> Self {
        Annulus::new(0.0, f64::INFINITY)
    }

    pub fn contains(&self, z: SpectralPoint) -> bool {
        match z {
            SpectralPoint::Infinity => false,
            SpectralPoint::Finite(w) => {
                let r = w.norm();
                r > self.inner && r < self.outer
            }
        }
    }
}

/// A 2×2 matrix-valued function on an annulus in the spectral plane.
pub trait MatrixLoopFn {
    fn domain(&self) -> Annulus;
    fn at(&self, z: Complex64) -> Matrix2;
}

impl<F: Fn(Complex64) -> Matrix2> MatrixLoopFn for (Annulus, F) {
    fn domain(&self) -> Annulus {
        self.0
    }

    fn at(&self, z: Complex64) -> Matrix2 {
        (self.1)(z)
    }
}

/// g*(z) = (g(σ(z)))†.
pub fn star_loop(g: &dyn MatrixLoopFn, z: SpectralPoint) -> Result<Matrix2> {
    let image = sigma(z);
    if !g.domain().contains(image) {
        return Err(Error::OutsideDomain(image.to_string()));
    }
    let w = image.finite().expect("annulus excludes infinity");
    Ok(g.at(w).dagger())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: &Matrix2, b: &Matrix2, tol: f64) -> bool {
        (*a - *b).max_abs() <= tol
    }

    #[test]
    fn pauli_products() {
        let p = PauliBasis::new();
        for t in p.as_array() {
            assert_eq!(t * t, Matrix2::identity());
        }
        assert_eq!(p.tau1 * p.tau2, p.tau3 * I);
        assert_eq!(p.tau2 * p.tau3, p.tau1 * I);
        assert_eq!(p.tau3 * p.tau1, p.tau2 * I);
    }

    #[test]
    fn exp_of_zero_and_diagonal() {
        assert_eq!(mat_exp2(&Matrix2::zero()), Matrix2::identity());
        let a = 0.7;
        let e = mat_exp2(&tau3().scale_re(a));
        let want = Matrix2::diag(c(a.exp(), 0.0), c((-a).exp(), 0.0));
        assert!(close(&e, &want, 1e-15));
    }

    #[test]
    fn exp_of_nilpotent_is_smooth() {
        let n = Matrix2::new(ZERO, ONE, ZERO, ZERO);
        let e = mat_exp2(&n);
        assert!(close(&e, &(Matrix2::identity() + n), 1e-15));
        let tiny = n + tau3().scale_re(1e-9);
        assert!(close(&mat_exp2(&tiny), &(Matrix2::identity() + tiny), 1e-12));
    }

    #[test]
    fn sigma_values() {
        // −1/conj(i) = −1/(−i) = −i: σ is the antipodal map on the unit circle.
        assert_eq!(sigma(I.into()), SpectralPoint::Finite(-I));
        assert_eq!(sigma(ONE.into()), SpectralPoint::Finite(-ONE));
        assert_eq!(sigma(ZERO.into()), SpectralPoint::Infinity);
        assert_eq!(sigma(SpectralPoint::Infinity), SpectralPoint::Finite(ZERO));
    }

    #[test]
    fn star_examples() {
        let id = (Annulus::punctured_plane(), |_z: Complex64| Matrix2::identity());
        assert_eq!(star_loop(&id, c(0.3, 0.4).into()).unwrap(), Matrix2::identity());

        let g = (Annulus::punctured_plane(), |z: Complex64| {
            Matrix2::diag(z, z.inv())
        });
        let v = star_loop(&g, ONE.into()).unwrap();
        assert!(close(&v, &Matrix2::scalar(-ONE), 1e-15));
    }

    #[test]
    fn star_of_real_exponent_is_identity_on_circle() {
        // φ(z) = c/z + r + d z is star-real iff d = −conj(c) and r is real.
        let cm = c(0.3, -0.2);
        let r = 0.4;
        let phi = move |z: Complex64| cm / z + r - cm.conj() * z;
        let g = (Annulus::punctured_plane(), move |z: Complex64| {
            mat_exp2(&tau3().scale(phi(z)))
        });
        for k in 0..16 {
            let z = Complex64::from_polar(1.0, k as f64 * 0.4);
            let s = star_loop(&g, z.into()).unwrap();
            assert!(close(&s, &g.at(z), 1e-13));
        }
    }

    #[test]
    fn star_outside_domain() {
        let g = (Annulus::new(0.5, 2.0), |_z: Complex64| Matrix2::identity());
        assert!(matches!(
            star_loop(&g, c(10.0, 0.0).into()),
            Err(Error::OutsideDomain(_))
        ));
        assert!(star_loop(&g, ZERO.into()).is_err());
    }

    #[test]
    fn hermitian_sqrt_examples() {
        assert!(close(
            &hermitian_sqrt(&Matrix2::identity()).unwrap(),
            &Matrix2::identity(),
            1e-15
        ));
        let s = hermitian_sqrt(&Matrix2::from_real(4.0, 0.0, 0.0, 1.0)).unwrap();
        assert!(close(&s, &Matrix2::from_real(2.0, 0.0, 0.0, 1.0), 1e-15));
    }

    #[test]
    fn hermitian_sqrt_rejects_bad_input() {
        assert!(matches!(
            hermitian_sqrt(&tau2().scale(I)),
            Err(Error::NotHermitian(_))
        ));
        assert!(matches!(
            hermitian_sqrt(&tau3()),
            Err(Error::NotPositive { .. })
        ));
        assert!(matches!(
            hermitian_sqrt(&Matrix2::scalar(-ONE)),
            Err(Error::NotPositive { .. })
        ));
    }
}
