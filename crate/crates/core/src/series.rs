//! Finite Laurent series in the spectral parameter z with field-valued coefficients.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;

use crate::algebra::Matrix2;
use crate::polyfield::{MatrixPolyField, PolyField, R4Point, Var};

/// Coefficients that can sit in a Laurent series: scalar or matrix polynomial fields.
pub trait SeriesCoeff:
    Clone + PartialEq + std::fmt::Debug + Add<Output = Self> + Sub<Output = Self> + Neg<Output = Self>
{
    type Value: Copy + Add<Output = Self::Value> + std::ops::Mul<Complex64, Output = Self::Value>;

    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn max_coeff(&self) -> f64;
    fn is_negligible(&self, scale: f64) -> bool;
    /// Pointwise complex conjugate (scalar) or conjugate transpose (matrix).
    fn star_coeff(&self) -> Self;
    fn derive(&self, v: Var) -> Self;
    fn scale(&self, c: Complex64) -> Self;
    fn evaluate(&self, x: &R4Point) -> Self::Value;
    fn zero_value() -> Self::Value;
}

impl SeriesCoeff for PolyField {
    type Value = Complex64;

    fn zero() -> Self {
        PolyField::zero()
    }
    fn is_zero(&self) -> bool {
        PolyField::is_zero(self)
    }
    fn max_coeff(&self) -> f64 {
        PolyField::max_coeff(self)
    }
    fn is_negligible(&self, scale: f64) -> bool {
        PolyField::is_negligible(self, scale)
    }
    fn star_coeff(&self) -> Self {
        self.conjugate()
    }
    fn derive(&self, v: Var) -> Self {
        PolyField::derive(self, v)
    }
    fn scale(&self, c: Complex64) -> Self {
        PolyField::scale(self, &c)
    }
    fn evaluate(&self, x: &R4Point) -> Complex64 {
        PolyField::evaluate(self, x)
    }
    fn zero_value() -> Complex64 {
        Complex64::new(0.0, 0.0)
    }
}

impl SeriesCoeff for MatrixPolyField {
    type Value = Matrix2;

    fn zero() -> Self {
        MatrixPolyField::zero()
    }
    fn is_zero(&self) -> bool {
        MatrixPolyField::is_zero(self)
    }
    fn max_coeff(&self) -> f64 {
        MatrixPolyField::max_coeff(self)
    }
    fn is_negligible(&self, scale: f64) -> bool {
        MatrixPolyField::is_negligible(self, scale)
    }
    fn star_coeff(&self) -> Self {
        self.dagger()
    }
    fn derive(&self, v: Var) -> Self {
        MatrixPolyField::derive(self, v)
    }
    fn scale(&self, c: Complex64) -> Self {
        MatrixPolyField::scale(self, &c)
    }
    fn evaluate(&self, x: &R4Point) -> Matrix2 {
        MatrixPolyField::evaluate(self, x)
    }
    fn zero_value() -> Matrix2 {
        Matrix2::zero()
    }
}

/// Σ_n c_n zⁿ with finitely many nonzero coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Laurent<T: SeriesCoeff> {
    coeffs: BTreeMap<i32, T>,
}

pub type ScalarSeries = Laurent<PolyField>;
pub type MatrixSeries = Laurent<MatrixPolyField>;

impl<T: SeriesCoeff> Default for Laurent<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: SeriesCoeff> Laurent<T> {
    pub fn zero() -> Self {
        Laurent {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn monomial(n: i32, c: T) -> Self {
        let mut s = Self::zero();
        s.insert(n, c);
        s
    }

    pub fn from_coeffs<I: IntoIterator<Item = (i32, T)>>(it: I) -> Self {
        let mut s = Self::zero();
        for (n, c) in it {
            let sum = s.coeff(n) + c;
            s.insert(n, sum);
        }
        s
    }

    /// Set the zⁿ coefficient, dropping it if zero.
    pub fn insert(&mut self, n: i32, c: T) {
        if c.is_zero() {
            self.coeffs.remove(&n);
        } else {
            self.coeffs.insert(n, c);
        }
    }

    pub fn coeff(&self, n: i32) -> T {
        self.coeffs.get(&n).cloned().unwrap_or_else(T::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, &T)> {
        self.coeffs.iter().map(|(n, c)| (*n, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_power(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_power(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    /// Largest |n| carrying a nonzero coefficient.
    pub fn band(&self) -> usize {
        self.coeffs
            .keys()
            .map(|n| n.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.values().map(T::max_coeff).fold(0.0, f64::max)
    }

    pub fn is_negligible(&self, scale: f64) -> bool {
        self.coeffs.values().all(|c| c.is_negligible(scale))
    }

    pub fn map(&self, f: impl Fn(&T) -> T) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|(n, c)| (*n, f(c))))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|t| t.scale(c))
    }

    pub fn derive(&self, v: Var) -> Self {
        self.map(|t| t.derive(v))
    }

    /// Multiply by z^k.
    pub fn shift(&self, k: i32) -> Self {
        Laurent {
            coeffs: self.coeffs.iter().map(|(n, c)| (n + k, c.clone())).collect(),
        }
    }

    /// Coefficients with n < 0, n = 0 and n > 0 respectively.
    pub fn split_signs(&self) -> (Self, T, Self) {
        let neg = Laurent {
            coeffs: self.coeffs.range(..0).map(|(n, c)| (*n, c.clone())).collect(),
        };
        let pos = Laurent {
            coeffs: self.coeffs.range(1..).map(|(n, c)| (*n, c.clone())).collect(),
        };
        (neg, self.coeff(0), pos)
    }

    /// The reality involution on coefficients: (S*)_n = (−1)ⁿ (S_{−n})^⋆.
    pub fn star(&self) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|(n, c)| {
            let s = c.star_coeff();
            (-n, if n % 2 == 0 { s } else { -s })
        }))
    }

    /// Sup coefficient of S − S*.
    pub fn reality_defect(&self) -> f64 {
        (self.clone() - self.star()).max_coeff()
    }

    /// Coefficient-wise twistor operators: returns, for each n with a nonzero
    /// defect, (∂_ū S_n − ∂_v S_{n−1}, ∂_v̄ S_n + ∂_u S_{n−1}).
    pub fn annihilation_defects(&self) -> Vec<(i32, T, T)> {
        let (Some(lo), Some(hi)) = (self.min_power(), self.max_power()) else {
            return Vec::new();
        };
        (lo..=hi + 1)
            .filter_map(|n| {
                let cur = self.coeff(n);
                let prev = self.coeff(n - 1);
                let first = cur.derive(Var::Ubar) - prev.derive(Var::V);
                let second = cur.derive(Var::Vbar) + prev.derive(Var::U);
                (!first.is_zero() || !second.is_zero()).then_some((n, first, second))
            })
            .collect()
    }

    /// True when every twistor-operator defect is zero within float tolerance.
    pub fn is_annihilated(&self) -> bool {
        let scale = self.max_coeff();
        self.annihilation_defects()
            .iter()
            .all(|(_, a, b)| a.is_negligible(scale) && b.is_negligible(scale))
    }

    /// Coefficient values at a point, indexed by power.
    pub fn values_at(&self, x: &R4Point) -> Vec<(i32, T::Value)> {
        self.coeffs.iter().map(|(n, c)| (*n, c.evaluate(x))).collect()
    }

    /// Σ c_n(x) zⁿ; z must be nonzero when negative powers are present.
    pub fn evaluate(&self, x: &R4Point, z: Complex64) -> T::Value {
        eval_values(&self.values_at(x), z, T::zero_value())
    }
}

/// Σ v_n zⁿ for precomputed coefficient values.
pub fn eval_values<V>(values: &[(i32, V)], z: Complex64, zero: V) -> V
where
    V: Copy + Add<Output = V> + std::ops::Mul<Complex64, Output = V>,
{
    values.iter().fold(zero, |acc, &(n, v)| acc + v * z.powi(n))
}

impl<T: SeriesCoeff> Add for Laurent<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for (n, c) in rhs.coeffs {
            let sum = out.coeff(n) + c;
            out.insert(n, sum);
        }
        out
    }
}

impl<T: SeriesCoeff> Sub for Laurent<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: SeriesCoeff> Neg for Laurent<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Laurent {
            coeffs: self.coeffs.into_iter().map(|(n, c)| (n, -c)).collect(),
        }
    }
}

impl MatrixSeries {
    /// Series of a scalar series times a constant matrix field.
    pub fn from_scalar(s: &ScalarSeries, m: &MatrixPolyField) -> Self {
        Self::from_coeffs(s.iter().map(|(n, p)| (n, MatrixPolyField::scalar_times(p, m))))
    }

    /// Cauchy product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (n, a) in self.iter() {
            for (k, b) in other.iter() {
                let sum = out.coeff(n + k) + a * b;
                out.insert(n + k, sum);
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other) - other.mul(self)
    }

    pub fn is_traceless(&self) -> bool {
        self.iter().all(|(_, c)| c.is_traceless())
    }
}
