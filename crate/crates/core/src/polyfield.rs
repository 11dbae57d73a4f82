//! Polynomials in the four commuting symbols (u, ū, v, v̄).
//!
//! u = t + ix and v = y − iz are treated as formally independent of their
//! conjugates, so ∂_u, ∂_ū, ∂_v, ∂_v̄ are plain formal derivatives. A field is
//! real when it is fixed by [`Poly::conjugate`].
//!
//! Coefficients are generic: [`PolyField`] uses `Complex64`, [`ExactPoly`]
//! uses Gaussian rationals so that identities can be checked to exact zero.

use std::collections::BTreeMap;
use std::fmt::{self, Debug};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{Matrix2, ZERO};
use crate::error::{Error, Result};

/// Coefficient ring for polynomial fields.
pub trait Coeff:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Threshold below which a coefficient counts as zero in predicates
    /// such as harmonicity; 0 for exact rings.
    const TOLERANCE: f64;

    fn conj(&self) -> Self;
    fn imag_unit() -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn to_c64(&self) -> Complex64;
    fn magnitude(&self) -> f64;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }
}

impl Coeff for Complex64 {
    const TOLERANCE: f64 = 1e-12;

    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn imag_unit() -> Self {
        Complex64::i()
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Gaussian rational numbers, for exact identity checks.
pub type GaussRational = Complex<BigRational>;

impl Coeff for GaussRational {
    const TOLERANCE: f64 = 0.0;

    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    fn imag_unit() -> Self {
        Complex::new(BigRational::zero(), BigRational::one())
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }
}

/// The four coordinate symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Var {
    U,
    Ubar,
    V,
    Vbar,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::U, Var::Ubar, Var::V, Var::Vbar];

    /// Position of the symbol in a [`Monomial`].
    pub fn index(self) -> usize {
        match self {
            Var::U => 0,
            Var::Ubar => 1,
            Var::V => 2,
            Var::Vbar => 3,
        }
    }

    /// The conjugate symbol (u ↔ ū, v ↔ v̄).
    pub fn bar(self) -> Var {
        match self {
            Var::U => Var::Ubar,
            Var::Ubar => Var::U,
            Var::V => Var::Vbar,
            Var::Vbar => Var::V,
        }
    }
}

/// Exponents (e_u, e_ū, e_v, e_v̄).
pub type Monomial = [u32; 4];

fn conj_monomial(m: &Monomial) -> Monomial {
    [m[1], m[0], m[3], m[2]]
}

/// A point of R⁴ in Cartesian coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct R4Point {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl R4Point {
    pub const ORIGIN: R4Point = R4Point::new(0.0, 0.0, 0.0, 0.0);

    pub const fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        R4Point { t, x, y, z }
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        R4Point::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.t, self.x, self.y, self.z]
    }

    pub fn u(&self) -> Complex64 {
        Complex64::new(self.t, self.x)
    }

    pub fn ubar(&self) -> Complex64 {
        Complex64::new(self.t, -self.x)
    }

    pub fn v(&self) -> Complex64 {
        Complex64::new(self.y, -self.z)
    }

    pub fn vbar(&self) -> Complex64 {
        Complex64::new(self.y, self.z)
    }

    /// Values of (u, ū, v, v̄).
    pub fn complex_coords(&self) -> [Complex64; 4] {
        [self.u(), self.ubar(), self.v(), self.vbar()]
    }

    /// Translate along Cartesian axis `axis` (0 = t … 3 = z).
    pub fn shifted(&self, axis: usize, h: f64) -> Self {
        let mut a = self.to_array();
        a[axis] += h;
        R4Point::from_array(a)
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|c| c.is_finite())
    }
}

impl fmt::Display for R4Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.t, self.x, self.y, self.z)
    }
}

/// A polynomial in (u, ū, v, v̄) with coefficients in `C`.
#[derive(Clone, PartialEq)]
pub struct Poly<C: Coeff> {
    terms: BTreeMap<Monomial, C>,
}

/// Double-precision polynomial field.
pub type PolyField = Poly<Complex64>;
/// Exact Gaussian-rational polynomial field.
pub type ExactPoly = Poly<GaussRational>;

impl<C: Coeff> Default for Poly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = ["u", "ū", "v", "v̄"];
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", c.to_c64())?;
            for (k, e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "·{}", names[k])?,
                    _ => write!(f, "·{}^{}", names[k], e)?,
                }
            }
        }
        Ok(())
    }
}

impl<C: Coeff> Poly<C> {
    pub fn zero() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: C) -> Self {
        Self::monomial([0; 4], c)
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn monomial(m: Monomial, c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn var(v: Var) -> Self {
        let mut m = [0; 4];
        m[v.index()] = 1;
        Self::monomial(m, C::one())
    }

    pub fn u() -> Self {
        Self::var(Var::U)
    }
    pub fn ubar() -> Self {
        Self::var(Var::Ubar)
    }
    pub fn v() -> Self {
        Self::var(Var::V)
    }
    pub fn vbar() -> Self {
        Self::var(Var::Vbar)
    }

    /// |u|² − |v|² = uū − vv̄.
    pub fn null_quadric() -> Self {
        Self::u() * Self::ubar() - Self::v() * Self::vbar()
    }

    /// |x|² = uū + vv̄.
    pub fn radius_squared() -> Self {
        Self::u() * Self::ubar() + Self::v() * Self::vbar()
    }

    pub fn from_terms<It: IntoIterator<Item = (Monomial, C)>>(it: It) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    /// Accumulate c·m, dropping the entry if it cancels to zero.
    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exact zero test.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Zero within the coefficient ring's tolerance, relative to `scale`.
    pub fn is_negligible(&self, scale: f64) -> bool {
        let tol = C::TOLERANCE * (1.0 + scale);
        self.terms.values().all(|c| c.magnitude() <= tol)
    }

    pub fn max_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Highest exponent of a single symbol.
    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m[v.index()]).max().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| *m == [0; 4])
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, a)| (*m, a.clone() * c.clone())))
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    pub fn to_float(&self) -> PolyField {
        self.map_coeffs(|c| c.to_c64())
    }

    pub fn homogeneous_part(&self, degree: u32) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.iter().sum::<u32>() == degree)
                .map(|(m, c)| (*m, c.clone())),
        )
    }

    /// Keep only monomials satisfying `keep`.
    pub fn filter_terms(&self, keep: impl Fn(&Monomial) -> bool) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (*m, c.clone())),
        )
    }

    /// Formal partial derivative.
    pub fn derive(&self, v: Var) -> Self {
        let k = v.index();
        Self::from_terms(self.terms.iter().filter(|(m, _)| m[k] > 0).map(|(m, c)| {
            let mut d = *m;
            let e = d[k];
            d[k] -= 1;
            (d, c.clone() * C::from_int(e as i64))
        }))
    }

    /// Formal antiderivative in one symbol, without integration constant.
    pub fn integrate(&self, v: Var) -> Self {
        let k = v.index();
        Self::from_terms(self.terms.iter().map(|(m, c)| {
            let mut d = *m;
            d[k] += 1;
            (d, c.clone() * C::from_ratio(1, d[k] as i64))
        }))
    }

    /// Complex conjugation of the field: swap u ↔ ū, v ↔ v̄ and conjugate coefficients.
    pub fn conjugate(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| (conj_monomial(m), c.conj())),
        )
    }

    pub fn is_real(&self) -> bool {
        let diff = self.clone() - self.conjugate();
        diff.is_negligible(self.max_coeff())
    }

    /// Flat Laplacian 4(∂_u∂_ū + ∂_v∂_v̄).
    pub fn laplacian(&self) -> Self {
        let mixed = self.derive(Var::U).derive(Var::Ubar) + self.derive(Var::V).derive(Var::Vbar);
        mixed.scale(&C::from_int(4))
    }

    pub fn is_harmonic(&self) -> bool {
        self.laplacian().is_negligible(self.max_coeff())
    }

    /// Real part ½(p + conjugate(p)).
    pub fn real_part(&self) -> Self {
        (self.clone() + self.conjugate()).scale(&C::from_ratio(1, 2))
    }

    /// Projection onto harmonic polynomials, applied per homogeneous degree.
    ///
    /// For p homogeneous of degree m, h = Σ_j c_j |x|^{2j} Δ^j p with
    /// c_0 = 1 and c_{j+1} = −c_j / (4 (j+1) (m−j)); h is harmonic and
    /// p − h is divisible by |x|². Real input gives real output.
    pub fn harmonic_projection(&self) -> Self {
        let r2 = Self::radius_squared();
        let mut out = Self::zero();
        for m in 0..=self.degree() {
            let p = self.homogeneous_part(m);
            if p.is_zero() {
                continue;
            }
            let mut c = C::one();
            let mut lap_j = p.clone();
            let mut r2_j = Self::one();
            let mut j: i64 = 0;
            loop {
                out = out + (r2_j.clone() * lap_j.clone()).scale(&c);
                lap_j = lap_j.laplacian();
                if lap_j.is_zero() || j >= m as i64 {
                    break;
                }
                c = -c * C::from_ratio(1, 4 * (j + 1) * (m as i64 - j));
                r2_j = r2_j * r2.clone();
                j += 1;
            }
        }
        out
    }

    /// Evaluate with the given values of (u, ū, v, v̄).
    pub fn eval_coords(&self, coords: &[Complex64; 4]) -> Complex64 {
        let mut pows: [Vec<Complex64>; 4] = Default::default();
        let maxdeg: Vec<u32> = Var::ALL.iter().map(|v| self.degree_in(*v)).collect();
        for k in 0..4 {
            let mut acc = Complex64::new(1.0, 0.0);
            pows[k].push(acc);
            for _ in 0..maxdeg[k] {
                acc *= coords[k];
                pows[k].push(acc);
            }
        }
        let mut sum = ZERO;
        for (m, c) in &self.terms {
            let mono = pows[0][m[0] as usize]
                * pows[1][m[1] as usize]
                * pows[2][m[2] as usize]
                * pows[3][m[3] as usize];
            sum += c.to_c64() * mono;
        }
        sum
    }

    /// Evaluate at a point of R⁴ (u = t + ix, ū = t − ix, v = y − iz, v̄ = y + iz).
    pub fn evaluate(&self, pt: &R4Point) -> Complex64 {
        self.eval_coords(&pt.complex_coords())
    }
}

impl<C: Coeff> Add for Poly<C> {
    type Output = Poly<C>;
    fn add(mut self, rhs: Poly<C>) -> Poly<C> {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<C: Coeff> Sub for Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: Poly<C>) -> Poly<C> {
        self + (-rhs)
    }
}

impl<C: Coeff> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly::from_terms(self.terms.into_iter().map(|(m, c)| (m, -c)))
    }
}

impl<C: Coeff> Mul for Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: Poly<C>) -> Poly<C> {
        &self * &rhs
    }
}

impl<'a, C: Coeff> Mul<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &'a Poly<C>) -> Poly<C> {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = [ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2], ma[3] + mb[3]];
                out.add_term(m, ca.clone() * cb.clone());
            }
        }
        out
    }
}

/// One record of the polynomial JSON schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyTerm {
    pub eu: u32,
    pub eubar: u32,
    pub ev: u32,
    pub evbar: u32,
    pub re: f64,
    pub im: f64,
}

impl PolyField {
    pub fn from_json_terms(terms: &[PolyTerm]) -> Self {
        Poly::from_terms(terms.iter().map(|t| {
            (
                [t.eu, t.eubar, t.ev, t.evbar],
                Complex64::new(t.re, t.im),
            )
        }))
    }

    pub fn to_json_terms(&self) -> Vec<PolyTerm> {
        self.terms
            .iter()
            .map(|(m, c)| PolyTerm {
                eu: m[0],
                eubar: m[1],
                ev: m[2],
                evbar: m[3],
                re: c.re,
                im: c.im,
            })
            .collect()
    }
}

impl Serialize for PolyField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_terms().serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolyField {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<PolyTerm>::deserialize(d)?;
        Ok(PolyField::from_json_terms(&terms))
    }
}

/// A 2×2 matrix of polynomial fields.
#[derive(Clone, PartialEq)]
pub struct MatrixPoly<C: Coeff>(pub [[Poly<C>; 2]; 2]);

pub type MatrixPolyField = MatrixPoly<Complex64>;
pub type ExactMatrixPoly = MatrixPoly<GaussRational>;

impl<C: Coeff> Debug for MatrixPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entry(&self.0[0])
            .entry(&self.0[1])
            .finish()
    }
}

impl<C: Coeff> Default for MatrixPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> MatrixPoly<C> {
    pub fn new(a: Poly<C>, b: Poly<C>, c: Poly<C>, d: Poly<C>) -> Self {
        MatrixPoly([[a, b], [c, d]])
    }

    pub fn zero() -> Self {
        Self::new(Poly::zero(), Poly::zero(), Poly::zero(), Poly::zero())
    }

    pub fn identity() -> Self {
        Self::new(Poly::one(), Poly::zero(), Poly::zero(), Poly::one())
    }

    /// Constant matrix from coefficients (row-major).
    pub fn constant(e: [C; 4]) -> Self {
        let [a, b, c, d] = e;
        Self::new(
            Poly::constant(a),
            Poly::constant(b),
            Poly::constant(c),
            Poly::constant(d),
        )
    }

    pub fn tau1() -> Self {
        Self::constant([C::zero(), C::one(), C::one(), C::zero()])
    }

    pub fn tau2() -> Self {
        let i = C::imag_unit();
        Self::constant([C::zero(), -i.clone(), i, C::zero()])
    }

    pub fn tau3() -> Self {
        Self::constant([C::one(), C::zero(), C::zero(), -C::one()])
    }

    /// p · M for a scalar field p.
    pub fn scalar_times(p: &Poly<C>, m: &Self) -> Self {
        m.map(|e| p * e)
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly<C> {
        &self.0[i][j]
    }

    pub fn map(&self, f: impl Fn(&Poly<C>) -> Poly<C>) -> Self {
        Self::new(
            f(&self.0[0][0]),
            f(&self.0[0][1]),
            f(&self.0[1][0]),
            f(&self.0[1][1]),
        )
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map(|p| p.scale(c))
    }

    pub fn derive(&self, v: Var) -> Self {
        self.map(|p| p.derive(v))
    }

    /// Entrywise field conjugation (no transpose).
    pub fn conjugate(&self) -> Self {
        self.map(|p| p.conjugate())
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Self::new(
            m[0][0].clone(),
            m[1][0].clone(),
            m[0][1].clone(),
            m[1][1].clone(),
        )
    }

    /// Pointwise conjugate transpose A(x)†.
    pub fn dagger(&self) -> Self {
        self.conjugate().transpose()
    }

    pub fn trace(&self) -> Poly<C> {
        self.0[0][0].clone() + self.0[1][1].clone()
    }

    pub fn det(&self) -> Poly<C> {
        let m = &self.0;
        &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
    }

    pub fn adjugate(&self) -> Self {
        let m = &self.0;
        Self::new(
            m[1][1].clone(),
            -m[0][1].clone(),
            -m[1][0].clone(),
            m[0][0].clone(),
        )
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self * other - other * self
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().flatten().all(|p| p.is_zero())
    }

    pub fn is_negligible(&self, scale: f64) -> bool {
        self.0.iter().flatten().all(|p| p.is_negligible(scale))
    }

    pub fn max_coeff(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|p| p.max_coeff())
            .fold(0.0, f64::max)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().flatten().map(|p| p.degree()).max().unwrap_or(0)
    }

    pub fn is_traceless(&self) -> bool {
        self.trace().is_negligible(self.max_coeff())
    }

    /// True when no entry depends on ū or v̄.
    pub fn is_holomorphic(&self) -> bool {
        self.0
            .iter()
            .flatten()
            .all(|p| p.terms().all(|(m, _)| m[1] == 0 && m[3] == 0))
    }

    pub fn is_harmonic(&self) -> bool {
        self.0.iter().flatten().all(|p| p.is_harmonic())
    }

    pub fn laplacian(&self) -> Self {
        self.map(|p| p.laplacian())
    }

    pub fn to_float(&self) -> MatrixPolyField {
        MatrixPoly::new(
            self.0[0][0].to_float(),
            self.0[0][1].to_float(),
            self.0[1][0].to_float(),
            self.0[1][1].to_float(),
        )
    }

    pub fn eval_coords(&self, coords: &[Complex64; 4]) -> Matrix2 {
        let m = &self.0;
        Matrix2::new(
            m[0][0].eval_coords(coords),
            m[0][1].eval_coords(coords),
            m[1][0].eval_coords(coords),
            m[1][1].eval_coords(coords),
        )
    }

    pub fn evaluate(&self, pt: &R4Point) -> Matrix2 {
        self.eval_coords(&pt.complex_coords())
    }

    /// Decompose Σ_mono M_mono · mono into constant coefficient matrices.
    pub fn coefficient_matrices(&self) -> BTreeMap<Monomial, [C; 4]> {
        let mut out: BTreeMap<Monomial, [C; 4]> = BTreeMap::new();
        for (k, p) in self.0.iter().flatten().enumerate() {
            for (m, c) in p.terms() {
                let e = out
                    .entry(*m)
                    .or_insert_with(|| [C::zero(), C::zero(), C::zero(), C::zero()]);
                e[k] = c.clone();
            }
        }
        out
    }
}

impl MatrixPolyField {
    pub fn from_matrix(m: &Matrix2) -> Self {
        Self::constant(m.entries())
    }
}

impl<C: Coeff> Add for MatrixPoly<C> {
    type Output = MatrixPoly<C>;
    fn add(self, rhs: Self) -> Self {
        let [[a, b], [c, d]] = self.0;
        let [[e, f], [g, h]] = rhs.0;
        MatrixPoly::new(a + e, b + f, c + g, d + h)
    }
}

impl<C: Coeff> Sub for MatrixPoly<C> {
    type Output = MatrixPoly<C>;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<C: Coeff> Neg for MatrixPoly<C> {
    type Output = MatrixPoly<C>;
    fn neg(self) -> Self {
        let [[a, b], [c, d]] = self.0;
        MatrixPoly::new(-a, -b, -c, -d)
    }
}

impl<'a, C: Coeff> Mul<&'a MatrixPoly<C>> for &'a MatrixPoly<C> {
    type Output = MatrixPoly<C>;
    fn mul(self, rhs: &'a MatrixPoly<C>) -> MatrixPoly<C> {
        let a = &self.0;
        let b = &rhs.0;
        let cell = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
        MatrixPoly::new(cell(0, 0), cell(0, 1), cell(1, 0), cell(1, 1))
    }
}

impl<C: Coeff> Mul for MatrixPoly<C> {
    type Output = MatrixPoly<C>;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

/// Check that a scalar polynomial has no dependence on ū, v̄.
pub fn require_holomorphic<C: Coeff>(p: &MatrixPoly<C>) -> Result<()> {
    if p.is_holomorphic() {
        Ok(())
    } else {
        Err(Error::NotHolomorphic)
    }
}
