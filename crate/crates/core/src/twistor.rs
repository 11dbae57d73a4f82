//! Contour-integral transforms from twistor data to harmonic functions and
//! abelian patching matrices, plus the associated linear problem.
//!
//! A representative f = Σ c·p₁^{d₁} p₂^{d₂} w^k with p₁ = u − w v̄, p₂ = v + w ū
//! is expanded as f = Σ_j P_j(x) w^j. Then
//!
//! * a = (1/2πi)∮ f dw = P_{−1};
//! * F(z) = (1/2πi)∮ (w+z)/(w−z) f dw = P_{−1} + 2 Σ_{m≥1} P_{m−1} z^m for |z| < r,
//!   and −P_{−1} − 2 Σ_{m≥1} P_{−1−m} z^{−m} for |z| > r.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{star_loop, Annulus, Matrix2, SpectralPoint};
use crate::connection::{exp_tau3, ConnectionField};
use crate::error::{Error, Result};
use crate::grid::pairwise_sum;
use crate::polyfield::{MatrixPolyField, Monomial, PolyField, R4Point, Var};
use crate::series::{MatrixSeries, ScalarSeries};

/// Key (d₁, d₂, k) of the term p₁^{d₁} p₂^{d₂} w^k.
pub type TermKey = (u32, u32, i32);

/// A Laurent polynomial in w with coefficients polynomial in p₁, p₂.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TwistorRep {
    terms: BTreeMap<TermKey, Complex64>,
}

/// One term in the JSON interchange format.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwistorTerm {
    pub d1: u32,
    pub d2: u32,
    pub k: i32,
    pub re: f64,
    pub im: f64,
}

impl TwistorRep {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(d1: u32, d2: u32, k: i32, c: Complex64) -> Self {
        let mut f = Self::zero();
        f.add_term((d1, d2, k), c);
        f
    }

    /// p₁p₂/w², the representative of |u|² − |v|².
    pub fn null_quadric() -> Self {
        Self::term(1, 1, -2, Complex64::new(1.0, 0.0))
    }

    pub fn from_terms<I: IntoIterator<Item = (TermKey, Complex64)>>(it: I) -> Self {
        let mut f = Self::zero();
        for (k, c) in it {
            f.add_term(k, c);
        }
        f
    }

    pub fn add_term(&mut self, key: TermKey, c: Complex64) {
        let sum = self.terms.get(&key).copied().unwrap_or_default() + c;
        if sum == Complex64::new(0.0, 0.0) {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &Complex64)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, c)| (*k, c * s)))
    }

    pub fn from_json_terms(terms: &[TwistorTerm]) -> Self {
        Self::from_terms(
            terms
                .iter()
                .map(|t| ((t.d1, t.d2, t.k), Complex64::new(t.re, t.im))),
        )
    }

    pub fn to_json_terms(&self) -> Vec<TwistorTerm> {
        self.terms
            .iter()
            .map(|(&(d1, d2, k), c)| TwistorTerm {
                d1,
                d2,
                k,
                re: c.re,
                im: c.im,
            })
            .collect()
    }

    /// Range of w-powers after expanding p₁, p₂.
    pub fn w_range(&self) -> Option<(i32, i32)> {
        let lo = self.terms.keys().map(|&(_, _, k)| k).min()?;
        let hi = self
            .terms
            .keys()
            .map(|&(d1, d2, k)| k + (d1 + d2) as i32)
            .max()?;
        Some((lo, hi))
    }

    /// Largest |w-power| of the expanded integrand f.
    pub fn bandwidth(&self) -> usize {
        self.w_range()
            .map(|(lo, hi)| lo.unsigned_abs().max(hi.unsigned_abs()) as usize)
            .unwrap_or(0)
    }

    /// f = Σ_j P_j w^j with P_j polynomial in (u, ū, v, v̄).
    pub fn w_expansion(&self) -> BTreeMap<i32, PolyField> {
        let mut out: BTreeMap<i32, PolyField> = BTreeMap::new();
        for (&(d1, d2, k), &c) in &self.terms {
            // p₁^{d₁} = Σ_a C(d₁,a) u^{d₁−a} (−v̄)^a w^a
            // p₂^{d₂} = Σ_b C(d₂,b) v^{d₂−b} ū^b w^b
            for a in 0..=d1 {
                let ca = binomial(d1, a) * if a % 2 == 0 { 1.0 } else { -1.0 };
                for b in 0..=d2 {
                    let cb = binomial(d2, b);
                    let mono: Monomial = [d1 - a, b, d2 - b, a];
                    let term = PolyField::monomial(mono, c * ca * cb);
                    let slot = out.entry(k + (a + b) as i32).or_default();
                    *slot = slot.clone() + term;
                }
            }
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Value of f at (x, w).
    pub fn eval(&self, x: &R4Point, w: Complex64) -> Complex64 {
        let p1 = x.u() - w * x.vbar();
        let p2 = x.v() + w * x.ubar();
        self.terms
            .iter()
            .map(|(&(d1, d2, k), &c)| c * p1.powu(d1) * p2.powu(d2) * w.powi(k))
            .sum()
    }

    /// The representative f̄ whose contour integral is the complex conjugate of f's.
    pub fn conjugate_rep(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(&(d1, d2, k), c)| {
            let sign = if (d2 as i32 + 1 + k).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            ((d2, d1, -(d1 as i32) - d2 as i32 - 2 - k), c.conj() * sign)
        }))
    }

    /// ½(f + f̄), whose Penrose transform is the real part of f's.
    pub fn realify(&self) -> Self {
        let mut out = self.clone();
        for (k, c) in self.conjugate_rep().terms {
            out.add_term(k, c);
        }
        out.scale(Complex64::new(0.5, 0.0))
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Circle |w| = radius discretized with `nodes` equispaced points, or automatically.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub radius: f64,
    /// `None` selects 2·bandwidth + 8 nodes.
    pub nodes: Option<usize>,
}

impl Default for ContourSpec {
    fn default() -> Self {
        ContourSpec {
            radius: 1.0,
            nodes: Some(64),
        }
    }
}

impl ContourSpec {
    pub fn new(radius: f64, nodes: usize) -> Self {
        ContourSpec {
            radius,
            nodes: Some(nodes),
        }
    }

    pub fn auto() -> Self {
        ContourSpec {
            radius: 1.0,
            nodes: None,
        }
    }

    /// Node count for an integrand of the given bandwidth, or an error if too few.
    pub fn resolve(&self, bandwidth: usize) -> Result<usize> {
        let required = 2 * bandwidth + 2;
        match self.nodes {
            None => Ok(2 * bandwidth + 8),
            Some(n) if n >= required => Ok(n),
            Some(n) => Err(Error::TooFewNodes {
                nodes: n,
                bandwidth,
                required,
            }),
        }
    }

    pub fn nodes_on_circle(&self, n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|j| Complex64::from_polar(self.radius, 2.0 * PI * j as f64 / n as f64))
            .collect()
    }
}

/// (1/2πi)∮ g(w) dw by the trapezoid rule: (1/N) Σ g(w_j) w_j.
fn contour_integral(nodes: &[Complex64], g: impl Fn(Complex64) -> Complex64) -> Complex64 {
    let vals: Vec<Complex64> = nodes.iter().map(|&w| g(w) * w).collect();
    pairwise_sum(&vals) / nodes.len() as f64
}

/// a(x) = (1/2πi)∮ f dw, by quadrature.
pub fn penrose_a(f: &TwistorRep, pt: &R4Point, contour: &ContourSpec) -> Result<Complex64> {
    let n = contour.resolve(f.bandwidth())?;
    let nodes = contour.nodes_on_circle(n);
    Ok(contour_integral(&nodes, |w| f.eval(pt, w)))
}

/// Exact a = residue of f at w = 0.
pub fn penrose_a_exact(f: &TwistorRep) -> PolyField {
    f.w_expansion().remove(&-1).unwrap_or_default()
}

/// Exact F as a Laurent series in z, valid inside the contour.
pub fn cauchy_f_exact(f: &TwistorRep) -> ScalarSeries {
    let p = f.w_expansion();
    ScalarSeries::from_coeffs(p.into_iter().filter(|(j, _)| *j >= -1).map(|(j, pj)| {
        if j == -1 {
            (0, pj)
        } else {
            (j + 1, pj.scale(&Complex64::new(2.0, 0.0)))
        }
    }))
}

/// Exact F as a Laurent series in z, valid outside the contour.
pub fn cauchy_f_exterior_exact(f: &TwistorRep) -> ScalarSeries {
    let p = f.w_expansion();
    ScalarSeries::from_coeffs(p.into_iter().filter(|(j, _)| *j <= -1).map(|(j, pj)| {
        if j == -1 {
            (0, -pj)
        } else {
            (j + 1, pj.scale(&Complex64::new(-2.0, 0.0)))
        }
    }))
}

/// F(x, z) = (1/2πi)∮ (w+z)/(w−z) f dw by quadrature; z = ∞ gives −a(x).
pub fn cauchy_f(
    f: &TwistorRep,
    pt: &R4Point,
    z: SpectralPoint,
    contour: &ContourSpec,
) -> Result<Complex64> {
    let n = contour.resolve(f.bandwidth())?;
    let nodes = contour.nodes_on_circle(n);
    match z {
        SpectralPoint::Infinity => Ok(-contour_integral(&nodes, |w| f.eval(pt, w))),
        SpectralPoint::Finite(z) => {
            if (z.norm() - contour.radius).abs() <= 1e-12 * contour.radius {
                return Err(Error::OnContour);
            }
            Ok(contour_integral(&nodes, |w| (w + z) / (w - z) * f.eval(pt, w)))
        }
    }
}

/// Abelian patching matrix G(x, z) = exp(φ(x, z)τ₃).
#[derive(Debug, Clone, PartialEq)]
pub struct PatchingMatrix {
    pub phi: ScalarSeries,
}

impl PatchingMatrix {
    pub fn new(phi: ScalarSeries) -> Self {
        PatchingMatrix { phi }
    }

    pub fn identity() -> Self {
        PatchingMatrix {
            phi: ScalarSeries::zero(),
        }
    }

    /// φ = uv/z + (|u|² − |v|²) − z ūv̄.
    pub fn null_quadric() -> Self {
        PatchingMatrix::new(ScalarSeries::from_coeffs([
            (-1, PolyField::u() * PolyField::v()),
            (0, PolyField::null_quadric()),
            (1, -(PolyField::ubar() * PolyField::vbar())),
        ]))
    }

    pub fn phi_at(&self, x: &R4Point, z: Complex64) -> Complex64 {
        self.phi.evaluate(x, z)
    }

    pub fn eval(&self, x: &R4Point, z: Complex64) -> Matrix2 {
        exp_tau3(self.phi_at(x, z))
    }

    /// G(x, ·) at `n` equispaced points of the unit circle.
    pub fn samples(&self, x: &R4Point, n: usize) -> Vec<Matrix2> {
        let vals = self.phi.values_at(x);
        ContourSpec::new(1.0, n)
            .nodes_on_circle(n)
            .into_iter()
            .map(|z| exp_tau3(crate::series::eval_values(&vals, z, Complex64::new(0.0, 0.0))))
            .collect()
    }

    pub fn reality_defect(&self) -> f64 {
        self.phi.reality_defect()
    }

    pub fn is_annihilated(&self) -> bool {
        self.phi.is_annihilated()
    }

    /// sup over `n` unit-circle samples of ‖G*(z) − G(z)‖.
    pub fn star_defect(&self, x: &R4Point, n: usize) -> Result<f64> {
        let vals = self.phi.values_at(x);
        let g = (Annulus::punctured_plane(), |z: Complex64| {
            exp_tau3(crate::series::eval_values(&vals, z, Complex64::new(0.0, 0.0)))
        });
        let mut worst: f64 = 0.0;
        for z in ContourSpec::new(1.0, n).nodes_on_circle(n) {
            let star = star_loop(&g, SpectralPoint::Finite(z))?;
            worst = worst.max((star - crate::algebra::MatrixLoopFn::at(&g, z)).norm());
        }
        Ok(worst)
    }
}

/// G = exp[½(F + F*)τ₃] from a representative with real Penrose transform.
pub fn patching_from_rep(f: &TwistorRep) -> Result<PatchingMatrix> {
    let big_f = cauchy_f_exact(f);
    if !big_f.coeff(0).is_real() {
        return Err(Error::NotReal);
    }
    let phi = (big_f.clone() + big_f.star()).scale(Complex64::new(0.5, 0.0));
    let scale = phi.max_coeff();
    if !(phi.clone() - phi.star()).is_negligible(scale) {
        return Err(Error::NotReal);
    }
    Ok(PatchingMatrix::new(phi))
}

/// Residuals of the associated linear problem for a Laurent series Ψ:
/// ((∂_v̄ + z∂_u)Ψ + (A_v̄ + zA_u)Ψ, (∂_ū − z∂_v)Ψ + (A_ū − zA_v)Ψ).
pub fn alp_residual(psi: &MatrixSeries, conn: &ConnectionField) -> (MatrixSeries, MatrixSeries) {
    let first_op = MatrixSeries::from_coeffs([(0, conn.a_vbar.clone()), (1, conn.a_u.clone())]);
    let second_op =
        MatrixSeries::from_coeffs([(0, conn.a_ubar.clone()), (1, -conn.a_v.clone())]);
    let first = psi.derive(Var::Vbar) + psi.derive(Var::U).shift(1) + first_op.mul(psi);
    let second = psi.derive(Var::Ubar) - psi.derive(Var::V).shift(1) + second_op.mul(psi);
    (first, second)
}

/// The same residuals for Ψ = exp(½Fτ₃), right-multiplied by Ψ⁻¹ so they are
/// polynomial: ½(∂_v̄ + z∂_u)F·τ₃ + A_v̄ + zA_u and ½(∂_ū − z∂_v)F·τ₃ + A_ū − zA_v.
pub fn alp_residual_abelian(
    big_f: &ScalarSeries,
    conn: &ConnectionField,
) -> (MatrixSeries, MatrixSeries) {
    let half = Complex64::new(0.5, 0.0);
    let t3 = MatrixPolyField::tau3();
    let d1 = (big_f.derive(Var::Vbar) + big_f.derive(Var::U).shift(1)).scale(half);
    let d2 = (big_f.derive(Var::Ubar) - big_f.derive(Var::V).shift(1)).scale(half);
    let first = MatrixSeries::from_scalar(&d1, &t3)
        + MatrixSeries::from_coeffs([(0, conn.a_vbar.clone()), (1, conn.a_u.clone())]);
    let second = MatrixSeries::from_scalar(&d2, &t3)
        + MatrixSeries::from_coeffs([(0, conn.a_ubar.clone()), (1, -conn.a_v.clone())]);
    (first, second)
}

/// Quadrature and residue values of a at many points, in parallel.
pub fn penrose_sweep(
    f: &TwistorRep,
    points: &[R4Point],
    contour: &ContourSpec,
) -> Result<Vec<(Complex64, Complex64)>> {
    let exact = penrose_a_exact(f);
    points
        .par_iter()
        .map(|x| Ok((penrose_a(f, x, contour)?, exact.evaluate(x))))
        .collect()
}
