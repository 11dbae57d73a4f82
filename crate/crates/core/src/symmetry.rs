//! Symmetry action on patching matrices and finite-type chains.
//!
//! The flow Ġ = −TG − GT* + ρ∞G + Gρ₀ is evaluated through its closed form
//! G_t = exp(−tT) G exp(−tT*) (ρ₀ = ρ∞ = 0). Finite-type chains a_{−d..d}
//! satisfy ∂_ū a_{n+1} = ∂_v a_n, ∂_v̄ a_{n+1} = −∂_u a_n, with
//! ∂_ū a_{−d} = ∂_v̄ a_{−d} = 0 and ∂_u a_d = ∂_v a_d = 0.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{mat_exp2, star_loop, Annulus, Matrix2, SpectralPoint};
use crate::error::{Error, Result};
use crate::polyfield::{Coeff, MatrixPoly, MatrixPolyField, Poly, PolyField, R4Point, Var};
use crate::riemann_hilbert::{circle_node, LoopField};
use crate::series::MatrixSeries;

/// A traceless Laurent band T(x, z) = Σ T_n(x) zⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorT {
    coeffs: MatrixSeries,
}

/// One entry of a GeneratorT coefficient in the JSON interchange format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorEntry {
    pub n: i32,
    pub entry: [usize; 2],
    pub poly: PolyField,
}

impl GeneratorT {
    pub fn new(coeffs: MatrixSeries) -> Result<Self> {
        if !coeffs.is_traceless() {
            return Err(Error::Shape("generator coefficients must be traceless".into()));
        }
        Ok(GeneratorT { coeffs })
    }

    pub fn zero() -> Self {
        GeneratorT {
            coeffs: MatrixSeries::zero(),
        }
    }

    /// −½φτ₃ for a scalar exponent series φ.
    pub fn abelian(phi: &crate::series::ScalarSeries, scale: f64) -> Self {
        let t3 = MatrixPolyField::tau3();
        GeneratorT {
            coeffs: MatrixSeries::from_scalar(phi, &t3).scale(Complex64::new(scale, 0.0)),
        }
    }

    /// T = Σ a_n zⁿ built from a finite-type chain.
    pub fn from_chain(chain: &FiniteTypeChain) -> Result<Self> {
        Self::new(MatrixSeries::from_coeffs(chain.iter().map(|(n, a)| (n, a.clone()))))
    }

    pub fn series(&self) -> &MatrixSeries {
        &self.coeffs
    }

    pub fn from_entries(entries: &[GeneratorEntry]) -> Result<Self> {
        let mut coeffs = MatrixSeries::zero();
        for e in entries {
            let [i, j] = e.entry;
            if i > 1 || j > 1 {
                return Err(Error::Shape(format!("matrix entry [{i}, {j}] out of range")));
            }
            let mut m = MatrixPolyField::zero();
            m.0[i][j] = e.poly.clone();
            coeffs = coeffs + MatrixSeries::monomial(e.n, m);
        }
        Self::new(coeffs)
    }

    pub fn to_entries(&self) -> Vec<GeneratorEntry> {
        let mut out = Vec::new();
        for (n, m) in self.coeffs.iter() {
            for i in 0..2 {
                for j in 0..2 {
                    if !m.0[i][j].is_zero() {
                        out.push(GeneratorEntry {
                            n,
                            entry: [i, j],
                            poly: m.0[i][j].clone(),
                        });
                    }
                }
            }
        }
        out
    }

    /// T* with (T*)_n = (−1)ⁿ (T_{−n})†.
    pub fn star(&self) -> GeneratorT {
        GeneratorT {
            coeffs: self.coeffs.star(),
        }
    }

    pub fn is_annihilated(&self) -> bool {
        self.coeffs.is_annihilated()
    }

    pub fn eval(&self, x: &R4Point, z: Complex64) -> Matrix2 {
        self.coeffs.evaluate(x, z)
    }

    pub fn add(&self, other: &Self) -> Self {
        GeneratorT {
            coeffs: self.coeffs.clone() + other.coeffs.clone(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        GeneratorT {
            coeffs: self.coeffs.scale(c),
        }
    }
}

/// An element g(x, z) of the loop group used in the action G ↦ g G g*.
#[derive(Debug, Clone, PartialEq)]
pub enum LoopElement {
    /// g = Σ g_n zⁿ.
    Band(MatrixSeries),
    /// g = exp(X) for a Laurent band X.
    Exp(MatrixSeries),
}

impl LoopElement {
    pub fn eval(&self, x: &R4Point, z: Complex64) -> Matrix2 {
        match self {
            LoopElement::Band(s) => s.evaluate(x, z),
            LoopElement::Exp(s) => mat_exp2(&s.evaluate(x, z)),
        }
    }

    /// True when no negative powers of z occur.
    pub fn is_inner(&self) -> bool {
        let s = match self {
            LoopElement::Band(s) | LoopElement::Exp(s) => s,
        };
        s.min_power().is_none_or(|n| n >= 0)
    }

    /// Product of two band elements.
    pub fn compose(&self, other: &Self) -> Option<Self> {
        match (self, other) {
            (LoopElement::Band(a), LoopElement::Band(b)) => Some(LoopElement::Band(a.mul(b))),
            _ => None,
        }
    }

    /// g*(z) = g(σ(z))†.
    pub fn star_at(&self, x: &R4Point, z: Complex64) -> Result<Matrix2> {
        let f = (Annulus::punctured_plane(), |w: Complex64| self.eval(x, w));
        star_loop(&f, SpectralPoint::Finite(z))
    }
}

/// The loop field g·G = g G g*.
pub struct CraneAction<'a> {
    pub g: &'a LoopElement,
    pub base: &'a dyn LoopField,
}

impl LoopField for CraneAction<'_> {
    fn samples(&self, x: &R4Point, n: usize) -> Vec<Matrix2> {
        self.base
            .samples(x, n)
            .into_iter()
            .enumerate()
            .map(|(k, gk)| {
                let z = circle_node(k, n);
                let star = self.g.star_at(x, z).expect("unit circle lies in ℂ*");
                self.g.eval(x, z) * gk * star
            })
            .collect()
    }
}

pub fn crane_action<'a>(g: &'a LoopElement, base: &'a dyn LoopField) -> CraneAction<'a> {
    CraneAction { g, base }
}

/// Flow parameter, generator and gauge terms of Ġ = −TG − GT* + ρ∞G + Gρ₀.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub t: f64,
    pub generator: GeneratorT,
    pub rho0: MatrixSeries,
    pub rho_inf: MatrixSeries,
}

impl FlowState {
    pub fn new(t: f64, generator: GeneratorT) -> Result<Self> {
        if !t.is_finite() {
            return Err(Error::Shape("flow parameter must be finite".into()));
        }
        Ok(FlowState {
            t,
            generator,
            rho0: MatrixSeries::zero(),
            rho_inf: MatrixSeries::zero(),
        })
    }
}

/// −TG − GT* + ρ∞G + Gρ₀ on the loop's circle samples at x.
pub fn gdot_rhs(
    g_samples: &[Matrix2],
    x: &R4Point,
    t: &GeneratorT,
    rho0: &MatrixSeries,
    rho_inf: &MatrixSeries,
) -> Vec<Matrix2> {
    let n = g_samples.len();
    let tstar = t.star();
    g_samples
        .iter()
        .enumerate()
        .map(|(k, &g)| {
            let z = circle_node(k, n);
            -(t.eval(x, z) * g) - g * tstar.eval(x, z)
                + rho_inf.evaluate(x, z) * g
                + g * rho0.evaluate(x, z)
        })
        .collect()
}

/// The loop field G_t = exp(−tT) G exp(−tT*).
pub struct FlowedLoop<'a> {
    pub base: &'a dyn LoopField,
    pub generator: &'a GeneratorT,
    pub t: f64,
    star: GeneratorT,
}

impl LoopField for FlowedLoop<'_> {
    fn samples(&self, x: &R4Point, n: usize) -> Vec<Matrix2> {
        let mt = Complex64::new(-self.t, 0.0);
        self.base
            .samples(x, n)
            .into_iter()
            .enumerate()
            .map(|(k, g)| {
                let z = circle_node(k, n);
                let left = mat_exp2(&self.generator.eval(x, z).scale(mt));
                let right = mat_exp2(&self.star.eval(x, z).scale(mt));
                left * g * right
            })
            .collect()
    }
}

pub fn flow_patching<'a>(base: &'a dyn LoopField, t_gen: &'a GeneratorT, t: f64) -> FlowedLoop<'a> {
    FlowedLoop {
        base,
        generator: t_gen,
        t,
        star: t_gen.star(),
    }
}

/// sup over points and `n` circle samples of ‖T T* − T* T‖.
pub fn commutator_check(t: &GeneratorT, points: &[R4Point], n: usize) -> f64 {
    let tstar = t.star();
    points
        .iter()
        .flat_map(|x| {
            let tstar = &tstar;
            (0..n).map(move |k| {
                let z = circle_node(k, n);
                t.eval(x, z).commutator(&tstar.eval(x, z)).norm()
            })
        })
        .fold(0.0, f64::max)
}

/// Coefficients a_{−d}, …, a_d of Φ = Σ a_n zⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteTypeChain {
    pub d: usize,
    coeffs: Vec<MatrixPolyField>,
}

impl FiniteTypeChain {
    pub fn new(coeffs: Vec<MatrixPolyField>) -> Result<Self> {
        if coeffs.len().is_multiple_of(2) {
            return Err(Error::Shape(format!(
                "a chain needs 2d + 1 coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(FiniteTypeChain {
            d: coeffs.len() / 2,
            coeffs,
        })
    }

    /// A scalar chain times a constant matrix direction.
    pub fn from_scalar(chain: &[PolyField], direction: &MatrixPolyField) -> Result<Self> {
        Self::new(
            chain
                .iter()
                .map(|p| MatrixPolyField::scalar_times(p, direction))
                .collect(),
        )
    }

    pub fn get(&self, n: i32) -> MatrixPolyField {
        let d = self.d as i32;
        if n < -d || n > d {
            return MatrixPolyField::zero();
        }
        self.coeffs[(n + d) as usize].clone()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, &MatrixPolyField)> {
        let d = self.d as i32;
        self.coeffs.iter().enumerate().map(move |(k, a)| (k as i32 - d, a))
    }

    /// Φ* = Φ coefficient-wise.
    pub fn is_real(&self) -> bool {
        let s = MatrixSeries::from_coeffs(self.iter().map(|(n, a)| (n, a.clone())));
        (s.clone() - s.star()).is_negligible(s.max_coeff())
    }
}

/// Labelled chain and boundary residuals as exact polynomials.
pub fn finite_type_residual(chain: &FiniteTypeChain) -> Vec<(String, MatrixPolyField)> {
    let d = chain.d as i32;
    let mut out = Vec::new();
    for n in -d..d {
        let (lo, hi) = (chain.get(n), chain.get(n + 1));
        out.push((
            format!("dubar a[{}] - dv a[{n}]", n + 1),
            hi.derive(Var::Ubar) - lo.derive(Var::V),
        ));
        out.push((
            format!("dvbar a[{}] + du a[{n}]", n + 1),
            hi.derive(Var::Vbar) + lo.derive(Var::U),
        ));
    }
    let bottom = chain.get(-d);
    let top = chain.get(d);
    out.push((format!("dubar a[{}]", -d), bottom.derive(Var::Ubar)));
    out.push((format!("dvbar a[{}]", -d), bottom.derive(Var::Vbar)));
    out.push((format!("du a[{d}]"), top.derive(Var::U)));
    out.push((format!("dv a[{d}]"), top.derive(Var::V)));
    out
}

/// True when every residual of [`finite_type_residual`] is negligible.
pub fn is_finite_type_chain(chain: &FiniteTypeChain) -> bool {
    let scale = chain.iter().map(|(_, a)| a.max_coeff()).fold(0.0, f64::max);
    finite_type_residual(chain)
        .iter()
        .all(|(_, r)| r.is_negligible(scale))
}

/// A particular X with ∂_ū X = ∂_v p and ∂_v̄ X = −∂_u p, free of pure-(u, v) monomials.
pub fn extend_scalar<C: Coeff>(p: &Poly<C>) -> Result<Poly<C>> {
    let lap = p.laplacian();
    if !lap.is_negligible(p.max_coeff()) {
        return Err(Error::NotHarmonic(lap.len()));
    }
    let pp = p.derive(Var::V);
    let qq = -p.derive(Var::U);
    let x1 = pp.integrate(Var::Ubar);
    let rest = (qq - x1.derive(Var::Vbar)).filter_terms(|m| m[Var::Ubar.index()] == 0);
    Ok(x1 + rest.integrate(Var::Vbar))
}

/// The backward step: Y with ∂_v Y = ∂_ū p and ∂_u Y = −∂_v̄ p, free of pure-(ū, v̄) monomials.
pub fn retract_scalar<C: Coeff>(p: &Poly<C>) -> Result<Poly<C>> {
    Ok(extend_scalar(&-p.conjugate())?.conjugate())
}

/// Entrywise [`extend_scalar`].
pub fn extend_chain<C: Coeff>(a: &MatrixPoly<C>) -> Result<MatrixPoly<C>> {
    let e = |i: usize, j: usize| extend_scalar(a.entry(i, j));
    Ok(MatrixPoly::new(e(0, 0)?, e(0, 1)?, e(1, 0)?, e(1, 1)?))
}

fn is_antiholomorphic<C: Coeff>(p: &Poly<C>) -> bool {
    let s = p.max_coeff();
    p.derive(Var::U).is_negligible(s) && p.derive(Var::V).is_negligible(s)
}

fn is_holomorphic_scalar<C: Coeff>(p: &Poly<C>) -> bool {
    let s = p.max_coeff();
    p.derive(Var::Ubar).is_negligible(s) && p.derive(Var::Vbar).is_negligible(s)
}

/// Result of [`type_of`].
#[derive(Debug, Clone, PartialEq)]
pub enum FiniteType<C: Coeff> {
    /// Minimal d with witness a_{−d..d}.
    Finite { d: usize, chain: Vec<Poly<C>> },
    /// No chain with d ≤ d_max was found.
    NotFiniteUpTo(usize),
}

/// Minimal type of a real harmonic polynomial, by repeated chain extension.
pub fn type_of<C: Coeff>(a: &Poly<C>, d_max: usize) -> Result<FiniteType<C>> {
    let mut forward = vec![a.clone()];
    while !is_antiholomorphic(forward.last().expect("nonempty")) {
        if forward.len() > d_max {
            return Ok(FiniteType::NotFiniteUpTo(d_max));
        }
        let next = extend_scalar(forward.last().expect("nonempty"))?;
        forward.push(next);
    }
    let mut backward = vec![a.clone()];
    while !is_holomorphic_scalar(backward.last().expect("nonempty")) {
        if backward.len() > d_max {
            return Ok(FiniteType::NotFiniteUpTo(d_max));
        }
        let next = retract_scalar(backward.last().expect("nonempty"))?;
        backward.push(next);
    }
    let d = (forward.len() - 1).max(backward.len() - 1);
    forward.resize(d + 1, Poly::zero());
    backward.resize(d + 1, Poly::zero());
    let chain: Vec<Poly<C>> = backward
        .into_iter()
        .skip(1)
        .rev()
        .chain(forward)
        .collect();
    Ok(FiniteType::Finite { d, chain })
}

/// Result of [`commuting_chain_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct CommutingReport {
    pub commuting: bool,
    /// Common direction α, scaled so that α² = Id when α is not nilpotent.
    pub direction: Option<Matrix2>,
    /// a₀ = s·α with s real and α Hermitian.
    pub reducible: bool,
}

fn normalize_direction(m: Matrix2) -> Matrix2 {
    let sq = (m * m).get(0, 0);
    let mut alpha = if sq.norm() > 1e-12 && (m * m - Matrix2::scalar(sq)).max_abs() < 1e-10 {
        m.scale(sq.sqrt().inv())
    } else {
        m.scale_re(1.0 / m.norm())
    };
    // Sign and phase: make the largest entry (first in row-major order) real positive.
    let entries = alpha.entries();
    let pivot = entries
        .iter()
        .copied()
        .fold(Complex64::new(0.0, 0.0), |best, e| {
            if e.norm() > best.norm() + 1e-12 {
                e
            } else {
                best
            }
        });
    if pivot.norm() > 0.0 {
        let phase = pivot / pivot.norm();
        alpha = alpha.scale(phase.inv());
        // α² = Id fixes α only up to sign; keep it real-scaled.
        if sq.norm() > 1e-12 {
            let check = (alpha * alpha).get(0, 0);
            if (check - 1.0).norm() > 1e-10 && (check + 1.0).norm() < 1e-10 {
                alpha = alpha.scale(Complex64::new(0.0, 1.0));
            }
        }
    }
    alpha
}

/// Pairwise commutators and, when they vanish, the common direction of the chain.
pub fn commuting_chain_check(chain: &FiniteTypeChain) -> CommutingReport {
    let items: Vec<&MatrixPolyField> = chain.iter().map(|(_, a)| a).collect();
    let scale = items.iter().map(|a| a.max_coeff()).fold(0.0, f64::max);
    let commuting = items.iter().enumerate().all(|(i, a)| {
        items[i + 1..]
            .iter()
            .all(|b| a.commutator(b).is_negligible(scale * scale))
    });
    if !commuting {
        return CommutingReport {
            commuting,
            direction: None,
            reducible: false,
        };
    }
    let vectors: Vec<[Complex64; 4]> = items
        .iter()
        .flat_map(|a| a.coefficient_matrices().into_values().collect::<Vec<_>>())
        .collect();
    if vectors.is_empty() {
        return CommutingReport {
            commuting,
            direction: None,
            reducible: false,
        };
    }
    let span = DMatrix::from_fn(4, vectors.len(), |r, c| vectors[c][r]);
    let svd = span.svd(true, false);
    let sv = &svd.singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let rank = sv.iter().filter(|s| **s > 1e-10 * smax.max(1.0)).count();
    if rank != 1 {
        return CommutingReport {
            commuting,
            direction: None,
            reducible: false,
        };
    }
    let u = svd.u.expect("requested");
    let k = sv.iter().enumerate().fold(0, |b, (i, s)| if *s > sv[b] { i } else { b });
    let col = u.column(k);
    let alpha = normalize_direction(Matrix2::from_entries([col[0], col[1], col[2], col[3]]));
    let a0 = chain.get(0);
    let alpha_poly = MatrixPolyField::from_matrix(&alpha);
    let norm2 = (alpha * alpha.dagger()).trace().re;
    let s = (&a0 * &alpha_poly.dagger())
        .trace()
        .scale(&Complex64::new(1.0 / norm2, 0.0));
    let rebuilt = MatrixPolyField::scalar_times(&s, &alpha_poly);
    let reducible = (a0 - rebuilt).is_negligible(scale)
        && s.is_real()
        && alpha.hermiticity_defect() < 1e-10;
    CommutingReport {
        commuting,
        direction: Some(alpha),
        reducible,
    }
}

/// A constant-in-x loop field, for flows from a fixed base.
pub struct ConstantLoop(pub Matrix2);

impl LoopField for ConstantLoop {
    fn samples(&self, _x: &R4Point, n: usize) -> Vec<Matrix2> {
        vec![self.0; n]
    }
}
