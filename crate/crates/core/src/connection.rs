//! Gauge connections on open subsets of flat R⁴ and their verification.
//!
//! A connection is stored through its four complex components
//! (A_u, A_v, A_ū, A_v̄). Self-duality means F_uv = 0, F_uū + F_vv̄ = 0 and
//! F_ūv̄ = 0. The Yang J-function encodes a self-dual connection in the gauge
//! A_u = A_v = 0, A_ū = −J_ū J⁻¹, A_v̄ = −J_v̄ J⁻¹, where self-duality reduces to
//! ∂_u(J_ū J⁻¹) + ∂_v(J_v̄ J⁻¹) = 0.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::algebra::{mat_exp2, tau3, Matrix2};
use crate::error::{Error, Result};
use crate::grid::{GridResidual, GridSpec, LatticeField};
use crate::polyfield::{Coeff, MatrixPoly, MatrixPolyField, Poly, PolyField, R4Point, Var};

/// Four matrix-valued components of a connection.
#[derive(Debug, Clone, PartialEq)]
pub struct Connection<C: Coeff> {
    pub a_u: MatrixPoly<C>,
    pub a_v: MatrixPoly<C>,
    pub a_ubar: MatrixPoly<C>,
    pub a_vbar: MatrixPoly<C>,
}

pub type ConnectionField = Connection<Complex64>;

impl<C: Coeff> Connection<C> {
    pub fn flat() -> Self {
        Connection {
            a_u: MatrixPoly::zero(),
            a_v: MatrixPoly::zero(),
            a_ubar: MatrixPoly::zero(),
            a_vbar: MatrixPoly::zero(),
        }
    }

    pub fn component(&self, var: Var) -> &MatrixPoly<C> {
        match var {
            Var::U => &self.a_u,
            Var::V => &self.a_v,
            Var::Ubar => &self.a_ubar,
            Var::Vbar => &self.a_vbar,
        }
    }

    pub fn is_traceless(&self) -> bool {
        Var::ALL.iter().all(|v| self.component(*v).is_traceless())
    }

    /// A_ū = −(A_u)† and A_v̄ = −(A_v)†, i.e. the connection is su₂-valued.
    pub fn is_su2_real(&self) -> bool {
        let scale = Var::ALL
            .iter()
            .map(|v| self.component(*v).max_coeff())
            .fold(0.0, f64::max);
        (self.a_ubar.clone() + self.a_u.dagger()).is_negligible(scale)
            && (self.a_vbar.clone() + self.a_v.dagger()).is_negligible(scale)
    }

    pub fn to_float(&self) -> ConnectionField {
        Connection {
            a_u: self.a_u.to_float(),
            a_v: self.a_v.to_float(),
            a_ubar: self.a_ubar.to_float(),
            a_vbar: self.a_vbar.to_float(),
        }
    }
}

/// The reducible recipe A = ½(∂a − ∂̄a)τ₃ without validating `a`.
pub fn reducible_unchecked<C: Coeff>(a: &Poly<C>) -> Connection<C> {
    let t3 = MatrixPoly::<C>::tau3();
    let half = C::from_ratio(1, 2);
    let comp = |var: Var, sign: i64| {
        MatrixPoly::scalar_times(&a.derive(var).scale(&(half.clone() * C::from_int(sign))), &t3)
    };
    Connection {
        a_u: comp(Var::U, 1),
        a_v: comp(Var::V, 1),
        a_ubar: comp(Var::Ubar, -1),
        a_vbar: comp(Var::Vbar, -1),
    }
}

/// Reducible self-dual connection A = ½(∂a − ∂̄a)τ₃ from a real harmonic function.
pub fn reducible_from_harmonic<C: Coeff>(a: &Poly<C>) -> Result<Connection<C>> {
    let lap = a.laplacian();
    if !lap.is_negligible(a.max_coeff()) {
        return Err(Error::NotHarmonic(lap.len()));
    }
    if !a.is_real() {
        return Err(Error::NotReal);
    }
    Ok(reducible_unchecked(a))
}

/// F_ab = ∂_a A_b − ∂_b A_a + [A_a, A_b].
pub fn field_strength<C: Coeff>(conn: &Connection<C>, a: Var, b: Var) -> MatrixPoly<C> {
    let aa = conn.component(a);
    let ab = conn.component(b);
    ab.derive(a) - aa.derive(b) + aa.commutator(ab)
}

/// The six independent curvature components.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureSet<C: Coeff> {
    pub f_uv: MatrixPoly<C>,
    pub f_uubar: MatrixPoly<C>,
    pub f_vvbar: MatrixPoly<C>,
    pub f_ubarvbar: MatrixPoly<C>,
    pub f_uvbar: MatrixPoly<C>,
    pub f_vubar: MatrixPoly<C>,
}

impl<C: Coeff> CurvatureSet<C> {
    pub fn components(&self) -> [(&'static str, &MatrixPoly<C>); 6] {
        [
            ("F_uv", &self.f_uv),
            ("F_uubar", &self.f_uubar),
            ("F_vvbar", &self.f_vvbar),
            ("F_ubarvbar", &self.f_ubarvbar),
            ("F_uvbar", &self.f_uvbar),
            ("F_vubar", &self.f_vubar),
        ]
    }

    /// F_uv̄ = F_vū = 0 on top of self-duality.
    pub fn is_algebraically_special(&self) -> bool {
        self.f_uvbar.is_zero() && self.f_vubar.is_zero()
    }
}

pub fn curvature<C: Coeff>(conn: &Connection<C>) -> CurvatureSet<C> {
    CurvatureSet {
        f_uv: field_strength(conn, Var::U, Var::V),
        f_uubar: field_strength(conn, Var::U, Var::Ubar),
        f_vvbar: field_strength(conn, Var::V, Var::Vbar),
        f_ubarvbar: field_strength(conn, Var::Ubar, Var::Vbar),
        f_uvbar: field_strength(conn, Var::U, Var::Vbar),
        f_vubar: field_strength(conn, Var::V, Var::Ubar),
    }
}

/// (F_uv, F_uū + F_vv̄, F_ūv̄).
#[derive(Debug, Clone, PartialEq)]
pub struct SdymResidual<C: Coeff> {
    pub uv: MatrixPoly<C>,
    pub middle: MatrixPoly<C>,
    pub ubarvbar: MatrixPoly<C>,
}

impl<C: Coeff> SdymResidual<C> {
    pub fn is_zero(&self) -> bool {
        self.uv.is_zero() && self.middle.is_zero() && self.ubarvbar.is_zero()
    }

    pub fn max_coeff(&self) -> f64 {
        self.uv
            .max_coeff()
            .max(self.middle.max_coeff())
            .max(self.ubarvbar.max_coeff())
    }
}

pub fn sdym_residual<C: Coeff>(conn: &Connection<C>) -> SdymResidual<C> {
    let f = curvature(conn);
    SdymResidual {
        uv: f.f_uv,
        middle: f.f_uubar + f.f_vvbar,
        ubarvbar: f.f_ubarvbar,
    }
}

/// ∂_c η + [A_c, η] for c = u, v, ū, v̄ (in that order).
pub fn parallel_section_residual<C: Coeff>(
    conn: &Connection<C>,
    eta: &MatrixPoly<C>,
) -> [MatrixPoly<C>; 4] {
    [Var::U, Var::V, Var::Ubar, Var::Vbar]
        .map(|c| eta.derive(c) + conn.component(c).commutator(eta))
}

/// A pointwise-sampled matrix field.
pub type SampledField = Arc<dyn Fn(&R4Point) -> Matrix2 + Send + Sync>;

/// A Yang J-function.
#[derive(Clone)]
pub enum YangJ {
    /// Polynomial matrix with unit determinant.
    Polynomial(MatrixPolyField),
    /// J = exp(a τ₃).
    Abelian(PolyField),
    /// Values only; no exact mode.
    Sampled(SampledField),
}

impl fmt::Debug for YangJ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            YangJ::Polynomial(m) => f.debug_tuple("Polynomial").field(m).finish(),
            YangJ::Abelian(a) => f.debug_tuple("Abelian").field(a).finish(),
            YangJ::Sampled(_) => f.write_str("Sampled(..)"),
        }
    }
}

/// diag(e^a, e^{−a}).
pub fn exp_tau3(a: Complex64) -> Matrix2 {
    Matrix2::diag(a.exp(), (-a).exp())
}

impl YangJ {
    pub fn is_exact(&self) -> bool {
        !matches!(self, YangJ::Sampled(_))
    }

    pub fn eval(&self, x: &R4Point) -> Matrix2 {
        match self {
            YangJ::Polynomial(m) => m.evaluate(x),
            YangJ::Abelian(a) => exp_tau3(a.evaluate(x)),
            YangJ::Sampled(f) => f(x),
        }
    }

    pub fn sampled<F: Fn(&R4Point) -> Matrix2 + Send + Sync + 'static>(f: F) -> Self {
        YangJ::Sampled(Arc::new(f))
    }

    fn to_sampled(&self) -> SampledField {
        match self {
            YangJ::Sampled(f) => f.clone(),
            other => {
                let j = other.clone();
                Arc::new(move |x| j.eval(x))
            }
        }
    }
}

/// J = exp(aτ₃) for a real harmonic a.
pub fn yang_j_from_a(a: &PolyField) -> Result<YangJ> {
    let lap = a.laplacian();
    if !lap.is_negligible(a.max_coeff()) {
        return Err(Error::NotHarmonic(lap.len()));
    }
    if !a.is_real() {
        return Err(Error::NotReal);
    }
    Ok(YangJ::Abelian(a.clone()))
}

/// Pointwise residual J·A + A†·J of the parallel-section relation, sup over `points`.
pub fn ja_check(j: &YangJ, a_hol: &MatrixPolyField, points: &[R4Point]) -> Result<GridResidual> {
    if !a_hol.is_holomorphic() {
        return Err(Error::NotHolomorphic);
    }
    Ok(GridResidual::from_values(
        "JA+A†J",
        points.iter().map(|x| {
            let jx = j.eval(x);
            let ax = a_hol.evaluate(x);
            (*x, (jx * ax + ax.dagger() * jx).norm())
        }),
    ))
}

/// Exact J·A + A†·J for a polynomial J.
pub fn ja_check_exact(j: &MatrixPolyField, a_hol: &MatrixPolyField) -> Result<MatrixPolyField> {
    if !a_hol.is_holomorphic() {
        return Err(Error::NotHolomorphic);
    }
    Ok(j * a_hol + &a_hol.dagger() * j)
}

fn require_unit_det(j: &MatrixPolyField) -> Result<()> {
    let defect = j.det() - Poly::one();
    if defect.is_negligible(j.max_coeff()) {
        Ok(())
    } else {
        Err(Error::NotUnimodular(format!("{:?}", j.det())))
    }
}

/// Exact Yang–Pohlmeyer residual ∂_u(J_ū J⁻¹) + ∂_v(J_v̄ J⁻¹).
///
/// For J = exp(aτ₃) this is ¼Δa·τ₃; for polynomial J with det J = 1 the
/// inverse is the adjugate and the residual is again polynomial.
pub fn yang_pohlmeyer_exact(j: &YangJ) -> Result<MatrixPolyField> {
    match j {
        YangJ::Abelian(a) => {
            let quarter = Complex64::new(0.25, 0.0);
            Ok(MatrixPoly::scalar_times(
                &a.laplacian().scale(&quarter),
                &MatrixPolyField::tau3(),
            ))
        }
        YangJ::Polynomial(m) => {
            require_unit_det(m)?;
            let inv = m.adjugate();
            let term = |first: Var, second: Var| (&m.derive(second) * &inv).derive(first);
            Ok(term(Var::U, Var::Ubar) + term(Var::V, Var::Vbar))
        }
        YangJ::Sampled(_) => Err(Error::NoExactMode("sampled J-function")),
    }
}

const SINGULAR_DET: f64 = 1e-12;

fn sample_invertible(j: &YangJ, grid: &GridSpec) -> Result<LatticeField> {
    let field = LatticeField::sample(*grid, |x| Some(j.eval(x)));
    check_invertible(&field)?;
    Ok(field)
}

fn check_invertible(field: &LatticeField) -> Result<()> {
    for (k, v) in field.values.iter().enumerate() {
        if let Some(m) = v {
            if m.det().norm() < SINGULAR_DET || !m.is_finite() {
                let x = field.grid.point(field.grid.multi_index(k));
                return Err(Error::Singular(x.to_string()));
            }
        }
    }
    Ok(())
}

/// Pointwise Yang–Pohlmeyer residual matrix from lattice values, using
/// ∂_u(J_ū J⁻¹) = J_uū J⁻¹ − J_ū J⁻¹ J_u J⁻¹ and likewise for v.
pub fn yang_pohlmeyer_at(field: &LatticeField, idx: [usize; 4]) -> Option<Matrix2> {
    let j = field.get(idx)?;
    let inv = j.inverse()?;
    let mut total = Matrix2::zero();
    for (hol, anti) in [(Var::U, Var::Ubar), (Var::V, Var::Vbar)] {
        let d_hol = field.complex_diff(idx, hol)?;
        let d_anti = field.complex_diff(idx, anti)?;
        let mixed = field.mixed_laplacian(idx, hol)?;
        total += mixed * inv - d_anti * inv * d_hol * inv;
    }
    Some(total)
}

/// Sup-norm Yang–Pohlmeyer residual over lattice sites whose stencil is complete.
pub fn yang_pohlmeyer_lattice(field: &LatticeField) -> Result<GridResidual> {
    check_invertible(field)?;
    let grid = field.grid;
    Ok(GridResidual::from_values(
        "yang_pohlmeyer",
        grid.interior(1).into_iter().filter_map(|idx| {
            yang_pohlmeyer_at(field, idx).map(|r| (grid.point(idx), r.norm()))
        }),
    ))
}

/// Finite-difference Yang–Pohlmeyer residual on a lattice.
pub fn yang_pohlmeyer_residual(j: &YangJ, grid: &GridSpec) -> Result<GridResidual> {
    grid.validate()?;
    let field = sample_invertible(j, grid)?;
    yang_pohlmeyer_lattice(&field)
}

/// Sup-norm distance between the finite-difference residual and the exact one.
pub fn yang_pohlmeyer_truncation_error(j: &YangJ, grid: &GridSpec) -> Result<GridResidual> {
    grid.validate()?;
    let exact = yang_pohlmeyer_exact(j)?;
    let field = sample_invertible(j, grid)?;
    Ok(GridResidual::from_values(
        "yang_pohlmeyer_truncation",
        grid.interior(1).into_iter().filter_map(|idx| {
            let x = grid.point(idx);
            yang_pohlmeyer_at(&field, idx).map(|r| (x, (r - exact.evaluate(&x)).norm()))
        }),
    ))
}

/// Holomorphic gauge factor R(u, v) with det R = 1.
#[derive(Debug, Clone)]
pub enum GaugeFactor {
    Polynomial(MatrixPolyField),
    /// R = exp(b τ₃) with b holomorphic.
    Abelian(PolyField),
}

impl GaugeFactor {
    fn eval(&self, x: &R4Point) -> Matrix2 {
        match self {
            GaugeFactor::Polynomial(m) => m.evaluate(x),
            GaugeFactor::Abelian(b) => exp_tau3(b.evaluate(x)),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            GaugeFactor::Polynomial(m) => {
                if !m.is_holomorphic() {
                    return Err(Error::NotHolomorphic);
                }
                require_unit_det(m)
            }
            GaugeFactor::Abelian(b) => {
                if !MatrixPoly::scalar_times(b, &MatrixPolyField::identity()).is_holomorphic() {
                    return Err(Error::NotHolomorphic);
                }
                Ok(())
            }
        }
    }
}

/// J ↦ R(u, v)† J R(u, v).
pub fn gauge_transform_j(j: &YangJ, r: &GaugeFactor) -> Result<YangJ> {
    r.validate()?;
    Ok(match (j, r) {
        (YangJ::Abelian(a), GaugeFactor::Abelian(b)) => {
            YangJ::Abelian(a.clone() + b.clone() + b.conjugate())
        }
        (YangJ::Polynomial(m), GaugeFactor::Polynomial(rm)) => {
            YangJ::Polynomial(&(&rm.dagger() * m) * rm)
        }
        _ => {
            let jf = j.to_sampled();
            let r = r.clone();
            YangJ::sampled(move |x| {
                let rx = r.eval(x);
                rx.dagger() * jf(x) * rx
            })
        }
    })
}

/// A variation J̇ of a J-function.
#[derive(Clone)]
pub enum JDot {
    /// J̇ itself as a polynomial matrix.
    Polynomial(MatrixPolyField),
    /// The relative variation J⁻¹J̇ as a polynomial matrix.
    Relative(MatrixPolyField),
    Sampled(SampledField),
}

impl JDot {
    fn eval(&self, j: &Matrix2, x: &R4Point) -> Matrix2 {
        match self {
            JDot::Polynomial(m) => m.evaluate(x),
            JDot::Relative(m) => *j * m.evaluate(x),
            JDot::Sampled(f) => f(x),
        }
    }
}

fn is_diagonal(m: &MatrixPolyField) -> bool {
    m.entry(0, 1).is_zero() && m.entry(1, 0).is_zero()
}

/// Exact residual of ∂_u(J ∂_ū(J⁻¹J̇) J⁻¹) + ∂_v(J ∂_v̄(J⁻¹J̇) J⁻¹).
pub fn linearisation_exact(j: &YangJ, jdot: &JDot) -> Result<MatrixPolyField> {
    match (j, jdot) {
        (YangJ::Polynomial(m), JDot::Polynomial(_) | JDot::Relative(_)) => {
            require_unit_det(m)?;
            let inv = m.adjugate();
            let rel = match jdot {
                JDot::Polynomial(d) => &inv * d,
                JDot::Relative(r) => r.clone(),
                JDot::Sampled(_) => unreachable!(),
            };
            let term = |hol: Var, anti: Var| (&(m * &rel.derive(anti)) * &inv).derive(hol);
            Ok(term(Var::U, Var::Ubar) + term(Var::V, Var::Vbar))
        }
        (YangJ::Abelian(_), JDot::Relative(rel)) => {
            // Conjugation by exp(aτ₃) fixes diagonal matrices only.
            let d_ubar = rel.derive(Var::Ubar);
            let d_vbar = rel.derive(Var::Vbar);
            if !is_diagonal(&d_ubar) || !is_diagonal(&d_vbar) {
                return Err(Error::NoExactMode(
                    "off-diagonal relative variation of an abelian J",
                ));
            }
            Ok(d_ubar.derive(Var::U) + d_vbar.derive(Var::V))
        }
        _ => Err(Error::NoExactMode("linearised equation for this J / J̇ pair")),
    }
}

/// Finite-difference residual of the linearised Yang–Pohlmeyer equation.
///
/// Uses nested centered differences, so the residual is reported on sites
/// at least two steps from the lattice boundary.
pub fn linearisation_residual(j: &YangJ, jdot: &JDot, grid: &GridSpec) -> Result<GridResidual> {
    grid.validate()?;
    let jf = sample_invertible(j, grid)?;
    let g = *grid;
    let rel = LatticeField {
        grid: g,
        values: jf
            .values
            .iter()
            .enumerate()
            .map(|(k, jv)| {
                let jm = jv.expect("sampled everywhere");
                let x = g.point(g.multi_index(k));
                jm.inverse().map(|inv| inv * jdot.eval(&jm, &x))
            })
            .collect(),
    };
    let inner = |anti: Var| LatticeField {
        grid: g,
        values: (0..g.len())
            .map(|k| {
                let idx = g.multi_index(k);
                let d = rel.complex_diff(idx, anti)?;
                let jm = jf.get(idx)?;
                Some(jm * d * jm.inverse()?)
            })
            .collect(),
    };
    let k_ubar = inner(Var::Ubar);
    let k_vbar = inner(Var::Vbar);
    Ok(GridResidual::from_values(
        "linearisation",
        g.interior(2).into_iter().filter_map(|idx| {
            let r = k_ubar.complex_diff(idx, Var::U)? + k_vbar.complex_diff(idx, Var::V)?;
            Some((g.point(idx), r.norm()))
        }),
    ))
}

/// exp(M) applied to a constant traceless direction, convenience for callers.
pub fn exp_along(direction: &Matrix2, s: Complex64) -> Matrix2 {
    mat_exp2(&direction.scale(s))
}

/// J = exp(aτ₃) evaluated through the generic exponential (reference path).
pub fn abelian_j_reference(a: &PolyField, x: &R4Point) -> Matrix2 {
    exp_along(&tau3(), a.evaluate(x))
}
