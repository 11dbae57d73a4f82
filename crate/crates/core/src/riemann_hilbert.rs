//! Birkhoff factorization G = Ψ∞⁻¹Ψ₀ of matrix loops on the unit circle and the
//! patching-matrix → J-function → Yang–Pohlmeyer verification pipeline.
//!
//! Factors are normalized by Ψ∞(∞) = Id, so J = Ψ₀(0).

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::Matrix2;
use crate::connection::{exp_tau3, yang_pohlmeyer_lattice};
use crate::error::{Error, Result};
use crate::grid::{pairwise_sum_matrix, GridResidual, GridSpec, LatticeField};
use crate::polyfield::R4Point;
use crate::series::ScalarSeries;
use crate::twistor::PatchingMatrix;

/// Conditioning threshold above which a split is treated as a jumping point.
pub const MAX_CONDITION: f64 = 1e12;

/// Unit-determinant tolerance for loop samples.
pub const DET_TOLERANCE: f64 = 1e-10;

/// k-th of n equispaced points on the unit circle.
pub fn circle_node(k: usize, n: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)
}

/// A matrix loop sampled at the N-th roots of unity.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixLoop {
    samples: Vec<Matrix2>,
}

impl MatrixLoop {
    /// Samples in node order; rejects non-finite or non-unimodular values.
    pub fn new(samples: Vec<Matrix2>) -> Result<Self> {
        for (k, m) in samples.iter().enumerate() {
            if !m.is_finite() {
                return Err(Error::Shape(format!("non-finite sample at node {k}")));
            }
            let det = m.det();
            if (det - 1.0).norm() > DET_TOLERANCE {
                return Err(Error::NotUnimodular(format!("{det} at node {k}")));
            }
        }
        Ok(MatrixLoop { samples })
    }

    pub fn from_fn(n: usize, g: impl Fn(Complex64) -> Matrix2) -> Result<Self> {
        Self::new((0..n).map(|k| g(circle_node(k, n))).collect())
    }

    /// Samples given as (node index, value) pairs in any order.
    pub fn from_indexed(n: usize, pairs: &[(usize, Matrix2)]) -> Result<Self> {
        let mut slots: Vec<Option<Matrix2>> = vec![None; n];
        for &(k, m) in pairs {
            let slot = slots
                .get_mut(k)
                .ok_or_else(|| Error::Shape(format!("node index {k} out of range {n}")))?;
            if slot.replace(m).is_some() {
                return Err(Error::Shape(format!("node index {k} given twice")));
            }
        }
        let samples = slots
            .into_iter()
            .enumerate()
            .map(|(k, s)| s.ok_or_else(|| Error::Shape(format!("node index {k} missing"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(samples)
    }

    pub fn samples(&self) -> &[Matrix2] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn nodes(&self) -> Vec<Complex64> {
        let n = self.len();
        (0..n).map(|k| circle_node(k, n)).collect()
    }
}

/// Finitely many Laurent coefficients of a matrix loop.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LaurentBand {
    pub coeffs: BTreeMap<i32, Matrix2>,
}

impl LaurentBand {
    pub fn identity() -> Self {
        LaurentBand {
            coeffs: BTreeMap::from([(0, Matrix2::identity())]),
        }
    }

    pub fn coeff(&self, n: i32) -> Matrix2 {
        self.coeffs.get(&n).copied().unwrap_or_default()
    }

    /// Largest |n| stored.
    pub fn band(&self) -> usize {
        self.coeffs
            .keys()
            .map(|n| n.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, z: Complex64) -> Matrix2 {
        self.coeffs
            .iter()
            .fold(Matrix2::zero(), |acc, (&n, &c)| acc + c * z.powi(n))
    }

    /// Sup over the loop's nodes of ‖band(z_j) − L_j‖.
    pub fn reconstruction_residual(&self, lp: &MatrixLoop) -> f64 {
        lp.nodes()
            .iter()
            .zip(lp.samples())
            .map(|(&z, s)| (self.eval(z) - *s).norm())
            .fold(0.0, f64::max)
    }
}

/// Discrete Fourier fit of a loop.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentFit {
    pub band: LaurentBand,
    pub reconstruction_residual: f64,
    /// Set when a coefficient at |n| = band exceeds 1e−8.
    pub aliasing_warning: bool,
}

/// coeff_n = (1/S) Σ_j L_j ω^{−nj} for |n| ≤ `band`.
pub fn laurent_from_samples(lp: &MatrixLoop, band: usize) -> Result<LaurentFit> {
    let s = lp.len();
    let required = 2 * band + 1;
    if s < required {
        return Err(Error::TooFewSamples {
            samples: s,
            band,
            required,
        });
    }
    let b = band as i32;
    let coeffs: BTreeMap<i32, Matrix2> = (-b..=b)
        .map(|n| {
            let terms: Vec<Matrix2> = lp
                .samples()
                .iter()
                .enumerate()
                .map(|(j, m)| {
                    // ω^{−nj} with the exponent reduced mod S for accuracy.
                    let k = (-(n as i64) * j as i64).rem_euclid(s as i64) as usize;
                    *m * circle_node(k, s)
                })
                .collect();
            (n, pairwise_sum_matrix(&terms).scale_re(1.0 / s as f64))
        })
        .filter(|(_, c)| c.max_abs() > 0.0)
        .collect();
    let band_out = LaurentBand { coeffs };
    let aliasing_warning = [-b, b]
        .iter()
        .any(|&n| band_out.coeff(n).max_abs() > 1e-8);
    Ok(LaurentFit {
        reconstruction_residual: band_out.reconstruction_residual(lp),
        band: band_out,
        aliasing_warning,
    })
}

/// Normalized Birkhoff factors with Ψ∞(∞) = Id.
#[derive(Debug, Clone, PartialEq)]
pub struct BirkhoffFactors {
    /// Coefficients n ∈ [0, ·].
    pub psi0: LaurentBand,
    /// Coefficients n ∈ [−M, 0], with n = 0 the identity.
    pub psi_inf: LaurentBand,
    /// Sup over samples of ‖Ψ∞G − Ψ₀‖.
    pub residual: f64,
    /// Condition number of the block-Toeplitz system (1 when M = 0).
    pub condition: f64,
}

fn to_dmatrix(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex64) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, f)
}

/// Split G = Ψ∞⁻¹Ψ₀ by solving [Ψ∞G]_n = 0 for n ∈ [−M, −1].
///
/// The residual is measured on `lp` when given, otherwise on 4(M + band) + 8
/// equispaced points of the reconstructed loop.
pub fn birkhoff_split(
    g: &LaurentBand,
    m: usize,
    lp: Option<&MatrixLoop>,
) -> Result<BirkhoffFactors> {
    let mi = m as i32;
    let mut q: Vec<Matrix2> = vec![Matrix2::identity()];
    let mut condition = 1.0;
    if m > 0 {
        // Row-vector system Q·T = −R, Q = [q_{−1} … q_{−M}], transposed for the solver:
        // rows of Tᵀ index (n, column of G), columns index (k, row of q).
        let dim = 2 * m;
        let t = to_dmatrix(dim, dim, |row, col| {
            // Q·T: entry (i, (n, j)) = Σ_{k, l} q_{−k}[i, l] G_{n+k}[l, j].
            // Transposed: Tᵀ[(n, j), (k, l)] = G_{n+k}[l, j].
            let (ni, j) = (row / 2, row % 2);
            let (ki, l) = (col / 2, col % 2);
            let n = -mi + ni as i32;
            let k = ki as i32 + 1;
            g.coeff(n + k).get(l, j)
        });
        let rhs = to_dmatrix(dim, 2, |row, i| {
            let (ni, j) = (row / 2, row % 2);
            -g.coeff(-mi + ni as i32).get(i, j)
        });
        let sv = t.clone().svd(false, false).singular_values;
        let smax = sv.iter().cloned().fold(0.0, f64::max);
        let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
        if condition.is_nan() || condition > MAX_CONDITION {
            return Err(Error::JumpingPoint { condition });
        }
        let sol = t
            .col_piv_qr()
            .solve(&rhs)
            .ok_or(Error::JumpingPoint { condition })?;
        for k in 0..m {
            q.push(Matrix2::new(
                sol[(2 * k, 0)],
                sol[(2 * k + 1, 0)],
                sol[(2 * k, 1)],
                sol[(2 * k + 1, 1)],
            ));
        }
    }
    let psi_inf = LaurentBand {
        coeffs: q.iter().enumerate().map(|(k, c)| (-(k as i32), *c)).collect(),
    };
    let top = g.coeffs.keys().next_back().copied().unwrap_or(0).max(0);
    let psi0 = LaurentBand {
        coeffs: (0..=top)
            .map(|n| {
                let sum = q
                    .iter()
                    .enumerate()
                    .map(|(k, qk)| *qk * g.coeff(n + k as i32))
                    .sum::<Matrix2>();
                (n, sum)
            })
            .filter(|(_, c)| c.max_abs() > 0.0)
            .collect(),
    };
    let residual = match lp {
        Some(lp) => lp
            .nodes()
            .iter()
            .zip(lp.samples())
            .map(|(&z, s)| (psi_inf.eval(z) * *s - psi0.eval(z)).norm())
            .fold(0.0, f64::max),
        None => {
            let n = 4 * (m + g.band()) + 8;
            (0..n)
                .map(|k| {
                    let z = circle_node(k, n);
                    (psi_inf.eval(z) * g.eval(z) - psi0.eval(z)).norm()
                })
                .fold(0.0, f64::max)
        }
    };
    Ok(BirkhoffFactors {
        psi0,
        psi_inf,
        residual,
        condition,
    })
}

/// Sample, fit and split a loop in one step.
pub fn split_loop(lp: &MatrixLoop, m: usize) -> Result<BirkhoffFactors> {
    let band = (lp.len().saturating_sub(1)) / 2;
    let fit = laurent_from_samples(lp, band)?;
    birkhoff_split(&fit.band, m, Some(lp))
}

/// Exact split of exp(φτ₃): Ψ∞ = exp(−φ₋τ₃), Ψ₀ = exp((φ₀ + φ₊)τ₃).
#[derive(Debug, Clone, PartialEq)]
pub struct AbelianSplit {
    /// −φ₋ (strictly negative powers).
    pub inf_exponent: ScalarSeries,
    /// φ₀ + φ₊.
    pub zero_exponent: ScalarSeries,
}

pub fn abelian_split_exact(phi: &ScalarSeries) -> AbelianSplit {
    let (neg, zero, pos) = phi.split_signs();
    AbelianSplit {
        inf_exponent: -neg,
        zero_exponent: ScalarSeries::monomial(0, zero) + pos,
    }
}

/// Taylor coefficients e_0..e_order of exp(Σ_k p_k s^k) for a power series in s.
fn exp_power_series(p: &[Complex64], order: usize) -> Vec<Complex64> {
    let p0 = p.first().copied().unwrap_or_default();
    let mut e = vec![Complex64::new(0.0, 0.0); order + 1];
    e[0] = Complex64::new(1.0, 0.0);
    for n in 1..=order {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 1..=n.min(p.len().saturating_sub(1)) {
            acc += p[k] * e[n - k] * k as f64;
        }
        e[n] = acc / n as f64;
    }
    e.iter().map(|c| c * p0.exp()).collect()
}

impl AbelianSplit {
    pub fn psi0(&self, x: &R4Point, z: Complex64) -> Matrix2 {
        exp_tau3(self.zero_exponent.evaluate(x, z))
    }

    pub fn psi_inf(&self, x: &R4Point, z: Complex64) -> Matrix2 {
        exp_tau3(self.inf_exponent.evaluate(x, z))
    }

    pub fn j(&self, x: &R4Point) -> Matrix2 {
        exp_tau3(self.zero_exponent.coeff(0).evaluate(x))
    }

    /// Laurent coefficients of both factors at x, through order `order`.
    pub fn factors_at(&self, x: &R4Point, order: usize) -> BirkhoffFactors {
        let band_of = |s: &ScalarSeries, sign: i32| {
            let mut p = vec![Complex64::new(0.0, 0.0); order + 1];
            for (n, c) in s.values_at(x) {
                let k = (n * sign) as usize;
                if k <= order {
                    p[k] = c;
                }
            }
            let plus = exp_power_series(&p, order);
            let minus = exp_power_series(&p.iter().map(|c| -c).collect::<Vec<_>>(), order);
            LaurentBand {
                coeffs: (0..=order)
                    .map(|k| (sign * k as i32, Matrix2::diag(plus[k], minus[k])))
                    .filter(|(_, c)| c.max_abs() > 0.0)
                    .collect(),
            }
        };
        BirkhoffFactors {
            psi0: band_of(&self.zero_exponent, 1),
            psi_inf: band_of(&self.inf_exponent, -1),
            residual: 0.0,
            condition: 1.0,
        }
    }
}

/// J = Ψ₀(0) under the Ψ∞(∞) = Id normalization.
pub fn j_from_split(factors: &BirkhoffFactors) -> Matrix2 {
    factors.psi0.coeff(0)
}

/// A family of loops parametrized by points of R⁴.
pub trait LoopField: Sync {
    /// Values at the `n`-th roots of unity.
    fn samples(&self, x: &R4Point, n: usize) -> Vec<Matrix2>;

    fn loop_at(&self, x: &R4Point, n: usize) -> Result<MatrixLoop> {
        MatrixLoop::new(self.samples(x, n))
    }
}

impl LoopField for PatchingMatrix {
    fn samples(&self, x: &R4Point, n: usize) -> Vec<Matrix2> {
        PatchingMatrix::samples(self, x, n)
    }
}

/// A loop field given by a closure G(x, z).
pub struct FnLoopField<F>(pub F);

impl<F: Fn(&R4Point, Complex64) -> Matrix2 + Sync> LoopField for FnLoopField<F> {
    fn samples(&self, x: &R4Point, n: usize) -> Vec<Matrix2> {
        (0..n).map(|k| (self.0)(x, circle_node(k, n))).collect()
    }
}

/// Discretization parameters for [`connection_pipeline`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub grid: GridSpec,
    /// Circle samples per grid point.
    pub samples: usize,
    /// Truncation order of Ψ∞.
    pub truncation: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            grid: GridSpec::new(R4Point::ORIGIN, 7, 0.05),
            samples: 64,
            truncation: 16,
        }
    }
}

/// Outcome of [`connection_pipeline`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub yang_pohlmeyer: GridResidual,
    pub max_split_residual: f64,
    pub max_condition: f64,
    pub jumping_points: Vec<[f64; 4]>,
    /// Per-point splitting residuals in lattice order (jumping points omitted).
    pub split_residuals: Vec<([f64; 4], f64)>,
}

/// Split G(x, ·) at every grid point, set J = Ψ₀(0) and evaluate the
/// Yang–Pohlmeyer residual by finite differences.
pub fn connection_pipeline(field: &dyn LoopField, cfg: &PipelineConfig) -> Result<PipelineReport> {
    let grid = cfg.grid;
    grid.validate()?;
    let outcomes: Vec<Result<BirkhoffFactors>> = (0..grid.len())
        .into_par_iter()
        .map(|k| {
            let x = grid.point(grid.multi_index(k));
            let lp = field.loop_at(&x, cfg.samples)?;
            split_loop(&lp, cfg.truncation)
        })
        .collect();
    let mut values = Vec::with_capacity(grid.len());
    let mut jumping_points = Vec::new();
    let mut split_residuals = Vec::new();
    let mut max_split_residual: f64 = 0.0;
    let mut max_condition: f64 = 1.0;
    for (k, out) in outcomes.into_iter().enumerate() {
        let x = grid.point(grid.multi_index(k)).to_array();
        match out {
            Ok(f) => {
                max_split_residual = max_split_residual.max(f.residual);
                max_condition = max_condition.max(f.condition);
                split_residuals.push((x, f.residual));
                values.push(Some(j_from_split(&f)));
            }
            Err(Error::JumpingPoint { .. }) => {
                jumping_points.push(x);
                values.push(None);
            }
            Err(e) => return Err(e),
        }
    }
    if jumping_points.len() * 5 > grid.len() {
        return Err(Error::TooManyJumps {
            jumps: jumping_points.len(),
            total: grid.len(),
        });
    }
    let yang_pohlmeyer = yang_pohlmeyer_lattice(&LatticeField { grid, values })?;
    Ok(PipelineReport {
        yang_pohlmeyer,
        max_split_residual,
        max_condition,
        jumping_points,
        split_residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{mat_exp2, tau1, tau2, tau3};
    use crate::polyfield::PolyField;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_loop_coefficients() {
        let lp = MatrixLoop::from_fn(16, |_| mat_exp2(&tau3())).unwrap();
        let fit = laurent_from_samples(&lp, 4).unwrap();
        let e = std::f64::consts::E;
        assert!((fit.band.coeff(0) - Matrix2::diag(c(e, 0.0), c(1.0 / e, 0.0))).max_abs() < 1e-14);
        for n in [-4, -1, 1, 4] {
            assert!(fit.band.coeff(n).max_abs() < 1e-14);
        }
        assert!(!fit.aliasing_warning);
    }

    #[test]
    fn diagonal_monomial_loop() {
        let lp = MatrixLoop::from_fn(8, |z| Matrix2::diag(z, z.inv())).unwrap();
        let fit = laurent_from_samples(&lp, 3).unwrap();
        assert!((fit.band.coeff(1) - Matrix2::diag(c(1.0, 0.0), c(0.0, 0.0))).max_abs() < 1e-14);
        assert!((fit.band.coeff(-1) - Matrix2::diag(c(0.0, 0.0), c(1.0, 0.0))).max_abs() < 1e-14);
        assert!(fit.band.coeff(0).max_abs() < 1e-14);
        assert!(fit.reconstruction_residual < 1e-14);
    }

    #[test]
    fn too_few_samples() {
        let lp = MatrixLoop::from_fn(8, |_| Matrix2::identity()).unwrap();
        assert_eq!(
            laurent_from_samples(&lp, 4),
            Err(Error::TooFewSamples {
                samples: 8,
                band: 4,
                required: 9
            })
        );
    }

    #[test]
    fn aliasing_flagged() {
        let lp = MatrixLoop::from_fn(16, |z| mat_exp2(&tau3().scale(z * 3.0))).unwrap();
        assert!(laurent_from_samples(&lp, 2).unwrap().aliasing_warning);
    }

    #[test]
    fn non_unimodular_rejected() {
        assert!(matches!(
            MatrixLoop::from_fn(4, |_| Matrix2::identity().scale_re(2.0)),
            Err(Error::NotUnimodular(_))
        ));
    }

    #[test]
    fn identity_split() {
        let f = birkhoff_split(&LaurentBand::identity(), 8, None).unwrap();
        assert_eq!(f.residual, 0.0);
        assert_eq!(j_from_split(&f), Matrix2::identity());
        assert!((f.psi_inf.eval(c(0.3, 0.4)) - Matrix2::identity()).max_abs() < 1e-15);
    }

    #[test]
    fn abelian_split_matches_exact() {
        let phi = ScalarSeries::from_coeffs([
            (-1, PolyField::constant(c(0.3, 0.1))),
            (0, PolyField::constant(c(0.2, 0.0))),
            (1, PolyField::constant(c(-0.3, 0.1))),
        ]);
        let g = PatchingMatrix::new(phi.clone());
        let x = R4Point::ORIGIN;
        let lp = g.loop_at(&x, 64).unwrap();
        let f = split_loop(&lp, 24).unwrap();
        assert!(f.residual < 1e-10);
        let exact = abelian_split_exact(&phi).factors_at(&x, 24);
        for n in -24..=24 {
            assert!((f.psi0.coeff(n) - exact.psi0.coeff(n)).max_abs() < 1e-10, "psi0 {n}");
            assert!((f.psi_inf.coeff(n) - exact.psi_inf.coeff(n)).max_abs() < 1e-10, "psi_inf {n}");
        }
    }

    #[test]
    fn abelian_exact_examples() {
        let x = R4Point::new(1.0, 0.0, 0.0, 0.0);
        let s = abelian_split_exact(&PatchingMatrix::null_quadric().phi);
        let e = std::f64::consts::E;
        assert!((s.j(&x) - Matrix2::diag(c(e, 0.0), c(1.0 / e, 0.0))).max_abs() < 1e-14);
        let pure = abelian_split_exact(&ScalarSeries::monomial(-1, PolyField::one()));
        assert!(pure.zero_exponent.is_zero());
        let z = c(0.0, 2.0);
        assert!((pure.psi_inf(&x, z) - mat_exp2(&tau3().scale(-z.inv()))).max_abs() < 1e-14);
        let zero = abelian_split_exact(&ScalarSeries::zero());
        assert_eq!(zero.psi0(&x, z), Matrix2::identity());
    }

    #[test]
    fn j_from_reducible_patching() {
        let g = PatchingMatrix::null_quadric();
        let x = R4Point::new(1.0, 0.0, 0.0, 0.0);
        let f = split_loop(&g.loop_at(&x, 64).unwrap(), 16).unwrap();
        let e = std::f64::consts::E;
        assert!((j_from_split(&f) - Matrix2::diag(c(e, 0.0), c(1.0 / e, 0.0))).max_abs() < 1e-10);
    }

    #[test]
    fn near_identity_nonabelian() {
        let lp = MatrixLoop::from_fn(64, |z| {
            mat_exp2(&(tau1().scale(z) + tau2().scale(z.inv())).scale_re(0.05))
        })
        .unwrap();
        let f = split_loop(&lp, 24).unwrap();
        assert!(f.residual < 1e-10);
        assert!((f.psi0.eval(c(0.0, 0.0)).det() - 1.0).norm() < 1e-9);
    }

    #[test]
    fn shuffled_samples_give_same_factors() {
        let n = 32;
        let g = |z: Complex64| mat_exp2(&(tau1().scale(z * 0.1) + tau3().scale(z.inv() * 0.07)));
        let mut pairs: Vec<(usize, Matrix2)> = (0..n).map(|k| (k, g(circle_node(k, n)))).collect();
        let a = split_loop(&MatrixLoop::from_indexed(n, &pairs).unwrap(), 8).unwrap();
        pairs.reverse();
        pairs.swap(3, 17);
        let b = split_loop(&MatrixLoop::from_indexed(n, &pairs).unwrap(), 8).unwrap();
        assert_eq!(a, b);
        assert!(MatrixLoop::from_indexed(n, &pairs[1..]).is_err());
    }

    #[test]
    fn jumping_point_detected() {
        // G = diag(z, 1/z) has partial indices ±1: no normalized split exists.
        let lp = MatrixLoop::from_fn(32, |z| Matrix2::diag(z, z.inv())).unwrap();
        assert!(matches!(split_loop(&lp, 8), Err(Error::JumpingPoint { .. })));
    }

    #[test]
    fn pipeline_identity() {
        let cfg = PipelineConfig {
            grid: GridSpec::new(R4Point::ORIGIN, 3, 0.1),
            samples: 16,
            truncation: 4,
        };
        let r = connection_pipeline(&PatchingMatrix::identity(), &cfg).unwrap();
        assert_eq!(r.yang_pohlmeyer.max_residual, 0.0);
        assert!(r.jumping_points.is_empty());
        assert_eq!(r.split_residuals.len(), 81);
    }

    #[test]
    fn pipeline_too_many_jumps() {
        let field = FnLoopField(|_x: &R4Point, z: Complex64| Matrix2::diag(z, z.inv()));
        let cfg = PipelineConfig {
            grid: GridSpec::new(R4Point::ORIGIN, 3, 0.1),
            samples: 16,
            truncation: 4,
        };
        assert_eq!(
            connection_pipeline(&field, &cfg).unwrap_err(),
            Error::TooManyJumps { jumps: 81, total: 81 }
        );
    }
}
