//! Cubic lattices in R⁴ and centered finite differences on them.
//!
//! Derivative convention, fixed for the whole crate:
//! ∂_u = ½(∂_t − i∂_x), ∂_ū = ½(∂_t + i∂_x), ∂_v = ½(∂_y + i∂_z), ∂_v̄ = ½(∂_y − i∂_z).

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::Matrix2;
use crate::error::{Error, Result};
use crate::polyfield::{R4Point, Var};

/// A lattice of `points`⁴ sites with spacing `h`, centered at `center`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub center: R4Point,
    pub points: usize,
    pub h: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            center: R4Point::ORIGIN,
            points: 9,
            h: 0.1,
        }
    }
}

impl GridSpec {
    pub fn new(center: R4Point, points: usize, h: f64) -> Self {
        GridSpec { center, points, h }
    }

    pub fn validate(&self) -> Result<()> {
        if self.points < 3 {
            return Err(Error::GridTooSmall {
                min: 3,
                got: self.points,
            });
        }
        Ok(())
    }

    /// Half-width of the lattice along each axis.
    pub fn extent(&self) -> f64 {
        (self.points as f64 - 1.0) * 0.5 * self.h
    }

    pub fn len(&self) -> usize {
        self.points.pow(4)
    }

    pub fn is_empty(&self) -> bool {
        self.points == 0
    }

    pub fn index(&self, idx: [usize; 4]) -> usize {
        let n = self.points;
        ((idx[0] * n + idx[1]) * n + idx[2]) * n + idx[3]
    }

    pub fn multi_index(&self, mut flat: usize) -> [usize; 4] {
        let n = self.points;
        let mut idx = [0; 4];
        for k in (0..4).rev() {
            idx[k] = flat % n;
            flat /= n;
        }
        idx
    }

    pub fn point(&self, idx: [usize; 4]) -> R4Point {
        let off = (self.points as f64 - 1.0) * 0.5;
        let c = self.center.to_array();
        let mut a = [0.0; 4];
        for k in 0..4 {
            a[k] = c[k] + (idx[k] as f64 - off) * self.h;
        }
        R4Point::from_array(a)
    }

    pub fn points(&self) -> Vec<R4Point> {
        (0..self.len()).map(|i| self.point(self.multi_index(i))).collect()
    }

    /// Sites at least `margin` steps from every face.
    pub fn interior(&self, margin: usize) -> Vec<[usize; 4]> {
        let n = self.points;
        if n <= 2 * margin {
            return Vec::new();
        }
        (0..self.len())
            .map(|i| self.multi_index(i))
            .filter(|idx| idx.iter().all(|&k| k >= margin && k < n - margin))
            .collect()
    }

    /// Sample a field at every site, in parallel, in lattice order.
    pub fn sample<T: Send>(&self, f: impl Fn(&R4Point) -> T + Sync) -> Vec<T> {
        (0..self.len())
            .into_par_iter()
            .map(|i| f(&self.point(self.multi_index(i))))
            .collect()
    }
}

/// Maximum of a residual norm over a lattice, with its location.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridResidual {
    pub component: String,
    pub max_residual: f64,
    pub argmax_point: Option<[f64; 4]>,
}

impl GridResidual {
    /// Reduce (point, value) pairs; ties keep the first in lattice order.
    pub fn from_values<I: IntoIterator<Item = (R4Point, f64)>>(component: &str, it: I) -> Self {
        let mut best: Option<(R4Point, f64)> = None;
        for (p, v) in it {
            let better = match best {
                None => true,
                Some((_, b)) => v > b || (v.is_nan() && !b.is_nan()),
            };
            if better {
                best = Some((p, v));
            }
        }
        GridResidual {
            component: component.to_string(),
            max_residual: best.map(|b| b.1).unwrap_or(0.0),
            argmax_point: best.map(|b| b.0.to_array()),
        }
    }
}

/// Matrix values on a lattice; `None` marks excised sites.
#[derive(Debug, Clone)]
pub struct LatticeField {
    pub grid: GridSpec,
    pub values: Vec<Option<Matrix2>>,
}

impl LatticeField {
    pub fn sample(grid: GridSpec, f: impl Fn(&R4Point) -> Option<Matrix2> + Sync) -> Self {
        LatticeField {
            grid,
            values: grid.sample(f),
        }
    }

    pub fn get(&self, idx: [usize; 4]) -> Option<Matrix2> {
        self.values[self.grid.index(idx)]
    }

    fn neighbour(&self, idx: [usize; 4], axis: usize, step: isize) -> Option<Matrix2> {
        let mut j = idx;
        let k = j[axis] as isize + step;
        if k < 0 || k >= self.grid.points as isize {
            return None;
        }
        j[axis] = k as usize;
        self.get(j)
    }

    /// Centered first difference along a Cartesian axis.
    pub fn diff(&self, idx: [usize; 4], axis: usize) -> Option<Matrix2> {
        let plus = self.neighbour(idx, axis, 1)?;
        let minus = self.neighbour(idx, axis, -1)?;
        Some((plus - minus).scale_re(0.5 / self.grid.h))
    }

    /// Centered second difference along a Cartesian axis.
    pub fn diff2(&self, idx: [usize; 4], axis: usize) -> Option<Matrix2> {
        let plus = self.neighbour(idx, axis, 1)?;
        let minus = self.neighbour(idx, axis, -1)?;
        let mid = self.get(idx)?;
        Some((plus + minus - mid.scale_re(2.0)).scale_re(1.0 / (self.grid.h * self.grid.h)))
    }

    /// Complex derivative ∂_var by centered differences.
    pub fn complex_diff(&self, idx: [usize; 4], var: Var) -> Option<Matrix2> {
        let (a, b, sign) = complex_axes(var);
        let da = self.diff(idx, a)?;
        let db = self.diff(idx, b)?;
        Some((da + db.scale(Complex64::new(0.0, sign))).scale_re(0.5))
    }

    /// ∂_u∂_ū = ¼(∂_t² + ∂_x²) for `first = U`, ∂_v∂_v̄ = ¼(∂_y² + ∂_z²) for `first = V`.
    pub fn mixed_laplacian(&self, idx: [usize; 4], first: Var) -> Option<Matrix2> {
        let (a, b) = match first {
            Var::U | Var::Ubar => (0, 1),
            Var::V | Var::Vbar => (2, 3),
        };
        Some((self.diff2(idx, a)? + self.diff2(idx, b)?).scale_re(0.25))
    }
}

/// (real axis, imaginary axis, sign of i) so that ∂_var = ½(∂_a + i·sign·∂_b).
fn complex_axes(var: Var) -> (usize, usize, f64) {
    match var {
        Var::U => (0, 1, -1.0),
        Var::Ubar => (0, 1, 1.0),
        Var::V => (2, 3, 1.0),
        Var::Vbar => (2, 3, -1.0),
    }
}

/// Complex derivative of a pointwise field by centered differences with step h.
pub fn fd_complex_derivative(
    f: &dyn Fn(&R4Point) -> Complex64,
    x: &R4Point,
    var: Var,
    h: f64,
) -> Complex64 {
    let (a, b, sign) = complex_axes(var);
    let da = (f(&x.shifted(a, h)) - f(&x.shifted(a, -h))) / (2.0 * h);
    let db = (f(&x.shifted(b, h)) - f(&x.shifted(b, -h))) / (2.0 * h);
    (da + Complex64::new(0.0, sign) * db) * 0.5
}

/// Flat Laplacian Σ ∂²/∂x_k² by centered differences.
pub fn fd_laplacian(f: &dyn Fn(&R4Point) -> Complex64, x: &R4Point, h: f64) -> Complex64 {
    let mid = f(x);
    (0..4)
        .map(|k| (f(&x.shifted(k, h)) + f(&x.shifted(k, -h)) - mid * 2.0) / (h * h))
        .sum()
}

/// Pairwise (cascade) summation, reproducible for a fixed input order.
pub fn pairwise_sum(values: &[Complex64]) -> Complex64 {
    match values.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => values[0],
        n if n <= 8 => values.iter().sum(),
        n => {
            let (a, b) = values.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

/// Pairwise summation of matrices.
pub fn pairwise_sum_matrix(values: &[Matrix2]) -> Matrix2 {
    match values.len() {
        0 => Matrix2::zero(),
        1 => values[0],
        n if n <= 8 => values.iter().copied().sum(),
        n => {
            let (a, b) = values.split_at(n / 2);
            pairwise_sum_matrix(a) + pairwise_sum_matrix(b)
        }
    }
}
