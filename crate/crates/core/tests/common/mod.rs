#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sdym::algebra::{mat_exp2, tau1, tau2, tau3, Matrix2};
use sdym::polyfield::{Coeff, ExactPoly, Monomial, PolyField, R4Point};

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_point(rng: &mut impl Rng, scale: f64) -> R4Point {
    R4Point::new(
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
    )
}

pub fn random_complex(rng: &mut impl Rng, scale: f64) -> Complex64 {
    c(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
}

pub fn random_traceless(rng: &mut impl Rng, scale: f64) -> Matrix2 {
    tau1().scale(random_complex(rng, scale))
        + tau2().scale(random_complex(rng, scale))
        + tau3().scale(random_complex(rng, scale))
}

/// exp of a random traceless matrix, so det = 1.
pub fn random_sl2c(rng: &mut impl Rng, scale: f64) -> Matrix2 {
    mat_exp2(&random_traceless(rng, scale))
}

pub fn monomials_up_to(degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for a in 0..=degree {
        for b in 0..=degree - a {
            for cc in 0..=degree - a - b {
                for d in 0..=degree - a - b - cc {
                    out.push([a, b, cc, d]);
                }
            }
        }
    }
    out
}

/// A random real harmonic polynomial with exact Gaussian-rational coefficients.
pub fn random_real_harmonic(rng: &mut impl Rng, degree: u32) -> ExactPoly {
    let mons = monomials_up_to(degree);
    let mut p = ExactPoly::zero();
    for _ in 0..6 {
        let m = mons[rng.gen_range(0..mons.len())];
        let re = rng.gen_range(-5i64..=5);
        let im = rng.gen_range(-5i64..=5);
        let coeff = <sdym::polyfield::GaussRational as Coeff>::from_int(re)
            + <sdym::polyfield::GaussRational as Coeff>::imag_unit()
                * <sdym::polyfield::GaussRational as Coeff>::from_int(im);
        p.add_term(m, coeff);
    }
    p.real_part().harmonic_projection()
}

pub fn random_real_harmonic_float(rng: &mut impl Rng, degree: u32) -> PolyField {
    random_real_harmonic(rng, degree).to_float()
}
