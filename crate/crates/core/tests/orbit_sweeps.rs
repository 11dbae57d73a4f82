mod common;

use common::{c, random_sl2c, rng};
use proptest::prelude::*;
use rand::Rng;
use sdym::algebra::{epsilon, mat_exp2, Matrix2};
use sdym::orbits::{
    act, classify_sl2c, classify_sl2r, decompose_minkowski, epsilon_image, invariant_i, ActionFlavor,
    OrbitTagC, OrbitTagR, Sheet,
};

fn random_sl2r(rng: &mut impl Rng, scale: f64) -> Matrix2 {
    let a = rng.gen_range(-scale..scale);
    let b = rng.gen_range(-scale..scale);
    let cc = rng.gen_range(-scale..scale);
    mat_exp2(&Matrix2::from_real(a, b, cc, -a))
}

#[test]
fn bilinear_identities_hold_for_random_elements() {
    let mut r = rng(41);
    for _ in 0..1000 {
        let g = random_sl2c(&mut r, 1.0);
        let i = invariant_i(&g).unwrap();
        let (u, v) = decompose_minkowski(&g).unwrap();
        assert!((u.norm2() + 0.5 * (i + 1.0)).abs() < 1e-9);
        assert!((v.norm2() + 0.5 * (i - 1.0)).abs() < 1e-9);
        assert!(u.dot(&v).abs() < 1e-9);
        assert!(i <= 1.0 + 1e-9);
        assert!(classify_sl2c(&g).is_ok());
    }
}

#[test]
fn invariant_and_class_survive_dagger_actions() {
    let mut r = rng(42);
    let fixed = [
        Matrix2::identity(),
        Matrix2::diag(c(0.0, 1.0), c(0.0, -1.0)),
        Matrix2::diag(
            num_complex::Complex64::from_polar(1.0, std::f64::consts::PI / 6.0),
            num_complex::Complex64::from_polar(1.0, -std::f64::consts::PI / 6.0),
        ),
    ];
    for k in 0..1000 {
        let g = fixed.get(k).copied().unwrap_or_else(|| random_sl2c(&mut r, 0.8));
        let h = random_sl2c(&mut r, 0.8);
        let moved = act(&h, &g, ActionFlavor::Dagger).unwrap();
        let (i0, i1) = (invariant_i(&g).unwrap(), invariant_i(&moved).unwrap());
        assert!((i0 - i1).abs() < 1e-9 * (1.0 + i0.abs()));
        let (c0, c1) = (classify_sl2c(&g).unwrap(), classify_sl2c(&moved).unwrap());
        assert_eq!(c0.tag, c1.tag, "{g:?} -> {moved:?}");
    }
}

#[test]
fn sheet_sign_is_preserved_in_timelike_regimes() {
    let mut r = rng(43);
    let seeds = [
        Matrix2::identity(),
        Matrix2::identity().scale_re(-1.0),
        Matrix2::diag(c(0.8, 0.6), c(0.8, -0.6)),
        Matrix2::diag(c(-0.8, 0.6), c(-0.8, -0.6)),
    ];
    for g in seeds {
        let (u, _) = decompose_minkowski(&g).unwrap();
        let sign = if u.t >= 0.0 { Sheet::Plus } else { Sheet::Minus };
        for _ in 0..250 {
            let h = random_sl2c(&mut r, 1.0);
            let (u1, _) = decompose_minkowski(&act(&h, &g, ActionFlavor::Dagger).unwrap()).unwrap();
            assert_eq!(if u1.t >= 0.0 { Sheet::Plus } else { Sheet::Minus }, sign);
        }
    }
}

#[test]
fn fixed_point_classes() {
    assert_eq!(classify_sl2c(&Matrix2::identity()).unwrap().tag, OrbitTagC::HermitianSheet(Sheet::Plus));
    assert_eq!(
        classify_sl2c(&Matrix2::diag(c(0.0, 1.0), c(0.0, -1.0))).unwrap().tag,
        OrbitTagC::SkewHermitian
    );
    let theta = std::f64::consts::PI / 6.0;
    let g = Matrix2::diag(c(theta.cos(), theta.sin()), c(theta.cos(), -theta.sin()));
    let cl = classify_sl2c(&g).unwrap();
    assert!((cl.invariant - 0.5).abs() < 1e-15);
    assert_eq!(cl.tag, OrbitTagC::HyperboloidBundle(Sheet::Plus));
    assert_eq!(classify_sl2r(&epsilon()).unwrap().tag, OrbitTagR::FixedPoint);
    assert_eq!(classify_sl2r(&Matrix2::identity()).unwrap().tag, OrbitTagR::TwoSheet(Sheet::Plus));
}

#[test]
fn transpose_action_preserves_alpha_and_class() {
    let mut r = rng(44);
    let seeds = [
        Matrix2::identity(),
        epsilon(),
        Matrix2::from_real(2.0, 0.0, 0.0, 0.5),
        Matrix2::from_real(1.0, 2.0, -1.0, -1.0),
        Matrix2::from_real(0.6, 0.8, -0.8, 0.6) * Matrix2::from_real(1.5, 0.0, 0.0, 1.0 / 1.5),
    ];
    for k in 0..1000 {
        let g = seeds[k % seeds.len()];
        let h = random_sl2r(&mut r, 0.8);
        assert!((epsilon_image(&h) - epsilon()).max_abs() < 1e-12 * h.max_abs().powi(2).max(1.0));
        let moved = act(&h, &g, ActionFlavor::Transpose).unwrap();
        let (c0, c1) = (classify_sl2r(&g).unwrap(), classify_sl2r(&moved).unwrap());
        assert!((c0.alpha - c1.alpha).abs() < 1e-12 * (1.0 + moved.max_abs()));
        assert_eq!(c0.tag, c1.tag);
        assert!((c1.u.norm2() - (c1.alpha * c1.alpha - 1.0)).abs() < 1e-9 * (1.0 + moved.max_abs().powi(2)));
    }
}

#[test]
fn invalid_inputs() {
    assert!(invariant_i(&Matrix2::identity().scale_re(1.1)).is_err());
    assert!(classify_sl2r(&Matrix2::diag(c(0.0, 1.0), c(0.0, -1.0))).is_err());
}

proptest! {
    #[test]
    fn no_element_exceeds_one(seed in any::<u64>(), scale in 0.1f64..2.0) {
        let g = random_sl2c(&mut rng(seed), scale);
        prop_assert!(invariant_i(&g).unwrap() <= 1.0 + 1e-9);
    }

    #[test]
    fn boundary_flag_only_near_boundaries(seed in any::<u64>()) {
        let g = random_sl2c(&mut rng(seed), 1.0);
        let cl = classify_sl2c(&g).unwrap();
        if cl.boundary {
            prop_assert!((cl.invariant.abs() - 1.0).abs() <= 1e-8);
        }
    }
}
