//! End-to-end acceptance run. Prints one line per criterion and exits nonzero
//! when any criterion fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sdym::algebra::{epsilon, mat_exp2, tau1, tau2, tau3, Matrix2, SpectralPoint};
use sdym::connection::{
    curvature, exp_tau3, ja_check, reducible_from_harmonic, sdym_residual, yang_j_from_a,
};
use sdym::grid::GridSpec;
use sdym::orbits::{
    act, classify_sl2c, classify_sl2r, decompose_minkowski, invariant_i, ActionFlavor, OrbitTagC,
    OrbitTagR, Sheet,
};
use sdym::polyfield::{Coeff, ExactPoly, GaussRational, MatrixPolyField, PolyField, R4Point};
use sdym::riemann_hilbert::{
    abelian_split_exact, circle_node, connection_pipeline, j_from_split, split_loop, LoopField,
    MatrixLoop, PipelineConfig,
};
use sdym::series::ScalarSeries;
use sdym::symmetry::{
    commuting_chain_check, finite_type_residual, flow_patching, is_finite_type_chain, type_of,
    ConstantLoop, FiniteType, FiniteTypeChain, GeneratorT,
};
use sdym::twistor::{
    cauchy_f, cauchy_f_exact, patching_from_rep, penrose_a, penrose_a_exact, ContourSpec,
    PatchingMatrix, TwistorRep,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($msg)+));
        }
    };
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_point(r: &mut impl Rng, scale: f64) -> R4Point {
    R4Point::new(
        r.gen_range(-scale..scale),
        r.gen_range(-scale..scale),
        r.gen_range(-scale..scale),
        r.gen_range(-scale..scale),
    )
}

fn random_complex(r: &mut impl Rng, scale: f64) -> Complex64 {
    c(r.gen_range(-scale..scale), r.gen_range(-scale..scale))
}

fn random_sl2c(r: &mut impl Rng, scale: f64) -> Matrix2 {
    let x = tau1().scale(random_complex(r, scale))
        + tau2().scale(random_complex(r, scale))
        + tau3().scale(random_complex(r, scale));
    mat_exp2(&x)
}

fn random_sl2r(r: &mut impl Rng, scale: f64) -> Matrix2 {
    let a = r.gen_range(-scale..scale);
    mat_exp2(&Matrix2::from_real(a, r.gen_range(-scale..scale), r.gen_range(-scale..scale), -a))
}

fn random_real_harmonic(r: &mut impl Rng, degree: u32) -> ExactPoly {
    let mut p = ExactPoly::zero();
    for _ in 0..6 {
        let mut m = [0u32; 4];
        for _ in 0..r.gen_range(0..=degree) {
            m[r.gen_range(0..4)] += 1;
        }
        let re = GaussRational::from_int(r.gen_range(-5..=5));
        let im = GaussRational::imag_unit() * GaussRational::from_int(r.gen_range(-5..=5));
        p.add_term(m, re + im);
    }
    p.real_part().harmonic_projection()
}

fn random_rep(r: &mut impl Rng) -> TwistorRep {
    let n = r.gen_range(1..=3);
    TwistorRep::from_terms((0..n).map(|_| {
        (
            (r.gen_range(0..=2), r.gen_range(0..=2), r.gen_range(-4..=0)),
            random_complex(r, 1.0),
        )
    }))
}

fn null_quadric_a() -> PolyField {
    PolyField::u() * PolyField::ubar() - PolyField::v() * PolyField::vbar()
}

fn max_diff(a: &[Matrix2], b: &[Matrix2]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (*x - *y).max_abs()).fold(0.0, f64::max)
}

fn reducible_construction() -> Outcome {
    let mut r = rng(101);
    let mut worst_float: f64 = 0.0;
    for k in 0..20 {
        let a = random_real_harmonic(&mut r, 1 + k % 6);
        let conn = reducible_from_harmonic(&a).map_err(|e| e.to_string())?;
        ensure!(sdym_residual(&conn).is_zero(), "nonzero exact residual for {a:?}");
        let float = reducible_from_harmonic(&a.to_float()).map_err(|e| e.to_string())?;
        worst_float = worst_float.max(sdym_residual(&float).max_coeff());
    }
    ensure!(worst_float <= 1e-12, "float residual {worst_float:e}");
    Ok(format!("20 exact zeros, float max {worst_float:.2e}"))
}

fn algebraically_special() -> Outcome {
    let a = null_quadric_a();
    let f = curvature(&reducible_from_harmonic(&a).map_err(|e| e.to_string())?);
    ensure!(f.f_uvbar.is_zero() && f.f_vubar.is_zero(), "F_uv̄ or F_vū nonzero");
    let j = yang_j_from_a(&a).map_err(|e| e.to_string())?;
    let mut r = rng(102);
    let points: Vec<R4Point> = (0..100).map(|_| random_point(&mut r, 1.0)).collect();
    let res = ja_check(&j, &MatrixPolyField::tau3().scale(&Complex64::i()), &points)
        .map_err(|e| e.to_string())?;
    ensure!(res.max_residual < 1e-12, "ja_check {:e}", res.max_residual);
    Ok(format!("ja_check max {:.2e}", res.max_residual))
}

fn penrose_transform() -> Outcome {
    let f = TwistorRep::null_quadric();
    ensure!(penrose_a_exact(&f) == null_quadric_a(), "residue mode mismatch");
    let contour = ContourSpec::new(1.0, 64);
    let mut r = rng(103);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let x = random_point(&mut r, 1.0);
        let q = penrose_a(&f, &x, &contour).map_err(|e| e.to_string())?;
        worst = worst.max((q - null_quadric_a().evaluate(&x)).norm());
    }
    ensure!(worst < 1e-12, "quadrature error {worst:e}");
    Ok(format!("quadrature max {worst:.2e}"))
}

fn cauchy_transform() -> Outcome {
    let f = TwistorRep::null_quadric();
    let big_f = cauchy_f_exact(&f);
    ensure!(big_f.coeff(0) == penrose_a_exact(&f), "F(x, 0) differs from a");
    let expected_f1 = (PolyField::ubar() * PolyField::vbar()).scale(&c(-2.0, 0.0));
    ensure!(big_f.coeff(1) == expected_f1 && big_f.band() == 1, "F coefficients differ");
    let g = patching_from_rep(&f).map_err(|e| e.to_string())?;
    let contour = ContourSpec::new(1.0, 64);
    let mut r = rng(104);
    let (mut worst_g, mut worst_f): (f64, f64) = (0.0, 0.0);
    for _ in 0..10 {
        let x = random_point(&mut r, 1.0);
        for k in 0..64 {
            let z = circle_node(k, 64);
            let closed = exp_tau3((x.u() - z * x.vbar()) * (x.v() + z * x.ubar()) / z);
            worst_g = worst_g.max((g.eval(&x, z) - closed).max_abs() / closed.max_abs());
        }
        let z = c(0.3, -0.2);
        let quad = cauchy_f(&f, &x, SpectralPoint::Finite(z), &contour).map_err(|e| e.to_string())?;
        worst_f = worst_f.max((quad - big_f.evaluate(&x, z)).norm());
    }
    ensure!(worst_g < 1e-12, "G closed form error {worst_g:e}");
    ensure!(worst_f < 1e-12, "F quadrature error {worst_f:e}");
    Ok(format!("G rel max {worst_g:.2e}, F quadrature max {worst_f:.2e}"))
}

fn annihilation_and_reality() -> Outcome {
    let mut r = rng(105);
    let mut patches = vec![PatchingMatrix::null_quadric()];
    while patches.len() < 20 {
        let f = random_rep(&mut r).realify();
        if let Ok(g) = patching_from_rep(&f) {
            if !g.phi.is_zero() {
                patches.push(g);
            }
        }
    }
    let mut worst: f64 = 0.0;
    for g in &patches {
        ensure!(g.is_annihilated(), "annihilation fails for {:?}", g.phi);
        for _ in 0..10 {
            let x = random_point(&mut r, 0.7);
            worst = worst.max(g.star_defect(&x, 64).map_err(|e| e.to_string())?);
        }
    }
    ensure!(worst < 1e-10, "star defect {worst:e}");
    Ok(format!("{} patching matrices, star defect max {worst:.2e}", patches.len()))
}

fn birkhoff_splitting() -> Outcome {
    let mut r = rng(106);
    let x = R4Point::ORIGIN;
    let (mut res_ab, mut err_ab): (f64, f64) = (0.0, 0.0);
    let mut count = 0;
    for band in 1..=8i32 {
        for _ in 0..(if band <= 2 { 2 } else { 1 }) {
            let phi = ScalarSeries::from_coeffs((-band..=band).map(|n| {
                (n, PolyField::constant(random_complex(&mut r, 0.5 * 0.3f64.powi(n.abs()))))
            }));
            let lp = MatrixLoop::from_fn(128, |z| exp_tau3(phi.evaluate(&x, z))).map_err(|e| e.to_string())?;
            let f = split_loop(&lp, 24).map_err(|e| e.to_string())?;
            let exact = abelian_split_exact(&phi);
            res_ab = res_ab.max(f.residual);
            err_ab = err_ab.max((j_from_split(&f) - exact.j(&x)).max_abs());
            for k in 0..16 {
                let z = circle_node(k, 16);
                err_ab = err_ab
                    .max((f.psi0.eval(z) - exact.psi0(&x, z)).max_abs())
                    .max((f.psi_inf.eval(z) - exact.psi_inf(&x, z)).max_abs());
            }
            count += 1;
        }
    }
    ensure!(res_ab < 1e-10 && err_ab < 1e-10, "abelian residual {res_ab:e}, error {err_ab:e}");
    let (mut res_na, mut det_na): (f64, f64) = (0.0, 0.0);
    for _ in 0..20 {
        let coeffs: Vec<(i32, Matrix2)> = (-3..=3)
            .map(|n| {
                let m = tau1().scale(random_complex(&mut r, 0.1))
                    + tau2().scale(random_complex(&mut r, 0.1))
                    + tau3().scale(random_complex(&mut r, 0.1));
                (n, m)
            })
            .collect();
        let lp = MatrixLoop::from_fn(64, |z| {
            mat_exp2(&coeffs.iter().map(|(n, m)| m.scale(z.powi(*n))).sum::<Matrix2>())
        })
        .map_err(|e| e.to_string())?;
        let f = split_loop(&lp, 24).map_err(|e| e.to_string())?;
        res_na = res_na.max(f.residual);
        for k in 0..16 {
            let z = circle_node(k, 16);
            det_na = det_na
                .max((f.psi0.eval(z).det() - 1.0).norm())
                .max((f.psi_inf.eval(z).det() - 1.0).norm());
        }
    }
    ensure!(res_na < 1e-10 && det_na < 1e-8, "non-abelian residual {res_na:e}, det {det_na:e}");
    Ok(format!(
        "{count} abelian (residual {res_ab:.2e}, error {err_ab:.2e}); 20 non-abelian (residual {res_na:.2e}, det {det_na:.2e})"
    ))
}

fn round_trip() -> Outcome {
    let g = PatchingMatrix::null_quadric();
    let t_gen = GeneratorT::abelian(&g.phi, -0.5);
    let identity = ConstantLoop(Matrix2::identity());
    let flowed = flow_patching(&identity, &t_gen, 1.0);
    let mut r = rng(107);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let x = random_point(&mut r, 1.0);
        let exact = g.samples(&x, 64);
        let scale = exact.iter().map(Matrix2::max_abs).fold(1.0, f64::max);
        worst = worst.max(max_diff(&flowed.samples(&x, 64), &exact) / scale);
    }
    ensure!(worst < 1e-12, "flowed patching differs by {worst:e}");
    let mut lines = Vec::new();
    for t in [0.25, 0.5, 1.0] {
        let at_t = flow_patching(&identity, &t_gen, t);
        let run = |h: f64| -> Result<f64, String> {
            let cfg = PipelineConfig {
                grid: GridSpec::new(R4Point::ORIGIN, 7, h),
                ..PipelineConfig::default()
            };
            let rep = connection_pipeline(&at_t, &cfg).map_err(|e| e.to_string())?;
            if !rep.jumping_points.is_empty() {
                return Err(format!("jumping points at t = {t}"));
            }
            Ok(rep.yang_pohlmeyer.max_residual)
        };
        let coarse = run(0.05)?;
        let fine = run(0.025)?;
        let ratio = coarse / fine;
        ensure!(coarse < 1e-2, "YP residual {coarse:e} at t = {t}");
        ensure!((3.5..=4.5).contains(&ratio), "ratio {ratio} at t = {t}");
        lines.push(format!("t={t}: YP {coarse:.2e}, ratio {ratio:.3}"));
    }
    Ok(format!("samples max {worst:.2e}; {}", lines.join("; ")))
}

fn finite_type() -> Outcome {
    let a = null_quadric_a();
    let chain = [
        PolyField::u() * PolyField::v(),
        a.clone(),
        (PolyField::ubar() * PolyField::vbar()).scale(&c(-1.0, 0.0)),
    ];
    let fc = FiniteTypeChain::from_scalar(&chain, &MatrixPolyField::tau3()).map_err(|e| e.to_string())?;
    ensure!(
        finite_type_residual(&fc).iter().all(|(_, p)| p.is_zero()),
        "chain residual nonzero"
    );
    ensure!(
        matches!(type_of(&a, 8).map_err(|e| e.to_string())?, FiniteType::Finite { d: 1, .. }),
        "type_of(|u|² − |v|²) is not 1"
    );
    let constant = FiniteTypeChain::new(vec![MatrixPolyField::tau3().scale(&c(0.4, 0.0))])
        .map_err(|e| e.to_string())?;
    ensure!(is_finite_type_chain(&constant), "d = 0 chain rejected");
    let g0 = mat_exp2(&constant.get(0).evaluate(&R4Point::ORIGIN));
    let mut r = rng(108);
    for _ in 0..10 {
        let g = mat_exp2(&constant.get(0).evaluate(&random_point(&mut r, 2.0)));
        ensure!(g == g0, "d = 0 chain gives a nonconstant G");
    }
    let report = commuting_chain_check(&fc);
    ensure!(report.commuting, "chain does not commute");
    let alpha = report.direction.ok_or("no common direction")?;
    ensure!((alpha - tau3()).max_abs() < 1e-12, "direction {alpha:?}");
    ensure!(report.reducible, "reducibility not flagged");
    Ok("chain exact, type 1, constant d = 0, α = τ₃, reducible".into())
}

fn orbits() -> Outcome {
    let mut r = rng(109);
    let (mut inv_drift, mut identity_defect, mut max_i): (f64, f64, f64) = (0.0, 0.0, f64::MIN);
    for _ in 0..1000 {
        let g = random_sl2c(&mut r, 1.0);
        let h = random_sl2c(&mut r, 0.8);
        let i = invariant_i(&g).map_err(|e| e.to_string())?;
        let moved = act(&h, &g, ActionFlavor::Dagger).map_err(|e| e.to_string())?;
        let i1 = invariant_i(&moved).map_err(|e| e.to_string())?;
        inv_drift = inv_drift.max((i - i1).abs() / (1.0 + i.abs()));
        let (u, v) = decompose_minkowski(&g).map_err(|e| e.to_string())?;
        identity_defect = identity_defect
            .max((u.norm2() + 0.5 * (i + 1.0)).abs())
            .max((v.norm2() + 0.5 * (i - 1.0)).abs())
            .max(u.dot(&v).abs());
        max_i = max_i.max(i).max(i1);
    }
    ensure!(inv_drift < 1e-9, "invariant drift {inv_drift:e}");
    ensure!(identity_defect < 1e-9, "identity defect {identity_defect:e}");
    ensure!(max_i <= 1.0 + 1e-9, "I = {max_i} exceeds 1");

    let cls = |g: Matrix2| classify_sl2c(&g).map_err(|e| e.to_string());
    let id = cls(Matrix2::identity())?;
    ensure!(
        id.invariant == 1.0 && id.tag == OrbitTagC::HermitianSheet(Sheet::Plus),
        "Id classified as {id:?}"
    );
    let skew = cls(Matrix2::diag(c(0.0, 1.0), c(0.0, -1.0)))?;
    ensure!(
        (skew.invariant + 1.0).abs() < 1e-15 && skew.tag == OrbitTagC::SkewHermitian,
        "iτ₃ classified as {skew:?}"
    );
    let theta = std::f64::consts::PI / 6.0;
    let bundle = cls(Matrix2::diag(Complex64::from_polar(1.0, theta), Complex64::from_polar(1.0, -theta)))?;
    ensure!(
        (bundle.invariant - 0.5).abs() < 1e-12
            && matches!(bundle.tag, OrbitTagC::HyperboloidBundle(_)),
        "diag(e^{{iπ/6}}, e^{{−iπ/6}}) classified as {bundle:?}"
    );

    let clr = |g: Matrix2| classify_sl2r(&g).map_err(|e| e.to_string());
    ensure!(clr(epsilon())?.tag == OrbitTagR::FixedPoint, "ε is not a fixed point");
    ensure!(clr(Matrix2::identity())?.tag == OrbitTagR::TwoSheet(Sheet::Plus), "Id real class");
    let seeds = [
        Matrix2::identity(),
        epsilon(),
        Matrix2::from_real(2.0, 0.0, 0.0, 0.5),
        Matrix2::from_real(1.0, 2.0, -1.0, -1.0),
    ];
    for k in 0..1000 {
        let g = seeds[k % seeds.len()];
        let moved = act(&random_sl2r(&mut r, 0.8), &g, ActionFlavor::Transpose).map_err(|e| e.to_string())?;
        let (c0, c1) = (clr(g)?, clr(moved)?);
        ensure!(c0.tag == c1.tag, "real class changed: {:?} -> {:?}", c0.tag, c1.tag);
    }
    Ok(format!(
        "drift {inv_drift:.2e}, identities {identity_defect:.2e}, max I {max_i:.6}, fixed points ok"
    ))
}

fn determinism() -> Outcome {
    let run = || -> Result<Vec<u8>, String> {
        let out = Command::new(env!("CARGO_BIN_EXE_sdym"))
            .args(["selftest", "--seed", "20240611"])
            .output()
            .map_err(|e| e.to_string())?;
        ensure!(out.status.success(), "selftest exited with {}", out.status);
        Ok(out.stdout)
    };
    let first = run()?;
    let second = run()?;
    ensure!(!first.is_empty() && first == second, "reports differ");
    Ok(format!("{} identical bytes", first.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("reducible construction", reducible_construction),
        ("algebraically special example", algebraically_special),
        ("penrose transform", penrose_transform),
        ("cauchy transform", cauchy_transform),
        ("annihilation and reality", annihilation_and_reality),
        ("birkhoff splitting", birkhoff_splitting),
        ("flat-orbit round trip", round_trip),
        ("finite type", finite_type),
        ("orbit classification", orbits),
        ("selftest determinism", determinism),
    ];
    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} ({secs:.1}s): {detail}", k + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {}: FAIL {name} ({secs:.1}s): {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {}/{} passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
