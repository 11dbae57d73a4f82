//! Subcommand implementations. Each returns a [`Report`]; failures inside a
//! pipeline become error records, never panics.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use sdym::algebra::{mat_exp2, tau1, tau2, tau3, Matrix2};
use sdym::connection::{
    curvature, exp_tau3, reducible_from_harmonic, sdym_residual, yang_pohlmeyer_exact,
    yang_pohlmeyer_residual, YangJ,
};
use sdym::orbits::{act, classify_sl2c, classify_sl2r, decompose_minkowski, ActionFlavor};
use sdym::polyfield::{PolyField, R4Point};
use sdym::riemann_hilbert::{
    abelian_split_exact, connection_pipeline, j_from_split, split_loop, LoopField, MatrixLoop,
    PipelineReport,
};
use sdym::series::ScalarSeries;
use sdym::symmetry::{
    commuting_chain_check, finite_type_residual, flow_patching, type_of, ConstantLoop,
    FiniteType, FiniteTypeChain, GeneratorT,
};
use sdym::twistor::{patching_from_rep, penrose_a_exact, penrose_sweep, PatchingMatrix};

use crate::config::RunConfig;
use crate::report::{float, floats, FlowRow, Report};
use crate::CliError;

/// Tolerances for exact identities evaluated in floating point.
pub const EXACT_TOL: f64 = 1e-12;
pub const QUADRATURE_TOL: f64 = 1e-10;
pub const SPLIT_TOL: f64 = 1e-10;
pub const YP_TOL: f64 = 1e-2;
pub const ORBIT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Reducible,
    Penrose,
    Patch,
    Split,
    Flow,
    FiniteType,
    Orbit,
    Selftest,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Reducible => "reducible",
            Command::Penrose => "penrose",
            Command::Patch => "patch",
            Command::Split => "split",
            Command::Flow => "flow",
            Command::FiniteType => "finite-type",
            Command::Orbit => "orbit",
            Command::Selftest => "selftest",
        }
    }
}

/// Run a subcommand. Configuration problems are `Err`; check failures are in the report.
pub fn run(cmd: Command, cfg: &RunConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let echo = serde_json::to_value(cfg).map_err(|e| CliError::Config(e.to_string()))?;
    let mut report = Report::new(cmd.name(), echo);
    match cmd {
        Command::Reducible => reducible(cfg, &mut report),
        Command::Penrose => penrose(cfg, &mut report),
        Command::Patch => patch(cfg, &mut report)?,
        Command::Split => split(cfg, &mut report)?,
        Command::Flow => flow(cfg, &mut report)?,
        Command::FiniteType => finite_type(cfg, &mut report),
        Command::Orbit => orbit(cfg, &mut report),
        Command::Selftest => selftest(cfg, &mut report),
    }
    Ok(report)
}

fn points_for(cfg: &RunConfig, count: usize) -> Vec<R4Point> {
    cfg.explicit_points().unwrap_or_else(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        (0..count).map(|_| random_point(&mut rng, 1.0)).collect()
    })
}

fn random_point(rng: &mut impl Rng, scale: f64) -> R4Point {
    R4Point::new(
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
    )
}

fn reducible(cfg: &RunConfig, report: &mut Report) {
    let a = cfg.harmonic_fn();
    report.set("a", json!(a.to_json_terms()));
    let conn = match reducible_from_harmonic(&a) {
        Ok(c) => c,
        Err(e) => {
            report.error("reducible_from_harmonic", e);
            return;
        }
    };
    report.check("sdym_residual", sdym_residual(&conn).max_coeff(), EXACT_TOL);
    let j = YangJ::Abelian(a.clone());
    match yang_pohlmeyer_exact(&j) {
        Ok(r) => {
            report.check("yang_pohlmeyer_exact", r.max_coeff(), EXACT_TOL);
        }
        Err(e) => report.error("yang_pohlmeyer_exact", e),
    }
    match yang_pohlmeyer_residual(&j, &cfg.grid) {
        Ok(r) => {
            report.check("yang_pohlmeyer_lattice", r.max_residual, YP_TOL);
        }
        Err(e) => report.error("yang_pohlmeyer_lattice", e),
    }
    let f = curvature(&conn);
    let mut comps = Map::new();
    for (name, m) in f.components() {
        comps.insert(name.to_string(), float(m.max_coeff()));
    }
    report.set("curvature_max_coeff", Value::Object(comps));
    report.set("algebraically_special", Value::Bool(f.is_algebraically_special()));
}

fn penrose(cfg: &RunConfig, report: &mut Report) {
    let f = cfg.twistor_rep();
    let a = penrose_a_exact(&f);
    report.set("a", json!(a.to_json_terms()));
    report.set("bandwidth", Value::from(f.bandwidth()));
    report.check("a_harmonic", a.laplacian().max_coeff(), EXACT_TOL);
    let points = points_for(cfg, 10);
    match penrose_sweep(&f, &points, &cfg.contour) {
        Ok(vals) => {
            let worst = vals
                .iter()
                .map(|(q, e)| (q - e).norm() / (1.0 + e.norm()))
                .fold(0.0, f64::max);
            report.check("quadrature_vs_residue", worst, QUADRATURE_TOL);
        }
        Err(e) => report.error("penrose_a", e),
    }
}

fn series_value(s: &ScalarSeries) -> Value {
    let mut m = Map::new();
    for (n, p) in s.iter() {
        m.insert(n.to_string(), json!(p.to_json_terms()));
    }
    Value::Object(m)
}

fn patching(cfg: &RunConfig, report: &mut Report) -> Option<PatchingMatrix> {
    match patching_from_rep(&cfg.twistor_rep()) {
        Ok(g) => Some(g),
        Err(e) => {
            report.error("patching_from_rep", e);
            None
        }
    }
}

fn require_band(cfg: &RunConfig, g: &PatchingMatrix) -> Result<(), CliError> {
    let band = g.phi.band();
    if cfg.truncation < band {
        return Err(CliError::Config(format!(
            "truncation {} is below the patching band {band}",
            cfg.truncation
        )));
    }
    Ok(())
}

fn patch(cfg: &RunConfig, report: &mut Report) -> Result<(), CliError> {
    let Some(g) = patching(cfg, report) else {
        return Ok(());
    };
    report.set("phi", series_value(&g.phi));
    let annihilation = g
        .phi
        .annihilation_defects()
        .iter()
        .map(|(_, a, b)| a.max_coeff().max(b.max_coeff()))
        .fold(0.0, f64::max);
    report.check("annihilation", annihilation, EXACT_TOL);
    report.check("reality", g.reality_defect(), EXACT_TOL);
    let mut star: f64 = 0.0;
    for x in points_for(cfg, 10) {
        match g.star_defect(&x, cfg.samples) {
            Ok(d) => star = star.max(d),
            Err(e) => {
                report.error("star_defect", e);
                return Ok(());
            }
        }
    }
    report.check("star_reality_on_samples", star, QUADRATURE_TOL);
    Ok(())
}

fn record_pipeline(report: &mut Report, label: &str, r: &PipelineReport) {
    report.check(format!("split_residual{label}"), r.max_split_residual, SPLIT_TOL);
    report.check(format!("yang_pohlmeyer{label}"), r.yang_pohlmeyer.max_residual, YP_TOL);
    report.jumping_points.extend(r.jumping_points.iter().copied());
}

fn split(cfg: &RunConfig, report: &mut Report) -> Result<(), CliError> {
    let Some(g) = patching(cfg, report) else {
        return Ok(());
    };
    require_band(cfg, &g)?;
    match connection_pipeline(&g, &cfg.pipeline()) {
        Ok(r) => {
            record_pipeline(report, "", &r);
            report.set("max_condition", float(r.max_condition));
            if let Some(p) = r.yang_pohlmeyer.argmax_point {
                report.set("yang_pohlmeyer_argmax", floats(&p));
            }
        }
        Err(e) => report.error("connection_pipeline", e),
    }
    Ok(())
}

fn flow(cfg: &RunConfig, report: &mut Report) -> Result<(), CliError> {
    let Some(g) = patching(cfg, report) else {
        return Ok(());
    };
    require_band(cfg, &g)?;
    let t_gen = GeneratorT::abelian(&g.phi, -0.5);
    let base = ConstantLoop(Matrix2::identity());
    let pipeline = cfg.pipeline();
    for &t in &cfg.flow_times {
        let flowed = flow_patching(&base, &t_gen, t);
        let label = format!("[t={t}]");
        match connection_pipeline(&flowed, &pipeline) {
            Ok(r) => {
                record_pipeline(report, &label, &r);
                report.flow_table.push(FlowRow {
                    t,
                    max_split_residual: r.max_split_residual,
                    max_yp_residual: r.yang_pohlmeyer.max_residual,
                    jump_count: r.jumping_points.len(),
                });
            }
            Err(e) => report.error(&format!("connection_pipeline{label}"), e),
        }
    }
    let flowed = flow_patching(&base, &t_gen, 1.0);
    let round_trip = cfg
        .grid
        .points()
        .iter()
        .step_by(97)
        .flat_map(|x| {
            let a = flowed.samples(x, cfg.samples);
            let b = g.samples(x, cfg.samples);
            a.into_iter()
                .zip(b)
                .map(|(p, q)| (p - q).max_abs() / q.max_abs().max(1.0))
                .collect::<Vec<_>>()
        })
        .fold(0.0, f64::max);
    report.check("round_trip[t=1]", round_trip, EXACT_TOL);
    Ok(())
}

fn finite_type(cfg: &RunConfig, report: &mut Report) {
    let a = cfg.harmonic_fn();
    match type_of(&a, cfg.d_max) {
        Ok(FiniteType::Finite { d, chain }) => {
            report.set("d", Value::from(d));
            report.set(
                "chain",
                Value::Array(chain.iter().map(|p| json!(p.to_json_terms())).collect()),
            );
            match FiniteTypeChain::from_scalar(&chain, &sdym::polyfield::MatrixPolyField::tau3()) {
                Ok(fc) => {
                    let worst = finite_type_residual(&fc)
                        .iter()
                        .map(|(_, r)| r.max_coeff())
                        .fold(0.0, f64::max);
                    report.check("chain_residual", worst, EXACT_TOL * a.max_coeff().max(1.0));
                    let c = commuting_chain_check(&fc);
                    report.set("commuting", Value::Bool(c.commuting));
                    report.set("reducible", Value::Bool(c.reducible));
                    if let Some(alpha) = c.direction {
                        report.set("direction", matrix_value(&alpha));
                    }
                }
                Err(e) => report.error("finite_type_chain", e),
            }
        }
        Ok(FiniteType::NotFiniteUpTo(d)) => {
            report.set("d", Value::Null);
            report.error("type_of", format!("no chain of type at most {d}"));
        }
        Err(e) => report.error("type_of", e),
    }
}

fn matrix_value(m: &Matrix2) -> Value {
    Value::Array(m.entries().iter().map(|e| floats(&[e.re, e.im])).collect())
}

fn matrix_from(raw: &[[f64; 2]; 4]) -> Matrix2 {
    let e = raw.map(|[re, im]| Complex64::new(re, im));
    Matrix2::from_entries(e)
}

fn orbit(cfg: &RunConfig, report: &mut Report) {
    let mut results = Vec::new();
    let mut identity_defect: f64 = 0.0;
    for (k, raw) in cfg.matrices.iter().enumerate() {
        let g = matrix_from(raw);
        let class = match classify_sl2c(&g) {
            Ok(c) => c,
            Err(e) => {
                report.error(&format!("orbit[{k}]"), e);
                continue;
            }
        };
        let (u, v) = decompose_minkowski(&g).expect("unit determinant already checked");
        let i = class.invariant;
        identity_defect = identity_defect
            .max((u.norm2() + 0.5 * (i + 1.0)).abs())
            .max((v.norm2() + 0.5 * (i - 1.0)).abs())
            .max(u.dot(&v).abs());
        let mut entry = Map::new();
        entry.insert("I".into(), float(i));
        entry.insert("u".into(), floats(&u.to_array()));
        entry.insert("v".into(), floats(&v.to_array()));
        entry.insert("class".into(), Value::String(class.tag.to_string()));
        entry.insert("boundary_flag".into(), Value::Bool(class.boundary));
        if let Ok(r) = classify_sl2r(&g) {
            let mut real = Map::new();
            real.insert("class".into(), Value::String(r.tag.to_string()));
            real.insert("alpha".into(), float(r.alpha));
            real.insert("u".into(), floats(&r.u.to_array()));
            real.insert("boundary_flag".into(), Value::Bool(r.boundary));
            entry.insert("real".into(), Value::Object(real));
        }
        results.push(Value::Object(entry));
    }
    report.check("minkowski_identities", identity_defect, ORBIT_TOL);
    report.set("orbits", Value::Array(results));
}

fn random_sl2c(rng: &mut impl Rng, scale: f64) -> Matrix2 {
    let mut c = || Complex64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale));
    mat_exp2(&(tau1().scale(c()) + tau2().scale(c()) + tau3().scale(c())))
}

fn random_harmonic(rng: &mut impl Rng, degree: u32) -> PolyField {
    let mut p = PolyField::zero();
    for _ in 0..5 {
        let mut m = [0u32; 4];
        for _ in 0..rng.gen_range(0..=degree) {
            m[rng.gen_range(0..4)] += 1;
        }
        p.add_term(m, Complex64::new(rng.gen_range(-2..=2) as f64, rng.gen_range(-2..=2) as f64));
    }
    p.real_part().harmonic_projection()
}

/// Seeded sweep over every module; the report depends only on the seed.
fn selftest(cfg: &RunConfig, report: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.sweep.max(1);

    let mut sdym_worst: f64 = 0.0;
    for k in 0..5 {
        let a = random_harmonic(&mut rng, 2 + k % 4);
        match reducible_from_harmonic(&a) {
            Ok(conn) => sdym_worst = sdym_worst.max(sdym_residual(&conn).max_coeff()),
            Err(e) => report.error("selftest.reducible", e),
        }
    }
    report.check("reducible_sdym", sdym_worst, EXACT_TOL);

    let f = sdym::twistor::TwistorRep::null_quadric();
    let points: Vec<R4Point> = (0..10).map(|_| random_point(&mut rng, 1.0)).collect();
    match penrose_sweep(&f, &points, &cfg.contour) {
        Ok(vals) => {
            let worst = vals.iter().map(|(q, e)| (q - e).norm()).fold(0.0, f64::max);
            report.check("penrose_quadrature", worst, EXACT_TOL);
        }
        Err(e) => report.error("selftest.penrose", e),
    }

    let mut split_worst: f64 = 0.0;
    for band in 1..=3 {
        let phi = ScalarSeries::from_coeffs((-band..=band).map(|k: i32| {
            let s = 0.5 * 0.3f64.powi(k.abs());
            (
                k,
                PolyField::constant(Complex64::new(rng.gen_range(-s..s), rng.gen_range(-s..s))),
            )
        }));
        let x = R4Point::ORIGIN;
        let exact = abelian_split_exact(&phi).j(&x);
        let outcome = MatrixLoop::from_fn(64, |z| exp_tau3(phi.evaluate(&x, z)))
            .and_then(|lp| split_loop(&lp, 24));
        match outcome {
            Ok(fs) => {
                split_worst = split_worst
                    .max(fs.residual)
                    .max((j_from_split(&fs) - exact).max_abs());
            }
            Err(e) => report.error("selftest.split", e),
        }
    }
    report.check("abelian_split", split_worst, SPLIT_TOL);

    let g = PatchingMatrix::null_quadric();
    let t_gen = GeneratorT::abelian(&g.phi, -0.5);
    let base = ConstantLoop(Matrix2::identity());
    let flowed = flow_patching(&base, &t_gen, 1.0);
    let x = random_point(&mut rng, 0.5);
    let rt = flowed
        .samples(&x, 32)
        .iter()
        .zip(g.samples(&x, 32))
        .map(|(a, b)| (*a - b).max_abs())
        .fold(0.0, f64::max);
    report.check("flat_orbit_round_trip", rt, EXACT_TOL);

    match type_of(&PolyField::null_quadric(), 4) {
        Ok(FiniteType::Finite { d, .. }) => {
            report.check("finite_type_null_quadric", (d as f64 - 1.0).abs(), 0.0);
        }
        Ok(other) => report.error("selftest.type_of", format!("{other:?}")),
        Err(e) => report.error("selftest.type_of", e),
    }

    let mut inv_worst: f64 = 0.0;
    let mut class_changes = 0usize;
    for _ in 0..n {
        let g = random_sl2c(&mut rng, 0.8);
        let h = random_sl2c(&mut rng, 0.8);
        let moved = act(&h, &g, ActionFlavor::Dagger).expect("unit determinant");
        match (classify_sl2c(&g), classify_sl2c(&moved)) {
            (Ok(a), Ok(b)) => {
                inv_worst = inv_worst.max((a.invariant - b.invariant).abs());
                if a.tag != b.tag {
                    class_changes += 1;
                }
            }
            (Err(e), _) | (_, Err(e)) => report.error("selftest.orbit", e),
        }
    }
    report.check("orbit_invariance", inv_worst, ORBIT_TOL);
    report.check("orbit_class_changes", class_changes as f64, 0.0);
    report.set("sweep", Value::from(n));
}
