//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use frame_forge::besselian::{holder_besselian_bound, nuclearity_sum, HOLDER_EXPONENT_GRID};
use frame_forge::constructions::{
    canonical_frame, direct_sum_frames, hilbert_frame_to_schauder, mercedes_vectors, restrict_frame, CanonicalKind,
};
use frame_forge::embeddings::{projection_check, sandwich_check, we_norm, ze_norm, FrameElement, Variant};
use frame_forge::haar::haar_paire;
use frame_forge::{
    besselian_constant, besselian_form, BesselianMethod, Functional, NormMethod, NormedSpace, Paire, SamplingOptions,
    SubsetMode, Term, Vector,
};
use nalgebra::DMatrix;
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn criterion_1() -> Outcome {
    let mut slowest = Duration::ZERO;
    for n in 2..=8 {
        let t = Instant::now();
        let p = canonical_frame(CanonicalKind::L1, n).map_err(e)?;
        let c = besselian_constant(&p, BesselianMethod::Exact).map_err(e)?;
        slowest = slowest.max(t.elapsed());
        ensure(c.is_exact && (c.constant.lower - 1.0).abs() <= 1e-10 && (c.constant.upper - 1.0).abs() <= 1e-10, || {
            format!("l1 N={n}: {:?}", c.constant)
        })?;
    }
    for p in [1.5, 2.0, 3.0] {
        for n in 2..=8 {
            let t = Instant::now();
            let f = canonical_frame(CanonicalKind::Lp(p), n).map_err(e)?;
            let c = besselian_constant(&f, BesselianMethod::Bounds(SamplingOptions::default())).map_err(e)?;
            slowest = slowest.max(t.elapsed());
            ensure((c.constant.lower - 1.0).abs() <= 1e-6 && (c.constant.upper - 1.0).abs() <= 1e-6, || {
                format!("l^{p} N={n}: {:?}", c.constant)
            })?;
        }
    }
    ensure(slowest < Duration::from_secs(1), || format!("slowest case took {slowest:?}"))?;
    Ok(format!("slowest case {slowest:?}"))
}

fn criterion_2() -> Outcome {
    let space = NormedSpace::euclidean(2);
    let xs = mercedes_vectors();
    let r = hilbert_frame_to_schauder(&xs, &space).map_err(e)?;
    let target = DMatrix::from_diagonal_element(2, 2, 1.5);
    let op_err = (&r.frame_operator - target).abs().max();
    ensure(op_err <= 1e-12, || format!("frame operator off by {op_err}"))?;
    for (g, x) in r.dual_vectors.iter().zip(&xs) {
        for (gi, xi) in g.0.iter().zip(&x.0) {
            ensure((gi - 2.0 / 3.0 * xi).abs() <= 1e-12, || format!("dual vector {g:?}"))?;
        }
    }
    let probes = r.paire.default_probes(100, 1);
    let rec = r.paire.check_schauder_frame(&probes, 1e-10).map_err(e)?;
    ensure(rec.pass && rec.proven, || format!("reconstruction residual {}", rec.max_final_residual))?;
    let c = besselian_constant(&r.paire, BesselianMethod::Bounds(SamplingOptions::default())).map_err(e)?;
    ensure((c.constant.lower - 1.0).abs() <= 1e-6 && (c.constant.upper - 1.0).abs() <= 1e-6, || {
        format!("{:?}", c.constant)
    })?;
    Ok(format!("residual {:.1e}, L_F in [{}, {}]", rec.max_final_residual, c.constant.lower, c.constant.upper))
}

fn criterion_3() -> Outcome {
    let mut count = 0;
    for kind in [CanonicalKind::L1, CanonicalKind::Lp(2.0), CanonicalKind::LinfC0] {
        for n in 1..=8 {
            let p = canonical_frame(kind, n).map_err(e)?;
            let k = p.frame_constant(NormMethod::Exact).map_err(e)?;
            ensure(k.is_exact() && (k.upper - 1.0).abs() <= 1e-9, || format!("{kind:?} N={n}: {k:?}"))?;
            count += 1;
        }
    }
    for level in 0..=4 {
        let h = haar_paire(level).map_err(e)?;
        let k = h.paire.frame_constant(NormMethod::Exact).map_err(e)?;
        ensure(k.is_exact() && (k.upper - 1.0).abs() <= 1e-9, || format!("haar level {level}: {k:?}"))?;
        count += 1;
    }
    Ok(format!("{count} frames with K_F = 1"))
}

fn criterion_4() -> Outcome {
    let mut rng = common::rng(4);
    let cases = 250;
    for i in 0..cases {
        let p = common::random_polyhedral_paire(&mut rng);
        let exact = besselian_constant(&p, BesselianMethod::Exact).map_err(e)?.constant.lower;
        let oracle = common::oracle_besselian(&p);
        ensure((exact - oracle).abs() <= 1e-10 * oracle.max(1.0), || format!("case {i}: {exact} vs oracle {oracle}"))?;
        let opts = SamplingOptions { seed: i, probes: 8 };
        let tol = 1e-10 * oracle.max(1.0);
        let b = besselian_constant(&p, BesselianMethod::Bounds(opts)).map_err(e)?;
        ensure(b.constant.lower <= oracle + tol && oracle <= b.constant.upper + tol, || {
            format!("case {i}: bounds {:?} miss {oracle}", b.constant)
        })?;
        for ex in HOLDER_EXPONENT_GRID {
            let h = holder_besselian_bound(&p, ex, &opts).map_err(e)?;
            ensure(oracle <= h + tol, || format!("case {i}: Hoelder({ex}) = {h} < {oracle}"))?;
        }
    }
    Ok(format!("{cases} random paires"))
}

fn presets() -> Result<Vec<(String, Paire)>, String> {
    let mut out = vec![
        ("canonical_l1".to_string(), canonical_frame(CanonicalKind::L1, 4).map_err(e)?),
        ("canonical_lp(1.5)".to_string(), canonical_frame(CanonicalKind::Lp(1.5), 4).map_err(e)?),
        ("canonical_lp(2)".to_string(), canonical_frame(CanonicalKind::Lp(2.0), 4).map_err(e)?),
        ("canonical_lp(3)".to_string(), canonical_frame(CanonicalKind::Lp(3.0), 4).map_err(e)?),
        ("canonical_c0".to_string(), canonical_frame(CanonicalKind::LinfC0, 4).map_err(e)?),
        (
            "mercedes".to_string(),
            hilbert_frame_to_schauder(&mercedes_vectors(), &NormedSpace::euclidean(2)).map_err(e)?.paire,
        ),
    ];
    for level in 0..=4 {
        out.push((format!("haar({level})"), haar_paire(level).map_err(e)?.paire));
    }
    Ok(out)
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let presets = presets()?;
    for (name, p) in &presets {
        for v in [Variant::Z, Variant::W] {
            let s = sandwich_check(p, v, 100, 5, 1e-9).map_err(e)?;
            ensure(s.pass, || format!("{name} {v:?} sandwich: {} violations", s.violations.len()))?;
            let r = projection_check(p, v, 100, 6, 1e-9).map_err(e)?;
            ensure(r.max_idempotence_defect <= 1e-12, || format!("{name} {v:?} rho defect {}", r.max_idempotence_defect))?;
            ensure(r.bound_violations == 0, || format!("{name} {v:?} rho bound violated {} times", r.bound_violations))?;
        }
    }
    let mut rng = common::rng(55);
    let mut checked = 0;
    for i in 0..1000 {
        let (_, p) = &presets[i % presets.len()];
        let c: Vec<f64> = (0..p.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let z = FrameElement::new(p, c).map_err(e)?;
        let w = we_norm(&z, SubsetMode::default()).map_err(e)?.lower;
        let zn = ze_norm(&z);
        ensure(w >= zn - 1e-12 * zn.max(1.0), || format!("element {i}: we {w} < ze {zn}"))?;
        checked += 1;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"))?;
    Ok(format!("{} presets, {checked} elements, {elapsed:?}", presets.len()))
}

fn criterion_6() -> Outcome {
    let a = canonical_frame(CanonicalKind::L1, 2).map_err(e)?;
    let b = canonical_frame(CanonicalKind::L1, 1).map_err(e)?;
    let s = direct_sum_frames(&[(a, 1.0), (b, 1.0)]).map_err(e)?;
    let probes = s.paire.default_probes(50, 2);
    let rec = s.paire.check_schauder_frame(&probes, 1e-10).map_err(e)?;
    ensure(rec.pass && rec.proven, || format!("direct sum residual {}", rec.max_final_residual))?;
    let l = besselian_constant(&s.paire, BesselianMethod::Exact).map_err(e)?;
    ensure(l.is_exact && (l.constant.upper - 1.0).abs() <= 1e-10, || format!("direct sum L_F {:?}", l.constant))?;

    let mut restricted = 0;
    for kind in [CanonicalKind::L1, CanonicalKind::Lp(2.0), CanonicalKind::Lp(3.0), CanonicalKind::LinfC0] {
        let c = canonical_frame(kind, 4).map_err(e)?;
        for mask in 1u32..16 {
            let keep: Vec<usize> = (0..4).filter(|i| mask >> i & 1 == 1).collect();
            let diag: Vec<f64> = (0..4).map(|i| if keep.contains(&i) { 1.0 } else { 0.0 }).collect();
            let proj = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag));
            let basis: Vec<Vector> = keep.iter().map(|&i| Vector::unit(4, i)).collect();
            let r = restrict_frame(&c, &proj, &basis).map_err(e)?;
            let probes = r.default_probes(20, 3);
            let rec = r.check_schauder_frame(&probes, 1e-10).map_err(e)?;
            ensure(rec.pass, || format!("{kind:?} restricted to {keep:?}: {}", rec.max_final_residual))?;
            restricted += 1;
        }
    }
    Ok(format!("direct sum L_F = {}, {restricted} coordinate restrictions", l.constant.upper))
}

fn criterion_7() -> Outcome {
    for n in 1..=16 {
        let p = canonical_frame(CanonicalKind::Lp(2.0), n).map_err(e)?;
        let s = nuclearity_sum(&p);
        ensure(s == n as f64, || format!("N={n}: {s}"))?;
    }
    Ok("N = 1..16".into())
}

fn criterion_8() -> Outcome {
    let mut values = Vec::new();
    for level in 0..=4 {
        let h = haar_paire(level).map_err(e)?;
        let probes = h.paire.default_probes(50, 8);
        let rec = h.paire.check_schauder_frame(&probes, 1e-10).map_err(e)?;
        ensure(rec.pass && rec.proven, || format!("level {level}: residual {}", rec.max_final_residual))?;
        let l = besselian_constant(&h.paire, BesselianMethod::Exact).map_err(e)?.constant.upper;
        if level <= 2 {
            let oracle = common::oracle_besselian(&h.paire);
            ensure((l - oracle).abs() <= 1e-10, || format!("level {level}: {l} vs oracle {oracle}"))?;
        }
        values.push(l);
    }
    ensure(values.windows(2).all(|w| w[0] <= w[1]), || format!("not monotone: {values:?}"))?;
    Ok(format!("L_F by level {values:?}"))
}

/// Coordinates in `[-1, 1]`, so `1e-12` is a relative tolerance of the data scale.
fn unit_box(rng: &mut impl Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.random_range(-1.0..1.0)).collect()
}

fn random_space(rng: &mut impl Rng) -> NormedSpace {
    let d = rng.random_range(1..=5usize);
    let p = match rng.random_range(0..4) {
        0 => 1.0,
        1 => 2.0,
        2 => f64::INFINITY,
        _ => rng.random_range(1.0..6.0),
    };
    NormedSpace::weighted(d, p, (0..d).map(|_| rng.random_range(0.5..2.0)).collect()).expect("valid space")
}

fn criterion_9() -> Outcome {
    const TOL: f64 = 1e-12;
    let mut rng = common::rng(9);
    // spaces
    for i in 0..1000 {
        let s = random_space(&mut rng);
        let (x, y) = (unit_box(&mut rng, s.dim()), unit_box(&mut rng, s.dim()));
        let c: f64 = rng.random_range(-2.0..2.0);
        let (nx, ny) = (s.norm_of(&x), s.norm_of(&y));
        let sum: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        let cx: Vec<f64> = x.iter().map(|a| c * a).collect();
        ensure(nx >= 0.0 && s.norm_of(&sum) <= nx + ny + TOL, || format!("space {i}: triangle"))?;
        ensure((s.norm_of(&cx) - c.abs() * nx).abs() <= TOL, || format!("space {i}: homogeneity"))?;
        ensure((nx - common::naive_norm(&s, &x)).abs() <= TOL, || format!("space {i}: norm formula"))?;
        let pair: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        ensure(pair.abs() <= nx * s.dual_norm_of(&y) + TOL, || format!("space {i}: Hoelder"))?;
    }
    // besselian scaling
    for i in 0..1000 {
        let p = common::random_polyhedral_paire(&mut rng);
        let c = rng.random_range(0.25..4.0);
        let q = p
            .with_terms(
                p.terms()
                    .iter()
                    .map(|t| Term::new(t.a.0.iter().map(|a| c * a).collect(), t.b_star.0.iter().map(|b| b / c).collect()))
                    .collect(),
            )
            .map_err(e)?;
        let (u, v) = (Vector(unit_box(&mut rng, p.dim())), Functional(unit_box(&mut rng, p.dim())));
        let f0 = besselian_form(&p, &u, &v).map_err(e)?;
        let f1 = besselian_form(&q, &u, &v).map_err(e)?;
        ensure((f0 - f1).abs() <= TOL * f0.max(1.0), || format!("paire {i}: form {f0} vs {f1}"))?;
        let l0 = besselian_constant(&p, BesselianMethod::Exact).map_err(e)?.upper();
        let l1 = besselian_constant(&q, BesselianMethod::Exact).map_err(e)?.upper();
        ensure((l0 - l1).abs() <= TOL * l0.max(1.0), || format!("paire {i}: L_F {l0} vs {l1}"))?;
        let (n0, n1) = (nuclearity_sum(&p), nuclearity_sum(&q));
        ensure((n0 - n1).abs() <= TOL * n0.max(1.0), || format!("paire {i}: nuclearity {n0} vs {n1}"))?;
        ensure(f0 <= l0 * p.space().norm_of(&u.0) * p.space().dual_norm_of(&v.0) + TOL * l0.max(1.0), || {
            format!("paire {i}: form exceeds L_F")
        })?;
    }
    // embeddings
    let presets = presets()?;
    for i in 0..1000 {
        let (name, p) = &presets[i % 9];
        let a = FrameElement::new(p, unit_box(&mut rng, p.len())).map_err(e)?;
        let b = FrameElement::new(p, unit_box(&mut rng, p.len())).map_err(e)?;
        let c: f64 = rng.random_range(-2.0..2.0);
        let sum = a.add(&b).map_err(e)?;
        let we = |z: &FrameElement| we_norm(z, SubsetMode::default()).map(|b| b.lower).map_err(e);
        let (za, zb, wa, wb) = (ze_norm(&a), ze_norm(&b), we(&a)?, we(&b)?);
        ensure(ze_norm(&sum) <= za + zb + TOL && we(&sum)? <= wa + wb + TOL, || format!("{name} element {i}: triangle"))?;
        ensure((ze_norm(&a.scaled(c)) - c.abs() * za).abs() <= TOL * za.max(1.0), || format!("{name} element {i}: Z scaling"))?;
        ensure((we(&a.scaled(c))? - c.abs() * wa).abs() <= TOL * wa.max(1.0), || format!("{name} element {i}: W scaling"))?;
    }
    Ok("3 x 1000 inputs".into())
}

fn cli(args: &[&str]) -> Result<(i32, Vec<u8>), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_frame-forge")).args(args).output().map_err(e)?;
    Ok((out.status.code().unwrap_or(-1), out.stdout))
}

fn criterion_10() -> Outcome {
    let runs: [&[&str]; 5] = [
        &["besselian", "--preset", "canonical_l1", "--n", "3", "--method", "exact"],
        &["besselian", "--preset", "mercedes", "--method", "bounds", "--seed", "7"],
        &["embed", "--preset", "mercedes", "--check-sandwich", "--seed", "7"],
        &["verify", "--filter", "besselian_bracket", "--seed", "11", "--probes", "40"],
        &["haar", "--level", "3", "--format", "csv"],
    ];
    for args in runs {
        let (c1, o1) = cli(args)?;
        let (c2, o2) = cli(args)?;
        ensure(c1 == 0 && c2 == 0, || format!("{args:?} exited {c1}/{c2}"))?;
        ensure(o1 == o2 && !o1.is_empty(), || format!("{args:?} output differs between runs"))?;
    }
    let dir = tempfile::tempdir().map_err(e)?;
    let path = dir.path().join("report.json").display().to_string();
    let mut files = Vec::new();
    for _ in 0..2 {
        let (c, _) = cli(&["embed", "--preset", "haar", "--level", "2", "--check-sandwich", "--seed", "3", "--output", &path])?;
        ensure(c == 0, || format!("file report exited {c}"))?;
        files.push(std::fs::read(&path).map_err(e)?);
    }
    ensure(files[0] == files[1], || "report files differ".into())?;
    let (corrupt, _) = cli(&["verify", "--filter", "reconstruction", "--inject-corruption"])?;
    ensure(corrupt == 1, || format!("corrupted paire exited {corrupt}"))?;
    let (bad, _) = cli(&["check", "--inline", "{not json"])?;
    ensure(bad == 2, || format!("malformed input exited {bad}"))?;
    Ok("5 commands byte-identical, corruption exits 1".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("canonical frames", criterion_1),
        ("Mercedes frame", criterion_2),
        ("frame constants", criterion_3),
        ("oracle equivalence", criterion_4),
        ("embedding suite", criterion_5),
        ("combinators", criterion_6),
        ("nuclearity", criterion_7),
        ("Haar probe", criterion_8),
        ("norm axioms and scaling", criterion_9),
        ("CLI determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match f() {
            Ok(detail) => println!("PASS criterion {:>2} {name}: {detail} ({:.2?})", i + 1, t.elapsed()),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {:>2} {name}: {msg} ({:.2?})", i + 1, t.elapsed());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
