//! The invariant suites behind `frame-forge verify`.

use frame_forge::besselian::{
    besselian_constant, besselian_form, holder_besselian_bound, nuclearity_sum, seeded_rng, BesselianMethod,
    HOLDER_EXPONENT_GRID,
};
use frame_forge::constructions::{canonical_frame, direct_sum_frames, restrict_frame, CanonicalKind};
use frame_forge::embeddings::{basis_monotonicity_check, projection_check, sandwich_check, Variant};
use frame_forge::subsets::DEFAULT_SUBSET_LIMIT;
use frame_forge::{NormMethod, NormedSpace, Paire, SamplingOptions, Term, Vector};
use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::presets::{corrupt, load, suite_presets};
use crate::report::{Invariant, Report};
use crate::CliError;

pub const SUITES: [&str; 11] = [
    "reconstruction",
    "frame_constant",
    "besselian_exact",
    "besselian_bracket",
    "besselian_bounds",
    "nuclearity",
    "norm_axioms",
    "embedding_sandwich",
    "rho_projection",
    "monotonicity",
    "combinators",
];

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
    pub failures: Vec<String>,
}

struct Ctx {
    presets: Vec<(String, Paire)>,
    tol: f64,
    seed: u64,
    probes: usize,
}

/// One case: a label and whether it held. Errors count as failures.
type Case = (String, Result<bool, String>);

fn ok(label: impl Into<String>, r: frame_forge::Result<bool>) -> Case {
    (label.into(), r.map_err(|e| e.to_string()))
}

fn reconstruction(ctx: &Ctx) -> Vec<Case> {
    ctx.presets
        .iter()
        .map(|(name, p)| {
            let probes = p.default_probes(ctx.probes, ctx.seed);
            ok(name.clone(), p.check_schauder_frame(&probes, ctx.tol).map(|r| r.pass))
        })
        .collect()
}

fn frame_constant(ctx: &Ctx) -> Vec<Case> {
    ctx.presets
        .iter()
        .filter(|(name, _)| !name.starts_with("corrupted"))
        .map(|(name, p)| {
            let method = if p.space().is_polyhedral() || p.space().p() == 2.0 {
                NormMethod::Exact
            } else {
                NormMethod::Sampled(SamplingOptions { seed: ctx.seed, ..SamplingOptions::default() })
            };
            let r = p.frame_constant(method).map(|k| {
                let canonical = name.starts_with("canonical") || name.starts_with("haar");
                if canonical && method == NormMethod::Exact {
                    (k.upper - 1.0).abs() <= 1e-9
                } else {
                    k.upper >= 1.0 - 1e-9 && k.lower <= k.upper
                }
            });
            ok(name.clone(), r)
        })
        .collect()
}

fn besselian_exact(_ctx: &Ctx) -> Vec<Case> {
    let mut cases: Vec<Case> = (2..=8)
        .map(|n| {
            let r = canonical_frame(CanonicalKind::L1, n)
                .and_then(|p| besselian_constant(&p, BesselianMethod::Exact))
                .map(|c| (c.constant.lower - 1.0).abs() <= 1e-10);
            ok(format!("canonical_l1({n})"), r)
        })
        .collect();
    let haar: frame_forge::Result<Vec<f64>> = (0..=4)
        .map(|l| {
            let h = frame_forge::haar::haar_paire(l)?;
            Ok(besselian_constant(&h.paire, BesselianMethod::Exact)?.upper())
        })
        .collect();
    cases.push(ok("haar_nondecreasing", haar.map(|v| v.windows(2).all(|w| w[0] <= w[1] + 1e-12))));
    cases
}

fn random_polyhedral(rng: &mut impl Rng) -> Paire {
    let dim = rng.random_range(1..=3usize);
    let n = rng.random_range(1..=6usize);
    let p = if rng.random_bool(0.5) { 1.0 } else { f64::INFINITY };
    let space = NormedSpace::new(dim, p).expect("valid space");
    let terms = (0..n)
        .map(|_| {
            Term::new(
                (0..dim).map(|_| rng.random_range(-2.0..2.0)).collect(),
                (0..dim).map(|_| rng.random_range(-2.0..2.0)).collect(),
            )
        })
        .collect();
    Paire::new(space, terms).expect("valid paire")
}

fn besselian_bracket(ctx: &Ctx) -> Vec<Case> {
    let mut rng = seeded_rng(ctx.seed);
    let paires: Vec<Paire> = (0..ctx.probes).map(|_| random_polyhedral(&mut rng)).collect();
    paires
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let opts = SamplingOptions { seed: ctx.seed.wrapping_add(i as u64), probes: 8 };
            let r = (|| {
                let exact = besselian_constant(p, BesselianMethod::Exact)?;
                let bounds = besselian_constant(p, BesselianMethod::Bounds(opts))?;
                let l = exact.constant.lower;
                let t = 1e-9 * l.max(1.0);
                let mut good = bounds.constant.lower <= l + t && l <= bounds.constant.upper + t;
                for e in HOLDER_EXPONENT_GRID {
                    good &= l <= holder_besselian_bound(p, e, &opts)? + t;
                }
                if let Some(w) = &exact.witness {
                    good &= (besselian_form(p, &w.u, &w.v_star)? - l).abs() <= t;
                }
                Ok(good)
            })();
            ok(format!("random({i})"), r)
        })
        .collect()
}

fn besselian_bounds(ctx: &Ctx) -> Vec<Case> {
    let opts = SamplingOptions { seed: ctx.seed, ..SamplingOptions::default() };
    let mut cases: Vec<Case> = [1.5, 2.0, 3.0]
        .iter()
        .map(|&p| {
            let r = canonical_frame(CanonicalKind::Lp(p), 4)
                .and_then(|f| besselian_constant(&f, BesselianMethod::Bounds(opts)))
                .map(|c| (c.constant.lower - 1.0).abs() <= 1e-6 && (c.constant.upper - 1.0).abs() <= 1e-6);
            ok(format!("canonical_lp({p})"), r)
        })
        .collect();
    if let Some((_, m)) = ctx.presets.iter().find(|(n, _)| n == "mercedes") {
        let r = besselian_constant(m, BesselianMethod::Bounds(opts))
            .map(|c| (c.constant.lower - 1.0).abs() <= 1e-6 && (c.constant.upper - 1.0).abs() <= 1e-6);
        cases.push(ok("mercedes", r));
    }
    cases
}

fn nuclearity(_ctx: &Ctx) -> Vec<Case> {
    (1..=16)
        .map(|n| ok(format!("canonical_l2({n})"), canonical_frame(CanonicalKind::Lp(2.0), n).map(|p| nuclearity_sum(&p) == n as f64)))
        .collect()
}

fn norm_axioms(ctx: &Ctx) -> Vec<Case> {
    let mut rng = seeded_rng(ctx.seed);
    let mut cases = Vec::new();
    for p in [1.0, 1.5, 2.0, 3.0, f64::INFINITY] {
        let s = NormedSpace::weighted(4, p, (0..4).map(|_| rng.random_range(0.25..4.0)).collect()).expect("valid");
        let mut good = true;
        for _ in 0..ctx.probes {
            let x: Vec<f64> = (0..4).map(|_| rng.random_range(-5.0..5.0)).collect();
            let y: Vec<f64> = (0..4).map(|_| rng.random_range(-5.0..5.0)).collect();
            let c: f64 = rng.random_range(-3.0..3.0);
            let (nx, ny) = (s.norm_of(&x), s.norm_of(&y));
            let sum: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
            let cx: Vec<f64> = x.iter().map(|a| c * a).collect();
            let tol = 1e-12 * (nx + ny).max(1.0);
            good &= s.norm_of(&sum) <= nx + ny + tol;
            good &= (s.norm_of(&cx) - c.abs() * nx).abs() <= tol * c.abs().max(1.0);
            let pair: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
            good &= pair.abs() <= nx * s.dual_norm_of(&y) * (1.0 + 1e-12) + 1e-12;
        }
        cases.push((format!("weighted_l{p}"), Ok(good)));
    }
    cases
}

fn embedding_presets(ctx: &Ctx) -> impl Iterator<Item = &(String, Paire)> {
    ctx.presets.iter().filter(|(n, _)| !n.starts_with("corrupted"))
}

fn variants(p: &Paire) -> Vec<Variant> {
    if p.len() <= DEFAULT_SUBSET_LIMIT {
        vec![Variant::Z, Variant::W]
    } else {
        vec![Variant::Z]
    }
}

fn embedding_sandwich(ctx: &Ctx) -> Vec<Case> {
    let mut cases = Vec::new();
    for (name, p) in embedding_presets(ctx) {
        for v in variants(p) {
            cases.push(ok(format!("{name}:{v:?}"), sandwich_check(p, v, ctx.probes, ctx.seed, ctx.tol).map(|r| r.pass)));
        }
    }
    cases
}

fn rho_projection(ctx: &Ctx) -> Vec<Case> {
    let mut cases = Vec::new();
    for (name, p) in embedding_presets(ctx) {
        for v in variants(p) {
            cases.push(ok(format!("{name}:{v:?}"), projection_check(p, v, ctx.probes, ctx.seed, ctx.tol).map(|r| r.pass)));
        }
    }
    cases
}

fn monotonicity(ctx: &Ctx) -> Vec<Case> {
    let mut cases = Vec::new();
    for (name, p) in embedding_presets(ctx) {
        for v in variants(p) {
            cases.push(ok(format!("{name}:{v:?}"), basis_monotonicity_check(p, v, ctx.probes, ctx.seed).map(|r| r.pass)));
        }
    }
    cases
}

fn combinators(_ctx: &Ctx) -> Vec<Case> {
    let sum = (|| {
        let a = canonical_frame(CanonicalKind::L1, 2)?;
        let b = canonical_frame(CanonicalKind::L1, 1)?;
        let s = direct_sum_frames(&[(a, 1.0), (b, 1.0)])?;
        let l = besselian_constant(&s.paire, BesselianMethod::Exact)?.upper();
        Ok(s.paire.reconstruction_defect() <= 1e-10 && (l - 1.0).abs() <= 1e-10)
    })();
    let restrict = (|| {
        let mut good = true;
        for kind in [CanonicalKind::L1, CanonicalKind::Lp(2.0), CanonicalKind::Lp(3.0), CanonicalKind::LinfC0] {
            let c = canonical_frame(kind, 3)?;
            let proj = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 0.0, 1.0]));
            let r = restrict_frame(&c, &proj, &[Vector::unit(3, 0), Vector::unit(3, 2)])?;
            good &= r.reconstruction_defect() <= 1e-10;
        }
        Ok(good)
    })();
    vec![ok("direct_sum", sum), ok("restrict", restrict)]
}

fn run_suite(name: &str, ctx: &Ctx) -> SuiteResult {
    let cases = match name {
        "reconstruction" => reconstruction(ctx),
        "frame_constant" => frame_constant(ctx),
        "besselian_exact" => besselian_exact(ctx),
        "besselian_bracket" => besselian_bracket(ctx),
        "besselian_bounds" => besselian_bounds(ctx),
        "nuclearity" => nuclearity(ctx),
        "norm_axioms" => norm_axioms(ctx),
        "embedding_sandwich" => embedding_sandwich(ctx),
        "rho_projection" => rho_projection(ctx),
        "monotonicity" => monotonicity(ctx),
        "combinators" => combinators(ctx),
        _ => unreachable!("unknown suite {name}"),
    };
    let failures: Vec<String> = cases
        .iter()
        .filter_map(|(label, r)| match r {
            Ok(true) => None,
            Ok(false) => Some(label.clone()),
            Err(e) => Some(format!("{label}: {e}")),
        })
        .collect();
    SuiteResult {
        suite: name.to_string(),
        cases: cases.len(),
        passed: cases.len() - failures.len(),
        failed: failures.len(),
        failures,
    }
}

pub fn run_suites(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let mut presets = suite_presets();
    if let Some(input) = &cfg.input {
        presets.push(("input".to_string(), load(input)?));
    }
    if cfg.inject_corruption {
        let base = presets.last().expect("presets are nonempty").1.clone();
        presets.push(("corrupted".to_string(), corrupt(&base)));
    }
    let ctx = Ctx { presets, tol: cfg.tolerance, seed: cfg.seed, probes: cfg.probes };
    let selected: Vec<&str> = SUITES
        .iter()
        .copied()
        .filter(|s| cfg.filter.as_deref().is_none_or(|f| s.contains(f)))
        .collect();
    if selected.is_empty() {
        return Err(CliError::Config(format!("filter {:?} matches no suite; suites are {SUITES:?}", cfg.filter)));
    }
    // suites run in parallel; results keep suite order
    let results: Vec<SuiteResult> = selected.par_iter().map(|s| run_suite(s, &ctx)).collect();
    let invariants = results
        .iter()
        .map(|r| Invariant::new(r.suite.clone(), r.failed == 0, json!({ "passed": r.passed, "failed": r.failed })))
        .collect();
    let mut csv = String::from("suite,cases,passed,failed\n");
    for r in &results {
        csv.push_str(&format!("{},{},{},{}\n", r.suite, r.cases, r.passed, r.failed));
    }
    let mut report = Report::new(cfg, json!({ "suites": results }), invariants);
    report.csv_body = Some(csv);
    Ok(report)
}
