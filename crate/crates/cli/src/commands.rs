use frame_forge::besselian::{
    besselian_constant, besselian_form, cauchy_schwarz_besselian_bound, holder_besselian_bound, nuclearity_sum,
    BesselianMethod, HOLDER_EXPONENT_GRID,
};
use frame_forge::constructions::{hilbert_frame_to_schauder, mercedes_vectors};
use frame_forge::embeddings::{
    basis_monotonicity_check, projection_check, sandwich_check, t0_embed, we_norm, ze_norm, Variant,
};
use frame_forge::haar::{besselian_growth_study, growth_csv, GROWTH_CSV_HEADER, MAX_HAAR_LEVEL};
use frame_forge::subsets::{SubsetMode, DEFAULT_SUBSET_LIMIT};
use frame_forge::{NormMethod, NormedSpace, Paire, SamplingOptions};
use serde_json::{json, Value};

use crate::config::{CommandName, ExperimentConfig, InputSource, MethodFlag, PresetName};
use crate::presets::load;
use crate::report::{Invariant, Report};
use crate::{verify, CliError};

fn compute<T>(r: frame_forge::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Compute(e.to_string()))
}

fn sampling(cfg: &ExperimentConfig) -> SamplingOptions {
    SamplingOptions { seed: cfg.seed, ..SamplingOptions::default() }
}

fn input_paire(cfg: &ExperimentConfig) -> Result<Paire, CliError> {
    let input = cfg.input.as_ref().ok_or_else(|| CliError::Config("missing input".into()))?;
    load(input)
}

pub fn execute(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    match cfg.command {
        CommandName::Check => check(cfg),
        CommandName::Constant => constant(cfg),
        CommandName::Besselian => besselian(cfg),
        CommandName::Construct => construct(cfg),
        CommandName::Embed => embed(cfg),
        CommandName::Haar => haar(cfg),
        CommandName::Verify => verify::run_suites(cfg),
    }
}

fn check(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let p = input_paire(cfg)?;
    let probes = p.default_probes(cfg.probes, cfg.seed);
    let r = compute(p.check_schauder_frame(&probes, cfg.tolerance))?;
    let results = json!({
        "terms": p.len(),
        "dim": p.dim(),
        "max_final_residual": r.max_final_residual,
        "probes": probes.len(),
        "probe_rank": r.probe_rank,
        "proven": r.proven,
        "tolerance": r.tolerance,
    });
    let inv = Invariant::new("reconstruction", r.pass, json!({ "max_final_residual": r.max_final_residual }));
    Ok(Report::new(cfg, results, vec![inv]))
}

fn norm_method(cfg: &ExperimentConfig, space: &NormedSpace) -> NormMethod {
    let exact_available = space.is_polyhedral() || space.p() == 2.0;
    match cfg.method {
        Some(MethodFlag::Exact) => NormMethod::Exact,
        Some(MethodFlag::Bounds | MethodFlag::Sampled) => NormMethod::Sampled(sampling(cfg)),
        None if exact_available => NormMethod::Exact,
        None => NormMethod::Sampled(sampling(cfg)),
    }
}

fn constant(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let p = input_paire(cfg)?;
    let method = norm_method(cfg, p.space());
    let k = compute(p.frame_constant(method))?;
    let mut results = json!({ "frame_constant": k, "terms": p.len() });
    if method == NormMethod::Exact {
        results["prefix_norms"] = json!(compute(p.prefix_norms(NormMethod::Exact))?);
    }
    let inv = Invariant::new("bracket", k.lower <= k.upper + 1e-12, json!({ "lower": k.lower, "upper": k.upper }));
    Ok(Report::new(cfg, results, vec![inv]))
}

fn besselian_method(cfg: &ExperimentConfig, space: &NormedSpace) -> BesselianMethod {
    match cfg.method {
        Some(MethodFlag::Exact) => BesselianMethod::Exact,
        Some(MethodFlag::Bounds | MethodFlag::Sampled) => BesselianMethod::Bounds(sampling(cfg)),
        None if space.is_polyhedral() => BesselianMethod::Exact,
        None => BesselianMethod::Bounds(sampling(cfg)),
    }
}

fn besselian(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let p = input_paire(cfg)?;
    let opts = sampling(cfg);
    let cert = compute(besselian_constant(&p, besselian_method(cfg, p.space())))?;
    let mut holder = Vec::new();
    for e in HOLDER_EXPONENT_GRID {
        holder.push(json!({ "exponent": e, "bound": compute(holder_besselian_bound(&p, e, &opts))? }));
    }
    let mut results = json!({
        "certificate": cert,
        "constant": cert.constant.upper,
        "nuclearity_sum": nuclearity_sum(&p),
        "holder_bounds": holder,
    });
    let mut invariants = vec![Invariant::new(
        "bracket",
        cert.constant.lower <= cert.constant.upper + 1e-12,
        json!({ "lower": cert.constant.lower, "upper": cert.constant.upper }),
    )];
    if p.space().is_euclidean() {
        let cs = compute(cauchy_schwarz_besselian_bound(&p.vectors(), &p.functionals(), p.space()))?;
        results["cauchy_schwarz_bound"] = json!(cs);
        invariants.push(Invariant::new("cauchy_schwarz_dominates", cert.constant.lower <= cs + cfg.tolerance, json!(cs)));
    }
    let min_holder = holder.iter().filter_map(|h| h["bound"].as_f64()).fold(f64::INFINITY, f64::min);
    invariants.push(Invariant::new(
        "holder_dominates",
        cert.constant.lower <= min_holder + cfg.tolerance,
        json!(min_holder),
    ));
    if let Some(w) = &cert.witness {
        let v = compute(besselian_form(&p, &w.u, &w.v_star))?;
        let ok = (v - cert.constant.lower).abs() <= 1e-9 * v.max(1.0)
            && p.space().norm_of(&w.u.0) <= 1.0 + 1e-12
            && p.space().dual_norm_of(&w.v_star.0) <= 1.0 + 1e-12;
        invariants.push(Invariant::new("witness_attains_lower", ok, json!(v)));
    }
    Ok(Report::new(cfg, results, invariants))
}

fn construct(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let p = input_paire(cfg)?;
    let mut results = json!({ "paire": p, "reconstruction_defect": p.reconstruction_defect() });
    if let Some(InputSource::Preset { name: PresetName::Mercedes, .. }) = &cfg.input {
        let h = compute(hilbert_frame_to_schauder(&mercedes_vectors(), &NormedSpace::euclidean(2)))?;
        results["hilbert_frame"] = json!({
            "frame_operator": h.frame_operator.row_iter().map(|r| r.iter().copied().collect::<Vec<_>>()).collect::<Vec<_>>(),
            "alpha": h.alpha,
            "beta": h.beta,
            "dual_vectors": h.dual_vectors,
            "besselian_bound": h.besselian_bound,
        });
    }
    let defect = p.reconstruction_defect();
    let inv = Invariant::new("reconstruction", defect <= cfg.tolerance, json!(defect));
    Ok(Report::new(cfg, results, vec![inv]))
}

fn embed(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let p = input_paire(cfg)?;
    let w_available = p.len() <= DEFAULT_SUBSET_LIMIT;
    let d = p.dim();
    let mut coords = Vec::new();
    for i in 0..d {
        let x = frame_forge::Vector::unit(d, i);
        let z = compute(t0_embed(&p, &x))?;
        let mut row = json!({ "x": x, "coefficients": z.coefficients(), "ze_norm": ze_norm(&z) });
        if w_available {
            row["we_norm"] = json!(compute(we_norm(&z, SubsetMode::default()))?.lower);
        }
        coords.push(row);
    }
    let mut results = json!({ "coordinate_embeddings": coords });
    let mut invariants = Vec::new();
    if cfg.check_sandwich {
        let variants: Vec<Variant> = if w_available { vec![Variant::Z, Variant::W] } else { vec![Variant::Z] };
        let mut checks = serde_json::Map::new();
        for v in variants {
            let key = match v {
                Variant::Z => "z",
                Variant::W => "w",
            };
            let s = compute(sandwich_check(&p, v, cfg.probes, cfg.seed, cfg.tolerance))?;
            let r = compute(projection_check(&p, v, cfg.probes, cfg.seed, cfg.tolerance))?;
            let m = compute(basis_monotonicity_check(&p, v, cfg.probes, cfg.seed))?;
            invariants.push(Invariant::new(format!("sandwich_{key}"), s.pass, json!(s.violations.len())));
            invariants.push(Invariant::new(format!("rho_{key}"), r.pass, json!(r.max_idempotence_defect)));
            invariants.push(Invariant::new(format!("monotone_{key}"), m.pass, json!(m.violations.len())));
            checks.insert(
                key.to_string(),
                json!({
                    "sandwich": s,
                    "sandwich_violations": s.violations.len(),
                    "projection": r,
                    "monotonicity": {
                        "comparisons": m.comparisons,
                        "violations": m.violations.len(),
                        "skipped_terms": m.skipped_terms,
                    },
                }),
            );
        }
        if !w_available {
            checks.insert("w".into(), json!({ "skipped": format!("{} terms exceed the subset cap", p.len()) }));
        }
        results["checks"] = Value::Object(checks);
    }
    Ok(Report::new(cfg, results, invariants))
}

fn haar(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let max_level = cfg.max_level.unwrap_or(MAX_HAAR_LEVEL);
    let rows = compute(besselian_growth_study(max_level))?;
    let mut defects = Vec::new();
    for level in 0..=max_level {
        defects.push(compute(frame_forge::haar::haar_paire(level))?.paire.reconstruction_defect());
    }
    let monotone = rows.windows(2).all(|w| w[0].besselian_exact <= w[1].besselian_exact + 1e-12);
    let invariants = vec![
        Invariant::new("reconstruction", defects.iter().all(|d| *d <= 1e-10), json!(defects)),
        Invariant::new("besselian_nondecreasing", monotone, Value::Null),
        Invariant::new(
            "frame_constant_one",
            rows.iter().all(|r| (r.frame_constant - 1.0).abs() <= 1e-9),
            Value::Null,
        ),
    ];
    let mut report = Report::new(cfg, json!({ "columns": GROWTH_CSV_HEADER, "rows": rows }), invariants);
    report.csv_body = Some(growth_csv(&rows));
    Ok(report)
}
