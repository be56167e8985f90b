mod common;

use common::*;
use frame_forge::besselian::{holder_besselian_bound, HOLDER_EXPONENT_GRID};
use frame_forge::haar::haar_paire;
use frame_forge::{besselian_constant, BesselianMethod, NormMethod, SamplingOptions};

#[test]
fn exact_besselian_matches_oracle() {
    let mut r = rng(2024);
    for case in 0..250 {
        let p = random_polyhedral_paire(&mut r);
        let cert = besselian_constant(&p, BesselianMethod::Exact).unwrap();
        let oracle = oracle_besselian(&p);
        assert!((cert.constant.lower - oracle).abs() <= 1e-10 * oracle.max(1.0), "case {case}: {cert:?} vs {oracle}");
        let w = cert.witness.unwrap();
        assert!((naive_form(&p, &w.u.0, &w.v_star.0) - oracle).abs() <= 1e-9 * oracle.max(1.0));
        assert!(naive_norm(p.space(), &w.u.0) <= 1.0 + 1e-12);
    }
}

#[test]
fn bounds_bracket_exact() {
    let mut r = rng(77);
    for case in 0..200 {
        let p = random_polyhedral_paire(&mut r);
        let exact = oracle_besselian(&p);
        let opts = SamplingOptions { seed: case, probes: 8 };
        let b = besselian_constant(&p, BesselianMethod::Bounds(opts)).unwrap();
        let tol = 1e-9 * exact.max(1.0);
        assert!(b.constant.lower <= exact + tol, "case {case}");
        assert!(exact <= b.constant.upper + tol, "case {case}");
        for e in HOLDER_EXPONENT_GRID {
            assert!(exact <= holder_besselian_bound(&p, e, &opts).unwrap() + tol, "case {case} exponent {e}");
        }
    }
}

#[test]
fn exact_frame_constant_matches_oracle() {
    let mut r = rng(5);
    for case in 0..200 {
        let p = random_polyhedral_paire(&mut r);
        let k = p.frame_constant(NormMethod::Exact).unwrap();
        let oracle = oracle_frame_constant(&p);
        assert!((k.upper - oracle).abs() <= 1e-10 * oracle.max(1.0), "case {case}");
    }
}

#[test]
fn haar_matches_oracle() {
    for level in 0..=2 {
        let h = haar_paire(level).unwrap();
        let exact = besselian_constant(&h.paire, BesselianMethod::Exact).unwrap().upper();
        assert!((exact - oracle_besselian(&h.paire)).abs() < 1e-10);
        assert!((h.paire.frame_constant(NormMethod::Exact).unwrap().upper - oracle_frame_constant(&h.paire)).abs() < 1e-10);
    }
}
