//! Naive reference implementations, written from the definitions without
//! reusing anything from the library beyond its data types.
#![allow(dead_code)]

use frame_forge::{NormedSpace, Paire, Term};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn weights_of(space: &NormedSpace) -> Vec<f64> {
    (0..space.dim()).map(|i| space.weight(i)).collect()
}

/// `(sum w_i |x_i|^p)^(1/p)` or `max w_i |x_i|`.
pub fn naive_norm(space: &NormedSpace, x: &[f64]) -> f64 {
    let w = weights_of(space);
    let p = space.p();
    if p.is_infinite() {
        x.iter().zip(&w).map(|(a, b)| a.abs() * b).fold(0.0, f64::max)
    } else {
        x.iter().zip(&w).map(|(a, b)| b * a.abs().powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// All sign patterns of length `n`.
fn signs(n: usize) -> Vec<Vec<f64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|s: Vec<f64>| {
                let mut a = s.clone();
                a.push(1.0);
                let mut b = s;
                b.push(-1.0);
                [a, b]
            })
            .collect();
    }
    out
}

/// Every vertex of the unit ball of a weighted `l^1` or `l^inf` space.
pub fn naive_primal_vertices(space: &NormedSpace) -> Vec<Vec<f64>> {
    let w = weights_of(space);
    let n = w.len();
    if space.p() == 1.0 {
        let mut v = Vec::new();
        for i in 0..n {
            for s in [1.0, -1.0] {
                let mut x = vec![0.0; n];
                x[i] = s / w[i];
                v.push(x);
            }
        }
        v
    } else {
        assert!(space.p().is_infinite());
        signs(n).into_iter().map(|s| s.iter().zip(&w).map(|(a, b)| a / b).collect()).collect()
    }
}

/// Vertices of `{f : |f(x)| <= 1 for every x in the unit ball}`.
pub fn naive_dual_vertices(space: &NormedSpace) -> Vec<Vec<f64>> {
    let w = weights_of(space);
    let n = w.len();
    if space.p() == 1.0 {
        // |f(x)| <= 1 on +-e_i / w_i  <=>  |f_i| <= w_i
        signs(n).into_iter().map(|s| s.iter().zip(&w).map(|(a, b)| a * b).collect()).collect()
    } else {
        // |f(x)| <= 1 on all sign vectors s / w  <=>  sum |f_i| / w_i <= 1
        let mut v = Vec::new();
        for i in 0..n {
            for s in [1.0, -1.0] {
                let mut f = vec![0.0; n];
                f[i] = s * w[i];
                v.push(f);
            }
        }
        v
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `sum_n |b_n(u)| |v(a_n)|`.
pub fn naive_form(p: &Paire, u: &[f64], v: &[f64]) -> f64 {
    p.terms().iter().map(|t| dot(&t.b_star.0, u).abs() * dot(v, &t.a.0).abs()).sum()
}

/// Double loop over all vertex pairs.
pub fn oracle_besselian(p: &Paire) -> f64 {
    let mut best = 0.0_f64;
    for u in naive_primal_vertices(p.space()) {
        for v in naive_dual_vertices(p.space()) {
            best = best.max(naive_form(p, &u, &v));
        }
    }
    best
}

/// `max_n max_{vertex u} |S_n u|`.
pub fn oracle_frame_constant(p: &Paire) -> f64 {
    let mut best = 0.0_f64;
    for u in naive_primal_vertices(p.space()) {
        let mut s = vec![0.0; p.dim()];
        for t in p.terms() {
            let c = dot(&t.b_star.0, &u);
            for (si, ai) in s.iter_mut().zip(&t.a.0) {
                *si += c * ai;
            }
            best = best.max(naive_norm(p.space(), &s));
        }
    }
    best
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random paire on `l^1` or `l^inf` (optionally weighted) with `dim <= 3`, `N <= 6`.
pub fn random_polyhedral_paire(rng: &mut ChaCha8Rng) -> Paire {
    let dim = rng.random_range(1..=3usize);
    let n = rng.random_range(1..=6usize);
    let p = if rng.random_bool(0.5) { 1.0 } else { f64::INFINITY };
    let space = if rng.random_bool(0.5) {
        NormedSpace::new(dim, p).unwrap()
    } else {
        NormedSpace::weighted(dim, p, (0..dim).map(|_| rng.random_range(0.25..4.0)).collect()).unwrap()
    };
    random_paire_on(rng, space, n)
}

pub fn random_paire_on(rng: &mut ChaCha8Rng, space: NormedSpace, n: usize) -> Paire {
    let dim = space.dim();
    let terms = (0..n)
        .map(|_| {
            Term::new(
                (0..dim).map(|_| rng.random_range(-2.0..2.0)).collect(),
                (0..dim).map(|_| rng.random_range(-2.0..2.0)).collect(),
            )
        })
        .collect();
    Paire::new(space, terms).unwrap()
}
