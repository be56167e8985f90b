//! Besselian constants and the summing constants that bound them.
//!
//! For a paire `F = ((a_n, b_n*))` the besselian form is
//!
//! ```text
//! B(u, v*) = sum_n |b_n*(u)| |v*(a_n)|
//! ```
//!
//! and `L_F` is its supremum over the product of the unit balls of `E` and
//! `E*`. For fixed `v*` the form is a sum of absolute values of linear
//! functions of `u`, hence convex in `u`; symmetrically it is convex in `v*`
//! for fixed `u`. A convex function on a polytope attains its maximum at a
//! vertex, so applying this once in each argument shows the supremum over
//! the product of balls equals the maximum over the product of their vertex
//! sets. That is what the exact method enumerates when both balls are
//! polytopes (`p` in {1, inf}).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{BoundMethod, BoundPair, SamplingOptions, ASCENT_MAX_ITERS, ASCENT_REL_TOL};
use crate::error::{check_dim, FrameError, Result};
use crate::linalg::{matrix_from_rows, spectral_norm};
use crate::operators::{par_argmax, probe_points, summing_norm};
use crate::paires::Paire;
use crate::spaces::{dot, dual_exponent, Functional, NormedSpace, Vector, DEFAULT_VERTEX_DIM_LIMIT};
use crate::subsets::{subset_sup, SubsetMode};

/// Exponents tried when minimizing the Hoelder bound (the space exponent and
/// its conjugate are added when they lie in `(1, inf)`).
pub const HOLDER_EXPONENT_GRID: [f64; 7] = [1.1, 1.25, 1.5, 2.0, 3.0, 5.0, 10.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BesselianMethod {
    Exact,
    Bounds(SamplingOptions),
}

/// A pair `(u, v*)` in the product of unit balls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub u: Vector,
    pub v_star: Functional,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BesselianCertificate {
    pub constant: BoundPair,
    pub is_exact: bool,
    /// Attains `constant.lower`.
    pub witness: Option<Witness>,
    /// Alternating-ascent rounds spent refining the lower bound.
    pub iterations: usize,
    pub seed: Option<u64>,
    /// Hoelder exponent achieving the reported upper bound, if that bound is Hoelder.
    pub holder_exponent: Option<f64>,
}

impl BesselianCertificate {
    /// The certified constant to use in downstream bounds.
    pub fn upper(&self) -> f64 {
        self.constant.upper
    }
}

/// `sum_n |b_n*(u)| |v*(a_n)|`.
pub fn besselian_form(paire: &Paire, u: &Vector, v_star: &Functional) -> Result<f64> {
    check_dim(paire.dim(), u.dim())?;
    check_dim(paire.dim(), v_star.dim())?;
    Ok(form_of(paire, &u.0, &v_star.0))
}

fn form_of(paire: &Paire, u: &[f64], v: &[f64]) -> f64 {
    paire
        .terms()
        .iter()
        .map(|t| dot(&t.b_star.0, u).abs() * dot(v, &t.a.0).abs())
        .sum()
}

/// Computes `L_F` exactly (polyhedral norms) or brackets it.
pub fn besselian_constant(paire: &Paire, method: BesselianMethod) -> Result<BesselianCertificate> {
    match method {
        BesselianMethod::Exact => besselian_exact(paire, DEFAULT_VERTEX_DIM_LIMIT),
        BesselianMethod::Bounds(opts) => besselian_bounds(paire, &opts),
    }
}

/// Exact `L_F` with an explicit cap on the `l^inf` dimension being enumerated.
pub fn besselian_exact(paire: &Paire, limit: usize) -> Result<BesselianCertificate> {
    let space = paire.space();
    if !space.is_polyhedral() {
        return Err(FrameError::NonPolyhedralNorm(space.p()));
    }
    let dual = space.dual();
    let us = space.vertex_representatives(limit)?;
    let vs = dual.vertex_representatives(limit)?;

    let coeffs: Vec<Vec<f64>> = us.iter().map(|u| paire.coefficients(u).iter().map(|c| c.abs()).collect()).collect();
    let actions: Vec<Vec<f64>> = vs
        .iter()
        .map(|v| paire.vectors().iter().map(|a| dot(v, a).abs()).collect())
        .collect();

    // best v for each u, ties to the lowest index
    let per_u: Vec<(usize, f64)> = coeffs
        .par_iter()
        .map(|c| {
            let mut best = (0, f64::NEG_INFINITY);
            for (j, act) in actions.iter().enumerate() {
                let val: f64 = c.iter().zip(act).map(|(x, y)| x * y).sum();
                if val > best.1 {
                    best = (j, val);
                }
            }
            best
        })
        .collect();
    let (i, value) = par_argmax(&per_u, |(_, v)| *v);
    let j = per_u[i].0;
    Ok(BesselianCertificate {
        constant: BoundPair::exact(value, BoundMethod::ExtremeExact),
        is_exact: true,
        witness: Some(Witness { u: Vector(us[i].clone()), v_star: Functional(vs[j].clone()) }),
        iterations: 0,
        seed: None,
        holder_exponent: None,
    })
}

/// Alternating linearized ascent on the besselian form, starting from `(u, v)`.
fn refine(paire: &Paire, mut u: Vec<f64>, mut v: Vec<f64>) -> (Vec<f64>, Vec<f64>, f64, usize) {
    let space = paire.space();
    let dual = space.dual();
    let mut best = form_of(paire, &u, &v);
    let mut rounds = 0;
    while rounds < ASCENT_MAX_ITERS {
        rounds += 1;
        // v-step: maximize sum_n |b_n(u)| |v(a_n)| over the dual ball
        let mut g = vec![0.0; space.dim()];
        for t in paire.terms() {
            let w = dot(&t.b_star.0, &u).abs() * dot(&v, &t.a.0).signum();
            for (gi, ai) in g.iter_mut().zip(&t.a.0) {
                *gi += w * ai;
            }
        }
        let v_next = if g.iter().any(|t| *t != 0.0) { dual.norming_point(&g) } else { v.clone() };
        // u-step with v fixed
        let mut h = vec![0.0; space.dim()];
        for t in paire.terms() {
            let w = dot(&v_next, &t.a.0).abs() * dot(&t.b_star.0, &u).signum();
            for (hi, bi) in h.iter_mut().zip(&t.b_star.0) {
                *hi += w * bi;
            }
        }
        let u_next = if h.iter().any(|t| *t != 0.0) { space.norming_point(&h) } else { u.clone() };
        let val = form_of(paire, &u_next, &v_next);
        if val > best {
            let improved = val > best * (1.0 + ASCENT_REL_TOL);
            best = val;
            u = u_next;
            v = v_next;
            if improved {
                continue;
            }
        }
        break;
    }
    (u, v, best, rounds)
}

fn besselian_bounds(paire: &Paire, opts: &SamplingOptions) -> Result<BesselianCertificate> {
    let space = paire.space();
    let dual = space.dual();
    let us = probe_points(space, opts);
    let vs = probe_points(&dual, &SamplingOptions { seed: opts.seed.wrapping_add(1), probes: opts.probes });

    let pairs: Vec<(usize, usize)> = (0..us.len()).flat_map(|i| (0..vs.len()).map(move |j| (i, j))).collect();
    let (k, _) = par_argmax(&pairs, |&(i, j)| form_of(paire, &us[i], &vs[j]));
    let (i, j) = pairs[k];
    let (u, v, lower, iterations) = refine(paire, us[i].clone(), vs[j].clone());

    let mut upper = f64::INFINITY;
    let mut upper_method = BoundMethod::Holder;
    let mut holder_exponent = None;
    for e in holder_exponents(space.p()) {
        let b = holder_besselian_bound(paire, e, opts)?;
        if b < upper {
            upper = b;
            holder_exponent = Some(e);
        }
    }
    if space.is_euclidean() {
        let cs = cauchy_schwarz_besselian_bound(&paire.vectors(), &paire.functionals(), space)?;
        if cs < upper {
            upper = cs;
            upper_method = BoundMethod::CauchySchwarz;
            holder_exponent = None;
        }
    }
    Ok(BesselianCertificate {
        constant: BoundPair::new(lower, BoundMethod::Sampled, upper.max(lower), upper_method),
        is_exact: false,
        witness: Some(Witness { u: Vector(u), v_star: Functional(v) }),
        iterations,
        seed: Some(opts.seed),
        holder_exponent,
    })
}

fn holder_exponents(p: f64) -> Vec<f64> {
    let mut grid = HOLDER_EXPONENT_GRID.to_vec();
    for e in [p, dual_exponent(p)] {
        if e > 1.0 && e.is_finite() && !grid.contains(&e) {
            grid.push(e);
        }
    }
    grid
}

/// Least `C` with `(sum_n |f*(x_n)|^p)^(1/p) <= C |f*|_{E*}`: the norm of
/// `U: f* -> (f*(x_n))_n` from `E*` into `l^p`.
pub fn weak_p_summing_constant(
    vectors: &[Vector],
    space: &NormedSpace,
    p: f64,
    opts: &SamplingOptions,
) -> Result<BoundPair> {
    let rows: Vec<&[f64]> = vectors.iter().map(|v| v.as_slice()).collect();
    summing_norm(&rows, &space.dual(), p, opts)
}

/// Least `C` with `(sum_n |f_n*(x)|^p)^(1/p) <= C |x|_E`: the norm of
/// `V: x -> (f_n*(x))_n` from `E` into `l^p`.
pub fn star_weak_p_summing_constant(
    functionals: &[Functional],
    space: &NormedSpace,
    p: f64,
    opts: &SamplingOptions,
) -> Result<BoundPair> {
    let rows: Vec<&[f64]> = functionals.iter().map(|f| f.as_slice()).collect();
    summing_norm(&rows, space, p, opts)
}

/// `L_F <= C_V(e*) C_U(e)`: Hoelder's inequality between the weak
/// `e`-summing constant of `(a_n)` and the `*`-weak `e*`-summing constant
/// of `(b_n*)`. Upper bounds of both factors are used.
pub fn holder_besselian_bound(paire: &Paire, exponent: f64, opts: &SamplingOptions) -> Result<f64> {
    if !(exponent > 1.0 && exponent.is_finite()) {
        return Err(FrameError::InvalidExponent(exponent));
    }
    let space = paire.space();
    let c_u = summing_norm(&paire.vectors(), &space.dual(), exponent, opts)?;
    let c_v = summing_norm(&paire.functionals(), space, dual_exponent(exponent), opts)?;
    Ok(c_v.upper * c_u.upper)
}

fn require_euclidean(space: &NormedSpace) -> Result<()> {
    if space.is_euclidean() {
        Ok(())
    } else {
        Err(FrameError::NonEuclidean)
    }
}

/// Optimal Bessel bound `B` in `sum_n <y, y_n>^2 <= B |y|^2`: the largest
/// eigenvalue of `sum_n y_n y_n^T`.
pub fn bessel_sequence_constant<V: AsRef<[f64]>>(vectors: &[V], space: &NormedSpace) -> Result<f64> {
    require_euclidean(space)?;
    for v in vectors {
        check_dim(space.dim(), v.as_ref().len())?;
    }
    if vectors.is_empty() {
        return Ok(0.0);
    }
    let s = spectral_norm(&matrix_from_rows(vectors, space.dim()));
    Ok(s * s)
}

/// `sqrt(B_f) sqrt(B_g)`, a besselian constant for the paire `(f_n, <., g_n>)`.
pub fn cauchy_schwarz_besselian_bound<V: AsRef<[f64]>, W: AsRef<[f64]>>(
    f_vectors: &[V],
    g_vectors: &[W],
    space: &NormedSpace,
) -> Result<f64> {
    let bf = bessel_sequence_constant(f_vectors, space)?;
    let bg = bessel_sequence_constant(g_vectors, space)?;
    Ok(bf.sqrt() * bg.sqrt())
}

/// `sum_n |a_n| |b_n*|_*`.
pub fn nuclearity_sum(paire: &Paire) -> f64 {
    let space = paire.space();
    paire
        .terms()
        .iter()
        .map(|t| space.norm_of(&t.a.0) * space.dual_norm_of(&t.b_star.0))
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnconditionalReport {
    /// `max_A |sum_{j in A} b_j*(x) a_j|` over nonempty subsets.
    pub subset_sup: BoundPair,
    /// Zero-based indices of the worst subset.
    pub witness: Vec<usize>,
    /// `tail_sup[k]`: the same maximum restricted to subsets with smallest index `>= k`.
    pub tail_sup: Vec<f64>,
    /// `L * |x|`, when a besselian bound was supplied.
    pub besselian_bound: Option<f64>,
    pub pass: bool,
}

/// Subset sums of the expansion of `x`.
///
/// Every subset sum is at most `L_F |x|` for a besselian paire, since its norm
/// is `sup_v |sum_A b_j*(x) v(a_j)|`. With a bound `L` supplied, `pass` means
/// the worst subset obeys it (relative slack `tol`); without one, `pass` only
/// records that the tail maxima are nonincreasing and vanish past the last term.
pub fn unconditional_convergence_check(
    paire: &Paire,
    x: &Vector,
    besselian_upper: Option<f64>,
    mode: SubsetMode,
    tol: f64,
) -> Result<UnconditionalReport> {
    check_dim(paire.dim(), x.dim())?;
    let c = paire.coefficients(&x.0);
    let terms: Vec<Vec<f64>> = paire
        .terms()
        .iter()
        .zip(&c)
        .map(|(t, cn)| t.a.0.iter().map(|a| cn * a).collect())
        .collect();
    let sup = subset_sup(paire.space(), &terms, mode)?;
    let norm_x = paire.space().norm_of(&x.0);
    let bound = besselian_upper.map(|l| l * norm_x);
    let pass = match bound {
        Some(b) => sup.value.lower <= b + tol * norm_x.max(1.0),
        None => {
            sup.tail.windows(2).all(|w| w[0] >= w[1]) && sup.tail.last().is_none_or(|t| *t == 0.0)
        }
    };
    Ok(UnconditionalReport {
        subset_sup: sup.value,
        witness: sup.witness,
        tail_sup: sup.tail,
        besselian_bound: bound,
        pass,
    })
}

/// Seeded RNG shared by callers that need reproducible random paires.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
