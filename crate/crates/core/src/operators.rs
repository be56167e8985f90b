//! Operator norms on weighted `l^p` spaces and `(E -> l^q)` summing norms.
//!
//! Both quantities are suprema of a convex function over a unit ball, so
//! they are attained at extreme points. Polyhedral balls are enumerated,
//! Euclidean cases go through the largest singular value, and the rest get
//! a sampled lower bound plus an analytic upper bound.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::{BoundMethod, BoundPair, SamplingOptions, ASCENT_MAX_ITERS, ASCENT_REL_TOL};
use crate::error::{check_dim, FrameError, Result};
use crate::linalg::{matrix_from_rows, max_column_sum, max_row_sum, spectral_norm};
use crate::spaces::{dot, lp_norm, NormedSpace, DEFAULT_VERTEX_DIM_LIMIT};

/// Exact or sampled evaluation of a supremum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMethod {
    Exact,
    Sampled(SamplingOptions),
}

/// Index and value of the maximum; ties go to the lowest index.
pub(crate) fn par_argmax<T, F>(items: &[T], f: F) -> (usize, f64)
where
    T: Sync,
    F: Fn(&T) -> f64 + Sync,
{
    items
        .par_iter()
        .enumerate()
        .map(|(i, t)| (i, f(t)))
        .reduce(|| (usize::MAX, f64::NEG_INFINITY), prefer_max)
}

fn prefer_max(a: (usize, f64), b: (usize, f64)) -> (usize, f64) {
    if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
        b
    } else {
        a
    }
}

fn mat_vec(m: &DMatrix<f64>, x: &[f64]) -> Vec<f64> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)] * x[j]).sum())
        .collect()
}

fn mat_t_vec(m: &DMatrix<f64>, y: &[f64]) -> Vec<f64> {
    (0..m.ncols())
        .map(|j| (0..m.nrows()).map(|i| m[(i, j)] * y[i]).sum())
        .collect()
}

/// `M D^{-1}` for the coordinate scales `d` of a space.
fn scale_columns(m: &DMatrix<f64>, d: &[f64]) -> DMatrix<f64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] / d[j])
}

/// `D M D^{-1}`.
fn conjugate(m: &DMatrix<f64>, d: &[f64]) -> DMatrix<f64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| d[i] * m[(i, j)] / d[j])
}

/// Riesz-Thorin estimate of the unweighted `l^r -> l^r` norm (exact at r = 1, 2, inf).
fn riesz_thorin(m: &DMatrix<f64>, r: f64) -> f64 {
    if r == 2.0 {
        return spectral_norm(m);
    }
    if r == 1.0 {
        return max_column_sum(m);
    }
    if r.is_infinite() {
        return max_row_sum(m);
    }
    let c = max_column_sum(m);
    let rr = max_row_sum(m);
    c.powf(1.0 / r) * rr.powf(1.0 - 1.0 / r)
}

/// Smallest `c` with `|y|_q <= c |y|_r` on `R^n`.
fn inclusion_constant(n: usize, r: f64, q: f64) -> f64 {
    if q >= r {
        1.0
    } else {
        let inv = |t: f64| if t.is_infinite() { 0.0 } else { 1.0 / t };
        (n as f64).powf(inv(q) - inv(r))
    }
}

/// Runs the linearized ascent `z <- argmax_{|z| <= 1} <g(z), z>` from `start`.
///
/// For a convex objective whose subgradient at `z` is `g(z)`, every step is
/// non-decreasing. Returns the final point and value.
pub(crate) fn linearized_ascent<V, G>(
    domain: &NormedSpace,
    start: Vec<f64>,
    value: V,
    subgradient: G,
) -> (Vec<f64>, f64)
where
    V: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> Vec<f64>,
{
    let mut z = start;
    let mut best = value(&z);
    for _ in 0..ASCENT_MAX_ITERS {
        let g = subgradient(&z);
        if g.iter().all(|t| *t == 0.0) {
            break;
        }
        let next = domain.norming_point(&g);
        let v = value(&next);
        if v <= best * (1.0 + ASCENT_REL_TOL) {
            if v > best {
                best = v;
                z = next;
            }
            break;
        }
        best = v;
        z = next;
    }
    (z, best)
}

/// Structured plus random unit probes of `space`.
pub(crate) fn probe_points(space: &NormedSpace, opts: &SamplingOptions) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut pts: Vec<Vec<f64>> = (0..space.dim()).map(|i| space.unit_coordinate(i)).collect();
    if space.is_polyhedral() {
        if let Ok(v) = space.vertex_representatives(12) {
            pts.extend(v);
        }
    }
    pts.extend((0..opts.probes).map(|_| space.random_unit(&mut rng)));
    pts
}

/// Operator norm of the square matrix `m` acting on `space`.
///
/// Exact for `p` in {1, 2, inf}: vertices for the polyhedral balls, the
/// largest singular value of `D M D^{-1}` for weighted `l^2`.
pub fn operator_norm(space: &NormedSpace, m: &DMatrix<f64>, method: NormMethod) -> Result<BoundPair> {
    check_dim(space.dim(), m.nrows())?;
    check_dim(space.dim(), m.ncols())?;
    match method {
        NormMethod::Exact => operator_norm_exact(space, m),
        NormMethod::Sampled(opts) => Ok(operator_norm_sampled(space, m, &opts)),
    }
}

fn operator_norm_exact(space: &NormedSpace, m: &DMatrix<f64>) -> Result<BoundPair> {
    if space.is_polyhedral() {
        let verts = space.vertex_representatives(DEFAULT_VERTEX_DIM_LIMIT)?;
        let (_, v) = par_argmax(&verts, |u| space.norm_of(&mat_vec(m, u)));
        return Ok(BoundPair::exact(v, BoundMethod::ExtremeExact));
    }
    if space.p() == 2.0 {
        let d = space.coordinate_scales();
        return Ok(BoundPair::exact(spectral_norm(&conjugate(m, &d)), BoundMethod::Spectral));
    }
    Err(FrameError::UnsupportedExactNorm(space.p()))
}

fn operator_norm_sampled(space: &NormedSpace, m: &DMatrix<f64>, opts: &SamplingOptions) -> BoundPair {
    let value = |u: &[f64]| space.norm_of(&mat_vec(m, u));
    let dual = space.dual();
    let subgradient = |u: &[f64]| mat_t_vec(m, &dual.norming_point(&mat_vec(m, u)));
    let probes = probe_points(space, opts);
    let (i, _) = par_argmax(&probes, |u| value(u));
    let (_, lower) = linearized_ascent(space, probes[i].clone(), value, subgradient);
    let d = space.coordinate_scales();
    let upper = riesz_thorin(&conjugate(m, &d), space.p()).max(lower);
    BoundPair::new(lower, BoundMethod::Sampled, upper, BoundMethod::Holder)
}

/// `sup { (sum_n |r_n . z|^q)^(1/q) : |z|_domain <= 1 }` for rows `r_n`.
///
/// This is the norm of `z -> (r_n . z)_n` from `domain` into `l^q`. With
/// `domain = E*` and rows the vectors `x_n` it is the least weak `q`-summing
/// constant of `(x_n)`; with `domain = E` and rows functionals it is the
/// `*`-weak one.
pub fn summing_norm<R: AsRef<[f64]> + Sync>(
    rows: &[R],
    domain: &NormedSpace,
    q: f64,
    opts: &SamplingOptions,
) -> Result<BoundPair> {
    if !(q > 1.0 && q.is_finite()) {
        return Err(FrameError::InvalidExponent(q));
    }
    for r in rows {
        check_dim(domain.dim(), r.as_ref().len())?;
    }
    let n = rows.len();
    if n == 0 {
        return Ok(BoundPair::exact(0.0, BoundMethod::ExtremeExact));
    }
    let value = |z: &[f64]| {
        let s: Vec<f64> = rows.iter().map(|r| dot(r.as_ref(), z)).collect();
        lp_norm(&s, q)
    };

    if domain.is_polyhedral() {
        if let Ok(verts) = domain.vertex_representatives(DEFAULT_VERTEX_DIM_LIMIT) {
            let (_, v) = par_argmax(&verts, |z| value(z));
            return Ok(BoundPair::exact(v, BoundMethod::ExtremeExact));
        }
    }
    let m = matrix_from_rows(rows, domain.dim());
    let d = domain.coordinate_scales();
    let scaled = scale_columns(&m, &d);
    if domain.p() == 2.0 && q == 2.0 {
        return Ok(BoundPair::exact(spectral_norm(&scaled), BoundMethod::Spectral));
    }

    let subgradient = |z: &[f64]| {
        let s: Vec<f64> = rows.iter().map(|r| dot(r.as_ref(), z)).collect();
        let scale = s.iter().fold(0.0_f64, |a, t| a.max(t.abs()));
        if scale == 0.0 {
            return vec![0.0; z.len()];
        }
        let y: Vec<f64> = s
            .iter()
            .map(|t| t.signum() * (t.abs() / scale).powf(q - 1.0))
            .collect();
        mat_t_vec(&m, &y)
    };
    let probes = probe_points(domain, opts);
    let (i, _) = par_argmax(&probes, |z| value(z));
    let (_, lower) = linearized_ascent(domain, probes[i].clone(), value, subgradient);

    let r = domain.p();
    let holder = {
        let dn: Vec<f64> = rows.iter().map(|row| domain.dual_norm_of(row.as_ref())).collect();
        lp_norm(&dn, q)
    };
    let through_r = riesz_thorin(&scaled, r) * inclusion_constant(n, r, q);
    let through_q = inclusion_constant(domain.dim(), r, q) * riesz_thorin(&scaled, q);
    let upper = holder.min(through_r).min(through_q).max(lower);
    Ok(BoundPair::new(lower, BoundMethod::Sampled, upper, BoundMethod::Holder))
}
