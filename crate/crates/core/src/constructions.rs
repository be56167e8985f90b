//! Frame constructors: bases, canonical frames, Hilbert frames, restrictions
//! to complemented subspaces and finite direct sums.

use std::ops::Range;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::besselian::cauchy_schwarz_besselian_bound;
use crate::error::{check_dim, FrameError, Result};
use crate::linalg::{condition_number, matrix_from_columns, max_abs_entry, rank, symmetric_eigenvalues};
use crate::paires::{Paire, Term};
use crate::spaces::{dot, Functional, NormedSpace, Vector};

/// Bases worse conditioned than this are rejected.
pub const MAX_CONDITION: f64 = 1e12;
/// Allowed `max |P^2 - P|` for a projector.
pub const IDEMPOTENCE_TOL: f64 = 1e-10;

/// The paire `(f_j, f_j*)` of a basis and its dual basis.
pub fn basis_frame(space: NormedSpace, basis: &[Vector]) -> Result<Paire> {
    let d = space.dim();
    check_dim(d, basis.len())?;
    for b in basis {
        check_dim(d, b.dim())?;
    }
    let m = matrix_from_columns(basis, d);
    let condition = condition_number(&m);
    if condition.is_nan() || condition > MAX_CONDITION {
        return Err(FrameError::SingularBasis { condition });
    }
    let inv = m.try_inverse().ok_or(FrameError::SingularBasis { condition })?;
    let terms = basis
        .iter()
        .enumerate()
        .map(|(j, b)| Term { a: b.clone(), b_star: Functional(inv.row(j).iter().copied().collect()) })
        .collect();
    Paire::new(space, terms)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CanonicalKind {
    L1,
    Lp(f64),
    LinfC0,
}

/// `(e_n, e_n*)` on `l^1`, `l^p` or `l^inf` of dimension `n`.
pub fn canonical_frame(kind: CanonicalKind, n: usize) -> Result<Paire> {
    let space = match kind {
        CanonicalKind::L1 => NormedSpace::new(n, 1.0)?,
        CanonicalKind::Lp(p) => NormedSpace::new(n, p)?,
        CanonicalKind::LinfC0 => NormedSpace::new(n, f64::INFINITY)?,
    };
    let terms = (0..n).map(|i| Term { a: Vector::unit(n, i), b_star: Functional::unit(n, i) }).collect();
    Paire::new(space, terms)
}

/// The three unit vectors of the Mercedes frame in the plane.
pub fn mercedes_vectors() -> Vec<Vector> {
    let h = 3f64.sqrt() / 2.0;
    vec![Vector(vec![1.0, 0.0]), Vector(vec![-0.5, h]), Vector(vec![-0.5, -h])]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HilbertFrameResult {
    /// `(x_n, <., S^{-1} x_n>)`.
    pub paire: Paire,
    /// `S = sum_n x_n x_n^T`.
    pub frame_operator: DMatrix<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub dual_vectors: Vec<Vector>,
    /// Cauchy-Schwarz besselian constant of the paire.
    pub besselian_bound: f64,
}

/// Turns a Hilbert frame into a Schauder frame via the inverse frame operator.
pub fn hilbert_frame_to_schauder(vectors: &[Vector], space: &NormedSpace) -> Result<HilbertFrameResult> {
    if !space.is_euclidean() {
        return Err(FrameError::NonEuclidean);
    }
    if vectors.is_empty() {
        return Err(FrameError::EmptyInput("a Hilbert frame needs at least one vector"));
    }
    let d = space.dim();
    for v in vectors {
        check_dim(d, v.dim())?;
    }
    let x = matrix_from_columns(vectors, d);
    let s = &x * x.transpose();
    let ev = symmetric_eigenvalues(&s);
    let (alpha, beta) = (ev[0], ev[d - 1]);
    if alpha <= 1e-12 * beta.max(1.0) {
        return Err(FrameError::NotAFrame { lower: alpha });
    }
    let chol = s.clone().cholesky().ok_or(FrameError::NotAFrame { lower: alpha })?;
    let dual = chol.solve(&x);
    let dual_vectors: Vec<Vector> = dual.column_iter().map(|c| Vector(c.iter().copied().collect())).collect();
    let terms = vectors
        .iter()
        .zip(&dual_vectors)
        .map(|(v, g)| Term { a: v.clone(), b_star: Functional(g.0.clone()) })
        .collect();
    let paire = Paire::new(space.clone(), terms)?;
    let besselian_bound = cauchy_schwarz_besselian_bound(vectors, &dual_vectors, space)?;
    Ok(HilbertFrameResult { paire, frame_operator: s, alpha, beta, dual_vectors, besselian_bound })
}

/// Weights making `y -> sum_j y_j beta_j` an isometry from a weighted `l^p`
/// onto the span, when the basis allows it: pairwise disjoint supports for
/// any `p`, or orthogonality in the weighted inner product for `p = 2`.
fn inherited_weights(space: &NormedSpace, basis: &[Vector]) -> Result<Vec<f64>> {
    let p = space.p();
    let disjoint = (0..basis.len()).all(|i| {
        (i + 1..basis.len()).all(|j| basis[i].0.iter().zip(&basis[j].0).all(|(a, b)| *a == 0.0 || *b == 0.0))
    });
    let orthogonal = p == 2.0
        && (0..basis.len()).all(|i| {
            (i + 1..basis.len()).all(|j| {
                let ip: f64 = (0..space.dim()).map(|k| space.weight(k) * basis[i].0[k] * basis[j].0[k]).sum();
                let scale = space.norm_of(&basis[i].0) * space.norm_of(&basis[j].0);
                ip.abs() <= 1e-12 * scale
            })
        });
    if !(disjoint || orthogonal) {
        return Err(FrameError::UnsupportedSubspace(
            "the inherited norm is a weighted l^p norm only for disjointly supported (or, for p = 2, orthogonal) bases"
                .into(),
        ));
    }
    Ok(basis
        .iter()
        .map(|b| {
            let n = space.norm_of(&b.0);
            if p.is_infinite() {
                n
            } else {
                n.powf(p)
            }
        })
        .collect())
}

/// The paire `((P a_n, b_n*|_F))` on the range `F` of the projector `P`,
/// written in the coordinates of `basis`.
///
/// `F` carries the restriction of the ambient norm. Functionals on `F` are
/// extended back to `E` as `y* o (coordinate map)`, which keeps their norm
/// for the inherited norms supported here. If the input has besselian
/// constant `L`, the result has besselian constant at most `L |P|`.
pub fn restrict_frame(paire: &Paire, projector: &DMatrix<f64>, basis: &[Vector]) -> Result<Paire> {
    let d = paire.dim();
    if projector.nrows() != d || projector.ncols() != d {
        return Err(FrameError::DimensionMismatch { expected: d, found: projector.nrows().max(projector.ncols()) });
    }
    if basis.is_empty() {
        return Err(FrameError::EmptyInput("subspace basis"));
    }
    for b in basis {
        check_dim(d, b.dim())?;
    }
    let defect = max_abs_entry(&(projector * projector - projector));
    if defect > IDEMPOTENCE_TOL {
        return Err(FrameError::NotIdempotent { defect });
    }
    let b = matrix_from_columns(basis, d);
    let k = basis.len();
    if rank(&b, 1e-10) != k {
        return Err(FrameError::RangeMismatch("subspace basis is linearly dependent".into()));
    }
    if rank(projector, 1e-10) != k {
        return Err(FrameError::RangeMismatch(format!("projector rank differs from subspace dimension {k}")));
    }
    let scale = max_abs_entry(&b).max(1.0);
    if max_abs_entry(&(projector * &b - &b)) > 1e-10 * scale {
        return Err(FrameError::RangeMismatch("projector does not fix the subspace basis".into()));
    }
    let weights = inherited_weights(paire.space(), basis)?;
    let sub = NormedSpace::weighted(k, paire.space().p(), weights)?;
    let pinv = b
        .clone()
        .pseudo_inverse(1e-12)
        .map_err(|e| FrameError::RangeMismatch(e.to_string()))?;
    let coords = &pinv * projector;
    let terms = paire
        .terms()
        .iter()
        .map(|t| {
            let a: Vec<f64> = (0..k).map(|i| coords.row(i).iter().zip(&t.a.0).map(|(m, x)| m * x).sum()).collect();
            let f: Vec<f64> = basis.iter().map(|bj| dot(&bj.0, &t.b_star.0)).collect();
            Term::new(a, f)
        })
        .collect();
    Paire::new(sub, terms)
}

/// A finite direct sum under the norm `sum_j c_j |x_j|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectSum {
    pub paire: Paire,
    /// `padded[n]` marks the zero pairs added to even out the components.
    pub padded: Vec<bool>,
    /// Coordinates of each component inside the product.
    pub blocks: Vec<Range<usize>>,
    pub component_weights: Vec<f64>,
}

impl DirectSum {
    /// Norm of the coordinate projection onto component `j` (one for a sum norm).
    pub fn projection_norm(&self, _j: usize) -> f64 {
        1.0
    }

    /// `sum_j L_j |rho_j|` from besselian constants of the components.
    pub fn besselian_bound(&self, component_constants: &[f64]) -> Result<f64> {
        check_dim(self.blocks.len(), component_constants.len())?;
        Ok(component_constants.iter().enumerate().map(|(j, l)| l * self.projection_norm(j)).sum())
    }

    /// The coordinate projector onto component `j`.
    pub fn projector(&self, j: usize) -> Result<DMatrix<f64>> {
        let block = self
            .blocks
            .get(j)
            .ok_or(FrameError::IndexOutOfRange { index: j, len: self.blocks.len() })?;
        let d = self.paire.dim();
        Ok(DMatrix::from_fn(d, d, |r, c| if r == c && block.contains(&r) { 1.0 } else { 0.0 }))
    }
}

/// Weights of the `l^1` space carrying `c |x|` on a component, if it is one.
fn sum_norm_weights(space: &NormedSpace, c: f64) -> Result<Vec<f64>> {
    let p = space.p();
    if p == 1.0 {
        return Ok((0..space.dim()).map(|i| c * space.weight(i)).collect());
    }
    if space.dim() == 1 {
        let w = space.weight(0);
        return Ok(vec![c * if p.is_infinite() { w } else { w.powf(1.0 / p) }]);
    }
    Err(FrameError::UnsupportedProductNorm(format!(
        "the sum norm over a {}-dimensional l^{p} component is not a weighted l^p norm",
        space.dim()
    )))
}

/// Interleaves component frames round-robin: term `k N + l` of the result is
/// term `k` of component `l`, padded with `(0, 0)` when component `l` is shorter.
pub fn direct_sum_frames(components: &[(Paire, f64)]) -> Result<DirectSum> {
    if components.is_empty() {
        return Err(FrameError::EmptyInput("direct sum needs at least one component"));
    }
    let mut weights = Vec::new();
    let mut blocks = Vec::new();
    for (p, c) in components {
        if !(c.is_finite() && *c > 0.0) {
            return Err(FrameError::InvalidSpace(format!("component weight must be positive, got {c}")));
        }
        let start = weights.len();
        weights.extend(sum_norm_weights(p.space(), *c)?);
        blocks.push(start..weights.len());
    }
    let d = weights.len();
    let space = NormedSpace::weighted(d, 1.0, weights)?;
    let rounds = components.iter().map(|(p, _)| p.len()).max().unwrap_or(0);
    let mut terms = Vec::with_capacity(rounds * components.len());
    let mut padded = Vec::with_capacity(rounds * components.len());
    for k in 0..rounds {
        for ((p, _), block) in components.iter().zip(&blocks) {
            let mut a = vec![0.0; d];
            let mut f = vec![0.0; d];
            match p.terms().get(k) {
                Some(t) => {
                    a[block.clone()].copy_from_slice(&t.a.0);
                    f[block.clone()].copy_from_slice(&t.b_star.0);
                    padded.push(false);
                }
                None => padded.push(true),
            }
            terms.push(Term::new(a, f));
        }
    }
    Ok(DirectSum {
        paire: Paire::new(space, terms)?,
        padded,
        blocks,
        component_weights: components.iter().map(|(_, c)| *c).collect(),
    })
}
