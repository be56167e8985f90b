//! Paires `((a_n, b_n*))`, their partial-sum operators and the frame constant.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{BoundMethod, BoundPair, SamplingOptions};
use crate::error::{check_dim, FrameError, Result};
use crate::linalg::{matrix_from_columns, rank};
use crate::operators::{operator_norm, probe_points, NormMethod};
use crate::spaces::{dot, Functional, NormedSpace, Vector};

/// Default relative tolerance for reconstruction checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// One pair `(a, b*)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub a: Vector,
    pub b_star: Functional,
}

impl Term {
    pub fn new(a: Vec<f64>, b_star: Vec<f64>) -> Self {
        Term { a: Vector(a), b_star: Functional(b_star) }
    }

    pub fn is_zero(&self) -> bool {
        self.a.0.iter().all(|t| *t == 0.0) || self.b_star.0.iter().all(|t| *t == 0.0)
    }
}

/// A finite sequence of (vector, functional) pairs on a common space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PaireRecord", into = "PaireRecord")]
pub struct Paire {
    space: NormedSpace,
    terms: Vec<Term>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PaireRecord {
    space: NormedSpace,
    terms: Vec<Term>,
}

impl TryFrom<PaireRecord> for Paire {
    type Error = FrameError;

    fn try_from(r: PaireRecord) -> Result<Self> {
        Paire::new(r.space, r.terms)
    }
}

impl From<Paire> for PaireRecord {
    fn from(p: Paire) -> Self {
        PaireRecord { space: p.space, terms: p.terms }
    }
}

impl Paire {
    pub fn new(space: NormedSpace, terms: Vec<Term>) -> Result<Self> {
        if terms.is_empty() {
            return Err(FrameError::EmptyInput("a paire needs at least one term"));
        }
        for t in &terms {
            check_dim(space.dim(), t.a.dim())?;
            check_dim(space.dim(), t.b_star.dim())?;
            if t.a.0.iter().chain(&t.b_star.0).any(|v| !v.is_finite()) {
                return Err(FrameError::InvalidPaire("non-finite coordinate".into()));
            }
        }
        Ok(Paire { space, terms })
    }

    /// Builds a paire from raw coordinate lists.
    pub fn from_parts(space: NormedSpace, vectors: Vec<Vec<f64>>, functionals: Vec<Vec<f64>>) -> Result<Self> {
        check_dim(vectors.len(), functionals.len())?;
        let terms = vectors.into_iter().zip(functionals).map(|(a, b)| Term::new(a, b)).collect();
        Paire::new(space, terms)
    }

    pub fn space(&self) -> &NormedSpace {
        &self.space
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn vectors(&self) -> Vec<&[f64]> {
        self.terms.iter().map(|t| t.a.as_slice()).collect()
    }

    pub fn functionals(&self) -> Vec<&[f64]> {
        self.terms.iter().map(|t| t.b_star.as_slice()).collect()
    }

    /// Same space, terms replaced.
    pub fn with_terms(&self, terms: Vec<Term>) -> Result<Self> {
        Paire::new(self.space.clone(), terms)
    }

    /// Frame coefficients `b_n*(x)`.
    pub fn coefficients(&self, x: &[f64]) -> Vec<f64> {
        self.terms.iter().map(|t| dot(&t.b_star.0, x)).collect()
    }

    /// `sum_{j < n} c_j a_j` over the first `n` terms.
    pub fn synthesize(&self, coefficients: &[f64], n: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        for (t, c) in self.terms.iter().zip(coefficients).take(n) {
            for (o, a) in out.iter_mut().zip(&t.a.0) {
                *o += c * a;
            }
        }
        out
    }

    /// `S_n(x) = sum_{j=1}^n b_j*(x) a_j` for `1 <= n <= N`.
    pub fn partial_sum(&self, n: usize, x: &Vector) -> Result<Vector> {
        check_dim(self.dim(), x.dim())?;
        if n == 0 || n > self.len() {
            return Err(FrameError::IndexOutOfRange { index: n, len: self.len() });
        }
        let c = self.coefficients(&x.0[..]);
        Ok(Vector(self.synthesize(&c, n)))
    }

    /// Matrix of `S_n`, i.e. `sum_{j <= n} a_j b_j^T`.
    pub fn partial_sum_matrix(&self, n: usize) -> DMatrix<f64> {
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        for t in self.terms.iter().take(n) {
            for i in 0..d {
                for j in 0..d {
                    m[(i, j)] += t.a.0[i] * t.b_star.0[j];
                }
            }
        }
        m
    }

    /// Coordinate vectors plus `k` seeded random probes.
    pub fn default_probes(&self, k: usize, seed: u64) -> Vec<Vector> {
        let d = self.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut probes: Vec<Vector> = (0..d).map(|i| Vector::unit(d, i)).collect();
        probes.extend((0..k).map(|_| Vector(self.space.random_unit(&mut rng))));
        probes
    }

    /// Checks `x = sum_n b_n*(x) a_n` on every probe.
    pub fn check_schauder_frame(&self, probes: &[Vector], tol: f64) -> Result<ReconstructionReport> {
        if probes.is_empty() {
            return Err(FrameError::EmptyInput("reconstruction probes"));
        }
        let n_terms = self.len();
        let mut residuals = Vec::with_capacity(probes.len());
        let mut relative_final = Vec::with_capacity(probes.len());
        for x in probes {
            check_dim(self.dim(), x.dim())?;
            let c = self.coefficients(&x.0);
            let mut partial = vec![0.0; self.dim()];
            let mut seq = Vec::with_capacity(n_terms);
            for (t, cn) in self.terms.iter().zip(&c) {
                for (s, a) in partial.iter_mut().zip(&t.a.0) {
                    *s += cn * a;
                }
                let diff: Vec<f64> = x.0.iter().zip(&partial).map(|(u, v)| u - v).collect();
                seq.push(self.space.norm_of(&diff));
            }
            let scale = self.space.norm_of(&x.0).max(1.0);
            relative_final.push(seq[n_terms - 1] / scale);
            residuals.push(seq);
        }
        let max_final_residual = relative_final.iter().fold(0.0_f64, |a, &b| a.max(b));
        let probe_matrix = matrix_from_columns(&probes.iter().map(|p| p.0.clone()).collect::<Vec<_>>(), self.dim());
        let probe_rank = rank(&probe_matrix, 1e-12);
        Ok(ReconstructionReport {
            residuals,
            max_final_residual,
            tolerance: tol,
            pass: max_final_residual <= tol,
            probe_rank,
            proven: probe_rank == self.dim(),
        })
    }

    /// Reconstruction check on the coordinate vectors alone, which span the space.
    pub fn reconstruction_defect(&self) -> f64 {
        let d = self.dim();
        (0..d)
            .map(|i| {
                let x = Vector::unit(d, i);
                let c = self.coefficients(&x.0);
                let s = self.synthesize(&c, self.len());
                let diff: Vec<f64> = x.0.iter().zip(&s).map(|(u, v)| u - v).collect();
                self.space.norm_of(&diff) / self.space.norm_of(&x.0).max(1.0)
            })
            .fold(0.0, f64::max)
    }

    pub fn is_schauder_frame(&self, tol: f64) -> bool {
        self.reconstruction_defect() <= tol
    }

    pub(crate) fn ensure_schauder_frame(&self, tol: f64) -> Result<()> {
        let residual = self.reconstruction_defect();
        if residual <= tol {
            Ok(())
        } else {
            Err(FrameError::NotASchauderFrame { residual })
        }
    }

    /// Operator norms of `S_1, ..., S_N`.
    pub fn prefix_norms(&self, method: NormMethod) -> Result<Vec<BoundPair>> {
        (1..=self.len())
            .map(|n| operator_norm(&self.space, &self.partial_sum_matrix(n), method))
            .collect()
    }

    /// The frame constant `K_F = max_n |S_n|`.
    ///
    /// Exact for `p` in {1, 2, inf}. The sampled variant brackets it between
    /// the best probe ratio `|S_n u| / |u|` and `max_n sum_{j <= n} |a_j| |b_j*|_*`.
    pub fn frame_constant(&self, method: NormMethod) -> Result<BoundPair> {
        match method {
            NormMethod::Exact => {
                let norms = self.prefix_norms(NormMethod::Exact)?;
                let best = norms.iter().map(|b| b.lower).fold(0.0, f64::max);
                Ok(BoundPair::exact(best, norms[0].lower_method))
            }
            NormMethod::Sampled(opts) => Ok(self.frame_constant_sampled(&opts)),
        }
    }

    fn frame_constant_sampled(&self, opts: &SamplingOptions) -> BoundPair {
        let probes = probe_points(&self.space, opts);
        let mut lower = 0.0_f64;
        for u in &probes {
            let c = self.coefficients(u);
            let mut partial = vec![0.0; self.dim()];
            for (t, cn) in self.terms.iter().zip(&c) {
                for (s, a) in partial.iter_mut().zip(&t.a.0) {
                    *s += cn * a;
                }
                lower = lower.max(self.space.norm_of(&partial));
            }
        }
        let mut running = 0.0;
        let mut upper = 0.0_f64;
        for t in &self.terms {
            running += self.space.norm_of(&t.a.0) * self.space.dual_norm_of(&t.b_star.0);
            upper = upper.max(running);
        }
        BoundPair::new(lower, BoundMethod::Sampled, upper.max(lower), BoundMethod::PrefixSum)
    }
}

/// Outcome of a reconstruction check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionReport {
    /// `residuals[k][n-1] = |x_k - S_n(x_k)|` for probe `k`.
    pub residuals: Vec<Vec<f64>>,
    /// Largest `|x - S_N(x)| / max(1, |x|)` over the probes.
    pub max_final_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub probe_rank: usize,
    /// The probes span the space, so a pass holds for every vector.
    pub proven: bool,
}
