//! Finite-dimensional weighted `l^p` spaces over the reals.
//!
//! A [`NormedSpace`] carries the norm
//!
//! ```text
//! |x| = (sum_i w_i |x_i|^p)^(1/p)      1 <= p < inf
//! |x| = max_i w_i |x_i|                p = inf
//! ```
//!
//! Functionals are coordinate vectors acting by the dot product, so the dual
//! of `l^p(w)` is again a weighted sequence space: `l^inf(1/w)` for `p = 1`,
//! `l^1(1/w)` for `p = inf`, and `l^q(w^(1-q))` with `q = p/(p-1)` otherwise.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, FrameError, Result};

/// Default cap on the dimension of an `l^inf` ball whose `2^dim` vertices get enumerated.
pub const DEFAULT_VERTEX_DIM_LIMIT: usize = 20;

/// A point of a [`NormedSpace`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(pub Vec<f64>);

/// An element of the dual space, acting by the dot product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Functional(pub Vec<f64>);

impl Vector {
    pub fn zeros(dim: usize) -> Self {
        Vector(vec![0.0; dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        Vector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl Functional {
    pub fn zeros(dim: usize) -> Self {
        Functional(vec![0.0; dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        Functional(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// The pairing `f(x)`.
    pub fn apply(&self, x: &Vector) -> Result<f64> {
        check_dim(self.dim(), x.dim())?;
        Ok(dot(&self.0, &x.0))
    }
}

impl From<Vec<f64>> for Vector {
    fn from(v: Vec<f64>) -> Self {
        Vector(v)
    }
}

impl From<Vec<f64>> for Functional {
    fn from(v: Vec<f64>) -> Self {
        Functional(v)
    }
}

impl AsRef<[f64]> for Vector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

impl AsRef<[f64]> for Functional {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// The pairing `f(x)` as a free function.
pub fn apply(f: &Functional, x: &Vector) -> Result<f64> {
    f.apply(x)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Conjugate exponent `p* = p / (p - 1)`, with `1* = inf` and `inf* = 1`.
pub fn dual_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

fn sign(t: f64) -> f64 {
    if t < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Unweighted `l^p` norm of a slice, scaled against overflow.
pub(crate) fn lp_norm(x: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        return x.iter().fold(0.0_f64, |m, t| m.max(t.abs()));
    }
    if p == 1.0 {
        return x.iter().map(|t| t.abs()).sum();
    }
    let scale = x.iter().fold(0.0_f64, |m, t| m.max(t.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    let s: f64 = x.iter().map(|t| (t.abs() / scale).powf(p)).sum();
    scale * s.powf(1.0 / p)
}

/// A finite-dimensional real space with a (weighted) `l^p` norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpaceDescriptor", into = "SpaceDescriptor")]
pub struct NormedSpace {
    dim: usize,
    p: f64,
    weights: Option<Vec<f64>>,
}

impl NormedSpace {
    pub fn new(dim: usize, p: f64) -> Result<Self> {
        Self::build(dim, p, None)
    }

    pub fn weighted(dim: usize, p: f64, weights: Vec<f64>) -> Result<Self> {
        Self::build(dim, p, Some(weights))
    }

    pub fn l1(dim: usize) -> Self {
        Self::new(dim, 1.0).expect("dim must be positive")
    }

    pub fn euclidean(dim: usize) -> Self {
        Self::new(dim, 2.0).expect("dim must be positive")
    }

    pub fn linf(dim: usize) -> Self {
        Self::new(dim, f64::INFINITY).expect("dim must be positive")
    }

    fn build(dim: usize, p: f64, weights: Option<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(FrameError::InvalidSpace("dim must be at least 1".into()));
        }
        if p.is_nan() || p < 1.0 {
            return Err(FrameError::InvalidSpace(format!("p must be >= 1 or inf, got {p}")));
        }
        if let Some(w) = &weights {
            check_dim(dim, w.len())?;
            if let Some(bad) = w.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
                return Err(FrameError::InvalidSpace(format!("weights must be positive, got {bad}")));
            }
        }
        // Unit weights are stored as `None` so that equal spaces compare equal.
        let weights = weights.filter(|w| w.iter().any(|t| *t != 1.0));
        Ok(NormedSpace { dim, p, weights })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights.as_ref().map_or(1.0, |w| w[i])
    }

    pub fn is_polyhedral(&self) -> bool {
        self.p == 1.0 || self.p.is_infinite()
    }

    pub fn is_euclidean(&self) -> bool {
        self.p == 2.0 && self.weights.is_none()
    }

    /// The dual space under the dot-product pairing.
    pub fn dual(&self) -> NormedSpace {
        let q = dual_exponent(self.p);
        let weights = self.weights.as_ref().map(|w| {
            w.iter()
                .map(|&wi| {
                    if self.is_polyhedral() {
                        1.0 / wi
                    } else {
                        wi.powf(1.0 - q)
                    }
                })
                .collect()
        });
        NormedSpace { dim: self.dim, p: q, weights }
    }

    /// Coordinate scaling `d_i` with `|x| = |(d_i x_i)|_p` (unweighted).
    pub(crate) fn coordinate_scales(&self) -> Vec<f64> {
        (0..self.dim)
            .map(|i| {
                let w = self.weight(i);
                if self.is_polyhedral() {
                    w
                } else {
                    w.powf(1.0 / self.p)
                }
            })
            .collect()
    }

    /// Norm of a raw coordinate slice. The length is assumed to be `dim`.
    pub fn norm_of(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        match &self.weights {
            None => lp_norm(x, self.p),
            Some(w) => {
                if self.p == 1.0 {
                    x.iter().zip(w).map(|(t, wi)| wi * t.abs()).sum()
                } else if self.p.is_infinite() {
                    x.iter().zip(w).fold(0.0_f64, |m, (t, wi)| m.max(wi * t.abs()))
                } else {
                    let scaled: Vec<f64> = x
                        .iter()
                        .zip(w)
                        .map(|(t, wi)| t * wi.powf(1.0 / self.p))
                        .collect();
                    lp_norm(&scaled, self.p)
                }
            }
        }
    }

    /// Dual norm `sup { |f(x)| : |x| <= 1 }` of a raw coordinate slice, in closed form.
    pub fn dual_norm_of(&self, f: &[f64]) -> f64 {
        debug_assert_eq!(f.len(), self.dim);
        match &self.weights {
            None => lp_norm(f, dual_exponent(self.p)),
            Some(w) => {
                if self.p == 1.0 {
                    f.iter().zip(w).fold(0.0_f64, |m, (t, wi)| m.max(t.abs() / wi))
                } else if self.p.is_infinite() {
                    f.iter().zip(w).map(|(t, wi)| t.abs() / wi).sum()
                } else {
                    let q = dual_exponent(self.p);
                    let scaled: Vec<f64> = f
                        .iter()
                        .zip(w)
                        .map(|(t, wi)| t * wi.powf(-1.0 / self.p))
                        .collect();
                    lp_norm(&scaled, q)
                }
            }
        }
    }

    pub fn norm(&self, x: &Vector) -> Result<f64> {
        check_dim(self.dim, x.dim())?;
        Ok(self.norm_of(&x.0))
    }

    pub fn dual_norm(&self, f: &Functional) -> Result<f64> {
        check_dim(self.dim, f.dim())?;
        Ok(self.dual_norm_of(&f.0))
    }

    /// A unit vector `x` with `f(x) = |f|_*`. Ties go to the lowest coordinate.
    pub fn norming_point(&self, f: &[f64]) -> Vec<f64> {
        debug_assert_eq!(f.len(), self.dim);
        let mut x = vec![0.0; self.dim];
        if self.p == 1.0 {
            let mut best = 0;
            let mut best_val = -1.0;
            for (i, t) in f.iter().enumerate() {
                let v = t.abs() / self.weight(i);
                if v > best_val {
                    best = i;
                    best_val = v;
                }
            }
            x[best] = sign(f[best]) / self.weight(best);
            return x;
        }
        if self.p.is_infinite() {
            for (i, t) in f.iter().enumerate() {
                x[i] = sign(*t) / self.weight(i);
            }
            return x;
        }
        let d = self.coordinate_scales();
        let g: Vec<f64> = f.iter().zip(&d).map(|(t, di)| t / di).collect();
        let scale = g.iter().fold(0.0_f64, |m, t| m.max(t.abs()));
        if scale == 0.0 {
            x[0] = 1.0 / d[0];
            return x;
        }
        let q = dual_exponent(self.p);
        let y: Vec<f64> = g.iter().map(|t| sign(*t) * (t.abs() / scale).powf(q - 1.0)).collect();
        let ny = lp_norm(&y, self.p);
        for i in 0..self.dim {
            x[i] = y[i] / ny / d[i];
        }
        x
    }

    /// Vertices of the closed unit ball, using the default `l^inf` dimension cap.
    pub fn extreme_points(&self) -> Result<Vec<Vector>> {
        self.extreme_points_with_limit(DEFAULT_VERTEX_DIM_LIMIT)
    }

    /// Vertices of the closed unit ball: `+-e_i / w_i` for `l^1(w)` and the sign
    /// vectors scaled by `1/w_i` for `l^inf(w)`.
    pub fn extreme_points_with_limit(&self, limit: usize) -> Result<Vec<Vector>> {
        if !self.is_polyhedral() {
            return Err(FrameError::NonPolyhedralNorm(self.p));
        }
        if self.p == 1.0 {
            let mut out = Vec::with_capacity(2 * self.dim);
            for i in 0..self.dim {
                for s in [1.0, -1.0] {
                    let mut v = vec![0.0; self.dim];
                    v[i] = s / self.weight(i);
                    out.push(Vector(v));
                }
            }
            return Ok(out);
        }
        self.check_vertex_limit(limit)?;
        Ok((0..1usize << self.dim).map(|mask| Vector(self.sign_vertex(mask))).collect())
    }

    /// One vertex from each antipodal pair `{e, -e}`, in a fixed order.
    ///
    /// Every absolute-value objective is even, so maximizing over these is the
    /// same as maximizing over all vertices.
    pub(crate) fn vertex_representatives(&self, limit: usize) -> Result<Vec<Vec<f64>>> {
        if !self.is_polyhedral() {
            return Err(FrameError::NonPolyhedralNorm(self.p));
        }
        if self.p == 1.0 {
            return Ok((0..self.dim)
                .map(|i| {
                    let mut v = vec![0.0; self.dim];
                    v[i] = 1.0 / self.weight(i);
                    v
                })
                .collect());
        }
        self.check_vertex_limit(limit)?;
        // bit 0 stays clear: first coordinate positive
        Ok((0..1usize << (self.dim - 1)).map(|m| self.sign_vertex(m << 1)).collect())
    }

    fn check_vertex_limit(&self, limit: usize) -> Result<()> {
        if self.dim > limit {
            Err(FrameError::DimensionTooLarge { what: "l^inf dimension", size: self.dim, limit })
        } else {
            Ok(())
        }
    }

    fn sign_vertex(&self, mask: usize) -> Vec<f64> {
        (0..self.dim)
            .map(|i| {
                let s = if mask >> i & 1 == 1 { -1.0 } else { 1.0 };
                s / self.weight(i)
            })
            .collect()
    }

    /// A random point of the unit sphere (uniform cube sample, renormalized).
    pub fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        loop {
            let x: Vec<f64> = (0..self.dim).map(|_| rng.random_range(-1.0..1.0)).collect();
            let n = self.norm_of(&x);
            if n > 1e-8 {
                return x.into_iter().map(|t| t / n).collect();
            }
        }
    }

    /// The unit coordinate vector `e_i / |e_i|`.
    pub fn unit_coordinate(&self, i: usize) -> Vec<f64> {
        let mut x = vec![0.0; self.dim];
        x[i] = 1.0;
        let n = self.norm_of(&x);
        x[i] = 1.0 / n;
        x
    }
}

/// JSON descriptor: `{"dim": n, "norm": {"kind": "lp", "p": <number or "inf">}, "weights": [..]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDescriptor {
    pub dim: usize,
    pub norm: NormDescriptor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormDescriptor {
    pub kind: NormKindTag,
    pub p: Exponent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKindTag {
    Lp,
}

/// A norm exponent; `inf` is written as the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponent(pub f64);

impl Serialize for Exponent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(p) => Ok(Exponent(p)),
            Raw::Text(t) if matches!(t.as_str(), "inf" | "infinity" | "Infinity") => {
                Ok(Exponent(f64::INFINITY))
            }
            Raw::Text(t) => Err(serde::de::Error::custom(format!("invalid exponent {t:?}"))),
        }
    }
}

impl TryFrom<SpaceDescriptor> for NormedSpace {
    type Error = FrameError;

    fn try_from(d: SpaceDescriptor) -> Result<Self> {
        NormedSpace::build(d.dim, d.norm.p.0, d.weights)
    }
}

impl From<NormedSpace> for SpaceDescriptor {
    fn from(s: NormedSpace) -> Self {
        SpaceDescriptor {
            dim: s.dim,
            norm: NormDescriptor { kind: NormKindTag::Lp, p: Exponent(s.p) },
            weights: s.weights,
        }
    }
}
