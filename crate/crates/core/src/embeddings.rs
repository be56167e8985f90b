//! The sequence-space norms `Z_E` and `W_E`, the embeddings `T_0`, `T_2`,
//! and the projection `rho`, at finite length.
//!
//! An element is stored by its coefficients `c_n`; it represents the
//! sequence `(c_n a_n)_n`. The `W_E` norm is a supremum over permuted
//! prefixes. For finitely many terms every permuted prefix is a subset and
//! every subset is a permuted prefix, so it is computed as a subset supremum.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::besselian::{besselian_constant, BesselianCertificate, BesselianMethod};
use crate::bounds::{BoundPair, SamplingOptions};
use crate::error::{check_dim, FrameError, Result};
use crate::operators::NormMethod;
use crate::paires::{Paire, DEFAULT_TOLERANCE};
use crate::spaces::Vector;
use crate::subsets::{subset_sup, SubsetMode};

/// A finitely supported element of `Z_E` or `W_E` over a fixed paire.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameElement<'a> {
    paire: &'a Paire,
    coefficients: Vec<f64>,
}

/// Serialized form, with the paire replaced by a caller-chosen identifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameElementRecord {
    pub paire_ref: String,
    pub coefficients: Vec<f64>,
}

impl<'a> FrameElement<'a> {
    pub fn new(paire: &'a Paire, coefficients: Vec<f64>) -> Result<Self> {
        check_dim(paire.len(), coefficients.len())?;
        Ok(FrameElement { paire, coefficients })
    }

    pub fn zero(paire: &'a Paire) -> Self {
        FrameElement { paire, coefficients: vec![0.0; paire.len()] }
    }

    /// The basis element `A_n` (zero-based `n`).
    pub fn basis(paire: &'a Paire, n: usize) -> Result<Self> {
        if n >= paire.len() {
            return Err(FrameError::IndexOutOfRange { index: n, len: paire.len() });
        }
        let mut c = vec![0.0; paire.len()];
        c[n] = 1.0;
        Ok(FrameElement { paire, coefficients: c })
    }

    pub fn from_record(paire: &'a Paire, record: &FrameElementRecord) -> Result<Self> {
        Self::new(paire, record.coefficients.clone())
    }

    pub fn to_record(&self, paire_ref: &str) -> FrameElementRecord {
        FrameElementRecord { paire_ref: paire_ref.to_owned(), coefficients: self.coefficients.clone() }
    }

    pub fn paire(&self) -> &'a Paire {
        self.paire
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// The represented terms `c_n a_n`.
    pub fn terms(&self) -> Vec<Vec<f64>> {
        self.paire
            .terms()
            .iter()
            .zip(&self.coefficients)
            .map(|(t, c)| t.a.0.iter().map(|a| c * a).collect())
            .collect()
    }

    /// `sum_n c_n a_n`.
    pub fn sum(&self) -> Vec<f64> {
        self.paire.synthesize(&self.coefficients, self.paire.len())
    }

    pub fn scaled(&self, s: f64) -> Self {
        FrameElement { paire: self.paire, coefficients: self.coefficients.iter().map(|c| s * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.paire != other.paire {
            return Err(FrameError::InvalidPaire("elements over different paires".into()));
        }
        let c = self.coefficients.iter().zip(&other.coefficients).map(|(a, b)| a + b).collect();
        Ok(FrameElement { paire: self.paire, coefficients: c })
    }

    /// Keeps coefficients whose index satisfies `keep`.
    pub fn restricted(&self, keep: impl Fn(usize) -> bool) -> Self {
        let c = self.coefficients.iter().enumerate().map(|(i, c)| if keep(i) { *c } else { 0.0 }).collect();
        FrameElement { paire: self.paire, coefficients: c }
    }
}

/// `max_n |sum_{j <= n} c_j a_j|`.
pub fn ze_norm(z: &FrameElement) -> f64 {
    let space = z.paire.space();
    let mut partial = vec![0.0; space.dim()];
    let mut best = 0.0_f64;
    for (t, c) in z.paire.terms().iter().zip(&z.coefficients) {
        for (s, a) in partial.iter_mut().zip(&t.a.0) {
            *s += c * a;
        }
        best = best.max(space.norm_of(&partial));
    }
    best
}

/// `max_A |sum_{j in A} c_j a_j|` over nonempty subsets.
pub fn we_norm(z: &FrameElement, mode: SubsetMode) -> Result<BoundPair> {
    Ok(subset_sup(z.paire.space(), &z.terms(), mode)?.value)
}

/// `T_0 x = (b_n*(x) a_n)_n`.
pub fn t0_embed<'a>(paire: &'a Paire, x: &Vector) -> Result<FrameElement<'a>> {
    check_dim(paire.dim(), x.dim())?;
    paire.ensure_schauder_frame(DEFAULT_TOLERANCE)?;
    Ok(FrameElement { paire, coefficients: paire.coefficients(&x.0) })
}

/// Exact besselian certificate for polyhedral norms, bounds otherwise.
pub fn default_certificate(paire: &Paire, opts: &SamplingOptions) -> Result<BesselianCertificate> {
    if paire.space().is_polyhedral() {
        besselian_constant(paire, BesselianMethod::Exact)
    } else {
        besselian_constant(paire, BesselianMethod::Bounds(*opts))
    }
}

/// `T_2 x`, the same coefficients as `T_0 x`, for a paire with a finite
/// besselian certificate. Without one, a certificate is computed.
pub fn t2_embed<'a>(
    paire: &'a Paire,
    x: &Vector,
    certificate: Option<&BesselianCertificate>,
) -> Result<FrameElement<'a>> {
    let computed;
    let cert = match certificate {
        Some(c) => c,
        None => {
            computed = default_certificate(paire, &SamplingOptions::default())?;
            &computed
        }
    };
    if !cert.upper().is_finite() {
        return Err(FrameError::NotBesselianCertified);
    }
    t0_embed(paire, x)
}

/// `rho(z) = (b_n*(sum_m c_m a_m) a_n)_n`, the projection onto the range of
/// the embedding. The same map serves `Z_E` and `W_E`.
pub fn rho_project<'a>(z: &FrameElement<'a>) -> Result<FrameElement<'a>> {
    z.paire.ensure_schauder_frame(DEFAULT_TOLERANCE)?;
    let s = z.sum();
    Ok(FrameElement { paire: z.paire, coefficients: z.paire.coefficients(&s) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Z,
    W,
}

impl Variant {
    pub fn norm(self, z: &FrameElement) -> Result<f64> {
        match self {
            Variant::Z => Ok(ze_norm(z)),
            Variant::W => Ok(we_norm(z, SubsetMode::default())?.lower),
        }
    }
}

/// Relative slack used by the comparisons in the checks below.
const CHECK_TOL: f64 = 1e-12;

fn random_coefficients(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityViolation {
    pub trial: usize,
    pub coefficients: Vec<f64>,
    /// Zero-based index sets with `smaller` contained in `larger`.
    pub smaller: Vec<usize>,
    pub larger: Vec<usize>,
    pub smaller_norm: f64,
    pub larger_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub variant: Variant,
    pub trials: usize,
    pub comparisons: usize,
    pub violations: Vec<MonotonicityViolation>,
    /// Terms with `a_n = 0` or `b_n* = 0`, left out of the checks.
    pub skipped_terms: Vec<usize>,
    pub seed: u64,
    pub pass: bool,
}

/// Random coefficient vectors `alpha`; checks `|sum_{j<=n} alpha_j A_j|`
/// is nondecreasing in `n`, and for `W` also that `|sum_{A} alpha_j A_j|`
/// grows along a random chain `A` contained in `A'`.
pub fn basis_monotonicity_check(paire: &Paire, variant: Variant, trials: usize, seed: u64) -> Result<MonotonicityReport> {
    let n = paire.len();
    let skipped: Vec<usize> = (0..n).filter(|&i| paire.terms()[i].is_zero()).collect();
    if !skipped.is_empty() {
        log::warn!("basis check skips zero terms {skipped:?}");
    }
    let active: Vec<usize> = (0..n).filter(|i| !skipped.contains(i)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    let mut comparisons = 0;
    for trial in 0..trials {
        let mut alpha = random_coefficients(&mut rng, n);
        for &i in &skipped {
            alpha[i] = 0.0;
        }
        let z = FrameElement::new(paire, alpha.clone())?;
        let mut chains: Vec<Vec<usize>> = vec![active.clone()];
        if variant == Variant::W {
            let mut order = active.clone();
            order.shuffle(&mut rng);
            chains.push(order);
        }
        for chain in chains {
            let mut prev: Option<(Vec<usize>, f64)> = None;
            for k in 1..=chain.len() {
                let mut set: Vec<usize> = chain[..k].to_vec();
                set.sort_unstable();
                let part = z.restricted(|i| set.binary_search(&i).is_ok());
                let value = variant.norm(&part)?;
                if let Some((small, v)) = &prev {
                    comparisons += 1;
                    if *v > value + CHECK_TOL * value.max(1.0) {
                        violations.push(MonotonicityViolation {
                            trial,
                            coefficients: alpha.clone(),
                            smaller: small.clone(),
                            larger: set.clone(),
                            smaller_norm: *v,
                            larger_norm: value,
                        });
                    }
                }
                prev = Some((set, value));
            }
        }
    }
    Ok(MonotonicityReport {
        variant,
        trials,
        comparisons,
        pass: violations.is_empty(),
        violations,
        skipped_terms: skipped,
        seed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichViolation {
    pub x: Vec<f64>,
    pub norm_x: f64,
    pub embedded_norm: f64,
}

/// `|x| <= |T x| <= C |x|` on random probes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub variant: Variant,
    /// `K_F` for `Z`, `L_F` for `W` (upper end of the certified bracket).
    pub constant: BoundPair,
    pub probes: usize,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub violations: Vec<SandwichViolation>,
    pub tolerance: f64,
    pub seed: u64,
    pub pass: bool,
}

/// Random probes `x = r u` with `u` a random unit vector and `r` in `[0.1, 10)`.
pub fn random_probes(paire: &Paire, count: usize, seed: u64) -> Vec<Vector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let u = paire.space().random_unit(&mut rng);
            let r = 10f64.powf(rng.random_range(-1.0..1.0));
            Vector(u.into_iter().map(|t| t * r).collect())
        })
        .collect()
}

/// The constant bounding `|T x|`: the frame constant for `Z`, the besselian
/// constant for `W`. Exact where available.
pub fn embedding_constant(paire: &Paire, variant: Variant, opts: &SamplingOptions) -> Result<BoundPair> {
    match variant {
        Variant::Z => {
            let p = paire.space().p();
            if paire.space().is_polyhedral() || p == 2.0 {
                paire.frame_constant(NormMethod::Exact)
            } else {
                paire.frame_constant(NormMethod::Sampled(*opts))
            }
        }
        Variant::W => Ok(default_certificate(paire, opts)?.constant),
    }
}

pub fn sandwich_check(paire: &Paire, variant: Variant, probes: usize, seed: u64, tol: f64) -> Result<SandwichReport> {
    let opts = SamplingOptions { seed, ..SamplingOptions::default() };
    let constant = embedding_constant(paire, variant, &opts)?;
    let cert = match variant {
        Variant::W => Some(default_certificate(paire, &opts)?),
        Variant::Z => None,
    };
    let mut min_ratio = f64::INFINITY;
    let mut max_ratio = 0.0_f64;
    let mut violations = Vec::new();
    for x in random_probes(paire, probes, seed) {
        let z = match variant {
            Variant::Z => t0_embed(paire, &x)?,
            Variant::W => t2_embed(paire, &x, cert.as_ref())?,
        };
        let nz = variant.norm(&z)?;
        let nx = paire.space().norm_of(&x.0);
        if nx > 0.0 {
            min_ratio = min_ratio.min(nz / nx);
            max_ratio = max_ratio.max(nz / nx);
        }
        if nx > nz + tol || nz > constant.upper * nx + tol {
            violations.push(SandwichViolation { x: x.0, norm_x: nx, embedded_norm: nz });
        }
    }
    Ok(SandwichReport {
        variant,
        constant,
        probes,
        min_ratio,
        max_ratio,
        pass: violations.is_empty(),
        violations,
        tolerance: tol,
        seed,
    })
}

/// Idempotence and boundedness of `rho` on random elements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionReport {
    pub variant: Variant,
    pub trials: usize,
    /// Largest `|rho(rho(z)) - rho(z)|` in the variant norm.
    pub max_idempotence_defect: f64,
    /// Largest `|rho(z)| / |z|`.
    pub max_ratio: f64,
    pub constant: BoundPair,
    pub bound_violations: usize,
    pub pass: bool,
}

pub fn projection_check(paire: &Paire, variant: Variant, trials: usize, seed: u64, tol: f64) -> Result<ProjectionReport> {
    let opts = SamplingOptions { seed, ..SamplingOptions::default() };
    let constant = embedding_constant(paire, variant, &opts)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut defect = 0.0_f64;
    let mut max_ratio = 0.0_f64;
    let mut bound_violations = 0;
    for _ in 0..trials {
        let z = FrameElement::new(paire, random_coefficients(&mut rng, paire.len()))?;
        let r = rho_project(&z)?;
        let rr = rho_project(&r)?;
        defect = defect.max(variant.norm(&rr.add(&r.scaled(-1.0))?)?);
        let nz = variant.norm(&z)?;
        let nr = variant.norm(&r)?;
        if nz > 0.0 {
            max_ratio = max_ratio.max(nr / nz);
        }
        if nr > constant.upper * nz + tol {
            bound_violations += 1;
        }
    }
    Ok(ProjectionReport {
        variant,
        trials,
        max_idempotence_defect: defect,
        max_ratio,
        constant,
        bound_violations,
        pass: bound_violations == 0 && defect <= 1e-12,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{canonical_frame, CanonicalKind};
    use crate::spaces::NormedSpace;

    fn halves() -> Paire {
        Paire::from_parts(NormedSpace::l1(1), vec![vec![1.0], vec![1.0]], vec![vec![0.5], vec![0.5]]).unwrap()
    }

    #[test]
    fn ze_examples() {
        let l1 = canonical_frame(CanonicalKind::L1, 3).unwrap();
        let linf = canonical_frame(CanonicalKind::LinfC0, 3).unwrap();
        let c = vec![1.0, -2.0, 3.0];
        assert_eq!(ze_norm(&FrameElement::new(&l1, c.clone()).unwrap()), 6.0);
        assert_eq!(ze_norm(&FrameElement::new(&linf, c).unwrap()), 3.0);
        assert_eq!(ze_norm(&FrameElement::zero(&l1)), 0.0);
    }

    #[test]
    fn we_examples() {
        let l1 = canonical_frame(CanonicalKind::L1, 3).unwrap();
        let z = FrameElement::new(&l1, vec![1.0, -2.0, 3.0]).unwrap();
        assert_eq!(we_norm(&z, SubsetMode::default()).unwrap().lower, 6.0);
        let p = Paire::from_parts(NormedSpace::l1(1), vec![vec![1.0], vec![1.0]], vec![vec![1.0], vec![0.0]]).unwrap();
        let z = FrameElement::new(&p, vec![1.0, -1.0]).unwrap();
        assert_eq!(we_norm(&z, SubsetMode::default()).unwrap().lower, 1.0);
        assert_eq!(we_norm(&FrameElement::zero(&l1), SubsetMode::default()).unwrap().lower, 0.0);
        let big = canonical_frame(CanonicalKind::L1, 5).unwrap();
        let z = FrameElement::new(&big, vec![1.0; 5]).unwrap();
        assert!(matches!(we_norm(&z, SubsetMode::Exact { limit: 4 }), Err(FrameError::DimensionTooLarge { .. })));
    }

    #[test]
    fn t0_examples() {
        let l2 = canonical_frame(CanonicalKind::Lp(2.0), 4).unwrap();
        for x in random_probes(&l2, 10, 3) {
            let z = t0_embed(&l2, &x).unwrap();
            assert!((ze_norm(&z) - l2.space().norm_of(&x.0)).abs() < 1e-12);
        }
        assert_eq!(ze_norm(&t0_embed(&l2, &Vector::zeros(4)).unwrap()), 0.0);
        let h = halves();
        let z = t0_embed(&h, &Vector(vec![1.0])).unwrap();
        assert_eq!(z.coefficients(), &[0.5, 0.5]);
        assert_eq!(ze_norm(&z), 1.0);

        let broken = Paire::from_parts(NormedSpace::l1(1), vec![vec![1.0]], vec![vec![2.0]]).unwrap();
        assert!(matches!(t0_embed(&broken, &Vector(vec![1.0])), Err(FrameError::NotASchauderFrame { .. })));
    }

    #[test]
    fn t2_examples() {
        let l1 = canonical_frame(CanonicalKind::L1, 3).unwrap();
        let z = t2_embed(&l1, &Vector(vec![1.0, -2.0, 3.0]), None).unwrap();
        assert_eq!(we_norm(&z, SubsetMode::default()).unwrap().lower, 6.0);
        let l2 = canonical_frame(CanonicalKind::Lp(2.0), 4).unwrap();
        for x in random_probes(&l2, 5, 9) {
            let z = t2_embed(&l2, &x, None).unwrap();
            let w = we_norm(&z, SubsetMode::default()).unwrap().lower;
            assert!((w - l2.space().norm_of(&x.0)).abs() < 1e-12);
        }
        let mut cert = default_certificate(&l1, &SamplingOptions::default()).unwrap();
        cert.constant.upper = f64::INFINITY;
        assert_eq!(t2_embed(&l1, &Vector::zeros(3), Some(&cert)).unwrap_err(), FrameError::NotBesselianCertified);
    }

    #[test]
    fn rho_examples() {
        let l1 = canonical_frame(CanonicalKind::L1, 3).unwrap();
        let z = FrameElement::new(&l1, vec![0.3, -1.0, 2.0]).unwrap();
        assert_eq!(rho_project(&z).unwrap(), z);
        let h = halves();
        let z = FrameElement::new(&h, vec![1.0, 0.0]).unwrap();
        let r = rho_project(&z).unwrap();
        assert_eq!(r.coefficients(), &[0.5, 0.5]);
        assert_eq!(rho_project(&r).unwrap(), r);
        let x = t0_embed(&h, &Vector(vec![2.5])).unwrap();
        assert_eq!(rho_project(&x).unwrap(), x);
    }

    #[test]
    fn monotonicity_examples() {
        let l1 = canonical_frame(CanonicalKind::L1, 4).unwrap();
        for v in [Variant::Z, Variant::W] {
            let r = basis_monotonicity_check(&l1, v, 100, 1).unwrap();
            assert!(r.pass, "{r:?}");
            assert!(r.comparisons > 0);
            assert!(basis_monotonicity_check(&halves(), v, 100, 2).unwrap().pass);
        }
        let zero = Paire::from_parts(NormedSpace::l1(1), vec![vec![1.0], vec![0.0]], vec![vec![1.0], vec![1.0]]).unwrap();
        let r = basis_monotonicity_check(&zero, Variant::W, 10, 0).unwrap();
        assert_eq!(r.skipped_terms, vec![1]);
    }

    #[test]
    fn sandwich_and_projection() {
        let l1 = canonical_frame(CanonicalKind::L1, 3).unwrap();
        for v in [Variant::Z, Variant::W] {
            assert!(sandwich_check(&l1, v, 50, 5, 1e-9).unwrap().pass);
            let r = projection_check(&halves(), v, 50, 5, 1e-9).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn record_round_trip() {
        let l1 = canonical_frame(CanonicalKind::L1, 2).unwrap();
        let z = FrameElement::new(&l1, vec![1.0, 2.0]).unwrap();
        let json = serde_json::to_string(&z.to_record("canonical_l1")).unwrap();
        assert_eq!(json, r#"{"paire_ref":"canonical_l1","coefficients":[1.0,2.0]}"#);
        let back: FrameElementRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(FrameElement::from_record(&l1, &back).unwrap(), z);
    }
}
