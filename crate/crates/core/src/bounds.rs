use serde::{Deserialize, Serialize};

/// How one side of a [`BoundPair`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMethod {
    /// Maximum over the vertices of a polyhedral unit ball.
    ExtremeExact,
    /// Largest singular value of a (rescaled) matrix.
    Spectral,
    /// Exhaustive enumeration of index subsets.
    Enumeration,
    /// Best value over random and structured probes, with ascent refinement.
    Sampled,
    /// Product of Hoelder-type summing constants, or a Riesz-Thorin estimate.
    Holder,
    /// Square roots of Bessel constants.
    CauchySchwarz,
    /// Triangle inequality over the terms, `sum |a_j| |b_j|_*`.
    PrefixSum,
}

impl BoundMethod {
    pub fn is_exact(self) -> bool {
        matches!(self, BoundMethod::ExtremeExact | BoundMethod::Spectral | BoundMethod::Enumeration)
    }
}

/// Two-sided bracket `lower <= value <= upper` with provenance for each side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundPair {
    pub lower: f64,
    pub upper: f64,
    pub lower_method: BoundMethod,
    pub upper_method: BoundMethod,
}

impl BoundPair {
    pub fn exact(value: f64, method: BoundMethod) -> Self {
        BoundPair { lower: value, upper: value, lower_method: method, upper_method: method }
    }

    pub fn new(lower: f64, lower_method: BoundMethod, upper: f64, upper_method: BoundMethod) -> Self {
        debug_assert!(lower <= upper + 1e-12 * upper.abs().max(1.0), "bracket {lower} > {upper}");
        BoundPair { lower, upper, lower_method, upper_method }
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper && self.lower_method.is_exact()
    }

    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }

    /// `true` if `value` lies inside the bracket up to `tol`.
    pub fn contains(&self, value: f64, tol: f64) -> bool {
        self.lower <= value + tol && value <= self.upper + tol
    }
}

/// Seeded probing policy for sampled lower bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplingOptions {
    pub seed: u64,
    /// Random probes drawn in addition to the structured ones.
    pub probes: usize,
}

impl Default for SamplingOptions {
    fn default() -> Self {
        SamplingOptions { seed: 0, probes: 16 }
    }
}

/// Ascent stops once the relative improvement falls below this.
pub const ASCENT_REL_TOL: f64 = 1e-10;
pub const ASCENT_MAX_ITERS: usize = 200;
