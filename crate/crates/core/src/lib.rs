//! Schauder frames and besselian paires on finite-dimensional weighted
//! `l^p` spaces: norms and duality, frame and besselian constants with
//! certified bounds, frame constructions, the `Z_E` / `W_E` embeddings and a
//! Haar experiment on discretized `L_1`.

pub mod besselian;
pub mod bounds;
pub mod constructions;
pub mod embeddings;
pub mod error;
pub mod haar;
pub mod linalg;
pub mod operators;
pub mod paires;
pub mod spaces;
pub mod subsets;

pub use besselian::{besselian_constant, besselian_form, BesselianCertificate, BesselianMethod};
pub use bounds::{BoundMethod, BoundPair, SamplingOptions};
pub use constructions::{basis_frame, canonical_frame, direct_sum_frames, hilbert_frame_to_schauder, restrict_frame, CanonicalKind};
pub use embeddings::{FrameElement, Variant};
pub use error::{FrameError, Result};
pub use haar::{haar_paire, HaarDiscretization};
pub use operators::NormMethod;
pub use paires::{Paire, Term};
pub use spaces::{Functional, NormedSpace, Vector};
pub use subsets::SubsetMode;
