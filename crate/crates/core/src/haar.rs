//! The Haar system on step functions over `2^k` dyadic cells of `[0, 1]`,
//! viewed as a subspace of `L_1`, and the growth of its besselian constants.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::besselian::{besselian_constant, nuclearity_sum, BesselianMethod};
use crate::error::{FrameError, Result};
use crate::operators::NormMethod;
use crate::paires::{Paire, Term};
use crate::spaces::NormedSpace;

/// Largest supported level; exact constants enumerate `2^(2^level - 1)` dual vertices.
pub const MAX_HAAR_LEVEL: u32 = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HaarDiscretization {
    pub level: u32,
    pub cells: usize,
    pub paire: Paire,
}

/// Haar vectors in the usual order: the constant, then for `j = 0..level`
/// the `2^j` steps `+s` / `-s` on consecutive halves of each dyadic
/// interval of length `2^-j`, with `s = 2^j` so every vector has `L_1`
/// norm one. The vectors are orthogonal for the plain dot product, so the
/// coordinate functionals are `h_n / <h_n, h_n>`.
pub fn haar_paire(level: u32) -> Result<HaarDiscretization> {
    if level > MAX_HAAR_LEVEL {
        return Err(FrameError::LevelTooLarge { level, limit: MAX_HAAR_LEVEL });
    }
    let n = 1usize << level;
    let space = NormedSpace::weighted(n, 1.0, vec![1.0 / n as f64; n])?;
    let mut vectors = vec![vec![1.0; n]];
    for j in 0..level {
        let width = n >> j;
        let s = (1u64 << j) as f64;
        for m in 0..(1usize << j) {
            let mut h = vec![0.0; n];
            for (i, hi) in h.iter_mut().enumerate().skip(m * width).take(width) {
                *hi = if i < m * width + width / 2 { s } else { -s };
            }
            vectors.push(h);
        }
    }
    let terms = vectors
        .into_iter()
        .map(|h| {
            let sq: f64 = h.iter().map(|t| t * t).sum();
            let f = h.iter().map(|t| t / sq).collect();
            Term::new(h, f)
        })
        .collect();
    Ok(HaarDiscretization { level, cells: n, paire: Paire::new(space, terms)? })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub level: u32,
    #[serde(rename = "N")]
    pub n: usize,
    pub besselian_exact: f64,
    pub frame_constant: f64,
    pub nuclearity_sum: f64,
}

pub const GROWTH_CSV_HEADER: &str = "level,N,besselian_exact,frame_constant,nuclearity_sum";

/// Exact besselian and frame constants for levels `0..=max_level`.
pub fn besselian_growth_study(max_level: u32) -> Result<Vec<GrowthRow>> {
    if max_level > MAX_HAAR_LEVEL {
        return Err(FrameError::LevelTooLarge { level: max_level, limit: MAX_HAAR_LEVEL });
    }
    (0..=max_level)
        .into_par_iter()
        .map(|level| {
            let h = haar_paire(level)?;
            Ok(GrowthRow {
                level,
                n: h.cells,
                besselian_exact: besselian_constant(&h.paire, BesselianMethod::Exact)?.upper(),
                frame_constant: h.paire.frame_constant(NormMethod::Exact)?.upper,
                nuclearity_sum: nuclearity_sum(&h.paire),
            })
        })
        .collect()
}

/// Formats a float with 17 significant digits.
pub fn format_sig17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn growth_csv(rows: &[GrowthRow]) -> String {
    let mut out = String::from(GROWTH_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.level,
            r.n,
            format_sig17(r.besselian_exact),
            format_sig17(r.frame_constant),
            format_sig17(r.nuclearity_sum)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{matrix_from_columns, rank};

    #[test]
    fn level_zero() {
        let h = haar_paire(0).unwrap();
        assert_eq!(h.cells, 1);
        assert_eq!(h.paire.terms()[0], Term::new(vec![1.0], vec![1.0]));
        assert_eq!(h.paire.reconstruction_defect(), 0.0);
    }

    #[test]
    fn level_one() {
        let h = haar_paire(1).unwrap();
        assert_eq!(h.paire.vectors(), vec![&[1.0, 1.0][..], &[1.0, -1.0][..]]);
        for a in h.paire.vectors() {
            assert_eq!(h.paire.space().norm_of(a), 1.0);
        }
    }

    #[test]
    fn all_levels_reconstruct() {
        for level in 0..=MAX_HAAR_LEVEL {
            let h = haar_paire(level).unwrap();
            assert_eq!(h.paire.len(), h.cells);
            assert_eq!(h.paire.reconstruction_defect(), 0.0);
            let m = matrix_from_columns(&h.paire.vectors(), h.cells);
            assert_eq!(rank(&m, 1e-12), h.cells);
            for a in h.paire.vectors() {
                assert_eq!(h.paire.space().norm_of(a), 1.0);
            }
        }
        assert_eq!(haar_paire(5).unwrap_err(), FrameError::LevelTooLarge { level: 5, limit: 4 });
    }

    #[test]
    fn growth_table() {
        let rows = besselian_growth_study(3).unwrap();
        assert_eq!(rows[0].besselian_exact, 1.0);
        for w in rows.windows(2) {
            assert!(w[0].besselian_exact <= w[1].besselian_exact + 1e-12);
        }
        for r in &rows {
            assert!((r.frame_constant - 1.0).abs() < 1e-9);
        }
        let csv = growth_csv(&rows[..1]);
        assert_eq!(
            csv,
            "level,N,besselian_exact,frame_constant,nuclearity_sum\n0,1,1.0000000000000000e0,1.0000000000000000e0,1.0000000000000000e0\n"
        );
    }
}
