use frame_forge::constructions::{canonical_frame, hilbert_frame_to_schauder, mercedes_vectors, CanonicalKind};
use frame_forge::haar::haar_paire;
use frame_forge::{NormedSpace, Paire, Term};

use crate::config::{InputSource, PresetName};
use crate::CliError;

pub const DEFAULT_N: usize = 3;
pub const DEFAULT_P: f64 = 2.0;
pub const DEFAULT_LEVEL: u32 = 2;

pub fn preset(name: PresetName, n: Option<usize>, p: Option<f64>, level: Option<u32>) -> Result<Paire, CliError> {
    let n = n.unwrap_or(DEFAULT_N);
    let out = match name {
        PresetName::CanonicalL1 => canonical_frame(CanonicalKind::L1, n),
        PresetName::CanonicalLp => canonical_frame(CanonicalKind::Lp(p.unwrap_or(DEFAULT_P)), n),
        PresetName::CanonicalC0 => canonical_frame(CanonicalKind::LinfC0, n),
        PresetName::Mercedes => hilbert_frame_to_schauder(&mercedes_vectors(), &NormedSpace::euclidean(2)).map(|r| r.paire),
        PresetName::Haar => haar_paire(level.unwrap_or(DEFAULT_LEVEL)).map(|h| h.paire),
    };
    out.map_err(|e| CliError::Config(format!("preset {name:?}: {e}")))
}

pub fn load(input: &InputSource) -> Result<Paire, CliError> {
    match input {
        InputSource::Preset { name, n, p, level } => preset(*name, *n, *p, *level),
        InputSource::File { path } => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            parse_paire(&text)
        }
        InputSource::Inline { paire } => Ok(paire.clone()),
    }
}

pub fn parse_paire(text: &str) -> Result<Paire, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid paire JSON: {e}")))
}

/// Scales every functional by two and leaves the vectors alone, so that
/// `S_N = 2 Id`.
pub fn corrupt(p: &Paire) -> Paire {
    let terms = p
        .terms()
        .iter()
        .map(|t| Term::new(t.a.0.clone(), t.b_star.0.iter().map(|x| 2.0 * x).collect()))
        .collect();
    p.with_terms(terms).expect("same shape as a valid paire")
}

/// Named presets used by the verification suites.
pub fn suite_presets() -> Vec<(String, Paire)> {
    let mut out = vec![
        ("canonical_l1".to_string(), preset(PresetName::CanonicalL1, Some(4), None, None)),
        ("canonical_lp(3)".to_string(), preset(PresetName::CanonicalLp, Some(4), Some(3.0), None)),
        ("canonical_lp(2)".to_string(), preset(PresetName::CanonicalLp, Some(4), Some(2.0), None)),
        ("canonical_c0".to_string(), preset(PresetName::CanonicalC0, Some(4), None, None)),
        ("mercedes".to_string(), preset(PresetName::Mercedes, None, None, None)),
    ];
    for level in 0..=3 {
        out.push((format!("haar({level})"), preset(PresetName::Haar, None, None, Some(level))));
    }
    out.into_iter().map(|(n, p)| (n, p.expect("presets are valid"))).collect()
}
