//! The monodromy catalog: named fibered-knot monodromies as twist words over
//! labeled curve alphabets, with load-time cross-checks.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fdtc::{fdtc, FdtcConfig, VeerVerdict};
use crate::mapping::{from_word, parse_word, TwistWord};
use crate::surface::oracle::{classify_curve, CurveClass};
use crate::surface::{standard_fiber, CurveCoords, Triangulation};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("cannot read catalog: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse catalog: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unsupported catalog schema {0}")]
    Schema(u64),
    #[error("entry `{entry}`: word letter `{letter}` is not in the alphabet")]
    UnknownLetter { entry: String, letter: char },
    #[error("entry `{entry}`: letter `{letter}` names unknown edge `{edge}`")]
    UnknownEdge {
        entry: String,
        letter: String,
        edge: String,
    },
    #[error("entry `{entry}`: curve `{letter}` fails validation: {detail}")]
    BadCurve {
        entry: String,
        letter: String,
        detail: String,
    },
    #[error("entry `{entry}` rejected as mis-transcribed: {check}")]
    MisTranscribed { entry: String, check: String },
    #[error("no catalog entry named `{0}`")]
    NoSuchEntry(String),
    #[error(transparent)]
    Surface(#[from] crate::surface::SurfaceError),
    #[error(transparent)]
    Fdtc(#[from] crate::fdtc::FdtcError),
    #[error(transparent)]
    Word(#[from] crate::mapping::WordError),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryFlags {
    pub fibered_knot: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_cable: Option<(u64, u64)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RawEntry {
    name: String,
    genus: usize,
    boundary: usize,
    alphabet: BTreeMap<String, BTreeMap<String, u64>>,
    word: String,
    flags: EntryFlags,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RawCatalog {
    schema: u64,
    entries: Vec<RawEntry>,
}

/// A validated catalog entry together with its fiber surface.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub genus: usize,
    pub boundary: usize,
    pub alphabet: BTreeMap<String, CurveCoords>,
    pub word: TwistWord,
    pub flags: EntryFlags,
    pub fiber: Triangulation,
}

impl CatalogEntry {
    pub fn monodromy(&self) -> Result<crate::MappingClass, CatalogError> {
        Ok(from_word(&self.fiber, &self.alphabet, &self.word)?)
    }

    pub fn fdtc_config(&self) -> FdtcConfig {
        let mut cfg = FdtcConfig::for_fiber(&self.fiber, self.flags.fibered_knot);
        if let Some((p, q)) = self.flags.declared_cable {
            cfg.denom_bound = cfg.denom_bound.max(p * q);
        }
        cfg
    }
}

/// How much validation a load performs: structural checks always run; the
/// full level reruns the pinned semantic checks of known entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckLevel {
    Structural,
    Full,
}

pub fn load_catalog_str(text: &str, level: CheckLevel) -> Result<Vec<CatalogEntry>, CatalogError> {
    let raw: RawCatalog = serde_json::from_str(text)?;
    if raw.schema != 1 {
        return Err(CatalogError::Schema(raw.schema));
    }
    raw.entries
        .into_iter()
        .map(|e| validate_entry(e, level))
        .collect()
}

pub fn load_catalog(path: &Path, level: CheckLevel) -> Result<Vec<CatalogEntry>, CatalogError> {
    load_catalog_str(&std::fs::read_to_string(path)?, level)
}

/// The catalog bundled with the crate.
pub fn builtin_catalog() -> Vec<CatalogEntry> {
    load_catalog_str(BUILTIN, CheckLevel::Structural).expect("builtin catalog is valid")
}

pub const BUILTIN: &str = include_str!("../data/catalog.json");

fn validate_entry(raw: RawEntry, level: CheckLevel) -> Result<CatalogEntry, CatalogError> {
    let fiber = standard_fiber(raw.genus, raw.boundary)?;
    let mut alphabet = BTreeMap::new();
    for (letter, weights) in &raw.alphabet {
        let mut coords = CurveCoords::zero(&fiber);
        for (edge_name, w) in weights {
            let e = fiber
                .edge_by_name(edge_name)
                .ok_or_else(|| CatalogError::UnknownEdge {
                    entry: raw.name.clone(),
                    letter: letter.clone(),
                    edge: edge_name.clone(),
                })?;
            coords.weights_mut()[e] = BigUint::from(*w);
        }
        if let Err(e) = coords.admissible(&fiber) {
            return Err(CatalogError::BadCurve {
                entry: raw.name.clone(),
                letter: letter.clone(),
                detail: e.to_string(),
            });
        }
        let comps = coords
            .component_count(&fiber)
            .map_err(|e| CatalogError::BadCurve {
                entry: raw.name.clone(),
                letter: letter.clone(),
                detail: e.to_string(),
            })?;
        if comps != 1 {
            return Err(CatalogError::BadCurve {
                entry: raw.name.clone(),
                letter: letter.clone(),
                detail: format!("{comps} components"),
            });
        }
        match classify_curve(&fiber, &coords) {
            Ok(CurveClass::Essential) => {}
            Ok(other) => {
                return Err(CatalogError::BadCurve {
                    entry: raw.name.clone(),
                    letter: letter.clone(),
                    detail: format!("{other:?}"),
                })
            }
            Err(e) => {
                return Err(CatalogError::BadCurve {
                    entry: raw.name.clone(),
                    letter: letter.clone(),
                    detail: e.to_string(),
                })
            }
        }
        alphabet.insert(letter.clone(), coords);
    }
    let word = parse_word(&raw.word);
    for &(letter, _) in &word.letters {
        if !alphabet.contains_key(&letter.to_string()) {
            return Err(CatalogError::UnknownLetter {
                entry: raw.name.clone(),
                letter,
            });
        }
    }
    let entry = CatalogEntry {
        name: raw.name,
        genus: raw.genus,
        boundary: raw.boundary,
        alphabet,
        word,
        flags: raw.flags,
        fiber,
    };
    if level == CheckLevel::Full {
        cross_check(&entry)?;
    }
    Ok(entry)
}

/// Pinned semantic checks for entries whose invariants are known: a failed
/// check means the transcription of the alphabet or word is wrong.
fn cross_check(entry: &CatalogEntry) -> Result<(), CatalogError> {
    let expectations: &[(&str, BigRational, Option<VeerVerdict>)] = &[
        ("10_153", BigRational::zero(), Some(VeerVerdict::Neither)),
        (
            "3_1",
            BigRational::new(1.into(), 6.into()),
            Some(VeerVerdict::Right),
        ),
        ("4_1", BigRational::zero(), Some(VeerVerdict::Neither)),
    ];
    for (name, expect_fdtc, expect_veer) in expectations {
        if entry.name != *name {
            continue;
        }
        let m = entry.monodromy()?;
        let cert = fdtc(&entry.fiber, &m, 0, &entry.fdtc_config())?;
        match cert.exact() {
            Some(v) if v == expect_fdtc => {}
            other => {
                return Err(CatalogError::MisTranscribed {
                    entry: entry.name.clone(),
                    check: format!("fdtc expected {expect_fdtc}, got {other:?}"),
                })
            }
        }
        if let Some(veer) = expect_veer {
            if cert.veering != *veer {
                return Err(CatalogError::MisTranscribed {
                    entry: entry.name.clone(),
                    check: format!("veering expected {veer:?}, got {:?}", cert.veering),
                });
            }
        }
    }
    Ok(())
}

pub fn find_entry<'a>(
    entries: &'a [CatalogEntry],
    name: &str,
) -> Result<&'a CatalogEntry, CatalogError> {
    entries
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| CatalogError::NoSuchEntry(name.to_string()))
}

/// Builds the raw JSON value of the built-in catalog from first principles;
/// the bundled file is kept in sync with this by a test.
pub fn builtin_catalog_source() -> String {
    let mut entries = Vec::new();
    for (name, genus, word, letters) in [
        ("3_1", 1usize, "ab", 2usize),
        ("m3_1", 1, "AB", 2),
        ("4_1", 1, "aB", 2),
        ("10_153", 3, "abcBEGhcd", 8),
    ] {
        let fiber = standard_fiber(genus, 1).expect("fiber");
        let mut alphabet: BTreeMap<String, BTreeMap<String, u64>> = BTreeMap::new();
        for (i, letter) in ('a'..='z').take(letters.min(2 * genus)).enumerate() {
            let c = &fiber.labels.curves[&format!("c{}", i + 1)];
            alphabet.insert(letter.to_string(), weights_by_name(&fiber, c));
        }
        if letters > 2 * genus {
            // The extra letters are the dual curves through the first
            // handles.
            for (k, letter) in ('a'..='z')
                .skip(2 * genus)
                .take(letters - 2 * genus)
                .enumerate()
            {
                let side = format!("a{}", k + 1);
                let c = crate::surface::polygon_curve(
                    genus,
                    1,
                    &fiber,
                    &[(side.as_str(), 0, side.as_str(), 1)],
                );
                alphabet.insert(letter.to_string(), weights_by_name(&fiber, &c));
            }
        }
        entries.push(RawEntry {
            name: name.to_string(),
            genus,
            boundary: 1,
            alphabet,
            word: word.to_string(),
            flags: EntryFlags {
                fibered_knot: true,
                declared_cable: None,
            },
        });
    }
    let raw = RawCatalog { schema: 1, entries };
    serde_json::to_string_pretty(&raw).expect("serialize catalog")
}

fn weights_by_name(t: &Triangulation, c: &CurveCoords) -> BTreeMap<String, u64> {
    let mut out = BTreeMap::new();
    for (e, w) in c.weights().iter().enumerate() {
        if !w.is_zero() {
            out.insert(
                t.edge_name(e).to_string(),
                w.to_u64().expect("catalog weights are small"),
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_catalog_is_in_sync() {
        assert_eq!(
            BUILTIN.trim(),
            builtin_catalog_source().trim(),
            "regenerate data/catalog.json from builtin_catalog_source()"
        );
    }

    #[test]
    fn builtin_loads_structurally() {
        let entries = builtin_catalog();
        assert_eq!(entries.len(), 4);
        let k = find_entry(&entries, "10_153").unwrap();
        assert_eq!(k.genus, 3);
        assert_eq!(k.word.to_string(), "abcBEGhcd");
        assert_eq!(k.alphabet.len(), 8);
    }

    #[test]
    fn unknown_letter_rejected() {
        let mut text: serde_json::Value = serde_json::from_str(BUILTIN).unwrap();
        text["entries"][0]["word"] = serde_json::Value::String("az".into());
        let err = load_catalog_str(&text.to_string(), CheckLevel::Structural).unwrap_err();
        assert!(err.to_string().contains('z'), "{err}");
    }
}
