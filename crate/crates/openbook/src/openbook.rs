//! Cable open books, band-sum curves and Stallings twists.
//!
//! The (2,1)-cable of an open book doubles the fiber genus: the cable page is
//! the standard fiber of twice the genus, the two copies of the original page
//! embed as the front and back halves of its handle chain, and the exchange
//! carrying one copy to the other is the half power of the chain relation,
//! which squares to exactly one boundary twist. The cable monodromy is the
//! exchange composed with the original monodromy acting on the first copy.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::fdtc::{fdtc, FdtcCertificate, FdtcConfig, FdtcError};
use crate::mapping::{
    from_word, intersection_number, twist, AnalyzeError, MappingClass, MoveError, TwistError,
    TwistWord, WordError,
};
use crate::surface::oracle::{classify_curve, nonseparating, CurveClass, OracleError};
use crate::surface::{standard_fiber, BasedArc, CurveCoords, SurfaceError, Triangulation};

#[derive(Debug, Error)]
pub enum OpenBookError {
    #[error("cable requires a connected binding (found {0} components)")]
    DisconnectedBinding(usize),
    #[error("cable validation failed at stage `{stage}`: {detail}")]
    CableValidation { stage: String, detail: String },
    #[error("band sum arc is separating in the companion fiber")]
    SeparatingArc,
    #[error("band sum produced a non-simple curve ({0} components)")]
    BandSumNotSimple(usize),
    #[error("stallings twist curve is not essential")]
    InessentialCurve,
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Twist(#[from] TwistError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Move(#[from] MoveError),
    #[error(transparent)]
    Fdtc(#[from] FdtcError),
    #[error(transparent)]
    Analyze(#[from] AnalyzeError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Coords(#[from] crate::surface::CoordsError),
}

/// Construction history, enough to replay the open book deterministically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Catalog {
        name: String,
        genus: usize,
        word: String,
    },
    Cable {
        base: Box<Provenance>,
        p: u64,
        q: u64,
    },
    Stallings {
        base: Box<Provenance>,
        curve: String,
        sign: i64,
    },
}

impl Provenance {
    pub fn describe(&self) -> String {
        match self {
            Provenance::Catalog { name, word, .. } => format!("catalog:{name}[{word}]"),
            Provenance::Cable { base, p, q } => format!("cable({p},{q}) of {}", base.describe()),
            Provenance::Stallings { base, curve, sign } => {
                format!("stallings({curve},{sign:+}) of {}", base.describe())
            }
        }
    }
}

/// An abstract open book: a fiber surface and a boundary-fixing monodromy.
#[derive(Clone)]
pub struct OpenBook {
    pub fiber: Triangulation,
    pub monodromy: MappingClass,
    pub genus: usize,
    pub provenance: Provenance,
    /// The declared reducing multicurve of a cable, when one exists.
    pub reducing: Option<CurveCoords>,
}

impl OpenBook {
    pub fn from_word_on_fiber(
        name: &str,
        genus: usize,
        alphabet: &BTreeMap<String, CurveCoords>,
        word: &TwistWord,
    ) -> Result<OpenBook, OpenBookError> {
        let fiber = standard_fiber(genus, 1)?;
        let monodromy = from_word(&fiber, alphabet, word)?;
        Ok(OpenBook {
            fiber,
            monodromy,
            genus,
            provenance: Provenance::Catalog {
                name: name.to_string(),
                genus,
                word: word.to_string(),
            },
            reducing: None,
        })
    }
}

/// The simplicial involution of the symmetric cable fiber, built by
/// mirroring edge names between the two copies and across the band.
fn cable_involution(t: &Triangulation) -> Result<crate::mapping::RelabelData, OpenBookError> {
    let mirror = |name: &str| -> String {
        if let Some(base) = name.strip_suffix(".0") {
            format!("{base}.1")
        } else if let Some(base) = name.strip_suffix(".1") {
            format!("{base}.0")
        } else if name == "s0" {
            "s1".into()
        } else if name == "s1" {
            "s0".into()
        } else if name == "dL" {
            "dR".into()
        } else if name == "dR" {
            "dL".into()
        } else {
            name.to_string()
        }
    };
    let mut edge_map = Vec::with_capacity(t.edge_count());
    for e in 0..t.edge_count() {
        let m = mirror(t.edge_name(e));
        let target = t
            .edge_by_name(&m)
            .ok_or_else(|| OpenBookError::CableValidation {
                stage: "involution".into(),
                detail: format!("no mirror edge for {}", t.edge_name(e)),
            })?;
        edge_map.push(target);
    }
    // Each triangle maps onto the one carrying the mirrored edge cycle.
    let n_tris = t.tri_count();
    let mut slot_map = vec![usize::MAX; 3 * n_tris];
    for tri in 0..n_tris {
        let want: Vec<EdgeIdAlias> = (0..3).map(|k| edge_map[t.edge_of(3 * tri + k)]).collect();
        let mut found = false;
        'scan: for tri2 in 0..n_tris {
            for rot in 0..3 {
                if (0..3).all(|k| t.edge_of(3 * tri2 + (k + rot) % 3) == want[k]) {
                    for k in 0..3 {
                        slot_map[3 * tri + k] = 3 * tri2 + (k + rot) % 3;
                    }
                    found = true;
                    break 'scan;
                }
            }
        }
        if !found {
            return Err(OpenBookError::CableValidation {
                stage: "involution".into(),
                detail: format!("no mirror triangle for {tri}"),
            });
        }
    }
    Ok(crate::mapping::RelabelData { slot_map, edge_map })
}

type EdgeIdAlias = usize;

/// The copy exchange of the symmetric cable fiber: the simplicial involution
/// followed by the half rotation of the boundary collar, normalized so that
/// its square is one positive boundary twist.
pub fn cable_exchange(t: &Triangulation) -> Result<MappingClass, OpenBookError> {
    let sigma = MappingClass::from_automorphism(t, cable_involution(t)?)?;
    let r = t.boundary_components()[0].vertices.len() as i64;
    if r % 2 != 0 {
        return Err(OpenBookError::CableValidation {
            stage: "exchange".into(),
            detail: "boundary vertex count must be even".into(),
        });
    }
    let tb = crate::mapping::boundary_twist(t, 0, 1)?;
    let r0 = t.labels.curves.get("r0");
    let r1 = t.labels.curves.get("r1");
    for dir in [1i64, -1] {
        let half = crate::mapping::collar_rotation(t, 0, dir * r / 2)?;
        for rho in [sigma.then(&half)?, half.then(&sigma)?] {
            let sq = rho.pow(2)?;
            let test = sq.then(&tb.inverse())?;
            if !crate::mapping::is_identity(t, &test)? {
                continue;
            }
            if let (Some(r0), Some(r1)) = (r0, r1) {
                if rho.apply_curve(t, r0)? != *r1 || rho.apply_curve(t, r1)? != *r0 {
                    continue;
                }
            }
            return Ok(rho);
        }
    }
    Err(OpenBookError::CableValidation {
        stage: "exchange".into(),
        detail: "no orientation of the half rotation squares to the boundary twist".into(),
    })
}

/// Builds the (2,1)-cable open book: the fiber is the symmetric double of
/// the companion fiber, the monodromy is the copy exchange composed with the
/// companion monodromy carried by the first copy.
pub fn cable_2_1(
    ob: &OpenBook,
    alphabet: &BTreeMap<String, CurveCoords>,
    cfg: &FdtcConfig,
) -> Result<(OpenBook, FdtcCertificate), OpenBookError> {
    let bindings = ob.fiber.boundary_components().len();
    if bindings != 1 {
        return Err(OpenBookError::DisconnectedBinding(bindings));
    }
    let g = ob.genus;
    let big = crate::surface::cable_fiber(g)?;

    // Companion monodromy transferred onto the first copy.
    let word = match &ob.provenance {
        Provenance::Catalog { word, .. } => crate::mapping::parse_word(word),
        _ => {
            return Err(OpenBookError::CableValidation {
                stage: "provenance".into(),
                detail: "cable base must be a catalog monodromy".into(),
            })
        }
    };
    let mut moved_alphabet = BTreeMap::new();
    for (letter, c) in alphabet {
        let moved = crate::surface::transfer_into_copy(g, &ob.fiber, &big, c, 0)?;
        moved_alphabet.insert(letter.clone(), moved);
    }
    let h0 = from_word(&big, &moved_alphabet, &word)?;
    let exchange = cable_exchange(&big)?;
    let monodromy = h0.then(&exchange)?;

    // Reducing multicurve: the two copies of the companion boundary.
    let r0 = big.labels.curves["r0"].clone();
    let r1 = big.labels.curves["r1"].clone();
    let disjoint = intersection_number(&big, &r0, &r1)?;
    if !disjoint.is_zero() {
        return Err(OpenBookError::CableValidation {
            stage: "reducing-multicurve".into(),
            detail: format!("copies of the companion boundary meet {disjoint} times"),
        });
    }
    let multicurve = r0.union(&r1);
    let image = monodromy.apply_curve(&big, &multicurve)?;
    if image != multicurve {
        return Err(OpenBookError::CableValidation {
            stage: "reducing-multicurve".into(),
            detail: "monodromy does not preserve the reducing multicurve".into(),
        });
    }

    // The cable coefficient: exactly 1/2.
    let mut cable_cfg = cfg.clone();
    cable_cfg.denominator_certain = true;
    cable_cfg.denom_bound = (8 * g as u64).saturating_sub(2).max(6);
    let cert = fdtc(&big, &monodromy, 0, &cable_cfg)?;
    let half = BigRational::new(1.into(), 2.into());
    if cert.exact() != Some(&half) {
        return Err(OpenBookError::CableValidation {
            stage: "fdtc".into(),
            detail: format!("expected 1/2, got {:?}", cert.value),
        });
    }

    Ok((
        OpenBook {
            fiber: big,
            monodromy,
            genus: 2 * g,
            provenance: Provenance::Cable {
                base: Box::new(ob.provenance.clone()),
                p: 2,
                q: 1,
            },
            reducing: Some(multicurve),
        },
        cert,
    ))
}

/// The arc and attachment site of a band sum.
#[derive(Clone, Debug)]
pub struct BandSumSpec {
    pub arc: BasedArc,
}

/// A simple closed curve on the cable fiber formed as the band sum of the
/// two copies of a nonseparating properly embedded arc of the companion.
pub fn band_sum_curve(
    cabled: &OpenBook,
    base: &OpenBook,
    spec: &BandSumSpec,
) -> Result<CurveCoords, OpenBookError> {
    let g = base.genus;
    // The arc must be nonseparating in the companion fiber: some closed
    // curve crosses it an odd number of times.
    let mut parity_witness = false;
    for c in base.fiber.labels.curves.values() {
        if crate::surface::oracle::arc_curve_parity(&base.fiber, &spec.arc, c)? == 1 {
            parity_witness = true;
            break;
        }
    }
    if !parity_witness {
        return Err(OpenBookError::SeparatingArc);
    }
    let variants = crate::surface::band_sum_words(g, &base.fiber, &cabled.fiber, &spec.arc);
    if variants.is_empty() {
        return Err(OpenBookError::SeparatingArc);
    }
    let mut seen = 0usize;
    for word in variants {
        let cand = CurveCoords::from_closed_word(&cabled.fiber, &word);
        if cand.admissible(&cabled.fiber).is_err() {
            continue;
        }
        let comps = cand.component_count(&cabled.fiber)?;
        seen = seen.max(comps);
        if comps != 1 {
            continue;
        }
        if classify_curve(&cabled.fiber, &cand)? != CurveClass::Essential {
            continue;
        }
        if !nonseparating(&cabled.fiber, &cand)? {
            continue;
        }
        if let Some(reducing) = &cabled.reducing {
            // The band sum crosses each copy of the companion boundary
            // twice, once per band end.
            let hits = intersection_number(&cabled.fiber, &cand, reducing)?;
            if hits != BigUint::from(4u32) {
                continue;
            }
        }
        return Ok(cand);
    }
    Err(OpenBookError::BandSumNotSimple(seen))
}

/// Composes the monodromy with a twist along a curve in the fiber interior.
pub fn stallings_twist(
    ob: &OpenBook,
    curve: &CurveCoords,
    sign: i64,
    curve_name: &str,
) -> Result<OpenBook, OpenBookError> {
    match classify_curve(&ob.fiber, curve) {
        Ok(CurveClass::Essential) => {}
        Ok(_) => return Err(OpenBookError::InessentialCurve),
        Err(OracleError::TooHeavy) => {}
        Err(e) => return Err(e.into()),
    }
    let tw = twist(&ob.fiber, curve, sign)?;
    let monodromy = ob.monodromy.then(&tw)?;
    Ok(OpenBook {
        fiber: ob.fiber.clone(),
        monodromy,
        genus: ob.genus,
        provenance: Provenance::Stallings {
            base: Box::new(ob.provenance.clone()),
            curve: curve_name.to_string(),
            sign,
        },
        reducing: None,
    })
}
