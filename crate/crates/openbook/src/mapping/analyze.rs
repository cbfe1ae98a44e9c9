//! Intersection numbers, identity detection, periodicity and growth.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::surface::oracle::intersection_oracle;
use crate::surface::{core_transits, CurveCoords, Triangulation};

use super::{boundary_twist, shorten, transfer_through, MappingClass, MoveError, TwistError};

#[derive(Debug, Error)]
pub enum AnalyzeError {
    #[error(transparent)]
    Twist(#[from] TwistError),
    #[error(transparent)]
    Move(#[from] MoveError),
    #[error(transparent)]
    Coords(#[from] crate::surface::CoordsError),
    #[error(transparent)]
    Oracle(#[from] crate::surface::oracle::OracleError),
    #[error("map must be a self-map of the fiber")]
    NotSelfMap,
}

/// Geometric intersection number. One side is flipped into annulus position
/// and the strands of the other crossing the annulus are counted; when
/// neither side shortens, the overlay oracle decides small cases.
pub fn intersection_number(
    t: &Triangulation,
    a: &CurveCoords,
    b: &CurveCoords,
) -> Result<BigUint, AnalyzeError> {
    if a.is_zero() || b.is_zero() {
        return Ok(BigUint::zero());
    }
    // Shorten the lighter side; flipping a heavy pseudo-Anosov image into
    // annulus position is hopeless, while transferring it through the light
    // side's few flips is cheap.
    let shorten_cap = BigUint::from(4_000u32);
    let (first, second) = if a.total_weight() <= b.total_weight() {
        (a, b)
    } else {
        (b, a)
    };
    for (x, y) in [(first, second), (second, first)] {
        if x.total_weight() > shorten_cap {
            continue;
        }
        // Multicurves are handled componentwise through the same machinery.
        let comps = match x.component_count(t) {
            Ok(n) => n,
            Err(_) => continue,
        };
        if comps == 1 {
            if let Ok(sp) = shorten(t, x) {
                let moved = transfer_through(&sp, y)?;
                return Ok(core_transits(&sp.final_t, &sp.gadget, &moved)?);
            }
        } else {
            let parts = x.components(t)?;
            let mut total = BigUint::zero();
            let mut ok = true;
            for p in &parts {
                match shorten(t, p) {
                    Ok(sp) => {
                        let moved = transfer_through(&sp, y)?;
                        total += core_transits(&sp.final_t, &sp.gadget, &moved)?;
                    }
                    Err(TwistError::NullHomotopic) => {}
                    Err(_) => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                return Ok(total);
            }
        }
    }
    Ok(BigUint::from(intersection_oracle(t, a, b)?))
}

/// True when the map fixes every labeled curve and arc of its fiber. The
/// label family is built to fill the surface, so a map fixing all of them is
/// isotopic to the identity.
pub fn is_identity(t: &Triangulation, m: &MappingClass) -> Result<bool, AnalyzeError> {
    for c in t.labels.curves.values() {
        if m.apply_curve(t, c)? != *c {
            return Ok(false);
        }
    }
    for a in t.labels.arcs.values() {
        if m.apply_arc(t, a)? != *a {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smallest `n <= n_max` with `m^n = T_boundary^k`, searched with the probe
/// family; the twist exponent window is derived from the winding of the
/// probe arcs.
pub fn free_order(
    t: &Triangulation,
    m: &MappingClass,
    n_max: usize,
) -> Result<Option<(usize, i64)>, AnalyzeError> {
    if !m.is_self_map() {
        return Err(AnalyzeError::NotSelfMap);
    }
    let curves: Vec<(String, CurveCoords)> = t
        .labels
        .curves
        .iter()
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    let arcs: Vec<(String, crate::surface::BasedArc)> = t
        .labels
        .arcs
        .iter()
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    let mut cur_curves: Vec<CurveCoords> = curves.iter().map(|(_, c)| c.clone()).collect();
    let mut cur_arcs: Vec<crate::surface::BasedArc> = arcs.iter().map(|(_, a)| a.clone()).collect();
    // Iterating a pseudo-Anosov map grows probes exponentially; bail out of
    // the incremental loop once words pass this bound.
    let cap = 200_000usize;
    for n in 1..=n_max {
        for c in cur_curves.iter_mut() {
            *c = m.apply_curve(t, c)?;
        }
        for a in cur_arcs.iter_mut() {
            *a = m.apply_arc(t, a)?;
            if a.word.len() > cap {
                return Ok(None);
            }
        }
        let curves_fixed = cur_curves
            .iter()
            .zip(&curves)
            .all(|(cur, (_, orig))| cur == orig);
        if !curves_fixed {
            continue;
        }
        if arcs.is_empty() {
            return Ok(Some((n, 0)));
        }
        // Determine the boundary twist exponent from the first arc probe.
        let walk_len: usize = boundary_walk_len(t, 0).max(1);
        let window = (cur_arcs[0].word.len() + arcs[0].1.word.len()) / walk_len + 2;
        'k: for k in window_order(window as i64) {
            let tw = boundary_twist(t, 0, k)?;
            for (cur, (_, orig)) in cur_arcs.iter().zip(&arcs) {
                if tw.apply_arc(t, orig)? != *cur {
                    continue 'k;
                }
            }
            return Ok(Some((n, k)));
        }
    }
    Ok(None)
}

fn window_order(window: i64) -> impl Iterator<Item = i64> {
    (0..=window).flat_map(|k| if k == 0 { vec![0] } else { vec![k, -k] })
}

pub(crate) fn boundary_walk_len(t: &Triangulation, component: usize) -> usize {
    t.boundary_components()[component]
        .vertices
        .iter()
        .map(|&v| t.fan(v).len().saturating_sub(1))
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrowthVerdict {
    Exponential,
    NotExponential,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct GrowthReport {
    pub intersections: Vec<BigUint>,
    pub ratios: Vec<f64>,
    pub lambda_hat: Option<f64>,
    pub verdict: GrowthVerdict,
}

/// Intersection growth of the seed under iteration: the sequence
/// `i(m^k(seed), seed)` with the limit ratio estimate.
pub fn growth_evidence(
    t: &Triangulation,
    m: &MappingClass,
    seed: &CurveCoords,
    n: usize,
    epsilon: f64,
) -> Result<GrowthReport, AnalyzeError> {
    let mut cur = seed.clone();
    let mut intersections = Vec::with_capacity(n);
    for _ in 1..=n {
        cur = m.apply_curve(t, &cur)?;
        intersections.push(intersection_number(t, &cur, seed)?);
    }
    let vals: Vec<f64> = intersections
        .iter()
        .map(|v| v.to_f64().unwrap_or(f64::MAX))
        .collect();
    let mut ratios = Vec::new();
    for k in 1..vals.len() {
        if vals[k - 1] > 0.0 {
            ratios.push(vals[k] / vals[k - 1]);
        }
    }
    let tail: Vec<f64> = ratios.iter().rev().take(3).copied().collect();
    let lambda_hat = if tail.is_empty() {
        None
    } else {
        Some(tail.iter().product::<f64>().powf(1.0 / tail.len() as f64))
    };
    // Polynomial growth has iterated differences that become constant; the
    // check is exact on the integer sequence.
    let poly_like = (1..=3).any(|order| {
        let mut seq: Vec<num_bigint::BigInt> = intersections
            .iter()
            .map(|v| num_bigint::BigInt::from(v.clone()))
            .collect();
        for _ in 0..order {
            if seq.len() < 2 {
                return false;
            }
            seq = seq.windows(2).map(|w| &w[1] - &w[0]).collect();
        }
        seq.len() >= 3
            && seq[seq.len() - 3..]
                .iter()
                .all(|d| *d == seq[seq.len() - 1])
    });
    let stabilized =
        tail.len() >= 2 && (tail[0] - tail[1]).abs() <= 0.1 * (tail[0] - 1.0).max(0.0) + 1e-9;
    let verdict = if intersections.iter().all(|v| v.is_zero()) || poly_like {
        GrowthVerdict::NotExponential
    } else if tail.len() < 2 {
        GrowthVerdict::Inconclusive
    } else if tail[0] > 1.0 + epsilon && stabilized {
        GrowthVerdict::Exponential
    } else if tail[0] < 1.0 + epsilon {
        GrowthVerdict::NotExponential
    } else {
        GrowthVerdict::Inconclusive
    };
    Ok(GrowthReport {
        intersections,
        ratios,
        lambda_hat,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapping::{chain_alphabet, from_word, parse_word, twist};
    use crate::surface::standard_fiber;

    #[test]
    fn growth_verdicts() {
        let t = standard_fiber(1, 1).unwrap();
        let seed = t.labels.curves["c2"].clone();
        let ident = crate::MappingClass::identity(&t);
        let flat = growth_evidence(&t, &ident, &seed, 6, 0.01).unwrap();
        assert_eq!(flat.verdict, GrowthVerdict::NotExponential);
        let single = twist(&t, &t.labels.curves["c1"], 1).unwrap();
        let linear = growth_evidence(&t, &single, &seed, 10, 0.01).unwrap();
        assert_eq!(linear.verdict, GrowthVerdict::NotExponential);
        let alphabet = chain_alphabet(&t);
        let pa = from_word(&t, &alphabet, &parse_word("aB")).unwrap();
        let exp = growth_evidence(&t, &pa, &seed, 10, 0.01).unwrap();
        assert_eq!(exp.verdict, GrowthVerdict::Exponential);
        assert!(exp.lambda_hat.unwrap() > 2.0);
    }
}
