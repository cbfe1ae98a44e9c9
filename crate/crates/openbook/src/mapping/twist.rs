//! Dehn twists via shortening flips and the annulus exchange.

use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigUint;

use thiserror::Error;

use crate::surface::{
    flip, slot_in_tri, CurveCoords, EdgeId, FlipData, Gadget, Slot, Triangulation,
};

use super::{MappingClass, Move, MoveError, RelabelData, WalkData};

#[derive(Debug, Error)]
pub enum TwistError {
    #[error("twist core is empty")]
    EmptyCurve,
    #[error(transparent)]
    Flip(#[from] crate::surface::FlipError),
    #[error("twist core is not a single curve (components: {0})")]
    NotSimple(usize),
    #[error("twist core is null-homotopic")]
    NullHomotopic,
    #[error("could not shorten the curve to annulus position")]
    ShorteningFailed,
    #[error("no relabel closes the annulus exchange")]
    NoExchange,
    #[error(transparent)]
    Move(#[from] MoveError),
    #[error(transparent)]
    Coords(#[from] crate::surface::CoordsError),
}

/// A curve brought to total weight two, together with the flip path there.
pub struct ShortPosition {
    pub flips: Vec<(Arc<Triangulation>, Arc<Triangulation>, FlipData)>,
    pub final_t: Arc<Triangulation>,
    pub short: CurveCoords,
    pub gadget: Gadget,
}

/// Greedy weight-reducing flips with lowest-edge-id tie-breaking; when the
/// greedy walk stalls, a bounded breadth-first search over flip sequences
/// hunts for the next strict improvement.
pub fn shorten(t: &Triangulation, c: &CurveCoords) -> Result<ShortPosition, TwistError> {
    c.admissible(t)?;
    if c.is_zero() {
        return Err(TwistError::EmptyCurve);
    }
    let mut flips: Vec<(Arc<Triangulation>, Arc<Triangulation>, FlipData)> = Vec::new();
    let mut cur_t = Arc::new(t.clone());
    let mut cur_c = c.clone();
    let two = BigUint::from(2u32);
    let mut guard = 0usize;
    loop {
        guard += 1;
        if guard > 10_000 {
            return Err(TwistError::ShorteningFailed);
        }
        let total = cur_c.total_weight();
        if total == two {
            let gadget =
                Gadget::from_short_curve(&cur_t, &cur_c).map_err(|_| TwistError::NullHomotopic)?;
            return Ok(ShortPosition {
                flips,
                final_t: cur_t,
                short: cur_c,
                gadget,
            });
        }
        if total < two {
            // Weight one is impossible for admissible vectors; weight zero
            // was rejected above.
            return Err(TwistError::NullHomotopic);
        }
        match best_flip(&cur_t, &cur_c) {
            Some((e, _)) => {
                let (next_t, transfer) = flip(&cur_t, e)?;
                let next_c = transfer.curve(&cur_c)?;
                let next_t = Arc::new(next_t);
                flips.push((cur_t.clone(), next_t.clone(), *transfer.data()));
                cur_t = next_t;
                cur_c = next_c;
            }
            None => {
                // Stalled at a local minimum: breadth-first search for any
                // strictly lighter position within a bounded depth.
                let path = search_descent(&cur_t, &cur_c, 5)?;
                if path.is_empty() {
                    return Err(TwistError::ShorteningFailed);
                }
                for e in path {
                    let (next_t, transfer) = flip(&cur_t, e)?;
                    let next_c = transfer.curve(&cur_c)?;
                    let next_t = Arc::new(next_t);
                    flips.push((cur_t.clone(), next_t.clone(), *transfer.data()));
                    cur_t = next_t;
                    cur_c = next_c;
                }
            }
        }
    }
}

/// The flip that reduces total weight the most, if any reduces it strictly.
fn best_flip(t: &Triangulation, c: &CurveCoords) -> Option<(EdgeId, BigUint)> {
    let mut best: Option<(EdgeId, BigUint)> = None;
    for e in 0..t.edge_count() {
        if !t.is_internal(e) {
            continue;
        }
        let Ok(data) = FlipData::read(t, e) else {
            continue;
        };
        let Ok(moved) = data.transfer_curve(c) else {
            continue;
        };
        let new_total = moved.total_weight();
        let old_total = c.total_weight();
        if new_total < old_total {
            match &best {
                Some((_, b)) if *b <= new_total => {}
                _ => best = Some((e, new_total)),
            }
        }
    }
    best
}

fn search_descent(
    t: &Triangulation,
    c: &CurveCoords,
    depth: usize,
) -> Result<Vec<EdgeId>, TwistError> {
    let start_total = c.total_weight();
    let mut seen: HashSet<u64> = HashSet::new();
    let mut queue: std::collections::VecDeque<(Arc<Triangulation>, CurveCoords, Vec<EdgeId>)> =
        Default::default();
    queue.push_back((Arc::new(t.clone()), c.clone(), Vec::new()));
    let mut explored = 0usize;
    while let Some((cur_t, cur_c, path)) = queue.pop_front() {
        if path.len() >= depth {
            continue;
        }
        for e in 0..cur_t.edge_count() {
            if !cur_t.is_internal(e) {
                continue;
            }
            let Ok(data) = FlipData::read(&cur_t, e) else {
                continue;
            };
            let Ok(moved) = data.transfer_curve(&cur_c) else {
                continue;
            };
            let Ok((next_t, _)) = flip(&cur_t, e) else {
                continue;
            };
            let fp = next_t.fingerprint() ^ hash_weights(&moved);
            if !seen.insert(fp) {
                continue;
            }
            let mut next_path = path.clone();
            next_path.push(e);
            if moved.total_weight() < start_total {
                return Ok(next_path);
            }
            explored += 1;
            if explored > 20_000 {
                return Err(TwistError::ShorteningFailed);
            }
            queue.push_back((Arc::new(next_t), moved, next_path));
        }
    }
    Err(TwistError::ShorteningFailed)
}

fn hash_weights(c: &CurveCoords) -> u64 {
    let mut h: u64 = 0x9e3779b97f4a7c15;
    for w in c.weights() {
        for d in w.to_u64_digits() {
            h ^= d;
            h = h.wrapping_mul(0x100000001b3);
        }
        h = h.wrapping_mul(31);
    }
    h
}

/// Calibrated against the chain relation: the exchange that flips the
/// annulus edge following the rim realizes the left-handed twist, so the
/// right-handed one is its inverse.
const RIGHT_FLIPS_AFTER_RIM: bool = false;

/// One exchange of the annulus diagonal: a flip followed by the relabel
/// matching the complex back onto itself. The opposite handedness is taken
/// as the move-level inverse of this primitive.
fn gadget_exchange(
    t: &Arc<Triangulation>,
    g: &Gadget,
    right: bool,
) -> Result<MappingClass, TwistError> {
    let after_rim = slot_in_tri(g.rim_u, 1);
    let flip_edge = t.edge_of(after_rim);
    debug_assert!(flip_edge == g.e || flip_edge == g.f);
    let other = if flip_edge == g.e { g.f } else { g.e };
    let (post, transfer) = flip(t, flip_edge)?;
    let post = Arc::new(post);
    let relabel = find_local_relabel(&post, t, [g.tu, g.tv], (flip_edge, other))
        .ok_or(TwistError::NoExchange)?;
    let fp = t.fingerprint();
    let primitive = MappingClass::from_moves(
        fp,
        fp,
        vec![
            Move::Flip {
                pre: t.clone(),
                post: post.clone(),
                data: *transfer.data(),
            },
            Move::Relabel {
                pre: post.clone(),
                post: t.clone(),
                map: Arc::new(relabel),
            },
        ],
    );
    Ok(if right == RIGHT_FLIPS_AFTER_RIM {
        primitive
    } else {
        primitive.inverse()
    })
}

/// Searches for a simplicial isomorphism `from -> to` that fixes everything
/// outside the two given triangles and fixes all edges except possibly
/// exchanging the given pair.
fn find_local_relabel(
    from: &Triangulation,
    to: &Triangulation,
    tris: [usize; 2],
    pair: (EdgeId, EdgeId),
) -> Option<RelabelData> {
    let slots = from.tri_count() * 3;
    let id_edges: Vec<EdgeId> = (0..from.edge_count()).collect();
    let mut swapped = id_edges.clone();
    swapped[pair.0] = pair.1;
    swapped[pair.1] = pair.0;
    for edge_map in [id_edges, swapped] {
        for assign in [[tris[0], tris[1]], [tris[1], tris[0]]] {
            for rot0 in 0..3usize {
                for rot1 in 0..3usize {
                    let mut slot_map: Vec<Slot> = (0..slots).collect();
                    for k in 0..3 {
                        slot_map[3 * tris[0] + k] = 3 * assign[0] + (k + rot0) % 3;
                        slot_map[3 * tris[1] + k] = 3 * assign[1] + (k + rot1) % 3;
                    }
                    if relabel_is_iso(from, to, &slot_map, &edge_map) {
                        return Some(RelabelData { slot_map, edge_map });
                    }
                }
            }
        }
    }
    None
}

fn relabel_is_iso(
    from: &Triangulation,
    to: &Triangulation,
    slot_map: &[Slot],
    edge_map: &[EdgeId],
) -> bool {
    for s in 0..slot_map.len() {
        if to.edge_of(slot_map[s]) != edge_map[from.edge_of(s)] {
            return false;
        }
        let lhs = from.mate(s).map(|m| slot_map[m]);
        let rhs = to.mate(slot_map[s]);
        if lhs != rhs {
            return false;
        }
    }
    true
}

/// The right-handed Dehn twist about a connected essential simple closed
/// curve, to the given power: flips into annulus position, exchanges the
/// diagonal, and flips back.
pub fn twist(t: &Triangulation, c: &CurveCoords, power: i64) -> Result<MappingClass, TwistError> {
    if c.is_zero() {
        return Err(TwistError::EmptyCurve);
    }
    // Weight-2 success certifies the curve connected, simple and essential;
    // cheap inputs also get an early component check for clear diagnostics.
    if c.total_weight() < BigUint::from(4_000u32) {
        let comps = c.component_count(t)?;
        if comps != 1 {
            return Err(TwistError::NotSimple(comps));
        }
    }
    if power == 0 {
        return Ok(MappingClass::identity(t));
    }
    let sp = match shorten(t, c) {
        Ok(sp) => sp,
        Err(e) => {
            // Boundary-parallel curves never reach annulus position when all
            // vertices sit on their component; their twist is the boundary
            // twist itself.
            if let Ok(crate::surface::oracle::CurveClass::BoundaryParallel { component }) =
                crate::surface::oracle::classify_curve(t, c)
            {
                return boundary_twist(t, component, power);
            }
            return Err(e);
        }
    };
    let mut fwd: Vec<Move> = sp
        .flips
        .iter()
        .map(|(pre, post, data)| Move::Flip {
            pre: pre.clone(),
            post: post.clone(),
            data: *data,
        })
        .collect();
    let fp = t.fingerprint();
    let shorten_mc = MappingClass::from_moves(fp, sp.final_t.fingerprint(), fwd.clone());
    let ex = gadget_exchange(&sp.final_t, &sp.gadget, power > 0)?;
    for _ in 0..power.unsigned_abs() {
        fwd.extend(ex.moves.iter().cloned());
    }
    let mc1 = MappingClass::from_moves(fp, sp.final_t.fingerprint(), fwd);
    let back = shorten_mc.inverse();
    let out = mc1.then(&back)?;
    debug_assert!(out.is_self_map());
    Ok(out)
}

/// The right-handed boundary twist about the given component.
pub fn boundary_twist(
    t: &Triangulation,
    component: usize,
    power: i64,
) -> Result<MappingClass, TwistError> {
    let r = t.boundary_components()[component].vertices.len() as i64;
    collar_rotation(t, component, power * r)
}

/// Rotation of the boundary collar by a signed number of vertex steps; `r`
/// steps make one right-handed boundary twist.
pub fn collar_rotation(
    t: &Triangulation,
    component: usize,
    vertex_steps: i64,
) -> Result<MappingClass, TwistError> {
    let fp = t.fingerprint();
    if vertex_steps == 0 {
        return Ok(MappingClass::identity(t));
    }
    let data = WalkData {
        component,
        t: Arc::new(t.clone()),
    };
    Ok(MappingClass::from_moves(
        fp,
        fp,
        vec![Move::Walk {
            data: Arc::new(data),
            vertex_steps,
        }],
    ))
}

/// Transfers a curve through the shortening flips of a short position.
pub fn transfer_through(sp: &ShortPosition, c: &CurveCoords) -> Result<CurveCoords, TwistError> {
    let mut cur = c.clone();
    for (_, _, data) in &sp.flips {
        cur = data.transfer_curve(&cur).map_err(MoveError::Flip)?;
    }
    Ok(cur)
}
