//! Dehn twist calculus: mapping classes as sequences of elementary moves.
//!
//! A mapping class is stored as a composable sequence of flips, relabelings
//! and boundary walks. Twists about curves are realized by flipping the curve
//! into its two-triangle annulus position and exchanging the diagonal there,
//! so the whole calculus stays exact on both curve coordinates and arc words.

mod analyze;
mod twist;
mod word;

pub use analyze::{
    free_order, growth_evidence, intersection_number, is_identity, AnalyzeError, GrowthReport,
    GrowthVerdict,
};
pub use twist::{
    boundary_twist, collar_rotation, shorten, transfer_through, twist, ShortPosition, TwistError,
};
pub use word::{chain_alphabet, from_word, parse_word, TwistWord, WordError};

use std::sync::Arc;

use thiserror::Error;

use crate::surface::{
    slot_in_tri, BasedArc, Corner, CurveCoords, EdgeId, FlipData, FlipError, Slot, Triangulation,
};

#[derive(Debug, Error)]
pub enum MoveError {
    #[error("object lives on a different triangulation")]
    TriangulationMismatch,
    #[error("mapping classes are not composable: target and source differ")]
    NotComposable,
    #[error(transparent)]
    Flip(#[from] FlipError),
    #[error("arc word exceeded the configured length bound")]
    ArcTooLong,
}

/// Renaming of edges and slots induced by a simplicial isomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelabelData {
    pub slot_map: Vec<Slot>,
    pub edge_map: Vec<EdgeId>,
}

impl RelabelData {
    pub fn identity(t: &Triangulation) -> RelabelData {
        RelabelData {
            slot_map: (0..t.tri_count() * 3).collect(),
            edge_map: (0..t.edge_count()).collect(),
        }
    }

    pub fn inverse(&self) -> RelabelData {
        let mut slot_map = vec![0; self.slot_map.len()];
        for (s, &s2) in self.slot_map.iter().enumerate() {
            slot_map[s2] = s;
        }
        let mut edge_map = vec![0; self.edge_map.len()];
        for (e, &e2) in self.edge_map.iter().enumerate() {
            edge_map[e2] = e;
        }
        RelabelData { slot_map, edge_map }
    }

    fn apply_curve(&self, c: &CurveCoords) -> CurveCoords {
        let mut out = vec![num_bigint::BigUint::default(); self.edge_map.len()];
        for (e, w) in c.weights().iter().enumerate() {
            out[self.edge_map[e]] = w.clone();
        }
        CurveCoords::from_weights(out)
    }

    fn apply_arc(&self, t_post: &Triangulation, a: &BasedArc) -> BasedArc {
        let mut out = BasedArc {
            base: a.base,
            terminal: a.terminal,
            dep: self.slot_map[a.dep],
            arr: self.slot_map[a.arr],
            word: a.word.iter().map(|&s| self.slot_map[s]).collect(),
        };
        // Renaming preserves reducedness but can land a boundary-hugging arc
        // on the non-canonical mirror form.
        out.reduce(t_post);
        out
    }
}

/// Cached data for the boundary-twist action: the fans of a boundary
/// component in cyclic order.
#[derive(Clone, Debug)]
pub struct WalkData {
    pub component: usize,
    pub t: Arc<Triangulation>,
}

#[derive(Clone)]
pub enum Move {
    Flip {
        pre: Arc<Triangulation>,
        post: Arc<Triangulation>,
        data: FlipData,
    },
    Relabel {
        pre: Arc<Triangulation>,
        post: Arc<Triangulation>,
        map: Arc<RelabelData>,
    },
    /// Rotation of a boundary collar by a signed number of vertex steps;
    /// one full turn of `r` steps is the right-handed boundary twist.
    Walk {
        data: Arc<WalkData>,
        vertex_steps: i64,
    },
}

impl std::fmt::Debug for Move {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Move::Flip { data, .. } => write!(f, "Flip(e{})", data.edge),
            Move::Relabel { .. } => write!(f, "Relabel"),
            Move::Walk { vertex_steps, data } => {
                write!(f, "Walk_d{}^{}", data.component, vertex_steps)
            }
        }
    }
}

/// A boundary-fixing homeomorphism up to isotopy, as a move sequence.
#[derive(Clone, Debug)]
pub struct MappingClass {
    source_fp: u64,
    target_fp: u64,
    pub moves: Vec<Move>,
    /// Configurable safety bound for arc words.
    pub max_arc_len: usize,
}

pub const DEFAULT_MAX_ARC_LEN: usize = 40_000_000;

impl MappingClass {
    pub fn identity(t: &Triangulation) -> MappingClass {
        let fp = t.fingerprint();
        MappingClass {
            source_fp: fp,
            target_fp: fp,
            moves: Vec::new(),
            max_arc_len: DEFAULT_MAX_ARC_LEN,
        }
    }

    pub(crate) fn from_moves(source: u64, target: u64, moves: Vec<Move>) -> MappingClass {
        MappingClass {
            source_fp: source,
            target_fp: target,
            moves,
            max_arc_len: DEFAULT_MAX_ARC_LEN,
        }
    }

    pub fn source_fingerprint(&self) -> u64 {
        self.source_fp
    }

    pub fn is_self_map(&self) -> bool {
        self.source_fp == self.target_fp
    }

    pub fn move_count(&self) -> usize {
        self.moves.len()
    }

    /// Composition `self` then `next` (apply `self` first).
    pub fn then(&self, next: &MappingClass) -> Result<MappingClass, MoveError> {
        if self.target_fp != next.source_fp {
            return Err(MoveError::NotComposable);
        }
        let mut moves = self.moves.clone();
        moves.extend(next.moves.iter().cloned());
        Ok(MappingClass {
            source_fp: self.source_fp,
            target_fp: next.target_fp,
            moves,
            max_arc_len: self.max_arc_len.max(next.max_arc_len),
        })
    }

    /// Composition in the usual function order: `self` after `other`.
    pub fn compose(&self, other: &MappingClass) -> Result<MappingClass, MoveError> {
        other.then(self)
    }

    pub fn inverse(&self) -> MappingClass {
        let mut moves = Vec::with_capacity(self.moves.len() + 4);
        for m in self.moves.iter().rev() {
            match m {
                Move::Relabel { pre, post, map } => moves.push(Move::Relabel {
                    pre: post.clone(),
                    post: pre.clone(),
                    map: Arc::new(map.inverse()),
                }),
                Move::Walk { data, vertex_steps } => moves.push(Move::Walk {
                    data: data.clone(),
                    vertex_steps: -vertex_steps,
                }),
                Move::Flip { pre, post, data } => {
                    // Flipping the same edge again returns to the original
                    // complex up to a fixed renaming of the two triangles.
                    let data2 = FlipData::read(post, data.edge).expect("diagonal is internal");
                    let (post2, _) =
                        crate::surface::flip(post, data.edge).expect("diagonal flips back");
                    let fixup = flip_back_fixup(pre, data, &data2);
                    debug_assert_eq!(
                        apply_relabel_fp(&post2, &fixup),
                        pre.fingerprint(),
                        "flip inverse fixup restores the original tables"
                    );
                    let post2 = Arc::new(post2);
                    moves.push(Move::Flip {
                        pre: post.clone(),
                        post: post2.clone(),
                        data: data2,
                    });
                    moves.push(Move::Relabel {
                        pre: post2,
                        post: pre.clone(),
                        map: Arc::new(fixup),
                    });
                }
            }
        }
        MappingClass {
            source_fp: self.target_fp,
            target_fp: self.source_fp,
            moves,
            max_arc_len: self.max_arc_len,
        }
    }

    pub fn pow(&self, n: i64) -> Result<MappingClass, MoveError> {
        if !self.is_self_map() {
            return Err(MoveError::NotComposable);
        }
        let base = if n >= 0 { self.clone() } else { self.inverse() };
        let mut out = MappingClass {
            source_fp: self.source_fp,
            target_fp: self.source_fp,
            moves: Vec::new(),
            max_arc_len: self.max_arc_len,
        };
        for _ in 0..n.unsigned_abs() {
            out = out.then(&base)?;
        }
        Ok(out)
    }

    pub fn apply_curve(
        &self,
        t: &Triangulation,
        c: &CurveCoords,
    ) -> Result<CurveCoords, MoveError> {
        if t.fingerprint() != self.source_fp {
            return Err(MoveError::TriangulationMismatch);
        }
        let mut cur = c.clone();
        for m in &self.moves {
            cur = match m {
                Move::Flip { data, .. } => data.transfer_curve(&cur)?,
                Move::Relabel { map, .. } => map.apply_curve(&cur),
                Move::Walk { .. } => cur,
            };
        }
        Ok(cur)
    }

    pub fn apply_arc(&self, t: &Triangulation, a: &BasedArc) -> Result<BasedArc, MoveError> {
        if t.fingerprint() != self.source_fp {
            return Err(MoveError::TriangulationMismatch);
        }
        let mut cur = a.clone();
        for m in &self.moves {
            cur = match m {
                Move::Flip { pre, post, data } => data.transfer_arc(pre, post, &cur),
                Move::Relabel { post, map, .. } => map.apply_arc(post, &cur),
                Move::Walk { data, vertex_steps } => {
                    walk_arc(&data.t, data.component, *vertex_steps, &cur)
                }
            };
            if cur.word.len() > self.max_arc_len {
                return Err(MoveError::ArcTooLong);
            }
        }
        cur.base = t.vertex_of_corner(cur.dep);
        cur.terminal = t.vertex_of_corner(cur.arr);
        Ok(cur)
    }
}

fn apply_relabel_fp(t: &Triangulation, r: &RelabelData) -> u64 {
    // Fingerprint of the relabeled tables, for debug validation only.
    let slots = t.tri_count() * 3;
    let mut slot_edge = vec![0; slots];
    let mut mate = vec![None; slots];
    for s in 0..slots {
        slot_edge[r.slot_map[s]] = r.edge_map[t.edge_of(s)];
        mate[r.slot_map[s]] = t.mate(s).map(|m| r.slot_map[m]);
    }
    let mut h: u64 = 0xcbf29ce484222325;
    let mut mix = |x: u64| {
        h ^= x;
        h = h.wrapping_mul(0x100000001b3);
    };
    for &e in &slot_edge {
        mix(e as u64 + 1);
    }
    for &m in &mate {
        mix(m.map(|s: usize| s as u64 + 2).unwrap_or(1));
    }
    h
}

/// The renaming that undoes a double flip: the second flip reproduces the
/// original complex with the two triangles' contents exchanged and rotated.
fn flip_back_fixup(pre: &Triangulation, first: &FlipData, _second: &FlipData) -> RelabelData {
    let slots = pre.tri_count() * 3;
    let mut slot_map: Vec<Slot> = (0..slots).collect();
    let ia = first.sa % 3;
    let ib = first.sb % 3;
    // After two flips, triangle ta holds (E, er, es) at indices 0,1,2 and
    // triangle tb holds (E, ep, eq); the original had (E, ep, eq) at
    // ia,ia+1,ia+2 of ta and (E, er, es) at ib.. of tb.
    for k in 0..3 {
        slot_map[3 * first.ta + k] = 3 * first.tb + (ib + k) % 3;
        slot_map[3 * first.tb + k] = 3 * first.ta + (ia + k) % 3;
    }
    RelabelData {
        slot_map,
        edge_map: (0..pre.edge_count()).collect(),
    }
}

/// Action of a collar rotation on an arc: every end based on the component
/// is rerouted to wind along the boundary before rejoining its course. A
/// full turn of `r` vertex steps is one right-handed boundary twist.
pub(crate) fn walk_arc(
    t: &Triangulation,
    component: usize,
    vertex_steps: i64,
    arc: &BasedArc,
) -> BasedArc {
    if vertex_steps == 0 {
        return arc.clone();
    }
    let comp = &t.boundary_components()[component];
    let mut cur = arc.clone();
    if comp.vertices.contains(&t.vertex_of_corner(cur.dep)) {
        cur = splice_start(t, component, vertex_steps, &cur);
    }
    if comp.vertices.contains(&t.vertex_of_corner(cur.arr)) {
        cur = reverse_arc(t, &cur);
        cur = splice_start(t, component, vertex_steps, &cur);
        cur = reverse_arc(t, &cur);
    }
    cur
}

fn reverse_arc(t: &Triangulation, a: &BasedArc) -> BasedArc {
    BasedArc {
        base: a.terminal,
        terminal: a.base,
        dep: a.arr,
        arr: a.dep,
        word: a
            .word
            .iter()
            .rev()
            .map(|&s| t.mate(s).expect("internal"))
            .collect(),
    }
}

/// Calibrated so that the right-handed boundary twist moves arcs to the
/// right and the chain relation closes with a positive boundary twist.
const RIGHT_WALKS_FORWARD: bool = true;

fn splice_start(
    t: &Triangulation,
    component: usize,
    vertex_steps: i64,
    arc: &BasedArc,
) -> BasedArc {
    let comp = &t.boundary_components()[component];
    let v = t.vertex_of_corner(arc.dep);
    let vpos = comp
        .vertices
        .iter()
        .position(|&u| u == v)
        .expect("base on component");
    let r = comp.vertices.len();
    let forward = (vertex_steps > 0) == RIGHT_WALKS_FORWARD;
    let steps = vertex_steps.unsigned_abs() as usize;
    let fan_of = |u: crate::surface::VertexId| t.fan(u);
    let dep_pos = t.fan_position(arc.dep);
    let mut word: Vec<Slot> = Vec::new();
    let new_dep: Corner;
    if forward {
        // The rerouted arc departs `steps` vertices behind the old base and
        // walks forward to rejoin it.
        let start = (vpos + r - (steps % r)) % r;
        new_dep = *fan_of(comp.vertices[start]).last().expect("nonempty fan");
        for step in 1..=steps {
            let u = comp.vertices[(start + step) % r];
            let fan = fan_of(u);
            let stop = if step == steps {
                dep_pos
            } else {
                fan.len() - 1
            };
            for i in 0..stop {
                word.push(slot_in_tri(fan[i], 2));
            }
        }
    } else {
        let start = (vpos + (steps % r)) % r;
        new_dep = fan_of(comp.vertices[start])[0];
        for step in 1..=steps {
            let u = comp.vertices[(start + r - (step % r)) % r];
            let fan = fan_of(u);
            let stop = if step == steps { dep_pos + 1 } else { 1 };
            for i in (stop..fan.len()).rev() {
                word.push(slot_in_tri(fan[i], 1));
            }
        }
    }
    word.extend(arc.word.iter().copied());
    let mut out = BasedArc {
        base: arc.base,
        terminal: arc.terminal,
        dep: new_dep,
        arr: arc.arr,
        word,
    };
    out.reduce(t);
    out
}

/// Convenience: the names of all labeled probes of a fiber.
pub fn probe_names(t: &Triangulation) -> (Vec<String>, Vec<String>) {
    (
        t.labels.curves.keys().cloned().collect(),
        t.labels.arcs.keys().cloned().collect(),
    )
}


impl MappingClass {
    /// Wraps a simplicial automorphism of the fiber as a one-move mapping
    /// class. The map must send the gluing tables to themselves.
    pub fn from_automorphism(
        t: &Triangulation,
        map: RelabelData,
    ) -> Result<MappingClass, MoveError> {
        let fp = t.fingerprint();
        if apply_relabel_fp(t, &map) != fp {
            return Err(MoveError::TriangulationMismatch);
        }
        let post = Arc::new(t.clone());
        Ok(MappingClass::from_moves(
            fp,
            fp,
            vec![Move::Relabel {
                pre: post.clone(),
                post,
                map: Arc::new(map),
            }],
        ))
    }
}

/// Wraps one flip as a mapping class between the two triangulations; its
/// inverse undoes the flip exactly.
pub fn single_flip_class(t: &Triangulation, e: EdgeId) -> Result<MappingClass, MoveError> {
    let (post, transfer) = crate::surface::flip(t, e)?;
    let post = Arc::new(post);
    Ok(MappingClass::from_moves(
        t.fingerprint(),
        post.fingerprint(),
        vec![Move::Flip {
            pre: Arc::new(t.clone()),
            post,
            data: *transfer.data(),
        }],
    ))
}
