//! Brute-force overlay machinery.
//!
//! This module is the independent second route for geometric intersection
//! numbers: objects are traced into explicit strands, placed transversely
//! with a deterministic interleaving on every edge, and bigons between the
//! two objects are removed by sliding one strand past the other along the
//! fellow-traveling corridor. It also provides region analysis for a single
//! multicurve (connectivity and Euler characteristics of the complement).

use num_traits::ToPrimitive;
use thiserror::Error;

use super::{
    corner_next, corner_prev, slot_in_tri, BasedArc, Corner, CurveCoords, EdgeId, Slot,
    Triangulation,
};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("object too heavy for the overlay oracle")]
    TooHeavy,
    #[error("bigon removal did not converge")]
    NoConvergence,
    #[error(transparent)]
    Coords(#[from] super::coords::CoordsError),
}

#[derive(Clone, Debug)]
struct Strand {
    obj: usize,
    closed: bool,
    /// Slots exited, in traversal order.
    word: Vec<Slot>,
    /// Normal-position rank of each crossing along its edge, when known.
    ranks: Option<Vec<usize>>,
    dep: Option<Corner>,
    arr: Option<Corner>,
}

#[derive(Clone, Debug)]
struct Placement<'a> {
    t: &'a Triangulation,
    strands: Vec<Strand>,
    /// Point ids in order along each edge (measured along the primary slot).
    edge_order: Vec<Vec<usize>>,
    /// Point -> (strand, step index, edge).
    points: Vec<(usize, usize, EdgeId)>,
}

fn trace_strands(
    t: &Triangulation,
    c: &CurveCoords,
    obj: usize,
) -> Result<Vec<Strand>, OracleError> {
    let words = c.trace_steps(t)?;
    Ok(words
        .into_iter()
        .map(|steps| Strand {
            obj,
            closed: true,
            word: steps.iter().map(|&(s, _)| s).collect(),
            ranks: Some(steps.iter().map(|&(_, r)| r).collect()),
            dep: None,
            arr: None,
        })
        .collect())
}

impl<'a> Placement<'a> {
    /// Canonical transverse placement: object 0 first along every edge, then
    /// object 1, and so on; within one closed object the traced normal order
    /// is used.
    fn build(
        t: &'a Triangulation,
        curves: &[&CurveCoords],
        arcs: &[&BasedArc],
    ) -> Result<Placement<'a>, OracleError> {
        let mut strands = Vec::new();
        let mut obj = 0;
        for c in curves {
            let total = c.total_weight();
            if total > num_bigint::BigUint::from(20_000u32) {
                return Err(OracleError::TooHeavy);
            }
            strands.extend(trace_strands(t, c, obj)?);
            obj += 1;
        }
        for a in arcs {
            strands.push(Strand {
                obj,
                closed: false,
                word: a.word.clone(),
                ranks: None,
                dep: Some(a.dep),
                arr: Some(a.arr),
            });
            obj += 1;
        }
        // Place objects block by block along every edge; within a traced
        // curve the normal-position ranks order its own crossings, which
        // keeps each object self-parallel (embedded). Arcs fall back to word
        // order, which is only used for parity and region counts.
        let mut points = Vec::new();
        let mut keyed: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); t.edge_count()];
        for (si, s) in strands.iter().enumerate() {
            for (k, &slot) in s.word.iter().enumerate() {
                let e = t.edge_of(slot);
                let pid = points.len();
                points.push((si, k, e));
                let rank = s.ranks.as_ref().map(|r| r[k]).unwrap_or(k);
                keyed[e].push((s.obj, rank, pid));
            }
        }
        let mut edge_order: Vec<Vec<usize>> = vec![Vec::new(); t.edge_count()];
        for (e, mut v) in keyed.into_iter().enumerate() {
            v.sort();
            edge_order[e] = v.into_iter().map(|(_, _, pid)| pid).collect();
        }
        Ok(Placement {
            t,
            strands,
            edge_order,
            points,
        })
    }

    fn pos_on_slot(&self, pid: usize, slot: Slot) -> usize {
        let e = self.points[pid].2;
        let idx = self.edge_order[e]
            .iter()
            .position(|&p| p == pid)
            .expect("point on edge");
        let (primary, _) = self.t.edge_slots(e);
        if slot == primary {
            idx
        } else {
            self.edge_order[e].len() - 1 - idx
        }
    }

    /// Circular coordinate of a segment endpoint around a triangle boundary.
    /// Sides occupy blocks of size M with points at offsets 1.., and corner
    /// `j` (start of side j+2) sits at the block boundary.
    fn coord(&self, tri: usize, end: &SegEnd, m_block: u64) -> (u64, u64) {
        match *end {
            SegEnd::Pt(pid, slot) => {
                debug_assert_eq!(slot / 3, tri);
                let k = (slot % 3) as u64;
                let pos = self.pos_on_slot(pid, slot) as u64;
                (k * m_block + pos + 1, 0)
            }
            SegEnd::Corner(c, tie) => {
                debug_assert_eq!(c / 3, tri);
                let j = c % 3;
                let k = ((j + 2) % 3) as u64;
                (k * m_block, tie)
            }
        }
    }

    /// All segments (chords) of all strands, grouped by triangle.
    fn segments(&self) -> Vec<Vec<Segment>> {
        let mut by_tri: Vec<Vec<Segment>> = vec![Vec::new(); self.t.tri_count()];
        let mut pid_base = 0;
        for (si, s) in self.strands.iter().enumerate() {
            let n = s.word.len();
            let pid_of = |k: usize| pid_base + k;
            if s.closed {
                for k in 0..n {
                    let prev = (k + n - 1) % n;
                    let enter = self.t.mate(s.word[prev]).expect("closed path");
                    let tri = s.word[k] / 3;
                    debug_assert_eq!(enter / 3, tri);
                    by_tri[tri].push(Segment {
                        strand: si,
                        idx: k,
                        from: SegEnd::Pt(pid_of(prev), enter),
                        to: SegEnd::Pt(pid_of(k), s.word[k]),
                    });
                }
            } else {
                let dep = s.dep.expect("arc ends");
                let arr = s.arr.expect("arc ends");
                let tie = si as u64 + 1;
                if n == 0 {
                    by_tri[dep / 3].push(Segment {
                        strand: si,
                        idx: 0,
                        from: SegEnd::Corner(dep, tie),
                        to: SegEnd::Corner(arr, tie),
                    });
                } else {
                    by_tri[dep / 3].push(Segment {
                        strand: si,
                        idx: 0,
                        from: SegEnd::Corner(dep, tie),
                        to: SegEnd::Pt(pid_of(0), s.word[0]),
                    });
                    for k in 1..n {
                        let enter = self.t.mate(s.word[k - 1]).expect("internal");
                        by_tri[s.word[k] / 3].push(Segment {
                            strand: si,
                            idx: k,
                            from: SegEnd::Pt(pid_of(k - 1), enter),
                            to: SegEnd::Pt(pid_of(k), s.word[k]),
                        });
                    }
                    let enter = self.t.mate(s.word[n - 1]).expect("internal");
                    by_tri[arr / 3].push(Segment {
                        strand: si,
                        idx: n,
                        from: SegEnd::Pt(pid_of(n - 1), enter),
                        to: SegEnd::Corner(arr, tie),
                    });
                }
            }
            pid_base += n;
        }
        by_tri
    }

    /// Transverse crossings between strands of different objects.
    fn crossings(&self) -> Vec<Crossing> {
        let m_block = 4 * (self.points.len() as u64 + 2);
        let mut out = Vec::new();
        for (tri, segs) in self.segments().iter().enumerate() {
            for i in 0..segs.len() {
                for j in i + 1..segs.len() {
                    let (a, b) = (&segs[i], &segs[j]);
                    if self.strands[a.strand].obj == self.strands[b.strand].obj {
                        continue;
                    }
                    let pa = (
                        self.coord(tri, &a.from, m_block),
                        self.coord(tri, &a.to, m_block),
                    );
                    let pb = (
                        self.coord(tri, &b.from, m_block),
                        self.coord(tri, &b.to, m_block),
                    );
                    if interleaved(pa, pb) {
                        let (lo, hi) = if self.strands[a.strand].obj < self.strands[b.strand].obj {
                            (a.clone(), b.clone())
                        } else {
                            (b.clone(), a.clone())
                        };
                        out.push(Crossing { a: lo, b: hi });
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum SegEnd {
    /// A crossing point seen on a particular slot.
    Pt(usize, Slot),
    /// An arc endpoint at a corner; the tie index keeps distinct arc ends at
    /// the same corner apart.
    Corner(Corner, u64),
}

#[derive(Clone, Debug)]
struct Segment {
    strand: usize,
    /// Segment index along the strand: segment k ends at crossing k (closed
    /// strands), or spans [k-1, k] with the arc ends included (arcs).
    idx: usize,
    from: SegEnd,
    to: SegEnd,
}

#[derive(Clone, Debug)]
struct Crossing {
    a: Segment,
    b: Segment,
}

/// Whether two chords of a disk with the given circular endpoint coordinates
/// must intersect.
fn interleaved(a: ((u64, u64), (u64, u64)), b: ((u64, u64), (u64, u64))) -> bool {
    let inside = |x: (u64, u64), lo: (u64, u64), hi: (u64, u64)| -> bool {
        if lo < hi {
            lo < x && x < hi
        } else {
            x > lo || x < hi
        }
    };
    let c1 = inside(b.0, a.0, a.1);
    let c2 = inside(b.1, a.0, a.1);
    c1 != c2
}

/// Exact geometric intersection number of two multicurves, computed by the
/// overlay-and-bigon-removal procedure.
pub fn intersection_oracle(
    t: &Triangulation,
    a: &CurveCoords,
    b: &CurveCoords,
) -> Result<u64, OracleError> {
    let mut place = Placement::build(t, &[a, b], &[])?;
    let mut guard = 0usize;
    let mut last = usize::MAX;
    loop {
        guard += 1;
        if guard > 10_000 {
            return Err(OracleError::NoConvergence);
        }
        let crossings = place.crossings();
        if last != usize::MAX && crossings.len() >= last {
            // No strict progress; stop if nothing removable remains.
        }
        last = crossings.len();
        match find_bigon(&place, &crossings) {
            None => return Ok(crossings.len() as u64),
            Some((x, y)) => {
                remove_bigon(&mut place, &x, &y);
            }
        }
    }
}

/// Parity of the intersection of an arc with a multicurve. Any transverse
/// placement realizes the homological parity, so no bigon removal is needed.
pub fn arc_curve_parity(
    t: &Triangulation,
    arc: &BasedArc,
    c: &CurveCoords,
) -> Result<u64, OracleError> {
    let place = Placement::build(t, &[c], &[arc])?;
    Ok((place.crossings().len() % 2) as u64)
}

/// Raw crossing count of a transverse canonical placement of two objects
/// given as arcs. Used for diagnostics only.
pub fn arc_arc_raw_crossings(
    t: &Triangulation,
    a: &BasedArc,
    b: &BasedArc,
) -> Result<u64, OracleError> {
    let place = Placement::build(t, &[], &[a, b])?;
    Ok(place.crossings().len() as u64)
}

/// Orders the crossings of each of the two objects along their strands and
/// looks for an innermost bigon: a pair of crossings adjacent along both
/// objects whose connecting subpaths cross the same edge sequence.
fn find_bigon(place: &Placement, crossings: &[Crossing]) -> Option<(Crossing, Crossing)> {
    if crossings.is_empty() {
        return None;
    }
    // Order along strand: (segment idx, order on segment). Order on a
    // segment uses the circular distance of the other chord's inner endpoint
    // from the segment start; within one object chords are disjoint, so this
    // nesting order is exact.
    let m_block = 4 * (place.points.len() as u64 + 2);
    let seg_key = |seg: &Segment, other: &Segment| -> (u64, u64) {
        let tri = match seg.to {
            SegEnd::Pt(_, s) => s / 3,
            SegEnd::Corner(c, _) => c / 3,
        };
        let from = place.coord(tri, &seg.from, m_block);
        let to = place.coord(tri, &seg.to, m_block);
        let o1 = place.coord(tri, &other.from, m_block);
        let o2 = place.coord(tri, &other.to, m_block);
        let dist = |x: (u64, u64)| -> (u64, u64) {
            // circular distance from `from`, walking toward `to`.
            let span = 3 * m_block;
            let d = |p: (u64, u64)| (p.0 + span - from.0) % span;
            (d(x), x.1)
        };
        let inside = |x: (u64, u64)| dist(x) < dist(to);
        if inside(o1) {
            dist(o1)
        } else {
            dist(o2)
        }
    };
    // Assemble per-strand crossing orders for both sides.
    let mut a_orders: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    let mut b_orders: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    let mut keyed: Vec<((usize, usize, (u64, u64)), (usize, usize, (u64, u64)))> = Vec::new();
    for x in crossings {
        let ka = (x.a.strand, x.a.idx, seg_key(&x.a, &x.b));
        let kb = (x.b.strand, x.b.idx, seg_key(&x.b, &x.a));
        keyed.push((ka, kb));
    }
    let mut idx: Vec<usize> = (0..crossings.len()).collect();
    idx.sort_by_key(|&i| keyed[i].0);
    for (rank, &i) in idx.iter().enumerate() {
        let _ = rank;
        a_orders.entry(keyed[i].0 .0).or_default().push(i);
    }
    let mut idx_b: Vec<usize> = (0..crossings.len()).collect();
    idx_b.sort_by_key(|&i| keyed[i].1);
    for &i in &idx_b {
        b_orders.entry(keyed[i].1 .0).or_default().push(i);
    }
    let b_pos: std::collections::HashMap<usize, (usize, usize)> = b_orders
        .iter()
        .flat_map(|(&s, v)| v.iter().enumerate().map(move |(k, &i)| (i, (s, k))))
        .collect();
    for (&sa, order) in &a_orders {
        let n = order.len();
        for k in 0..n {
            let x = order[k];
            let y = order[(k + 1) % n];
            if x == y {
                continue;
            }
            let closed_a = place.strands[sa].closed;
            if !closed_a && (k + 1) % n == 0 {
                continue;
            }
            let (sbx, pbx) = b_pos[&x];
            let (sby, pby) = b_pos[&y];
            if sbx != sby {
                continue;
            }
            let nb = b_orders[&sbx].len();
            let closed_b = place.strands[sbx].closed;
            let forward = (pbx + 1) % nb == pby && (closed_b || pbx + 1 < nb);
            let backward = (pby + 1) % nb == pbx && (closed_b || pby + 1 < nb);
            if !forward && !backward {
                continue;
            }
            // Subpath edge sequences from x to y.
            let sub_a = subpath_edges(place, sa, &crossings[x].a, &crossings[y].a, true);
            let dir_fwd = forward;
            let sub_b = subpath_edges(place, sbx, &crossings[x].b, &crossings[y].b, dir_fwd);
            if sub_a == sub_b {
                return Some((crossings[x].clone(), crossings[y].clone()));
            }
            if backward && forward {
                // Ambiguous two-crossing cycles: try the other side too.
                let sub_b2 = subpath_edges(place, sbx, &crossings[x].b, &crossings[y].b, false);
                if sub_a == sub_b2 {
                    return Some((crossings[x].clone(), crossings[y].clone()));
                }
            }
        }
    }
    None
}

/// Edges crossed walking along a strand from one segment to another.
fn subpath_edges(
    place: &Placement,
    strand: usize,
    from_seg: &Segment,
    to_seg: &Segment,
    forward: bool,
) -> Vec<EdgeId> {
    let s = &place.strands[strand];
    let n = s.word.len();
    if n == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    if forward {
        // Crossing steps from from_seg.idx up to to_seg.idx - 1 (cyclic).
        let mut k = from_seg.idx;
        while k != to_seg.idx {
            if s.closed {
                out.push(place.t.edge_of(s.word[k % n]));
                k = (k + 1) % n;
            } else {
                // Segment k of an arc ends at crossing k (for k < n).
                if k < n {
                    out.push(place.t.edge_of(s.word[k]));
                }
                k += 1;
            }
            if out.len() > 4 * n + 4 {
                break;
            }
        }
    } else {
        let mut k = from_seg.idx;
        while k != to_seg.idx {
            if s.closed {
                let prev = (k + n - 1) % n;
                out.push(place.t.edge_of(s.word[prev]));
                k = prev;
            } else {
                if k > 0 {
                    out.push(place.t.edge_of(s.word[k - 1]));
                }
                k -= 1;
            }
            if out.len() > 4 * n + 4 {
                break;
            }
        }
    }
    out
}

/// Slides the second object's strand across the first along the corridor,
/// cancelling the bigon.
fn remove_bigon(place: &mut Placement, x: &Crossing, y: &Crossing) {
    // Corridor steps along A from x to y (forward), and the matched B steps.
    let sa = x.a.strand;
    let sb = x.b.strand;
    let na = place.strands[sa].word.len();
    let nb = place.strands[sb].word.len();
    let mut a_steps = Vec::new();
    {
        let mut k = x.a.idx;
        while k != y.a.idx {
            a_steps.push(k % na);
            k = (k + 1) % na.max(1);
            if a_steps.len() > na + 1 {
                break;
            }
        }
    }
    // B direction: forward if y follows x.
    let mut b_steps_f = Vec::new();
    {
        let mut k = x.b.idx;
        while k != y.b.idx {
            b_steps_f.push(k % nb.max(1));
            k = (k + 1) % nb.max(1);
            if b_steps_f.len() > nb + 1 {
                break;
            }
        }
    }
    let mut b_steps_r = Vec::new();
    {
        let mut k = x.b.idx;
        while k != y.b.idx {
            let prev = (k + nb - 1) % nb.max(1);
            b_steps_r.push(prev);
            k = prev;
            if b_steps_r.len() > nb + 1 {
                break;
            }
        }
    }
    let a_edges: Vec<EdgeId> = a_steps
        .iter()
        .map(|&k| place.t.edge_of(place.strands[sa].word[k]))
        .collect();
    let bf_edges: Vec<EdgeId> = b_steps_f
        .iter()
        .map(|&k| place.t.edge_of(place.strands[sb].word[k]))
        .collect();
    let b_steps = if bf_edges == a_edges {
        b_steps_f
    } else {
        b_steps_r
    };
    // Point id lookup.
    let pid_of = |strand: usize, step: usize| -> usize {
        let mut base = 0;
        for (si, s) in place.strands.iter().enumerate() {
            if si == strand {
                return base + step;
            }
            base += s.word.len();
        }
        unreachable!()
    };
    for (i, &ka) in a_steps.iter().enumerate() {
        let kb = b_steps[i];
        let e = place.t.edge_of(place.strands[sa].word[ka]);
        let pa = pid_of(sa, ka);
        let pb = pid_of(sb, kb);
        let order = &mut place.edge_order[e];
        let ia0 = order.iter().position(|&p| p == pa).expect("a point");
        let ib = order.iter().position(|&p| p == pb).expect("b point");
        order.remove(ib);
        let ia = order.iter().position(|&p| p == pa).expect("a point");
        if ib > ia0 {
            order.insert(ia, pb);
        } else {
            order.insert(ia + 1, pb);
        }
    }
}

/// Complement analysis of a single multicurve: the pieces of each triangle
/// cut along the normal chords, glued across edges.
#[derive(Clone, Debug)]
pub struct RegionReport {
    /// Number of complement components.
    pub components: usize,
    /// Euler characteristic of each component.
    pub chi: Vec<i64>,
    /// Surface boundary components touched by each region.
    pub boundary_contacts: Vec<Vec<usize>>,
}

pub fn complement_regions(t: &Triangulation, c: &CurveCoords) -> Result<RegionReport, OracleError> {
    c.admissible(t).map_err(OracleError::Coords)?;
    let w = |e: EdgeId| -> Result<u64, OracleError> {
        c.weight(e).to_u64().ok_or(OracleError::TooHeavy)
    };
    let gamma = |corner: usize| -> Result<u64, OracleError> {
        let a = w(t.edge_of(slot_in_tri(corner, 0)))?;
        let b = w(t.edge_of(slot_in_tri(corner, 1)))?;
        let d = w(t.edge_of(slot_in_tri(corner, 2)))?;
        Ok((b + d - a) / 2)
    };
    // Region ids: per triangle, zones (corner j, depth d < gamma_j) then the
    // center. Offsets per triangle.
    let mut offsets = Vec::with_capacity(t.tri_count() + 1);
    let mut total = 0usize;
    for tri in 0..t.tri_count() {
        offsets.push(total);
        let mut cnt = 1; // center
        for j in 0..3 {
            cnt += gamma(3 * tri + j)? as usize;
        }
        total += cnt;
    }
    offsets.push(total);
    let zone_id = |tri: usize, j: usize, d: u64, gammas: &[u64; 3]| -> usize {
        // Layout: corner zones for j = 0,1,2 then center.
        let mut off = offsets[tri];
        for jj in 0..j {
            off += gammas[jj] as usize;
        }
        off + d as usize
    };
    let center_id = |tri: usize| -> usize { offsets[tri + 1] - 1 };

    let mut uf: Vec<usize> = (0..total).collect();
    fn find(uf: &mut Vec<usize>, mut x: usize) -> usize {
        while uf[x] != x {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        x
    }
    let mut glue_count = 0usize;
    let mut contacts: Vec<Vec<usize>> = vec![Vec::new(); total];

    let region_at = |slot: Slot, k: u64| -> Result<usize, OracleError> {
        let tri = slot / 3;
        let gammas = [gamma(3 * tri)?, gamma(3 * tri + 1)?, gamma(3 * tri + 2)?];
        let nxt = corner_next(slot) % 3;
        let prv = corner_prev(slot) % 3;
        let n = w(t.edge_of(slot))?;
        Ok(if k < gammas[nxt] {
            zone_id(tri, nxt, k, &gammas)
        } else if n - k < gammas[prv] {
            zone_id(tri, prv, n - k, &gammas)
        } else {
            center_id(tri)
        })
    };

    for e in 0..t.edge_count() {
        let (s0, s1) = t.edge_slots(e);
        let n = w(e)?;
        match s1 {
            Some(s1) => {
                for k in 0..=n {
                    let r0 = region_at(s0, k)?;
                    let r1 = region_at(s1, n - k)?;
                    let (a, b) = (find(&mut uf, r0), find(&mut uf, r1));
                    uf[a] = b;
                    glue_count += 1;
                    let _ = glue_count;
                }
            }
            None => {
                debug_assert_eq!(n, 0);
                let comp = t
                    .boundary_components()
                    .iter()
                    .position(|bc| bc.slots.contains(&s0))
                    .expect("boundary slot");
                let r = region_at(s0, 0)?;
                contacts[r].push(comp);
            }
        }
    }

    // Collect classes with piece counts and gluing counts.
    use std::collections::HashMap;
    let mut class_of: HashMap<usize, usize> = HashMap::new();
    let mut pieces: Vec<i64> = Vec::new();
    let mut glues: Vec<i64> = Vec::new();
    let mut contact_sets: Vec<Vec<usize>> = Vec::new();
    for r in 0..total {
        let root = find(&mut uf, r);
        let id = *class_of.entry(root).or_insert_with(|| {
            pieces.push(0);
            glues.push(0);
            contact_sets.push(Vec::new());
            pieces.len() - 1
        });
        pieces[id] += 1;
        for &c in &contacts[r] {
            if !contact_sets[id].contains(&c) {
                contact_sets[id].push(c);
            }
        }
    }
    for e in 0..t.edge_count() {
        let (s0, s1) = t.edge_slots(e);
        if s1.is_none() {
            continue;
        }
        let n = w(e)?;
        for k in 0..=n {
            let r0 = region_at(s0, k)?;
            let root = find(&mut uf, r0);
            let id = class_of[&root];
            glues[id] += 1;
        }
    }
    let chi: Vec<i64> = pieces.iter().zip(&glues).map(|(p, g)| p - g).collect();
    Ok(RegionReport {
        components: pieces.len(),
        chi,
        boundary_contacts: contact_sets,
    })
}

/// Classification of a connected simple closed curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveClass {
    NullHomotopic,
    BoundaryParallel { component: usize },
    Essential,
}

pub fn classify_curve(t: &Triangulation, c: &CurveCoords) -> Result<CurveClass, OracleError> {
    let report = complement_regions(t, c)?;
    for (i, &chi) in report.chi.iter().enumerate() {
        if chi == 1 && report.boundary_contacts[i].is_empty() {
            return Ok(CurveClass::NullHomotopic);
        }
    }
    for (i, &chi) in report.chi.iter().enumerate() {
        if chi == 0 && report.boundary_contacts[i].len() == 1 {
            // An annulus between the curve and one boundary circle.
            return Ok(CurveClass::BoundaryParallel {
                component: report.boundary_contacts[i][0],
            });
        }
    }
    Ok(CurveClass::Essential)
}

/// Whether cutting along the (connected, simple) curve leaves the surface
/// connected.
pub fn nonseparating(t: &Triangulation, c: &CurveCoords) -> Result<bool, OracleError> {
    Ok(complement_regions(t, c)?.components == 1)
}


// ---------------------------------------------------------------------------
// Filling verification: the complement of a family of curves and arcs is
// computed by building the exact planar arrangement inside every triangle
// and gluing the chambers across edges. The family fills when every glued
// region is a disk.

use num_rational::BigRational;
use num_traits::Zero as _;

type Pt2 = (BigRational, BigRational);

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Checks that the complement of the placed family consists of disks.
pub fn family_fills(
    t: &Triangulation,
    curves: &[&CurveCoords],
    arcs: &[&BasedArc],
) -> Result<bool, OracleError> {
    let place = Placement::build(t, curves, arcs)?;
    let segs = place.segments();

    // Chamber ids are assigned per triangle face; boundary intervals map to
    // the chamber they touch.
    let mut chamber_offset = Vec::with_capacity(t.tri_count() + 1);
    let mut total_chambers = 0usize;
    // interval_chamber[slot][j] = chamber adjacent to the j-th boundary
    // interval of that slot (between crossing points j-1 and j).
    let mut interval_chamber: Vec<Vec<usize>> = vec![Vec::new(); t.tri_count() * 3];
    for tri in 0..t.tri_count() {
        chamber_offset.push(total_chambers);
        let faces = triangle_arrangement(t, &place, tri, &segs[tri], &mut interval_chamber)?;
        total_chambers += faces;
    }
    chamber_offset.push(total_chambers);
    // Shift interval chamber ids by their triangle offsets.
    for slot in 0..t.tri_count() * 3 {
        let off = chamber_offset[slot / 3];
        for c in interval_chamber[slot].iter_mut() {
            *c += off;
        }
    }

    let mut uf: Vec<usize> = (0..total_chambers).collect();
    fn find(uf: &mut Vec<usize>, mut x: usize) -> usize {
        while uf[x] != x {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        x
    }
    let mut glue_events: Vec<(usize, usize)> = Vec::new();
    for e in 0..t.edge_count() {
        let (s0, s1) = t.edge_slots(e);
        let Some(s1) = s1 else { continue };
        let n = place.edge_order[e].len();
        debug_assert_eq!(interval_chamber[s0].len(), n + 1);
        for j in 0..=n {
            let a = interval_chamber[s0][j];
            let b = interval_chamber[s1][n - j];
            glue_events.push((a, b));
            let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
            uf[ra] = rb;
        }
    }
    // chi = pieces - gluings per class; a disk has chi 1.
    use std::collections::HashMap;
    let mut pieces: HashMap<usize, i64> = HashMap::new();
    for c in 0..total_chambers {
        *pieces.entry(find(&mut uf, c)).or_insert(0) += 1;
    }
    let mut glues: HashMap<usize, i64> = HashMap::new();
    for (a, _) in &glue_events {
        let r = find(&mut uf, *a);
        *glues.entry(r).or_insert(0) += 1;
    }
    for (root, p) in pieces {
        let g = glues.get(&root).copied().unwrap_or(0);
        if p - g != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Builds the exact arrangement of one triangle's chords and returns the
/// number of faces, filling in the chamber id adjacent to every boundary
/// interval of its three sides.
fn triangle_arrangement(
    t: &Triangulation,
    place: &Placement,
    tri: usize,
    segs: &[Segment],
    interval_chamber: &mut [Vec<usize>],
) -> Result<usize, OracleError> {
    // Triangle corners: corner k opposite slot k. Geometric positions:
    // corner 0 at (0,0), corner 1 at (1,0), corner 2 at (0,1). Side k runs
    // from corner k+1 to corner k+2.
    let corner_pos = |k: usize| -> Pt2 {
        match k % 3 {
            0 => (rational(0, 1), rational(0, 1)),
            1 => (rational(1, 1), rational(0, 1)),
            _ => (rational(0, 1), rational(1, 1)),
        }
    };
    let lerp = |a: &Pt2, b: &Pt2, t_: &BigRational| -> Pt2 {
        (&a.0 + (&b.0 - &a.0) * t_, &a.1 + (&b.1 - &a.1) * t_)
    };
    let side_point = |slot: Slot, idx: usize, count: usize| -> Pt2 {
        let k = slot % 3;
        let a = corner_pos(k + 1);
        let b = corner_pos(k + 2);
        let t_ = BigRational::new(((idx + 1) as i64).into(), ((count + 1) as i64).into());
        lerp(&a, &b, &t_)
    };
    let end_pos = |end: &SegEnd| -> Pt2 {
        match *end {
            SegEnd::Pt(pid, slot) => {
                let e = place.points[pid].2;
                let count = place.edge_order[e].len();
                let idx = place.pos_on_slot(pid, slot);
                side_point(slot, idx, count)
            }
            SegEnd::Corner(c, _) => corner_pos(c % 3),
        }
    };

    // Nodes: all segment endpoints, triangle corners, pairwise crossings.
    let mut nodes: Vec<Pt2> = Vec::new();
    let node_of = |nodes: &mut Vec<Pt2>, p: Pt2| -> usize {
        if let Some(i) = nodes.iter().position(|q| *q == p) {
            i
        } else {
            nodes.push(p);
            nodes.len() - 1
        }
    };
    for k in 0..3 {
        let p = corner_pos(k);
        node_of(&mut nodes, p);
    }
    // Corner-to-corner pieces lie exactly along a triangle side; bend each
    // through its own interior waypoint so the arrangement stays simple.
    let mut seg_ends: Vec<(Pt2, Pt2)> = Vec::new();
    for (idx, s) in segs.iter().enumerate() {
        let a = end_pos(&s.from);
        let b = end_pos(&s.to);
        match (&s.from, &s.to) {
            (SegEnd::Corner(ca, _), SegEnd::Corner(cb, _)) if ca != cb => {
                let other = (0..3)
                    .map(|k| corner_pos(k))
                    .find(|p| *p != a && *p != b)
                    .expect("third corner");
                let mid = (
                    (&a.0 + &b.0) / BigRational::from_integer(2.into()),
                    (&a.1 + &b.1) / BigRational::from_integer(2.into()),
                );
                let t_ = BigRational::new(1.into(), (5 + idx as i64).into());
                let way = (
                    &mid.0 + (&other.0 - &mid.0) * &t_,
                    &mid.1 + (&other.1 - &mid.1) * &t_,
                );
                seg_ends.push((a, way.clone()));
                seg_ends.push((way, b));
            }
            _ => seg_ends.push((a, b)),
        }
    }
    // Undirected graph edges as point pairs, splitting segments at their
    // pairwise crossings.
    let mut graph_edges: Vec<(usize, usize)> = Vec::new();
    let mut splits: Vec<Vec<Pt2>> = vec![Vec::new(); seg_ends.len()];
    for i in 0..seg_ends.len() {
        for j in i + 1..seg_ends.len() {
            if let Some(x) = seg_cross(&seg_ends[i], &seg_ends[j]) {
                splits[i].push(x.clone());
                splits[j].push(x);
            }
        }
    }
    for (i, (a, b)) in seg_ends.iter().enumerate() {
        let mut pts = vec![a.clone()];
        let mut inner = splits[i].clone();
        inner.sort_by(|p, q| param_cmp(a, b, p, q));
        inner.dedup();
        pts.extend(inner);
        pts.push(b.clone());
        pts.dedup();
        for w in pts.windows(2) {
            let u = node_of(&mut nodes, w[0].clone());
            let v = node_of(&mut nodes, w[1].clone());
            if u != v {
                graph_edges.push((u, v));
            }
        }
    }
    // Boundary subsegments along each side, between consecutive boundary
    // nodes; record them so interval chambers can be read off afterwards.
    let mut boundary_subsegs: Vec<(Slot, usize, usize, usize)> = Vec::new();
    for k in 0..3 {
        let slot = 3 * tri + k;
        let e = t.edge_of(slot);
        let count = place.edge_order[e].len();
        let mut pts = vec![corner_pos(k + 1)];
        for idx in 0..count {
            pts.push(side_point(slot, idx, count));
        }
        pts.push(corner_pos(k + 2));
        for (j, w) in pts.windows(2).enumerate() {
            let u = node_of(&mut nodes, w[0].clone());
            let v = node_of(&mut nodes, w[1].clone());
            debug_assert_ne!(u, v);
            boundary_subsegs.push((slot, j, u, v));
            graph_edges.push((u, v));
        }
    }

    // Half-edge structure with angular rotations.
    let n_nodes = nodes.len();
    let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); n_nodes];
    // Half-edge 2i = (u -> v), 2i+1 = (v -> u) for graph edge i.
    let he_count = graph_edges.len() * 2;
    let he_from = |h: usize| -> usize {
        let (u, v) = graph_edges[h / 2];
        if h % 2 == 0 {
            u
        } else {
            v
        }
    };
    let he_to = |h: usize| -> usize {
        let (u, v) = graph_edges[h / 2];
        if h % 2 == 0 {
            v
        } else {
            u
        }
    };
    for h in 0..he_count {
        outgoing[he_from(h)].push(h);
    }
    for (u, list) in outgoing.iter_mut().enumerate() {
        let base = nodes[u].clone();
        list.sort_by(|&h1, &h2| angle_cmp(&base, &nodes[he_to(h1)], &nodes[he_to(h2)]));
    }
    // next-around-face (interior on the left): from the reverse half-edge,
    // take the next outgoing edge clockwise.
    let mut next_he = vec![usize::MAX; he_count];
    for h in 0..he_count {
        let rev = h ^ 1;
        let at = he_from(rev);
        let list = &outgoing[at];
        let pos = list.iter().position(|&x| x == rev).expect("half-edge");
        let nxt = list[(pos + list.len() - 1) % list.len()];
        next_he[h] = nxt;
    }
    let mut face_of = vec![usize::MAX; he_count];
    let mut faces = 0usize;
    for h0 in 0..he_count {
        if face_of[h0] != usize::MAX {
            continue;
        }
        let mut h = h0;
        loop {
            face_of[h] = faces;
            h = next_he[h];
            if h == h0 {
                break;
            }
        }
        faces += 1;
    }
    // The outer face is the one walked along the boundary with the exterior
    // on the left: the reverse of a boundary subsegment traversed backward.
    // Identify it as the face of the half-edge along side 0 from corner 1
    // toward corner 2 seen from outside, i.e. the reverse orientation.
    let (_, _, u0, v0) = boundary_subsegs
        .iter()
        .find(|(s, j, _, _)| *s == 3 * tri && *j == 0)
        .expect("side 0 subsegment");
    let outer = {
        let gi = graph_edges
            .iter()
            .position(|&(a, b)| (a == *u0 && b == *v0) || (a == *v0 && b == *u0))
            .expect("boundary edge");
        // Half-edge traversing v -> u relative to the counterclockwise
        // boundary direction u -> v.
        let h = if graph_edges[gi] == (*u0, *v0) {
            2 * gi + 1
        } else {
            2 * gi
        };
        face_of[h]
    };
    // Interval chambers: the face on the interior side of each boundary
    // subsegment.
    for (slot, j, u, v) in &boundary_subsegs {
        let gi = graph_edges
            .iter()
            .position(|&(a, b)| (a == *u && b == *v) || (a == *v && b == *u))
            .expect("boundary edge");
        let h = if graph_edges[gi] == (*u, *v) {
            2 * gi
        } else {
            2 * gi + 1
        };
        let f = face_of[h];
        debug_assert_ne!(f, outer, "interior face of a boundary subsegment");
        let shifted = if f > outer { f - 1 } else { f };
        let vec = &mut interval_chamber[*slot];
        if vec.len() <= *j {
            vec.resize(j + 1, usize::MAX);
        }
        vec[*j] = shifted;
    }
    Ok(faces - 1)
}

/// Exact intersection point of two open segments, if they cross.
fn seg_cross(a: &(Pt2, Pt2), b: &(Pt2, Pt2)) -> Option<Pt2> {
    let d1 = (&a.1 .0 - &a.0 .0, &a.1 .1 - &a.0 .1);
    let d2 = (&b.1 .0 - &b.0 .0, &b.1 .1 - &b.0 .1);
    let denom = &d1.0 * &d2.1 - &d1.1 * &d2.0;
    if denom.is_zero() {
        return None;
    }
    let w = (&b.0 .0 - &a.0 .0, &b.0 .1 - &a.0 .1);
    let s = (&w.0 * &d2.1 - &w.1 * &d2.0) / denom.clone();
    let u = (&w.0 * &d1.1 - &w.1 * &d1.0) / denom;
    let zero = BigRational::new(0.into(), 1.into());
    let one = BigRational::new(1.into(), 1.into());
    if s > zero && s < one && u > zero && u < one {
        Some((&a.0 .0 + &d1.0 * &s, &a.0 .1 + &d1.1 * &s))
    } else {
        None
    }
}

fn param_cmp(a: &Pt2, b: &Pt2, p: &Pt2, q: &Pt2) -> std::cmp::Ordering {
    // Compare positions of p and q along the segment a -> b.
    let dp = (&p.0 - &a.0) * (&b.0 - &a.0) + (&p.1 - &a.1) * (&b.1 - &a.1);
    let dq = (&q.0 - &a.0) * (&b.0 - &a.0) + (&q.1 - &a.1) * (&b.1 - &a.1);
    dp.cmp(&dq)
}

/// Counterclockwise angular order of directions from `base` toward `p`, `q`.
fn angle_cmp(base: &Pt2, p: &Pt2, q: &Pt2) -> std::cmp::Ordering {
    let dp = (&p.0 - &base.0, &p.1 - &base.1);
    let dq = (&q.0 - &base.0, &q.1 - &base.1);
    let zero = BigRational::new(0.into(), 1.into());
    let half = |d: &(BigRational, BigRational)| -> u8 {
        // Half-plane: angles in [0, pi) before [pi, 2pi).
        if d.1 > zero || (d.1 == zero && d.0 > zero) {
            0
        } else {
            1
        }
    };
    let (hp, hq) = (half(&dp), half(&dq));
    if hp != hq {
        return hp.cmp(&hq);
    }
    // Same half-plane: cross product decides.
    let cross = &dp.0 * &dq.1 - &dp.1 * &dq.0;
    if cross > zero {
        std::cmp::Ordering::Less
    } else if cross < zero {
        std::cmp::Ordering::Greater
    } else {
        std::cmp::Ordering::Equal
    }
}

#[cfg(test)]
mod fill_tests {
    use super::*;
    use crate::surface::standard_fiber;

    #[test]
    fn torus_probes_fill() {
        let t = standard_fiber(1, 1).unwrap();
        let curves: Vec<&CurveCoords> = t.labels.curves.values().collect();
        let arcs: Vec<&crate::surface::BasedArc> = t.labels.arcs.values().collect();
        assert!(family_fills(&t, &curves, &arcs).unwrap());
    }

    #[test]
    fn single_curve_does_not_fill() {
        let t = standard_fiber(2, 1).unwrap();
        let c1 = &t.labels.curves["c1"];
        assert!(!family_fills(&t, &[c1], &[]).unwrap());
    }
}

#[cfg(test)]
mod fill_more_tests {
    use super::*;
    use crate::surface::{cable_fiber, standard_fiber};

    #[test]
    fn probe_families_fill_all_shipped_fibers() {
        for g in 1..=3 {
            let t = standard_fiber(g, 1).unwrap();
            let curves: Vec<&CurveCoords> = t.labels.curves.values().collect();
            let arcs: Vec<&crate::surface::BasedArc> = t.labels.arcs.values().collect();
            assert!(family_fills(&t, &curves, &arcs).unwrap(), "fiber genus {g}");
        }
        for g in 1..=3 {
            let t = cable_fiber(g).unwrap();
            let curves: Vec<&CurveCoords> = t.labels.curves.values().collect();
            let arcs: Vec<&crate::surface::BasedArc> = t.labels.arcs.values().collect();
            assert!(family_fills(&t, &curves, &arcs).unwrap(), "cable fiber {g}");
        }
    }
}
