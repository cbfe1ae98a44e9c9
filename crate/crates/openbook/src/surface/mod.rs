//! Combinatorial oriented surfaces with boundary.
//!
//! A surface is a set of oriented triangles with slot gluings. Triangle slots
//! are indexed 0, 1, 2 in counterclockwise order. Corner `k` of a triangle is
//! the corner opposite slot `k`, so it sits between sides `k+1` and `k+2`.
//! Side `k` runs counterclockwise from corner `k+1` to corner `k+2`, and a
//! gluing of two slots identifies them with reversed orientation. Every vertex
//! of a valid triangulation lies on the boundary.

mod arc;
mod build;
mod coords;
mod flip;
pub mod oracle;

pub use arc::{ArcError, BasedArc};
pub use build::{
    arc_side_sequence, band_sum_words, cable_fiber, curve_from_side_sequence, polygon_curve,
    polygon_handle_arc, shift_handles, side_sequence, standard_fiber, transfer_curve,
    transfer_into_copy,
};
pub use coords::{core_transits, CoordsError, CurveCoords, Gadget, GadgetError};
pub use flip::{flip, CoordTransfer, FlipData, FlipError, Tables};

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// Index of an edge of the triangulation.
pub type EdgeId = usize;
/// Index of a triangle.
pub type TriId = usize;
/// A slot is one of the three sides of a triangle, encoded as `3 * tri + k`.
pub type Slot = usize;
/// A corner is encoded like the slot it is opposite to.
pub type Corner = usize;
/// Index of a vertex orbit.
pub type VertexId = usize;

#[derive(Debug, Error)]
pub enum SurfaceError {
    #[error("edge `{0}` appears in {1} slots, expected 1 or 2")]
    BadEdgeValence(String, usize),
    #[error("vertex {0} does not lie on the boundary")]
    InteriorVertex(VertexId),
    #[error("boundary component {0} has no marked vertex")]
    UnmarkedBoundary(usize),
    #[error("triangulation is not connected")]
    Disconnected,
    #[error("Euler characteristic {got}, expected {expected}")]
    EulerMismatch { got: i64, expected: i64 },
    #[error("closed surfaces are unsupported: boundary count must be at least 1")]
    ClosedSurface,
    #[error("invalid genus/boundary parameters")]
    BadParameters,
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
}

/// One boundary circle: its boundary slots in cyclic order following the
/// induced boundary orientation, plus the distinguished marked vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryComponent {
    pub slots: Vec<Slot>,
    pub vertices: Vec<VertexId>,
    pub marked: VertexId,
}

/// Labels shipped with a surface: named curves and named arcs.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Labels {
    pub curves: BTreeMap<String, CurveCoords>,
    pub arcs: BTreeMap<String, BasedArc>,
}

#[derive(Clone)]
pub struct Triangulation {
    /// Edge id of each slot, length `3 * tris`.
    slot_edge: Vec<EdgeId>,
    /// Glued partner of each slot, `None` on the boundary.
    mate: Vec<Option<Slot>>,
    /// For each edge, its one or two slots.
    edge_slots: Vec<(Slot, Option<Slot>)>,
    edge_names: Vec<String>,
    /// Vertex orbit of each corner.
    corner_vertex: Vec<VertexId>,
    n_vertices: usize,
    /// For every vertex, its corners ordered across the fan. The first corner
    /// touches the incoming boundary edge, the last the outgoing one.
    fans: Vec<Vec<Corner>>,
    boundary: Vec<BoundaryComponent>,
    pub labels: Labels,
    genus: usize,
}

impl PartialEq for Triangulation {
    fn eq(&self, other: &Self) -> bool {
        self.slot_edge == other.slot_edge && self.mate == other.mate
    }
}
impl Eq for Triangulation {}

impl fmt::Debug for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Triangulation(T={}, E={}, V={}, g={}, b={})",
            self.tri_count(),
            self.edge_count(),
            self.n_vertices,
            self.genus,
            self.boundary.len()
        )
    }
}

impl Triangulation {
    /// Builds a triangulation from named triangle sides. A name occurring in
    /// two slots becomes an internal edge glued with reversed orientation; a
    /// name occurring once becomes a boundary edge. `marked` selects the
    /// marked vertex of each boundary component by a `(boundary edge name,
    /// end)` pair, where end 0 is the start of the edge in boundary
    /// orientation. Components not covered get their smallest vertex marked.
    pub fn from_named(tris: &[[&str; 3]], marked: &[(&str, usize)]) -> Result<Self, SurfaceError> {
        let mut names: Vec<String> = Vec::new();
        let mut by_name: BTreeMap<String, EdgeId> = BTreeMap::new();
        let mut slot_edge = Vec::with_capacity(tris.len() * 3);
        let mut edge_slots: Vec<(Slot, Option<Slot>)> = Vec::new();
        for (t, tri) in tris.iter().enumerate() {
            for (k, name) in tri.iter().enumerate() {
                let slot = 3 * t + k;
                let id = *by_name.entry(name.to_string()).or_insert_with(|| {
                    names.push(name.to_string());
                    edge_slots.push((usize::MAX, None));
                    names.len() - 1
                });
                slot_edge.push(id);
                let entry = &mut edge_slots[id];
                if entry.0 == usize::MAX {
                    entry.0 = slot;
                } else if entry.1.is_none() {
                    entry.1 = Some(slot);
                } else {
                    return Err(SurfaceError::BadEdgeValence(name.to_string(), 3));
                }
            }
        }
        let mut mate = vec![None; slot_edge.len()];
        for &(s0, s1) in &edge_slots {
            if let Some(s1) = s1 {
                mate[s0] = Some(s1);
                mate[s1] = Some(s0);
            }
        }
        let mut t = Triangulation {
            slot_edge,
            mate,
            edge_slots,
            edge_names: names,
            corner_vertex: Vec::new(),
            n_vertices: 0,
            fans: Vec::new(),
            boundary: Vec::new(),
            labels: Labels::default(),
            genus: 0,
        };
        t.rebuild_derived()?;
        t.apply_markings(marked)?;
        Ok(t)
    }

    fn apply_markings(&mut self, marked: &[(&str, usize)]) -> Result<(), SurfaceError> {
        for &(name, end) in marked {
            let edge = self
                .edge_by_name(name)
                .ok_or_else(|| SurfaceError::UnknownLabel(name.to_string()))?;
            let slot = self.edge_slots[edge].0;
            if self.mate[slot].is_some() {
                return Err(SurfaceError::UnknownLabel(format!(
                    "{name} is not a boundary edge"
                )));
            }
            let v = if end == 0 {
                self.slot_start_vertex(slot)
            } else {
                self.slot_end_vertex(slot)
            };
            for comp in &mut self.boundary {
                if comp.vertices.contains(&v) {
                    comp.marked = v;
                }
            }
        }
        Ok(())
    }

    /// Recomputes vertex orbits, fans and boundary cycles from the gluing
    /// tables, checking the structural invariants along the way.
    pub(crate) fn rebuild_derived(&mut self) -> Result<(), SurfaceError> {
        let n_corners = self.slot_edge.len();
        // Union corners into vertex orbits through the gluings.
        let mut uf: Vec<usize> = (0..n_corners).collect();
        fn find(uf: &mut Vec<usize>, mut x: usize) -> usize {
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        }
        for s in 0..n_corners {
            if let Some(s2) = self.mate[s] {
                // Side s runs from corner s+1 to corner s+2 (within its
                // triangle); the gluing reverses, so start matches end.
                let (a1, a2) = (corner_next(s), corner_prev(s));
                let (b1, b2) = (corner_next(s2), corner_prev(s2));
                let (ra, rb) = (find(&mut uf, a1), find(&mut uf, b2));
                uf[ra] = rb;
                let (ra, rb) = (find(&mut uf, a2), find(&mut uf, b1));
                uf[ra] = rb;
            }
        }
        let mut vert_of = vec![usize::MAX; n_corners];
        let mut n_vertices = 0;
        for c in 0..n_corners {
            let r = find(&mut uf, c);
            if vert_of[r] == usize::MAX {
                vert_of[r] = n_vertices;
                n_vertices += 1;
            }
            vert_of[c] = vert_of[r];
        }
        self.corner_vertex = vert_of;
        self.n_vertices = n_vertices;

        // Fans: at each vertex walk from the corner blocked on its incoming
        // side. rot_next crosses the corner's outgoing side (index c+2).
        let mut fans: Vec<Vec<Corner>> = vec![Vec::new(); n_vertices];
        let mut fan_start: Vec<Option<Corner>> = vec![None; n_vertices];
        let mut on_boundary = vec![false; n_vertices];
        for c in 0..n_corners {
            let arrive = slot_in_tri(c, 1); // side c+1, arrives at corner c
            if self.mate[arrive].is_none() {
                let v = self.corner_vertex[c];
                on_boundary[v] = true;
                fan_start[v] = Some(c);
            }
        }
        for v in 0..n_vertices {
            let Some(start) = fan_start[v] else {
                return Err(SurfaceError::InteriorVertex(v));
            };
            let mut c = start;
            loop {
                fans[v].push(c);
                if fans[v].len() > n_corners {
                    return Err(SurfaceError::Disconnected);
                }
                let leave = slot_in_tri(c, 2); // side c+2, leaves corner c
                match self.mate[leave] {
                    None => break,
                    Some(m) => c = corner_prev(m),
                }
            }
        }
        self.fans = fans;

        // Boundary cycles in the induced orientation: after boundary slot s
        // (running corner s+1 -> corner s+2) the next boundary slot is the
        // blocked incoming side of the last fan corner at the end vertex.
        let mut comp_of: Vec<Option<usize>> = vec![None; n_corners];
        let mut boundary = Vec::new();
        for s in 0..n_corners {
            if self.mate[s].is_some() || comp_of[s].is_some() {
                continue;
            }
            let mut slots = Vec::new();
            let mut vertices = Vec::new();
            let mut cur = s;
            loop {
                comp_of[cur] = Some(boundary.len());
                slots.push(cur);
                vertices.push(self.slot_start_vertex(cur));
                let v_end = self.slot_end_vertex(cur);
                let last = *self.fans[v_end].last().expect("nonempty fan");
                let next = slot_in_tri(last, 2);
                debug_assert!(self.mate[next].is_none());
                if next == s {
                    break;
                }
                cur = next;
            }
            let marked = *vertices.iter().min().expect("nonempty boundary");
            boundary.push(BoundaryComponent {
                slots,
                vertices,
                marked,
            });
        }
        if boundary.is_empty() {
            return Err(SurfaceError::ClosedSurface);
        }
        for v in 0..n_vertices {
            if !on_boundary[v] {
                return Err(SurfaceError::InteriorVertex(v));
            }
        }
        self.boundary = boundary;

        // Connectivity over triangles.
        let t_count = self.tri_count();
        if t_count > 0 {
            let mut seen = vec![false; t_count];
            let mut stack = vec![0usize];
            seen[0] = true;
            while let Some(t) = stack.pop() {
                for k in 0..3 {
                    if let Some(m) = self.mate[3 * t + k] {
                        let t2 = m / 3;
                        if !seen[t2] {
                            seen[t2] = true;
                            stack.push(t2);
                        }
                    }
                }
            }
            if seen.iter().any(|&x| !x) {
                return Err(SurfaceError::Disconnected);
            }
        }

        let chi = self.euler_characteristic();
        let b = self.boundary.len() as i64;
        let g2 = 2 - b - chi;
        if g2 < 0 || g2 % 2 != 0 {
            return Err(SurfaceError::EulerMismatch {
                got: chi,
                expected: chi,
            });
        }
        self.genus = (g2 / 2) as usize;
        Ok(())
    }

    pub fn tri_count(&self) -> usize {
        self.slot_edge.len() / 3
    }
    pub fn edge_count(&self) -> usize {
        self.edge_slots.len()
    }
    pub fn vertex_count(&self) -> usize {
        self.n_vertices
    }
    pub fn genus(&self) -> usize {
        self.genus
    }
    pub fn boundary_components(&self) -> &[BoundaryComponent] {
        &self.boundary
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices as i64 - self.edge_count() as i64 + self.tri_count() as i64
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edge_names[e]
    }
    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edge_names.iter().position(|n| n == name)
    }
    pub fn edge_of(&self, s: Slot) -> EdgeId {
        self.slot_edge[s]
    }
    pub fn mate(&self, s: Slot) -> Option<Slot> {
        self.mate[s]
    }
    pub fn edge_slots(&self, e: EdgeId) -> (Slot, Option<Slot>) {
        self.edge_slots[e]
    }
    pub fn is_internal(&self, e: EdgeId) -> bool {
        self.edge_slots[e].1.is_some()
    }
    pub fn vertex_of_corner(&self, c: Corner) -> VertexId {
        self.corner_vertex[c]
    }
    pub fn fan(&self, v: VertexId) -> &[Corner] {
        &self.fans[v]
    }
    pub fn marked_vertex(&self, component: usize) -> VertexId {
        self.boundary[component].marked
    }

    /// Vertex at the counterclockwise start of a slot (corner `s+1`).
    pub fn slot_start_vertex(&self, s: Slot) -> VertexId {
        self.corner_vertex[corner_next(s)]
    }
    /// Vertex at the counterclockwise end of a slot (corner `s+2`).
    pub fn slot_end_vertex(&self, s: Slot) -> VertexId {
        self.corner_vertex[corner_prev(s)]
    }

    /// The boundary component containing a vertex, if any.
    pub fn component_of_vertex(&self, v: VertexId) -> Option<usize> {
        self.boundary.iter().position(|c| c.vertices.contains(&v))
    }

    /// Position of a corner within its vertex fan.
    pub fn fan_position(&self, c: Corner) -> usize {
        let v = self.corner_vertex[c];
        self.fans[v]
            .iter()
            .position(|&x| x == c)
            .expect("corner in fan")
    }

    pub(crate) fn set_tables(
        &mut self,
        slot_edge: Vec<EdgeId>,
        mate: Vec<Option<Slot>>,
        edge_slots: Vec<(Slot, Option<Slot>)>,
    ) {
        self.slot_edge = slot_edge;
        self.mate = mate;
        self.edge_slots = edge_slots;
    }

    /// Structural fingerprint used to detect triangulation mismatches.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        let mut mix = |x: u64| {
            h ^= x;
            h = h.wrapping_mul(0x100000001b3);
        };
        for &e in &self.slot_edge {
            mix(e as u64 + 1);
        }
        for &m in &self.mate {
            mix(m.map(|s| s as u64 + 2).unwrap_or(1));
        }
        h
    }
}

/// The slot `base + k` within the same triangle.
#[inline]
pub fn slot_in_tri(base: Slot, k: usize) -> Slot {
    let t = base / 3;
    3 * t + (base + k) % 3
}
/// Corner/slot index shifted by one counterclockwise within its triangle.
#[inline]
pub fn corner_next(c: usize) -> usize {
    slot_in_tri(c, 1)
}
/// Corner/slot index shifted by two counterclockwise within its triangle.
#[inline]
pub fn corner_prev(c: usize) -> usize {
    slot_in_tri(c, 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_is_one_triangle() {
        let t = Triangulation::from_named(&[["p", "q", "r"]], &[]).unwrap();
        assert_eq!(t.euler_characteristic(), 1);
        assert_eq!(t.vertex_count(), 3);
        assert_eq!(t.boundary_components().len(), 1);
        assert_eq!(t.genus(), 0);
    }

    #[test]
    fn annulus_two_triangles() {
        // Two boundary loops l0, l1 and two internal edges.
        let t = Triangulation::from_named(&[["l0", "e", "f"], ["l1", "e", "f"]], &[]).unwrap();
        assert_eq!(t.euler_characteristic(), 0);
        assert_eq!(t.boundary_components().len(), 2);
        assert_eq!(t.genus(), 0);
        assert_eq!(t.vertex_count(), 2);
    }

    #[test]
    fn closed_surface_rejected() {
        // Two triangles glued along all three edges form a sphere.
        let r = Triangulation::from_named(&[["a", "b", "c"], ["a", "c", "b"]], &[]);
        assert!(r.is_err());
    }

    #[test]
    fn fan_walk_is_consistent() {
        let t = Triangulation::from_named(&[["l0", "e", "f"], ["l1", "e", "f"]], &[]).unwrap();
        for v in 0..t.vertex_count() {
            let fan = t.fan(v);
            assert!(!fan.is_empty());
            for &c in fan {
                assert_eq!(t.vertex_of_corner(c), v);
            }
        }
    }
}
