//! The elementary retriangulation move.
//!
//! Flipping an internal edge replaces the diagonal of the surrounding
//! quadrilateral by the opposite diagonal. Curve coordinates transform by the
//! tropical quadrilateral rule and arc words are rewritten locally. The new
//! diagonal keeps the edge id of the old one; the two triangles are renumbered
//! with the diagonal at slot 0.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::{
    corner_next, corner_prev, slot_in_tri, BasedArc, Corner, CurveCoords, EdgeId, Slot,
    Triangulation,
};

#[derive(Debug, Error)]
pub enum FlipError {
    #[error("edge `{0}` is not internal")]
    BoundaryEdge(String),
    #[error("edge `{0}` is self-glued into a degenerate square")]
    Degenerate(String),
    #[error("coordinate transfer produced a negative weight")]
    NegativeWeight,
}

/// Everything needed to transfer curves and arcs across one flip.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlipData {
    pub edge: EdgeId,
    pub ta: usize,
    pub tb: usize,
    /// Old slots of the diagonal in `ta` and `tb`.
    pub sa: Slot,
    pub sb: Slot,
    /// Old outer slots, counterclockwise around the quadrilateral.
    pub p: Slot,
    pub q: Slot,
    pub r: Slot,
    pub s: Slot,
    /// Edges of the outer sides.
    pub ep: EdgeId,
    pub eq: EdgeId,
    pub er: EdgeId,
    pub es: EdgeId,
}

impl FlipData {
    pub fn read(t: &Triangulation, e: EdgeId) -> Result<FlipData, FlipError> {
        let (sa, sb) = t.edge_slots(e);
        let Some(sb) = sb else {
            return Err(FlipError::BoundaryEdge(t.edge_name(e).to_string()));
        };
        if sa / 3 == sb / 3 {
            return Err(FlipError::Degenerate(t.edge_name(e).to_string()));
        }
        let (p, q) = (slot_in_tri(sa, 1), slot_in_tri(sa, 2));
        let (r, s) = (slot_in_tri(sb, 1), slot_in_tri(sb, 2));
        Ok(FlipData {
            edge: e,
            ta: sa / 3,
            tb: sb / 3,
            sa,
            sb,
            p,
            q,
            r,
            s,
            ep: t.edge_of(p),
            eq: t.edge_of(q),
            er: t.edge_of(r),
            es: t.edge_of(s),
        })
    }

    /// New slot id of an old quad slot; other slots keep their ids.
    #[inline]
    pub fn renumber(&self, old: Slot) -> Slot {
        if old == self.p {
            3 * self.tb + 2
        } else if old == self.q {
            3 * self.ta + 1
        } else if old == self.r {
            3 * self.ta + 2
        } else if old == self.s {
            3 * self.tb + 1
        } else {
            old
        }
    }

    /// Octagon position of a corner of the quadrilateral: corners W,X,Y,Z at
    /// positions 0,2,4,6 with the old diagonal joining W and Y.
    fn corner_pos(&self, c: Corner) -> Option<u8> {
        if c == self.sa {
            Some(2) // X
        } else if c == self.sb {
            Some(6) // Z
        } else if c == corner_prev(self.sa) || c == corner_next(self.sb) {
            Some(0) // W
        } else if c == corner_next(self.sa) || c == corner_prev(self.sb) {
            Some(4) // Y
        } else {
            None
        }
    }

    /// Octagon position of an outer quad slot.
    fn side_pos(&self, slot: Slot) -> Option<u8> {
        if slot == self.p {
            Some(1)
        } else if slot == self.q {
            Some(3)
        } else if slot == self.r {
            Some(5)
        } else if slot == self.s {
            Some(7)
        } else {
            None
        }
    }

    /// New corner id for a quad corner; `toward` is the octagon position of
    /// the other endpoint of the chord leaving this corner, used to pick a
    /// local name for the corners X and Z shared by both new triangles.
    fn new_corner(&self, c: Corner, toward: u8) -> Corner {
        match self.corner_pos(c).expect("corner in quad") {
            0 => 3 * self.tb, // W
            4 => 3 * self.ta, // Y
            2 => {
                // X: new tA corner 2 or new tB corner 1.
                if (3..=6).contains(&toward) {
                    3 * self.ta + 2
                } else {
                    3 * self.tb + 1
                }
            }
            6 => {
                // Z: new tA corner 1 or new tB corner 2.
                if (3..=5).contains(&toward) || toward == 2 {
                    3 * self.ta + 1
                } else {
                    3 * self.tb + 2
                }
            }
            _ => unreachable!(),
        }
    }

    /// Whether a chord between two octagon positions crosses the new
    /// diagonal, and if so, from which new triangle it exits first.
    fn eprime_crossing(&self, u: u8, v: u8) -> Option<Slot> {
        let in_a = |x: u8| (3..=5).contains(&x);
        let in_b = |x: u8| x == 7 || x == 0 || x == 1;
        if u == 2 || u == 6 || v == 2 || v == 6 {
            return None;
        }
        if in_a(u) && in_b(v) {
            Some(3 * self.ta)
        } else if in_b(u) && in_a(v) {
            Some(3 * self.tb)
        } else {
            None
        }
    }

    /// Quadrilateral rule for one curve weight vector.
    pub fn transfer_curve(&self, c: &CurveCoords) -> Result<CurveCoords, FlipError> {
        let w = |e: EdgeId| BigInt::from(c.weight(e).clone());
        let around = (w(self.ep) + w(self.er)).max(w(self.eq) + w(self.es));
        let new_e: BigInt = around - w(self.edge);
        if new_e < BigInt::zero() {
            return Err(FlipError::NegativeWeight);
        }
        let mut out = c.clone();
        out.weights_mut()[self.edge] = new_e.try_into().expect("nonnegative");
        Ok(out)
    }

    /// Rewrites an arc word across the flip. `old` is the triangulation
    /// before the flip, `new` the one after.
    pub fn transfer_arc(
        &self,
        old: &Triangulation,
        new: &Triangulation,
        arc: &BasedArc,
    ) -> BasedArc {
        let in_quad = |tri: usize| tri == self.ta || tri == self.tb;
        // Octagon positions of every chord endpoint along the arc, in order:
        // used to place new-diagonal crossings and to rename end corners.
        let mut new_word: Vec<Slot> = Vec::with_capacity(arc.word.len() + 4);
        // Position of the active chord start, when inside the quad.
        let mut chord_start: Option<u8> = None;
        // For renaming the departure corner we need the far end of the first
        // chord when the departure lies in the quad.
        let dep_in_quad = in_quad(arc.dep / 3);
        let mut first_target: Option<u8> = None;
        if dep_in_quad {
            chord_start = Some(self.corner_pos(arc.dep).expect("corner of quad triangle"));
        }
        for &s_ex in &arc.word {
            if old.edge_of(s_ex) == self.edge && (s_ex == self.sa || s_ex == self.sb) {
                // Old diagonal crossing disappears; the chord continues.
                debug_assert!(chord_start.is_some());
                continue;
            }
            let exit_pos = self.side_pos(s_ex);
            if let Some(u) = chord_start {
                let v = exit_pos.expect("chord ends on a quad side");
                if first_target.is_none() && dep_in_quad {
                    first_target = Some(v);
                }
                if let Some(diag_slot) = self.eprime_crossing(u, v) {
                    new_word.push(diag_slot);
                }
            }
            new_word.push(self.renumber(s_ex));
            let entered = old.mate(s_ex).expect("internal crossing");
            chord_start = if in_quad(entered / 3) {
                Some(self.side_pos(entered).expect("quad side"))
            } else {
                None
            };
        }
        let arr_in_quad = in_quad(arc.arr / 3);
        let mut last_source: Option<u8> = None;
        if let Some(u) = chord_start {
            let v = self.corner_pos(arc.arr).expect("corner of quad triangle");
            if first_target.is_none() && dep_in_quad {
                first_target = Some(v);
            }
            last_source = Some(u);
            if let Some(diag_slot) = self.eprime_crossing(u, v) {
                new_word.push(diag_slot);
            }
        }
        let new_dep = if dep_in_quad {
            let toward = first_target.unwrap_or(2);
            self.new_corner(arc.dep, toward)
        } else {
            arc.dep
        };
        let new_arr = if arr_in_quad {
            let from = last_source.unwrap_or(2);
            self.new_corner(arc.arr, from)
        } else {
            arc.arr
        };
        BasedArc::new(new, new_dep, new_word, new_arr).expect("flip transfer yields valid path")
    }
}

/// Compact gluing tables, enough to transfer objects without the derived
/// structure of a full triangulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tables {
    pub slot_edge: Vec<EdgeId>,
    pub mate: Vec<Option<Slot>>,
}

impl Tables {
    pub fn of(t: &Triangulation) -> Tables {
        let slots = t.tri_count() * 3;
        Tables {
            slot_edge: (0..slots).map(|s| t.edge_of(s)).collect(),
            mate: (0..slots).map(|s| t.mate(s)).collect(),
        }
    }

    pub fn apply_flip(&mut self, d: &FlipData) {
        let partners = [
            self.mate[d.p],
            self.mate[d.q],
            self.mate[d.r],
            self.mate[d.s],
        ];
        let (na, nb) = (3 * d.ta, 3 * d.tb);
        self.slot_edge[na] = d.edge;
        self.slot_edge[na + 1] = d.eq;
        self.slot_edge[na + 2] = d.er;
        self.slot_edge[nb] = d.edge;
        self.slot_edge[nb + 1] = d.es;
        self.slot_edge[nb + 2] = d.ep;
        self.mate[na] = Some(nb);
        self.mate[nb] = Some(na);
        let moved = [
            (d.p, nb + 2, partners[0]),
            (d.q, na + 1, partners[1]),
            (d.r, na + 2, partners[2]),
            (d.s, nb + 1, partners[3]),
        ];
        for &(_, new_slot, partner) in &moved {
            self.mate[new_slot] = partner.map(|m| d.renumber(m));
        }
        for &(_, new_slot, partner) in &moved {
            if let Some(m) = partner {
                let m2 = d.renumber(m);
                // Fix the reverse pointer for partners outside the quad.
                if m2 == m && m != d.p && m != d.q && m != d.r && m != d.s {
                    self.mate[m] = Some(new_slot);
                }
            }
        }
    }
}

/// Flips an internal edge, returning the new triangulation together with the
/// transfer that maps curve coordinates and rewrites arc words. Labels of the
/// input are transferred onto the result.
pub fn flip(t: &Triangulation, e: EdgeId) -> Result<(Triangulation, CoordTransfer), FlipError> {
    let data = FlipData::read(t, e)?;
    let mut tables = Tables::of(t);
    tables.apply_flip(&data);
    let mut edge_slots: Vec<(Slot, Option<Slot>)> = vec![(usize::MAX, None); t.edge_count()];
    for (slot, &e_id) in tables.slot_edge.iter().enumerate() {
        let entry = &mut edge_slots[e_id];
        if entry.0 == usize::MAX {
            entry.0 = slot;
        } else {
            entry.1 = Some(slot);
        }
    }
    let mut out = t.clone();
    out.labels.curves.clear();
    out.labels.arcs.clear();
    out.set_tables(tables.slot_edge, tables.mate, edge_slots);
    out.rebuild_derived().expect("flip preserves validity");
    let transfer = CoordTransfer { data };
    for (name, c) in &t.labels.curves {
        let moved = transfer.curve(c).expect("label stays admissible");
        out.labels.curves.insert(name.clone(), moved);
    }
    let arc_moves: Vec<(String, BasedArc)> = t
        .labels
        .arcs
        .iter()
        .map(|(name, a)| (name.clone(), transfer.arc(t, &out, a)))
        .collect();
    for (name, a) in arc_moves {
        out.labels.arcs.insert(name, a);
    }
    Ok((out, transfer))
}

/// Transfer object returned by [`flip`].
#[derive(Clone, Debug)]
pub struct CoordTransfer {
    data: FlipData,
}

impl CoordTransfer {
    pub fn data(&self) -> &FlipData {
        &self.data
    }

    pub fn curve(&self, c: &CurveCoords) -> Result<CurveCoords, FlipError> {
        self.data.transfer_curve(c)
    }

    pub fn arc(&self, old: &Triangulation, new: &Triangulation, a: &BasedArc) -> BasedArc {
        self.data.transfer_arc(old, new, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn square_disk() -> Triangulation {
        // A square with boundary sides w, x, y, z and diagonal d.
        Triangulation::from_named(&[["d", "w", "x"], ["d", "y", "z"]], &[]).unwrap()
    }

    #[test]
    fn flip_square_diagonal() {
        let t = square_disk();
        let d = t.edge_by_name("d").unwrap();
        let (t2, _) = flip(&t, d).unwrap();
        assert_eq!(t2.euler_characteristic(), t.euler_characteristic());
        assert_eq!(t2.boundary_components().len(), 1);
        assert!(t2.is_internal(d));
    }

    #[test]
    fn quadrilateral_rule_example() {
        // w_e = 0 with all four sides weight 1 becomes w_e' = 2.
        let t = square_disk();
        let d = t.edge_by_name("d").unwrap();
        let mut c = CurveCoords::zero(&t);
        for name in ["w", "x", "y", "z"] {
            let e = t.edge_by_name(name).unwrap();
            c.weights_mut()[e] = BigUint::from(1u32);
        }
        let (_, transfer) = flip(&t, d).unwrap();
        let c2 = transfer.curve(&c).unwrap();
        assert_eq!(*c2.weight(d), BigUint::from(2u32));
    }

    #[test]
    fn double_flip_restores_coordinates() {
        let t = square_disk();
        let d = t.edge_by_name("d").unwrap();
        let mut c = CurveCoords::zero(&t);
        // An arc-free multicurve is impossible on a disk, but the transfer
        // formula is still exercised by a formal admissible vector.
        for name in ["w", "y"] {
            let e = t.edge_by_name(name).unwrap();
            c.weights_mut()[e] = BigUint::from(1u32);
        }
        c.weights_mut()[d] = BigUint::from(1u32);
        let (t2, f1) = flip(&t, d).unwrap();
        let c1 = f1.curve(&c).unwrap();
        let (_t3, f2) = flip(&t2, d).unwrap();
        let c2 = f2.curve(&c1).unwrap();
        assert_eq!(c, c2);
    }
}
