//! Properly embedded arcs based at marked boundary vertices.
//!
//! An arc is stored as the sequence of slots it crosses, together with its
//! departure and arrival corners. Consecutive crossings share a triangle and
//! every interior piece is the unique chord between its two sides, so the
//! word determines the arc up to isotopy. Reduction removes bounces (a
//! crossing immediately undone) and slides end pieces that cross a side
//! flanking their own corner, pivoting the germ around the base vertex.

use thiserror::Error;

use super::{corner_next, corner_prev, slot_in_tri, Corner, Slot, Triangulation, VertexId};

#[derive(Debug, Error)]
pub enum ArcError {
    #[error("crossing {index} does not exit the triangle entered before it")]
    BrokenPath { index: usize },
    #[error("corner {0} is out of range")]
    BadCorner(Corner),
    #[error("arrival corner is not in the final triangle")]
    BadArrival,
    #[error("arc endpoints must be marked boundary vertices")]
    UnmarkedEndpoint,
    #[error("arc is not reduced")]
    NotReduced,
}

/// A reduced dual-path word of a properly embedded arc between marked
/// boundary vertices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BasedArc {
    pub base: VertexId,
    pub terminal: VertexId,
    /// Corner the arc departs from, encoding the side of departure.
    pub dep: Corner,
    /// Corner the arc arrives at.
    pub arr: Corner,
    /// Slots crossed in order; each entry is the slot being exited.
    pub word: Vec<Slot>,
}

impl std::fmt::Debug for BasedArc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "BasedArc(dep={}, word={:?}, arr={})",
            self.dep, self.word, self.arr
        )
    }
}

impl BasedArc {
    /// Builds and reduces an arc from raw corner/word data.
    pub fn new(
        t: &Triangulation,
        dep: Corner,
        word: Vec<Slot>,
        arr: Corner,
    ) -> Result<Self, ArcError> {
        let mut arc = BasedArc {
            base: 0,
            terminal: 0,
            dep,
            arr,
            word,
        };
        arc.check_path(t)?;
        arc.reduce(t);
        arc.base = t.vertex_of_corner(arc.dep);
        arc.terminal = t.vertex_of_corner(arc.arr);
        Ok(arc)
    }

    /// Verifies that consecutive crossings share triangles, without
    /// requiring reducedness.
    pub fn check_path(&self, t: &Triangulation) -> Result<(), ArcError> {
        let n_slots = t.tri_count() * 3;
        if self.dep >= n_slots {
            return Err(ArcError::BadCorner(self.dep));
        }
        if self.arr >= n_slots {
            return Err(ArcError::BadCorner(self.arr));
        }
        let mut tri = self.dep / 3;
        for (index, &s) in self.word.iter().enumerate() {
            if s >= n_slots || s / 3 != tri {
                return Err(ArcError::BrokenPath { index });
            }
            let Some(m) = t.mate(s) else {
                return Err(ArcError::BrokenPath { index });
            };
            tri = m / 3;
        }
        if self.arr / 3 != tri {
            return Err(ArcError::BadArrival);
        }
        Ok(())
    }

    pub fn is_reduced(&self, t: &Triangulation) -> bool {
        if let Some(&first) = self.word.first() {
            if first == slot_in_tri(self.dep, 1) || first == slot_in_tri(self.dep, 2) {
                return false;
            }
        }
        for i in 0..self.word.len().saturating_sub(1) {
            if t.mate(self.word[i]) == Some(self.word[i + 1]) {
                return false;
            }
        }
        if let Some(&last) = self.word.last() {
            let m = t.mate(last).expect("valid path");
            if m == slot_in_tri(self.arr, 1) || m == slot_in_tri(self.arr, 2) {
                return false;
            }
        }
        true
    }

    /// Applies the rewriting moves to exhaustion, leftmost first: departure
    /// slides, then bounce cancellations, then arrival slides.
    pub fn reduce(&mut self, t: &Triangulation) {
        let mut out: Vec<Slot> = Vec::with_capacity(self.word.len());
        let mut dep = self.dep;
        for &s in &self.word {
            if let Some(&top) = out.last() {
                if t.mate(top) == Some(s) {
                    out.pop();
                    continue;
                }
            }
            if out.is_empty() {
                if s == slot_in_tri(dep, 1) {
                    dep = corner_next(t.mate(s).expect("internal"));
                    continue;
                }
                if s == slot_in_tri(dep, 2) {
                    dep = corner_prev(t.mate(s).expect("internal"));
                    continue;
                }
            }
            out.push(s);
        }
        let mut arr = self.arr;
        loop {
            let Some(&last) = out.last() else { break };
            let m = t.mate(last).expect("internal");
            if m == slot_in_tri(arr, 1) {
                arr = corner_next(last);
                out.pop();
            } else if m == slot_in_tri(arr, 2) {
                arr = corner_prev(last);
                out.pop();
            } else {
                break;
            }
        }
        // Arrival slides may expose new departure slides on a now-short word.
        if out.is_empty() {
            self.dep = dep;
            self.arr = arr;
            self.word = out;
            self.canonicalize_parallel(t);
            self.base = t.vertex_of_corner(self.dep);
            self.terminal = t.vertex_of_corner(self.arr);
            return;
        }
        self.dep = dep;
        self.arr = arr;
        self.word = out;
        if !self.is_reduced(t) {
            let again = std::mem::take(&mut self.word);
            let mut tmp = BasedArc {
                base: self.base,
                terminal: self.terminal,
                dep: self.dep,
                arr: self.arr,
                word: again,
            };
            tmp.reduce(t);
            *self = tmp;
        }
        self.base = t.vertex_of_corner(self.dep);
        self.terminal = t.vertex_of_corner(self.arr);
    }

    /// Number of crossings with a given edge.
    pub fn edge_crossings(&self, t: &Triangulation, e: super::EdgeId) -> usize {
        self.word.iter().filter(|&&s| t.edge_of(s) == e).count()
    }

    /// An arc whose word is empty runs between two corner wedges of one
    /// triangle, parallel to the side joining them; sliding it across that
    /// side gives a second reduced form. Pick the lexicographically smaller
    /// of the two so reduced forms stay unique.
    fn canonicalize_parallel(&mut self, t: &Triangulation) {
        if !self.word.is_empty() || self.dep == self.arr || self.dep / 3 != self.arr / 3 {
            return;
        }
        let tri = self.dep / 3;
        let mid = 3 * tri + (3 - (self.dep % 3) - (self.arr % 3)) % 3;
        debug_assert!(mid % 3 != self.dep % 3 && mid % 3 != self.arr % 3);
        let Some(m) = t.mate(mid) else { return };
        let map = |c: Corner| -> Corner {
            if c == corner_next(mid) {
                corner_prev(m)
            } else {
                corner_next(m)
            }
        };
        let (dep2, arr2) = (map(self.dep), map(self.arr));
        if (dep2, arr2) < (self.dep, self.arr) {
            self.dep = dep2;
            self.arr = arr2;
        }
    }
}
