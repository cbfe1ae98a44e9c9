//! Right-veering comparison of based arcs.
//!
//! Two reduced arcs departing the same marked vertex are compared by walking
//! their words together: at the first divergence the side is read off the
//! cyclic order of the two continuations around the shared triangle, using
//! the surface orientation. An arc terminating while the other continues is
//! resolved by ordering the terminal corner within the same circular
//! comparison.

use thiserror::Error;

use crate::surface::{BasedArc, Corner, Slot, Triangulation};

#[derive(Debug, Error)]
pub enum VeerError {
    #[error("arcs are based at different vertices")]
    MismatchedBase,
    #[error("arc is not reduced")]
    Unreduced,
}

/// Side of the second arc as seen from the first: `compare(a, b) = Right`
/// means `b` departs to the right of `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Right,
    Left,
    Equal,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Right => Side::Left,
            Side::Left => Side::Right,
            Side::Equal => Side::Equal,
        }
    }
}

/// Fan positions increase clockwise around a boundary vertex, so a larger
/// position is further to the right of a germ pointing into the surface.
const SMALLER_FAN_IS_RIGHT: bool = false;

pub fn compare_at_base(t: &Triangulation, a: &BasedArc, b: &BasedArc) -> Result<Side, VeerError> {
    if t.vertex_of_corner(a.dep) != t.vertex_of_corner(b.dep) {
        return Err(VeerError::MismatchedBase);
    }
    if !a.is_reduced(t) || !b.is_reduced(t) {
        return Err(VeerError::Unreduced);
    }
    if a.dep != b.dep {
        let pa = t.fan_position(a.dep);
        let pb = t.fan_position(b.dep);
        debug_assert_ne!(pa, pb);
        let b_right = (pb < pa) == SMALLER_FAN_IS_RIGHT;
        return Ok(if b_right { Side::Right } else { Side::Left });
    }
    // Shared departure corner: walk the words together.
    let mut idx = 0usize;
    loop {
        let wa = a.word.get(idx).copied();
        let wb = b.word.get(idx).copied();
        match (wa, wb) {
            (None, None) => {
                if a.arr == b.arr {
                    return Ok(Side::Equal);
                }
                // Both terminate in the same triangle at different corners.
                let entry = entry_position(t, a, idx);
                let ca = corner_position(a.arr);
                let cb = corner_position(b.arr);
                return Ok(side_of(entry, ca, cb));
            }
            (Some(sa), Some(sb)) if sa == sb => {
                idx += 1;
                continue;
            }
            _ => {
                let entry = entry_position(t, a, idx);
                let ta = continuation_position(a, wa, idx);
                let tb = continuation_position(b, wb, idx);
                return Ok(side_of(entry, ta, tb));
            }
        }
    }
}

const M: i64 = 1 << 20;

/// Circular position of the point where both arcs enter the triangle of
/// step `idx` (their shared corridor).
fn entry_position(t: &Triangulation, a: &BasedArc, idx: usize) -> i64 {
    if idx == 0 {
        corner_position(a.dep)
    } else {
        let entered: Slot = t.mate(a.word[idx - 1]).expect("internal");
        side_position(entered)
    }
}

fn side_position(s: Slot) -> i64 {
    (s % 3) as i64 * M + M / 2
}

fn corner_position(c: Corner) -> i64 {
    (((c % 3) + 2) % 3) as i64 * M
}

fn continuation_position(arc: &BasedArc, step: Option<Slot>, idx: usize) -> i64 {
    match step {
        Some(s) => side_position(s),
        None => {
            let _ = idx;
            corner_position(arc.arr)
        }
    }
}

/// Orders the two continuations around the triangle boundary from the entry
/// point; the one encountered first counterclockwise veers right.
fn side_of(entry: i64, ta: i64, tb: i64) -> Side {
    let span = 3 * M;
    let da = (ta - entry).rem_euclid(span);
    let db = (tb - entry).rem_euclid(span);
    debug_assert_ne!(da, db, "divergent continuations share a position");
    if db < da {
        Side::Right
    } else {
        Side::Left
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapping::boundary_twist;
    use crate::surface::standard_fiber;

    #[test]
    fn equal_arcs_compare_equal() {
        let t = standard_fiber(1, 1).unwrap();
        let a = &t.labels.arcs["arc_a1"];
        assert_eq!(compare_at_base(&t, a, a).unwrap(), Side::Equal);
    }

    #[test]
    fn boundary_twist_moves_right() {
        let t = standard_fiber(2, 1).unwrap();
        for name in ["arc_a1", "arc_b1", "arc_a2"] {
            let a = &t.labels.arcs[name];
            let plus = boundary_twist(&t, 0, 1).unwrap().apply_arc(&t, a).unwrap();
            let minus = boundary_twist(&t, 0, -1).unwrap().apply_arc(&t, a).unwrap();
            assert_eq!(
                compare_at_base(&t, a, &plus).unwrap(),
                Side::Right,
                "{name}"
            );
            assert_eq!(
                compare_at_base(&t, a, &minus).unwrap(),
                Side::Left,
                "{name}"
            );
            assert_eq!(compare_at_base(&t, &plus, a).unwrap(), Side::Left);
        }
    }

    #[test]
    fn twist_powers_are_monotone() {
        let t = standard_fiber(1, 1).unwrap();
        let a = &t.labels.arcs["arc_b1"];
        let mut images = Vec::new();
        for k in -3i64..=3 {
            images.push(boundary_twist(&t, 0, k).unwrap().apply_arc(&t, a).unwrap());
        }
        for i in 0..images.len() {
            for j in 0..images.len() {
                let expect = match i.cmp(&j) {
                    std::cmp::Ordering::Less => Side::Right,
                    std::cmp::Ordering::Equal => Side::Equal,
                    std::cmp::Ordering::Greater => Side::Left,
                };
                assert_eq!(
                    compare_at_base(&t, &images[i], &images[j]).unwrap(),
                    expect,
                    "T^{} vs T^{}",
                    i as i64 - 3,
                    j as i64 - 3
                );
            }
        }
    }
}
