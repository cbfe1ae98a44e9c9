//! Standard fibers: genus-g surfaces with b boundary components, built from
//! a fan-triangulated polygon with side identifications.
//!
//! The polygon reads `d0 (a1 b1 a1 b1) ... (ag bg ag bg) [t1 d1 t1] ...`
//! counterclockwise; repeated names glue with reversed orientation, which
//! turns each `a b a b` block into a handle and each `t d t` block into an
//! extra boundary hole. All polygon corners land on the boundary.

use super::{BasedArc, CurveCoords, Slot, SurfaceError, Triangulation};

/// Description of one side of the polygon before gluing.
#[derive(Clone, Debug)]
struct PolygonSpec {
    sides: Vec<String>,
}

impl PolygonSpec {
    fn new(genus: usize, boundary: usize) -> PolygonSpec {
        let mut sides = vec!["d0".to_string()];
        for i in 1..=genus {
            for _ in 0..2 {
                sides.push(format!("a{i}"));
                sides.push(format!("b{i}"));
            }
        }
        for j in 1..boundary {
            sides.push(format!("t{j}"));
            sides.push(format!("d{j}"));
            sides.push(format!("t{j}"));
        }
        let _ = (genus, boundary);
        PolygonSpec { sides }
    }

    fn len(&self) -> usize {
        self.sides.len()
    }

    /// Index of the k-th occurrence (0 or 1) of a side name.
    fn occurrence(&self, name: &str, k: usize) -> usize {
        self.sides
            .iter()
            .enumerate()
            .filter(|(_, s)| s.as_str() == name)
            .map(|(i, _)| i)
            .nth(k)
            .expect("side occurrence")
    }

    /// Slot holding polygon side `m` in the fan triangulation.
    fn side_slot(&self, m: usize) -> Slot {
        let n = self.len();
        if m == 0 {
            0
        } else if m == n - 1 {
            3 * (n - 3) + 2
        } else {
            3 * (m - 1) + 1
        }
    }

    /// Apex corner (at the fan center) of the triangle containing side `m`.
    fn apex_corner(&self, m: usize) -> usize {
        let n = self.len();
        let tri = if m == 0 {
            0
        } else if m == n - 1 {
            n - 3
        } else {
            m - 1
        };
        3 * tri + 1
    }

    /// Crossing word of a straight chord from the interior of side `i` to the
    /// interior of side `j`, ending with the crossing of side `j` itself.
    fn chord_word(&self, i: usize, j: usize) -> Vec<Slot> {
        assert_ne!(i, j, "chords join distinct sides");
        let n = self.len();
        let mut word = Vec::new();
        if i < j {
            let hi = j.min(n - 2);
            for k in (i + 1).max(2)..=hi {
                // Exit diagonal g_k from triangle T_{k-1}.
                word.push(3 * (k - 2) + 2);
            }
        } else {
            let hi = i.min(n - 2);
            let lo = (j + 1).max(2);
            for k in (lo..=hi).rev() {
                // Exit diagonal g_k from triangle T_k.
                word.push(3 * (k - 1));
            }
        }
        word.push(self.side_slot(j));
        word
    }

    fn triangles(&self) -> Vec<[String; 3]> {
        let n = self.len();
        let mut tris = Vec::new();
        for k in 1..=n - 2 {
            let left = if k == 1 {
                self.sides[0].clone()
            } else {
                format!("g{k}")
            };
            let right = if k == n - 2 {
                self.sides[n - 1].clone()
            } else {
                format!("g{}", k + 1)
            };
            tris.push([left, self.sides[k].clone(), right]);
        }
        tris
    }
}

/// Removes cyclically adjacent cancelling crossings from a closed word.
fn reduce_closed_word(t: &Triangulation, word: &mut Vec<Slot>) {
    loop {
        let n = word.len();
        if n < 2 {
            return;
        }
        let mut removed = false;
        let mut i = 0;
        while i < word.len() && word.len() >= 2 {
            let j = (i + 1) % word.len();
            if t.mate(word[i]) == Some(word[j]) {
                if j > i {
                    word.remove(j);
                    word.remove(i);
                } else {
                    word.remove(i);
                    word.remove(j);
                }
                removed = true;
                i = i.saturating_sub(1);
            } else {
                i += 1;
            }
        }
        if !removed {
            return;
        }
    }
}

fn curve_from_chords(
    t: &Triangulation,
    spec: &PolygonSpec,
    chords: &[(usize, usize)],
) -> CurveCoords {
    let mut word = Vec::new();
    for &(i, j) in chords {
        word.extend(spec.chord_word(i, j));
    }
    reduce_closed_word(t, &mut word);
    CurveCoords::from_closed_word(t, &word)
}

/// The boundary-parallel curve of a component, traced as the fan walk just
/// inside the boundary circle.
pub(crate) fn boundary_parallel_word(t: &Triangulation, component: usize) -> Vec<Slot> {
    let mut word = Vec::new();
    for &v in &t.boundary_components()[component].vertices {
        let fan = t.fan(v);
        for i in 0..fan.len().saturating_sub(1) {
            word.push(super::slot_in_tri(fan[i], 2));
        }
    }
    word
}

/// Builds the standard fiber of genus `g` with `b` boundary components.
///
/// Labels shipped with the surface: `delta{j}` boundary-parallel curves, the
/// chain `c1 ... c{2g}` with consecutive curves meeting once, and one probe
/// arc per handle side (`arc_a{i}`, `arc_b{i}`) based at the marked vertex.
pub fn standard_fiber(g: usize, b: usize) -> Result<Triangulation, SurfaceError> {
    if b == 0 {
        return Err(SurfaceError::ClosedSurface);
    }
    if g == 0 && b == 1 {
        let mut t = Triangulation::from_named(&[["d0", "d0x", "d0y"]], &[])?;
        let delta = CurveCoords::zero(&t);
        t.labels.curves.insert("delta0".into(), delta);
        return Ok(t);
    }
    let spec = PolygonSpec::new(g, b);
    let tris = spec.triangles();
    let tri_refs: Vec<[&str; 3]> = tris
        .iter()
        .map(|t| [t[0].as_str(), t[1].as_str(), t[2].as_str()])
        .collect();
    let mut t = Triangulation::from_named(&tri_refs, &[])?;

    // Boundary-parallel labels.
    for j in 0..t.boundary_components().len() {
        let word = boundary_parallel_word(&t, j);
        let mut w = word.clone();
        reduce_closed_word(&t, &mut w);
        let c = CurveCoords::from_closed_word(&t, &w);
        let name = boundary_label_name(&t, j);
        t.labels.curves.insert(name, c);
    }

    // Chain curves.
    for i in 1..=g {
        let b1 = spec.occurrence(&format!("b{i}"), 0);
        let b2 = spec.occurrence(&format!("b{i}"), 1);
        let alpha = curve_from_chords(&t, &spec, &[(b1, b2)]);
        t.labels.curves.insert(format!("c{}", 2 * i - 1), alpha);
        if i < g {
            // The connector threads handle i, dips through the b_i gluing,
            // threads handle i+1 and returns, staying clear of the next
            // connector down the chain.
            let a1 = spec.occurrence(&format!("a{i}"), 0);
            let a2 = spec.occurrence(&format!("a{i}"), 1);
            let b1 = spec.occurrence(&format!("b{i}"), 0);
            let b2 = spec.occurrence(&format!("b{i}"), 1);
            let na1 = spec.occurrence(&format!("a{}", i + 1), 0);
            let na2 = spec.occurrence(&format!("a{}", i + 1), 1);
            let gamma = curve_from_chords(&t, &spec, &[(a2, b1), (b2, na1), (na2, b2), (b1, a1)]);
            t.labels.curves.insert(format!("c{}", 2 * i), gamma);
        } else {
            let a1 = spec.occurrence(&format!("a{i}"), 0);
            let a2 = spec.occurrence(&format!("a{i}"), 1);
            let beta = curve_from_chords(&t, &spec, &[(a1, a2)]);
            t.labels.curves.insert(format!("c{}", 2 * i), beta);
        }
    }

    // Probe arcs through each handle.
    for i in 1..=g {
        for (side, tag) in [("a", "a"), ("b", "b")] {
            let m1 = spec.occurrence(&format!("{side}{i}"), 0);
            let m2 = spec.occurrence(&format!("{side}{i}"), 1);
            let arc = BasedArc::new(
                &t,
                spec.apex_corner(m1),
                vec![spec.side_slot(m1)],
                spec.apex_corner(m2),
            )
            .expect("handle arc is valid");
            t.labels.arcs.insert(format!("arc_{tag}{i}"), arc);
        }
    }
    for c in t.labels.curves.values() {
        c.admissible(&t).expect("label curves are admissible");
    }
    Ok(t)
}

fn boundary_label_name(t: &Triangulation, j: usize) -> String {
    // Components are discovered in slot order; d0 is in triangle 0 for the
    // polygon models, so component indices match the d-names.
    let _ = t;
    format!("delta{j}")
}

/// Builds a closed curve on a standard fiber from polygon chords given as
/// `(side name, occurrence, side name, occurrence)` quadruples. Exposed for
/// catalog data construction and tests.
pub fn polygon_curve(
    g: usize,
    b: usize,
    t: &Triangulation,
    chords: &[(&str, usize, &str, usize)],
) -> CurveCoords {
    let spec = PolygonSpec::new(g, b);
    let resolved: Vec<(usize, usize)> = chords
        .iter()
        .map(|&(n1, o1, n2, o2)| (spec.occurrence(n1, o1), spec.occurrence(n2, o2)))
        .collect();
    curve_from_chords(t, &spec, &resolved)
}

/// Builds a based arc through a glued side pair, from the apex corner of the
/// first occurrence's fan triangle to the apex of the second.
pub fn polygon_handle_arc(g: usize, b: usize, t: &Triangulation, side: &str) -> BasedArc {
    let spec = PolygonSpec::new(g, b);
    let m1 = spec.occurrence(side, 0);
    let m2 = spec.occurrence(side, 1);
    BasedArc::new(
        t,
        spec.apex_corner(m1),
        vec![spec.side_slot(m1)],
        spec.apex_corner(m2),
    )
    .expect("handle arc is valid")
}

/// The sequence of glued polygon sides crossed by a closed curve or arc
/// word, recorded as `(side name, occurrence exited)` pairs; fan diagonals
/// are dropped since routing inside the polygon disk is unique.
pub fn side_sequence(g: usize, b: usize, t: &Triangulation, word: &[Slot]) -> Vec<(String, usize)> {
    let spec = PolygonSpec::new(g, b);
    let mut slot_side: Vec<Option<usize>> = vec![None; t.tri_count() * 3];
    for m in 0..spec.len() {
        slot_side[spec.side_slot(m)] = Some(m);
    }
    let mut out = Vec::new();
    for &s in word {
        if let Some(m) = slot_side[s] {
            let name = spec.sides[m].clone();
            let occ = if spec.occurrence(&name, 0) == m { 0 } else { 1 };
            out.push((name, occ));
        }
    }
    out
}

/// Rebuilds a closed curve on another standard fiber from a side-crossing
/// sequence. Every named side must exist on the target polygon.
pub fn curve_from_side_sequence(
    g: usize,
    b: usize,
    t: &Triangulation,
    seq: &[(String, usize)],
) -> CurveCoords {
    let spec = PolygonSpec::new(g, b);
    let mut chords = Vec::new();
    let m = seq.len();
    for i in 0..m {
        let (cur_name, cur_occ) = &seq[i];
        let (next_name, next_occ) = &seq[(i + 1) % m];
        // After exiting through `cur`, the strand re-enters the polygon at
        // the glued occurrence and runs straight to the next exit.
        let from = spec.occurrence(cur_name, 1 - cur_occ);
        let to = spec.occurrence(next_name, *next_occ);
        chords.push((from, to));
    }
    curve_from_chords(t, &spec, &chords)
}

/// Transfers a closed curve between standard one-boundary fibers through the
/// shared handle sides of their polygon models.
pub fn transfer_curve(
    src: (usize, usize, &Triangulation),
    dst: (usize, usize, &Triangulation),
    c: &CurveCoords,
) -> Result<CurveCoords, super::CoordsError> {
    let words = c.trace_words(src.2)?;
    let mut seq = Vec::new();
    for w in &words {
        seq.extend(side_sequence(src.0, src.1, src.2, w));
    }
    Ok(curve_from_side_sequence(dst.0, dst.1, dst.2, &seq))
}

/// The open side sequence of a based arc, for building band sums on cables.
pub fn arc_side_sequence(
    g: usize,
    b: usize,
    t: &Triangulation,
    arc: &BasedArc,
) -> Vec<(String, usize)> {
    side_sequence(g, b, t, &arc.word)
}

/// Shifts every handle index of a side sequence by `offset`.
pub fn shift_handles(seq: &[(String, usize)], offset: usize) -> Vec<(String, usize)> {
    seq.iter()
        .map(|(name, occ)| {
            let (letter, idx) = name.split_at(1);
            let idx: usize = idx.parse().expect("handle side name");
            (format!("{letter}{}", idx + offset), *occ)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_has_chi_one() {
        let t = standard_fiber(0, 1).unwrap();
        assert_eq!(t.euler_characteristic(), 1);
    }

    #[test]
    fn genus_three_chi() {
        let t = standard_fiber(3, 1).unwrap();
        assert_eq!(t.euler_characteristic(), -5);
        assert_eq!(t.genus(), 3);
        assert_eq!(t.boundary_components().len(), 1);
        assert_eq!(t.vertex_count(), 1);
    }

    #[test]
    fn genus_six_chi() {
        let t = standard_fiber(6, 1).unwrap();
        assert_eq!(t.euler_characteristic(), -11);
        assert_eq!(t.genus(), 6);
    }

    #[test]
    fn rejects_closed() {
        assert!(standard_fiber(2, 0).is_err());
    }

    #[test]
    fn torus_labels_admissible_and_connected() {
        let t = standard_fiber(1, 1).unwrap();
        for (name, c) in &t.labels.curves {
            c.admissible(&t).unwrap();
            if name.starts_with('c') {
                assert_eq!(c.component_count(&t).unwrap(), 1, "label {name}");
            }
        }
        assert!(t.labels.arcs.contains_key("arc_a1"));
    }

    #[test]
    fn planar_surfaces() {
        let t = standard_fiber(0, 3).unwrap();
        assert_eq!(t.euler_characteristic(), -1);
        assert_eq!(t.boundary_components().len(), 3);
        assert_eq!(t.genus(), 0);
    }
}

/// The symmetric cable fiber: two copies of the genus-`g` polygon joined by
/// a band, carrying a simplicial involution that exchanges the copies and
/// rotates the boundary halfway. Copy `k` reuses the polygon model with its
/// boundary side glued to the band seam `s{k}`.
pub fn cable_fiber(g: usize) -> Result<Triangulation, SurfaceError> {
    if g == 0 {
        return Err(SurfaceError::BadParameters);
    }
    let mut tris: Vec<[String; 3]> = Vec::new();
    for copy in 0..2 {
        let spec = PolygonSpec::new(g, 1);
        for t in spec.triangles() {
            tris.push([
                copy_name(&t[0], copy),
                copy_name(&t[1], copy),
                copy_name(&t[2], copy),
            ]);
        }
    }
    // The band: a square with seam sides s0, s1 and free sides dL, dR.
    tris.push(["s0".into(), "dL".into(), "q".into()]);
    tris.push(["q".into(), "s1".into(), "dR".into()]);
    let refs: Vec<[&str; 3]> = tris
        .iter()
        .map(|t| [t[0].as_str(), t[1].as_str(), t[2].as_str()])
        .collect();
    let mut t = Triangulation::from_named(&refs, &[])?;

    // Copy labels: every non-boundary label of the small fiber, rebuilt
    // inside each copy through the shared chord language.
    let small = standard_fiber(g, 1)?;
    let spec = PolygonSpec::new(g, 1);
    for copy in 0..2 {
        for (name, c) in &small.labels.curves {
            if name.starts_with("delta") {
                // The boundary-parallel curve of the copy becomes the copy
                // boundary r0 / r1.
                let words = c
                    .trace_words(&small)
                    .map_err(|_| SurfaceError::BadParameters)?;
                if words.is_empty() {
                    continue;
                }
                let mut seq = Vec::new();
                for w in &words {
                    seq.extend(side_sequence(g, 1, &small, w));
                }
                let moved = rebuild_in_copy(&t, &spec, &seq, copy);
                t.labels.curves.insert(format!("r{copy}"), moved);
                continue;
            }
            let words = c
                .trace_words(&small)
                .map_err(|_| SurfaceError::BadParameters)?;
            let mut seq = Vec::new();
            for w in &words {
                seq.extend(side_sequence(g, 1, &small, w));
            }
            let moved = rebuild_in_copy(&t, &spec, &seq, copy);
            t.labels.curves.insert(format!("{name}@{copy}"), moved);
        }
        for i in 1..=g {
            for side in ["a", "b"] {
                let name = format!("{side}{i}");
                let m1 = spec.occurrence(&name, 0);
                let m2 = spec.occurrence(&name, 1);
                let arc = BasedArc::new(
                    &t,
                    copy_corner(&spec, m1, copy),
                    vec![copy_slot(&spec, m1, copy)],
                    copy_corner(&spec, m2, copy),
                )
                .expect("copy handle arc");
                t.labels.arcs.insert(format!("arc_{side}{i}@{copy}"), arc);
            }
        }
    }
    // The band arc crosses the square between the copies and is fixed by
    // every map supported inside them.
    let per_copy = 3 * (PolygonSpec::new(g, 1).len() - 2);
    let band_a = 2 * per_copy / 3;
    let dep = 3 * band_a + 2;
    let arr_tri = band_a + 1;
    let band_arc = BasedArc::new(&t, dep, vec![dep], 3 * arr_tri).expect("band arc is valid");
    t.labels.arcs.insert("arc_band".into(), band_arc);
    Ok(t)
}

fn copy_name(name: &str, copy: usize) -> String {
    if name == "d0" {
        format!("s{copy}")
    } else {
        format!("{name}.{copy}")
    }
}

/// Slot of polygon side `m` inside copy `k` of the cable fiber: the copies'
/// triangles come first in construction order.
fn copy_slot(spec: &PolygonSpec, m: usize, copy: usize) -> Slot {
    let per_copy = 3 * (spec.len() - 2);
    copy * per_copy + spec.side_slot(m)
}

fn copy_corner(spec: &PolygonSpec, m: usize, copy: usize) -> usize {
    let per_copy = 3 * (spec.len() - 2);
    copy * per_copy + spec.apex_corner(m)
}

fn rebuild_in_copy(
    t: &Triangulation,
    spec: &PolygonSpec,
    seq: &[(String, usize)],
    copy: usize,
) -> CurveCoords {
    let mut word = Vec::new();
    let m = seq.len();
    for i in 0..m {
        let (cur_name, cur_occ) = &seq[i];
        let (next_name, next_occ) = &seq[(i + 1) % m];
        let from = spec.occurrence(cur_name, 1 - cur_occ);
        let to = spec.occurrence(next_name, *next_occ);
        for s in spec.chord_word(from, to) {
            word.push(shift_word_slot(spec, s, copy));
        }
    }
    reduce_closed_word(t, &mut word);
    CurveCoords::from_closed_word(t, &word)
}

fn shift_word_slot(spec: &PolygonSpec, s: Slot, copy: usize) -> Slot {
    let per_copy = 3 * (spec.len() - 2);
    copy * per_copy + s
}

/// Transfers a closed curve from the genus-`g` standard fiber into copy
/// `copy` of the symmetric cable fiber.
pub fn transfer_into_copy(
    g: usize,
    small: &Triangulation,
    big: &Triangulation,
    c: &CurveCoords,
    copy: usize,
) -> Result<CurveCoords, super::CoordsError> {
    let words = c.trace_words(small)?;
    let spec = PolygonSpec::new(g, 1);
    let mut seq = Vec::new();
    for w in &words {
        seq.extend(side_sequence(g, 1, small, w));
    }
    Ok(rebuild_in_copy(big, &spec, &seq, copy))
}

/// Candidate closed words for the band sum of the two copies of a companion
/// arc on the symmetric cable fiber: each copy of the arc is run through its
/// polygon, the ends connected through the band, with both relative
/// orientations of the second copy offered.
pub fn band_sum_words(
    g: usize,
    small: &Triangulation,
    big: &Triangulation,
    arc: &BasedArc,
) -> Vec<Vec<Slot>> {
    let spec = PolygonSpec::new(g, 1);
    let seq = side_sequence(g, 1, small, &arc.word);
    if seq.is_empty() {
        return Vec::new();
    }
    let per_slots = 3 * (spec.len() - 2);
    let band_a = 2 * (spec.len() - 2);
    let band_b = band_a + 1;
    // One pass of the arc through copy `k`: enter from the seam, follow the
    // side sequence, leave through the seam again.
    let copy_pass = |copy: usize, seq: &[(String, usize)]| -> Vec<Slot> {
        let mut word = Vec::new();
        let first = spec.occurrence(&seq[0].0, seq[0].1);
        for s in spec.chord_word(0, first) {
            word.push(copy * per_slots + s);
        }
        for i in 0..seq.len() - 1 {
            let (cur_name, cur_occ) = &seq[i];
            let (next_name, next_occ) = &seq[i + 1];
            let from = spec.occurrence(cur_name, 1 - cur_occ);
            let to = spec.occurrence(next_name, *next_occ);
            for s in spec.chord_word(from, to) {
                word.push(copy * per_slots + s);
            }
        }
        let last = &seq[seq.len() - 1];
        let from = spec.occurrence(&last.0, 1 - last.1);
        for s in spec.chord_word(from, 0) {
            word.push(copy * per_slots + s);
        }
        word
    };
    let reversed: Vec<(String, usize)> =
        seq.iter().rev().map(|(n, o)| (n.clone(), 1 - o)).collect();
    let mut variants = Vec::new();
    for second in [&seq, &reversed] {
        let mut word = copy_pass(0, &seq);
        word.push(3 * band_a + 2); // q out of T_A
        word.push(3 * band_b + 1); // s1 into copy 1
        word.extend(copy_pass(1, second));
        word.push(3 * band_b); // q out of T_B
        word.push(3 * band_a); // s0 back into copy 0
        let mut w = word.clone();
        reduce_closed_word(big, &mut w);
        variants.push(w);
    }
    variants
}
