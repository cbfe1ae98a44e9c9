//! Property tests for the structural invariants of the curve and arc
//! calculus.

use num_bigint::BigUint;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use openbook::surface::{flip, standard_fiber};
use openbook::CurveCoords;

/// Random admissible multicurves: non-negative integer combinations of the
/// labeled curves are again admissible.
fn random_multicurve(t: &openbook::Triangulation, coeffs: &[u8]) -> CurveCoords {
    let mut total = CurveCoords::zero(t);
    for (c, &k) in t.labels.curves.values().zip(coeffs) {
        for _ in 0..(k % 4) {
            total = total.union(c);
        }
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn flip_transfer_preserves_admissibility(
        coeffs in proptest::collection::vec(0u8..8, 6),
        edge_pick in 0usize..64,
    ) {
        let t = standard_fiber(2, 1).unwrap();
        let c = random_multicurve(&t, &coeffs);
        prop_assume!(!c.is_zero());
        c.admissible(&t).unwrap();
        let internal: Vec<usize> = (0..t.edge_count()).filter(|&e| t.is_internal(e)).collect();
        let e = internal[edge_pick % internal.len()];
        let (t2, transfer) = flip(&t, e).unwrap();
        let moved = transfer.curve(&c).unwrap();
        moved.admissible(&t2).unwrap();
        // Flipping back restores the coordinates.
        let (_, back) = flip(&t2, e).unwrap();
        let restored = back.curve(&moved).unwrap();
        prop_assert_eq!(restored, c);
    }

    #[test]
    fn euler_characteristic_is_flip_invariant(edge_pick in 0usize..64) {
        let t = standard_fiber(2, 1).unwrap();
        let internal: Vec<usize> = (0..t.edge_count()).filter(|&e| t.is_internal(e)).collect();
        let e = internal[edge_pick % internal.len()];
        let (t2, _) = flip(&t, e).unwrap();
        prop_assert_eq!(t.euler_characteristic(), t2.euler_characteristic());
        prop_assert_eq!(t.genus(), t2.genus());
    }

    #[test]
    fn reduction_is_idempotent(word_seed in any::<u64>()) {
        let t = standard_fiber(2, 1).unwrap();
        let mut rng = StdRng::seed_from_u64(word_seed);
        let arcs: Vec<_> = t.labels.arcs.values().cloned().collect();
        let curves: Vec<_> = t.labels.curves.values().cloned().collect();
        let mut arc = arcs[rng.gen_range(0..arcs.len())].clone();
        for _ in 0..3 {
            let c = &curves[rng.gen_range(0..curves.len())];
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            if let Ok(tw) = openbook::mapping::twist(&t, c, sign) {
                arc = tw.apply_arc(&t, &arc).unwrap();
            }
        }
        let mut again = arc.clone();
        again.reduce(&t);
        prop_assert_eq!(&arc, &again);
        prop_assert!(arc.is_reduced(&t));
    }

    #[test]
    fn intersection_number_is_symmetric(i in 0usize..4, j in 0usize..4) {
        let t = standard_fiber(2, 1).unwrap();
        let ci = &t.labels.curves[&format!("c{}", i + 1)];
        let cj = &t.labels.curves[&format!("c{}", j + 1)];
        let ij = openbook::mapping::intersection_number(&t, ci, cj).unwrap();
        let ji = openbook::mapping::intersection_number(&t, cj, ci).unwrap();
        prop_assert_eq!(ij, ji);
    }
}

#[test]
fn intersection_agrees_with_overlay_oracle_on_alphabet() {
    let t = standard_fiber(3, 1).unwrap();
    let names: Vec<_> = t.labels.curves.keys().cloned().collect();
    for a in &names {
        for b in &names {
            let ca = &t.labels.curves[a];
            let cb = &t.labels.curves[b];
            let fast = openbook::mapping::intersection_number(&t, ca, cb).unwrap();
            let oracle =
                BigUint::from(openbook::surface::oracle::intersection_oracle(&t, ca, cb).unwrap());
            assert_eq!(fast, oracle, "i({a}, {b})");
        }
    }
}

#[test]
fn boundary_parallel_curves_are_fixed_by_twists() {
    let t = standard_fiber(2, 1).unwrap();
    let delta = &t.labels.curves["delta0"];
    for c in t.labels.curves.values() {
        if let Ok(tw) = openbook::mapping::twist(&t, c, 1) {
            assert_eq!(tw.apply_curve(&t, delta).unwrap(), *delta);
        }
    }
    let tb = openbook::mapping::boundary_twist(&t, 0, 1).unwrap();
    assert_eq!(tb.apply_curve(&t, delta).unwrap(), *delta);
}

#[test]
fn bracket_soundness_on_trefoil_powers() {
    use num_rational::BigRational;
    // Every returned value lies in all recorded bracket intervals.
    let t = standard_fiber(1, 1).unwrap();
    let alphabet = openbook::mapping::chain_alphabet(&t);
    let m =
        openbook::mapping::from_word(&t, &alphabet, &openbook::mapping::parse_word("ab")).unwrap();
    let cfg = openbook::fdtc::FdtcConfig::for_fiber(&t, true);
    for n in 1..=3i64 {
        let cert = openbook::fdtc::fdtc(&t, &m.pow(n).unwrap(), 0, &cfg).unwrap();
        let value = cert.exact().cloned().unwrap();
        for (nn, k) in &cert.brackets {
            let lo = BigRational::new(k.clone(), (*nn as i64).into());
            let hi = BigRational::new(k + 1, (*nn as i64).into());
            assert!(lo <= value && value <= hi, "bracket ({nn}, {k}) violated");
        }
    }
}

#[test]
fn inverse_law_on_random_instances() {
    // apply(m^-1, apply(m, x)) = x over randomized words and probes.
    let t = standard_fiber(2, 1).unwrap();
    let curves: Vec<_> = t.labels.curves.values().cloned().collect();
    let arcs: Vec<_> = t.labels.arcs.values().cloned().collect();
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..200 {
        let mut m = openbook::MappingClass::identity(&t);
        for _ in 0..3 {
            let c = &curves[rng.gen_range(0..curves.len())];
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            m = m
                .then(&openbook::mapping::twist(&t, c, sign).unwrap())
                .unwrap();
        }
        let round = m.then(&m.inverse()).unwrap();
        let c = &curves[rng.gen_range(0..curves.len())];
        assert_eq!(round.apply_curve(&t, c).unwrap(), *c);
        let a = &arcs[rng.gen_range(0..arcs.len())];
        assert_eq!(round.apply_arc(&t, a).unwrap(), *a);
    }
}
