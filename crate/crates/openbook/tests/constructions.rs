//! Cable, band sum and Stallings construction tests, plus certificate and
//! provenance determinism.

use num_rational::BigRational;
use openbook::catalog::{builtin_catalog, find_entry};
use openbook::certificate::build_certificate;
use openbook::fdtc::{fdtc, FdtcConfig};
use openbook::mapping::{chain_alphabet, parse_word};
use openbook::openbook::{
    band_sum_curve, cable_2_1, cable_exchange, stallings_twist, BandSumSpec, OpenBook,
};
use openbook::surface::{cable_fiber, polygon_handle_arc, standard_fiber};

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

#[test]
fn trefoil_cable_has_half_twist() {
    let t = standard_fiber(1, 1).unwrap();
    let alphabet = chain_alphabet(&t);
    let ob = OpenBook::from_word_on_fiber("3_1", 1, &alphabet, &parse_word("ab")).unwrap();
    let cfg = FdtcConfig::for_fiber(&t, true);
    let (cable, cert) = cable_2_1(&ob, &alphabet, &cfg).unwrap();
    assert_eq!(cable.genus, 2);
    assert_eq!(cable.fiber.euler_characteristic(), -3);
    assert_eq!(cert.exact(), Some(&rat(1, 2)));
    assert!(cable.reducing.is_some());
}

#[test]
fn exchange_squares_to_boundary_twist() {
    let big = cable_fiber(2).unwrap();
    let rho = cable_exchange(&big).unwrap();
    let sq = rho.pow(2).unwrap();
    let tb = openbook::mapping::boundary_twist(&big, 0, 1).unwrap();
    let test = sq.then(&tb.inverse()).unwrap();
    assert!(openbook::mapping::is_identity(&big, &test).unwrap());
    // The exchange swaps the copy boundaries.
    let r0 = &big.labels.curves["r0"];
    let r1 = &big.labels.curves["r1"];
    assert_eq!(rho.apply_curve(&big, r0).unwrap(), *r1);
    assert_eq!(rho.apply_curve(&big, r1).unwrap(), *r0);
}

#[test]
fn stallings_inverse_pair_cancels() {
    let t = standard_fiber(1, 1).unwrap();
    let alphabet = chain_alphabet(&t);
    let ob = OpenBook::from_word_on_fiber("3_1", 1, &alphabet, &parse_word("ab")).unwrap();
    let cfg = FdtcConfig::for_fiber(&t, true);
    let (cable, _) = cable_2_1(&ob, &alphabet, &cfg).unwrap();
    let arc = polygon_handle_arc(1, 1, &t, "a1");
    let curve = band_sum_curve(&cable, &ob, &BandSumSpec { arc }).unwrap();
    let plus = stallings_twist(&cable, &curve, 1, "C").unwrap();
    let both = stallings_twist(&plus, &curve, -1, "C").unwrap();
    // The composite equals the cable monodromy on every probe.
    for c in cable.fiber.labels.curves.values() {
        assert_eq!(
            both.monodromy.apply_curve(&cable.fiber, c).unwrap(),
            cable.monodromy.apply_curve(&cable.fiber, c).unwrap()
        );
    }
    for a in cable.fiber.labels.arcs.values() {
        assert_eq!(
            both.monodromy.apply_arc(&cable.fiber, a).unwrap(),
            cable.monodromy.apply_arc(&cable.fiber, a).unwrap()
        );
    }
}

#[test]
fn band_sum_rejects_separating_arc() {
    // An arc that cuts off a disk is separating; the trivial arc between two
    // wedges of one triangle crosses nothing, so no curve meets it oddly.
    let t = standard_fiber(1, 1).unwrap();
    let alphabet = chain_alphabet(&t);
    let ob = OpenBook::from_word_on_fiber("3_1", 1, &alphabet, &parse_word("ab")).unwrap();
    let cfg = FdtcConfig::for_fiber(&t, true);
    let (cable, _) = cable_2_1(&ob, &alphabet, &cfg).unwrap();
    let v = t.marked_vertex(0);
    let fan = t.fan(v);
    let trivial = openbook::BasedArc::new(&t, fan[0], vec![], fan[0]).unwrap();
    let res = band_sum_curve(&cable, &ob, &BandSumSpec { arc: trivial });
    assert!(res.is_err());
}

#[test]
fn cable_construction_is_deterministic() {
    let t = standard_fiber(1, 1).unwrap();
    let alphabet = chain_alphabet(&t);
    let ob = OpenBook::from_word_on_fiber("3_1", 1, &alphabet, &parse_word("ab")).unwrap();
    let cfg = FdtcConfig::for_fiber(&t, true);
    let (c1, cert1) = cable_2_1(&ob, &alphabet, &cfg).unwrap();
    let (c2, cert2) = cable_2_1(&ob, &alphabet, &cfg).unwrap();
    assert_eq!(c1.monodromy.move_count(), c2.monodromy.move_count());
    assert_eq!(c1.provenance, c2.provenance);
    let json1 = build_certificate(
        &c1.fiber,
        c1.provenance.describe(),
        &cfg,
        &cert1,
        None,
        c1.genus,
    )
    .to_json();
    let json2 = build_certificate(
        &c2.fiber,
        c2.provenance.describe(),
        &cfg,
        &cert2,
        None,
        c2.genus,
    )
    .to_json();
    assert_eq!(json1, json2, "certificates replay to identical bytes");
}

#[test]
fn certificates_are_internally_consistent() {
    let entries = builtin_catalog();
    for entry in &entries {
        let m = entry.monodromy().unwrap();
        let cfg = entry.fdtc_config();
        let cert = fdtc(&entry.fiber, &m, 0, &cfg).unwrap();
        let rendered = build_certificate(
            &entry.fiber,
            format!("catalog:{}", entry.name),
            &cfg,
            &cert,
            None,
            entry.genus,
        );
        assert!(
            rendered.internally_consistent(entry.genus),
            "{}",
            entry.name
        );
        let reparsed: openbook::certificate::Certificate =
            serde_json::from_str(&rendered.to_json()).unwrap();
        assert_eq!(reparsed, rendered);
    }
}

#[test]
fn paper_demo_runs_on_trefoil_cable_scale() {
    // The full demo at the 10_153 scale lives in the acceptance suite; the
    // demo plumbing itself is exercised on the smallest catalog entry that
    // supports every stage.
    let entries = builtin_catalog();
    let entry = find_entry(&entries, "4_1").unwrap();
    let demo = openbook::demo::paper_demo(entry, None, 14).unwrap();
    assert_eq!(demo.stages.len(), 3);
    assert_eq!(demo.stages[0].stage, "companion");
    assert_eq!(demo.stages[1].stage, "cable");
    assert_eq!(demo.stages[2].stage, "stallings");
}
