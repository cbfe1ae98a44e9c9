use num_rational::BigRational;
use openbook::fdtc::{fdtc, FdtcConfig, FdtcValue, VeerVerdict};
use openbook::mapping::{boundary_twist, chain_alphabet, from_word, parse_word};
use openbook::surface::standard_fiber;
use openbook::MappingClass;

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

#[test]
fn fdtc_identity_is_zero() {
    let t = standard_fiber(1, 1).unwrap();
    let cfg = FdtcConfig::for_fiber(&t, true);
    let cert = fdtc(&t, &MappingClass::identity(&t), 0, &cfg).unwrap();
    assert_eq!(cert.exact(), Some(&rat(0, 1)));
}

#[test]
fn fdtc_boundary_twist_cubed() {
    let t = standard_fiber(1, 1).unwrap();
    let cfg = FdtcConfig::for_fiber(&t, false);
    let m = boundary_twist(&t, 0, 3).unwrap();
    let cert = fdtc(&t, &m, 0, &cfg).unwrap();
    assert_eq!(cert.exact(), Some(&rat(3, 1)));
}

#[test]
fn fdtc_trefoil_is_one_sixth() {
    let t = standard_fiber(1, 1).unwrap();
    let alphabet = chain_alphabet(&t);
    let m = from_word(&t, &alphabet, &parse_word("ab")).unwrap();
    let cfg = FdtcConfig::for_fiber(&t, true);
    let cert = fdtc(&t, &m, 0, &cfg).unwrap();
    assert_eq!(cert.exact(), Some(&rat(1, 6)));
    assert_eq!(cert.veering, VeerVerdict::Right);
}

#[test]
fn fdtc_mirror_trefoil() {
    let t = standard_fiber(1, 1).unwrap();
    let alphabet = chain_alphabet(&t);
    let m = from_word(&t, &alphabet, &parse_word("AB")).unwrap();
    let cfg = FdtcConfig::for_fiber(&t, true);
    let cert = fdtc(&t, &m, 0, &cfg).unwrap();
    assert_eq!(cert.exact(), Some(&rat(-1, 6)));
    assert_eq!(cert.veering, VeerVerdict::Left);
}

#[test]
fn fdtc_figure_eight_is_zero() {
    // T_a T_b^{-1} on the torus: the figure-eight knot monodromy.
    let t = standard_fiber(1, 1).unwrap();
    let alphabet = chain_alphabet(&t);
    let m = from_word(&t, &alphabet, &parse_word("aB")).unwrap();
    let cfg = FdtcConfig::for_fiber(&t, true);
    let cert = fdtc(&t, &m, 0, &cfg).unwrap();
    assert_eq!(cert.exact(), Some(&rat(0, 1)), "method {:?}", cert.method);
    assert_eq!(cert.veering, VeerVerdict::Neither);
    assert!(
        cert.veering_witnessed,
        "figure-eight has two-sided witnesses"
    );
}

#[test]
fn fdtc_interval_when_capped() {
    let t = standard_fiber(1, 1).unwrap();
    let alphabet = chain_alphabet(&t);
    let m = from_word(&t, &alphabet, &parse_word("aB")).unwrap();
    let mut cfg = FdtcConfig::for_fiber(&t, true);
    cfg.max_iter = 1;
    cfg.denom_bound = 1000;
    cfg.cert_power_cap = 0;
    let cert = fdtc(&t, &m, 0, &cfg).unwrap();
    assert!(matches!(cert.value, FdtcValue::Indeterminate { .. }));
}

#[test]
fn fdtc_boundary_shift() {
    let t = standard_fiber(1, 1).unwrap();
    let alphabet = chain_alphabet(&t);
    let m = from_word(&t, &alphabet, &parse_word("ab")).unwrap();
    let shifted = m.then(&boundary_twist(&t, 0, 2).unwrap()).unwrap();
    let cfg = FdtcConfig::for_fiber(&t, true);
    let cert = fdtc(&t, &shifted, 0, &cfg).unwrap();
    assert_eq!(cert.exact(), Some(&rat(13, 6)));
}
