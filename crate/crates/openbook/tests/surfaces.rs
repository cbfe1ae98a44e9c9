use openbook::surface::oracle::intersection_oracle;
use openbook::surface::{polygon_curve, standard_fiber};

#[test]
fn chain_pattern_genus_three() {
    let t = standard_fiber(3, 1).unwrap();
    let mut ok = true;
    for i in 1..=6usize {
        for j in i..=6usize {
            let ci = &t.labels.curves[&format!("c{i}")];
            let cj = &t.labels.curves[&format!("c{j}")];
            let x = intersection_oracle(&t, ci, cj).unwrap();
            let expect = if i.abs_diff(j) == 1 { 1 } else { 0 };
            if x != expect {
                println!("i(c{i}, c{j}) = {x} (expect {expect})");
                ok = false;
            }
        }
    }
    assert!(ok);
}

#[test]
fn chain_pattern_genus_six() {
    let t = standard_fiber(6, 1).unwrap();
    let mut ok = true;
    for i in 1..=12usize {
        for j in i..=12usize {
            let ci = &t.labels.curves[&format!("c{i}")];
            let cj = &t.labels.curves[&format!("c{j}")];
            let x = intersection_oracle(&t, ci, cj).unwrap();
            let expect = if i.abs_diff(j) == 1 { 1 } else { 0 };
            if x != expect {
                println!("i(c{i}, c{j}) = {x} (expect {expect})");
                ok = false;
            }
        }
    }
    assert!(ok);
}

#[test]
fn chain_curves_essential_nonseparating() {
    use openbook::surface::oracle::{classify_curve, nonseparating, CurveClass};
    let t = standard_fiber(3, 1).unwrap();
    for i in 1..=6 {
        let c = &t.labels.curves[&format!("c{i}")];
        assert_eq!(c.component_count(&t).unwrap(), 1, "c{i}");
        assert_eq!(
            classify_curve(&t, c).unwrap(),
            CurveClass::Essential,
            "c{i}"
        );
        assert!(nonseparating(&t, c).unwrap(), "c{i}");
    }
}
