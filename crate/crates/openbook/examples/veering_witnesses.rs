//! Finds a right-moved and a left-moved arc for a monodromy with vanishing
//! coefficient, the combinatorial witnesses that it is neither right- nor
//! left-veering.
//!
//! Run with: cargo run --release --example veering_witnesses

use openbook::catalog::{builtin_catalog, find_entry};
use openbook::fdtc::veering;

fn main() {
    let entries = builtin_catalog();
    for name in ["4_1", "10_153"] {
        let entry = find_entry(&entries, name).expect("entry exists");
        let m = entry.monodromy().expect("word builds");
        let (verdict, witnesses, witnessed) =
            veering(&entry.fiber, &m, 0, &entry.fdtc_config()).expect("veering runs");
        println!("{name}: {verdict:?} (witnessed: {witnessed})");
        for (i, w) in witnesses.iter().enumerate() {
            let side = if i == 0 { "right" } else { "left" };
            println!(
                "  {side}-moved arc: departs corner {}, {} crossings",
                w.dep,
                w.word.len()
            );
        }
    }
}
