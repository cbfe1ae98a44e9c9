//! Computes the fractional Dehn twist coefficient of every catalog entry.
//!
//! Run with: cargo run --release --example fdtc_basics

use openbook::catalog::builtin_catalog;
use openbook::fdtc::{fdtc, FdtcValue};

fn main() {
    for entry in builtin_catalog() {
        let m = entry.monodromy().expect("word builds");
        let cert = fdtc(&entry.fiber, &m, 0, &entry.fdtc_config()).expect("fdtc runs");
        let value = match &cert.value {
            FdtcValue::Exact(v) => format!("{v}"),
            FdtcValue::Indeterminate { lo, hi } => format!("[{lo}, {hi}]"),
        };
        println!(
            "{:8} genus {} word {:12} fdtc = {:6} ({:?})",
            entry.name,
            entry.genus,
            entry.word.to_string(),
            value,
            cert.veering
        );
    }
}
