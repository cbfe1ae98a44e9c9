//! Intersection-number growth under iteration: linear for a single twist,
//! exponential for pseudo-Anosov words.
//!
//! Run with: cargo run --release --example growth_rates

use openbook::mapping::{chain_alphabet, from_word, growth_evidence, parse_word, twist};
use openbook::surface::standard_fiber;

fn main() {
    let t = standard_fiber(1, 1).expect("fiber builds");
    let alphabet = chain_alphabet(&t);
    let seed = t.labels.curves["c2"].clone();

    let single = twist(&t, &t.labels.curves["c1"], 1).expect("twist builds");
    let report = growth_evidence(&t, &single, &seed, 10, 0.01).expect("growth runs");
    println!(
        "T_a alone: {:?}, i-sequence {:?}",
        report.verdict, report.intersections
    );

    let pa = from_word(&t, &alphabet, &parse_word("aB")).expect("word builds");
    let report = growth_evidence(&t, &pa, &seed, 10, 0.01).expect("growth runs");
    println!(
        "T_a T_b^-1 (figure-eight): {:?}, lambda {:?}, i-sequence {:?}",
        report.verdict, report.lambda_hat, report.intersections
    );
}
