//! Demonstrates the chain relation (T_a T_b)^6 = T_boundary on the
//! once-holed torus, and how it forces the trefoil coefficient 1/6.
//!
//! Run with: cargo run --release --example chain_relation

use openbook::mapping::{
    boundary_twist, chain_alphabet, free_order, from_word, is_identity, parse_word,
};
use openbook::surface::standard_fiber;

fn main() {
    let t = standard_fiber(1, 1).expect("fiber builds");
    let alphabet = chain_alphabet(&t);
    let m = from_word(&t, &alphabet, &parse_word("ab")).expect("word builds");

    let sixth = m.pow(6).expect("power");
    let tb = boundary_twist(&t, 0, 1).expect("boundary twist");
    let relation = sixth.then(&tb.inverse()).expect("composable");
    println!(
        "(T_a T_b)^6 = T_boundary on all probes: {}",
        is_identity(&t, &relation).expect("identity check")
    );

    let order = free_order(&t, &m, 8).expect("free order");
    println!("free_order(T_a T_b) = {order:?}");
    println!("homogeneity then gives c(T_a T_b) = 1/6 exactly");
}
