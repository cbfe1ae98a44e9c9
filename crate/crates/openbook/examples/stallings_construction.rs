//! The full construction: starting from the 10_153 monodromy (coefficient
//! zero, neither right- nor left-veering), builds the (2,1)-cable, the band
//! sum of two copies of a nonseparating arc, and the Stallings twist along
//! it, certifying coefficient 1/2 with right-veering monodromy and
//! exponential growth. Takes around half a minute in release mode.
//!
//! Run with: cargo run --release --example stallings_construction

use openbook::demo::{demo_entry, paper_demo};

fn main() {
    let entry = demo_entry().expect("bundled 10_153 entry");
    let demo = paper_demo(&entry, None, 10).expect("all stages check out");
    println!("pipeline: {}", demo.pipeline);
    for stage in &demo.stages {
        let b = &stage.certificate.boundaries[0];
        let fdtc = match &b.fdtc {
            openbook::certificate::ValueRecord::Exact { value } => value.clone(),
            openbook::certificate::ValueRecord::Interval { lo, hi } => format!("[{lo}, {hi}]"),
        };
        println!(
            "  {}: fdtc {} veering {}{}",
            stage.stage,
            fdtc,
            b.veering,
            stage
                .growth
                .as_ref()
                .map(|g| format!(", growth {} (lambda {:?})", g.verdict, g.lambda_hat))
                .unwrap_or_default()
        );
    }
}
