//! Runs the full acceptance suite at default truncation and prints one
//! pass/fail line per criterion.

use std::time::Instant;

use mouldlab::acceptance::{disclosure, run_criterion, AcceptanceConfig};

#[test]
fn acceptance_suite() {
    let cfg = AcceptanceConfig::default();
    let start = Instant::now();
    let mut outcomes = Vec::new();
    for id in 1..=9 {
        let t = Instant::now();
        let o = run_criterion(id, &cfg);
        println!("{}  ({:.2?})", o.line(), t.elapsed());
        if !o.passed {
            for d in &o.details {
                println!("      {d}");
            }
        }
        outcomes.push(o);
    }
    let o = disclosure(start.elapsed());
    println!("{}", o.line());
    outcomes.push(o);
    let failed: Vec<u32> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
    assert!(outcomes.iter().all(|o| !o.partial), "default truncation must give full coverage");
}
