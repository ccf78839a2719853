use std::time::Instant;

use linset::acceptance;

#[test]
fn acceptance_criteria() {
    let mut failed = Vec::new();
    for id in 1..=10 {
        let start = Instant::now();
        let r = acceptance::run(id);
        println!(
            "criterion {:>2} [{}] {}: {} ({:.1?})",
            r.id,
            if r.passed { "PASS" } else { "FAIL" },
            r.title,
            r.detail,
            start.elapsed()
        );
        if !r.passed {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
