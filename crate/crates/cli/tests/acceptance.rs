//! End-to-end acceptance gate: runs every criterion with the default seed,
//! prints one line per criterion, and enforces the per-criterion time budgets.

use padicalc_cli::acceptance::run_all;

#[test]
fn acceptance_suite() {
    let outcomes = run_all(7);
    let mut failures = Vec::new();
    for o in &outcomes {
        println!(
            "{} {} ({} ms, budget {} ms)",
            if o.pass { "PASS" } else { "FAIL" },
            o.name,
            o.millis,
            o.budget_ms
        );
        if !o.pass {
            failures.push(format!("{}: {}", o.name, o.detail));
        }
        if o.millis > o.budget_ms {
            failures.push(format!(
                "{}: over budget ({} ms > {} ms)",
                o.name, o.millis, o.budget_ms
            ));
        }
    }
    assert!(failures.is_empty(), "acceptance failures:\n{}", failures.join("\n"));
}
