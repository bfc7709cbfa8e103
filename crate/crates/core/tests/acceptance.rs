//! Full default campaign, one line per acceptance criterion.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the table.

use hypersplit_core::harness::registry;
use hypersplit_core::{run_verification, worker_count, Config};

const SEED: u64 = 20240611;

/// `(identity, tolerance)` in criterion order.
const CRITERIA: [(&str, &str); 16] = [
    ("ff-splitting", "exact"),
    ("converse-vanishing", "exact / mod p^5"),
    ("character-sum-toolbox", "exact / mod p^M"),
    ("g-defined-over-q", "mod p^5"),
    ("g-splitting", "mod p^5"),
    ("g4-unit-argument-table", "integer"),
    ("g6-unit-argument-table", "integer"),
    ("g4-modular", "integer"),
    ("g6-modular", "integer"),
    ("g3-elliptic-family", "integer"),
    ("g6-two-curve", "integer"),
    ("g4-trace-frobenius", "integer"),
    ("g8-modular", "integer"),
    ("ff-reductions", "exact"),
    ("classical-series", "1e-25 / 1e-20"),
    ("property-suites", "exact"),
];

/// The weight-3 closed form cannot be calibrated at p = 5, so this criterion
/// fails as specified. Its eta-quotient realization is reported alongside.
const EXPECTED_FAILURES: [&str; 1] = ["g8-modular"];

#[test]
fn acceptance() {
    let workers = worker_count(std::env::var("HYPERSPLIT_WORKERS").ok().as_deref()).unwrap();
    let report = run_verification(&Config::all(SEED), workers).unwrap();
    assert_eq!(registry().len(), CRITERIA.len());

    let mut unexpected = Vec::new();
    for (i, (id, tol)) in CRITERIA.iter().enumerate() {
        let s = report.identity(id).unwrap_or_else(|| panic!("{id} missing from the report"));
        let status = if s.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {status} {id:<24} tol {tol:<16} gating {}/{} ({} errors), report-only {}",
            i + 1,
            s.passed,
            s.passed + s.failed,
            s.errors,
            s.report_only
        );
        for note in &s.notes {
            println!("             note: {note}");
        }
        if s.pass == EXPECTED_FAILURES.contains(id) {
            unexpected.push(*id);
        }
    }

    let g8: Vec<_> = report.cases.iter().filter(|c| c.identity == "g8-modular").collect();
    let eta_side: Vec<_> = g8.iter().filter(|c| !c.gating).collect();
    println!(
        "             g8-modular with c(p) from eta(2z)^4 eta(8z)^2: {}/{} pass; p = 3 (mod 4) cases: {}/{} pass",
        eta_side.iter().filter(|c| c.pass).count(),
        eta_side.len(),
        g8.iter().filter(|c| c.gating && c.q_or_p % 4 == 3 && c.pass).count(),
        g8.iter().filter(|c| c.gating && c.q_or_p % 4 == 3).count(),
    );
    assert!(unexpected.is_empty(), "unexpected outcome for {unexpected:?}");
    assert!(!eta_side.is_empty() && eta_side.iter().all(|c| c.pass));
    assert!(g8.iter().filter(|c| c.gating && c.q_or_p % 4 == 3).all(|c| c.pass));
    assert!(g8
        .iter()
        .filter(|c| c.gating && c.q_or_p % 4 == 1)
        .all(|c| c.error.as_deref().is_some_and(|e| e.contains("calibration"))));
}
