//! One line per acceptance criterion; exits nonzero if any criterion fails.
//! Runs without the libtest harness so the table is always printed.

use gwa_rep::suite::run_all;
use std::process::ExitCode;

fn main() -> ExitCode {
    let results = run_all();
    for r in &results {
        let budget = r.budget_ms.map(|b| format!(" / {b} ms")).unwrap_or_default();
        println!(
            "{} {:>2} {:<40} {:>6} ms{budget}  {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.id,
            r.name,
            r.elapsed_ms,
            r.detail
        );
    }
    let failed: Vec<u8> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    if failed.is_empty() {
        println!("acceptance: {} of {} criteria passed", results.len(), results.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
